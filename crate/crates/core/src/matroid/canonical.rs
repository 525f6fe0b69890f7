//! Canonical forms for isomorph rejection.
//!
//! Elements are split into an ordered partition by iterated refinement of
//! basis-degree and pair-count invariants. While some cell has several members,
//! each member in turn is placed first in its own cell and the partition is
//! refined again. Every branch ends in a total order of the elements, and the
//! canonical form is the least sorted basis list among those orders. All steps
//! commute with relabeling, so isomorphic matroids produce the same set of
//! candidate lists and the same minimum.

use super::{Matroid, Permutation, SubsetMask};
use crate::error::{invalid, Result};

/// Largest ground set accepted by [`Matroid::canonical_form`].
pub const CANONICAL_MAX_N: usize = 9;

/// Byte string identifying an isomorphism class.
///
/// Layout: `n`, `r`, the basis count as big-endian `u32`, then each basis mask
/// of the canonical form as big-endian `u32` in increasing order. Byte order
/// agrees with comparing the canonical basis lists.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(pub Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    fn of(m: &Matroid) -> CanonicalKey {
        let mut bytes = Vec::with_capacity(6 + 4 * m.bases.len());
        bytes.push(m.n as u8);
        bytes.push(m.rank as u8);
        bytes.extend_from_slice(&(m.bases.len() as u32).to_be_bytes());
        for b in &m.bases {
            bytes.extend_from_slice(&b.0.to_be_bytes());
        }
        CanonicalKey(bytes)
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// The canonical representative.
    pub matroid: Matroid,
    pub key: CanonicalKey,
    /// Order of the automorphism group.
    pub automorphisms: u64,
    /// A relabeling taking the input onto `matroid`.
    pub relabeling: Permutation,
}

type Table = [[u32; CANONICAL_MAX_N]; CANONICAL_MAX_N];

/// Basis degree of each element and co-occurrence counts of each pair.
fn degree_tables(m: &Matroid) -> (Vec<u32>, Table) {
    let n = m.n;
    let mut deg = vec![0u32; n];
    let mut pair = [[0u32; CANONICAL_MAX_N]; CANONICAL_MAX_N];
    let mut elems = Vec::with_capacity(n);
    for b in &m.bases {
        elems.clear();
        elems.extend(b.iter_bits().map(|x| x as usize));
        for (i, &x) in elems.iter().enumerate() {
            deg[x] += 1;
            for &y in &elems[i + 1..] {
                pair[x][y] += 1;
                pair[y][x] += 1;
            }
        }
    }
    (deg, pair)
}

/// Refines an ordered coloring until the pair-count signature is stable.
fn refine(color: &mut [usize], pair: &Table) {
    let n = color.len();
    let mut classes = count_distinct(color);
    let mut sigs = [[0u64; CANONICAL_MAX_N + 1]; CANONICAL_MAX_N];
    while classes < n {
        for e in 0..n {
            let sig = &mut sigs[e];
            sig[0] = color[e] as u64;
            for (slot, f) in sig[1..].iter_mut().zip((0..n).filter(|&f| f != e)) {
                *slot = (color[f] as u64) << 32 | u64::from(pair[e][f]);
            }
            sig[1..n].sort_unstable();
        }
        let mut order = [0usize; CANONICAL_MAX_N];
        for (i, o) in order.iter_mut().enumerate().take(n) {
            *o = i;
        }
        order[..n].sort_unstable_by(|&x, &y| sigs[x].cmp(&sigs[y]));
        let mut rank = 0;
        for i in 0..n {
            if i > 0 && sigs[order[i]] != sigs[order[i - 1]] {
                rank += 1;
            }
            color[order[i]] = rank;
        }
        let next = rank + 1;
        if next == classes {
            break;
        }
        classes = next;
    }
}

fn rank_values<T: Ord + Clone>(values: &[T]) -> Vec<usize> {
    let mut uniq: Vec<T> = values.to_vec();
    uniq.sort();
    uniq.dedup();
    values
        .iter()
        .map(|v| uniq.binary_search(v).unwrap())
        .collect()
}

fn count_distinct(colors: &[usize]) -> usize {
    let mut seen = 0u64;
    for &c in colors {
        seen |= 1 << c;
    }
    seen.count_ones() as usize
}

/// Whether `m` equals its canonical form, stopping at the first relabeling
/// that beats it. Refined colors of a canonical form never decrease along the
/// ground set, which rejects most inputs before any search.
pub(super) fn is_canonical(m: &Matroid) -> Result<bool> {
    check_size(m)?;
    let (deg, pair) = degree_tables(m);
    if deg.windows(2).any(|w| w[0] > w[1]) {
        return Ok(false);
    }
    let mut color = rank_values(&deg);
    refine(&mut color, &pair);
    if color.windows(2).any(|w| w[0] > w[1]) {
        return Ok(false);
    }
    let twins = twin_table(m, &color);
    let mut search = Search::new(m, pair, twins, Some(&m.bases));
    search.run(&color, 1);
    Ok(search.matched && !search.beaten)
}

fn check_size(m: &Matroid) -> Result<()> {
    if m.n > CANONICAL_MAX_N {
        return Err(invalid(format!(
            "canonical forms are limited to n <= {CANONICAL_MAX_N} (got n = {})",
            m.n
        )));
    }
    Ok(())
}

/// `twins[e][f]`: swapping `e` and `f` is an automorphism.
fn twin_table(m: &Matroid, color: &[usize]) -> Vec<Vec<bool>> {
    let n = m.n;
    let mut twins = vec![vec![false; n]; n];
    let mut image = Vec::with_capacity(m.bases.len());
    for e in 0..n {
        twins[e][e] = true;
        for f in e + 1..n {
            if color[e] != color[f] {
                continue;
            }
            image.clear();
            image.extend(m.bases.iter().map(|b| swap_bits(*b, e, f)));
            image.sort_unstable();
            if image == m.bases {
                twins[e][f] = true;
                twins[f][e] = true;
            }
        }
    }
    twins
}

fn swap_bits(b: SubsetMask, e: usize, f: usize) -> SubsetMask {
    if b.contains_bit(e as u32) == b.contains_bit(f as u32) {
        b
    } else {
        SubsetMask(b.0 ^ (1 << e) ^ (1 << f))
    }
}

struct Search<'a> {
    bases: &'a [SubsetMask],
    pair: Table,
    twins: Vec<Vec<bool>>,
    scratch: Vec<SubsetMask>,
    best: Vec<SubsetMask>,
    best_image: Vec<usize>,
    ties: u64,
    have_best: bool,
    /// When set, only look for a leaf below this list.
    bound: Option<&'a [SubsetMask]>,
    beaten: bool,
    matched: bool,
}

impl<'a> Search<'a> {
    fn new(
        m: &'a Matroid,
        pair: Table,
        twins: Vec<Vec<bool>>,
        bound: Option<&'a [SubsetMask]>,
    ) -> Search<'a> {
        Search {
            bases: &m.bases,
            pair,
            twins,
            scratch: Vec::with_capacity(m.bases.len()),
            best: Vec::with_capacity(m.bases.len()),
            best_image: Vec::new(),
            ties: 0,
            have_best: false,
            bound,
            beaten: false,
            matched: false,
        }
    }

    /// Individualizes each member of the first non-singleton cell in turn.
    /// Members related by a transposition automorphism give mirror-image
    /// subtrees, so only the first of each such class is explored and its
    /// leaves count once per class member.
    fn run(&mut self, color: &[usize], weight: u64) {
        let n = color.len();
        let mut sizes = vec![0usize; n];
        for &c in color {
            sizes[c] += 1;
        }
        let Some(target) = sizes.iter().position(|&s| s > 1) else {
            self.leaf(color, weight);
            return;
        };
        let cell: Vec<usize> = (0..n).filter(|&x| color[x] == target).collect();
        for (i, &e) in cell.iter().enumerate() {
            if self.beaten {
                return;
            }
            if cell[..i].iter().any(|&f| self.twins[e][f]) {
                continue;
            }
            let class = cell.iter().filter(|&&f| self.twins[e][f]).count() as u64;
            let split: Vec<usize> = (0..n)
                .map(|x| 2 * color[x] + usize::from(x != e))
                .collect();
            let mut next = rank_values(&split);
            refine(&mut next, &self.pair);
            self.run(&next, weight * class);
        }
    }

    fn leaf(&mut self, image: &[usize], weight: u64) {
        self.scratch.clear();
        for b in self.bases {
            let mut out = 0u32;
            for bit in b.iter_bits() {
                out |= 1 << image[bit as usize];
            }
            self.scratch.push(SubsetMask(out));
        }
        self.scratch.sort_unstable();
        if let Some(bound) = self.bound {
            match self.scratch.as_slice().cmp(bound) {
                std::cmp::Ordering::Less => self.beaten = true,
                std::cmp::Ordering::Equal => self.matched = true,
                std::cmp::Ordering::Greater => {}
            }
            return;
        }
        if !self.have_best || self.scratch < self.best {
            self.have_best = true;
            std::mem::swap(&mut self.best, &mut self.scratch);
            self.best_image.clear();
            self.best_image.extend_from_slice(image);
            self.ties = weight;
        } else if self.scratch == self.best {
            self.ties += weight;
        }
    }
}

pub(super) fn canonical_form(m: &Matroid) -> Result<CanonicalForm> {
    check_size(m)?;
    let n = m.n;
    let (deg, pair) = degree_tables(m);
    let mut color = rank_values(&deg);
    refine(&mut color, &pair);
    let twins = twin_table(m, &color);
    let mut search = Search::new(m, pair, twins, None);
    search.run(&color, 1);
    let relabeling = Permutation::new(search.best_image.iter().map(|&p| p + 1).collect())
        .expect("search produces a bijection");
    let matroid = Matroid::from_sorted_unchecked(n, m.rank, search.best);
    let key = CanonicalKey::of(&matroid);
    Ok(CanonicalForm {
        matroid,
        key,
        // Automorphisms permute the leaves of the full search tree freely, and
        // two leaves give the same relabeled family exactly when they differ
        // by an automorphism. Pruned twins are restored through the weights.
        automorphisms: search.ties,
        relabeling,
    })
}
