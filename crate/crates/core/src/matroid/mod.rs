//! Matroids given by their basis families.
//!
//! The ground set is always `[n] = {1, …, n}` and element `i` is carried by bit
//! `i - 1` of a [`SubsetMask`]. Basis lists are kept sorted by mask value, which
//! is the colex order on subsets.

mod canonical;
mod mask;

pub use canonical::{CanonicalForm, CanonicalKey, CANONICAL_MAX_N};
pub use mask::{k_subsets, Permutation, SubsetMask};

use crate::error::{invalid, Error, Result};

/// A matroid on `[n]` stored as a strictly increasing list of bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: Vec<SubsetMask>,
}

impl Matroid {
    /// Builds a matroid from a basis family, validating every invariant.
    pub fn new(n: usize, bases: impl IntoIterator<Item = SubsetMask>) -> Result<Self> {
        check_width(n)?;
        let mut bases: Vec<SubsetMask> = bases.into_iter().collect();
        if bases.is_empty() {
            return Err(invalid("a matroid needs at least one basis"));
        }
        for b in &bases {
            if !b.is_within(n) {
                return Err(invalid(format!("basis {b} is not a subset of [{n}]")));
            }
        }
        bases.sort_unstable();
        if bases.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("duplicate basis in family"));
        }
        let rank = bases[0].len();
        if bases.iter().any(|b| b.len() != rank) {
            return Err(invalid("bases do not all have the same size"));
        }
        if !exchange_holds_sorted(&bases) {
            return Err(invalid("family violates the basis exchange axiom"));
        }
        Ok(Matroid { n, rank, bases })
    }

    /// Builds a matroid from 1-indexed element lists, e.g. `&[&[1, 2], &[1, 3]]`.
    pub fn from_element_lists(n: usize, lists: &[&[usize]]) -> Result<Self> {
        let masks = lists
            .iter()
            .map(|l| SubsetMask::from_elements(l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Matroid::new(n, masks)
    }

    /// Caller guarantees `bases` is sorted, duplicate-free, equicardinal of size
    /// `rank`, within `[n]` and satisfies the exchange axiom.
    pub(crate) fn from_sorted_unchecked(n: usize, rank: usize, bases: Vec<SubsetMask>) -> Self {
        debug_assert!(bases.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(bases.iter().all(|b| b.len() == rank && b.is_within(n)));
        Matroid { n, rank, bases }
    }

    /// The uniform matroid `U_{r,n}`.
    pub fn uniform(rank: usize, n: usize) -> Result<Self> {
        check_width(n)?;
        if rank > n {
            return Err(invalid(format!("rank {rank} exceeds ground set size {n}")));
        }
        Ok(Matroid {
            n,
            rank,
            bases: k_subsets(n, rank),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[SubsetMask] {
        &self.bases
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn is_basis(&self, set: SubsetMask) -> bool {
        self.bases.binary_search(&set).is_ok()
    }

    /// All `r`-subsets of `[n]` that are not bases, in mask order.
    pub fn nonbases(&self) -> Vec<SubsetMask> {
        let mut out = Vec::new();
        let mut bases = self.bases.iter().peekable();
        for s in k_subsets(self.n, self.rank) {
            if bases.peek() == Some(&&s) {
                bases.next();
            } else {
                out.push(s);
            }
        }
        out
    }

    /// The dual matroid: bases are complements of bases.
    pub fn dual(&self) -> Matroid {
        let full = SubsetMask::full(self.n);
        let mut bases: Vec<SubsetMask> = self.bases.iter().map(|b| full.difference(*b)).collect();
        bases.sort_unstable();
        Matroid {
            n: self.n,
            rank: self.n - self.rank,
            bases,
        }
    }

    /// Relabels every basis elementwise by `perm`.
    pub fn apply_permutation(&self, perm: &Permutation) -> Result<Matroid> {
        if perm.len() != self.n {
            return Err(invalid(format!(
                "permutation acts on [{}] but the matroid lives on [{}]",
                perm.len(),
                self.n
            )));
        }
        let mut bases: Vec<SubsetMask> = self.bases.iter().map(|b| perm.apply(*b)).collect();
        bases.sort_unstable();
        Ok(Matroid {
            n: self.n,
            rank: self.rank,
            bases,
        })
    }

    /// Elements contained in no basis.
    pub fn loops(&self) -> SubsetMask {
        let union = self
            .bases
            .iter()
            .fold(SubsetMask::EMPTY, |acc, b| acc.union(*b));
        SubsetMask::full(self.n).difference(union)
    }

    pub fn canonical_key(&self) -> Result<CanonicalKey> {
        Ok(self.canonical_form()?.key)
    }

    /// Canonical relabeling together with the automorphism group order.
    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        canonical::canonical_form(self)
    }

    pub fn is_canonical(&self) -> Result<bool> {
        canonical::is_canonical(self)
    }
}

fn check_width(n: usize) -> Result<()> {
    if n > SubsetMask::WIDTH {
        Err(Error::WidthOverflow {
            n,
            width: SubsetMask::WIDTH,
        })
    } else {
        Ok(())
    }
}

/// Decides whether `family` is the basis family of a matroid on `[n]`.
///
/// Duplicates in `family` are ignored; the family is treated as a set.
pub fn check_exchange(n: usize, family: &[SubsetMask]) -> Result<bool> {
    check_width(n)?;
    if let Some(b) = family.iter().find(|b| !b.is_within(n)) {
        return Err(invalid(format!("set {b} is not a subset of [{n}]")));
    }
    let mut sorted = family.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() {
        return Ok(false);
    }
    let r = sorted[0].len();
    if sorted.iter().any(|b| b.len() != r) {
        return Ok(false);
    }
    Ok(exchange_holds_sorted(&sorted))
}

/// Exchange axiom on a sorted equicardinal family.
pub(crate) fn exchange_holds_sorted(family: &[SubsetMask]) -> bool {
    let contains = |s: SubsetMask| family.binary_search(&s).is_ok();
    for &b in family {
        for &b2 in family {
            let outside = b2.difference(b);
            if outside.is_empty() {
                continue;
            }
            let inside = b.difference(b2);
            for e in outside.iter_bits() {
                let ok = inside
                    .iter_bits()
                    .any(|f| contains(b.with_bit(e).without_bit(f)));
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}
