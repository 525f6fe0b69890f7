//! Isomorph-free matroid censuses and the random-nonbasis experiment.
//!
//! Generation walks the `r`-subsets of `[n]` in colex order and decides each
//! one as basis or nonbasis. Every instance of the exchange axiom is a clause
//! "X and Y bases ⇒ some X+e−f is a basis"; a branch dies as soon as one clause
//! has both premises decided true and every candidate decided false, so leaves
//! are exactly the labeled matroids. A leaf is kept when it is its own canonical
//! form, which picks one representative per isomorphism class.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::d_of_n;
use crate::error::{invalid, Error, Result};
use crate::gf::GfContext;
use crate::matroid::{check_exchange, k_subsets, CanonicalKey, Matroid, Permutation, SubsetMask, CANONICAL_MAX_N};
use crate::represent::{representable_over_any, RepStatus, SearchOptions, Verdict};

/// Default ceiling on `n` for [`enumerate_matroids`].
pub const DEFAULT_ENUM_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CensusMode {
    /// One canonical representative per isomorphism class.
    Unlabeled,
    /// Every matroid on `[n]`.
    Labeled,
}

impl CensusMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CensusMode::Unlabeled => "unlabeled",
            CensusMode::Labeled => "labeled",
        }
    }
}

/// All matroids of one `(n, r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub n: usize,
    pub r: usize,
    pub mode: CensusMode,
    /// Unlabeled: canonical forms sorted by key. Labeled: every matroid,
    /// sorted by (key, basis list).
    pub items: Vec<Matroid>,
    /// Number of labeled matroids represented.
    pub labeled_count: BigUint,
}

impl Census {
    pub fn empty(n: usize, r: usize, mode: CensusMode) -> Census {
        Census {
            n,
            r,
            mode,
            items: Vec::new(),
            labeled_count: BigUint::zero(),
        }
    }

    /// Expands an unlabeled census into every labeled matroid.
    pub fn to_labeled(&self) -> Result<Census> {
        if self.mode == CensusMode::Labeled {
            return Ok(self.clone());
        }
        let perms = Permutation::all(self.n);
        let mut items: Vec<(CanonicalKey, Matroid)> = Vec::new();
        for m in &self.items {
            let key = m.canonical_key()?;
            let mut images: Vec<Matroid> = perms
                .iter()
                .map(|p| m.apply_permutation(p))
                .collect::<Result<_>>()?;
            images.sort();
            images.dedup();
            items.extend(images.into_iter().map(|im| (key.clone(), im)));
        }
        items.sort();
        let labeled_count = BigUint::from(items.len());
        Ok(Census {
            n: self.n,
            r: self.r,
            mode: CensusMode::Labeled,
            items: items.into_iter().map(|(_, m)| m).collect(),
            labeled_count,
        })
    }

    /// Folds a labeled census back to canonical representatives.
    pub fn to_unlabeled(&self) -> Result<Census> {
        if self.mode == CensusMode::Unlabeled {
            return Ok(self.clone());
        }
        let mut classes: BTreeMap<CanonicalKey, Matroid> = BTreeMap::new();
        for m in &self.items {
            let cf = m.canonical_form()?;
            classes.entry(cf.key).or_insert(cf.matroid);
        }
        let items: Vec<Matroid> = classes.into_values().collect();
        let labeled_count = labeled_total(&items)?;
        Ok(Census {
            n: self.n,
            r: self.r,
            mode: CensusMode::Unlabeled,
            items,
            labeled_count,
        })
    }

    /// Labeled matroids each item stands for: `n!/|Aut|` or 1.
    pub fn weight(&self, m: &Matroid) -> Result<BigUint> {
        Ok(match self.mode {
            CensusMode::Labeled => BigUint::from(1u32),
            CensusMode::Unlabeled => factorial(self.n) / m.canonical_form()?.automorphisms,
        })
    }
}

pub(crate) fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, i| acc * i)
}

pub(crate) fn labeled_total(items: &[Matroid]) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for m in items {
        total += factorial(m.n()) / m.canonical_form()?.automorphisms;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    pub max_n: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { max_n: DEFAULT_ENUM_CAP }
    }
}

/// An exchange clause: if sets `x` and `y` are bases, one set in the bitmask
/// `cands` is.
struct Clause {
    x: usize,
    y: usize,
    cands: u128,
}

struct Problem {
    sets: Vec<SubsetMask>,
    clauses: Vec<Clause>,
    on_basis: Vec<Vec<usize>>,
    on_nonbasis: Vec<Vec<usize>>,
}

impl Problem {
    fn new(n: usize, r: usize) -> Problem {
        let sets = k_subsets(n, r);
        let mut index = vec![usize::MAX; 1 << n];
        for (i, s) in sets.iter().enumerate() {
            index[s.0 as usize] = i;
        }
        let mut clauses = Vec::new();
        for (xi, &x) in sets.iter().enumerate() {
            for (yi, &y) in sets.iter().enumerate() {
                if xi == yi {
                    continue;
                }
                let inside = x.difference(y);
                for e in y.difference(x).iter_bits() {
                    let cands = inside
                        .iter_bits()
                        .map(|f| 1u128 << index[x.with_bit(e).without_bit(f).0 as usize])
                        .fold(0, |acc, b| acc | b);
                    clauses.push(Clause { x: xi, y: yi, cands });
                }
            }
        }
        // The walk decides sets in index order, so a clause can only become
        // violated when its highest-indexed set is decided.
        let mut on_basis = vec![Vec::new(); sets.len()];
        let mut on_nonbasis = vec![Vec::new(); sets.len()];
        for (ci, c) in clauses.iter().enumerate() {
            let top = c.x.max(c.y).max(127 - c.cands.leading_zeros() as usize);
            if top == c.x || top == c.y {
                on_basis[top].push(ci);
            } else {
                on_nonbasis[top].push(ci);
            }
        }
        Problem {
            sets,
            clauses,
            on_basis,
            on_nonbasis,
        }
    }
}

struct Walker<'a> {
    p: &'a Problem,
    n: usize,
    r: usize,
    /// Sets decided as bases.
    basis: u128,
    /// Sets decided as nonbases.
    non: u128,
    found: Vec<Matroid>,
    leaves: u64,
}

impl Walker<'_> {
    fn new(p: &Problem, n: usize, r: usize) -> Walker<'_> {
        Walker {
            p,
            n,
            r,
            basis: 0,
            non: 0,
            found: Vec::new(),
            leaves: 0,
        }
    }

    fn falsified(&self, c: &Clause) -> bool {
        self.basis >> c.x & 1 == 1 && self.basis >> c.y & 1 == 1 && c.cands & !self.non == 0
    }

    fn consistent_after(&self, t: usize, as_basis: bool) -> bool {
        let list = if as_basis {
            &self.p.on_basis[t]
        } else {
            &self.p.on_nonbasis[t]
        };
        list.iter().all(|&ci| !self.falsified(&self.p.clauses[ci]))
    }

    /// Tries both decisions for set `t`, calling `next` on each consistent one.
    fn branch(&mut self, t: usize, mut next: impl FnMut(&mut Self) -> Result<()>) -> Result<()> {
        let bit = 1u128 << t;
        self.basis |= bit;
        if self.consistent_after(t, true) {
            next(self)?;
        }
        self.basis &= !bit;
        self.non |= bit;
        if self.consistent_after(t, false) {
            next(self)?;
        }
        self.non &= !bit;
        Ok(())
    }

    fn walk(&mut self, t: usize) -> Result<()> {
        if t == self.p.sets.len() {
            return self.leaf();
        }
        self.branch(t, |w| w.walk(t + 1))
    }

    fn leaf(&mut self) -> Result<()> {
        let bases: Vec<SubsetMask> = self
            .p
            .sets
            .iter()
            .enumerate()
            .filter(|(i, _)| self.basis >> i & 1 == 1)
            .map(|(_, m)| *m)
            .collect();
        if bases.is_empty() {
            return Ok(());
        }
        self.leaves += 1;
        let m = Matroid::from_sorted_unchecked(self.n, self.r, bases);
        if m.is_canonical()? {
            self.found.push(m);
        }
        Ok(())
    }

    /// Consistent decisions `(basis, non)` for the first `depth` sets.
    fn prefixes(&mut self, t: usize, depth: usize, out: &mut Vec<(u128, u128)>) {
        if t == depth {
            out.push((self.basis, self.non));
            return;
        }
        let _ = self.branch(t, |w| {
            w.prefixes(t + 1, depth, out);
            Ok(())
        });
    }
}

/// Every matroid of rank `r` on `[n]` up to isomorphism.
///
/// Output is independent of the rayon pool size: partial results are merged
/// by canonical key.
pub fn enumerate_matroids(n: usize, r: usize, opts: EnumOptions) -> Result<Census> {
    if r > n {
        return Err(invalid(format!("rank {r} exceeds n = {n}")));
    }
    let cap = opts.max_n.min(CANONICAL_MAX_N);
    if n > cap {
        let sets = k_subsets(n.min(16), r.min(n.min(16))).len();
        return Err(Error::BudgetExceeded {
            what: "census size cap on n".to_string(),
            required: format!("n = {n} (a search over up to 2^{sets} basis families at r = {r})"),
            budget: cap as u64,
        });
    }
    let problem = Problem::new(n, r);
    let depth = problem.sets.len().min(10);
    let mut prefixes = Vec::new();
    Walker::new(&problem, n, r).prefixes(0, depth, &mut prefixes);

    let parts: Vec<Result<(Vec<Matroid>, u64)>> = prefixes
        .par_iter()
        .map(|&(basis, non)| {
            let mut w = Walker::new(&problem, n, r);
            w.basis = basis;
            w.non = non;
            w.walk(depth)?;
            Ok((w.found, w.leaves))
        })
        .collect();

    let mut merged: BTreeMap<CanonicalKey, Matroid> = BTreeMap::new();
    let mut leaves = 0u64;
    for part in parts {
        let (found, count) = part?;
        leaves += count;
        for m in found {
            let key = m.canonical_key()?;
            if merged.insert(key, m).is_some() {
                return Err(Error::Internal("canonical form reached twice".into()));
            }
        }
    }
    let items: Vec<Matroid> = merged.into_values().collect();
    // Each class contributes n!/|Aut| labeled leaves.
    let labeled_count = BigUint::from(leaves);
    if labeled_total(&items)? != labeled_count {
        return Err(Error::Internal(format!(
            "orbit sizes do not add up to the {leaves} labeled matroids found"
        )));
    }
    Ok(Census {
        n,
        r,
        mode: CensusMode::Unlabeled,
        items,
        labeled_count,
    })
}

/// Verdict for one census item.
#[derive(Clone, Debug)]
pub struct ItemVerdict {
    pub matroid: Matroid,
    pub verdict: Verdict,
    /// `(q, status)` per tested field, ascending `q`.
    pub per_field: Vec<(usize, RepStatus)>,
    pub nodes: u64,
    /// Labeled matroids this item stands for.
    pub weight: BigUint,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HistogramRow {
    pub items: u64,
    pub representable: u64,
}

/// Aggregated representability over one or more censuses.
#[derive(Clone, Debug, Default)]
pub struct CensusReport {
    pub items: Vec<ItemVerdict>,
    pub unlabeled_total: u64,
    pub unlabeled_representable: u64,
    pub labeled_total: BigUint,
    pub labeled_representable: BigUint,
    pub inconclusive: u64,
    pub not_over_tested_fields: u64,
    /// Representable items per rank.
    pub rank_distribution: BTreeMap<usize, HistogramRow>,
    /// Items grouped by number of nonbases.
    pub nonbasis_histogram: BTreeMap<usize, HistogramRow>,
}

impl CensusReport {
    pub fn unlabeled_fraction(&self) -> Option<f64> {
        (self.unlabeled_total > 0).then(|| self.unlabeled_representable as f64 / self.unlabeled_total as f64)
    }

    pub fn labeled_fraction(&self) -> Option<f64> {
        let total = self.labeled_total.to_f64()?;
        (total > 0.0).then(|| self.labeled_representable.to_f64().unwrap_or(f64::NAN) / total)
    }
}

/// Runs [`representable_over_any`] on every item and aggregates.
pub fn census_representability(
    censuses: &[Census],
    fields: &[GfContext],
    opts: SearchOptions,
) -> Result<CensusReport> {
    let work: Vec<(&Census, &Matroid)> = censuses
        .iter()
        .flat_map(|c| c.items.iter().map(move |m| (c, m)))
        .collect();
    let verdicts: Vec<Result<ItemVerdict>> = work
        .par_iter()
        .map(|&(c, m)| {
            let s = representable_over_any(m, fields, opts)?;
            Ok(ItemVerdict {
                matroid: m.clone(),
                verdict: s.verdict,
                per_field: s.per_field.iter().map(|f| (f.q, f.result.status)).collect(),
                nodes: s.total_nodes(),
                weight: c.weight(m)?,
            })
        })
        .collect();
    let mut report = CensusReport::default();
    for v in verdicts {
        let v = v?;
        let rep = v.verdict == Verdict::Representable;
        report.unlabeled_total += 1;
        report.labeled_total += &v.weight;
        if rep {
            report.unlabeled_representable += 1;
            report.labeled_representable += &v.weight;
        }
        match v.verdict {
            Verdict::Inconclusive | Verdict::NoFieldsTested => report.inconclusive += 1,
            Verdict::NotOverTestedFields => report.not_over_tested_fields += 1,
            Verdict::Representable => {}
        }
        let rank_row = report.rank_distribution.entry(v.matroid.rank()).or_default();
        rank_row.items += 1;
        rank_row.representable += u64::from(rep);
        let nb = v.matroid.nonbases().len();
        let row = report.nonbasis_histogram.entry(nb).or_default();
        row.items += 1;
        row.representable += u64::from(rep);
        report.items.push(v);
    }
    Ok(report)
}

/// One draw of the random-nonbasis experiment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleTrial {
    pub nonbases: Vec<SubsetMask>,
    pub is_matroid: bool,
    pub verdict: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleReport {
    pub n: usize,
    pub r: usize,
    pub seed: u64,
    /// `d(n) - 1`.
    pub nonbasis_count: usize,
    pub trials: Vec<SampleTrial>,
    pub matroids: u64,
    pub representable: u64,
}

impl SampleReport {
    pub fn matroid_rate(&self) -> Option<f64> {
        (!self.trials.is_empty()).then(|| self.matroids as f64 / self.trials.len() as f64)
    }

    pub fn representable_rate(&self) -> Option<f64> {
        (self.matroids > 0).then(|| self.representable as f64 / self.matroids as f64)
    }
}

/// Draws uniform `(d(n) − 1)`-subsets of `C([n], r)` as nonbasis candidates and
/// tests each complement for being a (representable) matroid.
pub fn sample_nonbasis_candidates(
    n: usize,
    r: usize,
    trials: usize,
    seed: u64,
    fields: &[GfContext],
    opts: SearchOptions,
) -> Result<SampleReport> {
    if r != n / 2 && r != n.div_ceil(2) {
        return Err(invalid(format!("rank {r} is not floor(n/2) or ceil(n/2) for n = {n}")));
    }
    let d = d_of_n(n as u64)?;
    let sets = k_subsets(n, r);
    if d == 0 || d as usize - 1 > sets.len() {
        return Err(invalid(format!("d({n}) - 1 is not a valid nonbasis count for C({n},{r})")));
    }
    let count = d as usize - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<Vec<usize>> = (0..trials)
        .map(|_| {
            let mut pick = index::sample(&mut rng, sets.len(), count).into_vec();
            pick.sort_unstable();
            pick
        })
        .collect();
    let results: Vec<Result<SampleTrial>> = draws
        .par_iter()
        .map(|pick| {
            let nonbases: Vec<SubsetMask> = pick.iter().map(|&i| sets[i]).collect();
            let family: Vec<SubsetMask> = sets
                .iter()
                .enumerate()
                .filter(|(i, _)| pick.binary_search(i).is_err())
                .map(|(_, s)| *s)
                .collect();
            let is_matroid = check_exchange(n, &family)?;
            let verdict = if is_matroid {
                let m = Matroid::from_sorted_unchecked(n, r, family);
                Some(representable_over_any(&m, fields, opts)?.verdict)
            } else {
                None
            };
            Ok(SampleTrial {
                nonbases,
                is_matroid,
                verdict,
            })
        })
        .collect();
    let trials: Vec<SampleTrial> = results.into_iter().collect::<Result<_>>()?;
    let matroids = trials.iter().filter(|t| t.is_matroid).count() as u64;
    let representable = trials
        .iter()
        .filter(|t| t.verdict == Some(Verdict::Representable))
        .count() as u64;
    Ok(SampleReport {
        n,
        r,
        seed,
        nonbasis_count: count,
        trials,
        matroids,
        representable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All equicardinal families on `[n]`, filtered by the exchange check.
    fn brute_force_labeled(n: usize) -> u64 {
        let mut total = 0;
        for r in 0..=n {
            let sets = k_subsets(n, r);
            for sel in 1u64..(1u64 << sets.len()) {
                let fam: Vec<SubsetMask> = (0..sets.len())
                    .filter(|i| sel >> i & 1 == 1)
                    .map(|i| sets[i])
                    .collect();
                if check_exchange(n, &fam).unwrap() {
                    total += 1;
                }
            }
        }
        total
    }

    fn labeled_sum(n: usize) -> BigUint {
        (0..=n)
            .map(|r| enumerate_matroids(n, r, EnumOptions::default()).unwrap().labeled_count)
            .sum()
    }

    #[test]
    fn tiny_censuses() {
        let sizes: Vec<usize> = (0..=2)
            .map(|r| enumerate_matroids(2, r, EnumOptions::default()).unwrap().items.len())
            .collect();
        assert_eq!(sizes, vec![1, 2, 1]);
        assert_eq!(labeled_sum(2), BigUint::from(5u32));
        let by_rank: Vec<BigUint> = (0..=3)
            .map(|r| enumerate_matroids(3, r, EnumOptions::default()).unwrap().labeled_count)
            .collect();
        assert_eq!(by_rank, [1u32, 7, 7, 1].map(BigUint::from).to_vec());
        assert_eq!(brute_force_labeled(2), 5);
        assert_eq!(brute_force_labeled(3), 16);
    }

    #[test]
    fn u24_appears_once() {
        let c = enumerate_matroids(4, 2, EnumOptions::default()).unwrap();
        let key = Matroid::uniform(2, 4).unwrap().canonical_key().unwrap();
        let hits = c
            .items
            .iter()
            .filter(|m| m.canonical_key().unwrap() == key)
            .count();
        assert_eq!(hits, 1);
    }

    #[test]
    fn census_items_are_canonical_and_sorted() {
        let c = enumerate_matroids(5, 2, EnumOptions::default()).unwrap();
        let keys: Vec<CanonicalKey> = c.items.iter().map(|m| m.canonical_key().unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        for m in &c.items {
            assert!(m.is_canonical().unwrap());
            assert!(check_exchange(5, m.bases()).unwrap());
        }
        assert_eq!(labeled_total(&c.items).unwrap(), c.labeled_count);
    }

    #[test]
    fn labeled_round_trip() {
        let c = enumerate_matroids(4, 2, EnumOptions::default()).unwrap();
        let l = c.to_labeled().unwrap();
        assert_eq!(BigUint::from(l.items.len()), c.labeled_count);
        assert_eq!(l.to_unlabeled().unwrap(), c);
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_matroids(6, 3, EnumOptions { max_n: 5 }).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        assert!(enumerate_matroids(10, 3, EnumOptions { max_n: 12 }).is_err());
    }

    #[test]
    fn empty_census_gives_empty_report() {
        let r = census_representability(&[], &[GfContext::of_order(2).unwrap()], SearchOptions::default())
            .unwrap();
        assert_eq!(r.unlabeled_total, 0);
        assert!(r.items.is_empty());
        assert_eq!(r.unlabeled_fraction(), None);
    }

    #[test]
    fn sampling_setup_and_determinism() {
        let fields = [GfContext::of_order(2).unwrap(), GfContext::of_order(3).unwrap()];
        let a = sample_nonbasis_candidates(6, 3, 20, 42, &fields, SearchOptions::default()).unwrap();
        assert_eq!(a.nonbasis_count, 3);
        assert!(a.trials.iter().all(|t| t.nonbases.len() == 3));
        let b = sample_nonbasis_candidates(6, 3, 20, 42, &fields, SearchOptions::default()).unwrap();
        assert_eq!(a, b);
        let empty = sample_nonbasis_candidates(6, 3, 0, 1, &fields, SearchOptions::default()).unwrap();
        assert!(empty.trials.is_empty());
        assert_eq!(empty.matroid_rate(), None);
        assert!(sample_nonbasis_candidates(6, 2, 1, 1, &fields, SearchOptions::default()).is_err());
    }
}
