//! Exhaustive zero-pattern enumeration over finite fields.
//!
//! A pattern is the set `{i : f_i(u) ≠ 0}` for a point `u ∈ GF(q)^m`, stored as
//! a bitmask with bit `i - 1` standing for `f_i`. Points are visited in odometer
//! order: point index `t = Σ u_j q^{m-j}`, so the last coordinate moves fastest.
//! The witness kept for each pattern is the least point in that order.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{Element, GfContext};
use crate::poly::PolySystem;

/// Default cap on `q^m` points per field.
pub const DEFAULT_EVAL_BUDGET: u64 = 100_000_000;

/// Widest supported system.
pub const MAX_POLYS: usize = 128;

/// One point realising a pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Order of the field the point lives in.
    pub q: usize,
    pub point: Vec<Element>,
}

/// Realisable sets found so far, each with one witness.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PatternSet {
    num_polys: usize,
    fields: Vec<usize>,
    entries: BTreeMap<u128, Witness>,
}

impl PatternSet {
    pub fn new(num_polys: usize) -> PatternSet {
        PatternSet {
            num_polys,
            fields: Vec::new(),
            entries: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn num_polys(&self) -> usize {
        self.num_polys
    }

    /// Orders of the fields searched, ascending. The union is only a lower
    /// approximation of the patterns realisable over all fields.
    pub fn fields(&self) -> &[usize] {
        &self.fields
    }

    pub fn contains(&self, pattern: u128) -> bool {
        self.entries.contains_key(&pattern)
    }

    /// `(pattern, witness)` in increasing pattern order.
    pub fn iter(&self) -> impl Iterator<Item = (u128, &Witness)> {
        self.entries.iter().map(|(p, w)| (*p, w))
    }

    pub fn patterns(&self) -> Vec<u128> {
        self.entries.keys().copied().collect()
    }

    /// Patterns as sorted lists of 1-indexed polynomial indices.
    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        self.entries.keys().map(|&p| pattern_indices(p)).collect()
    }

    /// Adds a pattern unless it is already present with an earlier witness.
    /// Witnesses compare by field order, then odometer position.
    pub fn insert(&mut self, pattern: u128, witness: Witness) {
        match self.entries.get(&pattern) {
            Some(old) if witness_key(old) <= witness_key(&witness) => {}
            _ => {
                self.entries.insert(pattern, witness);
            }
        }
    }

    /// Merges another set in, keeping the earlier witness for shared patterns.
    pub fn union_with(&mut self, other: PatternSet) {
        self.num_polys = self.num_polys.max(other.num_polys);
        for (p, w) in other.entries {
            self.insert(p, w);
        }
        self.fields.extend(other.fields);
        self.fields.sort_unstable();
        self.fields.dedup();
    }

    /// Re-evaluates every witness and checks it reproduces its pattern.
    pub fn verify(&self, sys: &PolySystem) -> Result<bool> {
        let mut ctxs: BTreeMap<usize, GfContext> = BTreeMap::new();
        for (&p, w) in &self.entries {
            let ctx = match ctxs.get(&w.q) {
                Some(c) => c.clone(),
                None => {
                    let c = GfContext::of_order(w.q as u64)?;
                    ctxs.insert(w.q, c.clone());
                    c
                }
            };
            let mut bits = 0u128;
            for (i, f) in sys.polys().iter().enumerate() {
                if f.eval_over(&ctx, &w.point)? != 0 {
                    bits |= 1 << i;
                }
            }
            if bits != p {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn witness_key(w: &Witness) -> (usize, &[Element]) {
    (w.q, &w.point)
}

/// 1-indexed members of a pattern mask.
pub fn pattern_indices(p: u128) -> Vec<usize> {
    (0..128).filter(|i| p >> i & 1 == 1).map(|i| i + 1).collect()
}

/// Number of points `q^m`, or `None` past `u128`.
fn point_count(q: usize, m: usize) -> Option<u128> {
    (q as u128).checked_pow(m as u32)
}

fn point_of(index: u64, q: usize, m: usize, out: &mut [Element]) {
    let mut t = index;
    for slot in out.iter_mut().rev() {
        *slot = (t % q as u64) as Element;
        t /= q as u64;
    }
    debug_assert!(m == out.len());
}

/// Visits all of `GF(q)^m` and records every pattern with its least witness.
pub fn enumerate_patterns(sys: &PolySystem, ctx: &GfContext, budget: u64) -> Result<PatternSet> {
    let q = ctx.order();
    let m = sys.num_vars();
    if sys.len() > MAX_POLYS {
        return Err(Error::InvalidInput(format!(
            "{} polynomials exceed the supported {MAX_POLYS}",
            sys.len()
        )));
    }
    let total = match point_count(q, m) {
        Some(t) if t <= budget as u128 => t as u64,
        other => {
            let required = other.map_or_else(|| format!("{q}^{m} points"), |t| format!("{q}^{m} = {t} points"));
            return Err(Error::BudgetExceeded {
                what: format!("zero-pattern enumeration over GF({q})"),
                required,
                budget,
            });
        }
    };
    let compiled = sys.compile(ctx);
    let chunk = (total / 64).max(1 << 12);
    let starts: Vec<u64> = (0..total).step_by(chunk as usize).collect();
    let partial: Vec<BTreeMap<u128, u64>> = starts
        .par_iter()
        .map(|&start| {
            let end = (start + chunk).min(total);
            let mut seen: BTreeMap<u128, u64> = BTreeMap::new();
            let mut u = vec![0; m];
            for t in start..end {
                point_of(t, q, m, &mut u);
                seen.entry(compiled.pattern(&u)).or_insert(t);
            }
            seen
        })
        .collect();
    let mut first: BTreeMap<u128, u64> = BTreeMap::new();
    for part in partial {
        for (p, t) in part {
            let slot = first.entry(p).or_insert(t);
            *slot = (*slot).min(t);
        }
    }
    let mut out = PatternSet::new(sys.len());
    out.fields.push(q);
    for (p, t) in first {
        let mut point = vec![0; m];
        point_of(t, q, m, &mut point);
        debug_assert_eq!(compiled.pattern(&point), p);
        out.entries.insert(p, Witness { q, point });
    }
    Ok(out)
}

/// Union of [`enumerate_patterns`] over several fields.
pub fn patterns_across_fields(sys: &PolySystem, fields: &[GfContext], budget: u64) -> Result<PatternSet> {
    let mut out = PatternSet::new(sys.len());
    for ctx in fields {
        out.union_with(enumerate_patterns(sys, ctx, budget)?);
    }
    Ok(out)
}
