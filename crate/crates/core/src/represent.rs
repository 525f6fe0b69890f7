//! Representability over a finite field via the normal form `[u | I_r]`.
//!
//! After relabeling so that `{n-r+1, …, n}` is a basis, a representation can be
//! assumed to have the shape `[u | I_r]` with `u` an `r × (n-r)` block. The
//! column set `B` of `[u | I_r]` is nonsingular iff the minor of `u` on columns
//! `B ∩ [n-r]` and rows `{i : n-r+i ∉ B}` is nonzero, so the search fills `u`
//! entry by entry and checks each minor as soon as all of its entries are set.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::gf::{det_in_place, Element, GfContext, GfMatrix};
use crate::matroid::{k_subsets, Matroid, Permutation, SubsetMask};

/// Default node limit for one (matroid, field) search.
pub const DEFAULT_NODE_BUDGET: u64 = 200_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RepStatus {
    Found,
    NotRepresentable,
    BudgetExceeded,
}

impl RepStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RepStatus::Found => "found",
            RepStatus::NotRepresentable => "not-representable-over-this-field",
            RepStatus::BudgetExceeded => "budget-exceeded",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Entry assignments tried.
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct RepResult {
    pub status: RepStatus,
    /// The block `u`, present iff `status` is `Found`.
    pub witness: Option<GfMatrix>,
    pub stats: SearchStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Node limit; exceeding it yields `BudgetExceeded`.
    pub budget: u64,
    /// Also fix entries on a spanning forest of the support to 1, using row
    /// scalings in addition to column scalings.
    pub row_normalization: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_NODE_BUDGET,
            row_normalization: false,
        }
    }
}

fn last_block(n: usize, r: usize) -> SubsetMask {
    SubsetMask::full(n).difference(SubsetMask::full(n - r))
}

/// Relabels `m` so that `{n-r+1, …, n}` is a basis.
///
/// The least basis (in mask order) is sent onto the last `r` positions
/// preserving its internal order; the remaining elements fill `1..=n-r` in
/// increasing order.
pub fn normalize_to_last_basis(m: &Matroid) -> (Matroid, Permutation) {
    let n = m.n();
    let r = m.rank();
    let b0 = m.bases()[0];
    let mut images = vec![0; n];
    let mut next_free = 1;
    let mut next_basis = n - r + 1;
    for e in 1..=n {
        if b0.contains(e) {
            images[e - 1] = next_basis;
            next_basis += 1;
        } else {
            images[e - 1] = next_free;
            next_free += 1;
        }
    }
    let perm = Permutation::new(images).expect("constructed bijection");
    let normalized = m.apply_permutation(&perm).expect("same ground set");
    (normalized, perm)
}

/// Entry `(i, j)` (0-based) is true iff swapping the `i`-th identity element
/// for element `j + 1` gives a basis; these are exactly the nonzero entries of
/// `u` in any representation `[u | I_r]`.
pub fn fundamental_pattern(m: &Matroid) -> Result<Vec<Vec<bool>>> {
    let n = m.n();
    let r = m.rank();
    let c = n - r;
    let last = last_block(n, r);
    if !m.is_basis(last) {
        return Err(Error::Precondition(format!(
            "{last} is not a basis; normalize the matroid first"
        )));
    }
    Ok((0..r)
        .map(|i| {
            (0..c)
                .map(|j| m.is_basis(last.without_bit((c + i) as u32).with_bit(j as u32)))
                .collect()
        })
        .collect())
}

/// A minor check: rows and columns of `u` (bitmasks, 0-based) and whether the
/// minor must be nonzero.
#[derive(Clone, Copy, Debug)]
struct MinorCheck {
    rows: u32,
    cols: u32,
    size: usize,
    nonzero: bool,
}

struct Searcher<'a> {
    ctx: &'a GfContext,
    r: usize,
    c: usize,
    domains: Vec<Vec<Element>>,
    checks: Vec<Vec<MinorCheck>>,
    u: Vec<Element>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Searcher<'_> {
    /// Positions run column-major; position `p` is entry `(p % r, p / r)`.
    fn solve(&mut self, pos: usize) -> bool {
        if pos == self.r * self.c {
            return true;
        }
        let (i, j) = (pos % self.r, pos / self.r);
        for k in 0..self.domains[pos].len() {
            if self.nodes >= self.budget {
                self.exhausted = true;
                return false;
            }
            self.nodes += 1;
            self.u[i * self.c + j] = self.domains[pos][k];
            if self.consistent(pos) && self.solve(pos + 1) {
                return true;
            }
            if self.exhausted {
                return false;
            }
        }
        self.u[i * self.c + j] = 0;
        false
    }

    fn consistent(&self, pos: usize) -> bool {
        let mut buf = [0 as Element; 64];
        for chk in &self.checks[pos] {
            let s = chk.size;
            let mut t = 0;
            for row in bits(chk.rows) {
                for col in bits(chk.cols) {
                    buf[t] = self.u[row * self.c + col];
                    t += 1;
                }
            }
            let nz = det_in_place(self.ctx, &mut buf[..s * s], s) != 0;
            if nz != chk.nonzero {
                return false;
            }
        }
        true
    }
}

fn bits(mut x: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if x == 0 {
            None
        } else {
            let b = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(b)
        }
    })
}

fn high_bit(x: u32) -> usize {
    31 - x.leading_zeros() as usize
}

/// Backtracking search for `u` with `[u | I_r]` representing `m` over `ctx`.
///
/// `m` must already have `{n-r+1, …, n}` as a basis.
pub fn find_representation(m: &Matroid, ctx: &GfContext, opts: SearchOptions) -> Result<RepResult> {
    let start = Instant::now();
    let n = m.n();
    let r = m.rank();
    let c = n - r;
    let pattern = fundamental_pattern(m)?;
    if r.min(c) > 8 {
        return Err(Error::InvalidInput("minors larger than 8x8 are not supported".into()));
    }

    // fixed-to-one entries: a spanning forest of the support graph, grown in
    // column-major order; without row normalization only each column's first
    // nonzero entry is used
    let mut parent: Vec<usize> = (0..r + c).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let q = ctx.order() as Element;
    let mut domains = Vec::with_capacity(r * c);
    for j in 0..c {
        let mut first_in_column = true;
        for (i, row) in pattern.iter().enumerate() {
            if !row[j] {
                domains.push(vec![0]);
                continue;
            }
            let a = find(&mut parent, i);
            let b = find(&mut parent, r + j);
            let fixed = if opts.row_normalization {
                a != b
            } else {
                first_in_column
            };
            if a != b && fixed {
                parent[a] = b;
            }
            first_in_column = false;
            domains.push(if fixed { vec![1] } else { (1..q).collect() });
        }
    }

    let mut checks = vec![Vec::new(); r * c];
    for size in 2..=r.min(c) {
        for rows in k_subsets(r, size) {
            for cols in k_subsets(c, size) {
                let mut basis = cols.0;
                for i in 0..r {
                    if !rows.contains_bit(i as u32) {
                        basis |= 1 << (c + i);
                    }
                }
                let pos = high_bit(cols.0) * r + high_bit(rows.0);
                checks[pos].push(MinorCheck {
                    rows: rows.0,
                    cols: cols.0,
                    size,
                    nonzero: m.is_basis(SubsetMask(basis)),
                });
            }
        }
    }

    let mut s = Searcher {
        ctx,
        r,
        c,
        domains,
        checks,
        u: vec![0; r * c],
        nodes: 0,
        budget: opts.budget,
        exhausted: false,
    };
    let found = s.solve(0);
    let stats = SearchStats {
        nodes: s.nodes,
        elapsed: start.elapsed(),
    };
    let (status, witness) = if found {
        let w = GfMatrix::new(ctx, r, c, s.u)?;
        debug_assert!(verify_representation(m, &w)?);
        (RepStatus::Found, Some(w))
    } else if s.exhausted {
        (RepStatus::BudgetExceeded, None)
    } else {
        (RepStatus::NotRepresentable, None)
    };
    Ok(RepResult {
        status,
        witness,
        stats,
    })
}

/// Checks that the nonsingular `r`-column sets of `[u | I_r]` are exactly the
/// bases of `m`.
pub fn verify_representation(m: &Matroid, u: &GfMatrix) -> Result<bool> {
    let n = m.n();
    let r = m.rank();
    if u.rows() != r || u.cols() != n - r {
        return Err(Error::DimensionMismatch(format!(
            "block is {}x{}, expected {r}x{}",
            u.rows(),
            u.cols(),
            n - r
        )));
    }
    let full = u.hconcat(&GfMatrix::identity(u.ctx(), r))?;
    verify_matrix(m, &full)
}

/// Checks that the nonsingular `r`-column sets of an `r × n` matrix are
/// exactly the bases of `m`.
pub fn verify_matrix(m: &Matroid, a: &GfMatrix) -> Result<bool> {
    if a.rows() != m.rank() || a.cols() != m.n() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, expected {}x{}",
            a.rows(),
            a.cols(),
            m.rank(),
            m.n()
        )));
    }
    for b in k_subsets(m.n(), m.rank()) {
        if a.is_nonsingular_cols(b)? != m.is_basis(b) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    /// Some tested field carries a representation.
    Representable,
    /// Every tested field was refuted exhaustively.
    NotOverTestedFields,
    /// Some search hit its budget and none succeeded.
    Inconclusive,
    /// No fields were supplied.
    NoFieldsTested,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Representable => "representable",
            Verdict::NotOverTestedFields => "not-over-tested-fields",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NoFieldsTested => "inconclusive-no-fields",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FieldOutcome {
    pub q: usize,
    pub result: RepResult,
    /// `r × n` representation of the original (unnormalized) matroid.
    pub matrix: Option<GfMatrix>,
}

#[derive(Clone, Debug)]
pub struct RepSummary {
    pub verdict: Verdict,
    /// The relabeling used to reach the normal form.
    pub normalization: Permutation,
    /// One outcome per distinct field, sorted by field order.
    pub per_field: Vec<FieldOutcome>,
}

impl RepSummary {
    pub fn found_over(&self) -> Vec<usize> {
        self.per_field
            .iter()
            .filter(|f| f.result.status == RepStatus::Found)
            .map(|f| f.q)
            .collect()
    }

    pub fn total_nodes(&self) -> u64 {
        self.per_field.iter().map(|f| f.result.stats.nodes).sum()
    }
}

/// Runs the search over each field and combines the outcomes.
pub fn representable_over_any(m: &Matroid, fields: &[GfContext], opts: SearchOptions) -> Result<RepSummary> {
    let (normalized, perm) = normalize_to_last_basis(m);
    let mut fields: Vec<&GfContext> = fields.iter().collect();
    fields.sort_by_key(|f| f.order());
    fields.dedup_by_key(|f| f.order());
    let mut per_field = Vec::with_capacity(fields.len());
    for ctx in fields {
        let result = find_representation(&normalized, ctx, opts)?;
        let matrix = match &result.witness {
            Some(u) => Some(original_matrix(u, &perm)?),
            None => None,
        };
        per_field.push(FieldOutcome {
            q: ctx.order(),
            result,
            matrix,
        });
    }
    let verdict = if per_field.is_empty() {
        Verdict::NoFieldsTested
    } else if per_field.iter().any(|f| f.result.status == RepStatus::Found) {
        Verdict::Representable
    } else if per_field.iter().any(|f| f.result.status == RepStatus::BudgetExceeded) {
        Verdict::Inconclusive
    } else {
        Verdict::NotOverTestedFields
    };
    Ok(RepSummary {
        verdict,
        normalization: perm,
        per_field,
    })
}

/// Element `e` of the original matroid sits at column `perm(e)` of `[u | I_r]`.
fn original_matrix(u: &GfMatrix, perm: &Permutation) -> Result<GfMatrix> {
    let full = u.hconcat(&GfMatrix::identity(u.ctx(), u.rows()))?;
    let n = full.cols();
    let mut out = GfMatrix::zeros(u.ctx(), full.rows(), n);
    for e in 1..=n {
        let src = perm.image(e) - 1;
        for row in 0..full.rows() {
            out.set(row, e - 1, full.get(row, src));
        }
    }
    Ok(out)
}
