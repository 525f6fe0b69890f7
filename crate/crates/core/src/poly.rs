//! Sparse multivariate polynomials with exact integer coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};
use crate::gf::{Element, GfContext};
use crate::matroid::{k_subsets, Permutation};

/// Exponent vector, one entry per variable.
pub type Exponents = Vec<u32>;

/// A polynomial in `Z[x_1, …, x_m]`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    m: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl IntPoly {
    pub fn zero(m: usize) -> IntPoly {
        IntPoly {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(m: usize, c: impl Into<BigInt>) -> IntPoly {
        IntPoly::monomial(m, c, vec![0; m]).expect("zero exponents have length m")
    }

    /// The variable `x_i` (1-indexed).
    pub fn var(m: usize, i: usize) -> Result<IntPoly> {
        if i == 0 || i > m {
            return Err(invalid(format!("variable x{i} outside x1..x{m}")));
        }
        let mut e = vec![0; m];
        e[i - 1] = 1;
        IntPoly::monomial(m, 1, e)
    }

    pub fn monomial(m: usize, c: impl Into<BigInt>, exps: Exponents) -> Result<IntPoly> {
        if exps.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "exponent vector of length {} in {m} variables",
                exps.len()
            )));
        }
        let mut p = IntPoly::zero(m);
        p.add_term(exps, c.into());
        Ok(p)
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, merging repeats.
    pub fn from_terms(m: usize, terms: impl IntoIterator<Item = (BigInt, Exponents)>) -> Result<IntPoly> {
        let mut p = IntPoly::zero(m);
        for (c, e) in terms {
            if e.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector of length {} in {m} variables",
                    e.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest absolute value of a coefficient; zero for the zero polynomial.
    pub fn norm(&self) -> BigUint {
        self.terms
            .values()
            .map(|c| c.abs().to_biguint().unwrap())
            .max()
            .unwrap_or_default()
    }

    /// Largest total degree of a term; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    fn check_same_ring(&self, other: &IntPoly) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch(format!(
                "polynomials in {} and {} variables",
                self.m, other.m
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &IntPoly) -> Result<IntPoly> {
        self.check_same_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            m: self.m,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &IntPoly) -> Result<IntPoly> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> Result<IntPoly> {
        self.check_same_ring(other)?;
        let mut out = IntPoly::zero(self.m);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// Evaluates the coefficient-wise image of `self` in `F[x]` at `u`.
    pub fn eval_over(&self, ctx: &GfContext, u: &[Element]) -> Result<Element> {
        if u.len() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for a polynomial in {} variables",
                u.len(),
                self.m
            )));
        }
        if let Some(&bad) = u.iter().find(|&&x| x as usize >= ctx.order()) {
            return Err(invalid(format!("{bad} is not an element of {ctx}")));
        }
        let mut acc = 0;
        for (e, c) in &self.terms {
            let mut t = ctx.bigint_to_field(c);
            for (x, &k) in u.iter().zip(e) {
                if k > 0 {
                    t = ctx.mul(t, ctx.pow(*x, k as u64));
                }
            }
            acc = ctx.add(acc, t);
        }
        Ok(acc)
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prints in the polynomial-file grammar, e.g. `3*x1^2*x2 - 5`.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest degree first reads more naturally
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let mag = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| {
                    if k == 1 {
                        format!("x{}", v + 1)
                    } else {
                        format!("x{}^{k}", v + 1)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `C(deg f + deg g, deg f) · ‖f‖ · ‖g‖`, an upper bound on `‖f g‖`.
pub fn mul_norm_bound(f: &IntPoly, g: &IntPoly) -> BigUint {
    let df = f.degree() as u64;
    let dg = g.degree() as u64;
    binomial(df + dg, df) * f.norm() * g.norm()
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// An ordered tuple `(f_1, …, f_N)` of polynomials over a common ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    m: usize,
    polys: Vec<IntPoly>,
}

impl PolySystem {
    pub fn new(m: usize, polys: Vec<IntPoly>) -> Result<PolySystem> {
        if polys.is_empty() {
            return Err(invalid("a polynomial system needs at least one polynomial"));
        }
        if let Some(p) = polys.iter().find(|p| p.m != m) {
            return Err(Error::DimensionMismatch(format!(
                "polynomial in {} variables inside a system over {m}",
                p.m
            )));
        }
        Ok(PolySystem { m, polys })
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polys(&self) -> &[IntPoly] {
        &self.polys
    }

    /// `max ‖f_i‖`.
    pub fn max_norm(&self) -> BigUint {
        self.polys.iter().map(IntPoly::norm).max().unwrap_or_default()
    }

    /// `max deg f_i`.
    pub fn max_degree(&self) -> u32 {
        self.polys.iter().map(IntPoly::degree).max().unwrap_or(0)
    }

    pub(crate) fn compile(&self, ctx: &GfContext) -> CompiledSystem {
        let max_deg = self
            .polys
            .iter()
            .flat_map(|p| p.terms.keys().flat_map(|e| e.iter().copied()))
            .max()
            .unwrap_or(0) as usize;
        let q = ctx.order();
        let mut powers = vec![0; q * (max_deg + 1)];
        for x in 0..q {
            for e in 0..=max_deg {
                powers[x * (max_deg + 1) + e] = ctx.pow(x as Element, e as u64);
            }
        }
        let polys = self
            .polys
            .iter()
            .map(|p| {
                p.terms
                    .iter()
                    .filter_map(|(e, c)| {
                        let coef = ctx.bigint_to_field(c);
                        (coef != 0).then(|| {
                            let vars = e
                                .iter()
                                .enumerate()
                                .filter(|(_, &k)| k > 0)
                                .map(|(v, &k)| (v, k as usize))
                                .collect();
                            (coef, vars)
                        })
                    })
                    .collect()
            })
            .collect();
        CompiledSystem {
            ctx: ctx.clone(),
            stride: max_deg + 1,
            powers,
            polys,
        }
    }
}

type CompiledTerm = (Element, Vec<(usize, usize)>);

/// A system reduced into one field, with a power table for fast evaluation.
pub(crate) struct CompiledSystem {
    ctx: GfContext,
    stride: usize,
    powers: Vec<Element>,
    polys: Vec<Vec<CompiledTerm>>,
}

impl CompiledSystem {
    pub(crate) fn eval(&self, index: usize, u: &[Element]) -> Element {
        let f = &self.ctx;
        let mut acc = 0;
        for (coef, vars) in &self.polys[index] {
            let mut t = *coef;
            for &(v, k) in vars {
                t = f.mul(t, self.powers[u[v] as usize * self.stride + k]);
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Bit `i` set iff `f_{i+1}(u) ≠ 0`.
    pub(crate) fn pattern(&self, u: &[Element]) -> u128 {
        let mut bits = 0u128;
        for i in 0..self.polys.len() {
            if self.eval(i, u) != 0 {
                bits |= 1 << i;
            }
        }
        bits
    }
}

/// Variable label (1-indexed, row-major) of entry `(i, j)` of the `r × (n−r)` block.
pub fn minor_variable(n: usize, r: usize, i: usize, j: usize) -> usize {
    (i - 1) * (n - r) + j
}

/// The determinants `p_B` of the `r × r` column-submatrices of `[x | I_r]`,
/// one per `B` in `k_subsets(n, r)` order.
///
/// Columns `1..=n-r` hold the indeterminates `x_{ij}` and column `n-r+i` is the
/// i-th unit vector.
pub fn minors_polynomials(n: usize, r: usize) -> Result<PolySystem> {
    if r > n {
        return Err(invalid(format!("rank {r} exceeds n = {n}")));
    }
    let m = r * (n - r);
    let perms = Permutation::all(r);
    let signs: Vec<bool> = perms.iter().map(|p| is_odd(p.images())).collect();
    let mut polys = Vec::new();
    for b in k_subsets(n, r) {
        let cols: Vec<usize> = b.elements().collect();
        let mut poly = IntPoly::zero(m);
        'perm: for (p, &odd) in perms.iter().zip(&signs) {
            // row i of the submatrix meets column cols[p(i) - 1]
            let mut exps = vec![0u32; m];
            for i in 1..=r {
                let c = cols[p.image(i) - 1];
                if c <= n - r {
                    exps[minor_variable(n, r, i, c) - 1] += 1;
                } else if c - (n - r) != i {
                    continue 'perm;
                }
            }
            poly.add_term(exps, BigInt::from(if odd { -1 } else { 1 }));
        }
        polys.push(poly);
    }
    PolySystem::new(m, polys)
}

fn is_odd(images: &[usize]) -> bool {
    let n = images.len();
    let mut inv = 0;
    for i in 0..n {
        for j in i + 1..n {
            if images[i] > images[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}
