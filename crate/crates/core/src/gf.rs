//! Small finite fields GF(q), q ≤ 16, backed by lookup tables.
//!
//! An element of GF(p^k) is stored as the index `Σ c_j p^j` of its coefficient
//! vector modulo a fixed irreducible polynomial, so `0` and `1` are the field's
//! zero and one and the prime subfield occupies indices `0..p`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::matroid::SubsetMask;

pub type Element = u8;

/// Fixed moduli, low-order coefficients first, monic leading term implied.
const MODULI: &[(u8, u8, &[u8])] = &[
    (2, 1, &[0]),
    (3, 1, &[0]),
    (5, 1, &[0]),
    (7, 1, &[0]),
    (11, 1, &[0]),
    (13, 1, &[0]),
    (2, 2, &[1, 1]),       // x^2 + x + 1
    (2, 3, &[1, 1, 0]),    // x^3 + x + 1
    (3, 2, &[1, 0]),       // x^2 + 1
    (2, 4, &[1, 1, 0, 0]), // x^4 + x + 1
];

/// Field orders accepted by [`GfContext::of_order`].
pub const SUPPORTED_ORDERS: [u64; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

struct Tables {
    p: u8,
    k: u8,
    q: u8,
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// A verified finite field. Cloning is cheap and the tables are shared.
#[derive(Clone)]
pub struct GfContext {
    t: Arc<Tables>,
}

impl fmt::Debug for GfContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.t.q)
    }
}

impl fmt::Display for GfContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.t.q)
    }
}

impl PartialEq for GfContext {
    fn eq(&self, other: &Self) -> bool {
        self.t.q == other.t.q
    }
}

impl Eq for GfContext {}

/// Builds GF(p^k) from the built-in modulus table.
pub fn gf_make(p: u64, k: u32) -> Result<GfContext> {
    let q = p.checked_pow(k).unwrap_or(u64::MAX);
    let entry = MODULI
        .iter()
        .find(|(mp, mk, _)| u64::from(*mp) == p && u32::from(*mk) == k)
        .ok_or(Error::UnsupportedField(q))?;
    let ctx = GfContext {
        t: Arc::new(build_tables(entry.0, entry.1, entry.2)),
    };
    ctx.verify_axioms()?;
    Ok(ctx)
}

fn build_tables(p: u8, k: u8, low: &[u8]) -> Tables {
    let q = (p as usize).pow(k as u32);
    let digits = |mut x: usize| -> Vec<u8> {
        let mut d = vec![0u8; k as usize];
        for slot in d.iter_mut() {
            *slot = (x % p as usize) as u8;
            x /= p as usize;
        }
        d
    };
    let index = |d: &[u8]| -> u8 {
        d.iter()
            .rev()
            .fold(0usize, |acc, &c| acc * p as usize + c as usize) as u8
    };
    let pm = p as u16;
    let mut add = vec![0u8; q * q];
    let mut mul = vec![0u8; q * q];
    for a in 0..q {
        let da = digits(a);
        for b in 0..q {
            let db = digits(b);
            let sum: Vec<u8> = da
                .iter()
                .zip(&db)
                .map(|(&x, &y)| ((x as u16 + y as u16) % pm) as u8)
                .collect();
            add[a * q + b] = index(&sum);

            let mut prod = vec![0u16; 2 * k as usize - 1];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x as u16 * y as u16) % pm;
                }
            }
            // x^k = -(low part of the modulus)
            for deg in (k as usize..prod.len()).rev() {
                let c = prod[deg];
                if c == 0 {
                    continue;
                }
                prod[deg] = 0;
                for (j, &mc) in low.iter().enumerate() {
                    let sub = (c * mc as u16) % pm;
                    let slot = &mut prod[deg - k as usize + j];
                    *slot = (*slot + pm - sub) % pm;
                }
            }
            let reduced: Vec<u8> = prod[..k as usize].iter().map(|&c| c as u8).collect();
            mul[a * q + b] = index(&reduced);
        }
    }
    let mut neg = vec![0u8; q];
    let mut inv = vec![0u8; q];
    for a in 0..q {
        neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap_or(0) as u8;
        if a != 0 {
            inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap_or(0) as u8;
        }
    }
    let mut modulus = low.to_vec();
    modulus.push(1);
    Tables {
        p,
        k,
        q: q as u8,
        modulus,
        add,
        mul,
        neg,
        inv,
    }
}

impl GfContext {
    /// The field with `q` elements from the built-in table.
    pub fn of_order(q: u64) -> Result<GfContext> {
        let (p, k) = match q {
            2 | 3 | 5 | 7 | 11 | 13 => (q, 1),
            4 => (2, 2),
            8 => (2, 3),
            9 => (3, 2),
            16 => (2, 4),
            _ => return Err(Error::UnsupportedField(q)),
        };
        gf_make(p, k)
    }

    pub fn order(&self) -> usize {
        self.t.q as usize
    }

    pub fn characteristic(&self) -> u8 {
        self.t.p
    }

    pub fn degree(&self) -> u8 {
        self.t.k
    }

    /// Modulus coefficients, constant term first, leading 1 last.
    pub fn modulus(&self) -> &[u8] {
        &self.t.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        0..self.t.q
    }

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        self.t.add[a as usize * self.t.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.t.mul[a as usize * self.t.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Element) -> Element {
        self.t.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Element) -> Option<Element> {
        (a != 0).then(|| self.t.inv[a as usize])
    }

    pub fn pow(&self, a: Element, mut e: u64) -> Element {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The image of an integer under the natural map Z → GF(q).
    pub fn int_to_field(&self, z: i64) -> Element {
        z.rem_euclid(self.t.p as i64) as Element
    }

    pub fn bigint_to_field(&self, z: &BigInt) -> Element {
        let r = z.mod_floor(&BigInt::from(self.t.p));
        r.to_u8().expect("residue below p")
    }

    fn verify_axioms(&self) -> Result<()> {
        let q = self.t.q;
        let fail = |what: &str| Err(Error::Internal(format!("GF({q}) table check failed: {what}")));
        for a in 0..q {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return fail("identity");
            }
            if self.add(a, self.neg(a)) != 0 {
                return fail("additive inverse");
            }
            if a != 0 && self.mul(a, self.inv(a).unwrap()) != 1 {
                return fail("multiplicative inverse");
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return fail("commutativity");
                }
                for c in 0..q {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return fail("additive associativity");
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return fail("multiplicative associativity");
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return fail("distributivity");
                    }
                }
            }
        }
        Ok(())
    }
}

/// A dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct GfMatrix {
    ctx: GfContext,
    rows: usize,
    cols: usize,
    entries: Vec<Element>,
}

impl fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.ctx, self.to_rows())
    }
}

impl GfMatrix {
    pub fn new(ctx: &GfContext, rows: usize, cols: usize, entries: Vec<Element>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&x| x as usize >= ctx.order()) {
            return Err(Error::InvalidInput(format!("entry {bad} is not an element of {ctx}")));
        }
        Ok(GfMatrix {
            ctx: ctx.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(ctx: &GfContext, rows: &[Vec<Element>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        GfMatrix::new(ctx, r, c, rows.concat())
    }

    pub fn zeros(ctx: &GfContext, rows: usize, cols: usize) -> Self {
        GfMatrix {
            ctx: ctx.clone(),
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(ctx: &GfContext, n: usize) -> Self {
        let mut m = GfMatrix::zeros(ctx, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn ctx(&self) -> &GfContext {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> Element {
        self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Element) {
        assert!((value as usize) < self.ctx.order());
        self.entries[row * self.cols + col] = value;
    }

    pub fn to_rows(&self) -> Vec<Vec<Element>> {
        if self.cols == 0 {
            return vec![Vec::new(); self.rows];
        }
        self.entries.chunks(self.cols).map(<[_]>::to_vec).collect()
    }

    /// `[self | other]`.
    pub fn hconcat(&self, other: &GfMatrix) -> Result<GfMatrix> {
        if self.rows != other.rows || self.ctx != other.ctx {
            return Err(Error::DimensionMismatch("hconcat needs equal row counts over one field".into()));
        }
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            entries.extend_from_slice(&self.entries[r * self.cols..(r + 1) * self.cols]);
            entries.extend_from_slice(&other.entries[r * other.cols..(r + 1) * other.cols]);
        }
        Ok(GfMatrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols,
            entries,
        })
    }

    pub fn mul(&self, other: &GfMatrix) -> Result<GfMatrix> {
        if self.cols != other.rows || self.ctx != other.ctx {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.ctx;
        let mut out = GfMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0;
                for t in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(i, t), other.get(t, j)));
                }
                out.entries[i * other.cols + j] = acc;
            }
        }
        Ok(out)
    }

    /// Columns whose 1-indexed labels are in `cols`, in increasing order.
    pub fn select_columns(&self, cols: SubsetMask) -> Result<GfMatrix> {
        if !cols.is_within(self.cols) {
            return Err(Error::DimensionMismatch(format!(
                "column set {cols} exceeds {} columns",
                self.cols
            )));
        }
        let picked: Vec<usize> = cols.elements().map(|e| e - 1).collect();
        let mut entries = Vec::with_capacity(self.rows * picked.len());
        for r in 0..self.rows {
            entries.extend(picked.iter().map(|&c| self.get(r, c)));
        }
        Ok(GfMatrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: picked.len(),
            entries,
        })
    }

    pub fn det(&self) -> Result<Element> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(det_in_place(&self.ctx, &mut self.entries.clone(), self.rows))
    }

    pub fn rank(&self) -> usize {
        let f = &self.ctx;
        let mut a = self.entries.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| a[r * cols + c] != 0) else {
                continue;
            };
            for j in 0..cols {
                a.swap(p * cols + j, rank * cols + j);
            }
            let pinv = f.inv(a[rank * cols + c]).unwrap();
            for r in rank + 1..rows {
                let factor = f.mul(a[r * cols + c], pinv);
                if factor == 0 {
                    continue;
                }
                for j in c..cols {
                    let v = f.mul(factor, a[rank * cols + j]);
                    a[r * cols + j] = f.sub(a[r * cols + j], v);
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// Whether the square submatrix on the 1-indexed column set `cols` is invertible.
    pub fn is_nonsingular_cols(&self, cols: SubsetMask) -> Result<bool> {
        if cols.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "selected {} columns of a matrix with {} rows",
                cols.len(),
                self.rows
            )));
        }
        Ok(self.select_columns(cols)?.det()? != 0)
    }
}

/// Determinant by Gaussian elimination; clobbers `a` (row-major, `n x n`).
pub(crate) fn det_in_place(f: &GfContext, a: &mut [Element], n: usize) -> Element {
    let mut det: Element = 1;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r * n + c] != 0) else {
            return 0;
        };
        if p != c {
            for j in 0..n {
                a.swap(p * n + j, c * n + j);
            }
            det = f.neg(det);
        }
        let pivot = a[c * n + c];
        det = f.mul(det, pivot);
        let pinv = f.inv(pivot).unwrap();
        for r in c + 1..n {
            let factor = f.mul(a[r * n + c], pinv);
            if factor == 0 {
                continue;
            }
            for j in c..n {
                let v = f.mul(factor, a[c * n + j]);
                a[r * n + j] = f.sub(a[r * n + j], v);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn all_fields() -> Vec<GfContext> {
        SUPPORTED_ORDERS
            .iter()
            .map(|&q| GfContext::of_order(q).unwrap())
            .collect()
    }

    fn random_matrix(f: &GfContext, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> GfMatrix {
        let q = f.order() as u8;
        let e = (0..rows * cols).map(|_| rng.gen_range(0..q)).collect();
        GfMatrix::new(f, rows, cols, e).unwrap()
    }

    #[test]
    fn small_field_facts() {
        let gf2 = gf_make(2, 1).unwrap();
        assert_eq!(gf2.add(1, 1), 0);
        let gf3 = gf_make(3, 1).unwrap();
        assert_eq!(gf3.mul(2, 2), 1);
        let gf4 = gf_make(2, 2).unwrap();
        for x in 1..4 {
            assert_eq!(gf4.pow(x, 3), 1);
        }
    }

    #[test]
    fn unsupported_orders_are_rejected() {
        assert_eq!(gf_make(2, 5).unwrap_err(), Error::UnsupportedField(32));
        assert!(GfContext::of_order(6).is_err());
        assert!(GfContext::of_order(17).is_err());
        assert!(gf_make(4, 1).is_err());
    }

    #[test]
    fn multiplicative_groups_are_cyclic_of_order_q_minus_1() {
        for f in all_fields() {
            let q = f.order() as u64;
            for x in 1..q as u8 {
                assert_eq!(f.pow(x, q - 1), 1, "{f:?}");
            }
            let has_generator = (1..q as u8).any(|g| (1..q - 1).all(|e| f.pow(g, e) != 1));
            assert!(has_generator, "{f:?}");
        }
    }

    #[test]
    fn int_to_field_examples_and_homomorphism() {
        assert_eq!(gf_make(3, 1).unwrap().int_to_field(-1), 2);
        assert_eq!(gf_make(2, 1).unwrap().int_to_field(6), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in all_fields() {
            for _ in 0..100 {
                let a: i64 = rng.gen_range(-1_000_000..1_000_000);
                let b: i64 = rng.gen_range(-1_000_000..1_000_000);
                assert_eq!(f.int_to_field(a + b), f.add(f.int_to_field(a), f.int_to_field(b)));
                assert_eq!(f.int_to_field(a * b), f.mul(f.int_to_field(a), f.int_to_field(b)));
                assert_eq!(f.bigint_to_field(&BigInt::from(a)), f.int_to_field(a));
            }
        }
    }

    #[test]
    fn det_rank_examples() {
        let gf2 = gf_make(2, 1).unwrap();
        let id = GfMatrix::identity(&gf2, 3);
        assert_eq!(id.det().unwrap(), 1);
        assert_eq!(id.rank(), 3);
        let gf3 = gf_make(3, 1).unwrap();
        let a = GfMatrix::from_rows(&gf3, &[vec![1, 1], vec![1, 2]]).unwrap();
        assert_eq!(a.det().unwrap(), 1);
        let rep = GfMatrix::from_rows(&gf3, &[vec![1, 2, 1], vec![2, 0, 2]]).unwrap();
        let cols = SubsetMask::from_elements([1, 3]).unwrap();
        assert!(!rep.is_nonsingular_cols(cols).unwrap());
        assert!(rep.is_nonsingular_cols(SubsetMask::from_elements([1]).unwrap()).is_err());
        assert!(rep.det().is_err());
    }

    #[test]
    fn det_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in all_fields() {
            for _ in 0..100 {
                let n = rng.gen_range(1..=4);
                let a = random_matrix(&f, n, n, &mut rng);
                let b = random_matrix(&f, n, n, &mut rng);
                let ab = a.mul(&b).unwrap();
                assert_eq!(ab.det().unwrap(), f.mul(a.det().unwrap(), b.det().unwrap()));
            }
        }
    }

    #[test]
    fn rank_invariant_under_row_operations() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for f in all_fields() {
            for _ in 0..100 {
                let rows = rng.gen_range(1..=4);
                let cols = rng.gen_range(1..=5);
                let a = random_matrix(&f, rows, cols, &mut rng);
                let mut shuffled = a.to_rows();
                let i = rng.gen_range(0..rows);
                let j = rng.gen_range(0..rows);
                shuffled.swap(i, j);
                let s = rng.gen_range(1..f.order() as u8);
                let k = rng.gen_range(0..rows);
                for x in shuffled[k].iter_mut() {
                    *x = f.mul(*x, s);
                }
                let b = GfMatrix::from_rows(&f, &shuffled).unwrap();
                assert_eq!(a.rank(), b.rank());
                assert!(a.rank() <= rows.min(cols));
            }
        }
    }

    #[test]
    fn det_agrees_with_leibniz_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for f in all_fields() {
            for _ in 0..30 {
                let n = rng.gen_range(1..=4);
                let a = random_matrix(&f, n, n, &mut rng);
                let mut total = 0;
                for p in crate::matroid::Permutation::all(n) {
                    let img = p.images();
                    let inversions = (0..n)
                        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                        .filter(|&(i, j)| img[i] > img[j])
                        .count();
                    let mut term = 1;
                    for (i, &c) in img.iter().enumerate() {
                        term = f.mul(term, a.get(i, c - 1));
                    }
                    if inversions % 2 == 1 {
                        term = f.neg(term);
                    }
                    total = f.add(total, term);
                }
                assert_eq!(a.det().unwrap(), total);
            }
        }
    }
}
