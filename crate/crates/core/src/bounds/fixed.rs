//! Binary fixed-point reals with `FRAC_BITS` fractional bits.
//!
//! Every primitive here truncates toward zero at the last bit. Logarithms are
//! accurate to [`LOG_ERR`] in absolute terms; callers propagate that figure.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const FRAC_BITS: u32 = 384;

/// Absolute error bound for one call of [`ln_biguint`], [`log2_biguint`],
/// [`ln_fixed`], [`log2_fixed`] and the cached constants.
pub const LOG_ERR: f64 = 1.0e-100;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn zero() -> Fixed {
        Fixed(BigInt::zero())
    }

    pub fn from_int(v: i64) -> Fixed {
        Fixed(BigInt::from(v) << FRAC_BITS)
    }

    pub fn from_bigint(v: &BigInt) -> Fixed {
        Fixed(v << FRAC_BITS)
    }

    pub fn from_biguint(v: &BigUint) -> Fixed {
        Fixed(BigInt::from(v.clone()) << FRAC_BITS)
    }

    /// `num / den`, truncated.
    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Fixed {
        Fixed((num << FRAC_BITS) / den)
    }

    pub fn mul(&self, other: &Fixed) -> Fixed {
        Fixed((&self.0 * &other.0) >> FRAC_BITS)
    }

    pub fn div(&self, other: &Fixed) -> Fixed {
        Fixed((&self.0 << FRAC_BITS) / &other.0)
    }

    pub fn mul_int(&self, k: &BigInt) -> Fixed {
        Fixed(&self.0 * k)
    }

    pub fn div_int(&self, k: &BigInt) -> Fixed {
        Fixed(&self.0 / k)
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Fixed {
        Fixed(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        // keep 64 significant bits before converting
        let bits = self.0.bits();
        if bits <= 1000 {
            self.0.to_f64().unwrap_or(f64::NAN) / 2f64.powi(FRAC_BITS as i32)
        } else {
            let shift = bits - 64;
            let top = (&self.0 >> shift).to_f64().unwrap_or(f64::NAN);
            top * 2f64.powi(shift as i32 - FRAC_BITS as i32)
        }
    }

    /// Decimal rendering with exactly `digits` fractional digits, truncated.
    pub fn to_decimal(&self, digits: usize) -> String {
        let neg = self.0.is_negative();
        let mag = self.0.abs();
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled: BigInt = (&mag * &scale) >> FRAC_BITS;
        let (int, frac) = scaled.div_rem(&scale);
        let sign = if neg && !scaled.is_zero() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
        }
    }

    pub fn raw(&self) -> &BigInt {
        &self.0
    }
}

impl Add for &Fixed {
    type Output = Fixed;
    fn add(self, rhs: &Fixed) -> Fixed {
        Fixed(&self.0 + &rhs.0)
    }
}

impl Sub for &Fixed {
    type Output = Fixed;
    fn sub(self, rhs: &Fixed) -> Fixed {
        Fixed(&self.0 - &rhs.0)
    }
}

impl Neg for &Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-&self.0)
    }
}

impl fmt::Debug for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(30))
    }
}

/// `2 atanh(z) = ln((1+z)/(1-z))` for `|z| ≤ 1/3`.
fn two_atanh(z: &Fixed) -> Fixed {
    let z2 = z.mul(z);
    let mut power = z.clone();
    let mut sum = Fixed::zero();
    let mut k: i64 = 0;
    loop {
        let term = power.div_int(&BigInt::from(2 * k + 1));
        if term.0.is_zero() {
            break;
        }
        sum = &sum + &term;
        power = power.mul(&z2);
        k += 1;
    }
    Fixed(sum.0 << 1)
}

/// Natural log of a value in `[1, 2]`.
fn ln_unit(y: &Fixed) -> Fixed {
    let one = Fixed::from_int(1);
    let z = (y - &one).div(&(y + &one));
    two_atanh(&z)
}

pub fn ln2() -> &'static Fixed {
    static LN2: OnceLock<Fixed> = OnceLock::new();
    // ln 2 = 2 atanh(1/3)
    LN2.get_or_init(|| two_atanh(&Fixed::from_ratio(&BigInt::one(), &BigInt::from(3))))
}

/// `log2(e) = 1 / ln 2`.
pub fn log2_e() -> &'static Fixed {
    static L: OnceLock<Fixed> = OnceLock::new();
    L.get_or_init(|| Fixed::from_int(1).div(ln2()))
}

fn atan_inv(m: i64) -> Fixed {
    // atan(1/m) = Σ (-1)^k / ((2k+1) m^(2k+1))
    let m2 = BigInt::from(m * m);
    let mut power = Fixed::from_ratio(&BigInt::one(), &BigInt::from(m));
    let mut sum = Fixed::zero();
    let mut k: i64 = 0;
    loop {
        let term = power.div_int(&BigInt::from(2 * k + 1));
        if term.0.is_zero() {
            break;
        }
        sum = if k % 2 == 0 { &sum + &term } else { &sum - &term };
        power = power.div_int(&m2);
        k += 1;
    }
    sum
}

pub fn pi() -> &'static Fixed {
    static PI: OnceLock<Fixed> = OnceLock::new();
    PI.get_or_init(|| {
        let a = atan_inv(5).mul_int(&BigInt::from(16));
        let b = atan_inv(239).mul_int(&BigInt::from(4));
        &a - &b
    })
}

/// Natural log of a positive integer.
pub fn ln_biguint(x: &BigUint) -> Fixed {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    let e = bits - 1;
    // y = x / 2^e in [1, 2)
    let xi = BigInt::from(x.clone());
    let y = if e <= u64::from(FRAC_BITS) {
        Fixed(xi << (u64::from(FRAC_BITS) - e))
    } else {
        Fixed(xi >> (e - u64::from(FRAC_BITS)))
    };
    let ln_y = ln_unit(&y);
    &ln2().mul_int(&BigInt::from(e)) + &ln_y
}

pub fn log2_biguint(x: &BigUint) -> Fixed {
    assert!(!x.is_zero(), "log of zero");
    let e = x.bits() - 1;
    let xi = BigInt::from(x.clone());
    let y = if e <= u64::from(FRAC_BITS) {
        Fixed(xi << (u64::from(FRAC_BITS) - e))
    } else {
        Fixed(xi >> (e - u64::from(FRAC_BITS)))
    };
    &Fixed::from_int(e as i64) + &ln_unit(&y).div(ln2())
}

pub fn log2_u64(x: u64) -> Fixed {
    log2_biguint(&BigUint::from(x))
}

/// Natural log of a positive fixed-point value.
pub fn ln_fixed(x: &Fixed) -> Fixed {
    assert!(x.is_positive(), "log of a non-positive value");
    let bits = x.0.bits() as i64;
    // x = raw / 2^F; shift raw so it lies in [2^F, 2^(F+1))
    let e = bits - 1 - i64::from(FRAC_BITS);
    let y = match e.cmp(&0) {
        Ordering::Greater => Fixed(&x.0 >> e as u64),
        Ordering::Less => Fixed(&x.0 << (-e) as u64),
        Ordering::Equal => x.clone(),
    };
    &ln2().mul_int(&BigInt::from(e)) + &ln_unit(&y)
}

pub fn log2_fixed(x: &Fixed) -> Fixed {
    ln_fixed(x).div(ln2())
}

/// Bernoulli numbers `B_2, B_4, …, B_24` as (numerator, denominator).
const BERNOULLI: [(i64, i64); 12] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
];

/// Absolute error bound for [`ln_factorial_stirling`]; dominated by the first
/// omitted series term at argument `2^13`.
pub const STIRLING_ERR: f64 = 1.0e-90;

/// `ln Γ(x + 1) = ln x!` for a nonnegative integer, by Stirling's series after
/// shifting the argument to at least `2^13`.
pub fn ln_factorial_stirling(x: &BigUint) -> Fixed {
    const SHIFT_TO: u64 = 1 << 13;
    // ln Γ(z) = ln Γ(z+s) - ln(z (z+1) ... (z+s-1))
    let z = BigUint::from(1u32) + x;
    let mut shift_product = BigUint::one();
    let mut zs = z.clone();
    while zs < BigUint::from(SHIFT_TO) {
        shift_product *= &zs;
        zs += 1u32;
    }
    let correction = ln_biguint(&shift_product);
    let zf = Fixed::from_biguint(&zs);
    let ln_z = ln_biguint(&zs);
    let half = Fixed(BigInt::one() << (FRAC_BITS - 1));
    let two_pi = pi().mul_int(&BigInt::from(2));
    let mut acc = &(&(&zf - &half).mul(&ln_z) - &zf) + &ln_fixed(&two_pi).div_int(&BigInt::from(2));
    // Σ B_2k / (2k (2k-1) z^(2k-1))
    let z_big = BigInt::from(zs.clone());
    let z2 = &z_big * &z_big;
    let mut zpow = z_big.clone();
    for (k, &(num, den)) in BERNOULLI.iter().enumerate() {
        let kk = 2 * (k as i64 + 1);
        let d = BigInt::from(den) * BigInt::from(kk * (kk - 1)) * &zpow;
        let term = Fixed::from_ratio(&BigInt::from(num), &d);
        acc = &acc + &term;
        zpow *= &z2;
    }
    &acc - &correction
}
