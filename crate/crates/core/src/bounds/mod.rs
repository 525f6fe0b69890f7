//! Base-2 logarithms of the counting bounds, carried with error radii.
//!
//! Values live in [`Fixed`] (384 fractional bits). Every public quantity is a
//! [`LogBound`]: a center plus an upper bound on its absolute error. Verdicts
//! are only issued when the margin exceeds [`DECISION_FACTOR`] times the
//! accumulated radius; otherwise the status is `Indeterminate`.

pub mod fixed;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::poly::binomial;
use fixed::{
    ln2, ln_factorial_stirling, log2_biguint, log2_e, log2_fixed, log2_u64, Fixed, LOG_ERR,
    STIRLING_ERR,
};

/// A verdict needs `|margin| > DECISION_FACTOR · radius`.
pub const DECISION_FACTOR: f64 = 10.0;

/// Largest `n` for which the conjectured count uses exact binomials.
pub const CONJECTURE_EXACT_MAX_N: u64 = 30;

/// A base-2 logarithm together with a bound on its absolute error.
#[derive(Clone, Debug, PartialEq)]
pub struct LogBound {
    pub value: Fixed,
    pub radius: f64,
}

impl LogBound {
    pub fn exact(value: Fixed) -> LogBound {
        LogBound { value, radius: 0.0 }
    }

    pub fn from_int(v: i64) -> LogBound {
        LogBound::exact(Fixed::from_int(v))
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Center with `digits` decimal places.
    pub fn to_decimal(&self, digits: usize) -> String {
        self.value.to_decimal(digits)
    }

    pub fn add(&self, other: &LogBound) -> LogBound {
        LogBound {
            value: &self.value + &other.value,
            radius: up(self.radius + other.radius),
        }
    }

    pub fn sub(&self, other: &LogBound) -> LogBound {
        LogBound {
            value: &self.value - &other.value,
            radius: up(self.radius + other.radius),
        }
    }

    /// Multiplication by an exact integer.
    pub fn scale(&self, k: &BigInt) -> LogBound {
        let mag = k.to_f64().unwrap_or(f64::INFINITY).abs();
        LogBound {
            value: self.value.mul_int(k),
            radius: up(self.radius * mag),
        }
    }

    /// Whether the whole interval lies strictly above `other`'s.
    pub fn certainly_greater(&self, other: &LogBound) -> bool {
        let gap = (&self.value - &other.value).to_f64();
        gap > DECISION_FACTOR * (self.radius + other.radius)
    }
}

/// Rounds a radius up a little to absorb f64 rounding in its own bookkeeping.
fn up(x: f64) -> f64 {
    x * (1.0 + 1e-12) + f64::MIN_POSITIVE
}

fn log2_int(x: u64) -> LogBound {
    LogBound {
        value: log2_u64(x),
        radius: LOG_ERR,
    }
}

fn log2_big(x: &BigUint) -> LogBound {
    LogBound {
        value: log2_biguint(x),
        radius: LOG_ERR,
    }
}

fn log2_e_bound() -> LogBound {
    LogBound {
        value: log2_e().clone(),
        radius: LOG_ERR,
    }
}

/// `log2(x)` for a positive interval value.
fn log2_of(x: &LogBound) -> Result<LogBound> {
    let center = x.value.to_f64();
    if !x.value.is_positive() || center <= DECISION_FACTOR * x.radius {
        return Err(Error::Internal("logarithm of a value not certainly positive".into()));
    }
    // |d log2(x)| ≤ radius / ((x - radius) ln 2)
    let deriv = x.radius / ((center - x.radius) * std::f64::consts::LN_2);
    Ok(LogBound {
        value: log2_fixed(&x.value),
        radius: up(deriv + LOG_ERR),
    })
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

/// `log2 k(n, r) = r(n-r)(n - (3/2) log2 n + 5)`.
pub fn log2_k(n: u64, r: u64) -> Result<LogBound> {
    if n == 0 || r > n {
        return Err(invalid(format!("log2_k needs n >= 1 and 0 <= r <= n (got n={n}, r={r})")));
    }
    // 3 log2(n) / 2 as an exact halving of 3 log2(n)
    let three_halves_log = LogBound {
        value: log2_u64(n).mul_int(&big(3)).div_int(&big(2)),
        radius: up(1.5 * LOG_ERR),
    };
    let inner = LogBound::from_int(n as i64 + 5).sub(&three_halves_log);
    Ok(inner.scale(&big(r * (n - r))))
}

/// `log2 k'(n, r) = n r^2 log2(n e / r)`.
pub fn log2_k_prime(n: u64, r: u64) -> Result<LogBound> {
    if r == 0 {
        return Err(invalid("log2_k_prime is undefined at r = 0 (log argument degenerates)"));
    }
    if n == 0 || r > n {
        return Err(invalid(format!("log2_k_prime needs 1 <= r <= n (got n={n}, r={r})")));
    }
    let log_arg = log2_int(n).add(&log2_e_bound()).sub(&log2_int(r));
    Ok(log_arg.scale(&big(n * r * r)))
}

/// `H = C(Nd + m, m)`, the dimension count bounding patterns over one field.
pub fn rbg_pattern_bound(num_polys: &BigUint, degree: u64, num_vars: u64) -> BigUint {
    let top = num_polys * BigUint::from(degree);
    let mut acc = BigUint::one();
    for i in 1..=num_vars {
        acc *= &top + BigUint::from(i);
        acc /= BigUint::from(i);
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckStatus {
    Holds,
    Fails,
    /// The margin lies inside the error radius.
    Indeterminate,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Holds => "holds",
            CheckStatus::Fails => "fails",
            CheckStatus::Indeterminate => "indeterminate",
        }
    }

    fn of_margin(margin: &LogBound) -> CheckStatus {
        let m = margin.value.to_f64();
        let tol = DECISION_FACTOR * margin.radius;
        if m > tol {
            CheckStatus::Holds
        } else if m < -tol {
            CheckStatus::Fails
        } else {
            CheckStatus::Indeterminate
        }
    }
}

/// Outcome of checking `k > C(Nd+m, m) (log(3k) + N log(c (eN)^d))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Theorem2Check {
    pub status: CheckStatus,
    /// `log2(k) - log2(RHS)`; `None` when the right-hand side is not positive.
    pub margin: Option<LogBound>,
    pub log2_dimension: LogBound,
}

impl Theorem2Check {
    pub fn holds(&self) -> bool {
        self.status == CheckStatus::Holds
    }
}

/// Evaluates the pattern-count hypothesis in log space.
///
/// `log2_k` is `log2` of the candidate bound `k`. The natural-log constant
/// inside `log(c (eN)^d)` enters as `log2 c + d (log2 N + log2 e)`.
pub fn theorem2_holds(
    num_polys: &BigUint,
    degree: u64,
    num_vars: u64,
    coeff_norm: &BigUint,
    log2_k: &LogBound,
) -> Result<Theorem2Check> {
    if num_polys.is_zero() || coeff_norm.is_zero() {
        return Err(invalid("theorem2_holds needs N >= 1 and c >= 1"));
    }
    let dimension = rbg_pattern_bound(num_polys, degree, num_vars);
    let log2_dimension = log2_big(&dimension);
    let per_poly = log2_big(coeff_norm).add(&log2_big(num_polys).add(&log2_e_bound()).scale(&big(degree)));
    let log_three_k = log2_int(3).add(log2_k);
    let sum = log_three_k.add(&per_poly.scale(&BigInt::from(num_polys.clone())));
    let sum_center = sum.value.to_f64();
    if sum_center + sum.radius <= 0.0 {
        return Ok(Theorem2Check {
            status: CheckStatus::Holds,
            margin: None,
            log2_dimension,
        });
    }
    if sum_center <= DECISION_FACTOR * sum.radius {
        return Ok(Theorem2Check {
            status: CheckStatus::Indeterminate,
            margin: None,
            log2_dimension,
        });
    }
    let margin = log2_k.sub(&log2_dimension.add(&log2_of(&sum)?));
    Ok(Theorem2Check {
        status: CheckStatus::of_margin(&margin),
        margin: Some(margin),
        log2_dimension,
    })
}

/// The matroid instance: `(m, c, d, N) = (r(n-r), 1, r, C(n, r))` with
/// `k = ⌈2^{-n} k(n, r)⌉`. The ceiling moves `log2 k` up by at most
/// `log2(1 + 2^{-t})`, which is folded into the radius.
pub fn theorem2_matroid_instance(n: u64, r: u64) -> Result<Theorem2Check> {
    let base = log2_k(n, r)?.sub(&LogBound::from_int(n as i64));
    // log2(1 + 2^-t) ≤ 2^-t / ln 2, and underflows to 0 for large t
    let ceiling_slack = 2f64.powf(-base.value.to_f64()) / std::f64::consts::LN_2;
    let log2_k = LogBound {
        value: base.value,
        radius: up(base.radius + ceiling_slack),
    };
    theorem2_holds(
        &binomial(n, r),
        r,
        r * (n - r),
        &BigUint::one(),
        &log2_k,
    )
}

/// Remainder of `n` modulo 2.
pub fn delta(n: u64) -> u64 {
    n % 2
}

/// `d(n) = (⌊n/2⌋ - 1)(⌈n/2⌉ - 1)`, cross-checked against
/// `(n^2 - δ(n))/4 - n + 1`.
pub fn d_of_n(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(invalid(format!("d(n) needs n >= 2 (got {n})")));
    }
    let product = (n / 2 - 1) * (n.div_ceil(2) - 1);
    let n2 = u128::from(n) * u128::from(n);
    let closed = (n2 - u128::from(delta(n))) / 4 + 1 - u128::from(n);
    if u128::from(product) != closed {
        return Err(Error::Internal(format!("d({n}) forms disagree: {product} vs {closed}")));
    }
    Ok(product)
}

/// `(1/n) C(n, ⌊n/2⌋) - n log2 n`, the exponent of the lower bound on the
/// number of matroids on `[n]`. Odd `n` uses `⌊n/2⌋`.
pub fn knuth_log2_lower(n: u64) -> Result<LogBound> {
    if n < 2 {
        return Err(invalid(format!("knuth_log2_lower needs n >= 2 (got {n})")));
    }
    let c = BigInt::from(binomial(n, n / 2));
    let first = Fixed::from_ratio(&c, &big(n));
    let first = LogBound {
        value: first,
        radius: 2f64.powi(-(fixed::FRAC_BITS as i32)),
    };
    Ok(first.sub(&log2_int(n).scale(&big(n))))
}

fn conjecture_params(n: u64) -> Result<(BigUint, u64)> {
    if n < 4 {
        return Err(invalid(format!("the conjectured count needs n >= 4 (got {n})")));
    }
    let top = binomial(n, n / 2);
    let k = d_of_n(n)? - 1;
    Ok((top, k))
}

/// `log2[(1 + δ(n)) C(C(n, ⌊n/2⌋), d(n) - 1)]` from exact big integers.
pub fn conjecture_log2_count_exact(n: u64) -> Result<LogBound> {
    let (top, k) = conjecture_params(n)?;
    let count = binomial_big_top(&top, k) * BigUint::from(1 + delta(n));
    Ok(log2_big(&count))
}

/// The same quantity through `ln Γ` (Stirling series).
pub fn conjecture_log2_count_lgamma(n: u64) -> Result<LogBound> {
    let (top, k) = conjecture_params(n)?;
    let kb = BigUint::from(k);
    let ln_c = &(&ln_factorial_stirling(&top) - &ln_factorial_stirling(&kb))
        - &ln_factorial_stirling(&(&top - &kb));
    let value = ln_c.div(ln2());
    let mut out = LogBound {
        value,
        radius: up(3.0 * STIRLING_ERR / std::f64::consts::LN_2 + LOG_ERR * (top.bits() as f64)),
    };
    if delta(n) == 1 {
        out = out.add(&LogBound::from_int(1));
    }
    Ok(out)
}

/// Exact for `n <= 30`, Stirling beyond.
pub fn conjecture_log2_count(n: u64) -> Result<LogBound> {
    if n <= CONJECTURE_EXACT_MAX_N {
        conjecture_log2_count_exact(n)
    } else {
        conjecture_log2_count_lgamma(n)
    }
}

/// `C(top, k)` for a big `top` and small `k`.
fn binomial_big_top(top: &BigUint, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= top - BigUint::from(i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

#[derive(Clone, Debug, PartialEq)]
pub struct MainTheoremCheck {
    pub status: CheckStatus,
    /// `n^3/4 - log2(n+1) - max_r log2 k(n, r)`.
    pub margin: LogBound,
    /// A rank attaining the maximum.
    pub maximizing_rank: u64,
}

/// Checks `(n + 1) max_r k(n, r) ≤ 2^{n^3/4}`.
pub fn main_theorem_check(n: u64) -> Result<MainTheoremCheck> {
    if n < 12 {
        return Err(Error::Precondition(format!("the aggregate bound is stated for n >= 12 (got {n})")));
    }
    let mut best: Option<(LogBound, u64)> = None;
    for r in 0..=n {
        let v = log2_k(n, r)?;
        if best.as_ref().is_none_or(|(b, _)| v.value > b.value) {
            best = Some((v, r));
        }
    }
    let (best, maximizing_rank) = best.expect("at least one rank");
    let cube_quarter = LogBound::exact(Fixed::from_ratio(&BigInt::from(n).pow(3), &big(4)));
    let margin = cube_quarter.sub(&log2_int(n + 1).add(&best));
    Ok(MainTheoremCheck {
        status: CheckStatus::of_margin(&margin),
        margin,
        maximizing_rank,
    })
}
