//! Exact rational parameters and integer thresholds.
//!
//! Exponents such as `85/688` and `1/3` are kept as exact fractions. Any
//! comparison of an integer against a real power `(N / 2^k)^e` goes through
//! [`Threshold`], which carries the exact floor of the power so that boundary
//! cases (for example `1000^(1/3) = 10`) are decided in integer arithmetic.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Pow, Signed, ToPrimitive};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn rat(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p/q`, an integer, or a plain decimal such as `0.1235` into an exact
/// fraction. Decimals are read digit by digit, so `0.01` is exactly `1/100`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.trim().parse().map_err(|_| bad())?;
        let q: i128 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    if frac_part.len() > 30 {
        return Err(Error::Parse(format!("too many decimal digits in {s:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let num: i128 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
    let den = 10i128.pow(frac_part.len() as u32);
    let r = Rational::new(num, den);
    Ok(if neg { -r } else { r })
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// Compares `t^den * 2^(k*num)` with `n^num`, i.e. `t` against `(n/2^k)^(num/den)`.
fn cmp_power(t: u64, n: u64, k: u32, num: u32, den: u32) -> Ordering {
    let lhs = Pow::pow(big(t), den) << (k as usize * num as usize);
    let rhs = Pow::pow(big(n), num);
    lhs.cmp(&rhs)
}

fn exponent_parts(e: &Rational) -> Result<(u32, u32)> {
    if e.is_negative() {
        return Err(Error::Domain(format!("negative exponent {e}")));
    }
    let num = u32::try_from(*e.numer()).map_err(|_| Error::Domain(format!("exponent {e} too large")))?;
    let den = u32::try_from(*e.denom()).map_err(|_| Error::Domain(format!("exponent {e} too large")))?;
    if den > 100_000 {
        return Err(Error::Domain(format!("exponent denominator of {e} too large")));
    }
    Ok((num, den))
}

/// A real cut-off together with its exact integer floor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Threshold {
    pub value: f64,
    pub floor: u64,
    /// `value` is itself an integer.
    pub exact: bool,
}

impl Threshold {
    pub fn from_real(x: f64) -> Self {
        let x = x.max(0.0);
        let floor = x.floor();
        Threshold {
            value: x,
            floor: floor as u64,
            exact: floor == x,
        }
    }

    pub fn from_integer(x: u64) -> Self {
        Threshold {
            value: x as f64,
            floor: x,
            exact: true,
        }
    }

    /// `(n / 2^k)^e`, with the floor decided exactly.
    pub fn reduced_power(n: u64, k: u32, e: &Rational) -> Result<Self> {
        let (num, den) = exponent_parts(e)?;
        let value = (n as f64 / 2f64.powi(k as i32)).powf(to_f64(e));
        if num == 0 {
            return Ok(Threshold::from_integer(1));
        }
        if n == 0 {
            return Ok(Threshold::from_integer(0));
        }
        // keeps t + 1 below u64::MAX after the correction loops
        if !(value < 9.0e18) {
            return Err(Error::Domain(format!("(N / 2^k)^{e} = {value:e} exceeds the integer range")));
        }
        let mut t = value.floor().max(0.0) as u64;
        // the float estimate is off by at most a unit or two
        while t > 0 && cmp_power(t, n, k, num, den) == Ordering::Greater {
            t -= 1;
        }
        while cmp_power(t + 1, n, k, num, den) != Ordering::Greater {
            t += 1;
        }
        let exact = cmp_power(t, n, k, num, den) == Ordering::Equal;
        Ok(Threshold {
            value,
            floor: t,
            exact,
        })
    }

    /// Smallest integer `>= value`.
    pub fn ceil(&self) -> u64 {
        if self.exact {
            self.floor
        } else {
            self.floor + 1
        }
    }

    /// `value <= q`
    pub fn at_most(&self, q: u64) -> bool {
        q >= self.ceil()
    }

    /// `q < value`
    pub fn above(&self, q: u64) -> bool {
        q < self.ceil()
    }

    /// `q > value`
    pub fn exceeded_by(&self, q: u64) -> bool {
        q > self.floor
    }
}

/// Largest `k` with `2^k <= n^a`.
pub fn k_for_exponent(n: u64, a: &Rational) -> Result<u32> {
    let (num, den) = exponent_parts(a)?;
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    let fits = |k: u32| {
        let lhs = BigUint::one() << (k as usize * den as usize);
        lhs <= Pow::pow(big(n), num)
    };
    let mut k = ((n as f64).log2() * to_f64(a)).floor().max(0.0) as u32;
    while k > 0 && !fits(k) {
        k -= 1;
    }
    while fits(k + 1) {
        k += 1;
    }
    Ok(k)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
