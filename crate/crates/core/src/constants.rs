//! Explicit sieve constants and the special functions they are built from.
//!
//! Closed forms (`c1`, `c2`) come in a float variant and an `_exact` variant
//! whose logarithm arguments and prefactors are assembled as exact fractions
//! before the single conversion to `f64`. The integral constant `c_delta` and
//! its shifted variant `c_delta_m` use adaptive Simpson quadrature of
//!
//! ```text
//! f(beta) = log(2 - 3 beta) / (beta (1 - beta))
//! ```
//!
//! which is finite on `(0, 1/3]` and vanishes at `beta = 1/3`.

use std::f64::consts::LN_2;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::primes::PrimeTable;
use crate::quad::{adaptive_simpson, Quadrature};
use crate::rational::{rat, to_f64, Rational, Threshold};

/// Euler–Mascheroni constant to 20 significant digits.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

pub const ONE_THIRD: f64 = 1.0 / 3.0;

/// Upper linear-sieve function `F(s) = 2 e^gamma / s` on `1 <= s <= 3`.
pub fn upper_sieve_f(s: f64) -> Result<f64> {
    if !(1.0..=3.0).contains(&s) {
        return domain(format!("F(s) initial range is [1, 3], got s = {s}"));
    }
    Ok(2.0 * EULER_GAMMA.exp() / s)
}

/// Lower linear-sieve function `f(s) = 2 e^gamma log(s - 1) / s` on `2 <= s <= 4`.
pub fn lower_sieve_f(s: f64) -> Result<f64> {
    if !(2.0..=4.0).contains(&s) {
        return domain(format!("f(s) initial range is [2, 4], got s = {s}"));
    }
    Ok(2.0 * EULER_GAMMA.exp() * (s - 1.0).ln() / s)
}

fn check_a(a: f64) -> Result<()> {
    if !(0.0..0.5).contains(&a) {
        return domain(format!("exponent ratio a must lie in [0, 1/2), got {a}"));
    }
    Ok(())
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= ONE_THIRD) {
        return domain(format!("delta must lie in (0, 1/3], got {delta}"));
    }
    Ok(())
}

fn log_positive(x: f64, what: &str) -> Result<f64> {
    if x > 0.0 {
        Ok(x.ln())
    } else {
        domain(format!("logarithm argument {what} = {x} is not positive"))
    }
}

/// `C1 = 4 delta (1-a)/(1-2a) * log((1-2a)/(2 delta (1-a)) - 1)`.
pub fn c1(a: f64, delta: f64) -> Result<f64> {
    check_a(a)?;
    if !(delta > 0.0) {
        return domain(format!("delta must be positive, got {delta}"));
    }
    let ratio = (1.0 - a) / (1.0 - 2.0 * a);
    let arg = (1.0 - 2.0 * a) / (2.0 * delta * (1.0 - a)) - 1.0;
    Ok(4.0 * delta * ratio * log_positive(arg, "(1-2a)/(2 delta (1-a)) - 1")?)
}

/// Pieces of `C1` kept as fractions: `(prefactor, log argument)`.
pub fn c1_parts(a: &Rational, delta: &Rational) -> Result<(Rational, Rational)> {
    let one = Rational::one();
    let two = rat(2, 1);
    if a.is_negative() || *a >= rat(1, 2) {
        return domain(format!("exponent ratio a must lie in [0, 1/2), got {a}"));
    }
    if !delta.is_positive() {
        return domain(format!("delta must be positive, got {delta}"));
    }
    let prefactor = rat(4, 1) * delta * (one - a) / (one - two * a);
    let arg = (one - two * a) / (two * delta * (one - a)) - one;
    if !arg.is_positive() {
        return domain(format!("logarithm argument of C1 is {arg}, not positive"));
    }
    Ok((prefactor, arg))
}

pub fn c1_exact(a: &Rational, delta: &Rational) -> Result<f64> {
    let (prefactor, arg) = c1_parts(a, delta)?;
    Ok(to_f64(&prefactor) * to_f64(&arg).ln())
}

/// `C2 = delta (1-a)/(1-2a) * (log(1/(3 delta)) - log((1 - 2r/3)/(1 - 2 delta r)))`
/// with `r = (1-a)/(1-2a)`.
pub fn c2(a: f64, delta: f64) -> Result<f64> {
    check_a(a)?;
    check_delta(delta)?;
    let r = (1.0 - a) / (1.0 - 2.0 * a);
    let first = log_positive(1.0 / (3.0 * delta), "1/(3 delta)")?;
    let inner = (1.0 - 2.0 / 3.0 * r) / (1.0 - 2.0 * delta * r);
    let second = log_positive(inner, "(1 - 2r/3)/(1 - 2 delta r)")?;
    Ok(delta * r * (first - second))
}

/// Pieces of `C2` kept as fractions: `(prefactor, first log argument, second log argument)`.
pub fn c2_parts(a: &Rational, delta: &Rational) -> Result<(Rational, Rational, Rational)> {
    let one = Rational::one();
    let two = rat(2, 1);
    if a.is_negative() || *a >= rat(1, 2) {
        return domain(format!("exponent ratio a must lie in [0, 1/2), got {a}"));
    }
    if !delta.is_positive() || *delta > rat(1, 3) {
        return domain(format!("delta must lie in (0, 1/3], got {delta}"));
    }
    let r = (one - a) / (one - two * a);
    let prefactor = delta * r;
    let first = one / (rat(3, 1) * delta);
    let den = one - two * delta * r;
    if den.is_zero() {
        return domain("1 - 2 delta (1-a)/(1-2a) vanishes");
    }
    let second = (one - rat(2, 3) * r) / den;
    if !second.is_positive() {
        return domain(format!("second logarithm argument of C2 is {second}, not positive"));
    }
    Ok((prefactor, first, second))
}

pub fn c2_exact(a: &Rational, delta: &Rational) -> Result<f64> {
    let (prefactor, first, second) = c2_parts(a, delta)?;
    Ok(to_f64(&prefactor) * (to_f64(&first).ln() - to_f64(&second).ln()))
}

/// The integrand `log(2 - 3 beta) / (beta (1 - beta))` shared by `C_delta` and `C_{delta,m}`.
pub fn chen_integrand(beta: f64) -> f64 {
    (1.0 - 3.0 * beta).ln_1p() / (beta * (1.0 - beta))
}

/// `g(t) = t f(t) = log(2 - 3t) / (1 - t)`.
pub fn chen_integrand_scaled(t: f64) -> f64 {
    (1.0 - 3.0 * t).ln_1p() / (1.0 - t)
}

/// `C_delta = int_delta^{1/3} log(2 - 3 beta) / (beta (1 - beta)) d beta`.
pub fn c_delta(delta: f64, tol: f64) -> Result<Quadrature> {
    check_delta(delta)?;
    adaptive_simpson(chen_integrand, delta, ONE_THIRD, tol)
}

/// Lower limit `delta log N' / log N'_m` of `C_{delta,m}`, where `N'_m = N' / 2^m`.
pub fn c_delta_m_lower_limit(delta: f64, log_np: f64, m: u32) -> Result<f64> {
    if !(log_np > 0.0) {
        return domain(format!("log N' must be positive, got {log_np}"));
    }
    let log_npm = log_np - m as f64 * LN_2;
    if !(log_npm > 0.0) {
        return domain(format!("N'/2^m is below 1 for m = {m}"));
    }
    Ok(delta * log_np / log_npm)
}

/// `C_{delta,m}`: the `C_delta` integral started at `delta log N' / log(N'/2^m)`.
///
/// A lower limit that reaches `1/3` (up to rounding) gives `0`; beyond that is a
/// domain error.
pub fn c_delta_m(delta: f64, log_np: f64, m: u32, tol: f64) -> Result<Quadrature> {
    check_delta(delta)?;
    let lower = c_delta_m_lower_limit(delta, log_np, m)?;
    if lower > ONE_THIRD * (1.0 + 8.0 * f64::EPSILON) {
        return domain(format!("lower limit {lower} of C_(delta,m) exceeds 1/3"));
    }
    if lower >= ONE_THIRD {
        return Ok(Quadrature { value: 0.0, error: 0.0, evaluations: 0 });
    }
    adaptive_simpson(chen_integrand, lower, ONE_THIRD, tol)
}

/// `f_{a,delta} = C1 - 2 C2 - 2 delta C_delta / (1 - a)`.
pub fn f_ad(a: f64, delta: f64, tol: f64) -> Result<f64> {
    let cd = c_delta(delta, tol)?.value;
    Ok(c1(a, delta)? - 2.0 * c2(a, delta)? - 2.0 * delta * cd / (1.0 - a))
}

/// `f'_{a,delta} = 2 C1 - 4 C2 - (1 - 2^-M) 4 delta C_delta / (1 - a)`.
pub fn f_prime_ad(a: f64, delta: f64, big_m: u32, tol: f64) -> Result<f64> {
    if big_m == 0 {
        return domain("M must be at least 1");
    }
    let cd = c_delta(delta, tol)?.value;
    let shrink = 1.0 - 0.5f64.powi(big_m as i32);
    Ok(2.0 * c1(a, delta)? - 4.0 * c2(a, delta)? - shrink * 4.0 * delta * cd / (1.0 - a))
}

/// Every constant of the Chen-weight lower bound at one `(a, delta)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantBundle {
    pub a: f64,
    pub delta: f64,
    pub c1: f64,
    pub c2: f64,
    pub c_delta: f64,
    pub f_ad: f64,
    pub f_prime_ad: f64,
    /// The `M` used for `f_prime_ad`.
    pub m_terms: u32,
    pub quad_err: f64,
}

impl ConstantBundle {
    pub fn evaluate(a: &Rational, delta: &Rational, m_terms: u32, tol: f64) -> Result<Self> {
        if m_terms == 0 {
            return domain("M must be at least 1");
        }
        let (af, df) = (to_f64(a), to_f64(delta));
        let c1 = c1_exact(a, delta)?;
        let c2 = c2_exact(a, delta)?;
        let q = c_delta(df, tol)?;
        let tail = 2.0 * df * q.value / (1.0 - af);
        let f_ad = c1 - 2.0 * c2 - tail;
        let f_prime_ad = 2.0 * c1 - 4.0 * c2 - (1.0 - 0.5f64.powi(m_terms as i32)) * 2.0 * tail;
        Ok(ConstantBundle {
            a: af,
            delta: df,
            c1,
            c2,
            c_delta: q.value,
            f_ad,
            f_prime_ad,
            m_terms,
            quad_err: q.error,
        })
    }

    /// `f_ad` recomposed from the stored components.
    pub fn recomposed_f_ad(&self) -> f64 {
        self.c1 - 2.0 * self.c2 - 2.0 * self.delta * self.c_delta / (1.0 - self.a)
    }
}

/// Partial Euler product for the arithmetic factor of every lower bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularSeries {
    pub b: u64,
    /// `prod_{2 < p <= truncation_prime} (1 - 1/(p-1)^2)`.
    pub twin_factor: f64,
    /// `prod_{2 < p | b} (p-1)/(p-2)`.
    pub b_factor: f64,
    pub truncation_prime: u64,
    /// The infinite product lies in `[twin_factor - tail_bound, twin_factor]`.
    pub tail_bound: f64,
}

impl SingularSeries {
    pub fn value(&self) -> f64 {
        self.twin_factor * self.b_factor
    }
}

pub const DEFAULT_TRUNCATION: u64 = 10_000_000;

/// Odd prime divisors of `n` by trial division.
pub fn odd_prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n % 2 == 0 && n > 0 {
        n /= 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 2;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn b_factor(b: u64) -> f64 {
    odd_prime_divisors(b)
        .into_iter()
        .map(|p| (p - 1) as f64 / (p - 2) as f64)
        .product()
}

/// Singular series truncated at the largest prime `<= truncation_prime`.
pub fn singular_series(b: u64, truncation_prime: u64) -> Result<SingularSeries> {
    if truncation_prime < 3 {
        return domain(format!("truncation prime must be at least 3, got {truncation_prime}"));
    }
    let table = PrimeTable::sieve(truncation_prime)?;
    singular_series_with(b, &table)
}

/// Singular series truncated at the top of an existing table.
pub fn singular_series_with(b: u64, table: &PrimeTable) -> Result<SingularSeries> {
    if b == 0 || b % 2 == 0 {
        return domain(format!("b must be a positive odd integer, got {b}"));
    }
    if table.limit() < 3 {
        return Err(Error::TableTooSmall { needed: 3, limit: table.limit() });
    }
    // log-sum keeps ten million factors from drifting
    let mut log_sum = 0.0f64;
    let mut largest = 3;
    for p in table.iter().skip(1) {
        let d = (p - 1) as f64;
        log_sum += (-1.0 / (d * d)).ln_1p();
        largest = p;
    }
    let twin_factor = log_sum.exp();
    // -log(1 - 1/(p-1)^2) <= 2/(p-1)^2, and sum_{n > P} 2/(n-1)^2 <= 2/(P-1)
    let tail_log = 2.0 / (largest - 1) as f64;
    Ok(SingularSeries {
        b,
        twin_factor,
        b_factor: b_factor(b),
        truncation_prime: largest,
        tail_bound: twin_factor * tail_log,
    })
}

/// Mertens-type product `V(z)` and its leading asymptotic form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MertensProduct {
    pub z: f64,
    /// `prod_{p < z, p does not divide 2b} (1 - 1/(p-1))`.
    pub exact: f64,
    /// `2 prod_{2<q|b} (q-1)/(q-2) * prod_{p>2} (1 - 1/(p-1)^2) * e^-gamma / log z`.
    pub asymptotic: f64,
}

pub fn mertens_v(z: f64, b: u64, primes: &PrimeTable) -> Result<MertensProduct> {
    if !(z >= 3.0) {
        return domain(format!("z must be at least 3, got {z}"));
    }
    if b == 0 || b % 2 == 0 {
        return domain(format!("b must be a positive odd integer, got {b}"));
    }
    let cut = Threshold::from_real(z);
    // all primes p < z must be in the table
    let needed = cut.ceil() - 1;
    if primes.limit() < needed {
        return Err(Error::TableTooSmall { needed, limit: primes.limit() });
    }
    let exact = primes
        .iter()
        .take_while(|&p| cut.above(p))
        .filter(|&p| p != 2 && b % p != 0)
        .map(|p| 1.0 - 1.0 / (p - 1) as f64)
        .product();
    let series = singular_series_with(b, primes)?;
    let asymptotic = 2.0 * series.value() * (-EULER_GAMMA).exp() / z.ln();
    Ok(MertensProduct { z, exact, asymptotic })
}

/// `li(x) = int_2^x dt / log t`, integrated in `u = log t` where the integrand
/// `e^u / u` is smooth.
pub fn log_integral(x: f64, tol: f64) -> Result<Quadrature> {
    if !(x >= 2.0) {
        return domain(format!("li(x) is defined here for x >= 2, got {x}"));
    }
    adaptive_simpson(|u: f64| u.exp() / u, LN_2, x.ln(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn sieve_function_initial_values() {
        assert!((upper_sieve_f(1.0).unwrap() - 3.562_144_835_980_396).abs() < 1e-14);
        assert!((upper_sieve_f(2.0).unwrap() - G.exp()).abs() < 1e-15);
        assert!((upper_sieve_f(3.0).unwrap() - 2.0 * G.exp() / 3.0).abs() < 1e-15);
        assert_eq!(lower_sieve_f(2.0).unwrap(), 0.0);
        assert!((lower_sieve_f(4.0).unwrap() - G.exp() / 2.0 * 3f64.ln()).abs() < 1e-15);
        assert!((lower_sieve_f(3.0).unwrap() - 2.0 * G.exp() / 3.0 * LN_2).abs() < 1e-15);
        assert!(upper_sieve_f(0.99).is_err());
        assert!(upper_sieve_f(3.01).is_err());
        assert!(lower_sieve_f(1.5).is_err());
        assert!(lower_sieve_f(4.5).is_err());
    }

    #[test]
    fn c1_at_log_argument_one_vanishes() {
        // (1-2a)/(2 delta (1-a)) = 2 with a = 0 means delta = 1/4
        assert_eq!(c1(0.0, 0.25).unwrap(), 0.0);
        assert!(c1(0.0, 0.5).is_err());
        assert!(c1(0.5, 0.1).is_err());
    }

    #[test]
    fn c2_at_one_third_keeps_only_second_log() {
        let v = c2(0.0, ONE_THIRD).unwrap();
        let r: f64 = 1.0;
        let expect = -ONE_THIRD * ((1.0 - 2.0 / 3.0 * r) / (1.0 - 2.0 / 3.0 * r)).ln();
        assert!((v - expect).abs() < 1e-15);
        assert!(c2(0.3, 0.1).is_err());
    }

    #[test]
    fn c_delta_vanishes_at_one_third() {
        assert_eq!(c_delta(ONE_THIRD, 1e-12).unwrap().value, 0.0);
        assert!(c_delta(0.0, 1e-12).is_err());
        assert!(c_delta(0.34, 1e-12).is_err());
    }

    #[test]
    fn c_delta_m_edges() {
        let delta = 85.0 / 688.0;
        let lnp = 1e6f64.ln();
        assert_eq!(
            c_delta_m(delta, lnp, 0, 1e-12).unwrap().value,
            c_delta(delta, 1e-12).unwrap().value
        );
        // choose log N' so that the lower limit is exactly 1/3 at m = 1:
        // delta L / (L - ln 2) = 1/3  <=>  L = ln 2 / (1 - 3 delta)
        let l = LN_2 / (1.0 - 3.0 * delta);
        assert_eq!(c_delta_m(delta, l, 1, 1e-12).unwrap().value, 0.0);
        assert!(c_delta_m(delta, l, 2, 1e-12).is_err());
        assert!(c_delta_m(delta, 3.0, 5, 1e-12).is_err());
    }

    #[test]
    fn f_prime_needs_positive_m() {
        assert!(f_prime_ad(1.0 / 87.0, 85.0 / 688.0, 0, 1e-12).is_err());
    }

    #[test]
    fn b_factor_small_cases() {
        assert_eq!(b_factor(1), 1.0);
        assert_eq!(b_factor(3), 2.0);
        assert_eq!(b_factor(9), 2.0);
        assert!((b_factor(15) - 2.0 * 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(odd_prime_divisors(2 * 9 * 25 * 7), vec![3, 5, 7]);
    }

    #[test]
    fn mertens_small_products() {
        let t = PrimeTable::sieve(100).unwrap();
        assert_eq!(mertens_v(3.0, 1, &t).unwrap().exact, 1.0);
        assert_eq!(mertens_v(6.0, 1, &t).unwrap().exact, 3.0 / 8.0);
        // b = 3 removes the factor at p = 3
        assert_eq!(mertens_v(6.0, 3, &t).unwrap().exact, 0.75);
        assert!(mertens_v(2.0, 1, &t).is_err());
        assert!(mertens_v(6.0, 2, &t).is_err());
        assert!(matches!(mertens_v(500.0, 1, &t), Err(Error::TableTooSmall { .. })));
    }

    #[test]
    fn li_edges() {
        assert_eq!(log_integral(2.0, 1e-9).unwrap().value, 0.0);
        assert!(log_integral(1.9, 1e-9).is_err());
    }
}
