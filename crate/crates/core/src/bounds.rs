//! Lower-bound formulas as numbers, and the rows that set a count against them.
//!
//! Every bound has the shape
//!
//! ```text
//! constant * twin_factor * b_factor * N' / (log N * log N')
//! ```
//!
//! with natural logarithms and `N' = N / 2^k`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::SingularSeries;
use crate::error::{domain, Error, Result};
use crate::params::{richert_a, richert_general_constant, richert_k3_constant, theta_of};
use crate::rational::to_f64;

pub const N2_CONSTANT: f64 = 0.0016;
pub const S2_CONSTANT: f64 = 0.0032;
pub const S8_CONSTANT: f64 = 52.0 / 3.0;

/// Which lower bound applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    N2,
    S2,
    S3,
    /// `4 <= K <= 7`.
    SK(u32),
    S8,
}

impl Theorem {
    /// The bound attached to a counted quantity; `None` for `s_K` outside `3..=8`.
    pub fn for_count(kind: CountKind, big_k: Option<u32>) -> Option<Theorem> {
        match (kind, big_k) {
            (CountKind::N2, _) => Some(Theorem::N2),
            (CountKind::S2, _) => Some(Theorem::S2),
            (CountKind::SK, Some(3)) => Some(Theorem::S3),
            (CountKind::SK, Some(k @ 4..=7)) => Some(Theorem::SK(k)),
            (CountKind::SK, Some(8)) => Some(Theorem::S8),
            (CountKind::SK, _) => None,
        }
    }

    pub fn constant(self, epsilon: f64) -> Result<f64> {
        match self {
            Theorem::N2 => Ok(N2_CONSTANT),
            Theorem::S2 => Ok(S2_CONSTANT),
            Theorem::S3 => Ok(richert_k3_constant(theta_of(1.0 / 6.0, epsilon)?)),
            Theorem::SK(k) => {
                if !(4..=7).contains(&k) {
                    return domain(format!("the s_K bound needs 4 <= K <= 7, got {k}"));
                }
                let a = to_f64(&richert_a(k)?);
                Ok(richert_general_constant(k, theta_of(a, epsilon)?))
            }
            Theorem::S8 => Ok(S8_CONSTANT),
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theorem::N2 => f.write_str("n2"),
            Theorem::S2 => f.write_str("s2"),
            Theorem::S3 => f.write_str("s3"),
            Theorem::SK(k) => write!(f, "s{k}"),
            Theorem::S8 => f.write_str("s8"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundSpec {
    pub theorem: Theorem,
    pub n: u64,
    pub b: u64,
    pub k: u32,
    pub epsilon: f64,
    pub singular: SingularSeries,
}

impl BoundSpec {
    pub fn new(theorem: Theorem, n: u64, b: u64, k: u32, epsilon: f64, singular: SingularSeries) -> Result<Self> {
        if singular.b != b {
            return domain(format!("singular series is for b = {}, not {b}", singular.b));
        }
        let spec = BoundSpec { theorem, n, b, k, epsilon, singular };
        spec.constant()?;
        Ok(spec)
    }

    pub fn constant(&self) -> Result<f64> {
        self.theorem.constant(self.epsilon)
    }
}

/// A bound and the width of its uncertainty from truncating the twin product.
/// The exact bound lies in `[value - err, value]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: f64,
    pub err: f64,
}

pub fn bound_value(spec: &BoundSpec) -> Result<BoundValue> {
    if spec.k >= 64 {
        return domain(format!("k = {} is too large", spec.k));
    }
    let np = spec.n as f64 / 2f64.powi(spec.k as i32);
    if !(np >= 3.0) {
        return domain(format!("N' = N / 2^k must be at least 3, got {np}"));
    }
    let c = spec.constant()?;
    let scale = spec.singular.b_factor * np / ((spec.n as f64).ln() * np.ln());
    Ok(BoundValue {
        value: c * spec.singular.twin_factor * scale,
        err: c * spec.singular.tail_bound * scale,
    })
}

/// The counted quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CountKind {
    #[serde(rename = "n2")]
    N2,
    #[serde(rename = "s2")]
    S2,
    #[serde(rename = "sK")]
    SK,
}

impl fmt::Display for CountKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountKind::N2 => "n2",
            CountKind::S2 => "s2",
            CountKind::SK => "sK",
        })
    }
}

impl FromStr for CountKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n2" => Ok(CountKind::N2),
            "s2" => Ok(CountKind::S2),
            "sK" => Ok(CountKind::SK),
            _ => Err(Error::Parse(format!("kind must be n2, s2 or sK, got {s:?}"))),
        }
    }
}

/// Whether a row sits inside the hypotheses of the theorem it is compared with.
/// Desk-scale rows never do: the modulus window and "N sufficiently large" are
/// not met.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    BeyondTheorem,
    WithinTheorem,
}

/// Rounds to 12 significant digits, so that the printed value reads back unchanged.
pub fn quantize(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// One count-versus-bound row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountResult {
    #[serde(rename = "N")]
    pub n: u64,
    pub b: u64,
    pub k: u32,
    pub kind: CountKind,
    #[serde(rename = "K")]
    pub big_k: Option<u32>,
    pub count: u64,
    pub bound: Option<f64>,
    pub bound_err: Option<f64>,
    pub ratio: Option<f64>,
    pub regime: Regime,
}

impl CountResult {
    /// A row with no applicable bound.
    pub fn unbounded(n: u64, b: u64, k: u32, kind: CountKind, big_k: Option<u32>, count: u64) -> Self {
        CountResult {
            n,
            b,
            k,
            kind,
            big_k,
            count,
            bound: None,
            bound_err: None,
            ratio: None,
            regime: Regime::BeyondTheorem,
        }
    }
}

/// Packages a count with the bound of `spec`; the ratio is `count / bound`.
pub fn compare(count: u64, kind: CountKind, big_k: Option<u32>, spec: &BoundSpec) -> Result<CountResult> {
    let bv = bound_value(spec)?;
    let bound = quantize(bv.value);
    let mut row = CountResult::unbounded(spec.n, spec.b, spec.k, kind, big_k, count);
    row.bound = Some(bound);
    row.bound_err = Some(quantize(bv.err));
    row.ratio = (bound > 0.0).then(|| quantize(count as f64 / bound));
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::singular_series;

    fn series(b: u64) -> SingularSeries {
        singular_series(b, 100_000).unwrap()
    }

    #[test]
    fn s2_is_twice_n2() {
        for (n, b, k) in [(1_000_000u64, 1u64, 3u32), (123_456_789, 15, 7), (10_000, 9, 0)] {
            let s = series(b);
            let n2 = bound_value(&BoundSpec::new(Theorem::N2, n, b, k, 0.01, s.clone()).unwrap()).unwrap();
            let s2 = bound_value(&BoundSpec::new(Theorem::S2, n, b, k, 0.01, s).unwrap()).unwrap();
            assert_eq!(s2.value, 2.0 * n2.value);
        }
    }

    #[test]
    fn theorem_selection() {
        assert_eq!(Theorem::for_count(CountKind::SK, Some(3)), Some(Theorem::S3));
        assert_eq!(Theorem::for_count(CountKind::SK, Some(6)), Some(Theorem::SK(6)));
        assert_eq!(Theorem::for_count(CountKind::SK, Some(8)), Some(Theorem::S8));
        assert_eq!(Theorem::for_count(CountKind::SK, Some(9)), None);
        assert!(Theorem::SK(3).constant(0.01).is_err());
        assert_eq!(Theorem::S8.constant(0.5).unwrap(), 52.0 / 3.0);
    }

    #[test]
    fn small_n_prime_is_rejected() {
        let spec = BoundSpec::new(Theorem::N2, 20, 1, 3, 0.01, series(1)).unwrap();
        assert!(bound_value(&spec).is_err());
        assert!(BoundSpec::new(Theorem::N2, 20, 3, 0, 0.01, series(1)).is_err());
    }

    #[test]
    fn zero_count_row() {
        let spec = BoundSpec::new(Theorem::S8, 1_000_000_000, 1, 11, 0.01, series(1)).unwrap();
        let row = compare(0, CountKind::SK, Some(8), &spec).unwrap();
        assert_eq!(row.ratio, Some(0.0));
        assert_eq!(row.regime, Regime::BeyondTheorem);
        assert!(row.bound.unwrap() > 0.0 && row.bound_err.unwrap() >= 0.0);
    }

    #[test]
    fn quantize_is_idempotent() {
        for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt() * 1e-9, 123_456_789.123_456_789] {
            let q = quantize(x);
            assert_eq!(quantize(q), q);
            assert!((q - x).abs() <= 1e-11 * x.abs());
        }
    }
}
