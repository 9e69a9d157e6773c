//! Exact counts of primes `p <= N + b` whose shift `p - b` is `2^k` times an
//! odd number with few prime factors.
//!
//! Every counter walks the primes in `(b, N + b]`, keeps those with
//! `2^k | p - b`, and factors the odd part `m` of `p - b` with the
//! smallest-prime-factor table. Since `m <= N / 2^k`, that table only needs to
//! reach `floor(N / 2^k)`.

mod audit;
mod weights;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use audit::{decomposition_audit, AuditReport, WITNESS_CAP};
pub use weights::{
    chen_weight, membership_s, modified_weight, weight_terms, ModifiedWindow, WeightTerms, Weight,
    Window,
};

use crate::error::{domain, Error, Result};
use crate::primes::{cache, PrimeTable, SpfTable};
use crate::rational::{rat, Rational, Threshold};

/// Primes per parallel work unit, measured in integers of the range.
const BLOCK: u64 = 1 << 18;

/// The shifted value `p - b = 2^v2 * m` of one prime, with the shape of `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftedRecord {
    pub p: u64,
    pub v2: u32,
    pub m: u64,
    pub omega_odd: u32,
    pub big_omega_odd: u32,
    /// Smallest odd prime factor, 0 when `m = 1`.
    pub min_odd: u64,
    /// Largest odd prime factor, 0 when `m = 1`.
    pub max_odd: u64,
}

/// Record for an odd `m` already known to lie inside the table.
fn record(p: u64, v2: u32, m: u64, spf: &SpfTable) -> ShiftedRecord {
    let (mut omega, mut big_omega, mut min_odd, mut max_odd) = (0, 0, 0, 0);
    let mut rest = m;
    let mut last = 0;
    while rest > 1 {
        let q = spf.spf(rest);
        rest /= q;
        big_omega += 1;
        if q != last {
            omega += 1;
            last = q;
        }
        if min_odd == 0 {
            min_odd = q;
        }
        max_odd = q;
    }
    ShiftedRecord { p, v2, m, omega_odd: omega, big_omega_odd: big_omega, min_odd, max_odd }
}

pub fn factor_shift(p: u64, b: u64, spf: &SpfTable) -> Result<ShiftedRecord> {
    if p <= b {
        return domain(format!("p = {p} must exceed b = {b}"));
    }
    let d = p - b;
    let v2 = d.trailing_zeros();
    let m = d >> v2;
    spf.ensure_covers(m)?;
    Ok(record(p, v2, m, spf))
}

/// Whether odd prime factors are counted with multiplicity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorMode {
    #[default]
    Multiplicity,
    Distinct,
}

impl fmt::Display for FactorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactorMode::Multiplicity => "multiplicity",
            FactorMode::Distinct => "distinct",
        })
    }
}

impl FromStr for FactorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "multiplicity" => Ok(FactorMode::Multiplicity),
            "distinct" => Ok(FactorMode::Distinct),
            _ => Err(Error::Parse(format!("mode must be multiplicity or distinct, got {s:?}"))),
        }
    }
}

impl FactorMode {
    pub fn factors(self, r: &ShiftedRecord) -> u32 {
        match self {
            FactorMode::Multiplicity => r.big_omega_odd,
            FactorMode::Distinct => r.omega_odd,
        }
    }
}

/// Prime and smallest-prime-factor tables sized for one counting run.
#[derive(Clone, Debug)]
pub struct Tables {
    pub primes: PrimeTable,
    pub spf: SpfTable,
}

impl Tables {
    pub fn new(primes: PrimeTable, spf: SpfTable) -> Self {
        Tables { primes, spf }
    }

    /// Tables covering counts up to `N` with shift `b` and power `2^k`; the prime
    /// table goes through the `SIEVELAB_CACHE` directory when that is set.
    pub fn for_counting(n: u64, b: u64, k: u32) -> Result<Self> {
        let top = n.checked_add(b).ok_or_else(|| Error::Domain("N + b overflows".into()))?;
        let primes = cache::table_from_env(top.max(2))?;
        let spf = SpfTable::new(reduced(n, k))?;
        Ok(Tables { primes, spf })
    }
}

/// `floor(N / 2^k)`.
fn reduced(n: u64, k: u32) -> u64 {
    if k >= 64 {
        0
    } else {
        n >> k
    }
}

fn check_b(b: u64) -> Result<()> {
    if b == 0 || b % 2 == 0 {
        return domain(format!("b must be odd and positive, got {b}"));
    }
    Ok(())
}

/// Sum of `f(record)` over primes `b < p <= N + b` with `2^k | p - b`, in parallel blocks.
fn sum_over_shifts<F>(n: u64, b: u64, k: u32, tables: &Tables, f: F) -> Result<u64>
where
    F: Fn(&ShiftedRecord) -> bool + Sync,
{
    check_b(b)?;
    let top = n.checked_add(b).ok_or_else(|| Error::Domain("N + b overflows".into()))?;
    tables.primes.ensure_covers(top)?;
    if k >= 64 || (1u64 << k) > n {
        return Ok(0);
    }
    tables.spf.ensure_covers(reduced(n, k))?;
    let mask = (1u64 << k) - 1;
    let blocks: Vec<(u64, u64)> = (0..n.div_ceil(BLOCK))
        .map(|i| (b + 1 + i * BLOCK, (b + (i + 1) * BLOCK).min(top)))
        .collect();
    let total = blocks
        .par_iter()
        .map(|&(lo, hi)| {
            tables
                .primes
                .range(lo, hi)
                .filter(|&p| (p - b) & mask == 0)
                .filter(|&p| {
                    let d = p - b;
                    let v2 = d.trailing_zeros();
                    f(&record(p, v2, d >> v2, &tables.spf))
                })
                .count() as u64
        })
        .sum();
    Ok(total)
}

/// `s_K(N)`: primes with `2^k | p - b` and at most `K` odd prime factors.
pub fn count_sk(n: u64, b: u64, k: u32, big_k: u32, mode: FactorMode, tables: &Tables) -> Result<u64> {
    sum_over_shifts(n, b, k, tables, |r| mode.factors(r) <= big_k)
}

fn check_zexp(zexp: &Rational) -> Result<()> {
    if *zexp <= rat(0, 1) || *zexp >= rat(1, 3) {
        return domain(format!("zexp must lie in (0, 1/3), got {zexp}"));
    }
    Ok(())
}

/// `m` is a product of at most two primes, all above `z`; `m = 1` qualifies.
fn is_p2(r: &ShiftedRecord, z: &Threshold) -> bool {
    r.big_omega_odd <= 2 && (r.m == 1 || z.exceeded_by(r.min_odd))
}

/// `n_2(N)`: primes with `2^k` exactly dividing `p - b` and odd part a `P_2(N'^zexp)`.
pub fn count_n2(n: u64, b: u64, k: u32, zexp: &Rational, tables: &Tables) -> Result<u64> {
    check_zexp(zexp)?;
    if k >= 64 || (1u64 << k) > n {
        return sum_over_shifts(n, b, k, tables, |_| false);
    }
    let z = Threshold::reduced_power(n, k, zexp)?;
    sum_over_shifts(n, b, k, tables, |r| r.v2 == k && is_p2(r, &z))
}

/// `s_2(N)`: as [`count_n2`] but with `2^k | p - b` only.
pub fn count_s2(n: u64, b: u64, k: u32, zexp: &Rational, tables: &Tables) -> Result<u64> {
    check_zexp(zexp)?;
    if k >= 64 || (1u64 << k) > n {
        return sum_over_shifts(n, b, k, tables, |_| false);
    }
    let z = Threshold::reduced_power(n, k, zexp)?;
    sum_over_shifts(n, b, k, tables, |r| is_p2(r, &z))
}

/// The primes counted by `s_K(N_max)`, in order, so that `s_K(N)` for every
/// `N <= N_max` is a prefix count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountProfile {
    pub b: u64,
    pub n_max: u64,
    pub primes: Vec<u64>,
}

impl CountProfile {
    /// `s_K(N)` for `N <= n_max`.
    pub fn count_at(&self, n: u64) -> Result<u64> {
        if n > self.n_max {
            return domain(format!("N = {n} is beyond the profile range {}", self.n_max));
        }
        Ok(self.primes.partition_point(|&p| p <= n + self.b) as u64)
    }
}

pub fn sk_profile(
    n_max: u64,
    b: u64,
    k: u32,
    big_k: u32,
    mode: FactorMode,
    tables: &Tables,
) -> Result<CountProfile> {
    check_b(b)?;
    let top = n_max.checked_add(b).ok_or_else(|| Error::Domain("N + b overflows".into()))?;
    tables.primes.ensure_covers(top)?;
    let mut primes = Vec::new();
    if k < 64 && (1u64 << k) <= n_max {
        tables.spf.ensure_covers(reduced(n_max, k))?;
        let mask = (1u64 << k) - 1;
        for p in tables.primes.range(b + 1, top) {
            let d = p - b;
            if d & mask != 0 {
                continue;
            }
            let v2 = d.trailing_zeros();
            if mode.factors(&record(p, v2, d >> v2, &tables.spf)) <= big_k {
                primes.push(p);
            }
        }
    }
    Ok(CountProfile { b, n_max, primes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tables(n: u64, b: u64, k: u32) -> Tables {
        Tables::new(PrimeTable::sieve((n + b).max(2)).unwrap(), SpfTable::new(n >> k).unwrap())
    }

    #[test]
    fn shift_records() {
        let spf = SpfTable::new(100).unwrap();
        let r = factor_shift(13, 1, &spf).unwrap();
        assert_eq!((r.v2, r.m, r.big_omega_odd), (2, 3, 1));
        let r = factor_shift(17, 1, &spf).unwrap();
        assert_eq!((r.v2, r.m, r.big_omega_odd, r.min_odd, r.max_odd), (4, 1, 0, 0, 0));
        let r = factor_shift(61, 1, &spf).unwrap();
        assert_eq!((r.v2, r.m, r.big_omega_odd, r.min_odd, r.max_odd), (2, 15, 2, 3, 5));
        let r = factor_shift(101, 11, &spf).unwrap();
        assert_eq!((r.v2, r.m, r.omega_odd, r.big_omega_odd), (1, 45, 2, 3));
        assert!(factor_shift(3, 3, &spf).is_err());
        assert!(matches!(factor_shift(1_000_003, 1, &spf), Err(Error::TableTooSmall { .. })));
    }

    #[test]
    fn small_sk_counts() {
        let t = tables(20, 1, 0);
        assert_eq!(count_sk(20, 1, 2, 1, FactorMode::Multiplicity, &t).unwrap(), 3);
        assert_eq!(count_sk(20, 1, 5, 4, FactorMode::Multiplicity, &t).unwrap(), 0);
        // K large: every prime 1 < p <= 21 with 4 | p - 1
        assert_eq!(count_sk(20, 1, 2, 10, FactorMode::Distinct, &t).unwrap(), 3);
        assert!(count_sk(20, 2, 2, 1, FactorMode::Distinct, &t).is_err());
        assert!(count_sk(30, 1, 2, 1, FactorMode::Distinct, &t).is_err());
    }

    #[test]
    fn small_n2_and_s2_counts() {
        let t = tables(100, 1, 0);
        let tiny = rat(1, 100);
        assert_eq!(count_n2(100, 1, 2, &tiny, &t).unwrap(), 7);
        assert_eq!(count_n2(20, 1, 10, &tiny, &t).unwrap(), 0);
        // all twelve p = 1 (mod 4) up to 101 have odd part 1, q, q^2 or 15
        assert_eq!(count_s2(100, 1, 2, &tiny, &t).unwrap(), 12);
        assert!(count_n2(100, 1, 2, &rat(1, 3), &t).is_err());
    }

    #[test]
    fn profile_prefix_counts_match_direct_counts() {
        let t = tables(5000, 9, 0);
        let prof = sk_profile(5000, 9, 1, 2, FactorMode::Multiplicity, &t).unwrap();
        for n in [1, 2, 10, 100, 999, 4321, 5000] {
            assert_eq!(
                prof.count_at(n).unwrap(),
                count_sk(n, 9, 1, 2, FactorMode::Multiplicity, &t).unwrap()
            );
        }
        assert!(prof.count_at(5001).is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("distinct".parse::<FactorMode>().unwrap(), FactorMode::Distinct);
        assert!("both".parse::<FactorMode>().is_err());
        assert_eq!(FactorMode::Multiplicity.to_string(), "multiplicity");
    }
}
