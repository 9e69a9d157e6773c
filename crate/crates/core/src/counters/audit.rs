//! Exhaustive check of the weighted decomposition behind the `n_2` lower bound.

use serde::{Deserialize, Serialize};

use super::weights::{membership_s, weight_terms, Window};
use super::{check_b, count_n2, Tables};
use crate::error::{domain, Result};
use crate::rational::{gcd_u64, rat, Rational};

/// Witnesses kept per finding.
pub const WITNESS_CAP: usize = 16;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub n: u64,
    pub b: u64,
    pub k: u32,
    pub delta: String,
    pub n_prime: f64,
    pub z: f64,
    pub y: f64,
    /// Integers `n <= N'` coprime to `2b` with no prime factor below `z`.
    pub swept: u64,
    /// `|A|`: odd `n <= N'` with `2^k n + b` prime.
    pub a_elements: u64,
    /// Elements of `A` sharing a factor with `b`; the construction rules these out.
    pub a_not_coprime: u64,
    pub a_sifted: u64,
    pub weight_above_one: u64,
    /// Swept `n` with positive weight outside `S`.
    pub positive_outside_s: u64,
    pub witnesses: Vec<u64>,
    /// Swept `n = p1 p2` with positive weight and both factors `>= y`.
    pub narrow_exceptions: u64,
    pub narrow_witnesses: Vec<u64>,
    /// `n <= N'` where the multiplicity sum differs from distinct plus excess.
    pub split_mismatches: u64,
    /// `sum w(n)` over the sifted part of `A`.
    pub weighted_sum: f64,
    /// Sifted elements of `A` lying in `S`.
    pub s_count: u64,
    pub n2_count: u64,
    /// `sum (k - 1)` over sifted `n in A` and `q^k || n`, `k >= 2`, `z <= q < y`.
    pub excess_sum: u64,
    /// `N' sum_{z <= q < y} 1/(q-1)^2`.
    pub excess_bound: f64,
    /// `2 N' / z`.
    pub discard_bound: f64,
    /// Sifted `n in A` with a representation `p1 p2 p3` in the window.
    pub triple_count: u64,
}

impl AuditReport {
    pub fn weighted_sum_holds(&self) -> bool {
        self.weighted_sum <= self.s_count as f64 && self.s_count <= self.n2_count
    }

    pub fn excess_holds(&self) -> bool {
        self.excess_sum as f64 <= self.excess_bound && self.excess_bound <= self.discard_bound
    }

    /// Number of failed pointwise checks plus one per failed aggregate check.
    pub fn violations(&self) -> u64 {
        self.weight_above_one
            + self.positive_outside_s
            + self.split_mismatches
            + self.a_not_coprime
            + !self.weighted_sum_holds() as u64
            + !self.excess_holds() as u64
    }

    pub fn is_clean(&self) -> bool {
        self.violations() == 0
    }
}

/// Sweeps every `n <= N' = N/2^k` once, with `z = N'^delta` and `y = N'^(1/3)`.
///
/// Single-threaded so witnesses come out in increasing order.
pub fn decomposition_audit(n: u64, b: u64, k: u32, delta: &Rational, tables: &Tables) -> Result<AuditReport> {
    check_b(b)?;
    if *delta <= rat(0, 1) || *delta >= rat(1, 3) {
        return domain(format!("delta must lie in (0, 1/3), got {delta}"));
    }
    let mut report = AuditReport { n, b, k, delta: delta.to_string(), ..Default::default() };
    if k >= 63 || (1u64 << k) >= n {
        // A is empty
        report.n_prime = if k >= 63 { 0.0 } else { n as f64 / (1u64 << k) as f64 };
        return Ok(report);
    }
    let np = n >> k;
    tables.primes.ensure_covers(n + b)?;
    tables.spf.ensure_covers(np)?;
    let w = Window::new(n, k, delta)?;
    report.n_prime = n as f64 / (1u64 << k) as f64;
    report.z = w.z.value;
    report.y = w.y.value;
    report.discard_bound = 2.0 * report.n_prime / w.z.value;
    report.excess_bound = report.n_prime
        * tables
            .primes
            .range(w.z.ceil(), w.y.ceil().saturating_sub(1))
            .map(|q| 1.0 / ((q - 1) as f64).powi(2))
            .sum::<f64>();

    let mut halves: i64 = 0;
    for m in 1..=np {
        let terms = weight_terms(m, &w, &tables.spf)?;
        if terms.multiplicity != terms.distinct + terms.excess {
            report.split_mismatches += 1;
        }
        let p = (m << k) + b;
        let in_a = m % 2 == 1 && tables.primes.is_prime(p);
        if in_a {
            report.a_elements += 1;
            if gcd_u64(m, b) != 1 {
                report.a_not_coprime += 1;
            }
        }
        if m % 2 == 0 || gcd_u64(m, b) != 1 {
            continue;
        }
        if m > 1 && !w.z.at_most(tables.spf.spf(m)) {
            continue;
        }
        report.swept += 1;
        let weight = terms.weight();
        if *weight.numer() > *weight.denom() {
            report.weight_above_one += 1;
        }
        let positive = *weight.numer() > 0;
        let in_s = membership_s(m, &w, &tables.spf)?;
        if positive && !in_s {
            report.positive_outside_s += 1;
            if report.witnesses.len() < WITNESS_CAP {
                report.witnesses.push(m);
            }
        }
        if positive && in_s {
            let fs = tables.spf.prime_factors(m)?;
            if fs.len() == 2 && w.y.at_most(fs[0]) {
                report.narrow_exceptions += 1;
                if report.narrow_witnesses.len() < WITNESS_CAP {
                    report.narrow_witnesses.push(m);
                }
            }
        }
        if in_a {
            report.a_sifted += 1;
            halves += 2 - terms.multiplicity as i64 - terms.triples as i64;
            report.s_count += in_s as u64;
            report.excess_sum += terms.excess as u64;
            report.triple_count += terms.triples as u64;
        }
    }
    report.weighted_sum = halves as f64 / 2.0;
    report.n2_count = count_n2(n, b, k, delta, tables)?;
    Ok(report)
}
