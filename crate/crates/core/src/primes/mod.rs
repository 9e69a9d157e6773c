//! Prime generation, smallest-prime-factor tables, and prime counts in
//! arithmetic progressions together with their deviation from `li(x)/phi(q)`.

pub mod cache;
mod sieve;
mod spf;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use sieve::{PrimeTable, Primes, SIEVE_CEILING};
pub use spf::{SpfTable, SPF_CEILING};

use crate::constants::log_integral;
use crate::error::{domain, Result};
use crate::rational::gcd_u64;

/// Residues sampled per modulus when `phi(q d)` exceeds this.
pub const RESIDUE_SAMPLE: usize = 64;

/// Number of primes `p <= x` with `p = r (mod q)`.
pub fn prime_count_ap(x: u64, q: u64, r: u64, table: &PrimeTable) -> Result<u64> {
    if q == 0 {
        return domain("modulus must be positive");
    }
    if r >= q {
        return domain(format!("residue {r} is not reduced modulo {q}"));
    }
    table.ensure_covers(x)?;
    if q == 1 {
        return table.pi(x);
    }
    Ok(table.range(2, x).filter(|p| p % q == r).count() as u64)
}

/// Euler's totient by trial-division factorization.
pub fn totient(q: u64) -> u64 {
    let mut n = q;
    let mut phi = q as u128;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi = phi / p as u128 * (p - 1) as u128;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        phi = phi / n as u128 * (n - 1) as u128;
    }
    phi as u64
}

pub fn is_squarefree(n: u64) -> bool {
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// One row of `delta(x, q, r) = pi(x; q, r) - li(x)/phi(q)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquidistRow {
    pub x: f64,
    pub modulus: u64,
    pub residue: u64,
    pub pi_val: u64,
    pub li_over_phi: f64,
    pub error: f64,
}

fn check_progression(q: u64, r: u64) -> Result<()> {
    if q < 2 {
        return domain(format!("modulus must be at least 2, got {q}"));
    }
    if r >= q {
        return domain(format!("residue {r} is not reduced modulo {q}"));
    }
    if gcd_u64(r, q) != 1 {
        return domain(format!("residue {r} is not coprime to {q}"));
    }
    Ok(())
}

pub fn equidist_error(x: u64, q: u64, r: u64, table: &PrimeTable, tol: f64) -> Result<EquidistRow> {
    check_progression(q, r)?;
    let pi_val = prime_count_ap(x, q, r, table)?;
    let li = if x >= 2 { log_integral(x as f64, tol)?.value } else { 0.0 };
    let li_over_phi = li / totient(q) as f64;
    Ok(EquidistRow {
        x: x as f64,
        modulus: q,
        residue: r,
        pi_val,
        li_over_phi,
        error: pi_val as f64 - li_over_phi,
    })
}

/// Contribution of one `d` to [`averaged_error`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusTerm {
    pub d: u64,
    pub modulus: u64,
    pub residues_checked: usize,
    /// Residue attaining the maximum.
    pub worst_residue: u64,
    pub max_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AveragedError {
    pub x: u64,
    pub qpow: u64,
    pub dmax: u64,
    pub total: f64,
    pub terms: Vec<ModulusTerm>,
}

impl AveragedError {
    /// `total / (x / log x)`.
    pub fn normalized(&self) -> f64 {
        let x = self.x as f64;
        self.total / (x / x.ln())
    }
}

/// Desk-scale surrogate for the averaged progression error: the sum over odd
/// squarefree `d <= dmax` of the largest `|delta(x, qpow d, r)|` over the
/// residues `r` coprime to `qpow d`.
///
/// When `phi(qpow d)` exceeds [`RESIDUE_SAMPLE`] only that many residues are
/// checked, drawn by a ChaCha8 generator seeded from `seed` and `d`.
pub fn averaged_error(
    x: u64,
    qpow: u64,
    dmax: u64,
    table: &PrimeTable,
    seed: u64,
    tol: f64,
) -> Result<AveragedError> {
    if qpow < 2 || !qpow.is_power_of_two() {
        return domain(format!("qpow must be a power of two >= 2, got {qpow}"));
    }
    if dmax == 0 {
        return domain("Dmax must be positive");
    }
    table.ensure_covers(x)?;
    if qpow.saturating_mul(dmax) > x {
        return domain(format!("largest modulus {qpow} * {dmax} exceeds x = {x}"));
    }
    let li = if x >= 2 { log_integral(x as f64, tol)?.value } else { 0.0 };
    let mut terms = Vec::new();
    for d in (1..=dmax).step_by(2).filter(|&d| is_squarefree(d)) {
        let modulus = qpow * d;
        let mut counts = vec![0u64; modulus as usize];
        for p in table.range(2, x) {
            counts[(p % modulus) as usize] += 1;
        }
        let coprime: Vec<u64> = (1..modulus).filter(|&r| gcd_u64(r, modulus) == 1).collect();
        let chosen: Vec<u64> = if coprime.len() <= RESIDUE_SAMPLE {
            coprime
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ d.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut picked: Vec<u64> = sample(&mut rng, coprime.len(), RESIDUE_SAMPLE)
                .into_iter()
                .map(|i| coprime[i])
                .collect();
            picked.sort_unstable();
            picked
        };
        let expected = li / totient(modulus) as f64;
        let (worst_residue, max_error) = chosen
            .iter()
            .map(|&r| (r, (counts[r as usize] as f64 - expected).abs()))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        terms.push(ModulusTerm {
            d,
            modulus,
            residues_checked: chosen.len(),
            worst_residue,
            max_error,
        });
    }
    let total = terms.iter().map(|t| t.max_error).sum();
    Ok(AveragedError { x, qpow, dmax, total, terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn progression_counts() {
        let t = PrimeTable::sieve(1000).unwrap();
        assert_eq!(prime_count_ap(20, 4, 1, &t).unwrap(), 3);
        assert_eq!(prime_count_ap(10, 2, 0, &t).unwrap(), 1);
        assert_eq!(prime_count_ap(100, 1, 0, &t).unwrap(), 25);
        assert!(prime_count_ap(10, 4, 4, &t).is_err());
        assert!(prime_count_ap(2000, 4, 1, &t).is_err());
    }

    #[test]
    fn residues_partition_pi() {
        let t = PrimeTable::sieve(100_000).unwrap();
        for q in [3u64, 4, 8] {
            for x in [1000u64, 100_000] {
                let total: u64 = (0..q).map(|r| prime_count_ap(x, q, r, &t).unwrap()).sum();
                assert_eq!(total, t.pi(x).unwrap());
            }
        }
    }

    #[test]
    fn totient_values() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(8), 4);
        assert_eq!(totient(36), 12);
        assert_eq!(totient(97), 96);
        assert_eq!(totient(2 * 3 * 5 * 7 * 11), 480);
    }

    #[test]
    fn equidist_rows() {
        let t = PrimeTable::sieve(1000).unwrap();
        let row = equidist_error(2, 4, 3, &t, 1e-9).unwrap();
        assert_eq!(row.pi_val, 0);
        assert_eq!(row.error, 0.0);
        let row = equidist_error(2, 3, 2, &t, 1e-9).unwrap();
        assert_eq!((row.pi_val, row.error), (1, 1.0));
        assert!(equidist_error(20, 4, 2, &t, 1e-9).is_err());
        assert!(equidist_error(20, 1, 0, &t, 1e-9).is_err());
        let row = equidist_error(20, 4, 1, &t, 1e-9).unwrap();
        assert_eq!(row.pi_val as f64, row.li_over_phi + row.error);
    }

    #[test]
    fn averaged_error_single_term() {
        let t = PrimeTable::sieve(10_000).unwrap();
        let avg = averaged_error(10_000, 8, 1, &t, 7, 1e-9).unwrap();
        assert_eq!(avg.terms.len(), 1);
        let direct = [1u64, 3, 5, 7]
            .iter()
            .map(|&r| equidist_error(10_000, 8, r, &t, 1e-9).unwrap().error.abs())
            .fold(0.0, f64::max);
        assert!((avg.total - direct).abs() < 1e-9);
        assert!(averaged_error(10_000, 1, 1, &t, 7, 1e-9).is_err());
        assert!(averaged_error(10_000, 6, 1, &t, 7, 1e-9).is_err());
    }

    #[test]
    fn averaged_error_is_seed_deterministic() {
        let t = PrimeTable::sieve(200_000).unwrap();
        // phi(8 * 105) = 192 > 64 forces sampling
        let a = averaged_error(200_000, 8, 105, &t, 42, 1e-6).unwrap();
        let b = averaged_error(200_000, 8, 105, &t, 42, 1e-6).unwrap();
        assert_eq!(a, b);
        assert!(a.terms.iter().any(|term| term.residues_checked == RESIDUE_SAMPLE));
        assert!(a.terms.iter().all(|term| term.d % 2 == 1 && is_squarefree(term.d)));
    }
}
