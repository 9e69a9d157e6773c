use crate::error::{Error, Result};

/// Default memory budget for the smallest-prime-factor table.
pub const SPF_CEILING: u64 = 1 << 31;

/// Smallest prime factor of every `n` in `[2, limit]`, built by a linear sieve.
#[derive(Clone, Debug)]
pub struct SpfTable {
    limit: u64,
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_ceiling(limit, SPF_CEILING)
    }

    pub fn with_ceiling(limit: u64, ceiling: u64) -> Result<Self> {
        if limit > ceiling || limit > u32::MAX as u64 {
            return Err(Error::Capacity {
                what: "smallest-prime-factor limit",
                requested: limit,
                ceiling: ceiling.min(u32::MAX as u64),
            });
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n.max(1) + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let ip = i * p as usize;
                if p > si || ip > n {
                    break;
                }
                spf[ip] = p;
            }
        }
        Ok(SpfTable { limit, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn ensure_covers(&self, n: u64) -> Result<()> {
        if n > self.limit {
            Err(Error::TableTooSmall { needed: n, limit: self.limit })
        } else {
            Ok(())
        }
    }

    /// Smallest prime factor of `n >= 2`.
    ///
    /// # Panics
    /// If `n < 2` or `n` exceeds the table limit.
    pub fn spf(&self, n: u64) -> u64 {
        assert!(n >= 2, "spf is defined for n >= 2");
        self.spf[n as usize] as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf(n) == n
    }

    /// Prime factorization as `(prime, exponent)` pairs in increasing order.
    pub fn factorize(&self, mut n: u64) -> Result<Vec<(u64, u32)>> {
        self.ensure_covers(n)?;
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            n /= p;
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        Ok(out)
    }

    /// Prime factors with multiplicity, ascending.
    pub fn prime_factors(&self, mut n: u64) -> Result<Vec<u64>> {
        self.ensure_covers(n)?;
        let mut out = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            out.push(p);
            n /= p;
        }
        Ok(out)
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self, n: u64) -> Result<u32> {
        Ok(self.prime_factors(n)?.len() as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_values() {
        let t = SpfTable::new(1000).unwrap();
        assert_eq!(t.spf(49), 7);
        assert_eq!(t.spf(12), 2);
        assert_eq!(t.spf(997), 997);
        assert_eq!(t.big_omega(720).unwrap(), 7);
        assert_eq!(t.factorize(720).unwrap(), vec![(2, 4), (3, 2), (5, 1)]);
        assert_eq!(t.factorize(1).unwrap(), vec![]);
        assert!(t.factorize(1001).is_err());
    }

    #[test]
    fn capacity_guard() {
        assert!(matches!(SpfTable::with_ceiling(101, 100), Err(Error::Capacity { .. })));
        assert!(SpfTable::new(0).is_ok());
    }

    #[test]
    fn spf_invariants() {
        let t = SpfTable::new(20_000).unwrap();
        for n in 2..=20_000u64 {
            let p = t.spf(n);
            assert_eq!(n % p, 0);
            assert!(t.is_prime(p));
            assert!(p * p <= n || p == n);
        }
    }
}
