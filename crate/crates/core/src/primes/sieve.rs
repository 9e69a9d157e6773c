use rayon::prelude::*;

use crate::error::{Error, Result};

/// Hard ceiling on the sieve limit.
pub const SIEVE_CEILING: u64 = 20_000_000_000;

/// Odd numbers per segment; a multiple of 64 so segments own whole words.
const SEGMENT_BITS: usize = 1 << 20;
const SEGMENT_WORDS: usize = SEGMENT_BITS / 64;

/// Primality of every integer up to `limit`, stored as an odd-only bitset.
///
/// Bit `i` of the packed words stands for the odd number `2i + 1`; the prime 2
/// is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    bits: Vec<u64>,
    count: u64,
}

fn odd_slots(limit: u64) -> u64 {
    (limit + 1) / 2
}

/// Plain sieve for the base primes up to `n`.
fn small_odd_primes(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    let mut i = 3;
    while i <= n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn sieve_segment(words: &mut [u64], first_slot: u64, base: &[u64]) {
    words.fill(!0);
    let slots = words.len() as u64 * 64;
    let lo = 2 * first_slot + 1;
    let hi = 2 * (first_slot + slots) - 1;
    for &p in base {
        let p2 = p * p;
        if p2 > hi {
            break;
        }
        let mut m = if p2 >= lo { p2 } else { lo.div_ceil(p) * p };
        if m % 2 == 0 {
            m += p;
        }
        let mut j = ((m - 1) / 2 - first_slot) as usize;
        let step = p as usize;
        let end = slots as usize;
        while j < end {
            words[j >> 6] &= !(1u64 << (j & 63));
            j += step;
        }
    }
}

impl PrimeTable {
    /// Segmented sieve of Eratosthenes up to and including `limit`.
    ///
    /// Segments are independent and sieved in parallel on the current rayon pool.
    pub fn sieve(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain(format!("sieve limit must be at least 2, got {limit}")));
        }
        if limit > SIEVE_CEILING {
            return Err(Error::Capacity {
                what: "sieve limit",
                requested: limit,
                ceiling: SIEVE_CEILING,
            });
        }
        let slots = odd_slots(limit);
        let nwords = slots.div_ceil(64) as usize;
        let base = small_odd_primes(isqrt(limit));
        let mut bits = vec![0u64; nwords];
        bits.par_chunks_mut(SEGMENT_WORDS)
            .enumerate()
            .for_each(|(seg, words)| {
                sieve_segment(words, (seg * SEGMENT_BITS) as u64, &base);
            });
        Ok(Self::from_raw(limit, bits))
    }

    /// Cleans the padding bits and the slot for 1, then counts.
    pub(crate) fn from_raw(limit: u64, mut bits: Vec<u64>) -> Self {
        bits[0] &= !1;
        let slots = odd_slots(limit);
        let tail = (slots % 64) as u32;
        if tail != 0 {
            let last = bits.len() - 1;
            bits[last] &= (1u64 << tail) - 1;
        }
        let odd: u64 = bits.iter().map(|w| w.count_ones() as u64).sum();
        PrimeTable {
            limit,
            bits,
            count: odd + 1,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Number of primes `<= limit`.
    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }


    /// # Panics
    /// If `n` exceeds the table limit.
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.limit, "{n} is beyond the prime table limit {}", self.limit);
        if n < 2 {
            return false;
        }
        if n % 2 == 0 {
            return n == 2;
        }
        let i = (n / 2) as usize;
        self.bits[i >> 6] >> (i & 63) & 1 == 1
    }

    pub fn ensure_covers(&self, n: u64) -> Result<()> {
        if n > self.limit {
            Err(Error::TableTooSmall { needed: n, limit: self.limit })
        } else {
            Ok(())
        }
    }

    /// `pi(x)` for `x <= limit`, by popcount of the bitset prefix.
    pub fn pi(&self, x: u64) -> Result<u64> {
        self.ensure_covers(x)?;
        if x < 2 {
            return Ok(0);
        }
        let slots = odd_slots(x) as usize;
        let full = slots / 64;
        let mut c: u64 = self.bits[..full].iter().map(|w| w.count_ones() as u64).sum();
        let rem = slots % 64;
        if rem != 0 {
            c += (self.bits[full] & ((1u64 << rem) - 1)).count_ones() as u64;
        }
        Ok(c + 1)
    }

    /// All primes in ascending order.
    pub fn iter(&self) -> Primes<'_> {
        self.range(2, self.limit)
    }

    /// Primes `p` with `lo <= p <= hi` (clamped to the table).
    pub fn range(&self, lo: u64, hi: u64) -> Primes<'_> {
        let hi = hi.min(self.limit);
        let emit_two = lo <= 2 && hi >= 2;
        let lo_odd = lo.max(3) | 1;
        let slot = (lo_odd / 2) as usize;
        let word = slot >> 6;
        let end_slot = if hi >= 3 { (hi - 1) / 2 + 1 } else { 0 } as usize;
        let current = if slot < end_slot && word < self.bits.len() {
            self.bits[word] & (!0u64 << (slot & 63))
        } else {
            0
        };
        Primes {
            bits: &self.bits,
            word,
            current,
            end_slot,
            emit_two,
        }
    }
}

pub struct Primes<'a> {
    bits: &'a [u64],
    word: usize,
    current: u64,
    end_slot: usize,
    emit_two: bool,
}

impl Iterator for Primes<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.emit_two {
            self.emit_two = false;
            return Some(2);
        }
        loop {
            if self.current != 0 {
                let slot = (self.word << 6) + self.current.trailing_zeros() as usize;
                if slot >= self.end_slot {
                    self.current = 0;
                    self.word = self.bits.len();
                    return None;
                }
                self.current &= self.current - 1;
                return Some(2 * slot as u64 + 1);
            }
            self.word += 1;
            if self.word >= self.bits.len() || (self.word << 6) >= self.end_slot {
                return None;
            }
            self.current = self.bits[self.word];
        }
    }
}
