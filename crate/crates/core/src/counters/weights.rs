//! Chen weights and the set `S` they are designed to detect.
//!
//! For `z <= q < y` the weight subtracts half the multiplicity of every such
//! prime dividing `n`, and half of each representation `n = p1 p2 p3` with
//! `z <= p1 < y <= p2 <= p3`. Since `p1 < y <= p2`, such a representation has
//! `p1` as the smallest factor, so there is at most one per `n`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::primes::SpfTable;
use crate::rational::{rat, Rational, Threshold};

/// Weights are half-integers, kept exact.
pub type Weight = Ratio<i64>;

/// The pair `(z, y)` of sieve cut-offs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub z: Threshold,
    pub y: Threshold,
}

impl Window {
    /// `z = (N/2^k)^delta`, `y = (N/2^k)^(1/3)`.
    pub fn new(n: u64, k: u32, delta: &Rational) -> Result<Self> {
        Self::from_thresholds(
            Threshold::reduced_power(n, k, delta)?,
            Threshold::reduced_power(n, k, &rat(1, 3))?,
        )
    }

    pub fn from_reals(z: f64, y: f64) -> Result<Self> {
        Self::from_thresholds(Threshold::from_real(z), Threshold::from_real(y))
    }

    fn from_thresholds(z: Threshold, y: Threshold) -> Result<Self> {
        if !(z.value < y.value) {
            return domain(format!("need z < y, got z = {}, y = {}", z.value, y.value));
        }
        Ok(Window { z, y })
    }

    /// `z <= q < y`
    pub fn holds(&self, q: u64) -> bool {
        self.z.at_most(q) && self.y.above(q)
    }
}

/// The ingredients of a weight at one `n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightTerms {
    /// `sum k` over `q^k || n` with `z <= q < y`.
    pub multiplicity: u32,
    /// Number of distinct `q | n` with `z <= q < y`.
    pub distinct: u32,
    /// `sum (k - 1)` over the same `q` with `k >= 2`.
    pub excess: u32,
    /// Representations `n = p1 p2 p3` in the window (0 or 1 per window).
    pub triples: u32,
}

impl WeightTerms {
    pub fn weight(&self) -> Weight {
        Weight::new(2 - self.multiplicity as i64 - self.triples as i64, 2)
    }
}

fn factors(n: u64, spf: &SpfTable) -> Result<Vec<u64>> {
    if n == 0 {
        return domain("weights are defined for n >= 1");
    }
    spf.prime_factors(n)
}

fn first_sum(fs: &[u64], w: &Window) -> (u32, u32, u32) {
    let (mut mult, mut distinct, mut excess) = (0, 0, 0);
    let mut i = 0;
    while i < fs.len() {
        let q = fs[i];
        let mut j = i;
        while j < fs.len() && fs[j] == q {
            j += 1;
        }
        if w.holds(q) {
            let k = (j - i) as u32;
            mult += k;
            distinct += 1;
            excess += k - 1;
        }
        i = j;
    }
    (mult, distinct, excess)
}

/// `z <= r1 < y <= r2` on a sorted triple.
fn triple_in_window(fs: &[u64], z: &Threshold, y: &Threshold) -> bool {
    fs.len() == 3 && z.at_most(fs[0]) && y.above(fs[0]) && y.at_most(fs[1])
}

pub fn weight_terms(n: u64, w: &Window, spf: &SpfTable) -> Result<WeightTerms> {
    let fs = factors(n, spf)?;
    let (multiplicity, distinct, excess) = first_sum(&fs, w);
    let triples = triple_in_window(&fs, &w.z, &w.y) as u32;
    Ok(WeightTerms { multiplicity, distinct, excess, triples })
}

/// `w(n) = 1 - (1/2) sum_{z <= q < y, q^k || n} k - (1/2) #{n = p1 p2 p3 : z <= p1 < y <= p2 <= p3}`.
pub fn chen_weight(n: u64, w: &Window, spf: &SpfTable) -> Result<Weight> {
    Ok(weight_terms(n, w, spf)?.weight())
}

/// The window together with the shifted cut-offs `y_m = (N'/2^m)^(1/3)` for `0 <= m <= M`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModifiedWindow {
    pub base: Window,
    pub y_m: Vec<Threshold>,
}

impl ModifiedWindow {
    pub fn new(n: u64, k: u32, delta: &Rational, big_m: u32) -> Result<Self> {
        let base = Window::new(n, k, delta)?;
        let y_m = (0..=big_m)
            .map(|m| Threshold::reduced_power(n, k + m, &rat(1, 3)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModifiedWindow { base, y_m })
    }

    /// Cut-offs from reals, with `y_m = (N'/2^m)^(1/3)` where `log N' = log_np`.
    pub fn from_reals(z: f64, y: f64, big_m: u32, log_np: f64) -> Result<Self> {
        let base = Window::from_reals(z, y)?;
        let y_m = (0..=big_m)
            .map(|m| Threshold::from_real(((log_np - m as f64 * std::f64::consts::LN_2) / 3.0).exp()))
            .collect();
        Ok(ModifiedWindow { base, y_m })
    }

    pub fn big_m(&self) -> u32 {
        self.y_m.len() as u32 - 1
    }
}

/// `w'(n)`: the first sum of `w(n)`, and for each `m <= M` with `2^m | n` half
/// of each representation `n = 2^m p1 p2 p3` with `z <= p1 < y_m <= p2 <= p3`.
pub fn modified_weight(n: u64, mw: &ModifiedWindow, spf: &SpfTable) -> Result<Weight> {
    let fs = factors(n, spf)?;
    let (multiplicity, _, _) = first_sum(&fs, &mw.base);
    let twos = fs.iter().take_while(|&&q| q == 2).count();
    let triples = mw
        .y_m
        .iter()
        .enumerate()
        .take(twos + 1)
        .filter(|(m, y)| triple_in_window(&fs[*m..], &mw.base.z, y))
        .count() as i64;
    Ok(Weight::new(2 - multiplicity as i64 - triples, 2))
}

/// `n = 1`, a prime `>= z`, or `p1 p2` with `z <= p1 <= p2` and `p2 >= y`.
///
/// The last clause also admits products of two primes both `>= y`: their weight
/// is 1, so a classification of the positive-weight set must include them.
pub fn membership_s(n: u64, w: &Window, spf: &SpfTable) -> Result<bool> {
    let fs = factors(n, spf)?;
    Ok(match fs.as_slice() {
        [] => true,
        [p] => w.z.at_most(*p),
        [p1, p2] => w.z.at_most(*p1) && w.y.at_most(*p2),
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window() -> Window {
        // z = 5.5, y = 20
        Window::from_reals(5.5, 20.0).unwrap()
    }

    #[test]
    fn chen_weight_named_values() {
        let spf = SpfTable::new(100_000).unwrap();
        let w = window();
        assert_eq!(chen_weight(1, &w, &spf).unwrap(), Weight::from_integer(1));
        assert_eq!(chen_weight(7, &w, &spf).unwrap(), Weight::new(1, 2));
        // 7 * 23 * 29: 7 in [z, y), 23 and 29 >= y
        assert_eq!(chen_weight(7 * 23 * 29, &w, &spf).unwrap(), Weight::from_integer(0));
        // y itself is outside [z, y)
        let prime_y = Window::from_reals(5.5, 19.0).unwrap();
        assert_eq!(chen_weight(19 * 7, &prime_y, &spf).unwrap(), Weight::new(1, 2));
        // 7^2 * 11: multiplicity sum 3
        assert_eq!(chen_weight(7 * 7 * 11, &w, &spf).unwrap(), Weight::new(-1, 2));
        assert!(chen_weight(0, &w, &spf).is_err());
        assert!(chen_weight(100_001, &w, &spf).is_err());
    }

    #[test]
    fn exact_thresholds_decide_boundaries() {
        let spf = SpfTable::new(1000).unwrap();
        // N' = 1000: y = 10 exactly, so 10 is not below y
        let w = Window::new(1000, 0, &rat(1, 4)).unwrap();
        assert_eq!(w.y.floor, 10);
        assert!(w.holds(7));
        assert!(!w.holds(11));
        assert!(membership_s(7 * 11, &w, &spf).unwrap());
    }

    #[test]
    fn split_of_the_multiplicity_sum() {
        let spf = SpfTable::new(100_000).unwrap();
        let w = window();
        for n in 1..=100_000 {
            let t = weight_terms(n, &w, &spf).unwrap();
            assert_eq!(t.multiplicity, t.distinct + t.excess, "n = {n}");
        }
    }

    #[test]
    fn modified_weight_reduces_to_chen_weight_on_odd_n() {
        let spf = SpfTable::new(50_000).unwrap();
        let mw = ModifiedWindow::from_reals(5.5, 20.0, 4, 3.0 * 20f64.ln()).unwrap();
        for n in (1..50_000).step_by(2) {
            assert_eq!(
                modified_weight(n, &mw, &spf).unwrap(),
                chen_weight(n, &mw.base, &spf).unwrap(),
                "n = {n}"
            );
        }
        assert_eq!(modified_weight(1, &mw, &spf).unwrap(), Weight::from_integer(1));
    }

    #[test]
    fn modified_weight_sees_the_m1_window() {
        let spf = SpfTable::new(100_000).unwrap();
        // N' = 8000: y = 20, y_1 = 4000^(1/3) ~ 15.87
        let mw = ModifiedWindow::new(8000, 0, &rat(1, 5), 2).unwrap();
        assert_eq!(mw.base.y.floor, 20);
        assert_eq!(mw.y_m[1].floor, 15);
        // 2 * 7 * 17 * 19: 17 >= y_1 but 17 < y, so only the m = 1 term fires
        let n = 2 * 7 * 17 * 19;
        assert_eq!(weight_terms(n, &mw.base, &spf).unwrap().multiplicity, 3);
        assert_eq!(modified_weight(n, &mw, &spf).unwrap(), Weight::from_integer(-1));
        assert_eq!(chen_weight(n, &mw.base, &spf).unwrap(), Weight::new(-1, 2));
        // 2 * 7 * 23 * 29: first sum counts 7, triple 7 * 23 * 29 fires at m = 1
        let n = 2 * 7 * 23 * 29;
        assert_eq!(modified_weight(n, &mw, &spf).unwrap(), Weight::from_integer(0));
        assert_eq!(chen_weight(n, &mw.base, &spf).unwrap(), Weight::new(1, 2));
        // m above M is ignored
        let short = ModifiedWindow::new(8000, 0, &rat(1, 5), 0).unwrap();
        assert_eq!(modified_weight(n, &short, &spf).unwrap(), Weight::new(1, 2));
    }

    #[test]
    fn membership_named_cases() {
        let spf = SpfTable::new(10_000).unwrap();
        let w = window();
        assert!(membership_s(1, &w, &spf).unwrap());
        assert!(!membership_s(3, &w, &spf).unwrap());
        assert!(membership_s(7, &w, &spf).unwrap());
        assert!(membership_s(101, &w, &spf).unwrap());
        // both factors below y
        assert!(!membership_s(7 * 11, &w, &spf).unwrap());
        assert!(membership_s(7 * 23, &w, &spf).unwrap());
        assert!(membership_s(23 * 29, &w, &spf).unwrap());
        assert!(!membership_s(3 * 23, &w, &spf).unwrap());
        assert!(!membership_s(7 * 23 * 29, &w, &spf).unwrap());
    }

    #[test]
    fn window_needs_z_below_y() {
        assert!(Window::from_reals(5.0, 5.0).is_err());
    }
}
