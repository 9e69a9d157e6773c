//! Parameter relations, admissible regions, and the search over the
//! Chen-weight objective.

use std::f64::consts::{E, LN_2};

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::constants::f_ad;
use crate::error::{domain, Error, Result};
use crate::rational::{k_for_exponent, rat, to_f64, Rational, Threshold};

/// Lower limit on `delta` under which the `S/T` comparison is proved.
pub const DELTA_FLOOR: f64 = 1.0 / (3.0 * E);

/// Quadrature tolerance used inside the optimizer.
const SEARCH_QUAD_TOL: f64 = 1e-12;

/// Golden ratio conjugate `(sqrt 5 - 1) / 2`.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// The parameter bundle of one counting problem.
#[derive(Clone, Debug, PartialEq)]
pub struct SieveParams {
    pub b: u64,
    pub n: u64,
    /// Power of two removed from `p - b`.
    pub k: u32,
    /// Exponent ratio with `2^k <= N^a`, when `k` came from the exponent policy.
    pub a: Option<Rational>,
    pub delta: Rational,
    pub epsilon: f64,
}

impl SieveParams {
    pub fn new(n: u64, b: u64, k: u32, delta: Rational) -> Result<Self> {
        if b == 0 || b % 2 == 0 {
            return domain(format!("b must be odd and positive, got {b}"));
        }
        if k >= 64 || (1u64 << k) >= n {
            return domain(format!("N' = N / 2^k must exceed 1 (N = {n}, k = {k})"));
        }
        if !delta.is_positive() || delta >= rat(1, 3) {
            return domain(format!("delta must lie in (0, 1/3), got {delta}"));
        }
        Ok(SieveParams { b, n, k, a: None, delta, epsilon: 0.01 })
    }

    /// `k` chosen as the largest integer with `2^k <= N^a`.
    pub fn from_exponent(n: u64, b: u64, a: Rational, delta: Rational) -> Result<Self> {
        if !a.is_positive() || a >= Rational::one() {
            return domain(format!("exponent ratio a must lie in (0, 1), got {a}"));
        }
        let k = k_for_exponent(n, &a)?;
        let mut p = Self::new(n, b, k, delta)?;
        p.a = Some(a);
        Ok(p)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return domain(format!("epsilon must be positive, got {epsilon}"));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    /// `N' = N / 2^k` as a real.
    pub fn n_prime(&self) -> f64 {
        self.n as f64 / 2f64.powi(self.k as i32)
    }

    pub fn log_n_prime(&self) -> f64 {
        (self.n as f64).ln() - self.k as f64 * LN_2
    }

    /// `z = N'^delta`.
    pub fn z(&self) -> Result<Threshold> {
        Threshold::reduced_power(self.n, self.k, &self.delta)
    }

    /// `y = N'^(1/3)`.
    pub fn y(&self) -> Result<Threshold> {
        Threshold::reduced_power(self.n, self.k, &rat(1, 3))
    }

    /// `M = floor((1 - 3 delta) log N' / log 2)`, the largest `M` with `2^M <= N'^(1 - 3 delta)`.
    pub fn big_m(&self) -> Result<u32> {
        let e = Rational::one() - rat(3, 1) * self.delta;
        let t = Threshold::reduced_power(self.n, self.k, &e)?.floor;
        Ok(if t == 0 { 0 } else { t.ilog2() })
    }
}

/// `theta = epsilon / (2 (1 - a + epsilon) (1 - a))`.
pub fn theta_of(a: f64, epsilon: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&a) {
        return domain(format!("a must lie in [0, 1), got {a}"));
    }
    if !(epsilon > 0.0) {
        return domain(format!("epsilon must be positive, got {epsilon}"));
    }
    Ok(epsilon / (2.0 * (1.0 - a + epsilon) * (1.0 - a)))
}

/// `alpha = 1/2 - a / (2 (1 - a)) + theta`.
pub fn alpha_of(a: f64, theta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&a) {
        return domain(format!("a must lie in [0, 1), got {a}"));
    }
    Ok(0.5 - a / (2.0 * (1.0 - a)) + theta)
}

/// Half-open interval `[lo, hi)` of admissible `delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibleInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl FeasibleInterval {
    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }

    pub fn contains(&self, delta: &Rational) -> bool {
        self.lo <= *delta && *delta < self.hi
    }
}

fn check_chen_a(a: &Rational) -> Result<()> {
    if !a.is_positive() || *a >= rat(1, 10) {
        return domain(format!("a must lie in (0, 1/10), got {a}"));
    }
    Ok(())
}

/// `1/8 - a/(8(1-a)) <= delta < 1/6 - a/(2(1-a))`, exactly.
pub fn chen_feasible(a: &Rational) -> Result<FeasibleInterval> {
    check_chen_a(a)?;
    let s = a / (Rational::one() - a);
    Ok(FeasibleInterval {
        lo: rat(1, 8) - s / rat(8, 1),
        hi: rat(1, 6) - s / rat(2, 1),
    })
}

/// The left end of [`chen_feasible`].
pub fn delta_star(a: &Rational) -> Result<Rational> {
    Ok(chen_feasible(a)?.lo)
}

fn feasible_f64(a: f64) -> (f64, f64) {
    let s = a / (1.0 - a);
    (0.125 - s / 8.0, 1.0 / 6.0 - s / 2.0)
}

/// How `delta` is chosen for each `a` during the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeltaMode {
    /// Anywhere in the admissible interval above `1/(3e)`.
    Free,
    /// Pinned to `delta_star(a)`.
    LeftEndpoint,
}

/// A box search over `a`, with `delta` chosen per [`DeltaMode`].
#[derive(Clone, Debug, PartialEq)]
pub struct ChenSearch {
    pub a_lo: f64,
    pub a_hi: f64,
    pub grid_a: usize,
    pub grid_d: usize,
    /// Width at which golden-section refinement stops.
    pub tol: f64,
    pub mode: DeltaMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChenOptimum {
    pub a: f64,
    pub delta: f64,
    pub f: f64,
    pub evaluations: usize,
}

/// Closest admissible `a` to the open ends of `(0, 1/10)`.
const A_MARGIN: f64 = 1e-9;

impl ChenSearch {
    /// The full region `a in (0, 1/10)`.
    pub fn full(grid_a: usize, grid_d: usize, tol: f64, mode: DeltaMode) -> Self {
        ChenSearch { a_lo: A_MARGIN, a_hi: 0.1 - A_MARGIN, grid_a, grid_d, tol, mode }
    }

    /// Admissible `delta` range for `a`, after the `1/(3e)` floor. `None` when empty.
    fn delta_range(&self, a: f64) -> Option<(f64, f64)> {
        if !(a > 0.0 && a < 0.1) {
            return None;
        }
        let (lo, hi) = feasible_f64(a);
        match self.mode {
            DeltaMode::LeftEndpoint => (lo >= DELTA_FLOOR).then_some((lo, lo)),
            DeltaMode::Free => {
                let lo = lo.max(DELTA_FLOOR);
                // hi is excluded
                let top = hi * (1.0 - 1e-12);
                (lo <= top).then_some((lo, top))
            }
        }
    }

    fn a_points(&self) -> Vec<f64> {
        if self.grid_a == 1 || self.a_lo == self.a_hi {
            return vec![self.a_lo];
        }
        let n = self.grid_a - 1;
        (0..=n).map(|i| self.a_lo + (self.a_hi - self.a_lo) * i as f64 / n as f64).collect()
    }

    pub fn run(&self) -> Result<ChenOptimum> {
        if self.grid_a == 0 || self.grid_d == 0 {
            return domain("grid counts must be positive");
        }
        if !(self.a_lo <= self.a_hi) || self.a_lo <= 0.0 || self.a_hi >= 0.1 {
            return domain(format!("a-box [{}, {}] must lie inside (0, 1/10)", self.a_lo, self.a_hi));
        }
        if !(self.tol > 0.0) {
            return domain(format!("tolerance must be positive, got {}", self.tol));
        }
        let mut evals = 0usize;
        let points = self.a_points();
        let mut best: Option<(usize, f64, f64)> = None;
        for (i, &a) in points.iter().enumerate() {
            let Some((lo, hi)) = self.delta_range(a) else { continue };
            let deltas: Vec<f64> = if lo == hi || self.grid_d == 1 {
                vec![lo]
            } else {
                (0..self.grid_d).map(|j| lo + (hi - lo) * j as f64 / (self.grid_d - 1) as f64).collect()
            };
            for d in deltas {
                let f = f_ad(a, d, SEARCH_QUAD_TOL)?;
                evals += 1;
                if best.map_or(true, |(_, _, bf)| f > bf) {
                    best = Some((i, d, f));
                }
            }
        }
        let Some((i, d0, f0)) = best else {
            return Err(Error::EmptyFeasibleSet(format!(
                "no grid point with a in [{}, {}] admits delta >= 1/(3e)",
                self.a_lo, self.a_hi
            )));
        };
        let a0 = points[i];
        if points.len() == 1 && (self.grid_d == 1 || self.mode == DeltaMode::LeftEndpoint) {
            return Ok(ChenOptimum { a: a0, delta: d0, f: f0, evaluations: evals });
        }

        let a_left = if i == 0 { points[0] } else { points[i - 1] };
        let a_right = points.get(i + 1).copied().unwrap_or(points[i]);
        let mut inner = |a: f64| -> Result<(f64, f64)> {
            let Some((lo, hi)) = self.delta_range(a) else {
                return Ok((f64::NAN, f64::NEG_INFINITY));
            };
            let r = golden_max(|d| f_ad(a, d, SEARCH_QUAD_TOL), lo, hi, self.tol)?;
            evals += r.evaluations;
            Ok((r.x, r.f))
        };
        let (mut a_best, (mut d_best, mut f_best)) = (a0, (d0, f0));
        let refined = golden_max(|a| inner(a).map(|(_, f)| f), a_left, a_right, self.tol)?;
        let (d_ref, f_ref) = inner(refined.x)?;
        if f_ref > f_best || (f_ref == f_best && refined.x < a_best) {
            a_best = refined.x;
            d_best = d_ref;
            f_best = f_ref;
        }
        Ok(ChenOptimum { a: a_best, delta: d_best, f: f_best, evaluations: evals + refined.evaluations })
    }
}

/// Grid then golden-section maximizer of `f_ad` over the admissible region
/// with `delta >= 1/(3e)`.
pub fn optimize_chen(grid_a: usize, grid_d: usize, tol: f64) -> Result<ChenOptimum> {
    if grid_a < 16 || grid_d < 16 {
        return domain(format!("grid counts must be at least 16, got {grid_a} x {grid_d}"));
    }
    ChenSearch::full(grid_a, grid_d, tol, DeltaMode::Free).run()
}

#[derive(Clone, Copy, Debug)]
struct GoldenResult {
    x: f64,
    f: f64,
    evaluations: usize,
}

/// Golden-section maximization on `[lo, hi]`; the endpoints are compared too.
/// Ties resolve toward the smaller abscissa.
fn golden_max<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<GoldenResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut evals = 0;
    let mut eval = |x: f64, evals: &mut usize| -> Result<f64> {
        *evals += 1;
        f(x)
    };
    if hi <= lo {
        let v = eval(lo, &mut evals)?;
        return Ok(GoldenResult { x: lo, f: v, evaluations: evals });
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c, &mut evals)?;
    let mut fd = eval(d, &mut evals)?;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c, &mut evals)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d, &mut evals)?;
        }
    }
    let mid = 0.5 * (a + b);
    let fm = eval(mid, &mut evals)?;
    let fl = eval(lo, &mut evals)?;
    let fh = eval(hi, &mut evals)?;
    let mut best = (lo, fl);
    for cand in [(mid, fm), (hi, fh)] {
        if cand.1 > best.1 {
            best = cand;
        }
    }
    Ok(GoldenResult { x: best.0, f: best.1, evaluations: evals })
}

/// Richert-weight parameters for one `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct RichertParams {
    pub k_factors: u32,
    pub epsilon: f64,
    pub a: Rational,
    pub theta: f64,
    pub alpha: f64,
    pub v: f64,
    pub u: f64,
    pub lambda_min: f64,
    /// The general displayed constant, or `52/3` for `K = 8`.
    pub lead_constant: f64,
    /// `2 v (1 - 2 lambda_min / 3) log 3`, before the final simplification.
    pub sharp_constant: f64,
    /// `40 theta log 3 / (2/5 + 6 theta)^2`, for `K = 3` only.
    pub specialized_k3: Option<f64>,
}

impl RichertParams {
    /// `16 log 3 - 52/3`, positive exactly when the `K = 8` sieve inequality holds.
    pub fn k8_margin() -> f64 {
        16.0 * 3f64.ln() - 52.0 / 3.0
    }
}

/// `a(K) = (3K - 7) / (6K - 6)` for `3 <= K <= 7`, and the `2/5` cap at `K = 8`.
pub fn richert_a(k: u32) -> Result<Rational> {
    match k {
        3..=7 => Ok(rat(3 * k as i128 - 7, 6 * k as i128 - 6)),
        8 => Ok(rat(2, 5)),
        _ => domain(format!("K must lie in 3..=8, got {k}")),
    }
}

/// `8 theta (1+3K)^3 log 3 / [8 + 3 theta (1 + 4K + 3K^2)]^2`.
pub fn richert_general_constant(k: u32, theta: f64) -> f64 {
    let kf = k as f64;
    let den = 8.0 + 3.0 * theta * (1.0 + 4.0 * kf + 3.0 * kf * kf);
    8.0 * theta * (1.0 + 3.0 * kf).powi(3) * 3f64.ln() / (den * den)
}

/// `40 theta log 3 / (2/5 + 6 theta)^2`.
pub fn richert_k3_constant(theta: f64) -> f64 {
    let den = 0.4 + 6.0 * theta;
    40.0 * theta * 3f64.ln() / (den * den)
}

pub fn richert_derive(k: u32, epsilon: f64) -> Result<RichertParams> {
    let a = richert_a(k)?;
    if k == 8 {
        let (alpha, v, u, lambda) = (1.0 / 6.0, 24.0, 8.0, 1.0);
        return Ok(RichertParams {
            k_factors: 8,
            epsilon,
            a,
            theta: 0.0,
            alpha,
            v,
            u,
            lambda_min: lambda,
            lead_constant: 52.0 / 3.0,
            sharp_constant: 2.0 * v * (1.0 - 2.0 * lambda / 3.0) * 3f64.ln(),
            specialized_k3: None,
        });
    }
    let af = to_f64(&a);
    let theta = theta_of(af, epsilon)?;
    let alpha = alpha_of(af, theta)?;
    let v = 4.0 / alpha;
    let u = 4.0 / (3.0 * alpha);
    let lambda_min = 1.0 / (k as f64 + 1.0 - u);
    Ok(RichertParams {
        k_factors: k,
        epsilon,
        a,
        theta,
        alpha,
        v,
        u,
        lambda_min,
        lead_constant: richert_general_constant(k, theta),
        sharp_constant: 2.0 * v * (1.0 - 2.0 * lambda_min / 3.0) * 3f64.ln(),
        specialized_k3: (k == 3).then(|| richert_k3_constant(theta)),
    })
}

/// Window of admissible `a` for the Richert sieve at level `theta`:
/// `1 - 1/((6K-12)/(3K-2) + theta) < a < 1 - 1/((6K-6)/(3K+1) + theta)`.
pub fn richert_a_window(k: u32, theta: f64) -> Result<(f64, f64)> {
    if !(3..=7).contains(&k) {
        return domain(format!("K must lie in 3..=7, got {k}"));
    }
    let kf = k as f64;
    let lo = 1.0 - 1.0 / ((6.0 * kf - 12.0) / (3.0 * kf - 2.0) + theta);
    let hi = 1.0 - 1.0 / ((6.0 * kf - 6.0) / (3.0 * kf + 1.0) + theta);
    Ok((lo, hi))
}
