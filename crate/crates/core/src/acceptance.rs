//! The acceptance suite, shared by `sievelab verify` and the `acceptance` test target.
//!
//! Each criterion returns one [`Outcome`]; tolerances are the constants below.

use std::f64::consts::{E, LN_2};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{bound_value, BoundSpec, Theorem};
use crate::constants::{c_delta, c_delta_m, chen_integrand, chen_integrand_scaled, f_ad, singular_series, ONE_THIRD};
use crate::counters::{count_sk, decomposition_audit, sk_profile, FactorMode, Tables};
use crate::error::Result;
use crate::oracle;
use crate::params::{richert_derive, RichertParams};
use crate::primes::{averaged_error, PrimeTable, SpfTable};
use crate::rational::{rat, to_f64};

pub const A1_F_LO: f64 = 0.000_105_595_8;
pub const A1_F_HI: f64 = 0.000_105_597_8;
pub const A1_SECONDS: f64 = 1.0;
pub const A2_TOL: f64 = 1e-8;
/// Largest allowed gap between the exact-fraction and float evaluations.
pub const A2_PATH_TOL: f64 = 1e-18;
pub const A4_EXPECTED: f64 = 0.2446;
pub const A4_TOL: f64 = 1e-3;
pub const A5_SECONDS: f64 = 60.0;
pub const A6_GRID: usize = 10_000;
pub const A8_SIEVE_SECONDS: f64 = 15.0;
pub const A9_TOL: f64 = 1e-8;
pub const A9_SAMPLES: usize = 20;
pub const A9_SEED: u64 = 0x5eed_a9;
pub const A10_SEED: u64 = 10;
pub const QUAD_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Recorded as data; does not gate the suite.
    Observed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub id: &'static str,
    pub status: Status,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Observed => "OBSERVED",
        };
        format!("{} {tag} {} [{:.2} s]", self.id, self.detail, self.seconds)
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

fn judge(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

type Check = fn() -> Result<(Status, String)>;

pub const CRITERIA: [(&str, Check); 11] = [
    ("A1", a1_f_digits),
    ("A2", a2_final_constants),
    ("A3", a3_k_table),
    ("A4", a4_k8_inequality),
    ("A5", a5_classification),
    ("A6", a6_s_over_t),
    ("A7", a7_oracle_equivalence),
    ("A8", a8_prime_engine),
    ("A9", a9_quadrature),
    ("A10", a10_equidistribution),
    ("A11", a11_bound_relations),
];

pub fn run(id: &'static str, check: Check) -> Outcome {
    let t = Instant::now();
    let (status, detail) = match check() {
        Ok(r) => r,
        Err(e) => (Status::Fail, format!("error: {e}")),
    };
    Outcome { id, status, detail, seconds: t.elapsed().as_secs_f64() }
}

/// Runs every criterion in order, calling `each` as soon as one finishes.
pub fn run_all(mut each: impl FnMut(&Outcome)) -> Vec<Outcome> {
    CRITERIA
        .iter()
        .map(|&(id, check)| {
            let o = run(id, check);
            each(&o);
            o
        })
        .collect()
}

pub fn a1_f_digits() -> Result<(Status, String)> {
    let t = Instant::now();
    let f = f_ad(1.0 / 87.0, 85.0 / 688.0, QUAD_TOL)?;
    let secs = t.elapsed().as_secs_f64();
    let ok = (A1_F_LO..=A1_F_HI).contains(&f) && secs < A1_SECONDS;
    Ok((judge(ok), format!("f(1/87, 85/688) = {f:.13} in [{A1_F_LO}, {A1_F_HI}], {secs:.4} s")))
}

pub fn a2_final_constants() -> Result<(Status, String)> {
    let delta: f64 = 85.0 / 688.0;
    let float_n2 = 2.0 * 0.0001 / delta;
    let float_s2 = 2.0 * 0.0002 / delta;
    let exact_n2 = to_f64(&(rat(2, 1) * rat(1, 10_000) / rat(85, 688)));
    let exact_s2 = to_f64(&(rat(2, 1) * rat(2, 10_000) / rat(85, 688)));
    let ok = (float_n2 - 0.001_618_82).abs() <= A2_TOL
        && (float_s2 - 0.003_237_65).abs() <= A2_TOL
        && (float_n2 - exact_n2).abs() <= A2_PATH_TOL
        && (float_s2 - exact_s2).abs() <= A2_PATH_TOL;
    Ok((
        judge(ok),
        format!("2C/delta = {float_n2:.11} (exact {exact_n2:.11}), 2C'/delta = {float_s2:.11} (exact {exact_s2:.11})"),
    ))
}

pub fn a3_k_table() -> Result<(Status, String)> {
    let want = [(3, rat(1, 6)), (4, rat(5, 18)), (5, rat(1, 3)), (6, rat(11, 30)), (7, rat(7, 18))];
    let mut got = Vec::new();
    let mut ok = true;
    for (k, a) in want {
        let r = richert_derive(k, 0.01)?;
        ok &= r.a == a;
        got.push(format!("a({k}) = {}", r.a));
    }
    Ok((judge(ok), got.join(", ")))
}

pub fn a4_k8_inequality() -> Result<(Status, String)> {
    let m = RichertParams::k8_margin();
    let k8 = richert_derive(8, 0.01)?;
    let ok = m > 0.0 && (m - A4_EXPECTED).abs() <= A4_TOL && k8.sharp_constant > k8.lead_constant;
    Ok((judge(ok), format!("16 log 3 - 52/3 = {m:.10}")))
}

pub fn a5_classification() -> Result<(Status, String)> {
    let t = Instant::now();
    // N' = 8 * 10^6 / 2^3 = 10^6
    let (n, k) = (8_000_000u64, 3u32);
    let tables = Tables::new(PrimeTable::sieve(n + 15)?, SpfTable::new(n >> k)?);
    let mut violations = 0;
    let mut narrow = 0;
    let mut swept = 0;
    let mut other = 0;
    for b in [1u64, 3, 15] {
        for delta in [rat(1, 8), rat(85, 688)] {
            let r = decomposition_audit(n, b, k, &delta, &tables)?;
            violations += r.positive_outside_s;
            narrow += r.narrow_exceptions;
            swept += r.swept;
            other += r.violations() - r.positive_outside_s;
        }
    }
    let secs = t.elapsed().as_secs_f64();
    let ok = violations == 0 && secs < A5_SECONDS;
    Ok((
        judge(ok),
        format!(
            "{swept} sifted n <= 10^6 over 6 configurations: {violations} classification violations, \
             {narrow} products of two primes >= y, {other} other audit findings"
        ),
    ))
}

/// Checks `x I(x)` nonincreasing on `[1, 1/(3 delta)]`, where `I(x)` is the
/// integral from `x delta` to `1/3`, by summing panel integrals from the right.
fn x_times_integral_nonincreasing(delta: f64) -> bool {
    let top = 1.0 / (3.0 * delta);
    let xs: Vec<f64> = (0..=A6_GRID).map(|i| 1.0 + (top - 1.0) * i as f64 / A6_GRID as f64).collect();
    let mut i_next = 0.0;
    for i in (0..A6_GRID).rev() {
        let (x0, x1) = (xs[i], xs[i + 1]);
        let hi = if i + 1 == A6_GRID { ONE_THIRD } else { x1 * delta };
        let panel = oracle::gauss_legendre(chen_integrand, x0 * delta, hi, 1, 10);
        // F(x1) - F(x0) = (x1 - x0) I(x1) - x0 * panel
        if (x1 - x0) * i_next - x0 * panel > 0.0 {
            return false;
        }
        i_next += panel;
    }
    true
}

fn g_strictly_decreasing(delta: f64) -> bool {
    let step = (ONE_THIRD - delta) / A6_GRID as f64;
    (0..A6_GRID)
        .map(|i| chen_integrand_scaled(delta + step * i as f64))
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| w[1] < w[0])
}

/// `(S/T, M)` with `S = sum_{m <= M} C_{delta,m} N'_m / log N'_m` and `T = C_delta N' / log N'`.
pub fn s_over_t(delta: f64, n_prime: f64) -> Result<(f64, u32)> {
    let l = n_prime.ln();
    let big_m = ((1.0 - 3.0 * delta) * l / LN_2).floor() as u32;
    let t = c_delta(delta, QUAD_TOL)?.value * n_prime / l;
    let mut s = 0.0;
    for m in 0..=big_m {
        let lm = l - m as f64 * LN_2;
        s += c_delta_m(delta, l, m, QUAD_TOL)?.value * (n_prime / 2f64.powi(m as i32)) / lm;
    }
    Ok((s / t, big_m))
}

pub fn a6_s_over_t() -> Result<(Status, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for delta in [1.0 / (3.0 * E), 0.13, 0.2] {
        let mono = x_times_integral_nonincreasing(delta);
        let dec = g_strictly_decreasing(delta);
        ok &= mono && dec;
        for np in [1e6, 1e9] {
            let (ratio, big_m) = s_over_t(delta, np)?;
            let stated = 2.0 * (1.0 - 0.5f64.powi(big_m as i32));
            let proved = 2.0 * (1.0 - 0.5f64.powi(big_m as i32 + 1));
            ok &= ratio <= stated;
            parts.push(format!(
                "delta={delta:.4} N'={np:e} M={big_m} S/T={ratio:.6} margins {:.6}/{:.6}",
                stated - ratio,
                proved - ratio
            ));
        }
        if !(mono && dec) {
            parts.push(format!("delta={delta:.4}: xI(x) nonincreasing {mono}, g decreasing {dec}"));
        }
    }
    Ok((judge(ok), parts.join("; ")))
}

pub fn a7_oracle_equivalence() -> Result<(Status, String)> {
    const N_MAX: u64 = 100_000;
    let tables = Tables::new(PrimeTable::sieve(N_MAX + 15)?, SpfTable::new(N_MAX)?);
    let spot: Vec<u64> = (0..=60).map(|i| (10f64.powf(i as f64 / 12.0)).round() as u64).chain([N_MAX]).collect();
    let mut mismatches = 0u64;
    let mut compared = 0u64;
    for b in [1u64, 3, 9, 15] {
        let naive = oracle::NaiveShifts::new(N_MAX, b);
        for k in 0..=3 {
            for big_k in 0..=8 {
                for mode in [FactorMode::Multiplicity, FactorMode::Distinct] {
                    let want = naive.sk_prefix(k, big_k, mode == FactorMode::Distinct);
                    let prof = sk_profile(N_MAX, b, k, big_k, mode, &tables)?;
                    // prefix counts of the profile, walked linearly
                    let mut idx = 0;
                    for n in 0..=N_MAX {
                        while idx < prof.primes.len() && prof.primes[idx] <= n + b {
                            idx += 1;
                        }
                        compared += 1;
                        mismatches += (idx as u64 != want[n as usize]) as u64;
                    }
                    for &n in &spot {
                        compared += 2;
                        mismatches += (prof.count_at(n)? != want[n as usize]) as u64;
                        mismatches += (count_sk(n, b, k, big_k, mode, &tables)? != want[n as usize]) as u64;
                    }
                }
            }
        }
    }
    Ok((judge(mismatches == 0), format!("{compared} comparisons, {mismatches} mismatches")))
}

pub fn a8_prime_engine() -> Result<(Status, String)> {
    let small = PrimeTable::sieve(1_000_000)?;
    let pi6 = small.count();
    let naive6 = oracle::pi(1_000_000);
    let big = PrimeTable::sieve(100_000_000)?;
    let pi8 = big.count();
    let second8 = oracle::pi_segmented(100_000_000);
    drop(big);
    let t = Instant::now();
    let giga = PrimeTable::sieve(1_000_000_000)?;
    let secs = t.elapsed().as_secs_f64();
    let pi9 = giga.count();
    let threads = rayon::current_num_threads();
    let ok = pi6 == 78_498 && naive6 == pi6 && pi8 == 5_761_455 && second8 == pi8 && secs < A8_SIEVE_SECONDS;
    Ok((
        judge(ok),
        format!(
            "pi(10^6) = {pi6} (naive {naive6}), pi(10^8) = {pi8} (second pass {second8}), \
             sieve to 10^9 in {secs:.2} s on {threads} thread(s), pi(10^9) = {pi9}"
        ),
    ))
}

pub fn a9_quadrature() -> Result<(Status, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(A9_SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..A9_SAMPLES {
        let delta = rng.gen_range(0.05..ONE_THIRD);
        let a = c_delta(delta, QUAD_TOL)?.value;
        let b = oracle::c_delta(delta);
        worst = worst.max((a - b).abs());
    }
    Ok((judge(worst <= A9_TOL), format!("max |simpson - gauss-legendre| = {worst:.3e} over {A9_SAMPLES} deltas")))
}

pub fn a10_equidistribution() -> Result<(Status, String)> {
    let table = PrimeTable::sieve(10_000_000)?;
    let mut vals = Vec::new();
    for x in [100_000u64, 1_000_000, 10_000_000] {
        vals.push((x, averaged_error(x, 8, 20, &table, A10_SEED, 1e-9)?.normalized()));
    }
    let decreasing = vals.windows(2).all(|w| w[1].1 < w[0].1);
    let shown: Vec<String> = vals.iter().map(|(x, v)| format!("x={x:e}: {v:.6e}")).collect();
    Ok((Status::Observed, format!("{}; decreasing: {decreasing}", shown.join(", "))))
}

pub fn a11_bound_relations() -> Result<(Status, String)> {
    let grid: [(u64, u64, u32); 10] = [
        (10_000, 1, 0),
        (100_000, 1, 3),
        (1_000_000, 3, 5),
        (1_000_000, 15, 9),
        (10_000_000, 9, 2),
        (123_456_789, 1, 11),
        (1_000_000_000, 1, 11),
        (1_000_000_000, 105, 20),
        (999_999_937, 7, 13),
        (1 << 40, 3, 30),
    ];
    let mut exact = 0;
    for (n, b, k) in grid {
        let s = singular_series(b, 100_000)?;
        let n2 = bound_value(&BoundSpec::new(Theorem::N2, n, b, k, 0.01, s.clone())?)?.value;
        let s2 = bound_value(&BoundSpec::new(Theorem::S2, n, b, k, 0.01, s)?)?.value;
        exact += (s2 == 2.0 * n2) as usize;
    }
    let mut positive = 0;
    let mut total = 0;
    for eps in [1e-3, 1e-2, 1e-1] {
        for t in [Theorem::S3, Theorem::SK(4), Theorem::SK(5), Theorem::SK(6), Theorem::SK(7)] {
            total += 1;
            positive += (t.constant(eps)? > 0.0) as usize;
        }
    }
    Ok((
        judge(exact == grid.len() && positive == total),
        format!("s2 = 2 n2 exactly on {exact}/{} points; {positive}/{total} s_K constants positive", grid.len()),
    ))
}
