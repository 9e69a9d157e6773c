//! Slow, independent reference implementations.
//!
//! Nothing here shares code with the fast paths it checks: primality and
//! factorization are by trial division, integrals use composite Gauss–Legendre
//! rules, and `li` uses Ramanujan's series.

use crate::constants::EULER_GAMMA;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factors with multiplicity, ascending.
pub fn factor(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        while n % d == 0 {
            out.push(d);
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Sieve of Eratosthenes on a byte per integer.
pub fn pi(x: u64) -> u64 {
    if x < 2 {
        return 0;
    }
    let n = x as usize;
    let mut comp = vec![false; n + 1];
    let mut count = 0;
    for i in 2..=n {
        if !comp[i] {
            count += 1;
            let mut j = i * i;
            while j <= n {
                comp[j] = true;
                j += i;
            }
        }
    }
    count
}

/// `pi(x)` by a sequential segmented sieve over all integers, one byte each.
pub fn pi_segmented(x: u64) -> u64 {
    if x < 2 {
        return 0;
    }
    let root = (x as f64).sqrt() as u64 + 1;
    let base: Vec<u64> = (2..=root).filter(|&p| is_prime(p)).collect();
    const SEG: u64 = 1 << 18;
    let mut seg = vec![true; SEG as usize];
    let mut count = 0;
    let mut lo = 2;
    while lo <= x {
        let hi = (lo + SEG - 1).min(x);
        let len = (hi - lo + 1) as usize;
        seg[..len].fill(true);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut m = (p * p).max(lo.div_ceil(p) * p);
            while m <= hi {
                seg[(m - lo) as usize] = false;
                m += p;
            }
        }
        count += seg[..len].iter().filter(|&&c| c).count() as u64;
        lo = hi + 1;
    }
    count
}

/// Trial-division view of `p - b` for every prime `b < p <= n_max + b`.
#[derive(Clone, Debug)]
pub struct NaiveShifts {
    pub b: u64,
    pub n_max: u64,
    /// `(p, v2(p - b), odd prime factors of p - b with multiplicity)`.
    pub rows: Vec<(u64, u32, Vec<u64>)>,
}

impl NaiveShifts {
    pub fn new(n_max: u64, b: u64) -> Self {
        let rows = (b + 1..=n_max + b)
            .filter(|&p| is_prime(p))
            .map(|p| {
                let fs = factor(p - b);
                let v2 = fs.iter().filter(|&&q| q == 2).count() as u32;
                let odd = fs.into_iter().filter(|&q| q != 2).collect();
                (p, v2, odd)
            })
            .collect();
        NaiveShifts { b, n_max, rows }
    }

    /// `counts[N]` is `s_K(N)` for every `N <= n_max`.
    pub fn sk_prefix(&self, k: u32, big_k: u32, distinct: bool) -> Vec<u64> {
        let mut bumps = vec![0u64; self.n_max as usize + 1];
        for (p, v2, odd) in &self.rows {
            if *v2 < k {
                continue;
            }
            let mut uniq = odd.clone();
            uniq.dedup();
            let factors = if distinct { uniq.len() } else { odd.len() };
            if factors as u32 <= big_k {
                bumps[(p - self.b) as usize] += 1;
            }
        }
        let mut run = 0;
        bumps
            .into_iter()
            .map(|c| {
                run += c;
                run
            })
            .collect()
    }
}

/// `n_2` (with `exact_power`) or `s_2` by trial division, with the cut-off
/// `N'^zexp` decided in floating point.
pub fn count_p2(n: u64, b: u64, k: u32, zexp: f64, exact_power: bool) -> u64 {
    let np = n as f64 / 2f64.powi(k as i32);
    let z = np.powf(zexp);
    (b + 1..=n + b)
        .filter(|&p| is_prime(p))
        .filter(|&p| {
            let fs = factor(p - b);
            let v2 = fs.iter().filter(|&&q| q == 2).count() as u32;
            let odd: Vec<u64> = fs.into_iter().filter(|&q| q != 2).collect();
            let power_ok = if exact_power { v2 == k } else { v2 >= k };
            power_ok && odd.len() <= 2 && odd.iter().all(|&q| q as f64 > z)
        })
        .count() as u64
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss–Legendre: `panels` equal panels, `order` nodes each.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let rule = gauss_legendre_rule(order);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let mid = a + (i as f64 + 0.5) * h;
            rule.iter().map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// `C_delta` by 64 panels of 20-point Gauss–Legendre.
pub fn c_delta(delta: f64) -> f64 {
    gauss_legendre(|t| (2.0 - 3.0 * t).ln() / (t * (1.0 - t)), delta, 1.0 / 3.0, 64, 20)
}

/// `li(x) - li(2)` from Ramanujan's series for the offset-free `li`.
pub fn li(x: f64) -> f64 {
    li_ramanujan(x) - li_ramanujan(2.0)
}

fn li_ramanujan(x: f64) -> f64 {
    let l = x.ln();
    let mut sum = 0.0;
    let mut term = 1.0; // (-1)^(n-1) l^n / (n! 2^(n-1))
    let mut inner = 0.0; // sum_{j <= floor((n-1)/2)} 1/(2j+1)
    for n in 1..200 {
        term *= if n == 1 { l } else { -l / (n as f64 * 2.0) };
        if (n - 1) % 2 == 0 {
            inner += 1.0 / (n as f64);
        }
        let add = term * inner;
        sum += add;
        if n > 2 * l as usize + 10 && add.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    EULER_GAMMA + l.ln() + x.sqrt() * sum
}
