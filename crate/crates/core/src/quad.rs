//! Adaptive Simpson quadrature with an absolute tolerance and an evaluation budget.

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_DEPTH: u32 = 48;
const MAX_EVALS: usize = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of the local Richardson error estimates over accepted panels.
    pub error: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

struct State<'f, F> {
    f: &'f F,
    evals: usize,
    error: f64,
    exhausted: bool,
}

impl<F: Fn(f64) -> f64> State<'_, F> {
    fn eval(&mut self, x: f64) -> f64 {
        self.evals += 1;
        (self.f)(x)
    }

    fn refine(&mut self, p: Panel, eps: f64, depth: u32) -> f64 {
        let lm = 0.5 * (p.a + p.m);
        let rm = 0.5 * (p.m + p.b);
        let flm = self.eval(lm);
        let frm = self.eval(rm);
        let left = (p.m - p.a) * (p.fa + 4.0 * flm + p.fm) / 6.0;
        let right = (p.b - p.m) * (p.fm + 4.0 * frm + p.fb) / 6.0;
        let both = left + right;
        let delta = both - p.whole;

        let degenerate = lm <= p.a || rm >= p.b || lm >= p.m;
        if delta.abs() <= 15.0 * eps || degenerate || depth >= MAX_DEPTH || self.evals >= MAX_EVALS {
            if delta.abs() > 15.0 * eps {
                self.exhausted = true;
            }
            self.error += delta.abs() / 15.0;
            return both + delta / 15.0;
        }
        let l = Panel { a: p.a, m: lm, b: p.m, fa: p.fa, fm: flm, fb: p.fm, whole: left };
        let r = Panel { a: p.m, m: rm, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right };
        self.refine(l, 0.5 * eps, depth + 1) + self.refine(r, 0.5 * eps, depth + 1)
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Fails with [`Error::ToleranceNotMet`] if the depth or evaluation budget runs
/// out before every panel meets its share of the tolerance.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("non-finite limits [{a}, {b}]")));
    }
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0, evaluations: 0 });
    }
    if a > b {
        let q = adaptive_simpson(f, b, a, tol)?;
        return Ok(Quadrature { value: -q.value, ..q });
    }
    let mut st = State { f: &f, evals: 0, error: 0.0, exhausted: false };
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (st.eval(a), st.eval(m), st.eval(b));
    let whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0;
    let value = st.refine(Panel { a, m, b, fa, fm, fb, whole }, tol, 0);
    if !value.is_finite() {
        return Err(Error::Domain(format!("integrand not finite on [{a}, {b}]")));
    }
    if st.exhausted || st.error > tol {
        return Err(Error::ToleranceNotMet { tol, estimate: st.error });
    }
    Ok(Quadrature { value, error: st.error, evaluations: st.evals })
}
