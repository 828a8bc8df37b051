//! Adaptive Simpson quadrature and the sine-integral constant.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// `sin(t)/t` with the removable singularity filled in at `t = 0`.
pub fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        t.sin() / t
    }
}

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 60)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // Simpson error shrinks by 16 per halving; 15 is the Richardson factor.
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// `int_0^upper sin(t)/t dt` by adaptive Simpson, to absolute error `tol`.
///
/// `upper` must lie in `[0, 10*pi]` and `tol` must be at least `1e-14`.
pub fn quadrature_sinc(upper: f64, tol: f64) -> Result<f64> {
    if !(0.0..=10.0 * PI).contains(&upper) {
        return Err(Error::BadIntegrationBound { upper });
    }
    if tol < 1e-14 {
        return Err(Error::ToleranceTooTight { tol });
    }
    if upper == 0.0 {
        return Ok(0.0);
    }
    Ok(adaptive_simpson(&sinc, 0.0, upper, tol))
}

/// The per-mode expected phase `(1/pi) int_0^pi sin(t)/t dt ~= 0.589490`,
/// the constant divided out of raw ensemble means to recover Born values.
pub fn sinc_kappa() -> f64 {
    static KAPPA: OnceLock<f64> = OnceLock::new();
    *KAPPA.get_or_init(|| quadrature_sinc(PI, 1e-13).expect("fixed bounds are valid") / PI)
}
