use std::f64::consts::PI;

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Smallest relative Rayleigh-quotient change that binary64 can resolve
/// reliably; requested tolerances below this are clamped to it.
const RAYLEIGH_CHANGE_FLOOR: f64 = 4.0 * f64::EPSILON;

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value of `a` by power iteration on the Gram matrix `A*A`.
///
/// The start vector is the normalized all-ones vector perturbed by `1e-3·e₁`.
/// Iteration stops once the Rayleigh quotient `‖Ax‖²` changes by less than
/// `rel_tol²` (relative, clamped at a few ulps) on two consecutive steps.
/// In exact arithmetic the quotient never decreases, so a step that fails to
/// increase it means rounding dominates and also counts as calm.
/// The cap is `100·n + 10⁴` iterations; hitting it returns
/// [`Error::NoConvergence`] with the last iterate.
pub fn spectral_norm(a: &ComplexMatrix, rel_tol: f64) -> Result<f64> {
    if !(rel_tol > 0.0 && rel_tol <= 1e-3) {
        return Err(Error::InvalidArgument(format!(
            "spectral_norm tolerance {rel_tol} outside (0, 1e-3]"
        )));
    }
    if a.as_slice().iter().any(|z| !z.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let n = a.cols();
    let threshold = (rel_tol * rel_tol).max(RAYLEIGH_CHANGE_FLOOR);
    let cap = 100 * n + 10_000;

    let mut x = vec![Complex64::new(1.0, 0.0); n];
    x[0] += 1e-3;
    let nx = vec_norm(&x);
    x.iter_mut().for_each(|v| *v /= nx);

    let mut prev = f64::NAN;
    let mut calm_steps = 0;
    let mut residual = f64::INFINITY;
    for _ in 0..cap {
        let y = a.apply(&x);
        let rq = y.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if rq == 0.0 {
            // x lies in the kernel; for the deterministic start this only
            // happens when A vanishes on it, so fall back to a full check.
            return Ok(if a.max_abs() == 0.0 {
                0.0
            } else {
                zero_start_fallback(a, threshold, cap)?
            });
        }
        let z = a.apply_adjoint(&y);
        residual = z
            .iter()
            .zip(&x)
            .map(|(zi, xi)| (zi - xi * rq).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let nz = vec_norm(&z);
        if prev.is_finite() && (rq <= prev || rq - prev <= threshold * rq) {
            calm_steps += 1;
            if calm_steps >= 2 {
                return Ok(rq.sqrt());
            }
        } else {
            calm_steps = 0;
        }
        prev = rq;
        x = z.into_iter().map(|v| v / nz).collect();
    }
    Err(Error::NoConvergence {
        iterations: cap,
        estimate: prev.sqrt(),
        residual,
        last_iterate: x,
    })
}

/// Power iteration from every basis vector in turn, keeping the largest
/// estimate. Only reached when the default start vector is annihilated.
fn zero_start_fallback(a: &ComplexMatrix, threshold: f64, cap: usize) -> Result<f64> {
    let n = a.cols();
    let mut best = 0.0f64;
    for k in 0..n {
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        x[k] = Complex64::new(1.0, 0.0);
        let mut prev = f64::NAN;
        let mut calm = 0;
        for _ in 0..cap {
            let y = a.apply(&x);
            let rq = y.iter().map(|z| z.norm_sqr()).sum::<f64>();
            if rq == 0.0 {
                break;
            }
            if prev.is_finite() && (rq <= prev || rq - prev <= threshold * rq) {
                calm += 1;
                if calm >= 2 {
                    break;
                }
            } else {
                calm = 0;
            }
            prev = rq;
            let z = a.apply_adjoint(&y);
            let nz = vec_norm(&z);
            x = z.into_iter().map(|v| v / nz).collect();
        }
        if prev.is_finite() {
            best = best.max(prev.sqrt());
        }
    }
    Ok(best)
}

/// Maximum of `|f|` over `grid_size` equispaced points of the unit circle.
///
/// This is a lower estimate of the true supremum norm that converges as the
/// grid is refined (for functions continuous up to the circle).
pub fn sup_norm_on_circle<F>(mut f: F, grid_size: usize) -> Result<f64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    if grid_size < 16 {
        return Err(Error::InvalidArgument(format!(
            "circle grid of {grid_size} points; need at least 16"
        )));
    }
    let mut best = 0.0f64;
    for k in 0..grid_size {
        let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / grid_size as f64);
        best = best.max(f(z)?.norm());
    }
    Ok(best)
}
