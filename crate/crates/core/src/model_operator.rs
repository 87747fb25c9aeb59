//! Matrices of the model operator `M_B` (compression of multiplication by `z`
//! to `K_B`) in the TMW basis, their closed-form resolvents, and the extremal
//! Toeplitz matrix `T*`.

use num_complex::Complex64;

use crate::blaschke::Spectrum;
use crate::error::{Error, Result};
use crate::linalg::{inverse, spectral_norm, ComplexMatrix};
use crate::DEFAULT_NORM_TOL;

/// Minimum distance from `ζ` to the spectrum accepted by [`ResolventQuery`].
pub const SPECTRUM_GUARD: f64 = 1e-10;

/// A spectrum together with a point `ζ` off it.
#[derive(Clone, Debug)]
pub struct ResolventQuery {
    sigma: Spectrum,
    zeta: Complex64,
}

impl ResolventQuery {
    pub fn new(sigma: Spectrum, zeta: Complex64) -> Result<Self> {
        if !zeta.is_finite() {
            return Err(Error::InvalidArgument(format!("ζ = {zeta} is not finite")));
        }
        let dist = sigma
            .points()
            .iter()
            .map(|l| (zeta - l).norm())
            .fold(f64::INFINITY, f64::min);
        if dist < SPECTRUM_GUARD {
            return Err(Error::InvalidArgument(format!(
                "ζ = {zeta} lies within {dist:e} of the spectrum"
            )));
        }
        Ok(Self { sigma, zeta })
    }

    pub fn sigma(&self) -> &Spectrum {
        &self.sigma
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }
}

/// Matrix of `M_B` in the TMW basis: lower triangular with `σ` on the
/// diagonal and, below it,
/// `(1−|λ_i|²)^{1/2} (1−|λ_j|²)^{1/2} Π_{μ=j+1}^{i−1} (−λ̄_μ)`.
pub fn model_matrix(sigma: &Spectrum) -> ComplexMatrix {
    let pts = sigma.points();
    let n = pts.len();
    let defect: Vec<f64> = pts.iter().map(|l| (1.0 - l.norm_sqr()).sqrt()).collect();
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        m[(j, j)] = pts[j];
        let mut running = Complex64::new(1.0, 0.0);
        for i in j + 1..n {
            m[(i, j)] = defect[i] * defect[j] * running;
            running *= -pts[i].conj();
        }
    }
    m
}

/// The analytic Toeplitz matrix `T*`: `r` on the diagonal and
/// `(1 − r²)(−r)^{k−1}` on the `k`-th subdiagonal.
pub fn extremal_matrix(n: usize, r: f64) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("r = {r} outside (0, 1)")));
    }
    let band: Vec<f64> = (0..n)
        .map(|k| if k == 0 { r } else { (1.0 - r * r) * (-r).powi(k as i32 - 1) })
        .collect();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        if i >= j {
            Complex64::new(band[i - j], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// `(ζ − M_B)⁻¹` entrywise: lower triangular with `1/(ζ − λ_i)` on the
/// diagonal and
/// `a_i a_j Π_{k=j+1}^{i−1} (1 − λ̄_k ζ)/(ζ − λ_k)` below it, where
/// `a_i = (1 − |λ_i|²)^{1/2} / (ζ − λ_i)`.
pub fn resolvent_closed_form(q: &ResolventQuery) -> ComplexMatrix {
    let pts = q.sigma.points();
    let zeta = q.zeta;
    let n = pts.len();
    let inv_gap: Vec<Complex64> = pts.iter().map(|&l| 1.0 / (zeta - l)).collect();
    let a: Vec<Complex64> = pts
        .iter()
        .zip(&inv_gap)
        .map(|(l, g)| (1.0 - l.norm_sqr()).sqrt() * g)
        .collect();
    let ratio: Vec<Complex64> = pts
        .iter()
        .zip(&inv_gap)
        .map(|(&l, g)| (1.0 - l.conj() * zeta) * g)
        .collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        out[(j, j)] = inv_gap[j];
        let mut running = Complex64::new(1.0, 0.0);
        for i in j + 1..n {
            out[(i, j)] = a[i] * a[j] * running;
            running *= ratio[i];
        }
    }
    out
}

/// `‖(ζ − T)⁻¹‖`, by a dense solve and a spectral norm.
pub fn resolvent_norm(t: &ComplexMatrix, zeta: Complex64) -> Result<f64> {
    let shifted = t.shifted_negation(zeta)?;
    spectral_norm(&inverse(&shifted)?, DEFAULT_NORM_TOL)
}
