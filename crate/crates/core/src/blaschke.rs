//! Finite Blaschke products and the model space `K_B = H² ⊖ B H²`.
//!
//! Functions in `K_B` are represented by their coordinates in the
//! Takenaka–Malmquist–Walsh (TMW) orthonormal basis
//!
//! ```text
//! e_k(z) = b_{λ_1}(z) ⋯ b_{λ_{k-1}}(z) · (1 − |λ_k|²)^{1/2} / (1 − λ̄_k z),
//! ```
//!
//! with `b_λ(z) = (λ − z) / (1 − λ̄ z)`. Repeated points are allowed and are
//! simply distinct basis indices.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points of a spectrum must satisfy `|λ| ≤ 1 − INTERIOR_GUARD`.
pub const INTERIOR_GUARD: f64 = 1e-12;

/// Default number of circle nodes for discrete `H²` inner products.
pub const DEFAULT_CIRCLE_GRID: usize = 4096;

/// Below this `|1 − ζ̄ z|` the kernel closed form loses digits and the TMW
/// expansion is used instead.
const KERNEL_DENOMINATOR_SWITCH: f64 = 1e-4;

const POLE_GUARD: f64 = 1e-300;

/// Nonempty finite sequence of points of the open unit disk, with
/// multiplicity encoded by repetition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct Spectrum {
    points: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("spectrum must be nonempty".into()));
        }
        if let Some(bad) = points
            .iter()
            .find(|p| !p.is_finite() || p.norm() > 1.0 - INTERIOR_GUARD)
        {
            return Err(Error::InvalidArgument(format!(
                "spectral point {bad} is not inside the open unit disk"
            )));
        }
        Ok(Self { points })
    }

    pub fn from_real(points: &[f64]) -> Result<Self> {
        Self::new(points.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// `n` copies of the same point.
    pub fn repeated(point: Complex64, n: usize) -> Result<Self> {
        Self::new(vec![point; n])
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    /// `B_σ(z)`, factors multiplied in sequence order.
    pub fn blaschke(&self, z: Complex64) -> Result<Complex64> {
        self.points
            .iter()
            .try_fold(Complex64::new(1.0, 0.0), |acc, &l| Ok(acc * blaschke_factor(l, z)?))
    }

    /// `e_k(z)` for a 1-based index `k`.
    pub fn tmw_basis(&self, k: usize, z: Complex64) -> Result<Complex64> {
        if k == 0 || k > self.len() {
            return Err(Error::InvalidArgument(format!(
                "basis index {k} outside 1..={}",
                self.len()
            )));
        }
        let partial = self.points[..k - 1]
            .iter()
            .try_fold(Complex64::new(1.0, 0.0), |acc, &l| Ok(acc * blaschke_factor(l, z)?))?;
        Ok(partial * normalized_cauchy(self.points[k - 1], z)?)
    }

    /// All basis functions at `z`, `[e_1(z), …, e_m(z)]`, in `O(m)`.
    pub fn tmw_basis_all(&self, z: Complex64) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(self.len());
        let mut partial = Complex64::new(1.0, 0.0);
        for &l in &self.points {
            out.push(partial * normalized_cauchy(l, z)?);
            partial *= blaschke_factor(l, z)?;
        }
        Ok(out)
    }

    /// Reproducing kernel of `K_B`, `k_ζ^B(z) = (1 − conj(B(ζ)) B(z)) / (1 − ζ̄ z)`.
    ///
    /// Near the removable singularity `ζ̄ z = 1` this switches to the
    /// equivalent expansion `Σ_k conj(e_k(ζ)) e_k(z)`.
    pub fn reproducing_kernel(&self, zeta: Complex64, z: Complex64) -> Result<Complex64> {
        let denom = 1.0 - zeta.conj() * z;
        if denom.norm() < KERNEL_DENOMINATOR_SWITCH {
            return self.reproducing_kernel_expansion(zeta, z);
        }
        let num = 1.0 - self.blaschke(zeta)?.conj() * self.blaschke(z)?;
        Ok(num / denom)
    }

    /// `Σ_k conj(e_k(ζ)) e_k(z)`.
    pub fn reproducing_kernel_expansion(&self, zeta: Complex64, z: Complex64) -> Result<Complex64> {
        let ez = self.tmw_basis_all(z)?;
        let ezeta = self.tmw_basis_all(zeta)?;
        Ok(ezeta.iter().zip(&ez).map(|(a, b)| a.conj() * b).sum())
    }
}

impl TryFrom<Vec<Complex64>> for Spectrum {
    type Error = Error;

    fn try_from(points: Vec<Complex64>) -> Result<Self> {
        Self::new(points)
    }
}

impl From<Spectrum> for Vec<Complex64> {
    fn from(s: Spectrum) -> Self {
        s.points
    }
}

/// Blaschke factor `b_λ(z) = (λ − z) / (1 − λ̄ z)`.
pub fn blaschke_factor(lambda: Complex64, z: Complex64) -> Result<Complex64> {
    if lambda.norm() >= 1.0 {
        return Err(Error::Domain(format!("Blaschke zero {lambda} outside the open disk")));
    }
    let denom = 1.0 - lambda.conj() * z;
    if denom.norm() < POLE_GUARD {
        return Err(Error::Domain(format!("z = {z} is the pole of b_{lambda}")));
    }
    Ok((lambda - z) / denom)
}

/// Cauchy kernel `k_ζ(z) = 1 / (1 − ζ̄ z)`.
pub fn cauchy_kernel(zeta: Complex64, z: Complex64) -> Result<Complex64> {
    let denom = 1.0 - zeta.conj() * z;
    if denom.norm() < POLE_GUARD {
        return Err(Error::Domain(format!("Cauchy kernel k_{zeta} has a pole at {z}")));
    }
    Ok(1.0 / denom)
}

/// `k_λ / ‖k_λ‖_{H²} = (1 − |λ|²)^{1/2} / (1 − λ̄ z)`.
fn normalized_cauchy(lambda: Complex64, z: Complex64) -> Result<Complex64> {
    Ok((1.0 - lambda.norm_sqr()).sqrt() * cauchy_kernel(lambda, z)?)
}

/// Coordinates of a model-space element in the TMW basis of `K_{B_σ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TMWCoefficients {
    sigma: Spectrum,
    coeffs: Vec<Complex64>,
}

impl TMWCoefficients {
    pub fn new(sigma: Spectrum, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != sigma.len() {
            return Err(Error::Dimension(format!(
                "{} coefficients for a spectrum of {} points",
                coeffs.len(),
                sigma.len()
            )));
        }
        Ok(Self { sigma, coeffs })
    }

    pub fn sigma(&self) -> &Spectrum {
        &self.sigma
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `Σ_k c_k e_k(z)`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let basis = self.sigma.tmw_basis_all(z)?;
        Ok(basis.iter().zip(&self.coeffs).map(|(e, c)| c * e).sum())
    }
}

/// The orthogonal projection `g = ζ⁻¹ P_B(k_{1/ζ̄})` of `z ↦ 1/(ζ − z)` onto
/// `K_B`, for `|ζ| > 1`.
///
/// Its TMW coordinates are
/// `c_k = (1 − |λ_k|²)^{1/2} / (ζ − λ_k) · conj(Π_{j<k} b_{λ_j}(1/ζ̄))`,
/// and `g(λ_i) = 1/(ζ − λ_i)` at every point of `σ`.
pub fn interpolant_g(sigma: &Spectrum, zeta: Complex64) -> Result<TMWCoefficients> {
    if !zeta.is_finite() || zeta.norm() <= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "interpolant needs |ζ| > 1, got |ζ| = {}",
            zeta.norm()
        )));
    }
    let w = 1.0 / zeta.conj();
    let mut partial = Complex64::new(1.0, 0.0);
    let mut coeffs = Vec::with_capacity(sigma.len());
    for &l in sigma.points() {
        coeffs.push((1.0 - l.norm_sqr()).sqrt() / (zeta - l) * partial.conj());
        partial *= blaschke_factor(l, w)?;
    }
    TMWCoefficients::new(sigma.clone(), coeffs)
}

/// Discrete `H²` inner product `⟨f, g⟩ ≈ (1/N) Σ f(z_m) conj(g(z_m))` on `N`
/// equispaced circle nodes (trapezoid rule).
pub fn circle_inner_product<F, G>(mut f: F, mut g: G, grid_size: usize) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
    G: FnMut(Complex64) -> Result<Complex64>,
{
    if grid_size == 0 {
        return Err(Error::InvalidArgument("empty circle grid".into()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..grid_size {
        let z = Complex64::from_polar(1.0, 2.0 * PI * m as f64 / grid_size as f64);
        acc += f(z)? * g(z)?.conj();
    }
    Ok(acc / grid_size as f64)
}

/// Gram matrix `G[k][l] = ⟨e_k, e_l⟩` of the TMW basis on an `N`-point grid.
pub fn tmw_gram(sigma: &Spectrum, grid_size: usize) -> Result<Vec<Vec<Complex64>>> {
    let m = sigma.len();
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    for node in 0..grid_size {
        let z = Complex64::from_polar(1.0, 2.0 * PI * node as f64 / grid_size as f64);
        let e = sigma.tmw_basis_all(z)?;
        for (k, row) in gram.iter_mut().enumerate() {
            for (l, entry) in row.iter_mut().enumerate() {
                *entry += e[k] * e[l].conj();
            }
        }
    }
    let scale = 1.0 / grid_size as f64;
    gram.iter_mut().flatten().for_each(|g| *g *= scale);
    Ok(gram)
}
