use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{spectral_norm, ComplexMatrix};
use crate::error::{Error, Result};
use crate::DEFAULT_NORM_TOL;

/// Deterministic random stream addressed by `(master_seed, stream_index)`.
///
/// Streams with distinct indices are independent ChaCha streams under the
/// same key, so parallel callers can each own one without coordination.
#[derive(Clone, Debug)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        Self {
            master_seed,
            stream_index,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Uniform sample in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Standard complex Gaussian: independent `N(0, 1/2)` real and imaginary
    /// parts, so that `E|z|² = 1`.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        Complex64::new(re, im) * FRAC_1_SQRT_2
    }

    /// Area-uniform point of the closed disk of the given radius.
    pub fn uniform_in_disk(&mut self, radius: f64) -> Complex64 {
        let rho = radius * self.uniform().sqrt();
        let angle = 2.0 * PI * self.uniform();
        Complex64::from_polar(rho, angle)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Haar-distributed unitary matrix.
///
/// Orthonormalizes the columns of a complex Gaussian matrix by Gram–Schmidt
/// with one re-orthogonalization pass. The implied triangular factor has a
/// positive real diagonal, which is the phase normalization that makes the
/// result rotation invariant.
pub fn random_unitary(n: usize, rng: &mut RngStream) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("unitary of dimension 0".into()));
    }
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.complex_gaussian()).collect())
        .collect();
    for k in 0..n {
        for _pass in 0..2 {
            for q in 0..k {
                let proj: Complex64 = cols[q]
                    .iter()
                    .zip(&cols[k])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let (done, rest) = cols.split_at_mut(k);
                for (v, u) in rest[0].iter_mut().zip(&done[q]) {
                    *v -= proj * u;
                }
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[k].iter_mut().for_each(|z| *z /= norm);
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| cols[j][i]))
}

/// A sampled contraction together with its (known) eigenvalues.
#[derive(Clone, Debug)]
pub struct SampledContraction {
    pub matrix: ComplexMatrix,
    /// Eigenvalues in the order of the pre-conjugation triangular diagonal.
    pub eigenvalues: Vec<Complex64>,
}

/// Random `n × n` contraction with spectral radius at most `r`.
///
/// Upper-triangular `A` with diagonal drawn area-uniformly from the disk of
/// radius `r` and complex Gaussian strict upper part, scaled by
/// `min(1, 1/‖A‖)` and conjugated by a Haar unitary.
pub fn random_contraction(n: usize, r: f64, rng: &mut RngStream) -> Result<ComplexMatrix> {
    Ok(random_contraction_with_spectrum(n, r, rng)?.matrix)
}

/// As [`random_contraction`], also returning the eigenvalues.
pub fn random_contraction_with_spectrum(
    n: usize,
    r: f64,
    rng: &mut RngStream,
) -> Result<SampledContraction> {
    if n == 0 {
        return Err(Error::InvalidArgument("contraction of dimension 0".into()));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!("spectral radius bound {r} outside [0, 1)")));
    }
    let diag: Vec<Complex64> = (0..n).map(|_| rng.uniform_in_disk(r)).collect();
    contraction_with_diagonal(&diag, rng)
}

/// Random contraction whose pre-scaling triangular diagonal is `diag`.
///
/// The returned eigenvalues are `c·diag` where `c = min(1, 1/‖A‖) ≤ 1`.
pub fn contraction_with_diagonal(diag: &[Complex64], rng: &mut RngStream) -> Result<SampledContraction> {
    let n = diag.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty diagonal".into()));
    }
    let mut a = ComplexMatrix::diagonal(diag);
    for i in 0..n {
        for j in i + 1..n {
            a[(i, j)] = rng.complex_gaussian();
        }
    }
    let norm = spectral_norm(&a, DEFAULT_NORM_TOL)?;
    let c = if norm > 1.0 { 1.0 / norm } else { 1.0 };
    let a = a.scale(Complex64::new(c, 0.0));
    let u = random_unitary(n, rng)?;
    let matrix = (&(&u * &a)) * &u.adjoint();
    Ok(SampledContraction {
        matrix,
        eigenvalues: diag.iter().map(|&d| d * c).collect(),
    })
}
