//! Interpolation-theoretic bounds on `R(n, r)`.
//!
//! * Upper: `‖(ζ − T)⁻¹‖ ≤ Σ_k (1 + |λ_k|)/(1 − |λ_k|)` via the projection
//!   interpolant of [`crate::blaschke::interpolant_g`] and von Neumann's
//!   inequality.
//! * Lower: for `B = b_{−r}ⁿ` and `−1/r < ζ < −1`, the quotient norm of the
//!   polynomial `Ψ_n = Φ_n / (ζ + r)` modulo `zⁿ` is bounded below by the
//!   Fejér (Cesàro) mean of `Φ_n` at `1`. Letting `ζ → −1` gives
//!   `R(n, r) ≥ (n(1 + r) + 1 − r) / (2(1 − r))`.
//!
//! Throughout, `a = −(1 + rζ)/(r + ζ)`, which lies in `(0, 1)` on the window.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::blaschke::Spectrum;
use crate::error::{Error, Result};

/// Margin kept from both ends of the window `(−1/r, −1)`.
pub const WINDOW_GUARD: f64 = 1e-12;

/// Below this `|ζ + 1|` the closed-form sum is 0/0-degenerate and the direct
/// sum is used instead.
pub const DEGENERATE_SWITCH: f64 = 1e-4;

/// Exponents `k` of the sequence `ζ_k = −1 − 10^{−k}` used for the limit.
const LIMIT_EXPONENTS: std::ops::RangeInclusive<i32> = 4..=8;
const LIMIT_ACCEPT: f64 = 1e-6;

/// `Σ_k (1 + |λ_k|)/(1 − |λ_k|)`.
pub fn upper_bound_sum(sigma: &Spectrum) -> f64 {
    sigma
        .points()
        .iter()
        .map(|l| {
            let m = l.norm();
            (1.0 + m) / (1.0 - m)
        })
        .sum()
}

/// `(n(1 + r) + 1 − r) / (2(1 − r))`, a lower bound on `R(n, r)` valid for
/// every `n ≥ 1` and `r ∈ [0, 1)`.
pub fn lower_bound(n: usize, r: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!("r = {r} outside [0, 1)")));
    }
    Ok((n as f64 * (1.0 + r) + 1.0 - r) / (2.0 * (1.0 - r)))
}

/// Dense polynomial, `coeffs[k]` multiplying `z^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialCoefficients {
    coeffs: Vec<Complex64>,
}

impl PolynomialCoefficients {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("coefficients must be nonempty and finite".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }
}

/// Parameters `(n, r, ζ)` with `r ∈ (0, 1)` and `ζ` real in `(−1/r, −1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FejerQuery {
    n: usize,
    r: f64,
    zeta: f64,
}

impl FejerQuery {
    pub fn new(n: usize, r: f64, zeta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidArgument(format!("r = {r} outside (0, 1)")));
        }
        if !(zeta > -1.0 / r + WINDOW_GUARD && zeta < -1.0 - WINDOW_GUARD) {
            return Err(Error::InvalidArgument(format!(
                "ζ = {zeta} outside the window (−1/r, −1) = ({}, −1)",
                -1.0 / r
            )));
        }
        Ok(Self { n, r, zeta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    /// `a = −(1 + rζ)/(r + ζ)`.
    pub fn ratio(&self) -> f64 {
        -(1.0 + self.r * self.zeta) / (self.r + self.zeta)
    }

    /// `−(1 − r²)/(r + ζ)`, the positive multiplier of the middle terms.
    fn middle_scale(&self) -> f64 {
        -(1.0 - self.r * self.r) / (self.r + self.zeta)
    }
}

/// Coefficients of
/// `Φ_n(z) = 1 + r aⁿ⁻¹ zⁿ − ((1 − r²)/(r + ζ)) Σ_{k=1}^{n−1} a^{k−1} z^k`.
///
/// All coefficients are real and nonnegative on the window.
pub fn phi_coeffs(q: &FejerQuery) -> PolynomialCoefficients {
    let n = q.n;
    let a = q.ratio();
    let c = q.middle_scale();
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(1.0);
    let mut power = 1.0;
    for _ in 1..n {
        coeffs.push(c * power);
        power *= a;
    }
    coeffs.push(q.r * power);
    PolynomialCoefficients {
        coeffs: coeffs.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
    }
}

/// `Ψ_n(z) = Φ_n(z) / (ζ + r)`.
pub fn psi_eval(q: &FejerQuery, z: Complex64) -> Complex64 {
    phi_coeffs(q).eval(z) / (q.zeta + q.r)
}

fn check_index(q: &FejerQuery, j: usize) -> Result<()> {
    if j >= q.n {
        return Err(Error::InvalidArgument(format!("partial sum index {j} ≥ n = {}", q.n)));
    }
    Ok(())
}

/// `S_j(1) = 1 − ((1 − r²)/(r + ζ)) Σ_{k=1}^{j} a^{k−1}`, summed directly.
pub fn partial_sum_s(q: &FejerQuery, j: usize) -> Result<f64> {
    check_index(q, j)?;
    let a = q.ratio();
    let mut geometric = KahanSum::default();
    let mut power = 1.0;
    for _ in 0..j {
        geometric.add(power);
        power *= a;
    }
    Ok(1.0 + q.middle_scale() * geometric.value())
}

/// `S_j(1) = (r + ζ + (1 − r) a^j) / (ζ + 1)`.
pub fn partial_sum_s_closed(q: &FejerQuery, j: usize) -> Result<f64> {
    check_index(q, j)?;
    Ok((q.r + q.zeta + (1.0 - q.r) * q.ratio().powi(j as i32)) / (q.zeta + 1.0))
}

/// `Σ_{j=0}^{n−1} S_j(1)` by compensated direct summation of positive terms.
pub fn direct_sum(q: &FejerQuery) -> f64 {
    let a = q.ratio();
    let c = q.middle_scale();
    let mut total = KahanSum::default();
    let mut geometric = KahanSum::default();
    let mut power = 1.0;
    for _ in 0..q.n {
        total.add(1.0 + c * geometric.value());
        geometric.add(power);
        power *= a;
    }
    total.value()
}

/// `Σ_{j=0}^{n−1} S_j(1)` in closed form:
///
/// ```text
/// (ζ + r) / ((ζ + 1)² (1 + r)) · (aⁿ(r − 1) + ((ζ + 1)n − 1) r + 1 + (ζ + 1) n).
/// ```
///
/// The bracket is grouped as `(1 − r)(1 − aⁿ) + (ζ + 1) n (1 + r)` with
/// `1 − aⁿ` from `expm1`/`ln_1p`, which leaves a relative error of order
/// `n ε / |ζ + 1|`. Below `|ζ + 1| < 1e-4` the expression is 0/0-degenerate
/// and the direct sum is returned.
pub fn closed_form_sum(q: &FejerQuery) -> f64 {
    let s = q.zeta + 1.0;
    if s.abs() < DEGENERATE_SWITCH {
        return direct_sum(q);
    }
    let r = q.r;
    let n = q.n as f64;
    // a = 1 − u
    let u = (1.0 + r) * s / (r + q.zeta);
    let one_minus_an = -(n * (-u).ln_1p()).exp_m1();
    let bracket = (1.0 - r) * one_minus_an + s * n * (1.0 + r);
    (q.zeta + r) / (s * s * (1.0 + r)) * bracket
}

/// Cesàro mean `(Φ_n * F_n)(1) = (1/n) Σ_{j<n} S_j(1)`.
pub fn fejer_mean(q: &FejerQuery) -> f64 {
    closed_form_sum(q) / q.n as f64
}

/// `Σ_{k=0}^{n−1} (1 − k/n) Φ̂_n(k)`: the Fejér convolution at `1` taken
/// directly on the polynomial coefficients.
pub fn fejer_mean_from_coeffs(q: &FejerQuery) -> f64 {
    let n = q.n as f64;
    let mut acc = KahanSum::default();
    for (k, c) in phi_coeffs(q).coeffs().iter().enumerate().take(q.n) {
        acc.add((1.0 - k as f64 / n) * c.re);
    }
    acc.value()
}

/// `(1/|ζ + r|)·(Φ_n * F_n)(1)`, a lower bound on
/// `‖Ψ_n‖_{H∞/zⁿH∞} = ‖(ζ − M_B)⁻¹‖` for `B = b_{−r}ⁿ`.
pub fn quotient_norm_lower(q: &FejerQuery) -> f64 {
    fejer_mean(q) / (q.zeta + q.r).abs()
}

/// Numeric limit of `(1/(1 − r)) · (Φ_n * F_n)(1)` as `ζ → −1⁻`.
///
/// Evaluated along `ζ_k = −1 − 10^{−k}`, `k = 4, …, 8` (points outside the
/// window are skipped) and fed into a Richardson table that removes
/// successive powers of the offset. The result is accepted once two
/// consecutive diagonal entries differ by less than `1e-6`.
pub fn fejer_limit(n: usize, r: f64) -> Result<f64> {
    let mut row: Vec<f64> = Vec::new();
    let mut last_diagonal: Option<f64> = None;
    for k in LIMIT_EXPONENTS {
        let zeta = -1.0 - 10f64.powi(-k);
        let Ok(q) = FejerQuery::new(n, r, zeta) else {
            continue;
        };
        let mut next = vec![fejer_mean(&q) / (1.0 - r)];
        for (j, prev) in row.iter().enumerate() {
            let factor = 10f64.powi(j as i32 + 1);
            next.push((factor * next[j] - prev) / (factor - 1.0));
        }
        let diagonal = *next.last().expect("row is nonempty");
        if let Some(d) = last_diagonal {
            if (diagonal - d).abs() < LIMIT_ACCEPT {
                return Ok(diagonal);
            }
        }
        last_diagonal = Some(diagonal);
        row = next;
    }
    Err(Error::Domain(format!(
        "ζ → −1 limit did not settle for n = {n}, r = {r} (last value {last_diagonal:?})"
    )))
}

/// Fejér mean of order `n` of a function sampled on `N` equispaced circle
/// nodes, returned on the same nodes.
///
/// Uses the discrete convolution with `K(t) = Σ_{|j|<n} (1 − |j|/n) e^{ijt}`,
/// which is exact for trigonometric polynomials of degree `< N − n`
/// and, since `K ≥ 0` with unit mean when `n ≤ N`, never increases the
/// sampled sup norm.
pub fn fejer_mean_on_grid(samples: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    let big_n = samples.len();
    if n == 0 || n > big_n {
        return Err(Error::InvalidArgument(format!(
            "Fejér order {n} must be in 1..={big_n}"
        )));
    }
    let kernel: Vec<f64> = (0..big_n)
        .map(|m| {
            let t = 2.0 * PI * m as f64 / big_n as f64;
            1.0 + 2.0
                * (1..n)
                    .map(|j| (1.0 - j as f64 / n as f64) * (j as f64 * t).cos())
                    .sum::<f64>()
        })
        .collect();
    Ok((0..big_n)
        .map(|p| {
            samples
                .iter()
                .enumerate()
                .map(|(m, &h)| h * kernel[(p + big_n - m) % big_n])
                .sum::<Complex64>()
                / big_n as f64
        })
        .collect())
}

#[derive(Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}
