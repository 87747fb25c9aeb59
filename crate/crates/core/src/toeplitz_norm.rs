//! Spectral norm of the lower-triangular Toeplitz matrix `X_β` (ones on the
//! diagonal, `β` below it) and the sharp resolvent bound
//! `R(n, r) = ‖X_{1+r}‖ / (1 − r)`.
//!
//! For `β ∈ (0, 2]` the norm is
//!
//! ```text
//! ‖X_β‖ = ½ √((β − 2)² + β² tan²(θ*/2)),
//! ```
//!
//! where `θ*` is the unique root of `cot(nθ) = ((β − 2)/β) cot(θ/2)` in
//! `[(2n−1)π/(2n), π)`.
//!
//! Everything here is evaluated in terms of the distance `δ = π − θ` to the
//! pole at `π`: `π − θ` is exact in binary64 on the bracket, and
//! `cot(nθ) = −cot(nδ)`, `cot(θ/2) = tan(δ/2)` lose nothing to argument
//! reduction even when `δ ≈ π/(2n)` is tiny.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interpolation_bounds::lower_bound;
use crate::linalg::ComplexMatrix;

/// Default bracket tolerance for [`theta_star`], relative to `π − θ*`.
pub const THETA_TOL: f64 = 1e-15;

const MAX_BISECTIONS: usize = 200;
const MAX_BRACKET_HALVINGS: usize = 1100;
const POLE_GUARD: f64 = 1e-14;

/// Parameters of `X_β`: dimension `n ≥ 1` and `β ∈ [0, 2]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XBetaSpec {
    n: usize,
    beta: f64,
}

impl XBetaSpec {
    pub fn new(n: usize, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if !(0.0..=2.0).contains(&beta) {
            return Err(Error::InvalidArgument(format!("β = {beta} outside [0, 2]")));
        }
        Ok(Self { n, beta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Root `θ*` together with the bracket it was found in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaStarResult {
    pub theta: f64,
    /// `π − θ*`, carried at full relative precision.
    pub distance_to_pi: f64,
    /// Root function evaluated at the returned root.
    pub residual: f64,
    /// `(2n − 1)π / (2n)`.
    pub bracket_lo: f64,
    /// Upper end of the final sign-change bracket, `< π`.
    pub bracket_hi: f64,
    pub iterations: usize,
}

/// Dense `X_β`.
pub fn x_beta(spec: XBetaSpec) -> ComplexMatrix {
    let b = Complex64::new(spec.beta, 0.0);
    ComplexMatrix::from_fn(spec.n, spec.n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => Complex64::new(0.0, 0.0),
        std::cmp::Ordering::Equal => Complex64::new(1.0, 0.0),
        std::cmp::Ordering::Greater => b,
    })
}

/// Root function in the distance variable `δ = π − θ`:
/// `−cot(nδ) + ((2 − β)/β) tan(δ/2)`, strictly increasing on `(0, π/(2n)]`.
fn root_fn_delta(n: usize, beta: f64, delta: f64) -> f64 {
    let nd = n as f64 * delta;
    -nd.cos() / nd.sin() + (2.0 - beta) / beta * (0.5 * delta).tan()
}

/// `f(θ) = cot(nθ) − ((β − 2)/β) cot(θ/2)`, for `θ` in `[(2n−1)π/(2n), π)`.
///
/// For `β = 1 + r` this is `cot(nθ) + ((1 − r)/(1 + r)) cot(θ/2)`. The
/// function is strictly decreasing on the bracket.
pub fn fn_theta(n: usize, beta: f64, theta: f64) -> Result<f64> {
    if n == 0 || !(beta > 0.0 && beta <= 2.0) {
        return Err(Error::InvalidArgument(format!("n = {n}, β = {beta}")));
    }
    let lo = bracket_lo(n);
    // admit the left endpoint however it was rounded
    if !(theta >= lo - 4.0 * f64::EPSILON * PI && theta < PI) {
        return Err(Error::Domain(format!("θ = {theta} outside [{lo}, π)")));
    }
    let delta = PI - theta;
    if (n as f64 * delta).sin().abs() < POLE_GUARD {
        return Err(Error::Domain(format!("θ = {theta} is at a pole of cot(nθ)")));
    }
    Ok(root_fn_delta(n, beta, delta))
}

fn bracket_lo(n: usize) -> f64 {
    PI - PI / (2.0 * n as f64)
}

/// Solves for `θ*` by bisection on `δ = π − θ`.
///
/// The bracket starts at `[(2n−1)π/(2n), π − π/(4n)]`; its upper end is moved
/// towards `π` (halving `δ`) until the root function is negative there.
/// Bisection stops once the bracket width drops below `tol · (π − θ)`, or
/// after 200 steps.
pub fn theta_star(spec: XBetaSpec, tol: f64) -> Result<ThetaStarResult> {
    let (n, beta) = (spec.n, spec.beta);
    if beta <= 0.0 {
        return Err(Error::InvalidArgument("θ* needs β > 0".into()));
    }
    if !(1e-15..=1e-6).contains(&tol) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} outside [1e-15, 1e-6]")));
    }
    let nf = n as f64;
    let lo_theta = bracket_lo(n);
    let delta_left = PI / (2.0 * nf);

    if beta == 2.0 {
        // cot(nθ) vanishes at the left endpoint
        return Ok(ThetaStarResult {
            theta: lo_theta,
            distance_to_pi: delta_left,
            residual: root_fn_delta(n, beta, delta_left),
            bracket_lo: lo_theta,
            bracket_hi: lo_theta,
            iterations: 0,
        });
    }

    let mut hi = delta_left;
    let f_left = root_fn_delta(n, beta, hi);
    let mut lo = PI / (4.0 * nf);
    let mut halvings = 0;
    while root_fn_delta(n, beta, lo) >= 0.0 {
        lo *= 0.5;
        halvings += 1;
        if halvings > MAX_BRACKET_HALVINGS || lo == 0.0 {
            return Err(Error::Bracket {
                lo: lo_theta,
                hi: PI - lo,
                f_lo: f_left,
                f_hi: root_fn_delta(n, beta, lo),
            });
        }
    }
    if f_left <= 0.0 {
        return Err(Error::Bracket {
            lo: lo_theta,
            hi: PI - lo,
            f_lo: f_left,
            f_hi: root_fn_delta(n, beta, lo),
        });
    }
    let bracket_hi = PI - lo;

    // g(δ) < 0 at lo, > 0 at hi
    let mut iterations = 0;
    while iterations < MAX_BISECTIONS && hi - lo > tol * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if root_fn_delta(n, beta, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let delta = 0.5 * (lo + hi);
    Ok(ThetaStarResult {
        theta: PI - delta,
        distance_to_pi: delta,
        residual: root_fn_delta(n, beta, delta),
        bracket_lo: lo_theta,
        bracket_hi,
        iterations,
    })
}

/// Whether `f(2nπ/(2n+1)) < 0`, in which case `θ* ≤ 2nπ/(2n+1)`.
///
/// For `β = 1 + r` this holds for all large `n`, with no explicit threshold,
/// so callers check it per instance.
pub fn upper_bracket_holds(n: usize, beta: f64) -> bool {
    beta > 0.0 && beta <= 2.0 && n > 0 && root_fn_delta(n, beta, PI / (2.0 * n as f64 + 1.0)) < 0.0
}

/// `‖X_β‖` from the root formula; `β = 0` gives `1`.
pub fn x_beta_norm(spec: XBetaSpec) -> Result<f64> {
    Ok(x_beta_norm_with_root(spec)?.0)
}

/// `‖X_β‖` together with the root it was computed from (`None` for `β = 0`).
pub fn x_beta_norm_with_root(spec: XBetaSpec) -> Result<(f64, Option<ThetaStarResult>)> {
    if spec.beta == 0.0 {
        return Ok((1.0, None));
    }
    let root = theta_star(spec, THETA_TOL)?;
    let beta = spec.beta;
    // tan(θ*/2) = cot(δ/2)
    let cot_half = 1.0 / (0.5 * root.distance_to_pi).tan();
    let norm = 0.5 * ((2.0 - beta).powi(2) + (beta * cot_half).powi(2)).sqrt();
    Ok((norm, Some(root)))
}

fn check_n_r(n: usize, r: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!("r = {r} outside [0, 1)")));
    }
    Ok(())
}

/// `R(n, r) = ‖X_{1+r}‖ / (1 − r)`, the supremum of `‖(ζ − T)⁻¹‖` over
/// `n × n` contractions with spectral radius at most `r`, `|ζ| ≥ 1`.
pub fn resolvent_sup(n: usize, r: f64) -> Result<f64> {
    check_n_r(n, r)?;
    Ok(x_beta_norm(XBetaSpec::new(n, 1.0 + r)?)? / (1.0 - r))
}

/// Leading-order growth `(2/π) · (1 + r)/(1 − r) · n` of `R(n, r)`.
pub fn asymptotic_value(n: usize, r: f64) -> Result<f64> {
    check_n_r(n, r)?;
    Ok(2.0 / PI * (1.0 + r) / (1.0 - r) * n as f64)
}

/// `cot(π/(4n))`, the unconstrained-spectrum constant that `‖X_{1+r}‖`
/// approaches as `r → 1`.
pub fn davies_simon(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(1.0 / (PI / (4.0 * n as f64)).tan())
}

/// All reference quantities for one `(n, r)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub r: f64,
    pub exact: f64,
    pub asymptotic: f64,
    pub ratio: f64,
    #[serde(rename = "lower")]
    pub lower_fejer: f64,
    #[serde(rename = "upper")]
    pub upper_sum: f64,
    pub davies_simon: f64,
}

impl BoundReport {
    pub fn compute(n: usize, r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidArgument(format!("r = {r} outside (0, 1)")));
        }
        let exact = resolvent_sup(n, r)?;
        let asymptotic = asymptotic_value(n, r)?;
        Ok(Self {
            n,
            r,
            exact,
            asymptotic,
            ratio: exact / asymptotic,
            lower_fejer: lower_bound(n, r)?,
            upper_sum: n as f64 * (1.0 + r) / (1.0 - r),
            davies_simon: davies_simon(n)?,
        })
    }
}
