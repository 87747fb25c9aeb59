//! Seeded randomized checks of the resolvent bounds.
//!
//! Every trial draws from its own [`RngStream`] (`stream_index` = trial
//! index), so trials run in parallel and the merged [`TrialReport`] does not
//! depend on scheduling.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::blaschke::Spectrum;
use crate::error::{Error, Result};
use crate::linalg::{
    contraction_with_diagonal, random_contraction, spectral_norm, ComplexMatrix, RngStream,
};
use crate::model_operator::{
    extremal_matrix, model_matrix, resolvent_closed_form, resolvent_norm, ResolventQuery,
};
use crate::toeplitz_norm::resolvent_sup;
use crate::DEFAULT_NORM_TOL;

/// Relative slack under which every guaranteed inequality must hold.
pub const DEFAULT_TOLERANCE: f64 = 1e-7;

/// Minimum pairwise eigenvalue distance for the dominance check.
pub const MIN_EIGENVALUE_GAP: f64 = 1e-3;

const MAX_SPECTRUM_REDRAWS: usize = 10_000;

/// `64` equispaced circle points followed by `1.5`, `2` and `10 e^{iπ/3}`.
pub fn default_zeta_grid() -> Vec<Complex64> {
    let mut grid: Vec<Complex64> = (0..64)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 64.0))
        .collect();
    grid.push(Complex64::new(1.5, 0.0));
    grid.push(Complex64::new(2.0, 0.0));
    grid.push(Complex64::from_polar(10.0, PI / 3.0));
    grid
}

#[derive(Clone, Debug)]
pub struct TrialConfig {
    pub n: usize,
    pub r: f64,
    pub trials: usize,
    pub master_seed: u64,
    pub zeta_grid: Vec<Complex64>,
    pub tolerance: f64,
}

impl TrialConfig {
    /// Config with the default grid and tolerance.
    pub fn new(n: usize, r: f64, trials: usize, master_seed: u64) -> Self {
        Self {
            n,
            r,
            trials,
            master_seed,
            zeta_grid: default_zeta_grid(),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.trials == 0 {
            return Err(Error::InvalidArgument("n and trials must be positive".into()));
        }
        if !(self.r > 0.0 && self.r < 1.0) {
            return Err(Error::InvalidArgument(format!("r = {} outside (0, 1)", self.r)));
        }
        if self.zeta_grid.is_empty() {
            return Err(Error::InvalidArgument("empty ζ grid".into()));
        }
        if let Some(z) = self.zeta_grid.iter().find(|z| !z.is_finite() || z.norm() < 1.0 - 1e-14) {
            return Err(Error::InvalidArgument(format!("grid point {z} inside the unit disk")));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(Error::InvalidArgument("tolerance must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Aggregate of many `observed ≤ bound · (1 + tol)` checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialReport {
    pub passed: usize,
    pub failed: usize,
    /// Smallest `bound − observed` seen; `-inf` if a trial errored.
    pub worst_margin: f64,
    /// JSON description of the worst failing check, when any failed.
    pub worst_case: Option<String>,
    #[serde(skip)]
    worst_failure_key: Option<(f64, u64, usize)>,
}

impl Default for TrialReport {
    fn default() -> Self {
        Self {
            passed: 0,
            failed: 0,
            worst_margin: f64::INFINITY,
            worst_case: None,
            worst_failure_key: None,
        }
    }
}

impl TrialReport {
    pub fn total(&self) -> usize {
        self.passed + self.failed
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    fn record(&mut self, ok: bool, margin: f64, trial: u64, slot: usize, detail: impl FnOnce() -> String) {
        self.worst_margin = self.worst_margin.min(margin);
        if ok {
            self.passed += 1;
            return;
        }
        self.failed += 1;
        let key = (margin, trial, slot);
        if self.worst_failure_key.is_none_or(|k| key_less(key, k)) {
            self.worst_failure_key = Some(key);
            self.worst_case = Some(detail());
        }
    }

    /// Commutative, associative merge.
    pub fn merge(mut self, other: Self) -> Self {
        self.passed += other.passed;
        self.failed += other.failed;
        self.worst_margin = self.worst_margin.min(other.worst_margin);
        if let Some(k) = other.worst_failure_key {
            if self.worst_failure_key.is_none_or(|mine| key_less(k, mine)) {
                self.worst_failure_key = Some(k);
                self.worst_case = other.worst_case;
            }
        }
        self
    }
}

fn key_less(a: (f64, u64, usize), b: (f64, u64, usize)) -> bool {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)).is_lt()
}

fn matrix_json(t: &ComplexMatrix) -> serde_json::Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..t.rows())
        .map(|i| t.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect();
    json!(rows)
}

fn error_report(checks: usize, trial: u64, seed: u64, err: &Error) -> TrialReport {
    let mut report = TrialReport::default();
    let msg = err.to_string();
    for slot in 0..checks {
        report.record(false, f64::NEG_INFINITY, trial, slot, || {
            json!({ "trial": trial, "seed": seed, "error": msg }).to_string()
        });
    }
    report
}

/// Checks `‖(ζ − T)⁻¹‖ ≤ bound·(1 + tol)` at every grid point.
pub fn check_resolvent_bound(
    t: &ComplexMatrix,
    zetas: &[Complex64],
    bound: f64,
    tol: f64,
    trial: u64,
) -> Result<TrialReport> {
    let mut report = TrialReport::default();
    for (slot, &zeta) in zetas.iter().enumerate() {
        let observed = resolvent_norm(t, zeta)?;
        let ok = observed <= bound * (1.0 + tol);
        report.record(ok, bound - observed, trial, slot, || {
            json!({
                "trial": trial,
                "zeta": [zeta.re, zeta.im],
                "observed": observed,
                "bound": bound,
                "matrix": matrix_json(t),
            })
            .to_string()
        });
    }
    Ok(report)
}

/// Random contractions never beat `R(n, r)`.
pub fn verify_extremal(cfg: &TrialConfig) -> Result<TrialReport> {
    cfg.validate()?;
    let bound = resolvent_sup(cfg.n, cfg.r)?;
    Ok((0..cfg.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = RngStream::new(cfg.master_seed, trial);
            random_contraction(cfg.n, cfg.r, &mut rng)
                .and_then(|t| check_resolvent_bound(&t, &cfg.zeta_grid, bound, cfg.tolerance, trial))
                .unwrap_or_else(|e| error_report(cfg.zeta_grid.len(), trial, cfg.master_seed, &e))
        })
        .reduce(TrialReport::default, TrialReport::merge))
}

/// Checks `‖(ζ − T)⁻¹‖ ≤ ‖(ζ − M_B)⁻¹‖·(1 + tol)` with `B` built from `σ`,
/// the (distinct) eigenvalues of `T`.
pub fn check_dominance(
    t: &ComplexMatrix,
    sigma: &Spectrum,
    zetas: &[Complex64],
    tol: f64,
    trial: u64,
) -> Result<TrialReport> {
    let mut report = TrialReport::default();
    for (slot, &zeta) in zetas.iter().enumerate() {
        let observed = resolvent_norm(t, zeta)?;
        let q = ResolventQuery::new(sigma.clone(), zeta)?;
        let bound = spectral_norm(&resolvent_closed_form(&q), DEFAULT_NORM_TOL)?;
        let ok = observed <= bound * (1.0 + tol);
        report.record(ok, bound - observed, trial, slot, || {
            json!({
                "trial": trial,
                "zeta": [zeta.re, zeta.im],
                "observed": observed,
                "model_norm": bound,
                "spectrum": sigma.points().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "matrix": matrix_json(t),
            })
            .to_string()
        });
    }
    Ok(report)
}

fn min_pairwise_gap(points: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            gap = gap.min((a - b).norm());
        }
    }
    gap
}

/// Contraction with spectral radius `≤ r` whose eigenvalues are pairwise at
/// least [`MIN_EIGENVALUE_GAP`] apart; redraws from the same stream until the
/// gap holds.
pub fn sample_distinct_spectrum_contraction(
    n: usize,
    r: f64,
    rng: &mut RngStream,
) -> Result<(ComplexMatrix, Spectrum)> {
    for _ in 0..MAX_SPECTRUM_REDRAWS {
        let diag: Vec<Complex64> = (0..n).map(|_| rng.uniform_in_disk(r)).collect();
        let sample = contraction_with_diagonal(&diag, rng)?;
        if min_pairwise_gap(&sample.eigenvalues) >= MIN_EIGENVALUE_GAP {
            return Ok((sample.matrix, Spectrum::new(sample.eigenvalues)?));
        }
    }
    Err(Error::Domain(format!(
        "no spectrum with gap ≥ {MIN_EIGENVALUE_GAP} after {MAX_SPECTRUM_REDRAWS} draws"
    )))
}

/// Random contractions are dominated by the model operator of their spectrum.
pub fn verify_dominance(cfg: &TrialConfig) -> Result<TrialReport> {
    cfg.validate()?;
    Ok((0..cfg.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = RngStream::new(cfg.master_seed, trial);
            sample_distinct_spectrum_contraction(cfg.n, cfg.r, &mut rng)
                .and_then(|(t, sigma)| check_dominance(&t, &sigma, &cfg.zeta_grid, cfg.tolerance, trial))
                .unwrap_or_else(|e| error_report(cfg.zeta_grid.len(), trial, cfg.master_seed, &e))
        })
        .reduce(TrialReport::default, TrialReport::merge))
}

/// Settings for [`verify_boundary_max`].
#[derive(Clone, Debug)]
pub struct BoundaryConfig {
    pub n: usize,
    pub r: f64,
    pub ray_count: usize,
    pub radial_samples: usize,
    /// Random model matrices checked in addition to `T*`.
    pub random_models: usize,
    pub master_seed: u64,
    pub tolerance: f64,
    pub max_radius: f64,
}

impl BoundaryConfig {
    pub fn new(n: usize, r: f64, ray_count: usize, radial_samples: usize, random_models: usize, master_seed: u64) -> Self {
        Self {
            n,
            r,
            ray_count,
            radial_samples,
            random_models,
            master_seed,
            tolerance: DEFAULT_TOLERANCE,
            max_radius: 5.0,
        }
    }
}

/// Along one ray `ζ = tω`, `t ∈ [1, t_max]`: the resolvent norm is largest at
/// `t = 1` (within tolerance) and strictly smaller at `t_max`.
pub fn check_ray(
    t: &ComplexMatrix,
    omega: Complex64,
    radial_samples: usize,
    max_radius: f64,
    tol: f64,
) -> Result<(bool, f64, Vec<f64>)> {
    let norms = (0..radial_samples)
        .map(|j| {
            let s = 1.0 + (max_radius - 1.0) * j as f64 / (radial_samples - 1) as f64;
            resolvent_norm(t, omega * s)
        })
        .collect::<Result<Vec<f64>>>()?;
    let at_circle = norms[0];
    let beyond = norms[1..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ok = beyond <= at_circle * (1.0 + tol) && norms[radial_samples - 1] < at_circle;
    Ok((ok, at_circle - beyond, norms))
}

/// The supremum over `|ζ| ≥ 1` sits on the unit circle, probed along rays for
/// `T*` and for random model matrices.
pub fn verify_boundary_max(cfg: &BoundaryConfig) -> Result<TrialReport> {
    if cfg.ray_count < 2 || cfg.radial_samples < 2 {
        return Err(Error::InvalidArgument("need at least 2 rays and 2 radial samples".into()));
    }
    if cfg.max_radius.is_nan() || cfg.max_radius <= 1.0 {
        return Err(Error::InvalidArgument("maximum radius must exceed 1".into()));
    }
    let extremal = extremal_matrix(cfg.n, cfg.r)?;
    let rays: Vec<Complex64> = (0..cfg.ray_count)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / cfg.ray_count as f64))
        .collect();
    Ok((0..=cfg.random_models as u64)
        .into_par_iter()
        .map(|idx| {
            let matrix = if idx == 0 {
                Ok(extremal.clone())
            } else {
                let mut rng = RngStream::new(cfg.master_seed, idx - 1);
                Spectrum::new((0..cfg.n).map(|_| rng.uniform_in_disk(cfg.r)).collect())
                    .map(|s| model_matrix(&s))
            };
            let run = |t: ComplexMatrix| -> Result<TrialReport> {
                let mut report = TrialReport::default();
                for (slot, &omega) in rays.iter().enumerate() {
                    let (ok, margin, norms) =
                        check_ray(&t, omega, cfg.radial_samples, cfg.max_radius, cfg.tolerance)?;
                    report.record(ok, margin, idx, slot, || {
                        json!({
                            "matrix_index": idx,
                            "omega": [omega.re, omega.im],
                            "norms": norms,
                            "matrix": matrix_json(&t),
                        })
                        .to_string()
                    });
                }
                Ok(report)
            };
            matrix
                .and_then(run)
                .unwrap_or_else(|e| error_report(rays.len(), idx, cfg.master_seed, &e))
        })
        .reduce(TrialReport::default, TrialReport::merge))
}
