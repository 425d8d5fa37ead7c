//! Dominant-plus-tail coverage estimator.
//!
//! Conditioned on the geometry, the serving link's Rayleigh fading turns
//! coverage into a Laplace transform of the interference at
//! `s = T r^eta`. The `K - 1` nearest interferers enter through their exact
//! per-BS factor `1 / (1 + s R_i^-eta)`; the interferers between `R_K` and
//! `R_N` are replaced by the PPP Laplace functional over that annulus. Only
//! the geometry is sampled, so each trial contributes a smooth value in
//! `[0, 1]` rather than a coverage indicator.

use std::f64::consts::PI;

use super::montecarlo::run_trials;
use super::{CoverageCurve, CoveragePoint, EstimatorSettings, Method, ThresholdGrid};
use crate::error::{Error, Result};
use crate::geometry::{sample_nearest, NetworkConfig, Sampler};
use crate::quadrature::tail_integral;
use crate::rng::{Purpose, StreamFamily};

/// Conditional coverage of one geometry at `s = T r^eta`:
///
/// `exp(-s noise) * prod_{i=2..K} 1/(1 + s R_i^-eta) * exp(-2 pi lambda integral_{R_K}^{R_N} s t/(t^eta + s) dt)`
///
/// `distances` must be sorted and hold at least `interferer_total` entries.
#[allow(clippy::too_many_arguments)]
pub fn hybrid_sample_value(
    s: f64,
    distances: &[f64],
    dominant_count: usize,
    interferer_total: usize,
    bs_density: f64,
    noise_power: f64,
    pathloss_exponent: f64,
    quad_abs_tol: f64,
) -> Result<f64> {
    if distances.len() < interferer_total {
        return Err(Error::InsufficientPoints {
            required: interferer_total,
            available: distances.len(),
        });
    }
    if dominant_count == 0 || dominant_count > interferer_total {
        return Err(Error::invalid(format!(
            "need 1 <= K <= N, got K = {dominant_count} and N = {interferer_total}"
        )));
    }
    if !(s >= 0.0) {
        return Err(Error::invalid(format!("s must be >= 0, got {s}")));
    }
    if s == 0.0 {
        return Ok(1.0);
    }

    let noise = (-s * noise_power).exp();
    let dominant: f64 = distances[1..dominant_count]
        .iter()
        .map(|&radius| 1.0 / (1.0 + s / radius.powf(pathloss_exponent)))
        .product();
    let tail = if dominant_count == interferer_total {
        1.0
    } else {
        let integral = tail_integral(
            s,
            pathloss_exponent,
            distances[dominant_count - 1],
            distances[interferer_total - 1],
            quad_abs_tol,
        )?;
        (-2.0 * PI * bs_density * integral).exp()
    };
    Ok((noise * dominant * tail).clamp(0.0, 1.0))
}

/// Hybrid coverage curve over `grid`.
///
/// Trials whose window draw holds fewer than `N` BSs are skipped and the
/// number kept is reported per point. One geometry is shared by every
/// threshold of a trial.
pub fn hybrid_coverage(
    cfg: &NetworkConfig,
    est: &EstimatorSettings,
    grid: &ThresholdGrid,
    sampler: Sampler,
) -> Result<CoverageCurve> {
    cfg.validate()?;
    est.validate()?;
    if sampler == Sampler::Window {
        cfg.check_capacity(est.interferer_total)?;
    }
    let n = est.interferer_total;
    let thresholds = grid.thresholds_linear();
    let geometry = StreamFamily::new(est.seed, Purpose::Geometry, n);

    let summary = run_trials(est.trials, thresholds.len(), n, |m, values| {
        let mut rng = geometry.trial(m);
        let Some(distances) = sample_nearest(cfg, sampler, n, &mut rng)? else {
            return Ok(false);
        };
        let r_eta = distances[0].powf(cfg.pathloss_exponent);
        let mut previous = 1.0f64;
        for (value, &t) in values.iter_mut().zip(thresholds) {
            let v = hybrid_sample_value(
                t * r_eta,
                &distances,
                est.dominant_count,
                n,
                cfg.bs_density,
                cfg.noise_power,
                cfg.pathloss_exponent,
                est.quad_abs_tol,
            )?;
            // The exact value is non-increasing in T; quadrature error must not
            // reorder neighbouring thresholds.
            previous = previous.min(v);
            *value = previous;
        }
        Ok(true)
    })?;

    let points = grid
        .thresholds_db()
        .iter()
        .zip(thresholds)
        .zip(summary.means.iter().zip(&summary.stderrs))
        .map(|((&db, &lin), (&mean, &se))| CoveragePoint {
            threshold_db: db,
            threshold_linear: lin,
            estimate: mean.clamp(0.0, 1.0),
            stderr: se,
            trials_used: summary.trials_used,
        })
        .collect();
    Ok(CoverageCurve {
        method: Method::Hybrid,
        pathloss_exponent: cfg.pathloss_exponent,
        interferer_total: n,
        dominant_count: est.dominant_count,
        points,
    })
}
