//! Empirical coverage: draw geometry and Rayleigh fading, count `SINR > T`.

use rand_distr::{Distribution, Exp1};

use super::montecarlo::run_trials;
use super::{CoverageCurve, CoveragePoint, EstimatorSettings, Method, ThresholdGrid};
use crate::error::{Error, Result};
use crate::geometry::{sample_nearest, sample_window_realization, NetworkConfig, Sampler};
use crate::rng::{Purpose, StreamFamily};

/// Which interferers contribute to the simulated SINR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InterferenceScope {
    /// The `N - 1` nearest interferers.
    #[default]
    Nearest,
    /// Every BS in the window except the serving one.
    AllInWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SimulationOptions {
    pub sampler: Sampler,
    pub scope: InterferenceScope,
}

/// `g_1 r^-eta / (sum_i g_i R_i^-eta + noise)` for gains `g` aligned with `distances`.
pub fn sinr(distances: &[f64], gains: &[f64], pathloss_exponent: f64, noise_power: f64) -> f64 {
    let signal = gains[0] / distances[0].powf(pathloss_exponent);
    let interference: f64 = distances[1..]
        .iter()
        .zip(&gains[1..])
        .map(|(&radius, &g)| g / radius.powf(pathloss_exponent))
        .sum();
    let denom = interference + noise_power;
    if denom == 0.0 {
        f64::INFINITY
    } else {
        signal / denom
    }
}

/// Fraction of trials whose SINR exceeds each threshold.
///
/// Geometry comes from the same substream the hybrid estimator uses for the
/// same seed and `N`; fading comes from a separate substream. The standard
/// error is the binomial `sqrt(p (1 - p) / trials_used)`.
pub fn empirical_coverage(
    cfg: &NetworkConfig,
    est: &EstimatorSettings,
    grid: &ThresholdGrid,
    options: SimulationOptions,
) -> Result<CoverageCurve> {
    cfg.validate()?;
    est.validate()?;
    if options.scope == InterferenceScope::AllInWindow && options.sampler != Sampler::Window {
        return Err(Error::invalid("all-in-window interference requires the window sampler"));
    }
    if options.sampler == Sampler::Window {
        cfg.check_capacity(est.interferer_total)?;
    }
    let n = est.interferer_total;
    let thresholds = grid.thresholds_linear();
    let geometry = StreamFamily::new(est.seed, Purpose::Geometry, n);
    let fading = StreamFamily::new(est.seed, Purpose::Fading, n);

    let summary = run_trials(est.trials, thresholds.len(), n, |m, values| {
        let mut rng = geometry.trial(m);
        let distances = match options.scope {
            InterferenceScope::Nearest => sample_nearest(cfg, options.sampler, n, &mut rng)?,
            InterferenceScope::AllInWindow => {
                let real = sample_window_realization(cfg, &mut rng);
                (real.point_count() >= n).then(|| real.into_distances())
            }
        };
        let Some(distances) = distances else {
            return Ok(false);
        };
        let mut fade_rng = fading.trial(m);
        let gains: Vec<f64> = (0..distances.len()).map(|_| Exp1.sample(&mut fade_rng)).collect();
        let ratio = sinr(&distances, &gains, cfg.pathloss_exponent, cfg.noise_power);
        for (value, &t) in values.iter_mut().zip(thresholds) {
            *value = if ratio > t { 1.0 } else { 0.0 };
        }
        Ok(true)
    })?;

    let used = summary.trials_used as f64;
    let points = grid
        .thresholds_db()
        .iter()
        .zip(thresholds)
        .zip(&summary.means)
        .map(|((&db, &lin), &p)| CoveragePoint {
            threshold_db: db,
            threshold_linear: lin,
            estimate: p,
            stderr: (p * (1.0 - p) / used).sqrt(),
            trials_used: summary.trials_used,
        })
        .collect();
    Ok(CoverageCurve {
        method: Method::Simulation,
        pathloss_exponent: cfg.pathloss_exponent,
        interferer_total: n,
        dominant_count: est.dominant_count,
        points,
    })
}
