//! Truncation error of the hybrid estimator against the infinite network.
//!
//! Cutting the interference off at the `N`-th BS loses the Laplace factor of
//! everything beyond `R_N`. The lost fraction is
//! `delta_N(s, R_N) = 1 - exp(-2 pi lambda integral_{R_N}^inf s t/(t^eta + s) dt)`,
//! and its mean over `(r, R_N)` bounds `|hybrid - sg|`. With
//! `1 - e^-z <= z` the integral bound gives
//! `delta_N <= 2 pi lambda s R_N^(2 - eta) / (eta - 2)`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{sample_ordered_distances_direct, NetworkConfig};
use crate::quadrature::tail_integral;
use crate::rng::{Purpose, StreamFamily};

fn require_eta_above_two(eta: f64) -> Result<()> {
    if !(eta > 2.0) {
        return Err(Error::invalid(format!("truncation error needs eta > 2, got {eta}")));
    }
    Ok(())
}

/// `delta_N(s, R_N)`.
pub fn delta_n(s: f64, r_n: f64, bs_density: f64, eta: f64, quad_abs_tol: f64) -> Result<f64> {
    require_eta_above_two(eta)?;
    if !(r_n > 0.0) || !(bs_density > 0.0) {
        return Err(Error::invalid(format!("need R_N > 0 and lambda > 0, got {r_n} and {bs_density}")));
    }
    let tail = tail_integral(s, eta, r_n, f64::INFINITY, quad_abs_tol)?;
    // -expm1 keeps tiny tails from rounding to zero.
    Ok((-(-2.0 * PI * bs_density * tail).exp_m1()).clamp(0.0, 1.0))
}

/// `2 pi lambda s R_N^(2 - eta) / (eta - 2)`, an upper bound on [`delta_n`].
pub fn delta_n_upper_bound(s: f64, r_n: f64, bs_density: f64, eta: f64) -> Result<f64> {
    require_eta_above_two(eta)?;
    if !(r_n > 0.0) {
        return Err(Error::invalid(format!("need R_N > 0, got {r_n}")));
    }
    Ok(2.0 * PI * bs_density * s * r_n.powf(2.0 - eta) / (eta - 2.0))
}

/// Monte Carlo mean of a per-draw quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub stderr: f64,
}

impl MeanEstimate {
    fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let stderr = if samples.len() > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Self { mean, stderr }
    }
}

/// Per-draw `(delta_N, bound)` pairs at linear threshold `threshold`.
fn delta_draws(
    cfg: &NetworkConfig,
    interferer_total: usize,
    threshold: f64,
    trials: usize,
    seed: u64,
    quad_abs_tol: f64,
) -> Result<Vec<(f64, f64)>> {
    cfg.validate()?;
    require_eta_above_two(cfg.pathloss_exponent)?;
    if interferer_total < 2 {
        return Err(Error::invalid(format!("need N >= 2, got {interferer_total}")));
    }
    if !(threshold > 0.0) {
        return Err(Error::invalid(format!("threshold must be > 0, got {threshold}")));
    }
    if trials == 0 {
        return Err(Error::invalid("trial count must be >= 1"));
    }
    let eta = cfg.pathloss_exponent;
    let streams = StreamFamily::new(seed, Purpose::TailError, interferer_total);
    (0..trials as u64)
        .into_par_iter()
        .map(|m| {
            let mut rng = streams.trial(m);
            let real = sample_ordered_distances_direct(cfg.bs_density, interferer_total, &mut rng)?;
            let d = real.distances();
            let s = threshold * d[0].powf(eta);
            let r_n = d[interferer_total - 1];
            Ok((
                delta_n(s, r_n, cfg.bs_density, eta, quad_abs_tol)?,
                delta_n_upper_bound(s, r_n, cfg.bs_density, eta)?,
            ))
        })
        .collect()
}

/// `E[delta_N(T r^eta, R_N)]` over the PPP law of `(r, R_N)`.
pub fn expected_delta_n(
    cfg: &NetworkConfig,
    interferer_total: usize,
    threshold: f64,
    trials: usize,
    seed: u64,
    quad_abs_tol: f64,
) -> Result<MeanEstimate> {
    let draws = delta_draws(cfg, interferer_total, threshold, trials, seed, quad_abs_tol)?;
    let deltas: Vec<f64> = draws.iter().map(|d| d.0).collect();
    Ok(MeanEstimate::from_samples(&deltas))
}

/// Least-squares slope of `ln mean` against `ln N`.
pub fn convergence_slope(counts: &[usize], means: &[f64]) -> Result<f64> {
    if counts.len() != means.len() {
        return Err(Error::invalid("counts and means differ in length"));
    }
    if counts.len() < 3 {
        return Err(Error::invalid(format!("slope fit needs >= 3 points, got {}", counts.len())));
    }
    if counts.iter().any(|&n| n == 0) || means.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
        return Err(Error::invalid("slope fit needs positive counts and means"));
    }
    let xs: Vec<f64> = counts.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = means.iter().map(|m| m.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("slope fit needs at least two distinct counts"));
    }
    Ok(sxy / sxx)
}

/// Tail error versus interferer count.
#[derive(Debug, Clone, PartialEq)]
pub struct TailErrorReport {
    pub interferer_counts: Vec<usize>,
    pub delta_estimates: Vec<MeanEstimate>,
    /// Mean of the pointwise bound over the same draws as the estimates.
    pub analytic_bounds: Vec<f64>,
    pub fitted_slope: f64,
}

/// Estimates `E[delta_N]` and the mean analytic bound for each count and fits
/// the log-log slope of the estimates.
pub fn tail_error_report(
    cfg: &NetworkConfig,
    counts: &[usize],
    threshold: f64,
    trials: usize,
    seed: u64,
    quad_abs_tol: f64,
) -> Result<TailErrorReport> {
    let mut delta_estimates = Vec::with_capacity(counts.len());
    let mut analytic_bounds = Vec::with_capacity(counts.len());
    for &n in counts {
        let draws = delta_draws(cfg, n, threshold, trials, seed, quad_abs_tol)?;
        let deltas: Vec<f64> = draws.iter().map(|d| d.0).collect();
        delta_estimates.push(MeanEstimate::from_samples(&deltas));
        analytic_bounds.push(draws.iter().map(|d| d.1).sum::<f64>() / draws.len() as f64);
    }
    let means: Vec<f64> = delta_estimates.iter().map(|e| e.mean).collect();
    let fitted_slope = convergence_slope(counts, &means)?;
    Ok(TailErrorReport {
        interferer_counts: counts.to_vec(),
        delta_estimates,
        analytic_bounds,
        fitted_slope,
    })
}
