//! Moment-based Gaussian interference baseline for `eta = 4`.
//!
//! The interference moments `mu_S`, `sigma_S^2` and the normalisation
//! `sigma_0^2` are inputs; this module adds the noise corrections, maps them
//! to `(mu_U, sigma_U^2)` and evaluates
//! `(1 + 2 T sigma_U^2 / sigma_0^2)^(-1/2) exp(-T mu_U^2 / (sigma_0^2 + 2 T sigma_U^2))`.

use std::f64::consts::{LN_2, PI, SQRT_2};

use super::{CoverageCurve, CoveragePoint, Method, ThresholdGrid};
use crate::error::{Error, Result};
use crate::geometry::NetworkConfig;

/// User-supplied moments of the baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbModelParams {
    pub mu_s: f64,
    pub sigma_s_sq: f64,
    pub sigma_0_sq: f64,
    /// `N`, the number of BSs whose `alpha_i` enter `beta`.
    pub interferer_total: usize,
}

/// Derived quantities of the Gaussian approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianInterference {
    pub beta: f64,
    pub mu_tilde: f64,
    pub sigma_tilde_sq: f64,
    pub mu_u: f64,
    pub sigma_u_sq: f64,
}

/// Running sum with Neumaier compensation.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `1 - ln 2 - sum_{k=0}^{i+1} k! / ((k+2)! 2^(k+1))`, evaluated as the
/// remaining series `sum_{k>=i+2} 1 / ((k+1)(k+2) 2^(k+1))` (the full series
/// sums to `1 - ln 2`), so the difference never cancels.
fn log_series_remainder(i: usize) -> f64 {
    let mut acc = CompensatedSum::default();
    let mut k = i + 2;
    let mut pow = 0.5f64.powi((k + 1) as i32);
    loop {
        let kf = k as f64;
        let term = pow / ((kf + 1.0) * (kf + 2.0));
        if term == 0.0 || term < f64::EPSILON * 1e-3 * acc.value() {
            break;
        }
        acc.add(term);
        pow *= 0.5;
        k += 1;
    }
    acc.value()
}

/// `alpha_i` of the noise-corrected variance, `i >= 2`.
pub fn alpha_coefficient(i: usize, bs_density: f64) -> Result<f64> {
    if i < 2 {
        return Err(Error::invalid(format!("alpha_i is defined for i >= 2, got {i}")));
    }
    if !(bs_density > 0.0) {
        return Err(Error::invalid(format!("BS density must be > 0, got {bs_density}")));
    }
    let scale = PI * bs_density;
    let prefactor = 1.0 / (scale * scale);
    if i == 2 {
        return Ok(prefactor * (67.0 - 96.0 * LN_2));
    }

    let x = i as f64;
    // Gamma(i - 2 + k) / Gamma(i) for k = 0..=4, as exact rising/falling products.
    let gamma_ratios = [1.0 / ((x - 1.0) * (x - 2.0)), 1.0 / (x - 1.0), 1.0, x, x * (x + 1.0)];
    let mut inner = CompensatedSum::default();
    let mut factorial = 1.0;
    for (k, ratio) in gamma_ratios.iter().enumerate() {
        if k > 0 {
            factorial *= k as f64;
        }
        inner.add(ratio / (factorial * 2f64.powi((i + k - 2) as i32)));
    }
    let first = 24.0 * (gamma_ratios[0] - inner.value());
    let rising = x * (x + 1.0) * (x + 2.0) * (x + 3.0);
    let second = rising * log_series_remainder(i);
    Ok(prefactor * (first + second))
}

impl ProbModelParams {
    pub fn validate(&self) -> Result<()> {
        if !self.mu_s.is_finite() {
            return Err(Error::invalid(format!("mu_S must be finite, got {}", self.mu_s)));
        }
        if !(self.sigma_s_sq >= 0.0 && self.sigma_s_sq.is_finite()) {
            return Err(Error::invalid(format!("sigma_S^2 must be >= 0, got {}", self.sigma_s_sq)));
        }
        if !(self.sigma_0_sq > 0.0 && self.sigma_0_sq.is_finite()) {
            return Err(Error::invalid(format!("sigma_0^2 must be > 0, got {}", self.sigma_0_sq)));
        }
        if self.interferer_total < 2 {
            return Err(Error::invalid(format!(
                "probabilistic model needs N >= 2, got {}",
                self.interferer_total
            )));
        }
        Ok(())
    }

    /// Noise-adjusted moments and the Gaussian parameters, or
    /// [`Error::ProbModelInvalid`] when `mu~_S < sigma~_S / sqrt(2)`.
    ///
    /// A negative adjusted variance has no square root and is reported as
    /// invalid as well.
    pub fn gaussian_interference(&self, bs_density: f64, noise_power: f64) -> Result<GaussianInterference> {
        self.validate()?;
        let mut beta = CompensatedSum::default();
        for i in 2..=self.interferer_total {
            beta.add(alpha_coefficient(i, bs_density)?);
        }
        let beta = beta.value();
        let scale_sq = (PI * bs_density).powi(2);
        let noise_sq = noise_power * noise_power;
        let mu_tilde = self.mu_s + 2.0 * noise_power / scale_sq;
        let sigma_tilde_sq = self.sigma_s_sq + 20.0 * noise_sq / (scale_sq * scale_sq) + 2.0 * noise_power * beta
            - 4.0 * noise_power * self.mu_s / scale_sq;
        if !(sigma_tilde_sq >= 0.0) || mu_tilde < sigma_tilde_sq.sqrt() / SQRT_2 {
            return Err(Error::ProbModelInvalid {
                mu_tilde,
                sigma_tilde_sq,
            });
        }
        let disc = (mu_tilde * mu_tilde - 0.5 * sigma_tilde_sq).max(0.0);
        Ok(GaussianInterference {
            beta,
            mu_tilde,
            sigma_tilde_sq,
            mu_u: disc.sqrt().sqrt(),
            sigma_u_sq: (mu_tilde - disc.sqrt()).max(0.0),
        })
    }
}

/// Coverage under the Gaussian approximation at linear threshold `t`.
pub fn gaussian_coverage(g: &GaussianInterference, sigma_0_sq: f64, t: f64) -> f64 {
    let spread = sigma_0_sq + 2.0 * t * g.sigma_u_sq;
    let value = (sigma_0_sq / spread).sqrt() * (-t * g.mu_u * g.mu_u / spread).exp();
    value.clamp(0.0, 1.0)
}

/// Deterministic baseline curve; only defined for `eta = 4`.
pub fn prob_model_coverage(params: &ProbModelParams, cfg: &NetworkConfig, grid: &ThresholdGrid) -> Result<CoverageCurve> {
    cfg.validate()?;
    if cfg.pathloss_exponent != 4.0 {
        return Err(Error::invalid(format!(
            "probabilistic baseline is only available for eta = 4, got {}",
            cfg.pathloss_exponent
        )));
    }
    let g = params.gaussian_interference(cfg.bs_density, cfg.noise_power)?;
    let points = grid
        .thresholds_db()
        .iter()
        .zip(grid.thresholds_linear())
        .map(|(&db, &lin)| CoveragePoint {
            threshold_db: db,
            threshold_linear: lin,
            estimate: gaussian_coverage(&g, params.sigma_0_sq, lin),
            stderr: 0.0,
            trials_used: 0,
        })
        .collect();
    Ok(CoverageCurve {
        method: Method::Probabilistic,
        pathloss_exponent: cfg.pathloss_exponent,
        interferer_total: params.interferer_total,
        dominant_count: 0,
        points,
    })
}
