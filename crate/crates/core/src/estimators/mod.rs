//! Coverage probability estimators.
//!
//! * [`hybrid`]: Monte Carlo over the geometry of the `K - 1` dominant
//!   interferers with fading averaged out exactly, plus a Laplace-functional
//!   tail for interferers `K+1..N`.
//! * [`simulation`]: plain Monte Carlo over geometry and Rayleigh fading.
//! * [`sg`]: the infinite-network stochastic-geometry integral.
//! * [`probabilistic`]: a Gaussian interference approximation for `eta = 4`.

pub mod hybrid;
pub mod probabilistic;
pub mod sg;
pub mod simulation;

mod montecarlo;

pub use hybrid::{hybrid_coverage, hybrid_sample_value};
pub use probabilistic::{alpha_coefficient, prob_model_coverage, GaussianInterference, ProbModelParams};
pub use sg::sg_coverage;
pub use simulation::{empirical_coverage, InterferenceScope, SimulationOptions};

use crate::error::{Error, Result};
use crate::quadrature::DEFAULT_ABS_TOL;

/// Default number of dominant interferers handled exactly (including the serving BS).
pub const DEFAULT_DOMINANT_COUNT: usize = 4;

/// Algorithmic knobs shared by the Monte Carlo estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorSettings {
    /// `K`: nearest BSs treated exactly (serving BS plus `K - 1` interferers).
    pub dominant_count: usize,
    /// `N`: BSs taken into account in total (serving BS plus `N - 1` interferers).
    pub interferer_total: usize,
    /// `M`: Monte Carlo trials.
    pub trials: usize,
    pub quad_abs_tol: f64,
    pub seed: u64,
}

impl Default for EstimatorSettings {
    fn default() -> Self {
        Self {
            dominant_count: DEFAULT_DOMINANT_COUNT,
            interferer_total: 10,
            trials: 50_000,
            quad_abs_tol: DEFAULT_ABS_TOL,
            seed: 0,
        }
    }
}

impl EstimatorSettings {
    pub fn validate(&self) -> Result<()> {
        if self.dominant_count == 0 || self.dominant_count > self.interferer_total {
            return Err(Error::invalid(format!(
                "need 1 <= K <= N, got K = {} and N = {}",
                self.dominant_count, self.interferer_total
            )));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trial count must be >= 1"));
        }
        if !(self.quad_abs_tol > 0.0) {
            return Err(Error::invalid(format!(
                "quadrature tolerance must be > 0, got {}",
                self.quad_abs_tol
            )));
        }
        Ok(())
    }
}

/// SINR thresholds, kept in dB and as linear power ratios `10^(dB/10)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdGrid {
    thresholds_db: Vec<f64>,
    thresholds_linear: Vec<f64>,
}

impl ThresholdGrid {
    pub fn from_db(thresholds_db: Vec<f64>) -> Result<Self> {
        if thresholds_db.is_empty() {
            return Err(Error::invalid("threshold grid is empty"));
        }
        if thresholds_db.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("thresholds must be finite"));
        }
        if thresholds_db.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("thresholds must be strictly increasing"));
        }
        let thresholds_linear = thresholds_db.iter().map(|&db| db_to_linear(db)).collect();
        Ok(Self {
            thresholds_db,
            thresholds_linear,
        })
    }

    /// Grid from linear ratios; each must be > 0.
    pub fn from_linear(thresholds: &[f64]) -> Result<Self> {
        if thresholds.iter().any(|&t| !(t > 0.0)) {
            return Err(Error::invalid("linear thresholds must be > 0"));
        }
        Self::from_db(thresholds.iter().map(|t| 10.0 * t.log10()).collect())
    }

    /// `min, min + step, ..., max` in dB; `max` is included when it lies on the lattice.
    pub fn sweep_db(min_db: f64, max_db: f64, step_db: f64) -> Result<Self> {
        if !(step_db > 0.0) || !min_db.is_finite() || !max_db.is_finite() || max_db < min_db {
            return Err(Error::invalid(format!(
                "threshold sweep needs min <= max and step > 0, got {min_db}..{max_db} step {step_db}"
            )));
        }
        let steps = ((max_db - min_db) / step_db + 1e-9).floor() as usize;
        Self::from_db((0..=steps).map(|j| min_db + j as f64 * step_db).collect())
    }

    pub fn thresholds_db(&self) -> &[f64] {
        &self.thresholds_db
    }

    pub fn thresholds_linear(&self) -> &[f64] {
        &self.thresholds_linear
    }

    pub fn len(&self) -> usize {
        self.thresholds_db.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds_db.is_empty()
    }
}

impl Default for ThresholdGrid {
    /// -20 dB to 20 dB in 2 dB steps.
    fn default() -> Self {
        Self::sweep_db(-20.0, 20.0, 2.0).expect("default grid is valid")
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Hybrid,
    Simulation,
    Sg,
    Probabilistic,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Hybrid, Method::Simulation, Method::Sg, Method::Probabilistic];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Hybrid => "hybrid",
            Method::Simulation => "simulation",
            Method::Sg => "sg",
            Method::Probabilistic => "probabilistic",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown method `{s}` (expected hybrid|simulation|sg|probabilistic)")))
    }
}

/// Coverage estimate at one threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveragePoint {
    pub threshold_db: f64,
    pub threshold_linear: f64,
    pub estimate: f64,
    /// Monte Carlo standard error; zero for deterministic methods.
    pub stderr: f64,
    /// Trials behind the estimate; zero for deterministic methods.
    pub trials_used: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageCurve {
    pub method: Method,
    pub pathloss_exponent: f64,
    /// `N` of the run this curve belongs to.
    pub interferer_total: usize,
    /// `K` of the run this curve belongs to.
    pub dominant_count: usize,
    pub points: Vec<CoveragePoint>,
}

impl CoverageCurve {
    pub fn estimates(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.estimate).collect()
    }

    pub fn stderrs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.stderr).collect()
    }

    /// Re-labels the curve with the `(N, K)` combination it is reported under.
    pub fn with_combination(mut self, interferer_total: usize, dominant_count: usize) -> Self {
        self.interferer_total = interferer_total;
        self.dominant_count = dominant_count;
        self
    }

    /// Largest pointwise absolute difference to `other`.
    pub fn max_abs_diff(&self, other: &CoverageCurve) -> f64 {
        self.points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| (a.estimate - b.estimate).abs())
            .fold(0.0, f64::max)
    }
}
