//! Homogeneous PPP base-station layouts seen from a typical user at the origin.
//!
//! Two samplers produce the same law for the nearest distances:
//!
//! * [`sample_window_realization`] scatters a Poisson number of points over the
//!   square `[-L, L]^2` and sorts their distances to the origin.
//! * [`sample_ordered_distances_direct`] builds squared distances as cumulative
//!   sums of exponential increments, so `R_i^2 ~ Gamma(i, 1/(pi*lambda))`,
//!   with no window at all.
//!
//! Distances are in km and densities in BS/km^2.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

use crate::error::{Error, Result};

/// Physical scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig {
    /// BS density (per km^2).
    pub bs_density: f64,
    pub pathloss_exponent: f64,
    /// Linear noise power.
    pub noise_power: f64,
    /// Half side of the square simulation window (km).
    pub half_width: f64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            bs_density: 1.0,
            pathloss_exponent: 4.0,
            noise_power: 0.1,
            half_width: 40.0,
        }
    }
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.bs_density > 0.0 && self.bs_density.is_finite()) {
            return Err(Error::invalid(format!("BS density must be > 0, got {}", self.bs_density)));
        }
        if !(self.pathloss_exponent > 0.0 && self.pathloss_exponent.is_finite()) {
            return Err(Error::invalid(format!(
                "path-loss exponent must be > 0, got {}",
                self.pathloss_exponent
            )));
        }
        if !(self.noise_power >= 0.0 && self.noise_power.is_finite()) {
            return Err(Error::invalid(format!("noise power must be >= 0, got {}", self.noise_power)));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::invalid(format!("window half-width must be > 0, got {}", self.half_width)));
        }
        Ok(())
    }

    /// Window area `(2L)^2`.
    pub fn window_area(&self) -> f64 {
        let side = 2.0 * self.half_width;
        side * side
    }

    /// Mean number of BSs in the window, `lambda * (2L)^2`.
    pub fn expected_point_count(&self) -> f64 {
        self.bs_density * self.window_area()
    }

    /// Checks that the window holds, on average, at least `required` points.
    pub fn check_capacity(&self, required: usize) -> Result<()> {
        let expected = self.expected_point_count();
        if expected < required as f64 {
            return Err(Error::invalid(format!(
                "window expects {expected:.1} BSs but {required} interferers were requested; increase density or half-width"
            )));
        }
        Ok(())
    }
}

/// One spatial draw: distances from the origin to every BS, ascending.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PppRealization {
    distances: Vec<f64>,
}

impl PppRealization {
    /// Sorts `distances` (stable) and wraps them.
    pub fn from_unsorted(mut distances: Vec<f64>) -> Self {
        distances.sort_by(f64::total_cmp);
        Self { distances }
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn point_count(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    /// Serving distance `r`, if any BS was drawn.
    pub fn serving_distance(&self) -> Option<f64> {
        self.distances.first().copied()
    }

    /// The `n` nearest distances, or an error when fewer were drawn.
    pub fn nearest(&self, n: usize) -> Result<&[f64]> {
        self.distances.get(..n).ok_or(Error::InsufficientPoints {
            required: n,
            available: self.distances.len(),
        })
    }

    pub fn into_distances(self) -> Vec<f64> {
        self.distances
    }
}

/// How trial geometry is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampler {
    /// Poisson count of uniform points in the square window.
    #[default]
    Window,
    /// Cumulative exponential increments of squared distance.
    Direct,
}

impl std::str::FromStr for Sampler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "window" => Ok(Sampler::Window),
            "direct" => Ok(Sampler::Direct),
            other => Err(Error::Usage(format!("unknown sampler `{other}` (expected window|direct)"))),
        }
    }
}

impl std::fmt::Display for Sampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sampler::Window => "window",
            Sampler::Direct => "direct",
        })
    }
}

/// Draws squared distances for a Poisson number of uniform points in the window.
fn window_squared_distances<R: Rng + ?Sized>(cfg: &NetworkConfig, rng: &mut R) -> Vec<f64> {
    let mean = cfg.expected_point_count();
    let count = match Poisson::new(mean) {
        Ok(poisson) => poisson.sample(rng) as usize,
        // Poisson::new rejects a zero mean; the draw is empty in that limit.
        Err(_) => 0,
    };
    let side = 2.0 * cfg.half_width;
    (0..count)
        .map(|_| {
            let x = rng.random::<f64>() * side - cfg.half_width;
            let y = rng.random::<f64>() * side - cfg.half_width;
            x * x + y * y
        })
        .collect()
}

/// Samples a full window realization: `Poisson(lambda (2L)^2)` points uniform
/// on `[-L, L]^2`, returned as sorted Euclidean distances from the origin.
pub fn sample_window_realization<R: Rng + ?Sized>(cfg: &NetworkConfig, rng: &mut R) -> PppRealization {
    let squared = window_squared_distances(cfg, rng);
    PppRealization::from_unsorted(squared.into_iter().map(f64::sqrt).collect())
}

/// The `n` nearest window distances, or `None` when the window drew fewer
/// than `n` points.
///
/// Consumes exactly the random numbers [`sample_window_realization`] does and
/// returns the same sorted prefix, using partial selection instead of a full
/// sort.
pub fn sample_window_nearest<R: Rng + ?Sized>(cfg: &NetworkConfig, n: usize, rng: &mut R) -> Option<Vec<f64>> {
    let mut squared = window_squared_distances(cfg, rng);
    if squared.len() < n {
        return None;
    }
    if n == 0 {
        return Some(Vec::new());
    }
    if n < squared.len() {
        squared.select_nth_unstable_by(n - 1, f64::total_cmp);
        squared.truncate(n);
    }
    squared.sort_by(f64::total_cmp);
    Some(squared.into_iter().map(f64::sqrt).collect())
}

/// Window-free draw of the `count` nearest distances of a PPP with density `bs_density`.
pub fn sample_ordered_distances_direct<R: Rng + ?Sized>(
    bs_density: f64,
    count: usize,
    rng: &mut R,
) -> Result<PppRealization> {
    if !(bs_density > 0.0 && bs_density.is_finite()) {
        return Err(Error::invalid(format!("BS density must be > 0, got {bs_density}")));
    }
    if count == 0 {
        return Err(Error::invalid("direct sampler needs count >= 1"));
    }
    let scale = 1.0 / (PI * bs_density);
    let mut acc = 0.0;
    let distances = (0..count)
        .map(|_| {
            let increment: f64 = Exp1.sample(rng);
            acc += increment * scale;
            acc.sqrt()
        })
        .collect();
    Ok(PppRealization { distances })
}

/// The `n` nearest distances drawn with `sampler`; `None` for a window draw
/// that came up short.
pub fn sample_nearest<R: Rng + ?Sized>(
    cfg: &NetworkConfig,
    sampler: Sampler,
    n: usize,
    rng: &mut R,
) -> Result<Option<Vec<f64>>> {
    match sampler {
        Sampler::Window => Ok(sample_window_nearest(cfg, n, rng)),
        Sampler::Direct => Ok(Some(sample_ordered_distances_direct(cfg.bs_density, n, rng)?.into_distances())),
    }
}

/// Density of the serving distance, `2 pi lambda r exp(-pi lambda r^2)`.
pub fn serving_distance_density(r: f64, bs_density: f64) -> Result<f64> {
    if !(bs_density > 0.0) {
        return Err(Error::invalid(format!("BS density must be > 0, got {bs_density}")));
    }
    if !(r >= 0.0) {
        return Err(Error::invalid(format!("distance must be >= 0, got {r}")));
    }
    Ok(2.0 * PI * bs_density * r * (-PI * bs_density * r * r).exp())
}
