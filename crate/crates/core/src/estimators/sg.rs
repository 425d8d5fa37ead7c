//! Infinite-network coverage benchmark.
//!
//! `P(T) = integral_0^inf exp(-s noise) exp(-2 pi lambda integral_r^inf s x/(x^eta + s) dx) f_r(r) dr`
//! with `s = T r^eta` and `f_r` the serving-distance density, evaluated by
//! nested adaptive quadrature.

use std::f64::consts::PI;

use super::{CoverageCurve, CoveragePoint, Method, ThresholdGrid};
use crate::error::{Error, Result};
use crate::geometry::{serving_distance_density, NetworkConfig};
use crate::quadrature::{tail_integral, try_integrate_adaptive};

fn sg_point(cfg: &NetworkConfig, threshold: f64, quad_abs_tol: f64) -> Result<f64> {
    let eta = cfg.pathloss_exponent;
    let integral = try_integrate_adaptive(
        |r| {
            let density = serving_distance_density(r, cfg.bs_density)?;
            let s = threshold * r.powf(eta);
            let noise = (-s * cfg.noise_power).exp();
            if density == 0.0 || noise == 0.0 {
                return Ok(0.0);
            }
            let tail = tail_integral(s, eta, r, f64::INFINITY, quad_abs_tol)?;
            Ok(noise * (-2.0 * PI * cfg.bs_density * tail).exp() * density)
        },
        0.0,
        f64::INFINITY,
        quad_abs_tol,
    )?;
    Ok(integral.value.clamp(0.0, 1.0))
}

/// Deterministic infinite-network coverage over `grid`; requires `eta > 2`.
pub fn sg_coverage(cfg: &NetworkConfig, grid: &ThresholdGrid, quad_abs_tol: f64) -> Result<CoverageCurve> {
    cfg.validate()?;
    if !(cfg.pathloss_exponent > 2.0) {
        return Err(Error::invalid(format!(
            "the infinite-network benchmark requires eta > 2, got {}",
            cfg.pathloss_exponent
        )));
    }
    let points = grid
        .thresholds_db()
        .iter()
        .zip(grid.thresholds_linear())
        .map(|(&db, &lin)| {
            Ok(CoveragePoint {
                threshold_db: db,
                threshold_linear: lin,
                estimate: sg_point(cfg, lin, quad_abs_tol)?,
                stderr: 0.0,
                trials_used: 0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoverageCurve {
        method: Method::Sg,
        pathloss_exponent: cfg.pathloss_exponent,
        interferer_total: 0,
        dominant_count: 0,
        points,
    })
}
