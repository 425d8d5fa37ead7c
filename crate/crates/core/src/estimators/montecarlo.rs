use rayon::prelude::*;

use crate::error::{Error, Result};

/// Per-threshold statistics over the retained trials.
#[derive(Debug, Clone)]
pub(crate) struct TrialSummary {
    pub means: Vec<f64>,
    /// Sample standard deviation divided by `sqrt(trials_used)`.
    pub stderrs: Vec<f64>,
    pub trials_used: usize,
}

/// Runs `trials` independent trials, each filling one value per threshold.
///
/// `per_trial(index, values)` returns `Ok(false)` to skip the trial. Trials
/// may run on any worker; the reduction walks them in index order so the
/// summary does not depend on scheduling.
pub(crate) fn run_trials<F>(trials: usize, width: usize, required_points: usize, per_trial: F) -> Result<TrialSummary>
where
    F: Fn(u64, &mut [f64]) -> Result<bool> + Sync,
{
    let rows: Vec<Option<Vec<f64>>> = (0..trials as u64)
        .into_par_iter()
        .map(|m| {
            let mut values = vec![0.0; width];
            Ok(per_trial(m, &mut values)?.then_some(values))
        })
        .collect::<Result<_>>()?;

    let kept: Vec<&[f64]> = rows.iter().flatten().map(Vec::as_slice).collect();
    let n = kept.len();
    if n == 0 {
        return Err(Error::NoTrialsRetained {
            attempted: trials,
            required: required_points,
        });
    }

    let mut means = vec![0.0; width];
    for row in &kept {
        for (acc, v) in means.iter_mut().zip(row.iter()) {
            *acc += v;
        }
    }
    for m in &mut means {
        *m /= n as f64;
    }

    let mut stderrs = vec![0.0; width];
    if n > 1 {
        let mut sq = vec![0.0; width];
        for row in &kept {
            for ((acc, v), mean) in sq.iter_mut().zip(row.iter()).zip(&means) {
                let d = v - mean;
                *acc += d * d;
            }
        }
        for (se, s) in stderrs.iter_mut().zip(sq) {
            *se = (s / (n - 1) as f64).sqrt() / (n as f64).sqrt();
        }
    }

    Ok(TrialSummary {
        means,
        stderrs,
        trials_used: n,
    })
}
