use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::trial::{derive_seed, splitmix64};
use crate::error::{invalid, Result};
use crate::sphere_geom::{is_eps_net, sample_uniform};

/// Samples per sample size used by [`calibrate_net_constant`].
pub const CALIBRATION_TRIALS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub n: usize,
    pub trials: usize,
    /// Samples that are (ε/4)-nets at the returned constant.
    pub successes: usize,
    /// Smallest constant making the target fraction of this n's samples
    /// nets.
    pub c_needed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub d: usize,
    pub target: f64,
    /// Smallest C with net success ≥ target at every n of the grid, where
    /// ε = C·(ln n / n)^{1/d} and the net radius is ε/4.
    pub c: f64,
    pub rows: Vec<CalibrationRow>,
}

/// Estimates the constant in `ε ≥ C·(log n / n)^{1/d}` for which samples are
/// (ε/4)-nets with empirical probability at least `target`.
///
/// Each sample's covering radius is computed once. Net success is then a
/// step function of C on these fixed samples, so the smallest admissible
/// C is an order statistic of the per-sample thresholds `4·gap / scale`;
/// this is exactly the value bisection over C would converge to.
pub fn calibrate_net_constant(d: usize, n_grid: &[usize], target: f64, seed: u64) -> Result<Calibration> {
    if !(target > 0.0 && target < 1.0) {
        return Err(invalid(format!("target must lie in (0, 1), got {target}")));
    }
    if d == 0 {
        return Err(invalid("d must be at least 1"));
    }
    if n_grid.is_empty() || n_grid.iter().any(|&n| n < d + 2) {
        return Err(invalid("n_grid must be nonempty with every n ≥ d+2"));
    }
    let need = (target * CALIBRATION_TRIALS as f64).ceil() as usize;
    let per_n = n_grid
        .iter()
        .map(|&n| {
            let scale = ((n as f64).ln() / n as f64).powf(1.0 / d as f64);
            let base = seed ^ splitmix64(n as u64);
            let mut thresholds = (0..CALIBRATION_TRIALS)
                .into_par_iter()
                .map(|t| {
                    let x = sample_uniform(d, n, derive_seed(base, t))?;
                    Ok(4.0 * is_eps_net(&x, 1.0, 20_000)?.worst_gap / scale)
                })
                .collect::<Result<Vec<f64>>>()?;
            thresholds.sort_by(f64::total_cmp);
            Ok((n, thresholds))
        })
        .collect::<Result<Vec<_>>>()?;

    let c = per_n
        .iter()
        .map(|(_, t)| t[need - 1])
        .fold(0.0, f64::max);
    let rows = per_n
        .into_iter()
        .map(|(n, t)| CalibrationRow {
            n,
            trials: CALIBRATION_TRIALS,
            successes: t.iter().filter(|&&x| x <= c).count(),
            c_needed: t[need - 1],
        })
        .collect();
    Ok(Calibration { d, target, c, rows })
}
