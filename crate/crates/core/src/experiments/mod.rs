//! Seeded Monte-Carlo experiments, net-constant calibration and the bounds
//! table for S².
//!
//! ```
//! use epsgraph::experiments::{run_experiment, EpsRule, ExperimentConfig, Task};
//!
//! let cfg = ExperimentConfig {
//!     d: 1,
//!     alpha: 2.0,
//!     eps_rule: EpsRule::Explicit(0.1),
//!     n: 300,
//!     trials: 3,
//!     seed: 1,
//!     tasks: [Task::NetCheck, Task::ChiExact].into(),
//!     budgets: Default::default(),
//! };
//! let run = run_experiment(&cfg).unwrap();
//! assert_eq!(run.records.len(), 3);
//! assert_eq!(run.summary.trials, 3);
//! ```

mod calibrate;
mod config;
mod output;
mod summary;
mod table;
mod trial;

use rayon::prelude::*;

pub use calibrate::{calibrate_net_constant, Calibration, CalibrationRow, CALIBRATION_TRIALS};
pub use config::{Budgets, EpsRule, ExperimentConfig, Task};
pub use output::{
    audit_lines, fmt_f64, trial_row, write_experiment, write_timings_csv, write_trials_csv,
    TRIAL_COLUMNS, VERSION,
};
pub use summary::{Fraction, Stat, SummaryTable};
pub use table::{bounds_table, BoundsRow, BoundsTable, SchemeTally};
pub use trial::{derive_seed, run_trial, splitmix64, SchemeCheck, TrialRecord};

use crate::error::Result;

/// Records sorted by trial index, and their aggregate.
#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub eps_used: f64,
    pub records: Vec<TrialRecord>,
    pub summary: SummaryTable,
}

impl ExperimentRun {
    /// Whether any task of any trial errored (budget exhaustion excluded).
    pub fn any_failed(&self) -> bool {
        self.records.iter().any(TrialRecord::failed_task)
    }
}

/// Runs all trials in parallel. A trial that fails becomes a row with its
/// error recorded; the batch itself only fails on an invalid config.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentRun> {
    let eps = cfg.validate()?;
    let mut records: Vec<TrialRecord> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            run_trial(cfg, i)
                .unwrap_or_else(|e| TrialRecord::failed(i, derive_seed(cfg.seed, i), eps, &e))
        })
        .collect();
    records.sort_by_key(|r| r.trial_index);
    let summary = SummaryTable::from_records(eps, &records);
    Ok(ExperimentRun {
        eps_used: eps,
        records,
        summary,
    })
}
