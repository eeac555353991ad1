use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::simplicial::DEFAULT_SIMPLEX_CAP;

/// How ε is chosen for a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EpsRule {
    /// A fixed value in radians.
    Explicit(f64),
    /// `C · (ln n / n)^{1/d}` with the given constant `C`.
    Scaled(f64),
}

impl EpsRule {
    pub fn resolve(self, d: usize, n: usize) -> f64 {
        match self {
            Self::Explicit(eps) => eps,
            Self::Scaled(c) => {
                let n = n as f64;
                c * (n.ln() / n).powf(1.0 / d as f64)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    NetCheck,
    GraphStats,
    Homology,
    DelaunayCheck,
    ChiExact,
    ChiBounds,
    Colorings,
}

impl Task {
    pub const ALL: [Task; 7] = [
        Task::NetCheck,
        Task::GraphStats,
        Task::Homology,
        Task::DelaunayCheck,
        Task::ChiExact,
        Task::ChiBounds,
        Task::Colorings,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::NetCheck => "net_check",
            Task::GraphStats => "graph_stats",
            Task::Homology => "homology",
            Task::DelaunayCheck => "delaunay_check",
            Task::ChiExact => "chi_exact",
            Task::ChiBounds => "chi_bounds",
            Task::Colorings => "colorings",
        }
    }
}

impl std::str::FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| invalid(format!("unknown task `{s}`")))
    }
}

/// Time and size caps. Running out of budget marks a field as unknown; it
/// is never an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    /// Wall-clock budget for the exact chromatic number, per trial.
    pub chi_seconds: f64,
    /// Largest k tried by the exact chromatic search.
    pub chi_max_k: usize,
    /// Node expansions for the clique search.
    pub clique_nodes: u64,
    /// Largest number of simplices enumerated for homology.
    pub simplex_cap: u64,
    /// Probe grid size for net checks on S² and above.
    pub probe_resolution: usize,
    /// Homology on S² is skipped above this sample size ...
    pub max_homology_n: usize,
    /// ... unless this is set.
    pub allow_large_homology: bool,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            chi_seconds: 600.0,
            chi_max_k: 16,
            clique_nodes: 1_000_000,
            simplex_cap: DEFAULT_SIMPLEX_CAP,
            probe_resolution: 20_000,
            max_homology_n: 500,
            allow_large_homology: false,
        }
    }
}

/// A Monte-Carlo experiment: `trials` independent samples of `n` points on
/// S^d, each run through the requested tasks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub d: usize,
    pub alpha: f64,
    pub eps_rule: EpsRule,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub tasks: BTreeSet<Task>,
    #[serde(default)]
    pub budgets: Budgets,
}

impl ExperimentConfig {
    /// Checks the config and returns the resolved ε.
    pub fn validate(&self) -> Result<f64> {
        if self.d == 0 {
            return Err(invalid("d must be at least 1"));
        }
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if self.n < self.d + 2 {
            return Err(invalid(format!("n = {} is too small for S^{}", self.n, self.d)));
        }
        if !(self.alpha > 0.0 && self.alpha <= std::f64::consts::PI + 1e-12) {
            return Err(invalid(format!("alpha must lie in (0, π], got {}", self.alpha)));
        }
        if self.tasks.is_empty() {
            return Err(invalid("no tasks requested"));
        }
        if self.d > 2
            && (self.tasks.contains(&Task::DelaunayCheck) || self.tasks.contains(&Task::Colorings))
        {
            return Err(invalid("delaunay_check and colorings need d ≤ 2"));
        }
        if !(self.budgets.chi_seconds >= 0.0) {
            return Err(invalid("chi_seconds must be non-negative"));
        }
        let eps = self.eps_rule.resolve(self.d, self.n);
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::InfeasibleEpsilon(format!("resolved eps {eps} is not positive")));
        }
        if eps >= self.alpha {
            return Err(Error::InfeasibleEpsilon(format!(
                "resolved eps {eps} is not below alpha {}",
                self.alpha
            )));
        }
        Ok(eps)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }
}
