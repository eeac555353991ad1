use serde::{Deserialize, Serialize};

use super::trial::derive_seed;
use crate::dist_graph::{build_graph, find_clique, greedy_clique, predicted_lower_bound, verify_proper, Tessellation};
use crate::error::{Error, Result};
use crate::sphere_geom::{is_eps_net, sample_uniform};

/// How often one tessellation coloring was proper on the sampled graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeTally {
    pub scheme: String,
    pub palette: usize,
    pub proper_trials: usize,
    pub trials: usize,
}

/// One α of the bounds table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub alpha: f64,
    /// Certified lower bound.
    pub lower: usize,
    /// Smallest palette of a scheme proper on every sample, if any.
    pub upper: Option<usize>,
    pub upper_scheme: Option<String>,
    /// `upper` as printed; `n/a(15)` when no implemented scheme applies.
    pub upper_label: String,
    /// Contributions to `lower`.
    pub predicted: usize,
    pub topological: usize,
    pub clique_max: usize,
    pub net_trials: usize,
    pub schemes: Vec<SchemeTally>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsTable {
    pub d: usize,
    pub eps: f64,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<BoundsRow>,
}

/// Lower and upper bounds on χ of ε-distance graphs on S², per α.
///
/// Lower bound: the largest of the dimension-based prediction, the
/// topological bound d+2 = 4 (the neighborhood complex of these graphs is
/// a.a.s. simply connected), and one more than the largest clique found
/// in a sample that is a verified (ε/4)-net.
///
/// Upper bound: each tessellation whose cells are narrower than α is
/// colored onto every sample and checked edge by edge; the smallest palette
/// that is proper on all samples wins.
pub fn bounds_table(
    d: usize,
    alpha_grid: &[f64],
    eps: f64,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<BoundsTable> {
    if d != 2 {
        return Err(Error::Unsupported("bounds tables are tabulated for d = 2 only".into()));
    }
    if trials == 0 || n < 4 {
        return Err(crate::error::invalid("need trials ≥ 1 and n ≥ 4"));
    }
    let samples = (0..trials)
        .map(|t| sample_uniform(d, n, derive_seed(seed, t)))
        .collect::<Result<Vec<_>>>()?;
    let nets = samples
        .iter()
        .map(|x| is_eps_net(x, eps / 4.0, 20_000).map(|r| r.is_net))
        .collect::<Result<Vec<_>>>()?;
    let topological = d + 2;

    let mut rows = Vec::new();
    for &alpha in alpha_grid {
        if !(eps > 0.0 && eps < alpha) {
            return Err(Error::InfeasibleEpsilon(format!("eps {eps} must lie in (0, {alpha})")));
        }
        let predicted = predicted_lower_bound(d, alpha)?;
        let candidates: Vec<Tessellation> = Tessellation::ALL
            .into_iter()
            .filter(|t| t.nominal_alpha_floor() < alpha)
            .collect();
        let mut tallies: Vec<SchemeTally> = candidates
            .iter()
            .map(|t| SchemeTally {
                scheme: t.name().to_string(),
                palette: t.palette(),
                proper_trials: 0,
                trials,
            })
            .collect();
        let mut clique_max = 0;
        let mut clique_bound = 0;
        for (x, &is_net) in samples.iter().zip(&nets) {
            let g = build_graph(x, alpha, eps)?;
            let mut clique = greedy_clique(g.graph()).len();
            if let Some(c) = find_clique(&g, clique + 1, 200_000) {
                clique = c.size();
            }
            clique_max = clique_max.max(clique);
            if is_net {
                clique_bound = clique_bound.max(clique + 1);
            }
            for (t, tally) in candidates.iter().zip(&mut tallies) {
                if verify_proper(g.graph(), &t.color_sample(x)?)?.proper {
                    tally.proper_trials += 1;
                }
            }
        }
        let best = tallies
            .iter()
            .filter(|t| t.proper_trials == t.trials)
            .min_by_key(|t| t.palette);
        rows.push(BoundsRow {
            alpha,
            lower: predicted.max(topological).max(clique_bound),
            upper: best.map(|t| t.palette),
            upper_scheme: best.map(|t| t.scheme.clone()),
            upper_label: best.map_or("n/a(15)".to_string(), |t| t.palette.to_string()),
            predicted,
            topological,
            clique_max,
            net_trials: nets.iter().filter(|&&b| b).count(),
            schemes: tallies,
        });
    }
    Ok(BoundsTable {
        d,
        eps,
        n,
        trials,
        seed,
        rows,
    })
}
