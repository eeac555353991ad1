use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Task};
use crate::dist_graph::{
    build_graph, chromatic_number_with, dsatur_upper, find_clique, greedy_clique, is_bipartite,
    verify_proper, ArcScheme, Coloring, EpsDistanceGraph, Tessellation,
};
use crate::error::{Error, Result};
use crate::homology::{certify_sphere_class, connectivity_report, low_betti_mod2};
use crate::simplicial::{
    delaunay_s1, delaunay_s2_report, is_subcomplex, max_facet_diameter, neighborhood_complex,
    projected_simplex_count, reduce_homotopy,
};
use crate::sphere_geom::{sample_uniform, SampleSet};

/// SplitMix64 finalizer, used to decorrelate per-trial seeds.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `trial_index` in a run seeded with `seed`.
pub fn derive_seed(seed: u64, trial_index: usize) -> u64 {
    seed ^ splitmix64(trial_index as u64)
}

/// One named coloring checked against the sampled graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeCheck {
    pub name: String,
    pub palette: usize,
    pub proper: bool,
}

/// Everything measured on one sample. Fields of tasks that were not
/// requested stay `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub seed: u64,
    pub eps_used: f64,

    pub is_net: Option<bool>,
    pub worst_gap: Option<f64>,
    pub probe_resolution: Option<usize>,

    pub edge_count: Option<usize>,
    pub components: Option<usize>,
    pub max_degree: Option<usize>,

    pub clique_found: Option<usize>,
    pub chi_lower: Option<usize>,
    pub chi_upper: Option<usize>,
    pub chi_exact: Option<usize>,
    /// `exact`, or `unknown` when the budget ran out first.
    pub chi_status: Option<String>,
    pub colorings: Option<Vec<SchemeCheck>>,

    /// β_0..β_d over GF(2); `None` entries were beyond reach.
    pub betti: Option<Vec<Option<u64>>>,
    /// Free rank of H_d with integer coefficients, when computed exactly.
    pub free_rank_dim_d: Option<u64>,
    /// Free rank of H_d is at least one (exact rank or certificate).
    pub free_rank_positive: Option<bool>,
    pub sphere_class_certified: Option<bool>,
    /// `exact`, `partial`, `skipped` or `resource_limit`.
    pub homology_status: Option<String>,
    pub reduced_vertices: Option<usize>,
    pub reduced_facets: Option<usize>,

    pub delaunay_subcomplex: Option<bool>,
    pub delaunay_max_diameter: Option<f64>,
    /// Every Delaunay facet has diameter at most ε/2.
    pub delaunay_diam_ok: Option<bool>,
    pub delaunay_perturbed: Option<bool>,

    /// Task errors; budget exhaustion is not listed here.
    pub errors: Vec<String>,
    /// Wall-clock milliseconds per task. Not written to the trials CSV,
    /// which must be reproducible byte for byte.
    pub runtimes_ms: BTreeMap<String, f64>,
}

impl TrialRecord {
    pub fn new(trial_index: usize, seed: u64, eps_used: f64) -> Self {
        Self {
            trial_index,
            seed,
            eps_used,
            is_net: None,
            worst_gap: None,
            probe_resolution: None,
            edge_count: None,
            components: None,
            max_degree: None,
            clique_found: None,
            chi_lower: None,
            chi_upper: None,
            chi_exact: None,
            chi_status: None,
            colorings: None,
            betti: None,
            free_rank_dim_d: None,
            free_rank_positive: None,
            sphere_class_certified: None,
            homology_status: None,
            reduced_vertices: None,
            reduced_facets: None,
            delaunay_subcomplex: None,
            delaunay_max_diameter: None,
            delaunay_diam_ok: None,
            delaunay_perturbed: None,
            errors: Vec::new(),
            runtimes_ms: BTreeMap::new(),
        }
    }

    /// A row for a trial that could not run at all.
    pub fn failed(trial_index: usize, seed: u64, eps_used: f64, err: &Error) -> Self {
        let mut r = Self::new(trial_index, seed, eps_used);
        r.errors.push(err.to_string());
        r
    }

    pub fn failed_task(&self) -> bool {
        !self.errors.is_empty()
    }

    fn timed<T>(&mut self, task: Task, f: impl FnOnce(&mut Self) -> T) -> T {
        let t = Instant::now();
        let out = f(self);
        let ms = t.elapsed().as_secs_f64() * 1e3;
        *self.runtimes_ms.entry(task.name().to_string()).or_default() += ms;
        out
    }

    fn note(&mut self, task: Task, r: Result<()>) {
        if let Err(e) = r {
            self.errors.push(format!("{}: {e}", task.name()));
        }
    }
}

/// Runs every requested task on trial `trial_index` of `cfg`.
///
/// The sample is drawn with seed `cfg.seed ⊕ splitmix64(trial_index)`, so a
/// record depends only on `(cfg, trial_index)`. Task failures are written
/// into `errors`; only an invalid config fails the call.
pub fn run_trial(cfg: &ExperimentConfig, trial_index: usize) -> Result<TrialRecord> {
    let eps = cfg.validate()?;
    let seed = derive_seed(cfg.seed, trial_index);
    let mut rec = TrialRecord::new(trial_index, seed, eps);
    let x = sample_uniform(cfg.d, cfg.n, seed)?;
    let wants = |t: Task| cfg.tasks.contains(&t);

    if wants(Task::NetCheck) {
        let r = rec.timed(Task::NetCheck, |rec| net_task(rec, cfg, &x, eps));
        rec.note(Task::NetCheck, r);
    }

    let needs_graph = [
        Task::GraphStats,
        Task::Homology,
        Task::ChiExact,
        Task::ChiBounds,
        Task::Colorings,
    ]
    .into_iter()
    .any(wants);
    let g = if needs_graph {
        match build_graph(&x, cfg.alpha, eps) {
            Ok(g) => Some(g),
            Err(e) => {
                rec.errors.push(format!("graph: {e}"));
                None
            }
        }
    } else {
        None
    };

    if let Some(g) = &g {
        if wants(Task::GraphStats) {
            rec.timed(Task::GraphStats, |rec| {
                let graph = g.graph();
                rec.edge_count = Some(graph.edge_count());
                rec.components = Some(graph.components().len());
                rec.max_degree = (0..graph.n_vertices()).map(|v| graph.degree(v)).max();
            });
        }
        // Scheme colorings feed both the colorings report and the χ search.
        let schemes = if wants(Task::Colorings) || wants(Task::ChiExact) || wants(Task::ChiBounds) {
            scheme_colorings(g)
        } else {
            Vec::new()
        };
        if wants(Task::Colorings) {
            let r = rec.timed(Task::Colorings, |rec| -> Result<()> {
                let mut checks = Vec::new();
                for (name, c) in &schemes {
                    checks.push(SchemeCheck {
                        name: name.clone(),
                        palette: c.palette_size(),
                        proper: verify_proper(g.graph(), c)?.proper,
                    });
                }
                rec.colorings = Some(checks);
                Ok(())
            });
            rec.note(Task::Colorings, r);
        }
        if wants(Task::ChiBounds) || wants(Task::ChiExact) {
            let r = rec.timed(Task::ChiBounds, |rec| chi_bounds_task(rec, cfg, g, &schemes));
            rec.note(Task::ChiBounds, r);
        }
        if wants(Task::ChiExact) {
            rec.timed(Task::ChiExact, |rec| chi_exact_task(rec, cfg, g, &schemes));
        }
        if wants(Task::Homology) {
            let r = rec.timed(Task::Homology, |rec| homology_task(rec, cfg, g, &x));
            rec.note(Task::Homology, r);
        }
    }

    if wants(Task::DelaunayCheck) {
        let r = rec.timed(Task::DelaunayCheck, |rec| delaunay_task(rec, cfg, &x, eps));
        rec.note(Task::DelaunayCheck, r);
    }
    Ok(rec)
}

fn net_task(rec: &mut TrialRecord, cfg: &ExperimentConfig, x: &SampleSet, eps: f64) -> Result<()> {
    let report = crate::sphere_geom::is_eps_net(x, eps / 4.0, cfg.budgets.probe_resolution)?;
    rec.is_net = Some(report.is_net);
    rec.worst_gap = Some(report.worst_gap);
    rec.probe_resolution = Some(report.probe_resolution);
    Ok(())
}

/// The explicit colorings applicable to the sample's sphere, whether or
/// not they turn out proper.
fn scheme_colorings(g: &EpsDistanceGraph) -> Vec<(String, Coloring)> {
    let x = g.sample();
    let mut out = Vec::new();
    match x.dim() {
        1 => {
            let arcs = [
                ("arc3", ArcScheme::three_color(g.alpha(), g.eps())),
                ("square4", ArcScheme::square(g.alpha(), g.eps())),
            ];
            for (name, scheme) in arcs {
                if let Ok(s) = scheme {
                    let colors = x.points().iter().map(|p| s.color(p)).collect();
                    if let Ok(c) = Coloring::new(colors, s.palette) {
                        out.push((format!("{name}/{}", s.n_arcs), c));
                    }
                }
            }
        }
        2 => {
            for t in Tessellation::ALL {
                if let Ok(c) = t.color_sample(x) {
                    out.push((t.name().to_string(), c));
                }
            }
        }
        _ => {}
    }
    out
}

fn best_proper<'a>(g: &EpsDistanceGraph, schemes: &'a [(String, Coloring)]) -> Option<&'a Coloring> {
    schemes
        .iter()
        .filter(|(_, c)| verify_proper(g.graph(), c).map(|r| r.proper).unwrap_or(false))
        .map(|(_, c)| c)
        .min_by_key(|c| c.palette_size())
}

fn chi_bounds_task(
    rec: &mut TrialRecord,
    cfg: &ExperimentConfig,
    g: &EpsDistanceGraph,
    schemes: &[(String, Coloring)],
) -> Result<()> {
    let graph = g.graph();
    let mut clique = greedy_clique(graph).len();
    // A rotated regular simplex gives d+2 mutually adjacent points.
    let target = cfg.d + 2;
    if clique < target {
        if let Some(c) = find_clique(g, target, cfg.budgets.clique_nodes) {
            clique = clique.max(c.size());
        }
    }
    rec.clique_found = Some(clique);
    let structural = if graph.edge_count() == 0 {
        usize::from(graph.n_vertices() > 0)
    } else if is_bipartite(graph) {
        2
    } else {
        3
    };
    let mut upper = dsatur_upper(graph).distinct_colors();
    if let Some(c) = best_proper(g, schemes) {
        upper = upper.min(c.distinct_colors());
    }
    rec.chi_lower = Some(clique.max(structural).min(upper));
    rec.chi_upper = Some(upper);
    Ok(())
}

fn chi_exact_task(
    rec: &mut TrialRecord,
    cfg: &ExperimentConfig,
    g: &EpsDistanceGraph,
    schemes: &[(String, Coloring)],
) {
    let budget = Duration::from_secs_f64(cfg.budgets.chi_seconds);
    let out = chromatic_number_with(g.graph(), cfg.budgets.chi_max_k, budget, best_proper(g, schemes));
    let lower = rec.chi_lower.map_or(out.lower, |l| l.max(out.lower));
    let upper = rec.chi_upper.map_or(out.upper, |u| u.min(out.upper));
    rec.chi_lower = Some(lower);
    rec.chi_upper = Some(upper);
    rec.chi_exact = (lower == upper).then_some(upper);
    rec.chi_status = Some(if rec.chi_exact.is_some() { "exact" } else { "unknown" }.to_string());
}

fn homology_task(
    rec: &mut TrialRecord,
    cfg: &ExperimentConfig,
    g: &EpsDistanceGraph,
    x: &SampleSet,
) -> Result<()> {
    let d = cfg.d;
    if d >= 2 && cfg.n > cfg.budgets.max_homology_n && !cfg.budgets.allow_large_homology {
        rec.homology_status = Some("skipped".into());
        return Ok(());
    }
    let nc = neighborhood_complex(g.graph());
    let reduced = reduce_homotopy(&nc);
    rec.reduced_vertices = Some(reduced.vertex_support().len());
    rec.reduced_facets = Some(reduced.facets().len());

    let cap = cfg.budgets.simplex_cap;
    let exact = if projected_simplex_count(&reduced, d + 1) <= cap {
        match connectivity_report(&reduced, d) {
            Ok(r) => Some(r),
            Err(Error::ResourceLimit(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    if d <= 2 {
        let cert = certify_sphere_class(&nc, x)?;
        rec.sphere_class_certified = Some(cert.certified);
    }
    match exact {
        Some(r) => {
            rec.betti = Some(r.betti_mod2.iter().map(|&b| Some(b)).collect());
            rec.free_rank_dim_d = Some(r.free_rank_dim_d);
            rec.free_rank_positive = Some(r.free_rank_dim_d >= 1);
            rec.homology_status = Some("exact".into());
        }
        None => match low_betti_mod2(&reduced, cap) {
            Ok(low) => {
                let mut betti = vec![None; d + 1];
                betti[0] = Some(low.b0);
                if d >= 1 {
                    betti[1] = Some(low.b1);
                }
                rec.betti = Some(betti);
                // Only a certificate can vouch for H_d here.
                rec.free_rank_positive = rec.sphere_class_certified.filter(|&c| c);
                rec.homology_status = Some("partial".into());
            }
            Err(Error::ResourceLimit(_)) => {
                rec.free_rank_positive = rec.sphere_class_certified.filter(|&c| c);
                rec.homology_status = Some("resource_limit".into());
            }
            Err(e) => return Err(e),
        },
    }
    Ok(())
}

fn delaunay_task(rec: &mut TrialRecord, cfg: &ExperimentConfig, x: &SampleSet, eps: f64) -> Result<()> {
    let (del, perturbed) = match x.dim() {
        1 => (delaunay_s1(x)?, false),
        _ => {
            let r = delaunay_s2_report(x)?;
            (r.complex, r.perturbed)
        }
    };
    let g = build_graph(x, cfg.alpha, eps)?;
    let nc = neighborhood_complex(g.graph());
    let diam = max_facet_diameter(&del, x);
    rec.delaunay_subcomplex = Some(is_subcomplex(&del, &nc)?);
    rec.delaunay_max_diameter = Some(diam);
    rec.delaunay_diam_ok = Some(diam <= eps / 2.0);
    rec.delaunay_perturbed = Some(perturbed);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::{Budgets, EpsRule};

    fn cfg(d: usize, alpha: f64, eps: f64, n: usize, tasks: &[Task]) -> ExperimentConfig {
        ExperimentConfig {
            d,
            alpha,
            eps_rule: EpsRule::Explicit(eps),
            n,
            trials: 1,
            seed: 11,
            tasks: tasks.iter().copied().collect(),
            budgets: Budgets {
                chi_seconds: 30.0,
                ..Budgets::default()
            },
        }
    }

    #[test]
    fn seeds_differ_per_trial() {
        let s: Vec<u64> = (0..100).map(|i| derive_seed(42, i)).collect();
        let mut u = s.clone();
        u.sort_unstable();
        u.dedup();
        assert_eq!(u.len(), s.len());
    }

    #[test]
    fn trial_is_deterministic() {
        let c = cfg(1, 2.0, 0.1, 300, &Task::ALL);
        let mut a = run_trial(&c, 3).unwrap();
        let mut b = run_trial(&c, 3).unwrap();
        a.runtimes_ms.clear();
        b.runtimes_ms.clear();
        assert_eq!(a, b);
        assert!(a.errors.is_empty(), "{:?}", a.errors);
    }

    #[test]
    fn bounds_sandwich_exact_value() {
        let c = cfg(1, 2.0, 0.1, 400, &[Task::ChiBounds, Task::ChiExact, Task::Colorings]);
        let r = run_trial(&c, 0).unwrap();
        let (lo, hi) = (r.chi_lower.unwrap(), r.chi_upper.unwrap());
        assert!(lo <= hi);
        if let Some(chi) = r.chi_exact {
            assert!(lo <= chi && chi <= hi);
        }
    }

    #[test]
    fn infeasible_eps_is_rejected() {
        let c = cfg(1, 0.5, 0.6, 100, &[Task::NetCheck]);
        assert!(matches!(run_trial(&c, 0), Err(Error::InfeasibleEpsilon(_))));
    }

    #[test]
    fn large_sphere_homology_is_skipped_by_default() {
        let c = cfg(2, 2.5, 0.3, 600, &[Task::Homology]);
        let r = run_trial(&c, 0).unwrap();
        assert_eq!(r.homology_status.as_deref(), Some("skipped"));
        assert!(r.betti.is_none());
    }

    #[test]
    fn small_sphere_homology() {
        let c = cfg(2, 2.5, 0.35, 300, &[Task::Homology]);
        let r = run_trial(&c, 0).unwrap();
        let betti = r.betti.unwrap();
        assert_eq!(betti.len(), 3);
        assert_eq!(betti[0], Some(1));
    }
}
