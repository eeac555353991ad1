use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::trial::TrialRecord;

/// Mean, min and max of a quantity over the trials where it was measured.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Stat {
    fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let mut count = 0;
        let (mut sum, mut min, mut max) = (0.0, f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            count += 1;
            sum += v;
            min = min.min(v);
            max = max.max(v);
        }
        (count > 0).then(|| Stat {
            count,
            mean: sum / count as f64,
            min,
            max,
        })
    }
}

/// `hits` out of `total`, with `value = hits / total`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fraction {
    pub hits: usize,
    pub total: usize,
    pub value: f64,
}

impl Fraction {
    fn of(flags: impl IntoIterator<Item = bool>) -> Option<Self> {
        let (mut hits, mut total) = (0, 0);
        for f in flags {
            total += 1;
            hits += usize::from(f);
        }
        (total > 0).then(|| Fraction {
            hits,
            total,
            value: hits as f64 / total as f64,
        })
    }
}

/// Aggregates over the records of one experiment. Quantities that no
/// trial measured are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub trials: usize,
    pub failed_trials: usize,
    pub eps_used: f64,
    pub net: Option<Fraction>,
    pub worst_gap: Option<Stat>,
    pub edge_count: Option<Stat>,
    pub components: Option<Stat>,
    pub clique_found: Option<Stat>,
    pub chi_lower: Option<Stat>,
    pub chi_upper: Option<Stat>,
    pub chi_exact_known: Option<Fraction>,
    /// Counts of each exact χ value, plus `unknown`.
    pub chi_counts: BTreeMap<String, usize>,
    /// The same, restricted to trials whose sample was a verified net.
    pub chi_counts_given_net: BTreeMap<String, usize>,
    /// Per-dimension Betti statistics over trials where it was computed.
    pub betti: Vec<Option<Stat>>,
    pub connected: Option<Fraction>,
    pub b1_zero: Option<Fraction>,
    pub free_rank_positive: Option<Fraction>,
    pub sphere_class_certified: Option<Fraction>,
    pub delaunay_subcomplex: Option<Fraction>,
    pub delaunay_subcomplex_given_net: Option<Fraction>,
    pub delaunay_diam_ok: Option<Fraction>,
    /// Trials in which each scheme coloring was proper, by scheme name.
    pub proper_colorings: BTreeMap<String, Fraction>,
}

impl SummaryTable {
    pub fn from_records(eps_used: f64, records: &[TrialRecord]) -> Self {
        let nums = |f: fn(&TrialRecord) -> Option<f64>| Stat::of(records.iter().filter_map(f));
        let flags = |f: fn(&TrialRecord) -> Option<bool>| Fraction::of(records.iter().filter_map(f));
        let net = |r: &TrialRecord| r.is_net == Some(true);

        let chi_key = |r: &TrialRecord| match (r.chi_status.as_deref(), r.chi_exact) {
            (Some(_), Some(chi)) => Some(chi.to_string()),
            (Some(_), None) => Some("unknown".to_string()),
            _ => None,
        };
        let mut chi_counts = BTreeMap::new();
        let mut chi_counts_given_net = BTreeMap::new();
        for r in records {
            if let Some(k) = chi_key(r) {
                if net(r) {
                    *chi_counts_given_net.entry(k.clone()).or_insert(0) += 1;
                }
                *chi_counts.entry(k).or_insert(0) += 1;
            }
        }

        let dims = records
            .iter()
            .filter_map(|r| r.betti.as_ref().map(Vec::len))
            .max()
            .unwrap_or(0);
        let betti = (0..dims)
            .map(|k| {
                Stat::of(records.iter().filter_map(|r| {
                    r.betti.as_ref().and_then(|b| b.get(k).copied().flatten()).map(|b| b as f64)
                }))
            })
            .collect();
        let betti_at = |r: &TrialRecord, k: usize| r.betti.as_ref().and_then(|b| b.get(k).copied().flatten());

        let mut proper_colorings: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for r in records {
            for s in r.colorings.iter().flatten() {
                let e = proper_colorings.entry(s.name.clone()).or_default();
                e.0 += usize::from(s.proper);
                e.1 += 1;
            }
        }

        SummaryTable {
            trials: records.len(),
            failed_trials: records.iter().filter(|r| r.failed_task()).count(),
            eps_used,
            net: flags(|r| r.is_net),
            worst_gap: nums(|r| r.worst_gap),
            edge_count: nums(|r| r.edge_count.map(|v| v as f64)),
            components: nums(|r| r.components.map(|v| v as f64)),
            clique_found: nums(|r| r.clique_found.map(|v| v as f64)),
            chi_lower: nums(|r| r.chi_lower.map(|v| v as f64)),
            chi_upper: nums(|r| r.chi_upper.map(|v| v as f64)),
            chi_exact_known: flags(|r| r.chi_status.as_ref().map(|_| r.chi_exact.is_some())),
            chi_counts,
            chi_counts_given_net,
            betti,
            connected: Fraction::of(records.iter().filter_map(|r| betti_at(r, 0).map(|b| b == 1))),
            b1_zero: Fraction::of(records.iter().filter_map(|r| betti_at(r, 1).map(|b| b == 0))),
            free_rank_positive: Fraction::of(records.iter().filter_map(|r| {
                r.homology_status
                    .as_ref()
                    .filter(|s| *s != "skipped")
                    .map(|_| r.free_rank_positive == Some(true))
            })),
            sphere_class_certified: flags(|r| r.sphere_class_certified),
            delaunay_subcomplex: flags(|r| r.delaunay_subcomplex),
            delaunay_subcomplex_given_net: Fraction::of(
                records
                    .iter()
                    .filter(|r| net(r))
                    .filter_map(|r| r.delaunay_subcomplex),
            ),
            delaunay_diam_ok: flags(|r| r.delaunay_diam_ok),
            proper_colorings: proper_colorings
                .into_iter()
                .map(|(k, (hits, total))| {
                    (
                        k,
                        Fraction {
                            hits,
                            total,
                            value: hits as f64 / total as f64,
                        },
                    )
                })
                .collect(),
        }
    }
}
