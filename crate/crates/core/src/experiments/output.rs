use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::summary::SummaryTable;
use super::trial::TrialRecord;
use crate::error::Result;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Audit lines (without the leading `#`) naming the tool version and the
/// fully resolved configuration.
pub fn audit_lines(cfg: &ExperimentConfig, eps: f64) -> Vec<String> {
    vec![
        format!("epsgraph {VERSION}"),
        format!("config {}", serde_json::to_string(cfg).expect("config serializes")),
        format!("eps_used {}", fmt_f64(eps)),
    ]
}

pub const TRIAL_COLUMNS: [&str; 28] = [
    "trial_index",
    "seed",
    "eps_used",
    "is_net",
    "worst_gap",
    "probe_resolution",
    "edge_count",
    "components",
    "max_degree",
    "clique_found",
    "chi_lower",
    "chi_upper",
    "chi_exact",
    "chi_status",
    "colorings",
    "betti",
    "free_rank_dim_d",
    "free_rank_positive",
    "sphere_class_certified",
    "homology_status",
    "reduced_vertices",
    "reduced_facets",
    "delaunay_subcomplex",
    "delaunay_max_diameter",
    "delaunay_diam_ok",
    "delaunay_perturbed",
    "failed",
    "errors",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn opt_f(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// CSV cells of one record, in [`TRIAL_COLUMNS`] order. Lists are joined
/// with `;` and unknown Betti numbers are written `?`.
pub fn trial_row(r: &TrialRecord) -> Vec<String> {
    let colorings = r.colorings.as_ref().map(|cs| {
        cs.iter()
            .map(|c| format!("{}:{}:{}", c.name, c.palette, if c.proper { "proper" } else { "improper" }))
            .collect::<Vec<_>>()
            .join(";")
    });
    let betti = r.betti.as_ref().map(|b| {
        b.iter()
            .map(|x| x.map_or("?".to_string(), |v| v.to_string()))
            .collect::<Vec<_>>()
            .join(";")
    });
    vec![
        r.trial_index.to_string(),
        r.seed.to_string(),
        fmt_f64(r.eps_used),
        opt(r.is_net),
        opt_f(r.worst_gap),
        opt(r.probe_resolution),
        opt(r.edge_count),
        opt(r.components),
        opt(r.max_degree),
        opt(r.clique_found),
        opt(r.chi_lower),
        opt(r.chi_upper),
        opt(r.chi_exact),
        opt(r.chi_status.as_deref()),
        colorings.unwrap_or_default(),
        betti.unwrap_or_default(),
        opt(r.free_rank_dim_d),
        opt(r.free_rank_positive),
        opt(r.sphere_class_certified),
        opt(r.homology_status.as_deref()),
        opt(r.reduced_vertices),
        opt(r.reduced_facets),
        opt(r.delaunay_subcomplex),
        opt_f(r.delaunay_max_diameter),
        opt(r.delaunay_diam_ok),
        opt(r.delaunay_perturbed),
        r.failed_task().to_string(),
        r.errors.join(" | "),
    ]
}

/// Writes `#` audit lines, a header row and one row per record.
pub fn write_trials_csv<W: Write>(mut w: W, audit: &[String], records: &[TrialRecord]) -> Result<()> {
    for line in audit {
        writeln!(w, "# {line}")?;
    }
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(TRIAL_COLUMNS).map_err(csv_err)?;
    for r in records {
        csv.write_record(trial_row(r)).map_err(csv_err)?;
    }
    csv.flush()?;
    Ok(())
}

/// Per-task wall-clock times; kept apart from the reproducible trials CSV.
pub fn write_timings_csv<W: Write>(mut w: W, audit: &[String], records: &[TrialRecord]) -> Result<()> {
    for line in audit {
        writeln!(w, "# {line}")?;
    }
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["trial_index", "task", "milliseconds"]).map_err(csv_err)?;
    for r in records {
        for (task, ms) in &r.runtimes_ms {
            csv.write_record([r.trial_index.to_string(), task.clone(), fmt_f64(*ms)])
                .map_err(csv_err)?;
        }
    }
    csv.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> crate::error::Error {
    std::io::Error::from(e).into()
}

#[derive(Serialize)]
struct SummaryFile<'a> {
    audit: &'a [String],
    config: &'a ExperimentConfig,
    summary: &'a SummaryTable,
    failed_trial_indices: Vec<usize>,
}

/// `trials.csv`, `timings.csv` and `summary.json` in `dir` (created if
/// missing). JSON has no comment syntax, so the audit lines go into an
/// `audit` field there.
pub fn write_experiment(
    dir: &Path,
    cfg: &ExperimentConfig,
    audit: &[String],
    records: &[TrialRecord],
    summary: &SummaryTable,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_trials_csv(fs::File::create(dir.join("trials.csv"))?, audit, records)?;
    write_timings_csv(fs::File::create(dir.join("timings.csv"))?, audit, records)?;
    let file = SummaryFile {
        audit,
        config: cfg,
        summary,
        failed_trial_indices: records.iter().filter(|r| r.failed_task()).map(|r| r.trial_index).collect(),
    };
    let mut f = fs::File::create(dir.join("summary.json"))?;
    serde_json::to_writer_pretty(&mut f, &file)?;
    writeln!(f)?;
    Ok(())
}
