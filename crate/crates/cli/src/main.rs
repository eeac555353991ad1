//! `epsgraph` command-line tool.
//!
//! Exit status: 0 on success, 1 when a task fails, 2 on usage errors.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use epsgraph::dist_graph::{
    build_graph, build_graph_scan, chromatic_number_with, dsatur_upper, verify_proper, ArcScheme,
    Coloring, Tessellation,
};
use epsgraph::experiments::{
    audit_lines, bounds_table, calibrate_net_constant, fmt_f64, run_experiment, write_experiment,
    ExperimentConfig, VERSION,
};
use epsgraph::homology::{homology_report, Coefficients};
use epsgraph::simplicial::{
    delaunay_s1, delaunay_s2_report, max_facet_diameter, neighborhood_complex, reduce_homotopy,
    strong_collapse, FacetComplex,
};
use epsgraph::sphere_geom::{
    dodeca_face_diagonal, sample_uniform, simplex_arclength, tetra_face_diameter,
    SampleSet,
};

#[derive(Parser, Debug)]
#[command(name = "epsgraph", version, about = "Random ε-distance graphs on spheres")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
enum Command {
    /// Sample uniform points on S^d.
    Sample(SampleCmd),
    /// Build the ε-distance graph and write its edge list.
    Graph(GraphCmd),
    /// Build the neighborhood complex and write its facets.
    Nbhd(NbhdCmd),
    /// Spherical Delaunay triangulation (d = 1 or 2).
    Delaunay(DelaunayCmd),
    /// Betti numbers of a facet file.
    Homology(HomologyCmd),
    /// Color a sample with an explicit scheme and verify it.
    Color(ColorCmd),
    /// Chromatic number of the ε-distance graph, within a time budget.
    Chi(ChiCmd),
    /// Run a Monte-Carlo experiment from a JSON config.
    Experiment(ExperimentCmd),
    /// Estimate the net constant C_d.
    Calibrate(CalibrateCmd),
    /// Lower/upper χ bounds on S² over a grid of α.
    Table(TableCmd),
}

#[derive(Args, Debug, Serialize)]
struct SampleCmd {
    /// Sphere dimension.
    #[arg(short = 'd', long)]
    dim: usize,
    #[arg(short = 'n', long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o', long)]
    output: PathBuf,
}

/// Points either read from a CSV file or sampled on the fly.
#[derive(Args, Debug, Serialize)]
struct PointsArgs {
    /// Points CSV written by `sample`.
    #[arg(short = 'i', long, conflicts_with_all = ["dim", "n"])]
    input: Option<PathBuf>,
    /// Sample this sphere dimension instead of reading a file.
    #[arg(short = 'd', long, requires = "n")]
    dim: Option<usize>,
    #[arg(short = 'n', long, requires = "dim")]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl PointsArgs {
    fn load(&self) -> Result<SampleSet> {
        match (&self.input, self.dim, self.n) {
            (Some(p), _, _) => {
                let f = File::open(p).with_context(|| format!("opening {}", p.display()))?;
                Ok(SampleSet::read_csv(BufReader::new(f))?)
            }
            (None, Some(d), Some(n)) => Ok(sample_uniform(d, n, self.seed)?),
            _ => bail!("give either --input or both --dim and --n"),
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct BandArgs {
    /// Target distance α in radians.
    #[arg(long)]
    alpha: f64,
    /// Band half-width ε in radians.
    #[arg(long)]
    eps: f64,
}

#[derive(Args, Debug, Serialize)]
struct GraphCmd {
    #[command(flatten)]
    points: PointsArgs,
    #[command(flatten)]
    band: BandArgs,
    /// Use the quadratic scan instead of the spatial index.
    #[arg(long)]
    scan: bool,
    #[arg(short = 'o', long)]
    output: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Reduction {
    None,
    Collapse,
    Reduce,
}

#[derive(Args, Debug, Serialize)]
struct NbhdCmd {
    #[command(flatten)]
    points: PointsArgs,
    #[command(flatten)]
    band: BandArgs,
    /// Homotopy-preserving simplification before writing.
    #[arg(long, value_enum, default_value_t = Reduction::None)]
    reduce: Reduction,
    #[arg(short = 'o', long)]
    output: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct DelaunayCmd {
    #[command(flatten)]
    points: PointsArgs,
    #[arg(short = 'o', long)]
    output: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct HomologyCmd {
    /// Facet file written by `nbhd` or `delaunay`.
    #[arg(short = 'i', long)]
    input: PathBuf,
    /// Highest homology dimension.
    #[arg(long, default_value_t = 2)]
    up_to: usize,
    /// `mod2` or `integer`.
    #[arg(long, default_value = "mod2", value_parser = parse_coeff)]
    coeff: Coefficients,
    /// Strong-collapse the complex first.
    #[arg(long)]
    collapse: bool,
    /// JSON report path; the report is printed when omitted.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Scheme {
    Tetra4,
    Cap5,
    Cube6,
    Dodeca6,
    Arc3,
    Square4,
    Dsatur,
}

#[derive(Args, Debug, Serialize)]
struct ColorCmd {
    #[command(flatten)]
    points: PointsArgs,
    #[command(flatten)]
    band: BandArgs,
    #[arg(long, value_enum)]
    scheme: Scheme,
    #[arg(short = 'o', long)]
    output: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct ChiCmd {
    #[command(flatten)]
    points: PointsArgs,
    #[command(flatten)]
    band: BandArgs,
    /// Wall-clock budget in seconds.
    #[arg(long, default_value_t = 600.0)]
    budget_secs: f64,
    #[arg(long, default_value_t = 16)]
    max_k: usize,
    /// Write the best coloring found.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ExperimentCmd {
    /// JSON config (see schema/experiment_config.schema.json).
    #[arg(short = 'c', long)]
    config: PathBuf,
    /// Output directory for trials.csv, timings.csv and summary.json.
    #[arg(short = 'o', long)]
    output: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct CalibrateCmd {
    #[arg(short = 'd', long)]
    dim: usize,
    /// Comma-separated sample sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    n_grid: Vec<usize>,
    #[arg(long, default_value_t = 0.95)]
    target: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct TableCmd {
    /// Comma-separated α values; also accepts l2, lstar, lambda2, pi.
    #[arg(long, value_delimiter = ',', required = true)]
    alpha_grid: Vec<String>,
    #[arg(long, default_value_t = 0.005)]
    eps: f64,
    #[arg(short = 'n', long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep grid values as typed instead of snapping the two-decimal
    /// rendering 1.91 of ℓ₂ to its exact value.
    #[arg(long)]
    no_snap: bool,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.command) {
        Ok(Outcome::Ok(line)) => {
            println!("{line}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::TaskFailed(line)) => {
            println!("{line}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

enum Outcome {
    Ok(String),
    TaskFailed(String),
}

/// Version line plus the subcommand with all resolved arguments.
fn audit_for(cmd: &Command, extra: &[String]) -> Vec<String> {
    let mut lines = vec![
        format!("epsgraph {VERSION}"),
        format!("command {}", serde_json::to_string(cmd).expect("arguments serialize")),
    ];
    lines.extend_from_slice(extra);
    lines
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn sample_note(x: &SampleSet) -> String {
    format!("sample dim={} n={} seed={}", x.dim(), x.len(), x.seed())
}

fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Sample(a) => {
            let x = sample_uniform(a.dim, a.n, a.seed)?;
            x.write_csv(create(&a.output)?, &audit_for(cmd, &[]))?;
            Ok(Outcome::Ok(format!(
                "sample: {} points on S^{} (seed {}) -> {}",
                a.n,
                a.dim,
                a.seed,
                a.output.display()
            )))
        }
        Command::Graph(a) => {
            let x = a.points.load()?;
            let g = if a.scan {
                build_graph_scan(&x, a.band.alpha, a.band.eps)?
            } else {
                build_graph(&x, a.band.alpha, a.band.eps)?
            };
            g.write_edge_list(create(&a.output)?, &audit_for(cmd, &[sample_note(&x)]))?;
            Ok(Outcome::Ok(format!(
                "graph: {} vertices, {} edges, {} components -> {}",
                g.n_vertices(),
                g.edge_count(),
                g.components().len(),
                a.output.display()
            )))
        }
        Command::Nbhd(a) => {
            let x = a.points.load()?;
            let g = build_graph(&x, a.band.alpha, a.band.eps)?;
            let nc = neighborhood_complex(g.graph());
            let c = match a.reduce {
                Reduction::None => nc,
                Reduction::Collapse => strong_collapse(&nc),
                Reduction::Reduce => reduce_homotopy(&nc),
            };
            c.write_facets(create(&a.output)?, &audit_for(cmd, &[sample_note(&x)]))?;
            Ok(Outcome::Ok(format!(
                "nbhd: {} facets on {} vertices, dim {} -> {}",
                c.facets().len(),
                c.vertex_support().len(),
                c.dim(),
                a.output.display()
            )))
        }
        Command::Delaunay(a) => {
            let x = a.points.load()?;
            let (del, perturbed) = match x.dim() {
                1 => (delaunay_s1(&x)?, false),
                2 => {
                    let r = delaunay_s2_report(&x)?;
                    (r.complex, r.perturbed)
                }
                d => bail!("Delaunay triangulations are implemented for d = 1, 2 (got {d})"),
            };
            let diam = max_facet_diameter(&del, &x);
            let extra = [
                sample_note(&x),
                format!("perturbed {perturbed}"),
                format!("max_facet_diameter {}", fmt_f64(diam)),
            ];
            del.write_facets(create(&a.output)?, &audit_for(cmd, &extra))?;
            Ok(Outcome::Ok(format!(
                "delaunay: {} facets, max diameter {diam:.6}, perturbed {perturbed} -> {}",
                del.facets().len(),
                a.output.display()
            )))
        }
        Command::Homology(a) => {
            let f = File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?;
            let c = FacetComplex::read_facets(BufReader::new(f))?;
            let report = homology_report(&c, a.up_to, a.coeff, a.collapse)?;
            #[derive(Serialize)]
            struct Out<'a, T> {
                audit: Vec<String>,
                report: &'a T,
            }
            let out = Out {
                audit: audit_for(cmd, &[]),
                report: &report,
            };
            let text = serde_json::to_string_pretty(&out)?;
            match &a.output {
                Some(p) => writeln!(create(p)?, "{text}")?,
                None => println!("{text}"),
            }
            Ok(Outcome::Ok(format!(
                "homology: betti {:?} ({:?}){}",
                report.betti,
                a.coeff,
                a.output.as_ref().map(|p| format!(" -> {}", p.display())).unwrap_or_default()
            )))
        }
        Command::Color(a) => {
            let x = a.points.load()?;
            let g = build_graph(&x, a.band.alpha, a.band.eps)?;
            let (alpha, eps) = (a.band.alpha, a.band.eps);
            let arc = |s: Result<ArcScheme, epsgraph::Error>| -> Result<Coloring> {
                if x.dim() != 1 {
                    bail!("arc schemes need d = 1");
                }
                let s = s?;
                Ok(Coloring::new(x.points().iter().map(|p| s.color(p)).collect(), s.palette)?)
            };
            let coloring = match a.scheme {
                Scheme::Tetra4 => Tessellation::Tetra4.color_sample(&x)?,
                Scheme::Cap5 => Tessellation::Cap5.color_sample(&x)?,
                Scheme::Cube6 => Tessellation::Cube6.color_sample(&x)?,
                Scheme::Dodeca6 => Tessellation::Dodeca6.color_sample(&x)?,
                Scheme::Arc3 => arc(ArcScheme::three_color(alpha, eps))?,
                Scheme::Square4 => arc(ArcScheme::square(alpha, eps))?,
                Scheme::Dsatur => dsatur_upper(g.graph()),
            };
            let report = verify_proper(g.graph(), &coloring)?;
            let extra = [sample_note(&x), format!("proper {}", report.proper)];
            coloring.write_csv(create(&a.output)?, &audit_for(cmd, &extra))?;
            let verdict = match report.violating_edge {
                None => "proper".to_string(),
                Some((u, v)) => format!("improper (edge {u}-{v})"),
            };
            Ok(Outcome::Ok(format!(
                "color: {} colors, {verdict} -> {}",
                coloring.distinct_colors(),
                a.output.display()
            )))
        }
        Command::Chi(a) => {
            let x = a.points.load()?;
            let g = build_graph(&x, a.band.alpha, a.band.eps)?;
            let out = chromatic_number_with(
                g.graph(),
                a.max_k,
                Duration::from_secs_f64(a.budget_secs.max(0.0)),
                None,
            );
            if let Some(p) = &a.output {
                let extra = [
                    sample_note(&x),
                    format!("chi {}", out.chi.map_or("unknown".into(), |c| c.to_string())),
                    format!("lower {} upper {}", out.lower, out.upper),
                ];
                out.coloring.write_csv(create(p)?, &audit_for(cmd, &extra))?;
            }
            let chi = match out.chi {
                Some(c) => format!("chi = {c}"),
                None => format!("chi unknown (budget exhausted), {} <= chi <= {}", out.lower, out.upper),
            };
            Ok(Outcome::Ok(format!("chi: {chi} on {} edges", g.edge_count())))
        }
        Command::Experiment(a) => {
            let text = std::fs::read_to_string(&a.config)
                .with_context(|| format!("reading {}", a.config.display()))?;
            let cfg = ExperimentConfig::from_json(&text)?;
            let run = run_experiment(&cfg)?;
            let mut audit = audit_for(cmd, &[]);
            audit.extend(audit_lines(&cfg, run.eps_used));
            write_experiment(&a.output, &cfg, &audit, &run.records, &run.summary)?;
            let s = &run.summary;
            let net = s.net.map_or(String::new(), |f| format!(", nets {}/{}", f.hits, f.total));
            let line = format!(
                "experiment: {} trials, {} failed, eps {:.6}{net} -> {}",
                s.trials,
                s.failed_trials,
                run.eps_used,
                a.output.display()
            );
            Ok(if run.any_failed() {
                Outcome::TaskFailed(line)
            } else {
                Outcome::Ok(line)
            })
        }
        Command::Calibrate(a) => {
            let cal = calibrate_net_constant(a.dim, &a.n_grid, a.target, a.seed)?;
            if let Some(p) = &a.output {
                #[derive(Serialize)]
                struct Out<'a, T> {
                    audit: Vec<String>,
                    calibration: &'a T,
                }
                let mut w = create(p)?;
                serde_json::to_writer_pretty(
                    &mut w,
                    &Out {
                        audit: audit_for(cmd, &[]),
                        calibration: &cal,
                    },
                )?;
                writeln!(w)?;
            }
            Ok(Outcome::Ok(format!(
                "calibrate: C_{} = {:.6} for target {} over n in {:?}",
                a.dim, cal.c, a.target, a.n_grid
            )))
        }
        Command::Table(a) => {
            let (alphas, notes) = parse_alpha_grid(&a.alpha_grid, !a.no_snap)?;
            let table = bounds_table(2, &alphas, a.eps, a.n, a.trials, a.seed)?;
            let mut text = String::new();
            for line in audit_for(cmd, &notes) {
                text.push_str(&format!("# {line}\n"));
            }
            text.push_str("alpha,lower,upper,upper_scheme,predicted,topological,clique_max,net_trials,trials\n");
            for r in &table.rows {
                text.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    fmt_f64(r.alpha),
                    r.lower,
                    r.upper_label,
                    r.upper_scheme.as_deref().unwrap_or(""),
                    r.predicted,
                    r.topological,
                    r.clique_max,
                    r.net_trials,
                    table.trials
                ));
            }
            match &a.output {
                Some(p) => create(p)?.write_all(text.as_bytes())?,
                None => print!("{text}"),
            }
            let pairs: Vec<String> = table
                .rows
                .iter()
                .map(|r| format!("{:.4}:{}/{}", r.alpha, r.lower, r.upper_label))
                .collect();
            Ok(Outcome::Ok(format!("table: {}", pairs.join(" "))))
        }
    }
}

fn parse_coeff(s: &str) -> Result<Coefficients, String> {
    s.parse().map_err(|e: epsgraph::Error| e.to_string())
}

/// Parses α values. Named constants are accepted; with `snap`, a value
/// within 0.005 of ℓ₂ (printed as 1.91) is replaced by ℓ₂ itself, since
/// that row of the table is a single point.
fn parse_alpha_grid(items: &[String], snap: bool) -> Result<(Vec<f64>, Vec<String>)> {
    let l2 = simplex_arclength(2)?;
    let mut out = Vec::new();
    let mut notes = Vec::new();
    for raw in items {
        let s = raw.trim();
        let v = match s {
            "l2" | "ell2" => l2,
            "lstar" => dodeca_face_diagonal(),
            "lambda2" => tetra_face_diameter(),
            "pi" => std::f64::consts::PI,
            "2pi/3" => 2.0 * std::f64::consts::PI / 3.0,
            _ => s.parse::<f64>().with_context(|| format!("bad alpha `{s}`"))?,
        };
        if snap && v != l2 && (v - l2).abs() < 0.005 {
            notes.push(format!("alpha {s} snapped to l2 = {}", fmt_f64(l2)));
            out.push(l2);
        } else {
            out.push(v);
        }
    }
    Ok((out, notes))
}
