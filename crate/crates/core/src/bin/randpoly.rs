//! Command-line front end.
//!
//! Exit codes: 0 success, 2 validation error, 3 degenerate geometry, 1 I/O.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use randpoly::analysis::{
    borgwardt_bound, facet_constant, facet_survival_probability, facet_upper_bound, threshold_constant,
};
use randpoly::geometry::{
    ball_volume, belt_surface, belt_volume, cap_surface, cap_volume, cap_volume_asymptotic, solve_delta,
    sphere_surface,
};
use randpoly::harness::{
    configure_threads_from_env, emit_report, fit_exponent, render_report, run_experiment, ExperimentConfig,
    ExperimentKind, ReportFormat,
};
use randpoly::hull::{beneath_beyond, FacetRecord};
use randpoly::sampler::{random_direction, sample_polytope, stream_id};
use randpoly::shadow::{solve_shadow_vertex, LpInstance};
use randpoly::{Dimension, Error, PointCloud, Result, Seed};

#[derive(Parser)]
#[command(name = "randpoly", version, about = "Random polytopes on the unit sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample m uniform points on S^{n-1}.
    Sample(SampleArgs),
    /// Convex hull by Beneath-Beyond.
    Hull(HullArgs),
    /// Shadow-vertex LP: max <v, x> s.t. <a_i, x> <= 1.
    Lp(LpArgs),
    /// Ball, cap and belt measures.
    Geometry(GeometryArgs),
    /// Facet constants and pivot bounds.
    Bounds(BoundsArgs),
    /// Monte Carlo scaling experiment.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct CloudArgs {
    /// Read the cloud from a CSV file (header x1..xn) instead of sampling.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl CloudArgs {
    fn load(&self) -> Result<PointCloud> {
        if let Some(path) = &self.input {
            return PointCloud::from_csv(&read(path)?);
        }
        let n = self.n.ok_or_else(|| Error::InvalidInput("--n is required without --input".into()))?;
        let m = self.m.ok_or_else(|| Error::InvalidInput("--m is required without --input".into()))?;
        sample_polytope(Dimension::new(n)?, m, Seed::new(self.seed))
    }
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct HullArgs {
    #[command(flatten)]
    cloud: CloudArgs,
    /// Add the origin as an extra point (id m).
    #[arg(long)]
    include_origin: bool,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct LpArgs {
    #[command(flatten)]
    cloud: CloudArgs,
    /// Comma-separated objective vector.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "random_objective")]
    objective: Option<Vec<f64>>,
    /// Draw the objective uniformly from the sphere (stream derived from --seed).
    #[arg(long)]
    random_objective: bool,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GeometryArgs {
    #[arg(long)]
    n: usize,
    /// Cap height.
    #[arg(long)]
    h: Option<f64>,
    /// Belt radius.
    #[arg(long)]
    r: Option<f64>,
    /// Number of points for the threshold delta(n, m).
    #[arg(long)]
    m: Option<usize>,
    /// Threshold constant c (default 2(n+1)).
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    /// Hyperplane distance for the survival probability.
    #[arg(long)]
    h: Option<f64>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// facets | shadow-pivots | beneath-beyond-cost | hausdorff | section-edges
    #[arg(long)]
    experiment: String,
    #[arg(long)]
    n: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    m_grid: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Report per-cell wall time in the seconds column.
    #[arg(long)]
    timing: bool,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

fn cmd_sample(a: &SampleArgs) -> Result<()> {
    let n = Dimension::new(a.n)?;
    let cloud = sample_polytope(n, a.m, Seed::new(a.seed))?;
    let text = match a.format {
        Format::Csv => cloud.to_csv(),
        Format::Json => {
            let pts: Vec<&[f64]> = cloud.points().collect();
            json_text(&json!({ "n": a.n, "m": a.m, "seed": a.seed, "points": pts }))
        }
    };
    write_out(a.out.as_deref(), &text)
}

fn facet_csv(n: usize, facets: &[FacetRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    header.extend((1..=n).map(|i| format!("b{i}")));
    header.push("h".into());
    w.write_record(&header).expect("in-memory csv");
    for f in facets {
        let mut row: Vec<String> = f.vertices.iter().map(|v| v.to_string()).collect();
        row.extend(f.normal.iter().map(|c| format!("{c:e}")));
        row.push(format!("{:e}", f.offset));
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

fn cmd_hull(a: &HullArgs) -> Result<()> {
    let cloud = a.cloud.load()?;
    let n = cloud.dim().get();
    let (poly, stats) = beneath_beyond(&cloud, a.include_origin)?;
    let summary = json!({
        "sidedness_tests": stats.sidedness_tests,
        "facets_created": stats.facets_created,
        "facets_deleted": stats.facets_deleted,
        "f_count": poly.facet_count(),
    });
    match a.format {
        Format::Csv => {
            write_out(a.out.as_deref(), &facet_csv(n, poly.facets()))?;
            let text = json_text(&summary);
            if a.out.is_some() {
                write_out(None, &text)
            } else {
                eprint!("{text}");
                Ok(())
            }
        }
        Format::Json => {
            let doc = json!({ "facets": poly.facets(), "stats": summary });
            write_out(a.out.as_deref(), &json_text(&doc))
        }
    }
}

fn cmd_lp(a: &LpArgs) -> Result<()> {
    let cloud = a.cloud.load()?;
    let n = cloud.dim();
    let objective = match (&a.objective, a.random_objective) {
        (Some(v), false) => v.clone(),
        (None, true) => random_direction(n, Seed::new(a.cloud.seed).with_stream(stream_id(&[1]))).into_inner(),
        _ => return Err(Error::InvalidInput("give exactly one of --objective and --random-objective".into())),
    };
    let inst = LpInstance::new(cloud, objective)?;
    let sol = solve_shadow_vertex(&inst)?;
    let doc = json!({
        "facet": sol.optimal_facet,
        "x_star": sol.primal,
        "pivots_by_dim": sol.pivots_by_dim,
        "total_pivots": sol.total_pivots,
        "objective": inst.objective(),
    });
    write_out(a.out.as_deref(), &json_text(&doc))
}

fn cmd_geometry(a: &GeometryArgs) -> Result<()> {
    let n = Dimension::new(a.n)?;
    let mut doc = json!({
        "n": a.n,
        "ball_volume": ball_volume(a.n)?,
        "sphere_surface": sphere_surface(a.n)?,
    });
    if let Some(h) = a.h {
        doc["h"] = json!(h);
        doc["cap_volume"] = json!(cap_volume(n, h)?);
        doc["cap_surface"] = json!(cap_surface(n, h)?);
        doc["cap_volume_asymptotic"] = json!(cap_volume_asymptotic(n, h)?);
    }
    if let Some(r) = a.r {
        doc["r"] = json!(r);
        doc["belt_volume"] = json!(belt_volume(n, r)?);
        doc["belt_surface"] = json!(belt_surface(n, r)?);
    }
    if let Some(m) = a.m {
        let c = a.c.unwrap_or_else(|| threshold_constant(n));
        doc["m"] = json!(m);
        doc["c"] = json!(c);
        doc["delta"] = json!(solve_delta(n, m, c)?);
    }
    write_out(a.out.as_deref(), &json_text(&doc))
}

fn cmd_bounds(a: &BoundsArgs) -> Result<()> {
    let n = Dimension::new(a.n)?;
    let mut doc = json!({ "n": a.n, "facet_constant": facet_constant(n)?.value });
    if let Some(m) = a.m {
        doc["m"] = json!(m);
        doc["borgwardt_bound"] = json!(borgwardt_bound(n, m)?.value);
        doc["facet_upper_bound"] = match facet_upper_bound(n, m) {
            Ok(b) => json!(b.value),
            Err(_) => Value::Null,
        };
        doc["delta"] = match solve_delta(n, m, threshold_constant(n)) {
            Ok(d) => json!(d),
            Err(_) => Value::Null,
        };
        if let Some(h) = a.h {
            doc["h"] = json!(h);
            doc["survival_probability"] = json!(facet_survival_probability(n, m, h)?.value);
        }
    } else if a.h.is_some() {
        return Err(Error::InvalidInput("--h needs --m".into()));
    }
    write_out(a.out.as_deref(), &json_text(&doc))
}

fn cmd_experiment(a: &ExperimentArgs) -> Result<()> {
    let kind: ExperimentKind = a.experiment.parse()?;
    let mut cfg = ExperimentConfig::new(kind, Dimension::new(a.n)?, a.m_grid.clone(), a.trials, a.seed);
    cfg.output_path = a.out.clone();
    cfg.timing = a.timing;
    let records = run_experiment(&cfg)?;
    let fit = fit_exponent(&records).ok();
    let format = match a.format {
        Format::Csv => ReportFormat::Csv,
        Format::Json => ReportFormat::Json,
    };
    match &cfg.output_path {
        Some(path) => emit_report(&records, fit.as_ref(), format, path),
        None => write_out(None, &render_report(&records, fit.as_ref(), format)?),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        _ if e.is_degenerate() => 3,
        Error::SingularSystem(_) | Error::OriginNotInterior => 3,
        Error::Io { .. } => 1,
        Error::TooManyFailures { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads_from_env().and_then(|()| match &cli.command {
        Command::Sample(a) => cmd_sample(a),
        Command::Hull(a) => cmd_hull(a),
        Command::Lp(a) => cmd_lp(a),
        Command::Geometry(a) => cmd_geometry(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Experiment(a) => cmd_experiment(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("randpoly: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
