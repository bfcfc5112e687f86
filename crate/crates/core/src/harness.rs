//! Seeded Monte Carlo experiments over an `m`-grid and their reports.
//!
//! Every trial draws its own generator stream from `(n, m, trial, purpose)`,
//! so measurements do not depend on grid order, worker count or scheduling.
//! Trials of one cell run in parallel and are reduced in trial order.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{borgwardt_bound, facet_constant, threshold_constant};
use crate::error::{Error, Result};
use crate::geometry::{solve_delta, Dimension};
use crate::hull::{beneath_beyond, hausdorff_to_sphere};
use crate::sampler::{random_direction, sample_polytope, stream_id, Seed};
use crate::shadow::{section_edge_count, solve_shadow_vertex, LpInstance};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "RANDPOLY_THREADS";

/// Largest tolerated fraction of failed trials.
pub const MAX_FAILURE_RATE: f64 = 0.01;

/// Significant digits of every reported real.
pub const REPORT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Facet count of `P(n, m)`.
    Facets,
    /// Total shadow-vertex pivots for a random objective.
    ShadowPivots,
    /// Beneath-Beyond sidedness tests.
    BeneathBeyondCost,
    /// `hausdorff_to_sphere`.
    Hausdorff,
    /// Edges of the section by a random plane through the origin.
    SectionEdges,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::Facets,
        ExperimentKind::ShadowPivots,
        ExperimentKind::BeneathBeyondCost,
        ExperimentKind::Hausdorff,
        ExperimentKind::SectionEdges,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Facets => "facets",
            ExperimentKind::ShadowPivots => "shadow-pivots",
            ExperimentKind::BeneathBeyondCost => "beneath-beyond-cost",
            ExperimentKind::Hausdorff => "hausdorff",
            ExperimentKind::SectionEdges => "section-edges",
        }
    }

    /// Reference value reported next to the measured mean.
    pub fn reference(self, n: Dimension, m: usize) -> Option<f64> {
        let mf = m as f64;
        match self {
            ExperimentKind::Facets => facet_constant(n).ok().map(|f| f.value * mf),
            ExperimentKind::ShadowPivots => borgwardt_bound(n, m).ok().map(|b| b.value),
            ExperimentKind::BeneathBeyondCost => facet_constant(n).ok().map(|f| f.value * mf * mf / 2.0),
            ExperimentKind::Hausdorff => solve_delta(n, m, threshold_constant(n)).ok(),
            ExperimentKind::SectionEdges => Some(mf.powf(1.0 / (n.get() as f64 - 1.0))),
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown experiment {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub n: Dimension,
    pub m_grid: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    /// Fill the `seconds` column with per-cell wall time.
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, n: Dimension, m_grid: Vec<usize>, trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            experiment,
            n,
            m_grid,
            trials,
            seed,
            output_path: None,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_grid.is_empty() {
            return Err(Error::invalid("m-grid is empty"));
        }
        if self.m_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("m-grid must be strictly ascending"));
        }
        let n = self.n.get();
        if let Some(&m) = self.m_grid.iter().find(|&&m| m < n + 1) {
            return Err(Error::invalid(format!("grid value m = {m} is below n + 1 = {}", n + 1)));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        Ok(())
    }
}

/// Aggregated measurements of one grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: ExperimentKind,
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub reference: Option<f64>,
    pub seconds: Option<f64>,
    /// Trials that raised an error and were left out of the statistics.
    #[serde(default)]
    pub failures: usize,
    /// Per-trial values in trial order (failed trials omitted).
    #[serde(skip)]
    pub samples: Vec<f64>,
}

impl ExperimentRecord {
    fn from_samples(kind: ExperimentKind, n: Dimension, m: usize, trials: usize, samples: Vec<f64>, failures: usize) -> Self {
        let count = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / count;
        let var = if samples.len() > 1 {
            samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (count - 1.0)
        } else {
            0.0
        };
        ExperimentRecord {
            experiment: kind,
            n: n.get(),
            m,
            trials,
            mean,
            std: var.sqrt(),
            min: samples.iter().copied().fold(f64::INFINITY, f64::min),
            max: samples.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            reference: kind.reference(n, m),
            seconds: None,
            failures,
            samples,
        }
    }
}

/// Stream purposes within one trial.
pub mod purpose {
    pub const CLOUD: u64 = 0;
    pub const OBJECTIVE: u64 = 1;
    pub const PLANE_U: u64 = 2;
    pub const PLANE_V: u64 = 3;
}

/// Seed of one trial stream.
pub fn trial_seed(seed: u64, n: Dimension, m: usize, trial: usize, purpose: u64) -> Seed {
    Seed::new(seed).with_stream(stream_id(&[n.get() as u64, m as u64, trial as u64, purpose]))
}

/// Runs one trial and returns the measured statistic.
pub fn measure_trial(kind: ExperimentKind, n: Dimension, m: usize, seed: u64, trial: usize) -> Result<f64> {
    let cloud = sample_polytope(n, m, trial_seed(seed, n, m, trial, purpose::CLOUD))?;
    match kind {
        ExperimentKind::Facets => Ok(beneath_beyond(&cloud, false)?.0.facet_count() as f64),
        ExperimentKind::BeneathBeyondCost => Ok(beneath_beyond(&cloud, false)?.1.sidedness_tests as f64),
        ExperimentKind::Hausdorff => hausdorff_to_sphere(&beneath_beyond(&cloud, false)?.0),
        ExperimentKind::ShadowPivots => {
            let v = random_direction(n, trial_seed(seed, n, m, trial, purpose::OBJECTIVE));
            let inst = LpInstance::new(cloud, v.into_inner())?;
            Ok(solve_shadow_vertex(&inst)?.total_pivots as f64)
        }
        ExperimentKind::SectionEdges => {
            let (poly, _) = beneath_beyond(&cloud, false)?;
            let u = random_direction(n, trial_seed(seed, n, m, trial, purpose::PLANE_U));
            let v = random_direction(n, trial_seed(seed, n, m, trial, purpose::PLANE_V));
            Ok(section_edge_count(&poly, u.coords(), v.coords())?.edge_count as f64)
        }
    }
}

/// Runs every cell of the grid on the global worker pool.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let mut records = Vec::with_capacity(cfg.m_grid.len());
    let mut failed = 0;
    let mut first_error: Option<String> = None;
    for &m in &cfg.m_grid {
        let start = Instant::now();
        let outcomes: Vec<Result<f64>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| measure_trial(cfg.experiment, cfg.n, m, cfg.seed, t))
            .collect();
        let elapsed = start.elapsed().as_secs_f64();
        let mut samples = Vec::with_capacity(cfg.trials);
        let mut cell_failures = 0;
        for outcome in outcomes {
            match outcome {
                Ok(x) => samples.push(x),
                Err(e) => {
                    cell_failures += 1;
                    first_error.get_or_insert_with(|| format!("m = {m}: {e}"));
                }
            }
        }
        failed += cell_failures;
        if samples.is_empty() {
            break;
        }
        let mut rec = ExperimentRecord::from_samples(cfg.experiment, cfg.n, m, cfg.trials, samples, cell_failures);
        if cfg.timing {
            rec.seconds = Some(elapsed);
        }
        records.push(rec);
    }
    let total = cfg.trials * cfg.m_grid.len();
    if failed as f64 > MAX_FAILURE_RATE * total as f64 || records.len() < cfg.m_grid.len() {
        return Err(Error::TooManyFailures {
            failed,
            total,
            first: first_error.unwrap_or_default(),
        });
    }
    Ok(records)
}

/// Runs the experiment on a private pool with `threads` workers.
pub fn run_experiment_with_threads(cfg: &ExperimentConfig, threads: usize) -> Result<Vec<ExperimentRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("cannot build worker pool: {e}")))?;
    pool.install(|| run_experiment(cfg))
}

/// Worker cap from `RANDPOLY_THREADS`, if set.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(Error::invalid(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
        Err(_) => Ok(None),
    }
}

/// Sizes the global pool from `RANDPOLY_THREADS`. Call once, before any parallel work.
pub fn configure_threads_from_env() -> Result<()> {
    if let Some(t) = threads_from_env()? {
        // a pool that already exists keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least-squares slope of `ln(mean)` against `ln(m)`.
pub fn fit_exponent(records: &[ExperimentRecord]) -> Result<ExponentFit> {
    let mut ms: Vec<usize> = records.iter().map(|r| r.m).collect();
    ms.sort_unstable();
    ms.dedup();
    if ms.len() < 3 {
        return Err(Error::InsufficientGrid(format!(
            "need at least 3 distinct m values, got {}",
            ms.len()
        )));
    }
    if let Some(r) = records.iter().find(|r| !(r.mean > 0.0)) {
        return Err(Error::InsufficientGrid(format!("mean at m = {} is not positive", r.m)));
    }
    let xs: Vec<f64> = records.iter().map(|r| (r.m as f64).ln()).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.mean.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (intercept + exponent * x);
            e * e
        })
        .sum();
    let r_squared = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    Ok(ExponentFit {
        exponent,
        intercept,
        r_squared,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::invalid(format!("unknown format {s:?} (expected csv or json)"))),
        }
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "experiment", "n", "m", "trials", "mean", "std", "min", "max", "reference", "seconds",
];

/// `%g`-style rendering with `digits` significant digits.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn round_sig(x: f64) -> f64 {
    format_sig(x, REPORT_DIGITS).parse().unwrap_or(x)
}

fn opt_cell(x: Option<f64>) -> String {
    x.map(|v| format_sig(v, REPORT_DIGITS)).unwrap_or_default()
}

#[derive(Serialize)]
struct JsonReport<'a> {
    records: Vec<ExperimentRecord>,
    fit: Option<&'a ExponentFit>,
}

/// Renders the report text.
pub fn render_report(records: &[ExperimentRecord], fit: Option<&ExponentFit>, format: ReportFormat) -> Result<String> {
    if records.is_empty() {
        return Err(Error::NonemptyRequired);
    }
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::invalid(format!("csv encoding failed: {e}"));
            w.write_record(CSV_HEADER).map_err(csv_err)?;
            for r in records {
                let row = [
                    r.experiment.name().to_string(),
                    r.n.to_string(),
                    r.m.to_string(),
                    r.trials.to_string(),
                    format_sig(r.mean, REPORT_DIGITS),
                    format_sig(r.std, REPORT_DIGITS),
                    format_sig(r.min, REPORT_DIGITS),
                    format_sig(r.max, REPORT_DIGITS),
                    opt_cell(r.reference),
                    opt_cell(r.seconds),
                ];
                w.write_record(&row).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::invalid(format!("csv encoding failed: {e}")))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        ReportFormat::Json => {
            let rounded: Vec<ExperimentRecord> = records
                .iter()
                .map(|r| ExperimentRecord {
                    mean: round_sig(r.mean),
                    std: round_sig(r.std),
                    min: round_sig(r.min),
                    max: round_sig(r.max),
                    reference: r.reference.map(round_sig),
                    seconds: r.seconds.map(round_sig),
                    samples: Vec::new(),
                    ..r.clone()
                })
                .collect();
            let fit = fit.map(|f| ExponentFit {
                exponent: round_sig(f.exponent),
                intercept: round_sig(f.intercept),
                r_squared: round_sig(f.r_squared),
            });
            let report = JsonReport {
                records: rounded,
                fit: fit.as_ref(),
            };
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            Ok(text)
        }
    }
}

/// Writes the report to `path`.
pub fn emit_report(
    records: &[ExperimentRecord],
    fit: Option<&ExponentFit>,
    format: ReportFormat,
    path: &Path,
) -> Result<()> {
    let text = render_report(records, fit, format)?;
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Deserialize)]
struct CsvRow {
    experiment: String,
    n: usize,
    m: usize,
    trials: usize,
    mean: f64,
    std: f64,
    min: f64,
    max: f64,
    reference: Option<f64>,
    seconds: Option<f64>,
}

/// Parses a CSV report produced by [`render_report`].
pub fn parse_csv_report(text: &str) -> Result<Vec<ExperimentRecord>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in rd.deserialize::<CsvRow>() {
        let row = row.map_err(|e| Error::Parse {
            path: PathBuf::from("<report>"),
            message: e.to_string(),
        })?;
        out.push(ExperimentRecord {
            experiment: row.experiment.parse()?,
            n: row.n,
            m: row.m,
            trials: row.trials,
            mean: row.mean,
            std: row.std,
            min: row.min,
            max: row.max,
            reference: row.reference,
            seconds: row.seconds,
            failures: 0,
            samples: Vec::new(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn record(m: usize, mean: f64) -> ExperimentRecord {
        ExperimentRecord {
            experiment: ExperimentKind::Facets,
            n: 3,
            m,
            trials: 1,
            mean,
            std: 0.0,
            min: mean,
            max: mean,
            reference: None,
            seconds: None,
            failures: 0,
            samples: vec![mean],
        }
    }

    #[test]
    fn exact_power_laws() {
        let recs: Vec<_> = [10, 20, 40, 80].iter().map(|&m| record(m, 3.0 * (m * m) as f64)).collect();
        let fit = fit_exponent(&recs).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        let recs: Vec<_> = [10, 20, 40].iter().map(|&m| record(m, 0.5 * m as f64)).collect();
        assert!((fit_exponent(&recs).unwrap().exponent - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_needs_three_points() {
        let recs = vec![record(10, 1.0), record(20, 2.0), record(20, 2.5)];
        assert!(matches!(fit_exponent(&recs), Err(Error::InsufficientGrid(_))));
        let recs = vec![record(10, 1.0), record(20, 0.0), record(30, 2.5)];
        assert!(fit_exponent(&recs).is_err());
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(100.0, 12), "100");
        assert_eq!(format_sig(2.0 / 3.0, 12), "0.666666666667");
        assert_eq!(format_sig(1234.5, 12), "1234.5");
        assert_eq!(format_sig(1.5e-7, 12), "1.5e-7");
        assert_eq!(format_sig(6.02214076e23, 12), "6.02214076e23");
        assert_eq!(format_sig(-0.25, 12), "-0.25");
    }

    #[test]
    fn report_shapes() {
        assert!(matches!(
            render_report(&[], None, ReportFormat::Csv),
            Err(Error::NonemptyRequired)
        ));
        let csv = render_report(&[record(10, 16.0)], None, ReportFormat::Csv).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "experiment,n,m,trials,mean,std,min,max,reference,seconds");
        assert_eq!(lines[1], "facets,3,10,1,16,0,16,16,,");
        let json = render_report(&[record(10, 16.0)], None, ReportFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["records"][0]["experiment"], "facets");
        assert!(v["fit"].is_null());
    }

    #[test]
    fn config_validation() {
        let ok = ExperimentConfig::new(ExperimentKind::Facets, dim(3), vec![10, 20], 2, 0);
        assert!(ok.validate().is_ok());
        for bad in [vec![], vec![20, 10], vec![3, 10]] {
            let cfg = ExperimentConfig::new(ExperimentKind::Facets, dim(3), bad, 2, 0);
            assert!(cfg.validate().is_err());
        }
        let cfg = ExperimentConfig::new(ExperimentKind::Facets, dim(3), vec![10], 0, 0);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn small_dimension_laws() {
        let cfg = ExperimentConfig::new(ExperimentKind::Facets, dim(2), vec![5, 17], 6, 1);
        for r in run_experiment(&cfg).unwrap() {
            assert_eq!(r.mean, r.m as f64);
            assert_eq!(r.std, 0.0);
        }
        let cfg = ExperimentConfig::new(ExperimentKind::Facets, dim(3), vec![12, 40], 6, 1);
        for r in run_experiment(&cfg).unwrap() {
            assert_eq!(r.mean, (2 * r.m - 4) as f64);
            assert_eq!(r.std, 0.0);
        }
    }

    #[test]
    fn kinds_round_trip_names() {
        for k in ExperimentKind::ALL {
            assert_eq!(k.name().parse::<ExperimentKind>().unwrap(), k);
        }
        assert!("pivots".parse::<ExperimentKind>().is_err());
    }
}
