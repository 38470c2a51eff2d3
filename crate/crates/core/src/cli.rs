//! Command-line front end: flag parsing, validation, dispatch and emission.
//!
//! Every numeric flag is checked before any computation starts. Results are
//! gathered in memory and written once, atomically, to `--output`, to a file
//! under `$SPHERICAL_PERCEPTRON_OUT_DIR`, or to stdout.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::capacity_solver::{
    self, alpha_c_lowered, best_bound, CapacityRecord, TableReport, DEFAULT_TOL, MIN_TOL, QUANTITIES,
};
use crate::empirical::{default_restarts, EntryDist, FeasibilityEstimate, FeasibilityExperiment};
use crate::lifted_bound::{bound_at_gamma, lower_bound_l, BoundEvaluation};
use crate::NumericError;

/// Directory used for output files when `--output` is absent.
pub const OUT_DIR_ENV: &str = "SPHERICAL_PERCEPTRON_OUT_DIR";
/// Margin grid of `sweep` when none is given.
pub const DEFAULT_SWEEP_GRID: &str = "-1.5:0.01:0.5";
/// Column order of capacity records in CSV output.
pub const RECORD_HEADER: [&str; 6] = ["kappa", "alpha_u", "alpha_u_low", "c3_opt", "gamma_opt", "residual"];

#[derive(Debug, Parser)]
#[command(name = "spherical-perceptron", version, about = "Storage-capacity bounds for the spherical perceptron")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Output file; stdout (or the directory in $SPHERICAL_PERCEPTRON_OUT_DIR) when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical and lowered capacity at one margin or on a grid.
    Capacity(CapacityArgs),
    /// Lifted bound at explicit parameters; unset parameters are optimized.
    BoundEval(BoundEvalArgs),
    /// Recompute the ten reference rows and compare.
    Tables(TablesArgs),
    /// Capacity curves on a margin grid.
    Sweep(SweepArgs),
    /// Monte Carlo feasibility fractions on random instances.
    Empirical(EmpiricalArgs),
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    #[arg(long, allow_hyphen_values = true, conflicts_with = "kappa_grid", required_unless_present = "kappa_grid")]
    pub kappa: Option<f64>,
    /// `start:step:stop`, or comma-separated values.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa_grid: Option<String>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct BoundEvalArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub c3: Option<f64>,
    #[arg(long, requires = "c3")]
    pub gamma_per: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TablesArgs {}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, allow_hyphen_values = true, default_value = DEFAULT_SWEEP_GRID)]
    pub kappa_grid: String,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct EmpiricalArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: f64,
    /// One or more load ratios, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub alpha: Vec<f64>,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Defaults to 30 for negative margins and 5 otherwise.
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Dist::Gaussian)]
    pub dist: Dist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Text => "txt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    Gaussian,
    BernoulliPm1,
}

impl From<Dist> for EntryDist {
    fn from(d: Dist) -> Self {
        match d {
            Dist::Gaussian => EntryDist::Gaussian,
            Dist::BernoulliPm1 => EntryDist::BernoulliPm1,
        }
    }
}

/// Failure of a CLI run, mapped onto the process exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io { .. } => 1,
        }
    }

    /// One-line JSON record for stderr.
    pub fn to_record(&self) -> String {
        let (kind, path) = match self {
            CliError::Usage(_) => ("usage", None),
            CliError::Numeric(_) => ("numeric", None),
            CliError::Io { path, .. } => ("io", Some(path.display().to_string())),
        };
        serde_json::json!({
            "error": { "kind": kind, "message": self.to_string(), "path": path, "exit_code": self.exit_code() }
        })
        .to_string()
    }
}

/// Fully validated request.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub job: Job,
    pub format: Format,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Capacity { kappa_grid: Vec<f64>, tol: f64 },
    BoundEval { kappa: f64, alpha: f64, c3: Option<f64>, gamma_per: Option<f64> },
    Tables,
    Sweep { kappa_grid: Vec<f64>, tol: f64 },
    Empirical { experiments: Vec<FeasibilityExperiment> },
}

impl Job {
    fn name(&self) -> &'static str {
        match self {
            Job::Capacity { .. } => "capacity",
            Job::BoundEval { .. } => "bound-eval",
            Job::Tables => "tables",
            Job::Sweep { .. } => "sweep",
            Job::Empirical { .. } => "empirical",
        }
    }
}

/// Computed result, ready for emission.
#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Records(Vec<CapacityRecord>),
    Bound { kappa: f64, alpha: f64, evaluation: BoundEvaluation },
    Tables(TableReport),
    Feasibility(Vec<FeasibilityEstimate>),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(usage(msg()))
    }
}

fn check_finite(name: &str, v: f64) -> Result<(), CliError> {
    check(v.is_finite(), || format!("--{name} must be finite, got {v}"))
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    check(tol.is_finite() && tol >= MIN_TOL, || format!("--tol must be at least {MIN_TOL:e}, got {tol}"))
}

/// Parses `start:step:stop` (inclusive) or a comma-separated list.
pub fn parse_kappa_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let text = text.trim();
    let grid = if text.is_empty() {
        Vec::new()
    } else if text.contains(':') {
        let parts: Vec<f64> = text
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| usage(format!("bad kappa grid '{text}': {e}")))?;
        let [start, step, stop] = parts[..] else {
            return Err(usage(format!("kappa grid '{text}' must be start:step:stop")));
        };
        check(parts.iter().all(|v| v.is_finite()), || format!("kappa grid '{text}' must be finite"))?;
        check(step > 0.0, || format!("kappa grid step must be positive, got {step}"))?;
        if stop < start {
            Vec::new()
        } else {
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            // snap to 12 decimals so 0.01 steps print as typed
            (0..count)
                .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
                .collect()
        }
    } else {
        text.split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| usage(format!("bad kappa grid '{text}': {e}")))?
    };
    check(!grid.is_empty(), || format!("kappa grid '{text}' is empty"))?;
    check(grid.iter().all(|v| v.is_finite()), || format!("kappa grid '{text}' must be finite"))?;
    check(grid.windows(2).all(|w| w[1] > w[0]), || {
        format!("kappa grid '{text}' must be strictly ascending")
    })?;
    Ok(grid)
}

impl Cli {
    /// Validates every flag; no computation happens here.
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let job = match self.command {
            Command::Capacity(a) => {
                check_tol(a.tol)?;
                let kappa_grid = match (a.kappa, a.kappa_grid) {
                    (Some(k), None) => {
                        check_finite("kappa", k)?;
                        vec![k]
                    }
                    (None, Some(g)) => parse_kappa_grid(&g)?,
                    _ => return Err(usage("give exactly one of --kappa and --kappa-grid")),
                };
                Job::Capacity { kappa_grid, tol: a.tol }
            }
            Command::BoundEval(a) => {
                check_finite("kappa", a.kappa)?;
                check(a.alpha.is_finite() && a.alpha > 0.0, || format!("--alpha must be positive, got {}", a.alpha))?;
                if let Some(c3) = a.c3 {
                    check(c3.is_finite() && c3 >= 0.0, || format!("--c3 must be nonnegative, got {c3}"))?;
                }
                if let Some(g) = a.gamma_per {
                    check(g.is_finite() && g > 0.0, || format!("--gamma-per must be positive, got {g}"))?;
                }
                Job::BoundEval {
                    kappa: a.kappa,
                    alpha: a.alpha,
                    c3: a.c3,
                    gamma_per: a.gamma_per,
                }
            }
            Command::Tables(_) => Job::Tables,
            Command::Sweep(a) => {
                check_tol(a.tol)?;
                Job::Sweep {
                    kappa_grid: parse_kappa_grid(&a.kappa_grid)?,
                    tol: a.tol,
                }
            }
            Command::Empirical(a) => {
                check_finite("kappa", a.kappa)?;
                check(a.n >= 1, || "--n must be at least 1".into())?;
                check(a.trials >= 1, || "--trials must be at least 1".into())?;
                let restarts = a.restarts.unwrap_or_else(|| default_restarts(a.kappa));
                check(restarts >= 1, || "--restarts must be at least 1".into())?;
                check(!a.alpha.is_empty(), || "--alpha needs at least one value".into())?;
                for &alpha in &a.alpha {
                    check(alpha.is_finite() && alpha > 0.0, || format!("--alpha must be positive, got {alpha}"))?;
                }
                let experiments = a
                    .alpha
                    .iter()
                    .map(|&alpha| FeasibilityExperiment {
                        n: a.n,
                        alpha,
                        kappa: a.kappa,
                        entry_dist: a.dist.into(),
                        trials: a.trials,
                        restarts,
                        seed: a.seed,
                    })
                    .collect();
                Job::Empirical { experiments }
            }
        };
        Ok(RunConfig {
            job,
            format: self.format,
            output: self.output,
        })
    }
}

fn collect_records(results: Vec<crate::Result<CapacityRecord>>, grid: &[f64]) -> Result<Vec<CapacityRecord>, CliError> {
    results
        .into_iter()
        .zip(grid)
        .map(|(r, k)| r.map_err(|e| CliError::Numeric(format!("kappa = {k}: {e}"))))
        .collect()
}

/// Runs the computation behind a validated config.
pub fn compute(job: &Job) -> Result<Artifact, CliError> {
    Ok(match job {
        Job::Capacity { kappa_grid, tol } => {
            if let [k] = kappa_grid[..] {
                Artifact::Records(vec![alpha_c_lowered(k, *tol)?])
            } else {
                Artifact::Records(collect_records(capacity_solver::sweep(kappa_grid, *tol)?, kappa_grid)?)
            }
        }
        Job::Sweep { kappa_grid, tol } => {
            Artifact::Records(collect_records(capacity_solver::sweep(kappa_grid, *tol)?, kappa_grid)?)
        }
        Job::BoundEval {
            kappa,
            alpha,
            c3,
            gamma_per,
        } => {
            let evaluation = match (c3, gamma_per) {
                (Some(c3), Some(g)) => bound_at_gamma(*c3, *g, *alpha, *kappa)?,
                (Some(c3), None) => lower_bound_l(*c3, *alpha, *kappa)?,
                _ => best_bound(*alpha, *kappa)?,
            };
            Artifact::Bound {
                kappa: *kappa,
                alpha: *alpha,
                evaluation,
            }
        }
        Job::Tables => {
            let report = capacity_solver::reproduce_tables();
            if let Some(row) = report.rows.iter().find(|r| r.error.is_some()) {
                return Err(CliError::Numeric(format!(
                    "kappa = {}: {}",
                    row.kappa,
                    row.error.as_deref().unwrap_or_default()
                )));
            }
            Artifact::Tables(report)
        }
        Job::Empirical { experiments } => {
            Artifact::Feasibility(experiments.iter().map(|e| e.run()).collect::<crate::Result<_>>()?)
        }
    })
}

/// Rounds to 10 significant digits.
pub fn round_sig10(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.9e}").parse().expect("formatted float parses")
}

fn num(v: f64) -> String {
    format!("{:?}", round_sig10(v))
}

fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let r = round_sig10(n.as_f64().expect("checked f64"));
            if let Some(rn) = serde_json::Number::from_f64(r) {
                *n = rn;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("artifacts serialize");
    round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

// Quantities down the side, one column per key.
fn transposed(corner: &str, keys: &[String], rows: &[(String, Vec<String>)]) -> String {
    let label_w = rows.iter().map(|r| r.0.len()).chain([corner.len()]).max().unwrap_or(0);
    let col_w = keys
        .iter()
        .map(String::len)
        .chain(rows.iter().flat_map(|r| r.1.iter().map(String::len)))
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    let _ = write!(out, "{corner:<label_w$}");
    for k in keys {
        let _ = write!(out, "  {k:>col_w$}");
    }
    out.push('\n');
    for (label, cells) in rows {
        let _ = write!(out, "{label:<label_w$}");
        for c in cells {
            let _ = write!(out, "  {c:>col_w$}");
        }
        out.push('\n');
    }
    out
}

fn record_cells(r: &CapacityRecord) -> Vec<String> {
    [r.kappa, r.alpha_u, r.alpha_u_low, r.c3_opt, r.gamma_opt, r.residual]
        .into_iter()
        .map(num)
        .collect()
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Serializes an artifact; CSV and text end with a newline, as does JSON.
pub fn render(artifact: &Artifact, format: Format) -> String {
    match (artifact, format) {
        (Artifact::Records(recs), Format::Csv) => csv(&RECORD_HEADER, recs.iter().map(record_cells)),
        (Artifact::Records(recs), Format::Json) => to_json(recs),
        (Artifact::Records(recs), Format::Text) => {
            let keys: Vec<String> = recs.iter().map(|r| num(r.kappa)).collect();
            let cells: Vec<Vec<String>> = recs.iter().map(record_cells).collect();
            let rows: Vec<(String, Vec<String>)> = RECORD_HEADER[1..]
                .iter()
                .enumerate()
                .map(|(j, name)| (name.to_string(), cells.iter().map(|c| c[j + 1].clone()).collect()))
                .collect();
            transposed("kappa", &keys, &rows)
        }

        (Artifact::Bound { kappa, alpha, evaluation: e }, fmt) => {
            let header = ["kappa", "alpha", "c3", "gamma_per", "gamma_hat", "i_sph", "i_per", "lower_bound"];
            let vals = [*kappa, *alpha, e.c3, e.gamma_per, e.gamma_hat, e.i_sph, e.i_per, e.lower_bound];
            match fmt {
                Format::Csv => csv(&header, [vals.iter().map(|&v| num(v)).collect()]),
                Format::Json => to_json(&serde_json::json!({ "kappa": kappa, "alpha": alpha, "evaluation": e })),
                Format::Text => header
                    .iter()
                    .zip(vals)
                    .map(|(h, v)| format!("{h:<12}{}\n", num(v)))
                    .collect(),
            }
        }

        (Artifact::Tables(report), Format::Json) => to_json(report),
        (Artifact::Tables(report), fmt) => {
            let reference = |row: &capacity_solver::TableRow, q: &str| {
                row.deviations.iter().find(|d| d.quantity == q).map(|d| d.reference)
            };
            match fmt {
                Format::Csv => {
                    let mut header = RECORD_HEADER.to_vec();
                    let refs: Vec<String> = QUANTITIES.iter().map(|q| format!("ref_{q}")).collect();
                    header.extend(refs.iter().map(String::as_str));
                    csv(
                        &header,
                        report.rows.iter().map(|row| {
                            let mut cells = row.record.as_ref().map(record_cells).unwrap_or_default();
                            cells.extend(QUANTITIES.iter().map(|q| opt_num(reference(row, q))));
                            cells
                        }),
                    )
                }
                _ => {
                    let keys: Vec<String> = report.rows.iter().map(|r| num(r.kappa)).collect();
                    let computed = |row: &capacity_solver::TableRow, q: &str| {
                        row.deviations.iter().find(|d| d.quantity == q).map(|d| d.computed)
                    };
                    let mut rows = Vec::new();
                    for q in ["c3", "gamma_per", "alpha_u_low", "alpha_u"] {
                        rows.push((
                            format!("{q} (reference)"),
                            report.rows.iter().map(|r| opt_num(reference(r, q))).collect(),
                        ));
                        rows.push((
                            q.to_string(),
                            report.rows.iter().map(|r| opt_num(computed(r, q).map(|v| (v * 1e4).round() / 1e4))).collect(),
                        ));
                    }
                    transposed("kappa", &keys, &rows)
                }
            }
        }

        (Artifact::Feasibility(ests), Format::Json) => to_json(ests),
        (Artifact::Feasibility(ests), fmt) => {
            let header = [
                "kappa",
                "alpha",
                "n",
                "trials",
                "restarts",
                "seed",
                "entry_dist",
                "fraction_feasible",
                "mean_xi_over_sqrt_n",
                "certified_infeasible",
            ];
            let cells: Vec<Vec<String>> = ests
                .iter()
                .map(|e| {
                    vec![
                        num(e.kappa),
                        num(e.alpha),
                        e.n.to_string(),
                        e.trials.to_string(),
                        e.restarts.to_string(),
                        e.seed.to_string(),
                        e.entry_dist.to_string(),
                        num(e.fraction_feasible),
                        opt_num(e.mean_xi_over_sqrt_n),
                        e.certified_infeasible.to_string(),
                    ]
                })
                .collect();
            if fmt == Format::Csv {
                csv(&header, cells)
            } else {
                let keys: Vec<String> = ests.iter().map(|e| num(e.alpha)).collect();
                let rows: Vec<(String, Vec<String>)> = header
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != 1)
                    .map(|(j, name)| (name.to_string(), cells.iter().map(|c| c[j].clone()).collect()))
                    .collect();
                transposed("alpha", &keys, &rows)
            }
        }
    }
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn destination(config: &RunConfig) -> Result<Option<PathBuf>, CliError> {
    if let Some(p) = &config.output {
        return Ok(Some(p.clone()));
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => {
            let dir = PathBuf::from(dir);
            std::fs::create_dir_all(&dir).map_err(|source| CliError::Io {
                path: dir.clone(),
                source,
            })?;
            Ok(Some(dir.join(format!("{}.{}", config.job.name(), config.format.extension()))))
        }
        _ => Ok(None),
    }
}

/// Computes and emits the artifact for a validated config.
pub fn run(config: &RunConfig) -> Result<Artifact, CliError> {
    let target = destination(config)?;
    let artifact = compute(&config.job)?;
    let body = render(&artifact, config.format);
    match target {
        Some(path) => {
            write_atomic(&path, &body)?;
            log::info!("wrote {}", path.display());
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
        }
    }
    Ok(artifact)
}

/// Entry point of the binary: parse, validate, run, report.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let result = match Cli::try_parse_from(args) {
        Ok(cli) => cli.into_config().and_then(|cfg| run(&cfg).map(|_| ())),
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => Err(CliError::Usage(e.to_string().trim_end().to_string())),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_record());
            ExitCode::from(e.exit_code())
        }
    }
}
