//! `pipecorr` command line.
//!
//! Subcommands: `fit`, `predict`, `gof`, `backtest`, `simulate`,
//! `plot-data {rate|density}`. `--json` switches any of them to the
//! [`report::AnalysisReport`] schema. Errors go to standard error as one JSON
//! line and set the exit code: 2 usage, 3 data validation, 4 numeric failure.

pub mod format;
pub mod ingest;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::diagnostics::{gof_report, Transform};
use crate::error::Error;
use crate::forecast::{backtest, PredictionQuery};
use crate::inference::{fit_mle, RecordSequence};
use crate::model::{PowerLawRate, RateConvention};
use crate::simulation::simulate_first_m;
use format::sig6;
use ingest::{ingest_csv, IngestError};
use report::{
    AnalysisReport, BacktestSection, FitSection, InputDigest, PlotSection, PredictionSection,
    SimulationSection, BETA_UNITS_WARNING,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "pipecorr", version, about = "Predict corrosion positions along a pipeline")]
struct Cli {
    /// Emit the versioned JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Maximum-likelihood fit of the power-law rate.
    Fit(DataArgs),
    /// Predict a future corrosion position.
    Predict(PredictArgs),
    /// Goodness of fit via the exponential transform and a KS test.
    Gof(GofArgs),
    /// One-step-ahead predictions for every prefix of the data.
    Backtest(InputArgs),
    /// Simulate corrosion positions as CSV.
    Simulate(SimulateArgs),
    /// Two-column CSV for plotting.
    PlotData {
        #[command(subcommand)]
        kind: PlotKind,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    /// CSV file with a `position_km` column.
    input: PathBuf,
}

#[derive(Debug, Args)]
struct DataArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Ignore the last N records.
    #[arg(long, default_value_t = 0)]
    holdout: usize,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Predict record m + STEPS, where m is the number of records used.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    steps: i64,
    /// Prediction interval level.
    #[arg(long, default_value_t = 0.95)]
    level: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TransformArg {
    Rescaling,
    LogRatio,
}

impl From<TransformArg> for Transform {
    fn from(t: TransformArg) -> Self {
        match t {
            TransformArg::Rescaling => Transform::Rescaling,
            TransformArg::LogRatio => Transform::LogRatio,
        }
    }
}

#[derive(Debug, Args)]
struct GofArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_enum, default_value_t = TransformArg::Rescaling)]
    transform: TransformArg,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConventionArg {
    /// lambda(t) = alpha * beta * t^(alpha - 1)
    Standard,
    /// lambda(t) = beta * t^(alpha - 1)
    Unscaled,
}

impl From<ConventionArg> for RateConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Standard => RateConvention::Standard,
            ConventionArg::Unscaled => RateConvention::Unscaled,
        }
    }
}

#[derive(Debug, Subcommand)]
enum PlotKind {
    /// Intensity curve `t,lambda` on (0, t-max].
    Rate {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, value_enum, default_value_t = ConventionArg::Standard)]
        convention: ConventionArg,
    },
    /// Predictive density `y,density` of a future record.
    Density {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        steps: i64,
        /// Defaults to the last record used.
        #[arg(long)]
        y_min: Option<f64>,
        /// Defaults to the 0.999 predictive quantile.
        #[arg(long)]
        y_max: Option<f64>,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
}

/// Failure carried to the process boundary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub error: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub row: Option<usize>,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            error: "usage".into(),
            exit_code: EXIT_USAGE,
            row: None,
            message: message.into(),
        }
    }

    fn to_line(&self) -> String {
        serde_json::to_string(self).expect("error serializes")
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        Self {
            error: e.code().into(),
            exit_code: EXIT_DATA,
            row: e.row(),
            message: e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, exit_code, row) = match &e {
            Error::Domain(_) => ("domain".to_string(), EXIT_USAGE, None),
            Error::InsufficientData { .. } => ("insufficient_data".to_string(), EXIT_DATA, None),
            Error::Validation { kind, index, .. } => (kind.code().to_string(), EXIT_DATA, Some(index + 1)),
            Error::Numeric { .. } => ("numeric_failure".to_string(), EXIT_NUMERIC, None),
        };
        Self {
            error: code,
            exit_code,
            row,
            message: e.to_string(),
        }
    }
}

/// Parse `args` (including the program name), run, and write to `out`/`err`.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                let _ = write!(err, "{e}");
                return EXIT_USAGE;
            }
            let first_line = e.to_string().lines().next().unwrap_or("invalid arguments").to_string();
            let msg = first_line.trim_start_matches("error: ").to_string();
            let _ = writeln!(err, "{}", CliError::usage(msg).to_line());
            return EXIT_USAGE;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "{}", e.to_line());
            e.exit_code
        }
    }
}

fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Fit(args) => cmd_fit(args, cli.json),
        Command::Predict(args) => cmd_predict(args, cli.json),
        Command::Gof(args) => cmd_gof(args, cli.json),
        Command::Backtest(args) => cmd_backtest(args, cli.json),
        Command::Simulate(args) => cmd_simulate(args, cli.json),
        Command::PlotData { kind } => cmd_plot(kind, cli.json),
    }
}

fn load(args: &DataArgs) -> Result<(RecordSequence, RecordSequence), CliError> {
    let all = ingest_csv(&args.input.input)?;
    if args.holdout >= all.len() {
        return Err(CliError::usage(format!(
            "--holdout {} leaves no records out of {}",
            args.holdout,
            all.len()
        )));
    }
    let used = all.prefix(all.len() - args.holdout);
    Ok((all, used))
}

fn check_steps(steps: i64) -> Result<usize, CliError> {
    if steps <= 0 {
        return Err(CliError::usage(format!("--steps must be positive, got {steps}")));
    }
    Ok(steps as usize)
}

fn check_level(level: f64) -> Result<(), CliError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(CliError::usage(format!("--level must lie in (0, 1), got {level}")));
    }
    Ok(())
}

fn json(report: &AnalysisReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn text_header(digest: &InputDigest) -> String {
    let mut s = String::new();
    if let Some(id) = &digest.pipeline_id {
        s += &format!("pipeline        {id}\n");
    }
    s += &format!(
        "records         {} used of {} ({} .. {} km)\n",
        digest.used,
        digest.records,
        sig6(digest.min_km),
        sig6(digest.max_km)
    );
    s
}

fn text_fit(fit: &FitSection) -> String {
    format!(
        "m               {}\nr_m             {} km\nalpha_hat       {}\nbeta_hat        {}\nloglik          {}\n",
        fit.m,
        sig6(fit.r_m),
        sig6(fit.alpha),
        sig6(fit.beta),
        sig6(fit.loglik)
    )
}

fn text_warnings(warnings: &[String]) -> String {
    warnings.iter().map(|w| format!("warning: {w}\n")).collect()
}

fn cmd_fit(args: &DataArgs, as_json: bool) -> Result<String, CliError> {
    let (all, used) = load(args)?;
    let fit = fit_mle(&used)?;
    let mut report = AnalysisReport::new("fit");
    report.input_digest = Some(InputDigest::new(&all, used.len()));
    report.fit = Some((&fit).into());
    report.warnings.push(BETA_UNITS_WARNING.into());
    if as_json {
        return Ok(json(&report));
    }
    Ok(text_header(report.input_digest.as_ref().unwrap())
        + &text_fit(report.fit.as_ref().unwrap())
        + &text_warnings(&report.warnings))
}

fn cmd_predict(args: &PredictArgs, as_json: bool) -> Result<String, CliError> {
    let steps = check_steps(args.steps)?;
    check_level(args.level)?;
    let (all, used) = load(&args.data)?;
    let fit = fit_mle(&used)?;
    let s = fit.m() + steps;
    let prediction = PredictionQuery::from_fit(&fit, s)?.predict(args.level)?;
    let observed = all.positions().get(s - 1).copied();
    let mut report = AnalysisReport::new("predict");
    report.input_digest = Some(InputDigest::new(&all, used.len()));
    report.fit = Some((&fit).into());
    report.prediction = Some(PredictionSection::new(&prediction, observed));
    if used.len() >= 3 {
        let gof = gof_report(&used, &fit, Transform::Rescaling)?;
        report.warnings.push(gof.caveat.clone());
        report.gof = Some((&gof).into());
    }
    report.warnings.push(BETA_UNITS_WARNING.into());
    if as_json {
        return Ok(json(&report));
    }
    let p = report.prediction.as_ref().unwrap();
    let mut text = text_header(report.input_digest.as_ref().unwrap()) + &text_fit(report.fit.as_ref().unwrap());
    text += &format!(
        "target          record {} (m = {})\nmean            {} km\nmedian          {} km\ninterval        [{}, {}] km at level {}\n",
        p.s,
        p.m,
        sig6(p.mean),
        sig6(p.median),
        sig6(p.interval_low),
        sig6(p.interval_high),
        sig6(p.level)
    );
    if let Some(obs) = p.observed {
        text += &format!("observed        {} km\n", sig6(obs));
    }
    if let Some(g) = &report.gof {
        text += &format!("ks_statistic    {}\nks_p_value      {}\n", sig6(g.ks_statistic), sig6(g.p_value));
    }
    Ok(text + &text_warnings(&report.warnings))
}

fn cmd_gof(args: &GofArgs, as_json: bool) -> Result<String, CliError> {
    let (all, used) = load(&args.data)?;
    let fit = fit_mle(&used)?;
    let gof = gof_report(&used, &fit, args.transform.into())?;
    let mut report = AnalysisReport::new("gof");
    report.input_digest = Some(InputDigest::new(&all, used.len()));
    report.fit = Some((&fit).into());
    report.warnings.push(gof.caveat.clone());
    report.gof = Some((&gof).into());
    if as_json {
        return Ok(json(&report));
    }
    let g = report.gof.as_ref().unwrap();
    let values: Vec<String> = g.transform_values.iter().map(|&u| sig6(u)).collect();
    let transform = match g.transform {
        Transform::Rescaling => "rescaling",
        Transform::LogRatio => "log-ratio",
    };
    Ok(text_header(report.input_digest.as_ref().unwrap())
        + &text_fit(report.fit.as_ref().unwrap())
        + &format!(
            "transform       {transform}\nn               {}\nu               {}\nks_statistic    {}\nks_p_value      {}\n",
            g.n,
            values.join(" "),
            sig6(g.ks_statistic),
            sig6(g.p_value)
        )
        + &text_warnings(&report.warnings))
}

fn cmd_backtest(args: &InputArgs, as_json: bool) -> Result<String, CliError> {
    let records = ingest_csv(&args.input)?;
    let rows = backtest(&records)?;
    let mut report = AnalysisReport::new("backtest");
    report.input_digest = Some(InputDigest::new(&records, records.len()));
    report.backtest = Some(rows.iter().map(BacktestSection::from).collect());
    report.warnings.push(BETA_UNITS_WARNING.into());
    if as_json {
        return Ok(json(&report));
    }
    let mut text = text_header(report.input_digest.as_ref().unwrap());
    text += "k\talpha_hat\tbeta_hat\tpredicted_next\tobserved_next\n";
    for r in &rows {
        text += &format!(
            "{}\t{}\t{}\t{}\t{}\n",
            r.k,
            sig6(r.alpha_hat),
            sig6(r.beta_hat),
            sig6(r.predicted_next),
            sig6(r.observed_next)
        );
    }
    Ok(text + &text_warnings(&report.warnings))
}

fn cmd_simulate(args: &SimulateArgs, as_json: bool) -> Result<String, CliError> {
    if args.m == 0 {
        return Err(CliError::usage("--m must be at least 1"));
    }
    let rate = PowerLawRate::new(args.alpha, args.beta)?;
    let path = simulate_first_m(&rate, args.m, args.seed)?;
    if as_json {
        let mut report = AnalysisReport::new("simulate");
        report.simulation = Some(SimulationSection {
            alpha: args.alpha,
            beta: args.beta,
            m: args.m,
            seed: args.seed,
            positions: path.positions,
        });
        return Ok(json(&report));
    }
    let mut text = format!("{}\n", ingest::HEADER);
    for x in &path.positions {
        text += &format!("{x}\n");
    }
    Ok(text)
}

fn plot_output(kind: &str, columns: [&str; 2], points: Vec<(f64, f64)>, as_json: bool) -> String {
    if as_json {
        let mut report = AnalysisReport::new("plot-data");
        report.plot = Some(PlotSection {
            kind: kind.into(),
            columns: columns.map(str::to_string),
            x: points.iter().map(|p| p.0).collect(),
            y: points.iter().map(|p| p.1).collect(),
        });
        return json(&report);
    }
    let mut text = format!("{},{}\n", columns[0], columns[1]);
    for (x, y) in points {
        text += &format!("{x},{y}\n");
    }
    text
}

fn cmd_plot(kind: &PlotKind, as_json: bool) -> Result<String, CliError> {
    match kind {
        PlotKind::Rate {
            alpha,
            beta,
            t_max,
            points,
            convention,
        } => {
            if *points < 2 || !(*t_max > 0.0) || !t_max.is_finite() {
                return Err(CliError::usage("need --points >= 2 and a positive --t-max"));
            }
            let rate = PowerLawRate::new(*alpha, *beta)?;
            let convention: RateConvention = (*convention).into();
            let curve = (1..=*points)
                .map(|i| {
                    let t = t_max * i as f64 / *points as f64;
                    Ok((t, convention.intensity(&rate, t)?))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(plot_output("rate", ["t", "lambda"], curve, as_json))
        }
        PlotKind::Density {
            data,
            steps,
            y_min,
            y_max,
            points,
        } => {
            let steps = check_steps(*steps)?;
            let (_, used) = load(data)?;
            let fit = fit_mle(&used)?;
            let query = PredictionQuery::from_fit(&fit, fit.m() + steps)?;
            let lo = y_min.unwrap_or(fit.r_m());
            let hi = match y_max {
                Some(v) => *v,
                None => query.predict_quantile(0.999)?,
            };
            let curve = query.density_curve(lo, hi, *points)?;
            Ok(plot_output("density", ["y", "density"], curve, as_json))
        }
    }
}
