//! `gridstat` command-line front end.
//!
//! Exit codes: 0 success, 1 data or validation error, 2 usage error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gridstat::adf::{adf_test, verdict, AdfConfig, AicVariant, Autolag};
use gridstat::dataset::{
    extract_series, fixture_start, inspect_csv, load_csv, synthetic_dataset, write_fixture,
    SynthKind, ZoneDataset,
};
use gridstat::report::{
    flag_anomalies, render, render_anomalies, render_plot_series, run_report_with, ReportFormat,
    ReportOptions,
};
use gridstat::rolling::{DEFAULT_EWMA_ALPHA, DEFAULT_WINDOW};
use gridstat::series::{drop_undefined_prefix, resample, Horizon, Market, TimeSeries, Variable};
use gridstat::transforms::{apply_with_policy, LogPolicy, TransformKind};

#[derive(Parser, Debug)]
#[command(
    name = "gridstat",
    version,
    about = "Stationarity analysis for electricity-market time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a dataset CSV for parse errors, duplicates and hourly gaps.
    Validate { csv: PathBuf },
    /// Run ADF on every zone × market × variable × transform.
    Report(ReportArgs),
    /// Run ADF on one series.
    Adf(AdfArgs),
    /// Export a series with its MA, EWMA and Mstd as wide CSV.
    PlotData(PlotArgs),
    /// Flag points far from their trailing-window baseline.
    Anomaly(AnomalyArgs),
    /// Write a deterministic synthetic dataset for the nine zones.
    Synth(SynthArgs),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormatArg {
    Md,
    Csv,
    Json,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Md => ReportFormat::Markdown,
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum AicArg {
    /// m·ln(RSS/m) + 2k.
    Standard,
    /// −2·ln(RSS/m) + 2k.
    #[value(name = "paper", alias = "log-mse")]
    LogMse,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum LogPolicyArg {
    /// Non-positive values make log transforms fail.
    Strict,
    /// Drop everything up to the last non-positive value.
    Drop,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum KindArg {
    Rw,
    Ar1,
    Trend,
}

/// ADF and rolling-window options shared by several subcommands.
#[derive(Args, Debug, Clone)]
struct TestOpts {
    /// Resampling horizon: hourly, daily, weekly or monthly.
    #[arg(long, default_value = "daily")]
    horizon: Horizon,
    /// Largest lag considered by AIC selection [default: ceil(12·(N/100)^¼)].
    #[arg(long)]
    maxlag: Option<usize>,
    /// Use this lag instead of AIC selection.
    #[arg(long)]
    lags: Option<usize>,
    /// Significance level for the verdict.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Moving-average window for MA-based transforms.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    /// EWMA smoothing factor.
    #[arg(long, default_value_t = DEFAULT_EWMA_ALPHA)]
    ewma_alpha: f64,
    /// Information criterion for lag selection.
    #[arg(long, value_enum, default_value = "standard")]
    aic: AicArg,
    /// Handling of non-positive values under log transforms.
    #[arg(long, value_enum, default_value = "strict")]
    log_policy: LogPolicyArg,
}

impl TestOpts {
    fn adf_config(&self) -> AdfConfig {
        AdfConfig {
            maxlag: self.maxlag,
            autolag: self.lags.map_or(Autolag::Aic, Autolag::Fixed),
            aic_variant: match self.aic {
                AicArg::Standard => AicVariant::Standard,
                AicArg::LogMse => AicVariant::LogMse,
            },
            significance: self.alpha,
        }
    }

    fn log_policy(&self) -> LogPolicy {
        match self.log_policy {
            LogPolicyArg::Strict => LogPolicy::Strict,
            LogPolicyArg::Drop => LogPolicy::DropNonpositive,
        }
    }

    fn transform(&self, name: &str) -> Result<TransformKind, Failure> {
        TransformKind::parse_with(name, self.window, self.ewma_alpha).map_err(Failure::Usage)
    }
}

/// Selects one series from a dataset.
#[derive(Args, Debug, Clone)]
struct SeriesSel {
    /// Dataset CSV.
    csv: PathBuf,
    #[arg(long)]
    zone: String,
    /// da or rt.
    #[arg(long, default_value = "rt")]
    market: Market,
    /// demand or price.
    #[arg(long, default_value = "price")]
    variable: Variable,
    /// identity, log, remove-ma, remove-ewma, remove-log-ma, diff1 or diff2.
    #[arg(long, default_value = "identity")]
    transform: String,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Dataset CSV.
    csv: PathBuf,
    #[arg(long, value_enum, default_value = "md")]
    format: FormatArg,
    /// Directory for report.<ext>; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads [default: all cores].
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    opts: TestOpts,
}

#[derive(Args, Debug)]
struct AdfArgs {
    #[command(flatten)]
    sel: SeriesSel,
    #[command(flatten)]
    opts: TestOpts,
    /// Print the full result as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[command(flatten)]
    sel: SeriesSel,
    #[command(flatten)]
    opts: TestOpts,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AnomalyArgs {
    #[command(flatten)]
    sel: SeriesSel,
    #[command(flatten)]
    opts: TestOpts,
    /// Flag when |z| exceeds this many trailing standard deviations.
    #[arg(long, default_value_t = gridstat::report::DEFAULT_ANOMALY_THRESHOLD)]
    threshold: f64,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(long, value_enum, default_value = "ar1")]
    kind: KindArg,
    /// Days per zone; 24 hourly rows are written for each.
    #[arg(long, default_value_t = 1797)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Data(e.to_string())
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load(path: &Path) -> Result<ZoneDataset, Failure> {
    let (d, report) = load_csv(path)?;
    for z in &report.unknown_zones {
        log::warn!("zone '{z}' is not one of the nine known zones");
    }
    Ok(d)
}

/// Extract, resample and transform the selected series.
fn prepare(sel: &SeriesSel, opts: &TestOpts) -> Result<TimeSeries, Failure> {
    let kind = opts.transform(&sel.transform)?;
    kind.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let d = load(&sel.csv)?;
    let s = extract_series(&d, &sel.zone, sel.variable, sel.market)?;
    let s = resample(&s, opts.horizon)?;
    Ok(apply_with_policy(&s, kind, opts.log_policy())?)
}

fn cmd_validate(csv: &Path) -> Result<(), Failure> {
    let (d, report) = inspect_csv(csv)?;
    println!("rows: {}", report.rows_read);
    for zone in d.zone_names() {
        let records = &d.zones[zone];
        println!(
            "{zone}: {} rows, {} .. {}",
            records.len(),
            records[0].timestamp.format("%Y-%m-%dT%H:%M:%SZ"),
            records[records.len() - 1]
                .timestamp
                .format("%Y-%m-%dT%H:%M:%SZ"),
        );
    }
    for z in &report.unknown_zones {
        println!("unknown zone: {z}");
    }
    for g in &report.gaps {
        println!(
            "gap: {} missing {} hour(s) from {}",
            g.zone,
            g.missing_hours,
            g.first_missing.format("%Y-%m-%dT%H:%M:%SZ")
        );
    }
    if report.is_clean() {
        println!("ok");
        Ok(())
    } else {
        Err(Failure::Data(format!("{} gap(s) found", report.gaps.len())))
    }
}

fn cmd_report(args: &ReportArgs) -> Result<(), Failure> {
    let transforms = TransformKind::report_defaults(args.opts.window, args.opts.ewma_alpha);
    for t in &transforms {
        t.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let options = ReportOptions {
        horizon: args.opts.horizon,
        transforms,
        adf: args.opts.adf_config(),
        log_policy: args.opts.log_policy(),
    };
    options
        .adf
        .validate()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let d = load(&args.csv)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Failure::Usage(e.to_string()))?;
    let tables = pool.install(|| run_report_with(&d, &options))?;
    let format = ReportFormat::from(args.format);
    let text = render(&tables, format)?;
    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join(format!("report.{}", format.extension()));
            fs::write(&path, text)?;
            log::info!("wrote {}", path.display());
        }
        None => write_output(None, &text)?,
    }
    Ok(())
}

fn cmd_adf(args: &AdfArgs) -> Result<(), Failure> {
    let cfg = args.opts.adf_config();
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let s = drop_undefined_prefix(&prepare(&args.sel, &args.opts)?)?;
    let r = adf_test(&s, &cfg)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&r)?);
        return Ok(());
    }
    println!("series: {} {}", s.meta().zone, s.meta().series_label());
    println!("statistic: {}", r.statistic);
    println!("pvalue: {}", r.pvalue);
    println!("lags_used: {}", r.lags_used);
    println!("nobs: {}", r.nobs);
    println!("cv1: {}", r.critical.cv1);
    println!("cv5: {}", r.critical.cv5);
    println!("cv10: {}", r.critical.cv10);
    println!("verdict: {}", verdict(&r, cfg.significance).as_str());
    Ok(())
}

fn cmd_plot(args: &PlotArgs) -> Result<(), Failure> {
    let s = prepare(&args.sel, &args.opts)?;
    let text = render_plot_series(&s, args.opts.window, args.opts.ewma_alpha)?;
    write_output(args.out.as_deref(), &text)
}

fn cmd_anomaly(args: &AnomalyArgs) -> Result<(), Failure> {
    let s = prepare(&args.sel, &args.opts)?;
    let flags = flag_anomalies(&s, args.opts.window, args.threshold)?;
    log::info!("{} flag(s)", flags.len());
    write_output(args.out.as_deref(), &render_anomalies(&flags))
}

fn cmd_synth(args: &SynthArgs) -> Result<(), Failure> {
    let kind = match args.kind {
        KindArg::Rw => SynthKind::RandomWalk,
        KindArg::Ar1 => SynthKind::Ar1,
        KindArg::Trend => SynthKind::Trend,
    };
    if args.n == 0 {
        return Err(Failure::Usage("--n must be positive".into()));
    }
    let d = synthetic_dataset(kind, args.n * 24, args.seed, fixture_start());
    write_fixture(&d, &args.out)?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { csv } => cmd_validate(csv),
        Command::Report(a) => cmd_report(a),
        Command::Adf(a) => cmd_adf(a),
        Command::PlotData(a) => cmd_plot(a),
        Command::Anomaly(a) => cmd_anomaly(a),
        Command::Synth(a) => cmd_synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
