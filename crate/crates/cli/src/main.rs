//! Command-line front end: ingest a quarterly level CSV, then run marginal
//! descriptives, the copula independence test, the copula break scan, the
//! linear break-test benchmark, or the combined comparison report.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 numerical failure.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use copbreak::{
    az_scan, descriptives, embed, growth_rates, indep_report, parse_csv, permutation_pvalue, scan,
    AzSpec, GrowthSeries, Normalization, ScanConfig, SupMode,
};

use render::{AppError, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(
    name = "copbreak",
    version,
    about = "Copula-based structural break detection for quarterly series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Input CSV with header `date,value` and rows `YYYYQn,<decimal>`
    #[arg(long)]
    input: PathBuf,
    /// Output format on stdout
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Copy, Clone, ValueEnum)]
enum NormalizationArg {
    #[value(name = "root-N", alias = "root-n")]
    RootN,
    #[value(name = "as-printed")]
    AsPrinted,
}

impl From<NormalizationArg> for Normalization {
    fn from(value: NormalizationArg) -> Self {
        match value {
            NormalizationArg::RootN => Normalization::RootN,
            NormalizationArg::AsPrinted => Normalization::AsPrinted,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum SupModeArg {
    /// exact-grid for d = 2, pooled-points otherwise
    Auto,
    ExactGrid,
    PooledPoints,
}

impl SupModeArg {
    fn resolve(self, d: usize) -> SupMode {
        match self {
            SupModeArg::Auto => {
                if d == 2 {
                    SupMode::ExactGrid
                } else {
                    SupMode::PooledPoints
                }
            }
            SupModeArg::ExactGrid => SupMode::ExactGrid,
            SupModeArg::PooledPoints => SupMode::PooledPoints,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum AzSpecArg {
    Intercept,
    Trend,
    Both,
}

impl From<AzSpecArg> for AzSpec {
    fn from(value: AzSpecArg) -> Self {
        match value {
            AzSpecArg::Intercept => AzSpec::Intercept,
            AzSpecArg::Trend => AzSpec::Trend,
            AzSpecArg::Both => AzSpec::Both,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Per-lag marginal descriptives of the growth-rate series
    Descriptives {
        #[command(flatten)]
        common: Common,
        /// Deepest lag to summarize
        #[arg(long = "max-lag", default_value_t = 9)]
        max_lag: usize,
    },
    /// Copula independence test over lag subsets (dependogram data)
    Indep {
        #[command(flatten)]
        common: Common,
        /// Embedding dimension (current value plus d - 1 lags)
        #[arg(long = "d", default_value_t = 2)]
        d: usize,
        /// Largest subset cardinality to test
        #[arg(long = "max-card", default_value_t = 2)]
        max_card: usize,
        /// Family-wise level of the critical values
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Monte Carlo replicates for the null
        #[arg(long = "sims", default_value_t = 1000)]
        n_sim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write bar-chart data (subset, statistic, critvalue) to this file
        #[arg(long = "plot-data")]
        plot_data: Option<PathBuf>,
    },
    /// Copula structural break scan over candidate split points
    Breaktest {
        #[command(flatten)]
        common: Common,
        #[arg(long = "d", default_value_t = 2)]
        d: usize,
        /// Trimming fraction excluded at both ends of the candidate range
        #[arg(long, default_value_t = 0.15)]
        beta: f64,
        #[arg(long, value_enum, default_value_t = NormalizationArg::RootN)]
        normalization: NormalizationArg,
        #[arg(long = "sup-mode", value_enum, default_value_t = SupModeArg::Auto)]
        sup_mode: SupModeArg,
        /// Add a permutation p-value with this many replicates
        #[arg(long = "perm")]
        perm: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the (l, statistic) profile to this file
        #[arg(long = "plot-data")]
        plot_data: Option<PathBuf>,
    },
    /// Linear structural-break benchmark regression scan
    Az {
        #[command(flatten)]
        common: Common,
        /// Which deterministic components may break
        #[arg(long, value_enum)]
        spec: AzSpecArg,
        /// Trimming fraction of the candidate range
        #[arg(long, default_value_t = 0.15)]
        trim: f64,
    },
    /// Copula scan plus all three linear specifications, side by side
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long = "d", default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 0.15)]
        beta: f64,
        #[arg(long, value_enum, default_value_t = NormalizationArg::RootN)]
        normalization: NormalizationArg,
        #[arg(long = "sup-mode", value_enum, default_value_t = SupModeArg::Auto)]
        sup_mode: SupModeArg,
        #[arg(long, default_value_t = 0.15)]
        trim: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn load_growth(input: &PathBuf) -> Result<GrowthSeries, AppError> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| AppError::input(format!("cannot read {}: {e}", input.display())))?;
    let series = parse_csv(&text)?;
    Ok(growth_rates(&series)?)
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Descriptives { common, max_lag } => {
            let growth = load_growth(&common.input)?;
            let table = descriptives(&growth, max_lag)?;
            let config = RunConfig::new("descriptives", &common.input, common.format)
                .with_max_lag(max_lag);
            render::descriptives(&table, &config, common.format)
        }
        Command::Indep {
            common,
            d,
            max_card,
            alpha,
            n_sim,
            seed,
            plot_data,
        } => {
            let growth = load_growth(&common.input)?;
            let report = indep_report(&growth, d, max_card, alpha, n_sim, seed)?;
            if let Some(path) = &plot_data {
                render::write_file(path, &report.plot_csv())?;
            }
            let config = RunConfig::new("indep", &common.input, common.format)
                .with_d(d)
                .with_max_card(max_card)
                .with_alpha(alpha)
                .with_n_sim(n_sim)
                .with_seed(seed)
                .with_plot_data(plot_data.as_deref());
            render::indep(&report, &config, common.format)
        }
        Command::Breaktest {
            common,
            d,
            beta,
            normalization,
            sup_mode,
            perm,
            seed,
            plot_data,
        } => {
            let growth = load_growth(&common.input)?;
            let mode = sup_mode.resolve(d);
            let scan_config = ScanConfig::new(beta, d, normalization.into(), mode);
            let matrix = embed(&growth, d)?;
            let result = scan(&matrix, &scan_config)?;
            let permutation = match perm {
                Some(n_perm) => Some(render::Permutation {
                    n_perm,
                    seed,
                    p_value: permutation_pvalue(&matrix, &scan_config, n_perm, seed)?,
                }),
                None => None,
            };
            if let Some(path) = &plot_data {
                render::write_file(path, &result.profile_csv())?;
            }
            let config = RunConfig::new("breaktest", &common.input, common.format)
                .with_d(d)
                .with_beta(beta)
                .with_normalization(normalization.into())
                .with_sup_mode(mode)
                .with_perm(perm)
                .with_seed(seed)
                .with_plot_data(plot_data.as_deref());
            render::breaktest(&result, permutation.as_ref(), &config, common.format)
        }
        Command::Az { common, spec, trim } => {
            let growth = load_growth(&common.input)?;
            let result = az_scan(&growth, spec.into(), trim)?;
            let config = RunConfig::new("az", &common.input, common.format)
                .with_spec(spec.into())
                .with_trim(trim);
            render::az(&result, &config, common.format)
        }
        Command::Report {
            common,
            d,
            beta,
            normalization,
            sup_mode,
            trim,
            seed,
        } => {
            let growth = load_growth(&common.input)?;
            let mode = sup_mode.resolve(d);
            let scan_config = ScanConfig::new(beta, d, normalization.into(), mode);
            let copula = scan(&embed(&growth, d)?, &scan_config)?;
            let linear = [
                az_scan(&growth, AzSpec::Intercept, trim)?,
                az_scan(&growth, AzSpec::Trend, trim)?,
                az_scan(&growth, AzSpec::Both, trim)?,
            ];
            let config = RunConfig::new("report", &common.input, common.format)
                .with_d(d)
                .with_beta(beta)
                .with_normalization(normalization.into())
                .with_sup_mode(mode)
                .with_trim(trim)
                .with_seed(seed);
            render::report(&copula, &linear, &config, common.format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
