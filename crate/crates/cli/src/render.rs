//! Output shaping: config echo, text tables, JSON envelopes, CSV blocks.
//!
//! Every report starts with the full effective configuration (defaults
//! included) so runs are reproducible from their own output. JSON documents
//! carry a `schema_version` field and round-trip through a generic parser.

use std::fmt;
use std::path::Path;

use clap::ValueEnum;
use copbreak::{
    AzResult, AzSpec, BreakScanResult, DependogramReport, MarginalTable, Normalization, SupMode,
};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

impl OutputFormat {
    fn label(self) -> &'static str {
        match self {
            OutputFormat::Text => "text",
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

/// Errors at the application boundary, mapped to exit codes.
#[derive(Debug)]
pub enum AppError {
    Input(String),
    Core(copbreak::Error),
}

impl AppError {
    pub fn input(message: String) -> Self {
        AppError::Input(message)
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Input(_) => 2,
            AppError::Core(e) if e.is_numerical() => 3,
            AppError::Core(_) => 2,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Input(m) => write!(f, "{m}"),
            AppError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<copbreak::Error> for AppError {
    fn from(e: copbreak::Error) -> Self {
        AppError::Core(e)
    }
}

/// Full effective configuration, echoed in every report.
#[derive(Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub input: String,
    pub format: &'static str,
    pub d: usize,
    pub beta: f64,
    pub alpha: f64,
    pub n_sim: usize,
    pub seed: u64,
    pub normalization: &'static str,
    pub sup_mode: &'static str,
    pub max_card: usize,
    pub trim: f64,
    pub max_lag: usize,
    pub spec: Option<&'static str>,
    pub perm: Option<usize>,
    pub plot_data: Option<String>,
}

impl RunConfig {
    pub fn new(command: &'static str, input: &Path, format: OutputFormat) -> Self {
        RunConfig {
            command,
            input: input.display().to_string(),
            format: format.label(),
            d: 2,
            beta: 0.15,
            alpha: 0.05,
            n_sim: 1000,
            seed: 0,
            normalization: Normalization::RootN.label(),
            sup_mode: SupMode::ExactGrid.label(),
            max_card: 2,
            trim: 0.15,
            max_lag: 9,
            spec: None,
            perm: None,
            plot_data: None,
        }
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = d;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_n_sim(mut self, n_sim: usize) -> Self {
        self.n_sim = n_sim;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization.label();
        self
    }

    pub fn with_sup_mode(mut self, mode: SupMode) -> Self {
        self.sup_mode = mode.label();
        self
    }

    pub fn with_max_card(mut self, max_card: usize) -> Self {
        self.max_card = max_card;
        self
    }

    pub fn with_trim(mut self, trim: f64) -> Self {
        self.trim = trim;
        self
    }

    pub fn with_max_lag(mut self, max_lag: usize) -> Self {
        self.max_lag = max_lag;
        self
    }

    pub fn with_perm(mut self, perm: Option<usize>) -> Self {
        self.perm = perm;
        self
    }

    pub fn with_spec(mut self, spec: AzSpec) -> Self {
        self.spec = Some(spec.label());
        self
    }

    pub fn with_plot_data(mut self, path: Option<&Path>) -> Self {
        self.plot_data = path.map(|p| p.display().to_string());
        self
    }

    fn header_line(&self) -> String {
        let perm = self
            .perm
            .map_or("none".to_string(), |n| n.to_string());
        let plot = self.plot_data.as_deref().unwrap_or("none");
        let spec = self.spec.unwrap_or("none");
        format!(
            "# config: command={} input={} format={} d={} beta={} alpha={} sims={} trim={} max-card={} max-lag={} normalization={} sup-mode={} seed={} spec={} perm={} plot-data={}",
            self.command,
            self.input,
            self.format,
            self.d,
            self.beta,
            self.alpha,
            self.n_sim,
            self.trim,
            self.max_card,
            self.max_lag,
            self.normalization,
            self.sup_mode,
            self.seed,
            spec,
            perm,
            plot,
        )
    }
}

#[derive(Serialize)]
pub struct Permutation {
    pub n_perm: usize,
    pub seed: u64,
    pub p_value: f64,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    config: &'a RunConfig,
    result: T,
}

fn emit_json<T: Serialize>(config: &RunConfig, result: T) -> Result<(), AppError> {
    let doc = Envelope {
        schema_version: SCHEMA_VERSION,
        config,
        result,
    };
    let text = serde_json::to_string_pretty(&doc)
        .map_err(|e| AppError::Input(format!("serialization failed: {e}")))?;
    println!("{text}");
    Ok(())
}

pub fn write_file(path: &Path, content: &str) -> Result<(), AppError> {
    std::fs::write(path, content)
        .map_err(|e| AppError::Input(format!("cannot write {}: {e}", path.display())))
}

pub fn descriptives(
    table: &MarginalTable,
    config: &RunConfig,
    format: OutputFormat,
) -> Result<(), AppError> {
    match format {
        OutputFormat::Json => emit_json(config, table),
        OutputFormat::Csv => {
            println!("{}", config.header_line());
            print!("{}", table.to_csv());
            Ok(())
        }
        OutputFormat::Text => {
            println!("{}", config.header_line());
            let mut header = format!("{:<9}", "Lag");
            for r in &table.rows {
                let label = if r.lag == 0 { "0".to_string() } else { format!("-{}", r.lag) };
                header.push_str(&format!("{label:>9}"));
            }
            println!("{header}");
            let stats: [(&str, fn(&copbreak::LagStats) -> f64); 6] = [
                ("Min.", |r| r.min),
                ("1st Qu.", |r| r.q1),
                ("Median", |r| r.median),
                ("Mean", |r| r.mean),
                ("3rd Qu.", |r| r.q3),
                ("Max.", |r| r.max),
            ];
            for (name, get) in stats {
                let mut line = format!("{name:<9}");
                for r in &table.rows {
                    line.push_str(&format!("{:>9.3}", get(r)));
                }
                println!("{line}");
            }
            Ok(())
        }
    }
}

pub fn indep(
    report: &DependogramReport,
    config: &RunConfig,
    format: OutputFormat,
) -> Result<(), AppError> {
    match format {
        OutputFormat::Json => emit_json(config, report),
        OutputFormat::Csv => {
            println!("{}", config.header_line());
            print!("{}", report.to_csv());
            Ok(())
        }
        OutputFormat::Text => {
            println!("{}", config.header_line());
            println!(
                "rows={} d={} max-card={} alpha={} sims={} seed={}",
                report.n, report.d, report.max_card, report.alpha, report.n_sim, report.seed
            );
            println!(
                "{:<12}{:>12}{:>10}{:>12}",
                "subset", "statistic", "pvalue", "critvalue"
            );
            for r in &report.rows {
                println!(
                    "{:<12}{:>12.6}{:>10.5}{:>12.6}",
                    r.subset.to_string(),
                    r.statistic,
                    r.p_value,
                    r.crit_value
                );
            }
            Ok(())
        }
    }
}

pub fn breaktest(
    result: &BreakScanResult,
    permutation: Option<&Permutation>,
    config: &RunConfig,
    format: OutputFormat,
) -> Result<(), AppError> {
    match format {
        OutputFormat::Json => emit_json(
            config,
            serde_json::json!({ "scan": result, "permutation": permutation }),
        ),
        OutputFormat::Csv => {
            println!("{}", config.header_line());
            print!("{}", result.profile_csv());
            Ok(())
        }
        OutputFormat::Text => {
            println!("{}", config.header_line());
            println!(
                "rows={} candidates={}..{}",
                result.n_rows,
                result.per_l.first().map_or(0, |(l, _)| *l),
                result.per_l.last().map_or(0, |(l, _)| *l)
            );
            println!(
                "T = {:.4} at row {} (shift observation {}, {})",
                result.t_n, result.l_hat, result.shift_observation, result.date_hat
            );
            if let Some(p) = permutation {
                println!(
                    "permutation p-value = {:.6} ({} replicates, seed {})",
                    p.p_value, p.n_perm, p.seed
                );
            }
            Ok(())
        }
    }
}

pub fn az(result: &AzResult, config: &RunConfig, format: OutputFormat) -> Result<(), AppError> {
    match format {
        OutputFormat::Json => emit_json(config, result),
        OutputFormat::Csv => {
            println!("{}", config.header_line());
            print!("{}", result.profile_csv());
            Ok(())
        }
        OutputFormat::Text => {
            println!("{}", config.header_line());
            println!(
                "spec={} best break: observation {} ({}), t = {:.4}",
                result.spec.label(),
                result.best_index,
                result.best_date,
                result.min_t
            );
            println!(
                "candidates={}..{}",
                result.per_candidate.first().map_or(0, |(l, _)| *l),
                result.per_candidate.last().map_or(0, |(l, _)| *l)
            );
            println!();
            print!("{}", result.fit_at_best.text_block());
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ComparisonRow {
    test: &'static str,
    specification: &'static str,
    shift_observation: usize,
    shift_date: String,
    statistic: f64,
}

pub fn report(
    copula: &BreakScanResult,
    linear: &[AzResult; 3],
    config: &RunConfig,
    format: OutputFormat,
) -> Result<(), AppError> {
    let mut rows = vec![ComparisonRow {
        test: "Copula",
        specification: "Kolmogorov-Smirnov",
        shift_observation: copula.shift_observation,
        shift_date: copula.date_hat.to_string(),
        statistic: copula.t_n,
    }];
    for result in linear {
        rows.push(ComparisonRow {
            test: "Andrews-Zivot",
            specification: result.spec.describe(),
            shift_observation: result.best_index,
            shift_date: result.best_date.to_string(),
            statistic: result.min_t,
        });
    }
    match format {
        OutputFormat::Json => emit_json(
            config,
            serde_json::json!({ "comparison": rows, "copula": copula, "linear": linear }),
        ),
        OutputFormat::Csv => {
            println!("{}", config.header_line());
            println!("test,specification,shift_observation,shift_date,statistic");
            for r in &rows {
                println!(
                    "{},{},{},{},{}",
                    r.test, r.specification, r.shift_observation, r.shift_date, r.statistic
                );
            }
            Ok(())
        }
        OutputFormat::Text => {
            println!("{}", config.header_line());
            println!(
                "{:<15}{:<22}{:>18}{:>12}{:>12}",
                "Test", "Specification", "Shift Observation", "Shift Date", "Statistic"
            );
            for r in &rows {
                println!(
                    "{:<15}{:<22}{:>18}{:>12}{:>12.4}",
                    r.test, r.specification, r.shift_observation, r.shift_date, r.statistic
                );
            }
            Ok(())
        }
    }
}
