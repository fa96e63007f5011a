//! Command frontend: run configuration, corpus access and the six subcommands. The binary
//! only parses arguments into a [`RunConfig`] and prints the rendered output.

pub mod commands;
pub mod corpus;

use crate::gcd::FrThresholds;
use std::path::PathBuf;

pub use commands::{cmd_analyze, cmd_deflate, cmd_eval, cmd_reduce, cmd_report, cmd_search};

/// Environment variable holding the default working precision in bits.
pub const PRECISION_ENV: &str = "PCF_PRECISION";
pub const DEFAULT_PRECISION: u32 = 256;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("I/O: {0}")]
    Io(String),
    #[error("corpus: {0}")]
    Corpus(String),
    #[error("{0}")]
    Module(String),
}

macro_rules! module_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Module(e.to_string())
            }
        }
    )*};
}

module_error!(
    crate::pcf::PcfError,
    crate::gcd::GcdError,
    crate::poly::PolyError,
    crate::irrationality::DeltaError,
    crate::transforms::TransformError,
    crate::reduction::ReductionError,
    crate::family_search::FamilyError
);

// reference expressions and GCD forms come straight from the command line
impl From<crate::constants::ConstantError> for CliError {
    fn from(e: crate::constants::ConstantError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<crate::gcd::FormParseError> for CliError {
    fn from(e: crate::gcd::FormParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Eval,
    Analyze,
    Search,
    Deflate,
    Reduce,
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Everything a run depends on. A run is reproducible from its config alone.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    /// partial denominator, list or human form
    pub a: Option<String>,
    /// partial numerator, list or human form
    pub b: Option<String>,
    /// corpus entry, `file:name` or a bare name
    pub entry: Option<String>,
    pub depth: Option<usize>,
    pub precision_bits: u32,
    pub thresholds: FrThresholds,
    /// limit expression over named constants, e.g. `4/pi`
    pub reference: Option<String>,
    /// GCD form for `reduce`, e.g. `n!/2^n`
    pub gcd: Option<String>,
    /// coefficient ranges for `search`, constant term first
    pub search_box: Option<String>,
    pub reproduce: Option<String>,
    pub format: Option<OutputFormat>,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub trials: usize,
    pub threads: Option<usize>,
    /// include wall-clock timings (makes output run-dependent)
    pub timings: bool,
}

impl RunConfig {
    pub fn new(command: CommandKind) -> RunConfig {
        RunConfig {
            command,
            a: None,
            b: None,
            entry: None,
            depth: None,
            precision_bits: default_precision(),
            thresholds: FrThresholds::default(),
            reference: None,
            gcd: None,
            search_box: None,
            reproduce: None,
            format: None,
            output: None,
            seed: 0,
            trials: 20,
            threads: None,
            timings: false,
        }
    }

    pub fn format_or(&self, default: OutputFormat) -> OutputFormat {
        self.format.unwrap_or(default)
    }
}

/// The precision from the environment, or the built-in default.
pub fn default_precision() -> u32 {
    std::env::var(PRECISION_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_PRECISION)
}

/// Rendered command output plus warnings meant for stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub body: String,
    pub warnings: Vec<String>,
}

impl Output {
    fn new(body: String) -> Output {
        Output { body, warnings: Vec::new() }
    }
}

/// Runs the configured command on a pool of the configured size.
pub fn run(config: &RunConfig) -> Result<Output, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = config.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| match config.command {
        CommandKind::Eval => cmd_eval(config),
        CommandKind::Analyze => cmd_analyze(config),
        CommandKind::Search => cmd_search(config),
        CommandKind::Deflate => cmd_deflate(config),
        CommandKind::Reduce => cmd_reduce(config),
        CommandKind::Report => cmd_report(config),
    })
}

/// Runs and writes the body to the configured output path or returns it for stdout.
pub fn run_to_sink(config: &RunConfig) -> Result<Output, CliError> {
    let out = run(config)?;
    if let Some(path) = &config.output {
        std::fs::write(path, &out.body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        return Ok(Output { body: String::new(), warnings: out.warnings });
    }
    Ok(out)
}

pub(crate) fn to_json<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Module(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub(crate) fn to_csv<T: serde::Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Module(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Module(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Module(e.to_string()))
}

fn render<T: serde::Serialize>(rows: &[T], format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => to_json(&rows),
        OutputFormat::Csv => to_csv(rows),
    }
}
