use clap::{Args, Parser, Subcommand, ValueEnum};
use pcfkit::cli::{self, CommandKind, OutputFormat, RunConfig, PRECISION_ENV};
use pcfkit::gcd::FrThresholds;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pcf", version, about = "Polynomial continued fractions: limits, GCD structure, irrationality measures")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// working precision in bits
    #[arg(long, global = true, env = PRECISION_ENV, default_value_t = cli::DEFAULT_PRECISION)]
    precision: u32,
    /// output format (defaults: json for single reports, csv for tables)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// write the output here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// FR if the n·ln n slope of the reduced GCD is below this
    #[arg(long, global = true, default_value_t = FrThresholds::default().rho_fr)]
    rho_fr: f64,
    /// NoFR if the slope exceeds this
    #[arg(long, global = true, default_value_t = FrThresholds::default().rho_no_fr)]
    rho_no_fr: f64,
    #[arg(long, global = true, default_value_t = FrThresholds::default().stable_tol)]
    stable_tol: f64,
    /// read the whole run configuration from a JSON file (other flags are ignored)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// write the effective run configuration as JSON
    #[arg(long, global = true)]
    save_config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Default)]
struct Target {
    /// partial denominator a(n): "[5,27,51,34]" or "34n^3+51n^2+27n+5"
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// partial numerator b(n)
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// corpus entry instead of --a/--b ("table1:zebra" or "zebra")
    #[arg(long)]
    entry: Option<String>,
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// enclose the limit
    Eval {
        #[command(flatten)]
        target: Target,
        /// expression for the expected limit, e.g. "4/pi" (names: pi e zeta2 zeta3 catalan ln2 phi sqrt2)
        #[arg(long = "ref")]
        reference: Option<String>,
    },
    /// λ, FR verdict and δ as JSON
    Analyze {
        #[command(flatten)]
        target: Target,
        #[arg(long = "ref")]
        reference: Option<String>,
    },
    /// find a with factorial reduction for a given b
    Search {
        #[command(flatten)]
        target: Target,
        /// coefficient ranges, constant term first: "1..5,1..5"
        #[arg(long = "box", allow_hyphen_values = true)]
        search_box: Option<String>,
        /// table3 or table4
        #[arg(long)]
        reproduce: Option<String>,
    },
    /// strip a polynomial factor c(n) shared by a and b
    Deflate {
        #[command(flatten)]
        target: Target,
    },
    /// reduced recursion for a conjectured GCD form, integrality test and fast evaluation
    Reduce {
        #[command(flatten)]
        target: Target,
        /// GCD form, e.g. "n!/2^n" or "(2n+1)!!*2^n/LCM[2n]"
        #[arg(long)]
        gcd: Option<String>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// include wall-clock timings in the benchmark rows
        #[arg(long)]
        timings: bool,
    },
    /// reproduce a table: table1, table3, table4, table5 or ln2
    Report {
        #[arg(long)]
        reproduce: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

fn build(cli: Cli) -> RunConfig {
    let c = &cli.common;
    let kind = match &cli.command {
        Cmd::Eval { .. } => CommandKind::Eval,
        Cmd::Analyze { .. } => CommandKind::Analyze,
        Cmd::Search { .. } => CommandKind::Search,
        Cmd::Deflate { .. } => CommandKind::Deflate,
        Cmd::Reduce { .. } => CommandKind::Reduce,
        Cmd::Report { .. } => CommandKind::Report,
    };
    let mut rc = RunConfig::new(kind);
    rc.precision_bits = c.precision;
    rc.format = c.format.map(|f| match f {
        Format::Json => OutputFormat::Json,
        Format::Csv => OutputFormat::Csv,
    });
    rc.output = c.output.clone();
    rc.seed = c.seed;
    rc.threads = c.threads;
    rc.thresholds = FrThresholds { rho_fr: c.rho_fr, rho_no_fr: c.rho_no_fr, stable_tol: c.stable_tol };
    let set_target = |t: Target, rc: &mut RunConfig| {
        rc.a = t.a;
        rc.b = t.b;
        rc.entry = t.entry;
        rc.depth = t.depth;
    };
    match cli.command {
        Cmd::Eval { target, reference } | Cmd::Analyze { target, reference } => {
            set_target(target, &mut rc);
            rc.reference = reference;
        }
        Cmd::Search { target, search_box, reproduce } => {
            set_target(target, &mut rc);
            rc.search_box = search_box;
            rc.reproduce = reproduce;
        }
        Cmd::Deflate { target } => set_target(target, &mut rc),
        Cmd::Reduce { target, gcd, trials, timings } => {
            set_target(target, &mut rc);
            rc.gcd = gcd;
            rc.trials = trials;
            rc.timings = timings;
        }
        Cmd::Report { reproduce, depth, trials } => {
            rc.reproduce = Some(reproduce);
            rc.depth = depth;
            rc.trials = trials;
        }
    }
    rc
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config_path = cli.common.config.clone();
    let save_path = cli.common.save_config.clone();
    let config = match config_path {
        Some(p) => match std::fs::read_to_string(&p).map(|t| serde_json::from_str::<RunConfig>(&t)) {
            Ok(Ok(c)) => c,
            Ok(Err(e)) => {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
            Err(e) => {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
        None => build(cli),
    };
    if let Some(p) = save_path {
        let text = serde_json::to_string_pretty(&config).expect("config serializes");
        if let Err(e) = std::fs::write(&p, text + "\n") {
            eprintln!("error: {}: {e}", p.display());
            return ExitCode::from(2);
        }
    }
    match cli::run_to_sink(&config) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", out.body);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                cli::CliError::Usage(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
