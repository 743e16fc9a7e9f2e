use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chowkit::suite::{self, SuiteOptions};
use chowkit::{parse, run, RunOptions};
use chowkit_core::fforacle::{self, from_text, OracleConfig};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "chowkit", version, about = "Exact intersection theory on projective towers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run the built-in verification suite.
    CheckPaper {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Fano threefold data file replacing the bundled table.
        #[arg(long)]
        tables: Option<PathBuf>,
        #[arg(long, default_value_t = fforacle::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Evaluate a script.
    Eval {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Default prime for `ffcheck` statements without `p=`.
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, default_value_t = fforacle::DEFAULT_BUDGET)]
        budget: u64,
        /// Treat uncertified h0 values as failures.
        #[arg(long)]
        strict: bool,
    },
    /// Print a script in canonical form.
    Fmt { file: PathBuf },
    /// Count points of a morphism instance over its prime field.
    Ffcount {
        instance: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Jacobian samples per locus.
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = fforacle::DEFAULT_BUDGET)]
        budget: u64,
    },
}

/// Writes to stdout, treating a closed pipe (e.g. `| head`) as success.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn read(path: &Path) -> Result<String, ExitCode> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_USAGE)
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(code) | Err(code) => code,
    }
}

fn execute(command: Command) -> Result<ExitCode, ExitCode> {
    match command {
        Command::CheckPaper { seed, format, tables, budget } => {
            if let Some(t) = &tables {
                if !t.is_file() {
                    eprintln!("error: table file {} not found", t.display());
                    return Err(ExitCode::from(EXIT_USAGE));
                }
            }
            let opts = SuiteOptions { seed, budget, ..SuiteOptions::default() };
            let report = suite::run_suite(&opts, tables.as_deref());
            match format {
                Format::Json => emit(&(serde_json::to_string_pretty(&report).expect("report serializes") + "\n")),
                Format::Text => emit(&report.to_text()),
            }
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAIL) })
        }
        Command::Eval { file, format, seed, p, budget, strict } => {
            let text = read(&file)?;
            let script = parse(&text).map_err(|e| {
                eprintln!("{}:{e}", file.display());
                ExitCode::from(EXIT_USAGE)
            })?;
            let report = run(&script, &RunOptions { seed, p, budget, strict }).map_err(|e| {
                eprintln!("{}: {e}", file.display());
                ExitCode::from(EXIT_FAIL)
            })?;
            match format {
                Format::Json => emit(&(report.to_json() + "\n")),
                Format::Text => emit(&report.to_text()),
            }
            Ok(if report.failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAIL) })
        }
        Command::Fmt { file } => {
            let text = read(&file)?;
            let script = parse(&text).map_err(|e| {
                eprintln!("{}:{e}", file.display());
                ExitCode::from(EXIT_USAGE)
            })?;
            emit(&script.to_string());
            Ok(ExitCode::SUCCESS)
        }
        Command::Ffcount { instance, seed, trials, budget } => {
            let text = read(&instance)?;
            let m = from_text(&text).map_err(|e| {
                eprintln!("{}: {e}", instance.display());
                ExitCode::from(EXIT_USAGE)
            })?;
            let cfg = OracleConfig { jacobian_trials: trials, budget, ..OracleConfig::default() };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let fail = |e: fforacle::OracleError| {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_FAIL)
            };
            let r = fforacle::analyze(&m, seed, 0, &mut rng, &cfg).map_err(fail)?;
            let out = json!({
                "schema": chowkit::report::SCHEMA_VERSION,
                "seed": seed,
                "report": r,
                "generic": r.generic(),
            });
            emit(&(serde_json::to_string_pretty(&out).expect("report serializes") + "\n"));
            let identities = r.stratified_identity && r.y_direct == r.y_fibers && (!r.blowup.applicable || r.blowup.holds);
            Ok(if identities { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAIL) })
        }
    }
}
