use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pdi_cli::{
    configure_threads, run_gen, run_test, run_verify, CliError, CliResult, ColumnBlocks, GenConfig, RunConfig,
    VerifyConfig, EXIT_VERIFY_FAILED,
};
use pdi_core::stats::{Engine, Interaction};

/// Kernel interaction tests of order k on product spaces.
#[derive(Debug, Parser)]
#[command(name = "pdi", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Permutation test on a CSV dataset.
    Test {
        /// Headed numeric CSV file.
        #[arg(long)]
        input: PathBuf,
        /// Column counts per factor, e.g. 2,3 (default: one column each).
        #[arg(long)]
        blocks: Option<String>,
        /// `preset:<name>` or a kernel spec file.
        #[arg(long)]
        kernel: String,
        /// Interaction order (default: kernel order, or n for presets).
        #[arg(long)]
        k: Option<usize>,
        /// lancaster or streitberg.
        #[arg(long, default_value = "lancaster")]
        interaction: String,
        /// Number of permutations; 0 reports the statistic only.
        #[arg(long, default_value_t = 0)]
        perms: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// naive, fast or auto.
        #[arg(long, default_value = "auto")]
        engine: String,
        /// Report path (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numeric checks of identities and inequalities.
    Verify {
        /// all, psd, appendix, inequalities, kme or kronecker.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Include the n = 5 order two expansion.
        #[arg(long)]
        extended: bool,
        /// JSON report path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a synthetic dataset as CSV.
    Gen {
        /// independent, xor_triple, decomposable or common_factor.
        #[arg(long)]
        kind: String,
        /// Components of independent and common_factor data.
        #[arg(long)]
        n: Option<usize>,
        /// Block sizes of decomposable data, e.g. 2,1.
        #[arg(long)]
        blocks: Option<String>,
        /// Loading of decomposable and common_factor data.
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        n_samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV path (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_sizes(s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(|w| w.trim().parse().map_err(|_| CliError::usage(format!("invalid size '{w}' in '{s}'"))))
        .collect()
}

fn dispatch(cli: Cli) -> CliResult<i32> {
    configure_threads()?;
    match cli.command {
        Command::Test { input, blocks, kernel, k, interaction, perms, seed, engine, out } => {
            let cfg = RunConfig {
                input,
                blocks: blocks.as_deref().map(str::parse::<ColumnBlocks>).transpose()?,
                kernel,
                k,
                interaction: interaction.parse::<Interaction>()?,
                permutations: perms,
                seed,
                engine: engine.parse::<Engine>()?,
                out,
            };
            run_test(&cfg)?;
            Ok(0)
        }
        Command::Verify { suite, seed, trials, extended, out } => {
            let outcome = run_verify(&VerifyConfig { suite, seed, trials, extended, out })?;
            print!("{}", outcome.table);
            Ok(if outcome.passed() { 0 } else { EXIT_VERIFY_FAILED })
        }
        Command::Gen { kind, n, blocks, rho, n_samples, seed, out } => {
            let blocks = blocks.as_deref().map(parse_sizes).transpose()?;
            run_gen(&GenConfig { kind, n, blocks, rho, n_samples, seed, out })?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("pdi: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
