use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use pdi_core::stats::{generate_synthetic, permutation_test, Engine, Interaction, SyntheticKind};
use pdi_core::verify::{run_suite, ResidualReport, Suite};
use pdi_core::{Dataset, TestConfig, TestReport};

use crate::input::{load_csv, ColumnBlocks};
use crate::report::{test_report_json, verify_report_json};
use crate::spec_file::load_kernel;
use crate::{CliError, CliResult};

/// Parameters of `pdi test`.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub blocks: Option<ColumnBlocks>,
    /// `preset:<name>` or a kernel spec path.
    pub kernel: String,
    /// Interaction order; defaults to the kernel order, or `n` for presets.
    pub k: Option<usize>,
    pub interaction: Interaction,
    pub permutations: usize,
    pub seed: u64,
    pub engine: Engine,
    pub out: Option<PathBuf>,
}

fn write_out(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Load the data and kernel, run the permutation test and emit the report.
pub fn run_test(cfg: &RunConfig) -> CliResult<TestReport> {
    let data = load_csv(&cfg.input, cfg.blocks.as_ref())?;
    let kernel = load_kernel(&cfg.kernel, data.n(), cfg.k)?;
    let k = cfg.k.unwrap_or(kernel.order());
    let test = TestConfig {
        order: k,
        interaction: cfg.interaction,
        kernel,
        permutations: cfg.permutations,
        seed: cfg.seed,
        engine: cfg.engine,
    };
    let report = permutation_test(&test, &data)?;
    write_out(cfg.out.as_deref(), &test_report_json(&report))?;
    Ok(report)
}

/// Parameters of `pdi verify`.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub extended: bool,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub reports: Vec<ResidualReport>,
    pub table: String,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(ResidualReport::passed)
    }
}

/// Run a verification suite; the table goes to stdout and the JSON document
/// to `out` when given.
pub fn run_verify(cfg: &VerifyConfig) -> CliResult<VerifyOutcome> {
    let suite: Suite = cfg.suite.parse()?;
    let start = Instant::now();
    let reports = run_suite(suite, cfg.seed, cfg.trials, cfg.extended)?;
    let elapsed = start.elapsed().as_millis() as u64;
    let mut table = String::new();
    for r in &reports {
        writeln!(table, "{r}").expect("write to string");
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    writeln!(table, "{} checks, {failed} failed", reports.len()).expect("write to string");
    if let Some(path) = &cfg.out {
        let json = verify_report_json(&cfg.suite, cfg.seed, cfg.trials, cfg.extended, &reports, elapsed);
        write_out(Some(path), &json)?;
    }
    Ok(VerifyOutcome { reports, table })
}

/// Parameters of `pdi gen`.
#[derive(Debug, Clone)]
pub struct GenConfig {
    pub kind: String,
    /// Number of components for `independent` and `common_factor`.
    pub n: Option<usize>,
    /// Block sizes for `decomposable`.
    pub blocks: Option<Vec<usize>>,
    /// Loading of `decomposable` and `common_factor`.
    pub rho: Option<f64>,
    pub n_samples: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

fn synthetic_kind(cfg: &GenConfig) -> CliResult<SyntheticKind> {
    let rho = cfg.rho.unwrap_or(0.5);
    let n = cfg.n.unwrap_or(2);
    let extra = |flag: &str, set: bool| {
        if set {
            Err(CliError::usage(format!("--{flag} is not used by kind '{}'", cfg.kind)))
        } else {
            Ok(())
        }
    };
    Ok(match cfg.kind.as_str() {
        "independent" => {
            extra("blocks", cfg.blocks.is_some())?;
            extra("rho", cfg.rho.is_some())?;
            SyntheticKind::Independent { n }
        }
        "xor_triple" => {
            extra("n", cfg.n.is_some())?;
            extra("blocks", cfg.blocks.is_some())?;
            extra("rho", cfg.rho.is_some())?;
            SyntheticKind::XorTriple
        }
        "decomposable" => {
            extra("n", cfg.n.is_some())?;
            SyntheticKind::Decomposable { blocks: cfg.blocks.clone().unwrap_or_else(|| vec![2, 1]), rho }
        }
        "common_factor" => {
            extra("blocks", cfg.blocks.is_some())?;
            SyntheticKind::CommonFactor { n, loading: rho }
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown kind '{other}' (expected independent, xor_triple, decomposable, common_factor)"
            )))
        }
    })
}

fn csv_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 9.0e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:.16e}")
    }
}

/// CSV text with header `f<i>_<j>` for factor `i`, coordinate `j`.
pub fn dataset_csv(data: &Dataset) -> String {
    let mut header = Vec::new();
    for (i, &d) in data.signature().dims().iter().enumerate() {
        for j in 0..d {
            header.push(format!("f{i}_{j}"));
        }
    }
    let mut out = header.join(",");
    out.push('\n');
    for s in data.samples() {
        let row: Vec<String> = s.components().iter().flatten().map(|&v| csv_number(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Generate a synthetic dataset and write it as CSV.
pub fn run_gen(cfg: &GenConfig) -> CliResult<Dataset> {
    let kind = synthetic_kind(cfg)?;
    let data = generate_synthetic(&kind, cfg.n_samples, cfg.seed)?;
    write_out(cfg.out.as_deref(), &dataset_csv(&data))?;
    Ok(data)
}
