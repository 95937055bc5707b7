//! `wmds`: compute and check prime-power parts of Weyl group multiple Dirichlet series.
//!
//! Exit status: 0 on success, 1 when a gated check fails, 2 on a usage or
//! configuration error, 3 when a computation fails.

mod config;
mod error;
mod output;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};
use serde_json::json;
use wmds_core::global_ff::DEFAULT_Z_DEGREE_BOUND;
use wmds_core::{
    assemble_z, h_table, ActionParams, FFContext, HEvaluator, NumericGammaContext, SymbolicContext,
    DEFAULT_WEYL_BUDGET,
};

use config::{check_ell, load_system, parse_ell, parse_twist, Budgets, Format, OutputTarget, RunConfig, ScalarMode};
use error::CliError;
use suites::{Suite, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "wmds", version, about = "Prime-power parts of Weyl group multiple Dirichlet series")]
struct Cli {
    /// Largest Weyl group order any command may enumerate.
    #[arg(long, global = true, env = "WMDS_MAX_WEYL_ORDER", default_value_t = DEFAULT_WEYL_BUDGET)]
    max_weyl_order: u64,

    /// Largest total degree a truncated series may reach.
    #[arg(long, global = true, env = "WMDS_MAX_SERIES_DEGREE", default_value_t = DEFAULT_Z_DEGREE_BOUND)]
    max_series_degree: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coefficient table of the numerator N(x; ℓ) = h(x; ℓ)·D(x).
    ComputeN(ComputeArgs),
    /// Run verification suites and write a JSON report.
    Verify(VerifyArgs),
    /// Truncated global series over F_q(t).
    Zseries(ZseriesArgs),
}

#[derive(Debug, Args)]
struct SystemArgs {
    /// Root system code such as A2, B3, G2 or A1xA1.
    #[arg(long = "type", value_name = "CODE")]
    system: Option<String>,

    /// Degree of the cover.
    #[arg(long)]
    n: u32,

    /// Twisting parameters, comma separated (defaults to all zero).
    #[arg(long, value_name = "L1,L2,...")]
    ell: Option<String>,

    /// Field size; switches to numeric Gauss sums over F_q.
    #[arg(long)]
    q: Option<u32>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format; inferred from the extension of --out when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct ComputeArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Suites to run, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    suite: Vec<Suite>,

    #[command(flatten)]
    system: SystemArgs,

    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Random instances per check (suite-specific default when omitted).
    #[arg(long)]
    samples: Option<usize>,

    /// Also run the advisory self-similarity probe; never affects the exit status.
    #[arg(long)]
    probe: bool,

    /// Total degree used by the probe.
    #[arg(long, default_value_t = 4)]
    probe_degree: u32,

    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ZseriesArgs {
    #[arg(long = "type", value_name = "CODE")]
    system: String,

    #[arg(long)]
    n: u32,

    #[arg(long)]
    q: u32,

    /// Monic twist polynomials in t, comma separated, e.g. "1,t+2".
    #[arg(long)]
    twist: Option<String>,

    /// Largest total degree Σ deg c_i.
    #[arg(long)]
    maxdeg: u32,

    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budgets = Budgets {
        max_weyl_order: cli.max_weyl_order,
        max_series_degree: cli.max_series_degree,
    };
    let result = match cli.command {
        Command::ComputeN(args) => compute_n(args, budgets),
        Command::Verify(args) => verify(args, budgets),
        Command::Zseries(args) => zseries(args, budgets),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => Cli::command().error(ErrorKind::ValueValidation, msg).exit(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn run_config(sys: &SystemArgs, seed: Option<u64>, budgets: Budgets, output: OutputTarget) -> Result<RunConfig, CliError> {
    let system = sys
        .system
        .as_deref()
        .map(|code| load_system(code, sys.n, &budgets))
        .transpose()?;
    let ell = match (&sys.ell, &system) {
        (None, _) => None,
        (Some(s), Some(rs)) => Some(check_ell(&parse_ell(s)?, rs)?),
        (Some(_), None) => return Err(CliError::Usage("--ell needs --type".into())),
    };
    if let Some(q) = sys.q {
        NumericGammaContext::new(q, sys.n).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(RunConfig {
        system,
        n: sys.n,
        ell,
        mode: ScalarMode::from_q(sys.q),
        seed,
        budgets,
        output,
    })
}

fn compute_n(args: ComputeArgs, budgets: Budgets) -> Result<bool, CliError> {
    let output = OutputTarget::new(args.output.out, args.output.format);
    let cfg = run_config(&args.system, None, budgets, output)?;
    let rs = cfg.system()?.clone();
    let (terms, polynomial, csv) = match cfg.mode {
        ScalarMode::Symbolic => {
            let p = ActionParams::new(rs, cfg.ell(), SymbolicContext::new(cfg.n)?)?;
            let table = h_table(&p, budgets.max_weyl_order)?;
            (table.coeffs.to_json(cfg.n), table.coeffs.to_string(), table.to_csv())
        }
        ScalarMode::Numeric { q } => {
            let p = ActionParams::new(rs, cfg.ell(), NumericGammaContext::new(q, cfg.n)?)?;
            let table = h_table(&p, budgets.max_weyl_order)?;
            (table.coeffs.to_json(cfg.n), table.coeffs.to_string(), table.to_csv())
        }
    };
    let mut doc = cfg.metadata();
    doc["kind"] = json!("numerator");
    doc["polynomial"] = json!(polynomial);
    doc["terms"] = terms;
    output::emit(&cfg.output, &doc, || csv)?;
    Ok(true)
}

fn verify(args: VerifyArgs, budgets: Budgets) -> Result<bool, CliError> {
    let output = OutputTarget::new(args.out, Some(Format::Json));
    let cfg = run_config(&args.system, Some(args.seed), budgets, output)?;
    let opts = VerifyOptions {
        samples: args.samples,
        probe_degree: args.probe_degree,
    };
    let mut requested = args.suite.clone();
    requested.sort();
    requested.dedup();
    let outcomes = requested
        .iter()
        .map(|&suite| suites::run_suite(suite, &cfg, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let pass = outcomes.iter().all(|o| o.pass);
    let advisory = if args.probe { vec![suites::probe(&cfg, &opts)] } else { Vec::new() };
    let mut doc = cfg.metadata();
    doc["kind"] = json!("verification");
    doc["suites"] = serde_json::to_value(&outcomes).expect("outcomes serialize");
    doc["advisory"] = json!(advisory);
    doc["pass"] = json!(pass);
    output::emit(&cfg.output, &doc, String::new)?;
    Ok(pass)
}

fn zseries(args: ZseriesArgs, budgets: Budgets) -> Result<bool, CliError> {
    if args.maxdeg > budgets.max_series_degree {
        return Err(CliError::Usage(format!(
            "--maxdeg {} exceeds the series degree budget {} (raise WMDS_MAX_SERIES_DEGREE)",
            args.maxdeg, budgets.max_series_degree
        )));
    }
    let rs = load_system(&args.system, args.n, &budgets)?;
    let ctx = FFContext::new(args.q, args.n)
        .map_err(|e| CliError::Usage(e.to_string()))?
        .with_bounds(wmds_core::global_ff::DEFAULT_GAUSS_DEGREE_BOUND, budgets.max_series_degree);
    let twist = parse_twist(args.twist.as_deref().unwrap_or(&vec!["1"; rs.rank()].join(",")), rs.rank(), ctx.field())?;
    let eval = HEvaluator::new(&ctx, rs)?;
    let z = assemble_z(&eval, &twist, args.maxdeg)?;
    let output = OutputTarget::new(args.output.out, args.output.format);
    let mut doc = z.to_json();
    doc["params"]["tool"] = json!("wmds");
    doc["params"]["version"] = json!(env!("CARGO_PKG_VERSION"));
    output::emit(&output, &doc, || z.to_csv())?;
    Ok(true)
}
