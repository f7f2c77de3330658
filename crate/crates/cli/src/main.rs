//! `uncert`: compute, verify and saturate sum-of-variances uncertainty
//! relations from the command line.
//!
//! Exit codes: 0 success, 1 contract violation, 2 invalid input,
//! 3 degenerate input. Failures print one JSON line
//! `{"error": <kind>, "detail": <text>}` on stderr.

mod problem;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use uncertainty_core::bounds::{BoundReport, MixedBoundReport, PerpSource};
use uncertainty_core::experiments::{
    format_g17, run_figure1, run_saturation, run_verification, write_figure1, CampaignConfig, CampaignReport, Execution,
};
use uncertainty_core::perp::{support_complement, PerpStrategy, SignChoice, SignMode};
use uncertainty_core::{Error, Tolerances};

use problem::Problem;

#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub detail: String,
    pub code: u8,
}

impl CliError {
    pub fn validation(kind: &str, detail: impl Into<String>) -> Self {
        Self { kind: kind.into(), detail: detail.into(), code: 2 }
    }

    pub fn violation(detail: impl Into<String>) -> Self {
        Self { kind: "ContractViolation".into(), detail: detail.into(), code: 1 }
    }

    /// Library error, prefixed with the input it concerns.
    pub fn at(path: &str, e: Error) -> Self {
        let mut err = Self::from(e);
        err.detail = format!("{path}: {}", err.detail);
        err
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_validation() { 2 } else { 3 };
        Self { kind: e.kind().into(), detail: e.to_string(), code }
    }
}

#[derive(Parser)]
#[command(name = "uncert", version, about = "Sum-of-variances uncertainty relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every bound for two observables on a state from a problem file
    Bounds(BoundsArgs),
    /// Spin-1 sweep: curves.csv, eq3_samples.csv and plot.gp
    Figure1(Figure1Args),
    /// Randomized check of every inequality and identity
    Verify(VerifyArgs),
    /// Saturation residuals of the sum bound and the amended product bound
    Saturate(SaturateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    None,
    VaidmanA,
    VaidmanB,
    Prescribed,
    Optimal,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
    Auto,
}

impl From<SignArg> for SignMode {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Plus => SignMode::Fixed(SignChoice::Plus),
            SignArg::Minus => SignMode::Fixed(SignChoice::Minus),
            SignArg::Auto => SignMode::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct BoundsArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    /// Pure state; required unless --mixed is given
    #[arg(long, required_unless_present = "mixed")]
    state: Option<String>,
    /// Named state from the problem file used as |ψ⊥⟩
    #[arg(long, conflicts_with = "perp_strategy")]
    perp: Option<String>,
    #[arg(long, value_enum)]
    perp_strategy: Option<StrategyArg>,
    #[arg(long, value_enum, default_value = "auto")]
    sign: SignArg,
    /// Density matrix from the problem file; evaluates the mixed-state bound
    #[arg(long, conflicts_with = "state")]
    mixed: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Seed for --perp-strategy random
    #[arg(long, env = "UNCERT_SEED", default_value_t = 0)]
    seed: u64,
    /// Allowed amount by which a bound may exceed its left-hand side
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(clap::Args)]
struct Figure1Args {
    #[arg(long, default_value_t = 200)]
    phi_steps: usize,
    #[arg(long, default_value_t = 20)]
    perp_samples: usize,
    #[arg(long, env = "UNCERT_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,8")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, env = "UNCERT_SEED", default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value = "report.json")]
    out: PathBuf,
    /// Run trials on one thread (the report is identical either way)
    #[arg(long)]
    serial: bool,
}

#[derive(clap::Args)]
struct SaturateArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,8")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, env = "UNCERT_SEED", default_value_t = 7)]
    seed: u64,
    /// Largest acceptable |LHS − RHS|
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Also write the flat report here
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    serial: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bounds(args) => cmd_bounds(args),
        Command::Figure1(args) => cmd_figure1(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Saturate(args) => cmd_saturate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind, "detail": e.detail }));
            ExitCode::from(e.code)
        }
    }
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(CliError::validation("InvalidArgument", format!("--tol: {tol} is not a finite nonnegative number")))
    }
}

fn cmd_bounds(args: BoundsArgs) -> Result<(), CliError> {
    check_tol(args.tol)?;
    let problem = Problem::load(&args.problem)?;
    let a = problem.operator(&args.a)?;
    let b = problem.operator(&args.b)?;
    let sign = SignMode::from(args.sign);

    if let Some(name) = &args.mixed {
        let rho = problem.density_matrix(name)?;
        if args.perp_strategy.is_some() {
            return Err(CliError::validation(
                "InvalidArgument",
                "--perp-strategy needs a pure --state; use --perp with --mixed",
            ));
        }
        let perp = match &args.perp {
            Some(p) => problem.state(p)?.clone(),
            None => support_complement(rho, &Tolerances::default())?.remove(0),
        };
        let report = MixedBoundReport::compute(a, b, rho, &perp, sign)?;
        print_mixed(&report, args.format);
        if report.residual < -args.tol {
            return Err(CliError::violation(format!(
                "mixed bound exceeds the sum of variances by {}",
                -report.residual
            )));
        }
        return Ok(());
    }

    let psi = problem.state(args.state.as_deref().expect("clap requires --state without --mixed"))?;
    let source = match (&args.perp, args.perp_strategy) {
        (Some(name), _) => PerpSource::Given(problem.state(name)?.clone()),
        (None, None | Some(StrategyArg::Optimal)) => PerpSource::Optimal,
        (None, Some(StrategyArg::None)) => PerpSource::None,
        (None, Some(StrategyArg::VaidmanA)) => PerpSource::Strategy(PerpStrategy::VaidmanA),
        (None, Some(StrategyArg::VaidmanB)) => PerpSource::Strategy(PerpStrategy::VaidmanB),
        (None, Some(StrategyArg::Prescribed)) => PerpSource::Strategy(PerpStrategy::Prescribed),
        (None, Some(StrategyArg::Random)) => PerpSource::Strategy(PerpStrategy::Random(args.seed)),
    };
    let report = BoundReport::compute(a, b, psi, &source, sign)?;
    print_report(&report, args.format);
    if !report.is_consistent(args.tol) {
        return Err(CliError::violation(format!("a bound exceeds its left-hand side by {}", -report.min_residual())));
    }
    Ok(())
}

fn opt_g17(x: Option<f64>) -> String {
    x.map(format_g17).unwrap_or_default()
}

fn active_name(report: &BoundReport) -> String {
    serde_json::to_value(report.active_bound).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn print_report(report: &BoundReport, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).expect("report serializes")),
        Format::Csv => {
            let mut header = vec![
                "var_a",
                "var_b",
                "sum_of_variances",
                "product_of_variances",
                "commutator_mean",
                "sign",
                "hr",
                "schroedinger",
                "weak_sum",
                "eq3",
                "eq4",
                "eq5",
                "triple_max",
                "amended_hr",
                "active_bound",
            ]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>();
            let mut row = vec![
                format_g17(report.var_a),
                format_g17(report.var_b),
                format_g17(report.sum_of_variances),
                format_g17(report.product_of_variances),
                format_g17(report.commutator_mean),
                report.sign.symbol().to_string(),
                format_g17(report.hr),
                format_g17(report.schroedinger),
                format_g17(report.weak_sum),
                opt_g17(report.eq3),
                format_g17(report.eq4),
                format_g17(report.eq5),
                format_g17(report.triple_max),
                opt_g17(report.amended_hr),
                active_name(report),
            ];
            for (k, v) in &report.residuals {
                header.push(format!("residual_{k}"));
                row.push(format_g17(*v));
            }
            println!("{}", header.join(","));
            println!("{}", row.join(","));
        }
    }
}

fn print_mixed(report: &MixedBoundReport, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).expect("report serializes")),
        Format::Csv => {
            println!("var_a,var_b,sum_of_variances,commutator_mean,sign,bound,residual");
            println!(
                "{},{},{},{},{},{},{}",
                format_g17(report.var_a),
                format_g17(report.var_b),
                format_g17(report.sum_of_variances),
                format_g17(report.commutator_mean),
                report.sign.symbol(),
                format_g17(report.bound),
                format_g17(report.residual)
            );
        }
    }
}

fn cmd_figure1(args: Figure1Args) -> Result<(), CliError> {
    let data = run_figure1(args.phi_steps, args.perp_samples, args.seed)?;
    write_figure1(&data, &args.out_dir, args.phi_steps, args.perp_samples, args.seed)
        .map_err(|e| CliError::validation("Io", format!("{}: {e}", args.out_dir.display())))?;
    let path = |name: &str| args.out_dir.join(name).display().to_string();
    println!(
        "{}",
        json!({
            "curves": path("curves.csv"),
            "samples": path("eq3_samples.csv"),
            "plot": path("plot.gp"),
            "rows": data.rows.len(),
            "sample_rows": data.samples.len(),
            "seed": args.seed,
        })
    );
    Ok(())
}

fn campaign_config(dims: Vec<usize>, trials: usize, seed: u64, tol: f64) -> Result<CampaignConfig, CliError> {
    check_tol(tol)?;
    let max_dim = Tolerances::default().max_dim;
    if dims.is_empty() {
        return Err(CliError::validation("InvalidArgument", "--dims: empty list"));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2 || d > max_dim) {
        return Err(CliError::validation("InvalidDimension", format!("--dims: {d} not in 2..={max_dim}")));
    }
    Ok(CampaignConfig { dims, trials, seed, tol })
}

fn execution(serial: bool) -> Execution {
    if serial {
        Execution::Serial
    } else {
        Execution::Parallel
    }
}

fn write_report(report: &CampaignReport, path: &PathBuf) -> Result<(), CliError> {
    std::fs::write(path, report.to_json_string())
        .map_err(|e| CliError::validation("Io", format!("{}: {e}", path.display())))
}

fn summary(report: &CampaignReport) -> serde_json::Value {
    let checks: serde_json::Map<String, serde_json::Value> = report
        .checks
        .iter()
        .map(|c| (c.name.clone(), json!({ "trials": c.trials, "passes": c.passes, "max_violation": c.max_violation })))
        .collect();
    json!({
        "campaign": report.campaign,
        "total_violations": report.total_violations(),
        "skipped": report.skipped,
        "checks": checks,
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let cfg = campaign_config(args.dims, args.trials, args.seed, args.tol)?;
    let report = run_verification(&cfg, execution(args.serial));
    write_report(&report, &args.out)?;
    println!("{}", summary(&report));
    match report.total_violations() {
        0 => Ok(()),
        n => Err(CliError::violation(format!("{n} violations, see {}", args.out.display()))),
    }
}

fn cmd_saturate(args: SaturateArgs) -> Result<(), CliError> {
    let cfg = campaign_config(args.dims, args.trials, args.seed, args.tol)?;
    let report = run_saturation(&cfg, execution(args.serial));
    if let Some(out) = &args.out {
        write_report(&report, out)?;
    }
    println!("{}", summary(&report));
    match report.total_violations() {
        0 => Ok(()),
        n => Err(CliError::violation(format!("{n} saturation residuals above {}", cfg.tol))),
    }
}
