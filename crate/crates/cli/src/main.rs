use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mimocc::report::{checks_sheet, comparison_sheet, grid_sheet, to_json, PRESETS};
use mimocc::schedule::combined_dof;
use mimocc::{
    analytics::{exact_string, render_dof},
    build_grouping_schedule, build_min_g_schedule, build_phantom_schedule, compare, run_preset,
    solve_phantom, validate_schedule, CombinerPolicy, Error, OutputFormat, PhantomParams,
    RemovalPolicy, Scenario, Schedule, ScheduleOptions, SystemConfig, VerifyOptions,
};

const EXIT_VALIDATION: u8 = 1;
const EXIT_FEASIBILITY: u8 = 2;
const EXIT_GOLDEN: u8 = 3;
const EXIT_VERIFICATION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "mimocc",
    version,
    about = "Coded-caching DoF, schedules and decodability checks for asymmetric MIMO downlinks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare the DoF of the min-G, grouping and phantom schemes.
    Dof(DofArgs),
    /// Recompute a reference table and diff it against the embedded values.
    Tables(TablesArgs),
    /// Build a full delivery schedule and validate it.
    Schedule(ScheduleArgs),
    /// Check a schedule for linear decodability on random channels.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    MinG,
    Grouping,
    Phantom,
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    scenario: PathBuf,
    /// Explicit phantom virtual antenna count.
    #[arg(long)]
    ghat: Option<usize>,
    /// Explicit phantom Ω̂.
    #[arg(long)]
    omega: Option<usize>,
    /// Explicit phantom β̂.
    #[arg(long)]
    beta: Option<usize>,
    /// table, csv or json.
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Write the main output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DofArgs {
    #[command(flatten)]
    common: Common,
    /// Also print the phantom grid for `--ghat` (default: the largest antenna count).
    #[arg(long)]
    grid: bool,
    #[arg(long)]
    omega_min: Option<usize>,
    #[arg(long)]
    omega_max: Option<usize>,
}

#[derive(Args)]
struct TablesArgs {
    /// table1a, table1b, table1c or table2.
    preset: String,
    #[arg(long)]
    format: Option<OutputFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScheduleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    scheme: Scheme,
    /// drop-last or random.
    #[arg(long)]
    policy: Option<RemovalPolicy>,
    /// Seed for the random removal policy.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = mimocc::schedule::DEFAULT_MAX_USERS)]
    max_users: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    scheme: Scheme,
    /// Channel seeds: a list `1,2,5` or an inclusive range `1..10` (default 1..10).
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    policy: Option<RemovalPolicy>,
    /// leading-singular or random-orthonormal.
    #[arg(long, default_value = "leading-singular")]
    combiner: CombinerPolicy,
    #[arg(long, default_value_t = mimocc::schedule::DEFAULT_MAX_USERS)]
    max_users: usize,
}

enum Failure {
    Core(Error),
    Usage(String),
    Golden(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

impl Failure {
    fn exit(&self) -> u8 {
        match self {
            Failure::Core(Error::Infeasible(_) | Error::Feasibility { .. }) => EXIT_FEASIBILITY,
            Failure::Core(_) | Failure::Usage(_) => EXIT_VALIDATION,
            Failure::Golden(_) => EXIT_GOLDEN,
            Failure::Verification(_) => EXIT_VERIFICATION,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Usage(m) | Failure::Golden(m) | Failure::Verification(m) => f.write_str(m),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dof(a) => cmd_dof(a),
        Command::Tables(a) => cmd_tables(a),
        Command::Schedule(a) => cmd_schedule(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit())
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load(common: &Common) -> Result<Scenario, Failure> {
    let text = fs::read_to_string(&common.scenario)
        .map_err(|e| Failure::Usage(format!("{}: {e}", common.scenario.display())))?;
    let mut sc = Scenario::parse(&text)?;
    match (common.ghat, common.omega, common.beta) {
        (Some(hat_g), Some(omega), Some(beta)) => {
            sc.phantom = Some(PhantomParams { hat_g, omega, beta })
        }
        (None, None, None) => {}
        _ => {
            return Err(Failure::Usage(
                "--ghat, --omega and --beta must be given together".into(),
            ))
        }
    }
    if common.format.is_some() {
        sc.format = common.format;
    }
    Ok(sc)
}

fn cmd_dof(a: DofArgs) -> CmdResult {
    let sc = load(&a.common)?;
    let format = sc.format.unwrap_or_default();
    let row = compare(&sc.config, &sc.label(), sc.phantom)?;
    let mut text = match format {
        OutputFormat::Json => to_json(&row),
        f => comparison_sheet(std::slice::from_ref(&row)).render(f),
    };
    if a.grid {
        let cfg = &sc.config;
        let t = cfg.cache_gain().expect("validated");
        let hat_g = a
            .common
            .ghat
            .unwrap_or_else(|| cfg.groups.last().expect("validated").rx_antennas);
        let lo = a.omega_min.unwrap_or(t + 1).max(t + 1);
        let hi = a.omega_max.unwrap_or(lo + 9).min(cfg.num_users());
        if lo > hi {
            return Err(Failure::Usage(format!("empty Ω̂ range {lo}..={hi}")));
        }
        text.push('\n');
        text.push_str(&grid_sheet(cfg, hat_g, lo..=hi)?.render(format));
    }
    emit(a.common.out.as_deref(), &text)
}

fn cmd_tables(a: TablesArgs) -> CmdResult {
    if !PRESETS.contains(&a.preset.as_str()) {
        return Err(Failure::Usage(format!(
            "unknown preset {:?} (expected one of {})",
            a.preset,
            PRESETS.join(", ")
        )));
    }
    let report = run_preset(&a.preset)?;
    let format = a.format.unwrap_or_default();
    let text = match format {
        OutputFormat::Json => to_json(&report),
        f => format!(
            "{}\n{}",
            report.sheet.render(f),
            checks_sheet(&report).render(f)
        ),
    };
    emit(a.out.as_deref(), &text)?;
    let bad = report.mismatches();
    if bad.is_empty() {
        Ok(())
    } else {
        let list: Vec<String> = bad
            .iter()
            .map(|c| {
                format!(
                    "{}: expected {}, computed {}",
                    c.cell, c.expected, c.computed
                )
            })
            .collect();
        Err(Failure::Golden(format!(
            "{} cell(s) differ from the reference:\n  {}",
            bad.len(),
            list.join("\n  ")
        )))
    }
}

fn phantom_params(sc: &Scenario) -> Result<PhantomParams, Failure> {
    if let Some(p) = sc.phantom {
        return Ok(p);
    }
    let best = solve_phantom(&sc.config)?.best;
    Ok(PhantomParams {
        hat_g: best.hat_g,
        omega: best.omega,
        beta: best.beta,
    })
}

fn build(
    cfg: &SystemConfig,
    sc: &Scenario,
    scheme: Scheme,
    policy: RemovalPolicy,
    seed: u64,
    max_users: usize,
) -> Result<Vec<Schedule>, Failure> {
    let opts = ScheduleOptions {
        max_users,
        ..Default::default()
    };
    Ok(match scheme {
        Scheme::MinG => vec![build_min_g_schedule(cfg, &opts)?],
        Scheme::Grouping => build_grouping_schedule(cfg, &opts)?,
        Scheme::Phantom => {
            let p = phantom_params(sc)?;
            vec![build_phantom_schedule(
                cfg, p.hat_g, p.omega, p.beta, policy, seed, &opts,
            )?]
        }
    })
}

fn cmd_schedule(a: ScheduleArgs) -> CmdResult {
    let sc = load(&a.common)?;
    let cfg = &sc.config;
    let policy = a.policy.unwrap_or(sc.policy);
    let schedules = build(cfg, &sc, a.scheme, policy, a.seed, a.max_users)?;

    let json = if schedules.len() == 1 {
        schedules[0].to_json() + "\n"
    } else {
        to_json(&schedules)
    };
    emit(a.common.out.as_deref(), &json)?;

    let mut problems = Vec::new();
    for s in &schedules {
        let report = validate_schedule(s, cfg)?;
        let c = &report.counts;
        eprintln!(
            "{}: {} multicast + {} unicast transmissions, {} streams, max repetition {} (bound {}), perfect partition {}, {} violation(s)",
            scheme_label(s),
            c.multicast,
            c.unicast,
            c.streams,
            report.max_repetition,
            report.repetition_bound,
            report.perfect_partition,
            report.violations.len()
        );
        problems.extend(report.violations.iter().map(|v| format!("{v:?}")));
    }
    let dof = combined_dof(&schedules)?;
    eprintln!("realized DoF {} ({})", render_dof(&dof), exact_string(&dof));
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "schedule validation failed:\n  {}",
            problems
                .into_iter()
                .take(20)
                .collect::<Vec<_>>()
                .join("\n  ")
        )))
    }
}

fn scheme_label(s: &Schedule) -> String {
    use mimocc::schedule::SchemeTag::*;
    match &s.plan.scheme {
        Symmetric => "symmetric".into(),
        MinG => "min-g".into(),
        Grouping { group } => format!("grouping, group {group}"),
        Phantom { policy, .. } => format!("phantom ({policy})"),
    }
}

fn parse_seeds(list: &str) -> Result<Vec<u64>, Failure> {
    let bad = || Failure::Usage(format!("invalid seed list {list:?}"));
    if let Some((lo, hi)) = list.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi
            .trim()
            .trim_start_matches('=')
            .parse()
            .map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    list.split(',')
        .map(|s| s.trim().parse().map_err(|_| bad()))
        .collect()
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let sc = load(&a.common)?;
    let cfg = &sc.config;
    let seeds = match &a.seeds {
        Some(s) => parse_seeds(s)?,
        None if !sc.seeds.is_empty() => sc.seeds.clone(),
        None => (1..=10).collect(),
    };
    let policy = a.policy.unwrap_or(sc.policy);
    let schedules = build(cfg, &sc, a.scheme, policy, 0, a.max_users)?;
    let opts = VerifyOptions {
        policy: a.combiner,
        ..Default::default()
    };
    let report = mimocc::verify_schedules(&schedules, cfg, &seeds, &opts)?;

    let summary = format!(
        "seeds {}, transmissions checked {}, decodable {}, pass rate {:.4}, worst residual {:.3e}, worst σ_min {:.3e}, channel redraws {}, failures {}\n",
        seeds.len(),
        report.checked,
        report.decodable,
        report.pass_rate,
        report.worst_residual,
        report.worst_sigma_min,
        report.redraws,
        report.failures.len()
    );
    match sc.format.unwrap_or_default() {
        OutputFormat::Csv => {
            let csv = report.to_csv()?;
            emit(a.common.out.as_deref(), &csv)?;
            eprint!("{summary}");
        }
        OutputFormat::Json => emit(a.common.out.as_deref(), &to_json(&report))?,
        OutputFormat::Table => {
            print!("{summary}");
            if let Some(out) = &a.common.out {
                fs::write(out, report.to_csv()?)?;
            }
        }
    }
    for f in report.failures.iter().take(20) {
        eprintln!("seed {} transmission {}: {}", f.seed, f.tx, f.message);
    }

    if report.passed() {
        return Ok(());
    }
    if report.checked == 0 {
        if let Some(f) = report.failures.first() {
            return Err(Failure::Verification(f.message.clone()));
        }
    }
    Err(Failure::Verification(format!(
        "pass rate {:.4} with {} failed transmission(s)",
        report.pass_rate,
        report.failures.len() + report.checked - report.decodable
    )))
}
