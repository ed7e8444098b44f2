//! `lotcycle`: evaluate, optimize, trade off, sweep, and simulate a
//! two-depot remanufacturing lot-sizing system from TOML scenario files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lotcycle::{
    build_trace, check_feasibility, compute_front, endpoint_reduction, inventory_cost,
    parallel_flow_cost, payoff_ranges, refine, run_sweep, simulated_cost, solve_model1,
    solve_model2, waste_cost, FlowVariant, FrontError, Model, ModelError, Normalization,
    ParetoFront, ScalarizationMethod, Solution, SolveError,
};
use lotcycle_cli::report;
use lotcycle_cli::scenario::{self, NormalizationMode, Scenario, ScenarioError};

#[derive(Parser)]
#[command(
    name = "lotcycle",
    version,
    about = "Lot sizing for a two-depot remanufacturing loop",
    long_about = "Evaluates, optimizes, and explores a reverse-logistics inventory system in \
                  which new-item procurement and returned-item repair share one cyclic \
                  schedule. Scenarios are TOML files; see the repository README for the schema."
)]
struct Cli {
    /// Override the scenario's solver seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap the worker-thread count (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Override the scenario's solver convergence tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write full-precision artifacts into this directory.
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Feasible-value-constraint scalarization.
    Fvc,
    /// Goal-attainment (Pascoletti–Serafini) scalarization.
    Ps,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    /// Repaired-item demand served after the procurement phase.
    Serial,
    /// Both demand streams served from the start of the cycle.
    Parallel,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the scenario's explicit [decision] against the closed form.
    Evaluate { scenario: PathBuf },
    /// Optimize batches and cycle counts (and the recovery rate when free).
    Solve { scenario: PathBuf },
    /// Trace the Pareto front between inventory cost and waste cost.
    Pareto {
        scenario: PathBuf,
        /// Scalarization method (overrides the scenario's [moo] table).
        #[arg(long)]
        method: Option<MethodArg>,
        /// Weight-grid size (overrides the scenario's [moo] table).
        #[arg(long)]
        grid: Option<u32>,
    },
    /// Re-solve the scenario across the [sweep] table's parameter values.
    Sweep { scenario: PathBuf },
    /// Simulate one cycle's stock trajectory and compare with the closed form.
    Simulate {
        scenario: PathBuf,
        /// Flow variant to trace.
        #[arg(long, value_enum, default_value_t = VariantArg::Serial)]
        variant: VariantArg,
        /// Halve the exported trace's epoch spacing this many times.
        #[arg(long, default_value_t = 0)]
        refine: u32,
    },
}

/// Anything that can end a run, mapped onto the documented exit codes:
/// 2 = scenario/config validation, 3 = empty feasible region, 4 = solver
/// failure at runtime.
#[derive(Debug)]
enum CliError {
    Scenario(ScenarioError),
    Model(ModelError),
    Solve(SolveError),
    Front(FrontError),
    Artifact(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Scenario(e) => write!(f, "{e}"),
            Self::Model(e) => write!(f, "invalid scenario: {e}"),
            Self::Solve(e) => write!(f, "{e}"),
            Self::Front(e) => write!(f, "{e}"),
            Self::Artifact(e) => write!(f, "cannot write artifact: {e}"),
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        Self::Scenario(e)
    }
}
impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        Self::Model(e)
    }
}
impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        Self::Solve(e)
    }
}
impl From<FrontError> for CliError {
    fn from(e: FrontError) -> Self {
        Self::Front(e)
    }
}
impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Artifact(e)
    }
}

fn solve_exit_code(e: &SolveError) -> u8 {
    match e {
        SolveError::Model(_) | SolveError::InvalidConfig { .. } => 2,
        SolveError::EmptyFeasibleRegion { .. } => 3,
        SolveError::BoundsTooTight { .. } => 4,
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Scenario(_) | Self::Model(_) => 2,
            Self::Solve(e) => solve_exit_code(e),
            Self::Front(e) => match e {
                FrontError::Solve(inner) => solve_exit_code(inner),
                FrontError::InvalidUtopia { .. } => 2,
                FrontError::CouplingUnattainable { .. } | FrontError::InfeasibleCut { .. } => 4,
            },
            Self::Artifact(_) => 4,
        }
    }
}

/// Restores the default SIGPIPE disposition so piping into `head` & co. ends
/// the process quietly instead of panicking on the closed stream.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // Ignore "already initialized": only the first configuration wins,
        // and results do not depend on the worker count.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Loads the scenario and applies the global flag overrides.
fn load_scenario(cli: &Cli, path: &Path) -> Result<Scenario, CliError> {
    let mut scenario = scenario::load(path)?;
    if let Some(seed) = cli.seed {
        scenario.solver.seed = seed;
    }
    if let Some(tol) = cli.tol {
        scenario.solver.tol = tol;
        scenario.solver.validate().map_err(CliError::Solve)?;
    }
    Ok(scenario)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Evaluate { scenario: path } => evaluate(cli, path),
        Command::Solve { scenario: path } => solve(cli, path),
        Command::Pareto {
            scenario: path,
            method,
            grid,
        } => pareto(cli, path, *method, *grid),
        Command::Sweep { scenario: path } => sweep(cli, path),
        Command::Simulate {
            scenario: path,
            variant,
            refine: refine_levels,
        } => simulate(cli, path, *variant, *refine_levels),
    }
}

fn evaluate(cli: &Cli, path: &Path) -> Result<(), CliError> {
    let scenario = load_scenario(cli, path)?;
    let decision = scenario.require_decision("evaluate")?;
    let report_model = scenario.model();
    let feasibility = check_feasibility(&scenario.params, &decision, report_model);
    if !feasibility.feasible {
        return Err(CliError::Model(ModelError::InfeasibleDecision {
            summary: feasibility.summary(),
        }));
    }
    let serial = inventory_cost(&scenario.params, &decision)?;
    let parallel = parallel_flow_cost(&scenario.params, &decision)?;
    let waste_rate = waste_cost(&scenario.params, decision.recovery)?;

    println!("{}", report::decision_line(&decision));
    println!("{}", report::cost_line(&serial));
    println!("parallel-flow cost: total = {:.2}", parallel.total_rate);
    println!("waste: rate = {waste_rate:.2}");
    if let Some(dir) = &cli.out_dir {
        let written = report::write_evaluation(
            dir,
            &scenario.params,
            &decision,
            &serial,
            &parallel,
            waste_rate,
        )?;
        println!("artifact: {}", written.display());
    }
    Ok(())
}

fn solve(cli: &Cli, path: &Path) -> Result<(), CliError> {
    let scenario = load_scenario(cli, path)?;
    let (model_name, solution): (&str, Solution) = match scenario.model() {
        Model::FixedRecovery => (
            "fixed recovery",
            solve_model1(&scenario.params, &scenario.solver)?,
        ),
        _ => (
            "variable recovery",
            solve_model2(&scenario.params, &scenario.solver)?,
        ),
    };
    let waste_rate = waste_cost(&scenario.params, solution.decision.recovery)?;

    println!("model: {model_name}");
    println!("{}", report::decision_line(&solution.decision));
    println!("{}", report::cost_line(&solution.cost));
    println!("waste: rate = {waste_rate:.2}");
    println!(
        "spans: procurement = {:.2}, repair = {:.2}, total = {:.2}",
        solution.schedule.cycle_new, solution.schedule.cycle_repair, solution.schedule.cycle_total
    );
    println!(
        "stats: cells = {}, subproblems = {}, wall = {:.2}s",
        solution.certificate.len(),
        solution.stats.subproblems,
        solution.stats.wall.as_secs_f64()
    );
    if let Some(dir) = &cli.out_dir {
        let written = report::write_solution(
            dir,
            &scenario.params,
            &scenario.solver,
            &solution,
            waste_rate,
        )?;
        println!("artifact: {}", written.display());
    }
    Ok(())
}

fn front_bounds(front: &ParetoFront) -> Option<(f64, f64, f64, f64)> {
    let f1_min = front.points.first()?.inventory;
    let f1_max = front.points.last()?.inventory;
    let (mut f2_min, mut f2_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in &front.points {
        f2_min = f2_min.min(p.waste);
        f2_max = f2_max.max(p.waste);
    }
    Some((f1_min, f1_max, f2_min, f2_max))
}

fn pareto(
    cli: &Cli,
    path: &Path,
    method: Option<MethodArg>,
    grid: Option<u32>,
) -> Result<(), CliError> {
    let scenario = load_scenario(cli, path)?;
    let method = match method {
        Some(MethodArg::Fvc) => ScalarizationMethod::ValueConstraint,
        Some(MethodArg::Ps) => ScalarizationMethod::GoalAttainment,
        None => scenario.front.method,
    };
    let grid = grid.unwrap_or(scenario.front.grid);
    if grid == 0 {
        return Err(CliError::Scenario(ScenarioError::Invalid {
            message: "moo.grid: must be at least 1".into(),
        }));
    }
    let normalization = match scenario.front.normalization {
        NormalizationMode::Plain => Normalization::Plain,
        NormalizationMode::BoundaryScaled => {
            let (inventory_range, waste_range) = payoff_ranges(&scenario.params, &scenario.solver)?;
            Normalization::BoundaryScaled {
                inventory_range,
                waste_range,
            }
        }
    };
    let front = compute_front(
        &scenario.params,
        method,
        grid,
        scenario.front.utopia,
        normalization,
        &scenario.solver,
    )?;

    let s = &front.provenance;
    println!(
        "method = {}, grid = {}, subproblems = {}, pareto = {}, non-pareto = {}, seconds = {:.2}",
        s.method.label(),
        s.grid_points,
        s.subproblems,
        s.pareto_points,
        s.non_pareto_points,
        s.seconds
    );
    if method == ScalarizationMethod::ValueConstraint {
        println!(
            "references: coupled = {}, fallback = {}; infeasible cuts = {}; merged store = {}",
            s.coupled_references, s.fallback_references, s.infeasible_cuts, s.merged_store
        );
    }
    if let Some((f1_min, f1_max, f2_min, f2_max)) = front_bounds(&front) {
        println!(
            "front: inventory in [{:.2}, {:.2}], waste in [{:.2}, {:.2}], distinct(1e-6) = {}",
            f1_min,
            f1_max,
            f2_min,
            f2_max,
            front.distinct_objectives(1e-6).len()
        );
    }
    for skip in &front.skipped {
        println!(
            "skipped: weight {:.4}: {}",
            skip.weight.inventory, skip.reason
        );
    }
    if let Some(dir) = &cli.out_dir {
        let written = report::write_front(dir, &front)?;
        println!("artifact: {}", written.display());
    }
    Ok(())
}

fn sweep(cli: &Cli, path: &Path) -> Result<(), CliError> {
    let scenario = load_scenario(cli, path)?;
    let spec = scenario
        .sweep
        .clone()
        .ok_or(ScenarioError::MissingSection {
            section: "sweep",
            needed_for: "sweep",
        })?;
    let rows = run_sweep(&spec, &scenario.solver)?;

    println!(
        "sweep: {} across {} values of {}",
        match spec.model {
            Model::FixedRecovery => "fixed-recovery model",
            _ => "variable-recovery model",
        },
        rows.len(),
        spec.parameter
    );
    for row in &rows {
        match &row.outcome {
            Ok(s) => println!(
                "{} = {:.2}: total = {:.2}, decision = ({}, {}, {}, {}, {:.2})",
                spec.parameter,
                row.value,
                s.cost.total_rate,
                s.decision.batch_new,
                s.decision.batch_repaired,
                s.decision.repair_cycles,
                s.decision.procurement_cycles,
                s.decision.recovery
            ),
            Err(e) => println!("{} = {:.2}: error: {e}", spec.parameter, row.value),
        }
    }
    if let Some(reduction) = endpoint_reduction(&rows) {
        println!(
            "endpoint reduction: {:.2}% from last to first value",
            100.0 * reduction
        );
    }
    if let Some(dir) = &cli.out_dir {
        let written = report::write_sweep(dir, &spec.parameter, &rows)?;
        println!("artifact: {}", written.display());
    }
    Ok(())
}

fn simulate(
    cli: &Cli,
    path: &Path,
    variant: VariantArg,
    refine_levels: u32,
) -> Result<(), CliError> {
    let scenario = load_scenario(cli, path)?;
    let decision = scenario.require_decision("simulate")?;
    let flow = match variant {
        VariantArg::Serial => FlowVariant::Serial,
        VariantArg::Parallel => FlowVariant::Parallel,
    };
    let mut trace = build_trace(&scenario.params, &decision, flow)?;
    for _ in 0..refine_levels {
        trace = refine(&trace);
    }
    let simulated = simulated_cost(&trace, &scenario.params, &decision);
    let analytic = match flow {
        FlowVariant::Serial => inventory_cost(&scenario.params, &decision)?.total_rate,
        FlowVariant::Parallel => parallel_flow_cost(&scenario.params, &decision)?.total_rate,
    };
    let residual = (simulated - analytic).abs() / analytic.abs().max(f64::MIN_POSITIVE);

    println!("{}", report::decision_line(&decision));
    println!(
        "variant: {}",
        match flow {
            FlowVariant::Serial => "serial",
            FlowVariant::Parallel => "parallel",
        }
    );
    println!(
        "simulated = {simulated:.2}, analytic = {analytic:.2}, relative residual = {residual:.3e}"
    );
    println!(
        "trace: {} epochs over {:.2} time units; consistent = {}; shortfalls = {}; \
         per-cycle material residual = {:.2}",
        trace.breakpoints.len(),
        trace.horizon(),
        trace.consistent,
        trace.shortfalls.len(),
        trace.residual
    );
    if let Some(dir) = &cli.out_dir {
        let written = report::write_trace(dir, &trace)?;
        println!("artifact: {}", written.display());
    }
    Ok(())
}
