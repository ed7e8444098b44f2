//! Result rendering: human reports at two decimals to standard output,
//! machine-readable artifacts at full (round-trip) precision.
//!
//! Artifacts are deterministic under a fixed seed: wall-clock timings appear
//! only in the human report. `solution.toml` and `evaluation.toml` are
//! themselves valid scenario files (a `[params]` echo plus the `[decision]`
//! reached), so they can be fed straight back into `evaluate` or `simulate`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use lotcycle::{
    CostBreakdown, DecisionVector, InventoryTrace, ParetoFront, PointRole, Solution, SolverConfig,
    SweepRow, SystemParameters,
};

/// Formats one float at full round-trip precision for TOML/TSV artifacts.
fn full(value: f64) -> String {
    let mut s = format!("{value}");
    // Keep TOML floats typed as floats on re-parse.
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

fn params_table(params: &SystemParameters) -> String {
    let mut out = String::from("[params]\n");
    for (name, value) in [
        ("demand_new", params.demand_new),
        ("demand_repaired", params.demand_repaired),
        ("return_fraction_new", params.return_fraction_new),
        ("acceptance_fraction", params.acceptance_fraction),
        ("return_fraction_repaired", params.return_fraction_repaired),
        ("holding_cost_supply", params.holding_cost_supply),
        ("holding_cost_repair", params.holding_cost_repair),
        ("setup_cost_supply", params.setup_cost_supply),
        ("setup_cost_repair", params.setup_cost_repair),
        ("waste_unit_cost", params.waste_unit_cost),
    ] {
        let _ = writeln!(out, "{name} = {}", full(value));
    }
    if let Some(s) = params.fixed_recovery {
        let _ = writeln!(out, "fixed_recovery = {}", full(s));
    }
    out
}

fn decision_table(decision: &DecisionVector) -> String {
    let mut out = String::from("\n[decision]\n");
    let _ = writeln!(out, "batch_new = {}", decision.batch_new);
    let _ = writeln!(out, "batch_repaired = {}", decision.batch_repaired);
    let _ = writeln!(out, "repair_cycles = {}", decision.repair_cycles);
    let _ = writeln!(out, "procurement_cycles = {}", decision.procurement_cycles);
    let _ = writeln!(out, "recovery = {}", full(decision.recovery));
    out
}

fn solver_table(cfg: &SolverConfig) -> String {
    let mut out = String::from("\n[solver]\n");
    let _ = writeln!(out, "m_max = {}", cfg.m_max);
    let _ = writeln!(out, "n_max = {}", cfg.n_max);
    if let Some(q_max) = cfg.q_max {
        let _ = writeln!(out, "q_max = {q_max}");
    }
    let _ = writeln!(out, "s_grid = {}", cfg.s_grid);
    let _ = writeln!(out, "multistart = {}", cfg.multistart);
    let _ = writeln!(out, "seed = {}", cfg.seed);
    let _ = writeln!(out, "tol = {}", full(cfg.tol));
    out
}

fn cost_table(header: &str, cost: &CostBreakdown) -> String {
    let mut out = format!("\n[{header}]\n");
    let _ = writeln!(out, "setup_rate = {}", full(cost.setup_rate));
    let _ = writeln!(
        out,
        "supply_holding_rate = {}",
        full(cost.supply_holding_rate)
    );
    let _ = writeln!(
        out,
        "repair_holding_rate = {}",
        full(cost.repair_holding_rate)
    );
    let _ = writeln!(out, "total_rate = {}", full(cost.total_rate));
    out
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

/// Full-precision record of one evaluation; re-loadable as a scenario.
pub fn write_evaluation(
    dir: &Path,
    params: &SystemParameters,
    decision: &DecisionVector,
    serial: &CostBreakdown,
    parallel: &CostBreakdown,
    waste_rate: f64,
) -> std::io::Result<PathBuf> {
    let mut out = params_table(params);
    out.push_str(&decision_table(decision));
    out.push_str(&cost_table("cost", serial));
    out.push_str(&cost_table("parallel_cost", parallel));
    out.push_str("\n[waste]\n");
    let _ = writeln!(out, "rate = {}", full(waste_rate));
    write_artifact(dir, "evaluation.toml", &out)
}

/// Full-precision record of a solve; re-loadable as a scenario whose
/// `[decision]` is the optimum found.
pub fn write_solution(
    dir: &Path,
    params: &SystemParameters,
    cfg: &SolverConfig,
    solution: &Solution,
    waste_rate: f64,
) -> std::io::Result<PathBuf> {
    let mut out = params_table(params);
    out.push_str(&decision_table(&solution.decision));
    out.push_str(&solver_table(cfg));
    out.push_str(&cost_table("cost", &solution.cost));
    out.push_str("\n[waste]\n");
    let _ = writeln!(out, "rate = {}", full(waste_rate));
    out.push_str("\n[schedule]\n");
    let _ = writeln!(out, "cycle_new = {}", full(solution.schedule.cycle_new));
    let _ = writeln!(
        out,
        "cycle_repair = {}",
        full(solution.schedule.cycle_repair)
    );
    let _ = writeln!(out, "cycle_total = {}", full(solution.schedule.cycle_total));
    let _ = writeln!(
        out,
        "inflow_primary = {}",
        full(solution.schedule.inflow_primary)
    );
    let _ = writeln!(
        out,
        "inflow_secondary = {}",
        full(solution.schedule.inflow_secondary)
    );
    out.push_str("\n[feasibility]\n");
    let _ = writeln!(out, "feasible = {}", solution.feasibility.feasible);
    out.push_str("\n[stats]\n");
    let _ = writeln!(out, "subproblems = {}", solution.stats.subproblems);
    write_artifact(dir, "solution.toml", &out)
}

fn role_name(role: &PointRole) -> &'static str {
    match role {
        PointRole::Reference { coupled: true } => "reference-coupled",
        PointRole::Reference { coupled: false } => "reference-fallback",
        PointRole::InventoryCut => "inventory-cut",
        PointRole::WasteCut => "waste-cut",
        PointRole::Goal => "goal",
    }
}

/// Tab-separated frontier export: the kept points in ascending inventory
/// order, then the filtered-out candidates flagged `dominated = true`.
pub fn write_front(dir: &Path, front: &ParetoFront) -> std::io::Result<PathBuf> {
    let mut out = String::from(
        "weight_inventory\tmethod\trole\tbatch_new\tbatch_repaired\trepair_cycles\t\
         procurement_cycles\trecovery\tinventory_rate\twaste_rate\talpha\tdominated\n",
    );
    for p in front.points.iter().chain(front.dominated_points.iter()) {
        let alpha = p.alpha.map(full).unwrap_or_default();
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            full(p.weight.inventory),
            p.method.label(),
            role_name(&p.role),
            p.decision.batch_new,
            p.decision.batch_repaired,
            p.decision.repair_cycles,
            p.decision.procurement_cycles,
            full(p.decision.recovery),
            full(p.inventory),
            full(p.waste),
            alpha,
            p.dominated,
        );
    }
    write_artifact(dir, "front.tsv", &out)
}

/// Tab-separated sweep export, one row per substituted value in input order.
pub fn write_sweep(dir: &Path, parameter: &str, rows: &[SweepRow]) -> std::io::Result<PathBuf> {
    let mut out = String::from(
        "parameter\tvalue\tstatus\ttotal_rate\tsetup_rate\tsupply_holding_rate\t\
         repair_holding_rate\tbatch_new\tbatch_repaired\trepair_cycles\tprocurement_cycles\t\
         recovery\terror\n",
    );
    for row in rows {
        match &row.outcome {
            Ok(s) => {
                let _ = writeln!(
                    out,
                    "{}\t{}\tok\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t",
                    parameter,
                    full(row.value),
                    full(s.cost.total_rate),
                    full(s.cost.setup_rate),
                    full(s.cost.supply_holding_rate),
                    full(s.cost.repair_holding_rate),
                    s.decision.batch_new,
                    s.decision.batch_repaired,
                    s.decision.repair_cycles,
                    s.decision.procurement_cycles,
                    full(s.decision.recovery),
                );
            }
            Err(e) => {
                let _ = writeln!(
                    out,
                    "{}\t{}\terror\t\t\t\t\t\t\t\t\t\t{}",
                    parameter,
                    full(row.value),
                    e.to_string().replace(['\t', '\n'], " "),
                );
            }
        }
    }
    write_artifact(dir, "sweep.tsv", &out)
}

/// Tab-separated stock-trajectory export with both-sided levels per epoch.
pub fn write_trace(dir: &Path, trace: &InventoryTrace) -> std::io::Result<PathBuf> {
    let mut out = String::from("time\tsupply_pre\tsupply_post\trepair_pre\trepair_post\n");
    for b in &trace.breakpoints {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            full(b.time),
            full(b.supply_pre),
            full(b.supply_post),
            full(b.repair_pre),
            full(b.repair_post),
        );
    }
    write_artifact(dir, "trace.tsv", &out)
}

/// Two-decimal cost line for the human report.
pub fn cost_line(cost: &CostBreakdown) -> String {
    format!(
        "cost: total = {:.2} (setup {:.2}, supply holding {:.2}, repair holding {:.2})",
        cost.total_rate, cost.setup_rate, cost.supply_holding_rate, cost.repair_holding_rate
    )
}

/// One-line decision summary for the human report.
pub fn decision_line(decision: &DecisionVector) -> String {
    format!(
        "decision: batch_new = {}, batch_repaired = {}, repair_cycles = {}, \
         procurement_cycles = {}, recovery = {:.2}",
        decision.batch_new,
        decision.batch_repaired,
        decision.repair_cycles,
        decision.procurement_cycles,
        decision.recovery
    )
}
