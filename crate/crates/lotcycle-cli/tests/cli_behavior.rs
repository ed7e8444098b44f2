//! End-to-end behavior of the `lotcycle` binary: reports, artifacts,
//! round-trips, exit codes, and determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lotcycle"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("process terminated by signal")
}

/// Reads `key = value` out of a flat TOML artifact section-insensitively.
fn toml_value(text: &str, key: &str) -> f64 {
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix(&format!("{key} = ")) {
            return rest
                .parse()
                .unwrap_or_else(|_| panic!("unparsable {key}: {rest}"));
        }
    }
    panic!("{key} not found in artifact");
}

#[test]
fn evaluate_reports_the_reference_row_cost() {
    let out = bin()
        .args(["evaluate"])
        .arg(fixture("tyre_p40.toml"))
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("total = 51.78"), "report:\n{text}");
    assert!(text.contains("batch_new = 35"), "report:\n{text}");
}

#[test]
fn solve_report_contains_published_cost_and_decision() {
    let out = bin()
        .args(["solve"])
        .arg(fixture("dual_market.toml"))
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("6372.5"), "report:\n{text}");
    assert!(
        text.contains(
            "batch_new = 1500, batch_repaired = 1250, repair_cycles = 2, procurement_cycles = 1, \
             recovery = 0.77"
        ),
        "report:\n{text}"
    );
    assert!(text.contains("model: variable recovery"), "report:\n{text}");
}

#[test]
fn solve_then_evaluate_round_trips_the_cost() {
    let dir = tempfile::tempdir().unwrap();
    let solve_dir = dir.path().join("solve");
    let eval_dir = dir.path().join("eval");

    let out = bin()
        .args(["solve"])
        .arg(fixture("tyre_p40.toml"))
        .arg("--out-dir")
        .arg(&solve_dir)
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let solution = fs::read_to_string(solve_dir.join("solution.toml")).unwrap();

    // The exported solution is itself a scenario: evaluate it directly.
    let out = bin()
        .args(["evaluate"])
        .arg(solve_dir.join("solution.toml"))
        .arg("--out-dir")
        .arg(&eval_dir)
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let evaluation = fs::read_to_string(eval_dir.join("evaluation.toml")).unwrap();

    let solved = toml_value(&solution, "total_rate");
    let evaluated = toml_value(&evaluation, "total_rate");
    assert!(
        (solved - evaluated).abs() <= 1e-9 * (1.0 + solved.abs()),
        "solve exported {solved}, evaluate reproduced {evaluated}"
    );
}

#[test]
fn pareto_summary_matches_the_documented_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["pareto"])
        .arg(fixture("waste_tradeoff.toml"))
        .args(["--method", "ps", "--grid", "200"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.contains("method = ps, grid = 200, subproblems = 200, pareto = 200, non-pareto = 0"),
        "summary:\n{text}"
    );

    let front = fs::read_to_string(dir.path().join("front.tsv")).unwrap();
    let mut lines = front.lines();
    assert_eq!(
        lines.next().unwrap(),
        "weight_inventory\tmethod\trole\tbatch_new\tbatch_repaired\trepair_cycles\t\
         procurement_cycles\trecovery\tinventory_rate\twaste_rate\talpha\tdominated"
    );
    assert_eq!(front.lines().count(), 201, "header plus 200 points");
    assert!(front.lines().skip(1).all(|l| l.ends_with("\tfalse")));
}

#[test]
fn pareto_value_constraint_reports_reference_accounting() {
    let out = bin()
        .args(["pareto"])
        .arg(fixture("waste_tradeoff.toml"))
        .args(["--method", "fvc"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.contains("method = fvc, grid = 200, subproblems = 600, pareto = 479, non-pareto = 0"),
        "summary:\n{text}"
    );
    assert!(
        text.contains("references: coupled = 79, fallback = 121; infeasible cuts = 121"),
        "summary:\n{text}"
    );
}

#[test]
fn pareto_artifacts_are_deterministic() {
    let read = |dir: &Path| fs::read_to_string(dir.join("front.tsv")).unwrap();
    let mut runs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let out = bin()
            .args(["pareto"])
            .arg(fixture("waste_tradeoff.toml"))
            .args(["--method", "fvc", "--grid", "60"])
            .arg("--out-dir")
            .arg(dir.path())
            .output()
            .unwrap();
        assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
        runs.push(read(dir.path()));
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn simulate_exports_the_trace_and_a_tiny_residual() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["simulate"])
        .arg(fixture("balanced_market_s070.toml"))
        .args(["--variant", "parallel", "--refine", "1"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("variant: parallel"), "report:\n{text}");
    let residual: f64 = text
        .lines()
        .find_map(|l| l.split("relative residual = ").nth(1))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(residual <= 0.005, "residual {residual}");

    let trace = fs::read_to_string(dir.path().join("trace.tsv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(
        lines.next().unwrap(),
        "time\tsupply_pre\tsupply_post\trepair_pre\trepair_post"
    );
    assert!(trace.lines().count() > 10);
}

#[test]
fn sweep_reports_rows_and_exports_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("scenario.toml");
    let base = fs::read_to_string(fixture("dual_market.toml")).unwrap();
    fs::write(
        &scenario,
        format!(
            "{base}\n[solver]\nm_max = 16\nn_max = 16\nq_max = 4000\n\n\
             [sweep]\nparameter = \"holding_cost_supply\"\nvalues = [5.0, 15.0]\n"
        ),
    )
    .unwrap();
    let out = bin()
        .args(["sweep"])
        .arg(&scenario)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("total = 6372.50"), "report:\n{text}");
    assert!(text.contains("total = 10983.52"), "report:\n{text}");

    let table = fs::read_to_string(dir.path().join("sweep.tsv")).unwrap();
    assert_eq!(table.lines().count(), 3, "header plus two rows");
    assert!(table.contains("\tok\t"));
}

#[test]
fn zero_cost_instance_evaluates_to_zero() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("zero.toml");
    fs::write(
        &scenario,
        "[params]\n\
         demand_new = 100.0\n\
         demand_repaired = 43.0\n\
         return_fraction_new = 0.4\n\
         acceptance_fraction = 0.8\n\
         return_fraction_repaired = 0.4\n\
         holding_cost_supply = 0.0\n\
         holding_cost_repair = 0.0\n\
         setup_cost_supply = 0.0\n\
         setup_cost_repair = 0.0\n\
         waste_unit_cost = 0.0\n\
         fixed_recovery = 0.7\n\n\
         [decision]\n\
         batch_new = 35\n\
         batch_repaired = 15\n\
         repair_cycles = 3\n\
         procurement_cycles = 3\n",
    )
    .unwrap();
    let out = bin().args(["evaluate"]).arg(&scenario).output().unwrap();
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("total = 0.00"));
}

#[test]
fn exit_codes_follow_the_documented_contract() {
    let dir = tempfile::tempdir().unwrap();

    // 2: unparsable scenario.
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "this is not toml at all").unwrap();
    let out = bin().args(["evaluate"]).arg(&bad).output().unwrap();
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("does not parse"));

    // 2: missing [decision] for evaluate, with the invariant named.
    let out = bin()
        .args(["evaluate"])
        .arg(fixture("waste_tradeoff.toml"))
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("[decision]"));

    // 2: out-of-range parameter, with the field and requirement named.
    let badparam = dir.path().join("badparam.toml");
    let text = fs::read_to_string(fixture("tyre_p40.toml")).unwrap();
    fs::write(
        &badparam,
        text.replace("return_fraction_new = 0.4", "return_fraction_new = 1.4"),
    )
    .unwrap();
    let out = bin().args(["evaluate"]).arg(&badparam).output().unwrap();
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("return_fraction_new"));

    // 2: infeasible explicit decision, with the violated constraint named.
    let infeasible = dir.path().join("infeasible.toml");
    let text = fs::read_to_string(fixture("tyre_p40.toml")).unwrap();
    fs::write(
        &infeasible,
        text.replace("batch_new = 35", "batch_new = 20"),
    )
    .unwrap();
    let out = bin().args(["evaluate"]).arg(&infeasible).output().unwrap();
    assert_eq!(exit_code(&out), 2, "stderr: {}", stderr(&out));
    assert!(
        stderr(&out).contains("min_cycle_span_new"),
        "stderr: {}",
        stderr(&out)
    );

    // 3: empty feasible region (demand not coverable at full recovery).
    let uncover = dir.path().join("uncover.toml");
    fs::write(
        &uncover,
        "[params]\n\
         demand_new = 10.0\n\
         demand_repaired = 100.0\n\
         return_fraction_new = 0.5\n\
         acceptance_fraction = 0.5\n\
         return_fraction_repaired = 0.5\n\
         holding_cost_supply = 1.0\n\
         holding_cost_repair = 1.0\n\
         setup_cost_supply = 1.0\n\
         setup_cost_repair = 1.0\n\
         waste_unit_cost = 0.0\n",
    )
    .unwrap();
    let out = bin().args(["solve"]).arg(&uncover).output().unwrap();
    assert_eq!(exit_code(&out), 3, "stderr: {}", stderr(&out));

    // 4: box bound attained during the solve.
    let tight = dir.path().join("tight.toml");
    let text = fs::read_to_string(fixture("tyre_p40.toml")).unwrap();
    fs::write(&tight, format!("{text}\n[solver]\nm_max = 2\n")).unwrap();
    let out = bin().args(["solve"]).arg(&tight).output().unwrap();
    assert_eq!(exit_code(&out), 4, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("m_max"));
}

#[test]
fn seed_override_does_not_move_the_exact_optimum() {
    let baseline = bin()
        .args(["solve"])
        .arg(fixture("tyre_p40.toml"))
        .output()
        .unwrap();
    let reseeded = bin()
        .args(["solve"])
        .arg(fixture("tyre_p40.toml"))
        .args(["--seed", "7"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&baseline), 0);
    assert_eq!(exit_code(&reseeded), 0);
    let line = |o: &Output| {
        stdout(o)
            .lines()
            .find(|l| l.starts_with("decision:"))
            .unwrap()
            .to_string()
    };
    assert_eq!(line(&baseline), line(&reseeded));
}

#[test]
fn jobs_flag_caps_workers_without_changing_results() {
    let run = |jobs: &str| {
        let dir = tempfile::tempdir().unwrap();
        let out = bin()
            .args(["pareto"])
            .arg(fixture("waste_tradeoff.toml"))
            .args(["--grid", "40", "--jobs", jobs])
            .arg("--out-dir")
            .arg(dir.path())
            .output()
            .unwrap();
        assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
        fs::read_to_string(dir.path().join("front.tsv")).unwrap()
    };
    assert_eq!(run("1"), run("4"));
}
