//! The compiled binary end to end: exit codes, output determinism, and the
//! batch → aggregate pipeline.

use std::path::Path;
use std::process::{Command, Output};

const KNAPSACK_MPS: &str = "\
NAME KNAP
ROWS
 N COST
 L CAP
COLUMNS
    M1 'MARKER' 'INTORG'
    X1 COST -3 CAP 2
    X2 COST -4 CAP 3
    X3 COST -2 CAP 1
    M2 'MARKER' 'INTEND'
RHS
    RHS CAP 4
BOUNDS
 BV BND X1
 BV BND X2
 BV BND X3
ENDATA
";

const INFEASIBLE_MPS: &str = "\
NAME ODD
ROWS
 N OBJ
 E ROW
COLUMNS
    M1 'MARKER' 'INTORG'
    X1 OBJ 1 ROW 2
    X2 OBJ 1 ROW 2
    M2 'MARKER' 'INTEND'
RHS
    RHS ROW 1
BOUNDS
 BV BND X1
 BV BND X2
ENDATA
";

fn fixprop(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fixprop"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn solve_finds_the_knapsack_and_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("knap.mps");
    std::fs::write(&path, KNAPSACK_MPS).unwrap();

    let first = fixprop(&["solve", "knap.mps", "--seed", "7"], dir.path());
    assert_eq!(exit_code(&first), 0, "stderr: {}", String::from_utf8_lossy(&first.stderr));
    let second = fixprop(&["solve", "knap.mps", "--seed", "7"], dir.path());
    assert_eq!(first.stdout, second.stdout, "reports differ between runs");

    let report: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(report["found"], serde_json::Value::Bool(true));
    assert_eq!(report["instance"], "KNAP");
    // The file minimizes negated profits; the true optimum is -6 and any
    // reported solution can only be that or worse.
    let objective = report["objective"].as_f64().unwrap();
    assert!((-6.0..=-5.0).contains(&objective), "objective {objective}");
    assert!(report.get("timings").is_none(), "timings must be opt-in");
}

#[test]
fn solve_reports_no_solution_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("odd.mps"), INFEASIBLE_MPS).unwrap();
    let output = fixprop(&["solve", "odd.mps"], dir.path());
    assert_eq!(exit_code(&output), 1);
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["found"], serde_json::Value::Bool(false));
    assert!(report.get("objective").is_none());
    assert!(report.get("gap_percent").is_none());
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("junk.mps"), "this is not an mps file\n").unwrap();
    let output = fixprop(&["solve", "junk.mps"], dir.path());
    assert_eq!(exit_code(&output), 2);
    assert!(!output.stderr.is_empty());

    let missing = fixprop(&["solve", "nope.mps"], dir.path());
    assert_eq!(exit_code(&missing), 2);

    let bad_flags = fixprop(
        &["solve", "junk.mps", "--strategy", "frac", "--tiebreak", "frac"],
        dir.path(),
    );
    assert_eq!(exit_code(&bad_flags), 2);
}

#[test]
fn solution_file_holds_a_feasible_vector() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("knap.mps"), KNAPSACK_MPS).unwrap();
    let output = fixprop(
        &["solve", "knap.mps", "--solution", "point.json"],
        dir.path(),
    );
    assert_eq!(exit_code(&output), 0);
    let body = std::fs::read_to_string(dir.path().join("point.json")).unwrap();
    let solution: fixprop::model::MipSolution = serde_json::from_str(&body).unwrap();
    assert!(solution.feasible);
    assert_eq!(solution.x.len(), 3);
    assert!(solution.x.iter().all(|&v| v == 0.0 || v == 1.0));
}

#[test]
fn lp_subcommand_reports_optimality() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("knap.mps"), KNAPSACK_MPS).unwrap();
    let output = fixprop(&["lp", "knap.mps", "--tol", "1e-7"], dir.path());
    assert_eq!(exit_code(&output), 0);
    let summary: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(summary["status"], "Optimal");
    // Relaxation optimum of the knapsack: -3 -2 -4/3 = -19/3 (minimization).
    let objective = summary["primal_objective"].as_f64().unwrap();
    assert!((objective - (-19.0 / 3.0)).abs() < 1e-4, "{objective}");
}

#[test]
fn gzipped_instances_are_read_transparently() {
    let dir = tempfile::tempdir().unwrap();
    // Round-trip through the writer to produce a real .mps.gz file.
    let instance = fixprop::model::parse_mps_str(KNAPSACK_MPS).unwrap();
    let path = dir.path().join("knap.mps.gz");
    fixprop::model::write_mps_file(&instance, &path).unwrap();
    let output = fixprop(&["solve", "knap.mps.gz"], dir.path());
    assert_eq!(exit_code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));
}

#[test]
fn batch_sweeps_and_aggregate_reproduces_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let instances = dir.path().join("corpus");
    std::fs::create_dir(&instances).unwrap();
    std::fs::write(instances.join("knap.mps"), KNAPSACK_MPS).unwrap();
    std::fs::write(instances.join("odd.mps"), INFEASIBLE_MPS).unwrap();
    std::fs::write(
        dir.path().join("matrix.txt"),
        "strategy = frac, random\nseed = 0, 1\n",
    )
    .unwrap();

    let output = fixprop(
        &[
            "batch",
            "corpus",
            "--config",
            "matrix.txt",
            "--permutations",
            "2",
            "--threads",
            "2",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));

    let jsonl = std::fs::read_to_string(dir.path().join("results.jsonl")).unwrap();
    // 2 instances × 2 permutations × (2 strategies × 2 seeds) = 16 records.
    assert_eq!(jsonl.lines().count(), 16);

    let batch_csv = std::fs::read_to_string(dir.path().join("aggregate.csv")).unwrap();
    assert!(batch_csv.starts_with("label,found,total,"));
    assert!(batch_csv.contains("\nbest,"));

    // Re-aggregating the records file reproduces the CSV byte for byte.
    let again = fixprop(&["aggregate", "results.jsonl"], dir.path());
    assert_eq!(exit_code(&again), 0);
    assert_eq!(String::from_utf8_lossy(&again.stdout), batch_csv);

    // And once more, to a file this time.
    let to_file = fixprop(
        &["aggregate", "results.jsonl", "--output", "table.csv"],
        dir.path(),
    );
    assert_eq!(exit_code(&to_file), 0);
    assert_eq!(
        std::fs::read_to_string(dir.path().join("table.csv")).unwrap(),
        batch_csv
    );
}

#[test]
fn batch_records_unreadable_instances_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let instances = dir.path().join("corpus");
    std::fs::create_dir(&instances).unwrap();
    std::fs::write(instances.join("good.mps"), KNAPSACK_MPS).unwrap();
    std::fs::write(instances.join("broken.mps"), "ROWS before NAME?? not really\n").unwrap();

    let output = fixprop(&["batch", "corpus"], dir.path());
    assert_eq!(exit_code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let jsonl = std::fs::read_to_string(dir.path().join("results.jsonl")).unwrap();
    assert_eq!(jsonl.lines().count(), 2);
    assert!(jsonl.contains("read_error"));
    assert!(jsonl.contains("\"found\":true"));
}
