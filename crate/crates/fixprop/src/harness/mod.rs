//! Benchmark plumbing: run records, seeded instance permutations, config
//! sweeps, batch execution, and shifted-geometric-mean aggregation.

mod batch;
mod permute;

pub use batch::{
    aggregate, parse_config_matrix, parse_jsonl, render_jsonl, run_batch, write_aggregate_csv,
    AggregateRow, BatchOptions,
};
pub use permute::permute_instance;

use crate::search::{HeuristicOutcome, Strategy, Tiebreak};
use serde::{Deserialize, Serialize};

/// Everything recorded about one heuristic run. Serialized as one JSON object
/// per line in batch output.
///
/// Wall-clock timings are optional because the rest of the record is
/// bit-reproducible for a fixed seed — a determinism guarantee worth more in
/// regression testing than free timing data. Batch runs opt in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: String,
    /// Seed of the row/column permutation applied before solving; 0 is the
    /// identity permutation.
    pub permutation_seed: u64,
    pub strategy: Strategy,
    pub tiebreak: Tiebreak,
    pub init_tolerance: f64,
    pub final_tolerance: f64,
    pub seed: u64,
    pub outcome: HeuristicOutcome,
    pub found: bool,
    /// Objective in the instance's input sense; absent when no solution was
    /// found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
    /// Relative gap to the reference objective, in percent, capped.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_percent: Option<f64>,
    pub nodes: u64,
    pub backtracks: u64,
    pub initial_lp_iterations: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_lp_iterations: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

/// Per-component wall-clock seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Timings {
    pub reading: f64,
    pub initial_lp: f64,
    pub fix_and_propagate: f64,
    pub final_lp: f64,
}

/// `exp(mean(ln(vᵢ + shift))) − shift`. The usual benchmark average: less
/// dominated by outliers than an arithmetic mean, tolerant of zeros thanks to
/// the shift.
///
/// Returns `None` for an empty slice (the mean of nothing is not a number
/// worth inventing). Panics on negative values or a nonpositive shift —
/// those are caller bugs, not data.
pub fn shifted_geomean(values: &[f64], shift: f64) -> Option<f64> {
    assert!(shift > 0.0, "shift must be positive, got {shift}");
    if values.is_empty() {
        return None;
    }
    let mut log_sum = 0.0;
    for &v in values {
        assert!(v >= 0.0, "shifted geometric mean of a negative value {v}");
        log_sum += (v + shift).ln();
    }
    Some((log_sum / values.len() as f64).exp() - shift)
}
