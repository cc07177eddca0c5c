//! Batch execution over instances × permutations × configurations, and the
//! aggregation that turns raw run records into a comparison table.

use super::{permute_instance, shifted_geomean, RunReport, Timings};
use crate::model::{read_mps_file, MipInstance};
use crate::search::{run_heuristic, HeuristicConfig, Strategy, Tiebreak};
use clap::ValueEnum;
use std::fmt;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

impl fmt::Display for Tiebreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

/// A sweep definition: every combination of the listed values, minus the
/// strategy/tiebreaker clashes.
///
/// The text format is one `key = v1, v2, ...` per line; `#` starts a comment.
/// Recognized keys: `strategy`, `tiebreak`, `init_tol`, `final_tol`, `seed`,
/// `backtrack_limit`, `node_limit`, `time_limit`. Omitted keys keep their
/// defaults.
pub fn parse_config_matrix(text: &str) -> Result<Vec<HeuristicConfig>, String> {
    let mut strategies = vec![Strategy::Frac];
    let mut tiebreaks = vec![Tiebreak::None];
    let mut init_tols = vec![1e-4];
    let mut final_tols = vec![1e-8];
    let mut seeds = vec![0u64];
    let mut backtrack_limits = vec![1000u64];
    let mut node_limits: Vec<Option<u64>> = vec![None];
    let mut time_limits: Vec<Option<f64>> = vec![None];

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, values) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = values`", lineno + 1))?;
        let values: Vec<&str> = values.split(',').map(str::trim).collect();
        let parse_f64s = || -> Result<Vec<f64>, String> {
            values
                .iter()
                .map(|v| v.parse::<f64>().map_err(|e| format!("line {}: {e}", lineno + 1)))
                .collect()
        };
        let parse_u64s = || -> Result<Vec<u64>, String> {
            values
                .iter()
                .map(|v| v.parse::<u64>().map_err(|e| format!("line {}: {e}", lineno + 1)))
                .collect()
        };
        match key.trim() {
            "strategy" => {
                strategies = values
                    .iter()
                    .map(|v| {
                        Strategy::from_str(&v.replace('_', "-"), true)
                            .map_err(|e| format!("line {}: {e}", lineno + 1))
                    })
                    .collect::<Result<_, _>>()?;
            }
            "tiebreak" => {
                tiebreaks = values
                    .iter()
                    .map(|v| {
                        Tiebreak::from_str(&v.replace('_', "-"), true)
                            .map_err(|e| format!("line {}: {e}", lineno + 1))
                    })
                    .collect::<Result<_, _>>()?;
            }
            "init_tol" => init_tols = parse_f64s()?,
            "final_tol" => final_tols = parse_f64s()?,
            "seed" => seeds = parse_u64s()?,
            "backtrack_limit" => backtrack_limits = parse_u64s()?,
            "node_limit" => node_limits = parse_u64s()?.into_iter().map(Some).collect(),
            "time_limit" => time_limits = parse_f64s()?.into_iter().map(Some).collect(),
            other => return Err(format!("line {}: unknown key `{other}`", lineno + 1)),
        }
    }

    let mut configs = Vec::new();
    for &strategy in &strategies {
        for &tiebreak in &tiebreaks {
            for &init_tolerance in &init_tols {
                for &final_tolerance in &final_tols {
                    for &seed in &seeds {
                        for &backtrack_limit in &backtrack_limits {
                            for &node_limit in &node_limits {
                                for &time_limit in &time_limits {
                                    let config = HeuristicConfig {
                                        strategy,
                                        tiebreak,
                                        init_tolerance,
                                        final_tolerance,
                                        seed,
                                        backtrack_limit,
                                        node_limit,
                                        time_limit,
                                        include_timings: false,
                                    };
                                    if config.validate().is_ok() {
                                        configs.push(config);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    if configs.is_empty() {
        return Err("the matrix produced no valid configurations".to_string());
    }
    Ok(configs)
}

pub struct BatchOptions {
    pub instances: Vec<PathBuf>,
    /// Permutation seeds 0..permutations (0 = identity).
    pub permutations: u64,
    pub configs: Vec<HeuristicConfig>,
    pub threads: usize,
    /// Record wall-clock timings in every report.
    pub timings: bool,
}

/// A report shell for work that never reached the heuristic — unreadable or
/// unparsable input. The batch records it and moves on.
fn read_failure_report(path: &std::path::Path, config: &HeuristicConfig) -> RunReport {
    RunReport {
        instance: path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string()),
        permutation_seed: 0,
        strategy: config.strategy,
        tiebreak: config.tiebreak,
        init_tolerance: config.init_tolerance,
        final_tolerance: config.final_tolerance,
        seed: config.seed,
        outcome: crate::search::HeuristicOutcome::ReadError,
        found: false,
        objective: None,
        gap_percent: None,
        nodes: 0,
        backtracks: 0,
        initial_lp_iterations: 0,
        final_lp_iterations: None,
        timings: None,
    }
}

/// Runs the full cross product and returns the records in canonical order
/// (instance, permutation, configuration) — independent of thread scheduling.
///
/// Unreadable instances become one `read_error` record each (the batch keeps
/// going). `on_record` fires as each run finishes, in completion order, for
/// incremental log writing; the returned vector is the canonical one.
pub fn run_batch(
    options: &BatchOptions,
    mut on_record: impl FnMut(&RunReport) + Send,
) -> Result<Vec<RunReport>, String> {
    let default_config = options.configs.first().cloned().unwrap_or_default();
    let mut bases: Vec<(MipInstance, f64)> = Vec::new();
    let mut records: Vec<RunReport> = Vec::new();
    for path in &options.instances {
        let started = std::time::Instant::now();
        match read_mps_file(path) {
            Ok(instance) => bases.push((instance, started.elapsed().as_secs_f64())),
            Err(_) => {
                let report = read_failure_report(path, &default_config);
                on_record(&report);
                records.push(report);
            }
        }
    }

    struct Item {
        base: usize,
        perm_seed: u64,
        config: HeuristicConfig,
    }
    let mut items = Vec::new();
    for base in 0..bases.len() {
        for perm_seed in 0..options.permutations.max(1) {
            for config in &options.configs {
                let mut config = config.clone();
                config.include_timings = options.timings;
                items.push(Item { base, perm_seed, config });
            }
        }
    }

    let next = AtomicUsize::new(0);
    let sink: Mutex<(Vec<RunReport>, &mut (dyn FnMut(&RunReport) + Send))> =
        Mutex::new((Vec::with_capacity(items.len()), &mut on_record));
    let failure: Mutex<Option<String>> = Mutex::new(None);
    let workers = options.threads.max(1).min(items.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(idx) else { return };
                let (base, read_seconds) = &bases[item.base];
                let instance = permute_instance(base, item.perm_seed);
                match run_heuristic(&instance, &item.config, None) {
                    Ok(result) => {
                        let mut report = result.report;
                        report.permutation_seed = item.perm_seed;
                        if let Some(timings) = report.timings.as_mut() {
                            timings.reading = *read_seconds;
                        }
                        let mut sink = sink.lock().unwrap();
                        (sink.1)(&report);
                        sink.0.push(report);
                    }
                    Err(e) => {
                        *failure.lock().unwrap() = Some(e.to_string());
                        return;
                    }
                }
            });
        }
    });
    if let Some(message) = failure.into_inner().unwrap() {
        return Err(message);
    }

    records.extend(sink.into_inner().unwrap().0);
    sort_canonically(&mut records);
    Ok(records)
}

/// The one total order every consumer agrees on, so that batch output and
/// re-aggregation are reproducible byte for byte.
fn sort_canonically(records: &mut [RunReport]) {
    records.sort_by(|a, b| {
        (
            &a.instance,
            a.permutation_seed,
            a.strategy.to_string(),
            a.tiebreak.to_string(),
            a.init_tolerance.to_bits(),
            a.final_tolerance.to_bits(),
            a.seed,
        )
            .cmp(&(
                &b.instance,
                b.permutation_seed,
                b.strategy.to_string(),
                b.tiebreak.to_string(),
                b.init_tolerance.to_bits(),
                b.final_tolerance.to_bits(),
                b.seed,
            ))
    });
}

/// One row of the comparison table: a configuration (or the virtual "best"
/// pick) aggregated over instances, permutations, and seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub label: String,
    pub found: usize,
    pub total: usize,
    /// Shifted geometric mean of gap percent over found runs, shift one
    /// percentage point; absent when nothing was found.
    pub gap_sgm: Option<f64>,
    /// Shifted geometric mean of total run seconds over found runs with
    /// timings, shift one second.
    pub time_sgm: Option<f64>,
}

fn total_seconds(t: &Timings) -> f64 {
    t.reading + t.initial_lp + t.fix_and_propagate + t.final_lp
}

fn config_label(r: &RunReport) -> String {
    format!("{}/{}/{:e}", r.strategy, r.tiebreak, r.init_tolerance)
}

fn summarize(label: String, records: &[&RunReport]) -> AggregateRow {
    let found: Vec<&&RunReport> = records.iter().filter(|r| r.found).collect();
    let gaps: Vec<f64> = found.iter().filter_map(|r| r.gap_percent).collect();
    let times: Vec<f64> =
        found.iter().filter_map(|r| r.timings.as_ref().map(total_seconds)).collect();
    AggregateRow {
        label,
        found: found.len(),
        total: records.len(),
        gap_sgm: shifted_geomean(&gaps, 1.0),
        time_sgm: shifted_geomean(&times, 1.0),
    }
}

/// Builds the comparison table: one row per configuration label plus a final
/// `best` row that, for every (instance, permutation) pair, takes the single
/// most successful record (found first, then smaller gap, then less time).
pub fn aggregate(records: &[RunReport]) -> Vec<AggregateRow> {
    let mut sorted: Vec<RunReport> = records.to_vec();
    sort_canonically(&mut sorted);

    let mut labels: Vec<String> = sorted.iter().map(config_label).collect();
    labels.sort();
    labels.dedup();

    let mut rows = Vec::new();
    for label in &labels {
        let members: Vec<&RunReport> =
            sorted.iter().filter(|r| &config_label(r) == label).collect();
        rows.push(summarize(label.clone(), &members));
    }

    // The virtual best: per problem, the record a clairvoyant picker would
    // keep.
    let mut problems: Vec<(String, u64)> = sorted
        .iter()
        .map(|r| (r.instance.clone(), r.permutation_seed))
        .collect();
    problems.sort();
    problems.dedup();
    let mut best_records: Vec<&RunReport> = Vec::new();
    for (instance, perm) in &problems {
        let candidates =
            sorted.iter().filter(|r| &r.instance == instance && r.permutation_seed == *perm);
        let best = candidates.min_by(|a, b| {
            let ka = (
                !a.found,
                a.gap_percent.unwrap_or(f64::INFINITY),
                a.timings.as_ref().map_or(f64::INFINITY, total_seconds),
            );
            let kb = (
                !b.found,
                b.gap_percent.unwrap_or(f64::INFINITY),
                b.timings.as_ref().map_or(f64::INFINITY, total_seconds),
            );
            ka.partial_cmp(&kb).expect("gap and time are never NaN")
        });
        if let Some(r) = best {
            best_records.push(r);
        }
    }
    rows.push(summarize("best".to_string(), &best_records));
    rows
}

/// Renders rows as CSV. Floats use the shortest round-trip form, so the same
/// rows always render to the same bytes.
pub fn write_aggregate_csv(rows: &[AggregateRow]) -> String {
    let mut out = String::from("label,found,total,gap_sgm_pct,time_sgm_s\n");
    for row in rows {
        let gap = row.gap_sgm.map_or(String::new(), |v| format!("{v}"));
        let time = row.time_sgm.map_or(String::new(), |v| format!("{v}"));
        out.push_str(&format!("{},{},{},{},{}\n", row.label, row.found, row.total, gap, time));
    }
    out
}

/// One JSON object per line, in the order given.
pub fn render_jsonl(records: &[RunReport]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("reports serialize"));
        out.push('\n');
    }
    out
}

/// Parses what [`render_jsonl`] wrote.
pub fn parse_jsonl(text: &str) -> Result<Vec<RunReport>, String> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            serde_json::from_str(line).map_err(|e| format!("line {}: {e}", i + 1))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_cross_product_skips_clashes() {
        let text = "strategy = frac, red-cost\ntiebreak = none, frac\nseed = 0, 1\n";
        let configs = parse_config_matrix(text).unwrap();
        // 2 strategies × 2 tiebreaks × 2 seeds = 8, minus frac/frac × 2 seeds.
        assert_eq!(configs.len(), 6);
        assert!(configs
            .iter()
            .all(|c| !(c.strategy == Strategy::Frac && c.tiebreak == Tiebreak::Frac)));
    }

    #[test]
    fn matrix_accepts_snake_and_kebab_names() {
        let a = parse_config_matrix("strategy = red_cost\n").unwrap();
        let b = parse_config_matrix("strategy = red-cost\n").unwrap();
        assert_eq!(a[0].strategy, Strategy::RedCost);
        assert_eq!(b[0].strategy, Strategy::RedCost);
    }

    #[test]
    fn matrix_rejects_unknown_keys() {
        assert!(parse_config_matrix("strateegery = frac\n").is_err());
    }

    #[test]
    fn comments_and_blanks_are_ignored_and_defaults_hold() {
        let configs = parse_config_matrix("# nothing but comments\n\n").unwrap();
        assert_eq!(configs.len(), 1);
        assert_eq!(configs[0].init_tolerance, 1e-4);
        assert_eq!(configs[0].backtrack_limit, 1000);
    }

    fn report(instance: &str, perm: u64, strategy: Strategy, found: bool, gap: f64) -> RunReport {
        RunReport {
            instance: instance.to_string(),
            permutation_seed: perm,
            strategy,
            tiebreak: Tiebreak::None,
            init_tolerance: 1e-4,
            final_tolerance: 1e-8,
            seed: 0,
            outcome: crate::search::HeuristicOutcome::Feasible,
            found,
            objective: found.then_some(1.0),
            gap_percent: found.then_some(gap),
            nodes: 1,
            backtracks: 0,
            initial_lp_iterations: 10,
            final_lp_iterations: found.then_some(10),
            timings: None,
        }
    }

    #[test]
    fn aggregation_excludes_unfound_from_means_but_counts_them() {
        let records = vec![
            report("a", 0, Strategy::Frac, true, 2.0),
            report("b", 0, Strategy::Frac, false, 0.0),
            report("a", 0, Strategy::Random, true, 8.0),
            report("b", 0, Strategy::Random, true, 4.0),
        ];
        let rows = aggregate(&records);
        let frac = rows.iter().find(|r| r.label.starts_with("frac")).unwrap();
        assert_eq!(frac.found, 1);
        assert_eq!(frac.total, 2);
        // Only the found run's gap enters the mean: sgm of {2} is 2.
        assert!((frac.gap_sgm.unwrap() - 2.0).abs() < 1e-12);

        let best = rows.iter().find(|r| r.label == "best").unwrap();
        assert_eq!(best.found, 2);
        assert_eq!(best.total, 2);
        // Best picks gap 2 on `a` (beats 8) and gap 4 on `b` (only find).
        let expect = shifted_geomean(&[2.0, 4.0], 1.0).unwrap();
        assert!((best.gap_sgm.unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn aggregation_is_order_independent() {
        let mut records = vec![
            report("a", 0, Strategy::Frac, true, 2.0),
            report("a", 1, Strategy::Frac, true, 3.0),
            report("a", 0, Strategy::Random, true, 1.0),
            report("a", 1, Strategy::Random, false, 0.0),
        ];
        let forward = write_aggregate_csv(&aggregate(&records));
        records.reverse();
        let backward = write_aggregate_csv(&aggregate(&records));
        assert_eq!(forward, backward);
    }

    #[test]
    fn jsonl_round_trips() {
        let records = vec![
            report("a", 0, Strategy::Frac, true, 2.0),
            report("b", 3, Strategy::Dual, false, 0.0),
        ];
        let text = render_jsonl(&records);
        let back = parse_jsonl(&text).unwrap();
        assert_eq!(back, records);
    }
}
