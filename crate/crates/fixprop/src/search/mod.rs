//! The fix-and-propagate dive: order the integer variables using LP
//! information, fix them one at a time to randomized LP-guided values,
//! propagate after every fixing, and back off through prepared alternatives
//! when propagation reports a dead end. A successful dive pins every integer
//! variable; a final high-accuracy LP then settles the continuous part.

use crate::folp::{pdhg_solve, FolpConfig, FolpError, LpSolution, LpStatus};
use crate::harness::{RunReport, Timings};
use crate::model::{check_feasibility, gap_percent, MipInstance, MipSolution};
use crate::propagation::{Domain, PropagationOutcome, Propagator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

/// Ordering keys closer than this count as tied and fall through to the
/// tiebreaker.
const TIE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Ascending fractionality of the LP value: most integral first.
    Frac,
    /// Descending absolute reduced cost.
    RedCost,
    /// Rows by descending |dual|, each row contributing its variables by
    /// descending |reduced cost|; untouched variables appended last.
    Dual,
    /// Binaries before general integers, stable within each group.
    Type,
    /// Seeded shuffle.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Tiebreak {
    None,
    Frac,
    RedCost,
    Dual,
}

impl Strategy {
    fn same_key_as(self, tiebreak: Tiebreak) -> bool {
        matches!(
            (self, tiebreak),
            (Strategy::Frac, Tiebreak::Frac)
                | (Strategy::RedCost, Tiebreak::RedCost)
                | (Strategy::Dual, Tiebreak::Dual)
        )
    }

    fn needs_lp(self) -> bool {
        matches!(self, Strategy::Frac | Strategy::RedCost | Strategy::Dual)
    }
}

impl Tiebreak {
    fn needs_lp(self) -> bool {
        !matches!(self, Tiebreak::None)
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid heuristic configuration: {0}")]
    InvalidConfig(String),
    #[error("ordering strategy needs an LP solution but none was given")]
    MissingLpSolution,
    #[error(transparent)]
    Lp(#[from] FolpError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HeuristicConfig {
    pub strategy: Strategy,
    pub tiebreak: Tiebreak,
    /// Tolerance for the guiding LP; deliberately loose.
    pub init_tolerance: f64,
    /// Tolerance for the LP over the fixed integers.
    pub final_tolerance: f64,
    pub seed: u64,
    pub backtrack_limit: u64,
    /// `None` means 100 nodes per integer variable.
    pub node_limit: Option<u64>,
    /// Wall-clock budget in seconds; unset keeps runs deterministic.
    pub time_limit: Option<f64>,
    /// Record wall-clock component timings in the report. Off by default so
    /// reports stay bit-reproducible.
    pub include_timings: bool,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig {
            strategy: Strategy::Frac,
            tiebreak: Tiebreak::None,
            init_tolerance: 1e-4,
            final_tolerance: 1e-8,
            seed: 0,
            backtrack_limit: 1000,
            node_limit: None,
            time_limit: None,
            include_timings: false,
        }
    }
}

impl HeuristicConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        let mut problems = Vec::new();
        if self.strategy.same_key_as(self.tiebreak) {
            problems.push("tiebreaker must differ from the ordering strategy".to_string());
        }
        if !(self.init_tolerance > 0.0 && self.init_tolerance.is_finite()) {
            problems.push("init_tolerance must be positive".to_string());
        }
        if !(self.final_tolerance > 0.0 && self.final_tolerance.is_finite()) {
            problems.push("final_tolerance must be positive".to_string());
        }
        if self.backtrack_limit == 0 {
            problems.push("backtrack_limit must be positive".to_string());
        }
        if self.node_limit == Some(0) {
            problems.push("node_limit must be positive when set".to_string());
        }
        if let Some(t) = self.time_limit {
            if !(t > 0.0) {
                problems.push("time_limit must be positive when set".to_string());
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(SearchError::InvalidConfig(problems.join("; ")))
        }
    }

    fn effective_node_limit(&self, num_integers: usize) -> u64 {
        self.node_limit.unwrap_or(100 * num_integers.max(1) as u64)
    }
}

/// A permutation of the integer variables together with the recipe that
/// produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixingOrder {
    pub order: Vec<usize>,
    pub strategy: Strategy,
    pub tiebreak: Tiebreak,
}

fn fractionality(v: f64) -> f64 {
    let lo = v - v.floor();
    lo.min(1.0 - lo).min(v.ceil() - v)
}

/// Snap a sort key onto a coarse grid so "equal within [`TIE_TOL`]" becomes a
/// proper equivalence and the tiebreaker can see the tie.
fn quantized(v: f64) -> f64 {
    (v / TIE_TOL).round() * TIE_TOL
}

/// Per-variable key for a tiebreaker (or `None` for index order). Lower is
/// earlier, so descending quantities enter negated.
fn tiebreak_key(
    tiebreak: Tiebreak,
    j: usize,
    lp: Option<&LpSolution>,
    instance: &MipInstance,
) -> f64 {
    match tiebreak {
        Tiebreak::None => 0.0,
        Tiebreak::Frac => fractionality(lp.unwrap().x[j]),
        Tiebreak::RedCost => -lp.unwrap().reduced_costs[j].abs(),
        Tiebreak::Dual => {
            // The strongest dual among the rows this variable appears in.
            let best = instance
                .matrix()
                .col(j)
                .map(|(i, _)| lp.unwrap().y[i].abs())
                .fold(0.0f64, f64::max);
            -best
        }
    }
}

/// Orders the integer variables for fixing. LP-guided strategies and
/// tiebreakers require `lp`; `Type` and `Random` with `Tiebreak::None` do
/// not. Deterministic for fixed inputs and seed.
pub fn order_variables(
    instance: &MipInstance,
    lp: Option<&LpSolution>,
    strategy: Strategy,
    tiebreak: Tiebreak,
    seed: u64,
) -> Result<FixingOrder, SearchError> {
    if (strategy.needs_lp() || tiebreak.needs_lp()) && lp.is_none() {
        return Err(SearchError::MissingLpSolution);
    }
    let integers = instance.integer_vars();

    let sort_by_keys = |mut vars: Vec<usize>, primary: &dyn Fn(usize) -> f64| -> Vec<usize> {
        vars.sort_by(|&a, &b| {
            let ka = (quantized(primary(a)), quantized(tiebreak_key(tiebreak, a, lp, instance)), a);
            let kb = (quantized(primary(b)), quantized(tiebreak_key(tiebreak, b, lp, instance)), b);
            ka.partial_cmp(&kb).expect("ordering keys are finite")
        });
        vars
    };

    let order = match strategy {
        Strategy::Frac => {
            let x = &lp.unwrap().x;
            sort_by_keys(integers, &|j| fractionality(x[j]))
        }
        Strategy::RedCost => {
            let r = &lp.unwrap().reduced_costs;
            sort_by_keys(integers, &|j| -r[j].abs())
        }
        Strategy::Dual => {
            let sol = lp.unwrap();
            let mut rows: Vec<usize> = (0..instance.num_rows()).collect();
            rows.sort_by(|&a, &b| {
                (quantized(-sol.y[a].abs()), a)
                    .partial_cmp(&(quantized(-sol.y[b].abs()), b))
                    .unwrap()
            });
            let mut listed = vec![false; instance.num_vars()];
            let mut order = Vec::with_capacity(integers.len());
            for i in rows {
                let mut members: Vec<usize> = instance
                    .matrix()
                    .row(i)
                    .map(|(j, _)| j)
                    .filter(|&j| instance.is_integral(j) && !listed[j])
                    .collect();
                members = sort_by_keys(members, &|j| -sol.reduced_costs[j].abs());
                for j in members {
                    listed[j] = true;
                    order.push(j);
                }
            }
            let leftovers: Vec<usize> =
                integers.iter().copied().filter(|&j| !listed[j]).collect();
            order.extend(sort_by_keys(leftovers, &|j| -sol.reduced_costs[j].abs()));
            order
        }
        Strategy::Type => {
            // Group key 0 for binaries, 1 for general integers; ties within a
            // group go to the tiebreaker, then the original index.
            sort_by_keys(integers, &|j| if instance.is_binary(j) { 0.0 } else { 1.0 })
        }
        Strategy::Random => {
            let mut order = integers;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // Fisher-Yates.
            for k in (1..order.len()).rev() {
                let swap = rng.gen_range(0..=k);
                order.swap(k, swap);
            }
            order
        }
    };

    Ok(FixingOrder { order, strategy, tiebreak })
}

/// The integer value a variable is fixed to: its LP value clamped into the
/// current domain, then rounded down with probability equal to one minus its
/// fractional part (so nearly-integral values almost always round the short
/// way).
pub fn fixing_value(x_lp: f64, lb: f64, ub: f64, rng: &mut impl Rng) -> f64 {
    assert!(lb <= ub, "empty domain [{lb}, {ub}]");
    let v = x_lp.clamp(lb, ub);
    debug_assert!(v.is_finite());
    let lower = v.floor();
    let d_i = v - lower;
    let d: f64 = rng.gen();
    let a = if d > d_i { lower } else { v.ceil() };
    a.clamp(lb, ub)
}

/// One prepared alternative for a variable: a tightened domain to try.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundChange {
    pub var: usize,
    pub lower: f64,
    pub upper: f64,
}

impl BoundChange {
    fn is_fixing(&self) -> bool {
        self.lower == self.upper
    }
}

/// The branching alternatives for fixing variable `var` to `a` within
/// `[lb, ub]`, in **increasing priority** (the dive tries them from the back).
///
/// Interior `a` yields three children: the fix itself (highest priority),
/// then the half toward improving the objective, then the other half — so
/// backing off a failed fix first explores values that help the objective.
/// When `a` sits on a bound there are two single-value children, the fixing
/// value preferred. Infinite endpoints stay on interval children as-is; a
/// later branching on the same variable narrows them.
pub fn branch(var: usize, a: f64, lb: f64, ub: f64, objective_coeff: f64) -> Vec<BoundChange> {
    assert!(lb <= a && a <= ub, "branch value {a} outside [{lb}, {ub}]");
    assert!(lb < ub, "singleton domains are fixed, not branched");
    let fix = BoundChange { var, lower: a, upper: a };
    if a == lb {
        return vec![BoundChange { var, lower: ub, upper: ub }, fix];
    }
    if a == ub {
        return vec![BoundChange { var, lower: lb, upper: lb }, fix];
    }
    let below = BoundChange { var, lower: lb, upper: a - 1.0 };
    let above = BoundChange { var, lower: a + 1.0, upper: ub };
    if objective_coeff > 0.0 {
        // Smaller values improve a positive cost: try the lower half before
        // the upper one (higher priority = later in the list).
        vec![above, below, fix]
    } else {
        vec![below, above, fix]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    /// Every integer variable pinned; pairs of (variable, value).
    Assignment(Vec<(usize, f64)>),
    /// All alternatives exhausted without an assignment.
    Exhausted,
    BacktrackLimit,
    NodeLimit,
    TimeLimit,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub backtracks: u64,
}

struct Frame {
    var: usize,
    /// Children in increasing priority; `next` walks from the back.
    children: Vec<BoundChange>,
    next: usize,
    mark: crate::propagation::Mark,
    /// The pending queue as it stood when this frame was opened (var already
    /// removed).
    remaining_base: Vec<usize>,
}

/// Depth-first fix-and-propagate over the given order. Backtracking is
/// trail-based: domains are restored exactly, never recomputed.
pub fn dfs_search(
    instance: &MipInstance,
    propagator: &Propagator,
    order: &FixingOrder,
    lp: &LpSolution,
    config: &HeuristicConfig,
    rng: &mut ChaCha8Rng,
) -> (SearchOutcome, SearchStats) {
    let mut stats = SearchStats::default();
    let node_limit = config.effective_node_limit(order.order.len());
    let started = std::time::Instant::now();

    let mut domain = Domain::new(instance);
    if propagator.propagate(&mut domain) == PropagationOutcome::Infeasible {
        return (SearchOutcome::Exhausted, stats);
    }

    let mut remaining: VecDeque<usize> = order.order.iter().copied().collect();
    let mut stack: Vec<Frame> = Vec::new();
    // Whether to open a frame for the next pending variable, as opposed to
    // advancing the top frame to its next child.
    let mut open_next = true;

    loop {
        if open_next {
            while let Some(&j) = remaining.front() {
                if domain.is_fixed(j) {
                    remaining.pop_front();
                } else {
                    break;
                }
            }
            match remaining.pop_front() {
                None => {
                    let assignment = instance
                        .integer_vars()
                        .into_iter()
                        .map(|j| (j, domain.fixed_value(j)))
                        .collect();
                    return (SearchOutcome::Assignment(assignment), stats);
                }
                Some(j) => {
                    let (lb, ub) = domain.bounds(j);
                    let a = fixing_value(lp.x[j], lb, ub, rng);
                    let children = branch(j, a, lb, ub, instance.objective()[j]);
                    let next = children.len();
                    stack.push(Frame {
                        var: j,
                        children,
                        next,
                        mark: domain.mark(),
                        remaining_base: remaining.iter().copied().collect(),
                    });
                }
            }
        }

        let Some(frame) = stack.last_mut() else {
            return (SearchOutcome::Exhausted, stats);
        };
        if frame.next == 0 {
            // Every alternative for this variable failed in the current
            // context: undo and hand control to the parent frame.
            domain.backtrack_to(frame.mark);
            stats.backtracks += 1;
            if stats.backtracks >= config.backtrack_limit {
                return (SearchOutcome::BacktrackLimit, stats);
            }
            stack.pop();
            open_next = false;
            continue;
        }

        frame.next -= 1;
        let child = frame.children[frame.next];
        let first_child = frame.next + 1 == frame.children.len();
        if !first_child {
            domain.backtrack_to(frame.mark);
            stats.backtracks += 1;
            if stats.backtracks >= config.backtrack_limit {
                return (SearchOutcome::BacktrackLimit, stats);
            }
        }
        remaining = frame.remaining_base.iter().copied().collect();
        if !child.is_fixing() {
            // An interval restriction leaves the variable unfixed; put it at
            // the front so it is branched on again right away.
            remaining.push_front(frame.var);
        }

        stats.nodes += 1;
        if stats.nodes > node_limit {
            return (SearchOutcome::NodeLimit, stats);
        }
        if let Some(limit) = config.time_limit {
            if started.elapsed().as_secs_f64() > limit {
                return (SearchOutcome::TimeLimit, stats);
            }
        }

        if child.lower.is_finite() {
            domain.tighten_lb(child.var, child.lower);
        }
        if child.upper.is_finite() {
            domain.tighten_ub(child.var, child.upper);
        }
        match propagator.propagate(&mut domain) {
            PropagationOutcome::Infeasible => {
                // Try the next sibling; restoration happens when it is
                // dequeued (or when the frame pops).
                open_next = false;
            }
            PropagationOutcome::Consistent(_) => {
                open_next = true;
            }
        }
    }
}

/// Why a heuristic run ended the way it did.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeuristicOutcome {
    Feasible,
    /// The guiding LP diverged — the relaxation looks infeasible.
    InitialLpDiverged,
    /// The dive exhausted its alternatives.
    SearchExhausted,
    BacktrackLimit,
    NodeLimit,
    TimeLimit,
    /// The LP over the fixed integers diverged.
    FinalLpDiverged,
    /// A solution was assembled but failed the feasibility check.
    FinalCheckFailed,
    /// The instance file could not be read or parsed (batch bookkeeping; a
    /// single solve reports the error directly instead).
    ReadError,
}

/// A finished run: the report (always) and the solution (when found).
#[derive(Debug, Clone)]
pub struct HeuristicResult {
    pub report: RunReport,
    pub solution: Option<MipSolution>,
}

/// End-to-end heuristic: guiding LP at the loose tolerance, ordering, dive,
/// then the accurate LP over the fixed integers and a feasibility check of
/// the combined point at `1e-6` relative.
///
/// `reference` is an externally known objective (input sense) to measure the
/// gap against; without one the gap is taken against the guiding LP bound.
pub fn run_heuristic(
    instance: &MipInstance,
    config: &HeuristicConfig,
    reference: Option<f64>,
) -> Result<HeuristicResult, SearchError> {
    config.validate()?;
    let mut report = RunReport {
        instance: instance.name().to_string(),
        permutation_seed: 0,
        strategy: config.strategy,
        tiebreak: config.tiebreak,
        init_tolerance: config.init_tolerance,
        final_tolerance: config.final_tolerance,
        seed: config.seed,
        outcome: HeuristicOutcome::SearchExhausted,
        found: false,
        objective: None,
        gap_percent: None,
        nodes: 0,
        backtracks: 0,
        initial_lp_iterations: 0,
        final_lp_iterations: None,
        timings: None,
    };
    let mut timings = Timings::default();

    // Guiding LP at the loose tolerance. A diverged run aborts the heuristic;
    // an iteration- or time-limited run still carries usable guidance.
    let lp_started = std::time::Instant::now();
    let mut lp_config = FolpConfig::with_tolerance(config.init_tolerance);
    lp_config.time_limit = config.time_limit;
    let lp = pdhg_solve(instance, &lp_config)?;
    timings.initial_lp = lp_started.elapsed().as_secs_f64();
    report.initial_lp_iterations = lp.iterations;
    if lp.status == LpStatus::PrimalInfeasibleGuess {
        report.outcome = HeuristicOutcome::InitialLpDiverged;
        if config.include_timings {
            report.timings = Some(timings);
        }
        return Ok(HeuristicResult { report, solution: None });
    }

    let order =
        order_variables(instance, Some(&lp), config.strategy, config.tiebreak, config.seed)?;
    let propagator = Propagator::new(instance);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.rotate_left(17) ^ 0x9e37_79b9_7f4a_7c15);

    let dive_started = std::time::Instant::now();
    let (outcome, stats) = dfs_search(instance, &propagator, &order, &lp, config, &mut rng);
    timings.fix_and_propagate = dive_started.elapsed().as_secs_f64();
    report.nodes = stats.nodes;
    report.backtracks = stats.backtracks;

    let assignment = match outcome {
        SearchOutcome::Assignment(a) => a,
        SearchOutcome::Exhausted => {
            report.outcome = HeuristicOutcome::SearchExhausted;
            if config.include_timings {
                report.timings = Some(timings);
            }
            return Ok(HeuristicResult { report, solution: None });
        }
        SearchOutcome::BacktrackLimit => {
            report.outcome = HeuristicOutcome::BacktrackLimit;
            if config.include_timings {
                report.timings = Some(timings);
            }
            return Ok(HeuristicResult { report, solution: None });
        }
        SearchOutcome::NodeLimit => {
            report.outcome = HeuristicOutcome::NodeLimit;
            if config.include_timings {
                report.timings = Some(timings);
            }
            return Ok(HeuristicResult { report, solution: None });
        }
        SearchOutcome::TimeLimit => {
            report.outcome = HeuristicOutcome::TimeLimit;
            if config.include_timings {
                report.timings = Some(timings);
            }
            return Ok(HeuristicResult { report, solution: None });
        }
    };

    // Pin the integers and let the accurate LP settle the continuous part.
    let mut lb = instance.col_lb().to_vec();
    let mut ub = instance.col_ub().to_vec();
    for &(j, a) in &assignment {
        lb[j] = a;
        ub[j] = a;
    }
    let fixed = instance.with_bounds(&lb, &ub);
    let final_started = std::time::Instant::now();
    let mut final_config = FolpConfig::with_tolerance(config.final_tolerance);
    final_config.time_limit = config.time_limit;
    let final_lp = pdhg_solve(&fixed, &final_config)?;
    timings.final_lp = final_started.elapsed().as_secs_f64();
    report.final_lp_iterations = Some(final_lp.iterations);
    if final_lp.status == LpStatus::PrimalInfeasibleGuess {
        report.outcome = HeuristicOutcome::FinalLpDiverged;
        if config.include_timings {
            report.timings = Some(timings);
        }
        return Ok(HeuristicResult { report, solution: None });
    }

    let solution = check_feasibility(instance, &final_lp.x, 1e-6);
    if !solution.feasible {
        report.outcome = HeuristicOutcome::FinalCheckFailed;
        if config.include_timings {
            report.timings = Some(timings);
        }
        return Ok(HeuristicResult { report, solution: None });
    }

    let objective = instance.objective_in_input_sense(solution.objective);
    let reference_value =
        reference.unwrap_or_else(|| instance.objective_in_input_sense(lp.primal_objective));
    report.outcome = HeuristicOutcome::Feasible;
    report.found = true;
    report.objective = Some(objective);
    report.gap_percent = Some(gap_percent(objective, reference_value));
    if config.include_timings {
        report.timings = Some(timings);
    }
    Ok(HeuristicResult { report, solution: Some(solution) })
}
