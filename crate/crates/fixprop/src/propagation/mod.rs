//! Domain propagation: activity-based bound tightening plus clique
//! deductions, over a backtrackable domain store.
//!
//! The propagator never removes an integer-feasible point: every deduction is
//! implied by the row system and the current bounds. Its fixpoint is what the
//! dive in [`crate::search`] consults after each tentative fix, so
//! infeasibility must be detected *before* a crossing bound is written — the
//! domain a caller can observe is always internally consistent.

use crate::model::{ceil_snapped, floor_snapped, MipInstance};

/// Absolute slack allowed before a row or bound conflict counts as real.
pub const FEAS_TOL: f64 = 1e-6;

/// A tightening must beat the old bound by this relative margin to be worth
/// recording; it also guarantees termination of the fixpoint loop.
const IMPROVEMENT_EPS: f64 = 1e-9;

/// A record of one bound change, enough to undo it.
#[derive(Debug, Clone, Copy)]
struct Change {
    var: usize,
    lower: bool,
    old: f64,
}

/// Position in the trail; captured by [`Domain::mark`] and consumed by
/// [`Domain::backtrack_to`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Mark(usize);

/// Current variable bounds with an undo trail. Bounds only ever tighten
/// between a `mark` and the matching `backtrack_to`.
#[derive(Debug, Clone)]
pub struct Domain {
    lb: Vec<f64>,
    ub: Vec<f64>,
    trail: Vec<Change>,
}

impl Domain {
    pub fn new(instance: &MipInstance) -> Self {
        Domain {
            lb: instance.col_lb().to_vec(),
            ub: instance.col_ub().to_vec(),
            trail: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.lb.len()
    }

    pub fn lb(&self, j: usize) -> f64 {
        self.lb[j]
    }

    pub fn ub(&self, j: usize) -> f64 {
        self.ub[j]
    }

    pub fn bounds(&self, j: usize) -> (f64, f64) {
        (self.lb[j], self.ub[j])
    }

    pub fn is_fixed(&self, j: usize) -> bool {
        self.lb[j] == self.ub[j]
    }

    /// Midpoint-free fixed value accessor; meaningful only when
    /// [`Domain::is_fixed`] holds.
    pub fn fixed_value(&self, j: usize) -> f64 {
        debug_assert!(self.is_fixed(j));
        self.lb[j]
    }

    pub fn mark(&self) -> Mark {
        Mark(self.trail.len())
    }

    /// Rewinds every change made since `mark`, in reverse order.
    pub fn backtrack_to(&mut self, mark: Mark) {
        while self.trail.len() > mark.0 {
            let change = self.trail.pop().unwrap();
            if change.lower {
                self.lb[change.var] = change.old;
            } else {
                self.ub[change.var] = change.old;
            }
        }
    }

    /// Raises the lower bound of `j` to `v` if that is a genuine improvement.
    /// Returns whether a change was recorded. Callers must have established
    /// `v ≤ ub(j)`; crossing bounds are a caller bug, not a domain state.
    pub fn tighten_lb(&mut self, j: usize, v: f64) -> bool {
        let old = self.lb[j];
        if v <= old + IMPROVEMENT_EPS * (1.0 + old.abs()) {
            return false;
        }
        debug_assert!(
            v <= self.ub[j] + FEAS_TOL,
            "lower bound {v} crosses upper {} on var {j}",
            self.ub[j]
        );
        self.trail.push(Change { var: j, lower: true, old });
        self.lb[j] = v.min(self.ub[j]);
        true
    }

    /// Mirror of [`Domain::tighten_lb`] for upper bounds.
    pub fn tighten_ub(&mut self, j: usize, v: f64) -> bool {
        let old = self.ub[j];
        if v >= old - IMPROVEMENT_EPS * (1.0 + old.abs()) {
            return false;
        }
        debug_assert!(
            v >= self.lb[j] - FEAS_TOL,
            "upper bound {v} crosses lower {} on var {j}",
            self.lb[j]
        );
        self.trail.push(Change { var: j, lower: false, old });
        self.ub[j] = v.max(self.lb[j]);
        true
    }

    /// Fixes `j` at `v`, which must already lie within its bounds (up to
    /// [`FEAS_TOL`]).
    pub fn fix(&mut self, j: usize, v: f64) {
        self.tighten_lb(j, v);
        self.tighten_ub(j, v);
    }
}

/// One literal of a clique: the variable itself, or its binary negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    fn is_true(&self, domain: &Domain) -> bool {
        if self.negated {
            domain.ub(self.var) <= 0.5
        } else {
            domain.lb(self.var) >= 0.5
        }
    }

    fn is_false(&self, domain: &Domain) -> bool {
        if self.negated {
            domain.lb(self.var) >= 0.5
        } else {
            domain.ub(self.var) <= 0.5
        }
    }
}

/// Set-packing structure mined from the rows: groups of literals of which at
/// most one can be true.
///
/// A row side `Σ_P g·x_j − Σ_T g·x_j ≤ u` over binaries with a common
/// magnitude `g > 0` becomes, after complementing the `T` variables,
/// `Σ literals ≤ u/g + |T|`; it is a clique exactly when that right-hand side
/// floors to 1. Both row sides are inspected (the lower side with negated
/// coefficients).
#[derive(Debug, Default)]
pub struct CliqueTable {
    cliques: Vec<Vec<Literal>>,
    /// For each variable, the cliques it appears in.
    by_var: Vec<Vec<usize>>,
}

impl CliqueTable {
    pub fn from_instance(instance: &MipInstance) -> Self {
        let n = instance.num_vars();
        let mut table = CliqueTable { cliques: Vec::new(), by_var: vec![Vec::new(); n] };
        for i in 0..instance.num_rows() {
            let entries: Vec<(usize, f64)> = instance.matrix().row(i).collect();
            if entries.len() < 2 {
                continue;
            }
            if !entries.iter().all(|&(j, _)| instance.is_binary(j)) {
                continue;
            }
            let g = entries[0].1.abs();
            if g <= 0.0 || entries.iter().any(|&(_, v)| (v.abs() - g).abs() > 1e-12 * g) {
                continue;
            }
            let ub = instance.row_ub()[i];
            if ub.is_finite() {
                table.add_if_clique(&entries, g, ub);
            }
            let lb = instance.row_lb()[i];
            if lb.is_finite() {
                // Σ a x ≥ lb  ⟺  Σ (−a) x ≤ −lb.
                let flipped: Vec<(usize, f64)> =
                    entries.iter().map(|&(j, v)| (j, -v)).collect();
                table.add_if_clique(&flipped, g, -lb);
            }
        }
        table
    }

    fn add_if_clique(&mut self, entries: &[(usize, f64)], g: f64, rhs: f64) {
        let negated = entries.iter().filter(|&&(_, v)| v < 0.0).count();
        let capacity = (rhs / g + negated as f64 + 1e-9).floor();
        if capacity != 1.0 {
            return;
        }
        let id = self.cliques.len();
        let literals: Vec<Literal> = entries
            .iter()
            .map(|&(j, v)| Literal { var: j, negated: v < 0.0 })
            .collect();
        for lit in &literals {
            self.by_var[lit.var].push(id);
        }
        self.cliques.push(literals);
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn cliques(&self) -> &[Vec<Literal>] {
        &self.cliques
    }
}

/// Result of running propagation to (or toward) its fixpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagationOutcome {
    /// The domain is consistent with every row at tolerance [`FEAS_TOL`].
    Consistent(PropagationStats),
    /// Some row or clique cannot be satisfied within the current bounds. The
    /// domain is left at its last consistent state.
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PropagationStats {
    pub rounds: u32,
    pub tightenings: u64,
    /// The round limit was hit while deductions were still being found; the
    /// domain is valid but may not be the full fixpoint.
    pub saturated: bool,
}

/// Activity- and clique-based propagator for one instance. Construction
/// extracts the clique table once; `propagate` may then run on any number of
/// domains (typically: once per dive node).
pub struct Propagator<'a> {
    instance: &'a MipInstance,
    cliques: CliqueTable,
}

impl<'a> Propagator<'a> {
    pub fn new(instance: &'a MipInstance) -> Self {
        Propagator { instance, cliques: CliqueTable::from_instance(instance) }
    }

    pub fn cliques(&self) -> &CliqueTable {
        &self.cliques
    }

    /// Runs rounds of row-activity tightening and clique fixing until nothing
    /// improves. The round limit scales with instance size; hitting it sets
    /// `saturated` rather than erroring.
    pub fn propagate(&self, domain: &mut Domain) -> PropagationOutcome {
        let limit = 100 * self.instance.num_vars().max(1) as u32;
        self.propagate_limited(domain, limit)
    }

    pub fn propagate_limited(&self, domain: &mut Domain, max_rounds: u32) -> PropagationOutcome {
        let mut stats = PropagationStats::default();
        loop {
            if stats.rounds >= max_rounds {
                stats.saturated = true;
                return PropagationOutcome::Consistent(stats);
            }
            stats.rounds += 1;
            let mut changed = 0u64;
            match self.activity_round(domain, &mut changed) {
                RoundOutcome::Infeasible => return PropagationOutcome::Infeasible,
                RoundOutcome::Done => {}
            }
            match self.clique_round(domain, &mut changed) {
                RoundOutcome::Infeasible => return PropagationOutcome::Infeasible,
                RoundOutcome::Done => {}
            }
            stats.tightenings += changed;
            if changed == 0 {
                return PropagationOutcome::Consistent(stats);
            }
        }
    }

    fn activity_round(&self, domain: &mut Domain, changed: &mut u64) -> RoundOutcome {
        let matrix = self.instance.matrix();
        for i in 0..self.instance.num_rows() {
            let row_lb = self.instance.row_lb()[i];
            let row_ub = self.instance.row_ub()[i];

            // Activity bounds with infinite contributions counted separately,
            // so one-variable residuals stay well defined.
            let mut min_sum = 0.0;
            let mut min_inf = 0u32;
            let mut max_sum = 0.0;
            let mut max_inf = 0u32;
            for (j, a) in matrix.row(i) {
                let (lo, hi) = domain.bounds(j);
                let (cmin, cmax) = if a > 0.0 { (a * lo, a * hi) } else { (a * hi, a * lo) };
                if cmin.is_finite() {
                    min_sum += cmin;
                } else {
                    min_inf += 1;
                }
                if cmax.is_finite() {
                    max_sum += cmax;
                } else {
                    max_inf += 1;
                }
            }

            if min_inf == 0 && row_ub.is_finite() && min_sum > row_ub + FEAS_TOL {
                return RoundOutcome::Infeasible;
            }
            if max_inf == 0 && row_lb.is_finite() && max_sum < row_lb - FEAS_TOL {
                return RoundOutcome::Infeasible;
            }

            for (j, a) in matrix.row(i) {
                let (lo, hi) = domain.bounds(j);
                let (cmin, cmax) = if a > 0.0 { (a * lo, a * hi) } else { (a * hi, a * lo) };

                // Residual minimum activity of the row without j.
                let res_min = if cmin.is_finite() {
                    (min_inf == 0).then_some(min_sum - cmin)
                } else {
                    (min_inf == 1).then_some(min_sum)
                };
                // Residual maximum activity without j.
                let res_max = if cmax.is_finite() {
                    (max_inf == 0).then_some(max_sum - cmax)
                } else {
                    (max_inf == 1).then_some(max_sum)
                };

                if let (true, Some(res)) = (row_ub.is_finite(), res_min) {
                    // a·x_j ≤ ub − res.
                    let t = (row_ub - res) / a;
                    let applied = if a > 0.0 {
                        self.apply_upper(domain, j, t, changed)
                    } else {
                        self.apply_lower(domain, j, t, changed)
                    };
                    if applied == Applied::Infeasible {
                        return RoundOutcome::Infeasible;
                    }
                }
                if let (true, Some(res)) = (row_lb.is_finite(), res_max) {
                    // a·x_j ≥ lb − res.
                    let t = (row_lb - res) / a;
                    let applied = if a > 0.0 {
                        self.apply_lower(domain, j, t, changed)
                    } else {
                        self.apply_upper(domain, j, t, changed)
                    };
                    if applied == Applied::Infeasible {
                        return RoundOutcome::Infeasible;
                    }
                }
            }
        }
        RoundOutcome::Done
    }

    /// Tries `x_j ≤ v`, rounding for integral variables, checking for a bound
    /// conflict *before* writing anything.
    fn apply_upper(&self, domain: &mut Domain, j: usize, v: f64, changed: &mut u64) -> Applied {
        let v = if self.instance.is_integral(j) { floor_snapped(v + FEAS_TOL) } else { v };
        if !v.is_finite() {
            return Applied::No;
        }
        if v < domain.lb(j) - FEAS_TOL {
            return Applied::Infeasible;
        }
        let v = v.max(domain.lb(j));
        if domain.tighten_ub(j, v) {
            *changed += 1;
            Applied::Yes
        } else {
            Applied::No
        }
    }

    fn apply_lower(&self, domain: &mut Domain, j: usize, v: f64, changed: &mut u64) -> Applied {
        let v = if self.instance.is_integral(j) { ceil_snapped(v - FEAS_TOL) } else { v };
        if !v.is_finite() {
            return Applied::No;
        }
        if v > domain.ub(j) + FEAS_TOL {
            return Applied::Infeasible;
        }
        let v = v.min(domain.ub(j));
        if domain.tighten_lb(j, v) {
            *changed += 1;
            Applied::Yes
        } else {
            Applied::No
        }
    }

    fn clique_round(&self, domain: &mut Domain, changed: &mut u64) -> RoundOutcome {
        for clique in self.cliques.cliques() {
            let mut true_lit: Option<Literal> = None;
            for lit in clique {
                if lit.is_true(domain) {
                    if true_lit.is_some() {
                        return RoundOutcome::Infeasible;
                    }
                    true_lit = Some(*lit);
                }
            }
            let Some(fixed) = true_lit else { continue };
            for lit in clique {
                if lit.var == fixed.var && lit.negated == fixed.negated {
                    continue;
                }
                if lit.is_true(domain) {
                    return RoundOutcome::Infeasible;
                }
                if lit.is_false(domain) {
                    continue;
                }
                // Force the literal false.
                let applied = if lit.negated {
                    domain.tighten_lb(lit.var, 1.0)
                } else {
                    domain.tighten_ub(lit.var, 0.0)
                };
                if applied {
                    *changed += 1;
                }
            }
        }
        RoundOutcome::Done
    }
}

#[derive(PartialEq)]
enum RoundOutcome {
    Done,
    Infeasible,
}

#[derive(PartialEq)]
enum Applied {
    Yes,
    No,
    Infeasible,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MipBuilder;

    fn stats(outcome: PropagationOutcome) -> PropagationStats {
        match outcome {
            PropagationOutcome::Consistent(s) => s,
            PropagationOutcome::Infeasible => panic!("unexpected infeasibility"),
        }
    }

    #[test]
    fn chain_of_inequalities_tightens_transitively() {
        // x0 ≤ 4, x1 ≤ x0, x2 ≤ x1 on [0, 10]³ ⇒ all upper bounds become 4.
        let inst = MipBuilder::new("chain", 3)
            .minimize(&[0.0, 0.0, 0.0])
            .bounds(0, 0.0, 4.0)
            .bounds(1, 0.0, 10.0)
            .bounds(2, 0.0, 10.0)
            .row_le(&[(1, 1.0), (0, -1.0)], 0.0)
            .row_le(&[(2, 1.0), (1, -1.0)], 0.0)
            .build()
            .unwrap();
        let prop = Propagator::new(&inst);
        let mut domain = Domain::new(&inst);
        let s = stats(prop.propagate(&mut domain));
        assert!(s.tightenings >= 2);
        assert!(!s.saturated);
        assert_eq!(domain.ub(1), 4.0);
        assert_eq!(domain.ub(2), 4.0);
    }

    #[test]
    fn integer_division_rounds_bounds_inward() {
        // 2x ≤ 3 with x integer in [0, 5] ⇒ x ≤ 1.
        let inst = MipBuilder::new("round", 1)
            .minimize(&[0.0])
            .bounds(0, 0.0, 5.0)
            .integer(0)
            .row_le(&[(0, 2.0)], 3.0)
            .build()
            .unwrap();
        let prop = Propagator::new(&inst);
        let mut domain = Domain::new(&inst);
        stats(prop.propagate(&mut domain));
        assert_eq!(domain.ub(0), 1.0);
    }

    #[test]
    fn forced_zero_from_tight_knapsack() {
        // 3x + 2y ≤ 2 over binaries ⇒ x = 0.
        let inst = MipBuilder::new("force", 2)
            .minimize(&[0.0, 0.0])
            .binary(0)
            .binary(1)
            .row_le(&[(0, 3.0), (1, 2.0)], 2.0)
            .build()
            .unwrap();
        let prop = Propagator::new(&inst);
        let mut domain = Domain::new(&inst);
        stats(prop.propagate(&mut domain));
        assert_eq!(domain.ub(0), 0.0);
        assert_eq!(domain.ub(1), 1.0);
    }

    #[test]
    fn equal_coefficient_packing_row_yields_a_clique() {
        // 2x + 2y ≤ 2 over binaries: at most one of x, y.
        let inst = MipBuilder::new("pack", 2)
            .minimize(&[0.0, 0.0])
            .binary(0)
            .binary(1)
            .row_le(&[(0, 2.0), (1, 2.0)], 2.0)
            .build()
            .unwrap();
        let prop = Propagator::new(&inst);
        assert_eq!(prop.cliques().len(), 1);
        let clique = &prop.cliques().cliques()[0];
        assert!(clique.iter().all(|l| !l.negated));

        let mut domain = Domain::new(&inst);
        domain.fix(0, 1.0);
        stats(prop.propagate(&mut domain));
        assert_eq!(domain.ub(1), 0.0);
    }

    #[test]
    fn partition_row_cliques_both_sides() {
        // x + y = 1: at most one true (upper side) and at most one false
        // (lower side, as a clique over negations).
        let inst = MipBuilder::new("partition", 2)
            .minimize(&[0.0, 0.0])
            .binary(0)
            .binary(1)
            .row_eq(&[(0, 1.0), (1, 1.0)], 1.0)
            .build()
            .unwrap();
        let prop = Propagator::new(&inst);
        assert_eq!(prop.cliques().len(), 2);
        let negated_cliques = prop
            .cliques()
            .cliques()
            .iter()
            .filter(|c| c.iter().all(|l| l.negated))
            .count();
        assert_eq!(negated_cliques, 1);

        // Fixing x = 0 forces y = 1 through the negated clique.
        let mut domain = Domain::new(&inst);
        domain.fix(0, 0.0);
        stats(prop.propagate(&mut domain));
        assert_eq!(domain.lb(1), 1.0);
    }

    #[test]
    fn mixed_sign_cover_row_produces_negated_literal() {
        // x + y − z ≤ 0 over binaries: complementing z gives x + y + z̄ ≤ 1.
        let inst = MipBuilder::new("mixed", 3)
            .minimize(&[0.0; 3])
            .binary(0)
            .binary(1)
            .binary(2)
            .row_le(&[(0, 1.0), (1, 1.0), (2, -1.0)], 0.0)
            .build()
            .unwrap();
        let prop = Propagator::new(&inst);
        assert_eq!(prop.cliques().len(), 1);
        // Fixing x = 1 forces y = 0 and z = 1.
        let mut domain = Domain::new(&inst);
        domain.fix(0, 1.0);
        stats(prop.propagate(&mut domain));
        assert_eq!(domain.ub(1), 0.0);
        assert_eq!(domain.lb(2), 1.0);
    }

    #[test]
    fn infeasible_rows_are_reported_not_written() {
        let inst = MipBuilder::new("conflict", 2)
            .minimize(&[0.0, 0.0])
            .binary(0)
            .binary(1)
            .row_ge(&[(0, 1.0), (1, 1.0)], 3.0)
            .build()
            .unwrap();
        let prop = Propagator::new(&inst);
        let mut domain = Domain::new(&inst);
        let outcome = prop.propagate(&mut domain);
        assert_eq!(outcome, PropagationOutcome::Infeasible);
        // The domain stays consistent: no crossed bounds.
        for j in 0..2 {
            assert!(domain.lb(j) <= domain.ub(j));
        }
    }

    #[test]
    fn two_true_literals_in_a_clique_is_infeasible() {
        let inst = MipBuilder::new("double", 2)
            .minimize(&[0.0, 0.0])
            .binary(0)
            .binary(1)
            .row_le(&[(0, 1.0), (1, 1.0)], 1.0)
            .build()
            .unwrap();
        let prop = Propagator::new(&inst);
        let mut domain = Domain::new(&inst);
        domain.fix(0, 1.0);
        domain.fix(1, 1.0);
        assert_eq!(prop.propagate(&mut domain), PropagationOutcome::Infeasible);
    }

    #[test]
    fn backtracking_restores_bounds_exactly() {
        let inst = MipBuilder::new("undo", 2)
            .minimize(&[0.0, 0.0])
            .bounds(0, 0.0, 7.5)
            .bounds(1, -2.0, 3.0)
            .row_le(&[(0, 1.0), (1, 1.0)], 4.0)
            .build()
            .unwrap();
        let prop = Propagator::new(&inst);
        let mut domain = Domain::new(&inst);
        let before: Vec<(f64, f64)> = (0..2).map(|j| domain.bounds(j)).collect();
        let mark = domain.mark();
        domain.fix(0, 3.0);
        stats(prop.propagate(&mut domain));
        assert!(domain.ub(1) <= 1.0);
        domain.backtrack_to(mark);
        let after: Vec<(f64, f64)> = (0..2).map(|j| domain.bounds(j)).collect();
        assert_eq!(before, after);
    }

    #[test]
    fn propagation_is_idempotent() {
        let inst = MipBuilder::new("fixpoint", 3)
            .minimize(&[0.0; 3])
            .bounds(0, 0.0, 9.0)
            .bounds(1, 0.0, 9.0)
            .bounds(2, 0.0, 9.0)
            .integer(1)
            .row_le(&[(0, 1.0), (1, 2.0), (2, 1.0)], 7.0)
            .row_ge(&[(0, 1.0), (2, -1.0)], 1.0)
            .build()
            .unwrap();
        let prop = Propagator::new(&inst);
        let mut domain = Domain::new(&inst);
        stats(prop.propagate(&mut domain));
        let snapshot: Vec<(f64, f64)> = (0..3).map(|j| domain.bounds(j)).collect();
        let second = stats(prop.propagate(&mut domain));
        assert_eq!(second.tightenings, 0);
        let again: Vec<(f64, f64)> = (0..3).map(|j| domain.bounds(j)).collect();
        assert_eq!(snapshot, again);
    }

    #[test]
    fn round_limit_reports_saturation() {
        // A long tightening chain needs one round per link; a one-round cap
        // must flag saturation instead of silently stopping.
        let n = 6;
        let mut builder = MipBuilder::new("slow", n).minimize(&vec![0.0; n]);
        builder = builder.bounds(0, 0.0, 1.0);
        for j in 1..n {
            builder = builder.bounds(j, 0.0, 100.0);
            builder = builder.row_le(&[(j, 1.0), (j - 1, -1.0)], 0.0);
        }
        let inst = builder.build().unwrap();
        let prop = Propagator::new(&inst);
        let mut domain = Domain::new(&inst);
        let s = stats(prop.propagate_limited(&mut domain, 1));
        assert!(s.saturated);
        let mut full = Domain::new(&inst);
        let s = stats(prop.propagate(&mut full));
        assert!(!s.saturated);
        assert_eq!(full.ub(n - 1), 1.0);
    }

    #[test]
    fn free_variables_block_only_their_own_residual() {
        // x free, y ∈ [0, 1], x + y ≤ 2: no bound on y is deducible from the
        // minimum activity (x contributes −∞), but x gains an upper bound
        // from y's residual.
        let inst = MipBuilder::new("free", 2)
            .minimize(&[0.0, 0.0])
            .bounds(0, f64::NEG_INFINITY, f64::INFINITY)
            .bounds(1, 0.0, 1.0)
            .row_le(&[(0, 1.0), (1, 1.0)], 2.0)
            .build()
            .unwrap();
        let prop = Propagator::new(&inst);
        let mut domain = Domain::new(&inst);
        stats(prop.propagate(&mut domain));
        assert_eq!(domain.ub(0), 2.0);
        assert_eq!(domain.ub(1), 1.0);
    }
}
