//! Problem representation: mixed-integer programs with two-sided rows.
//!
//! Everything downstream works on the minimization form
//!
//! ```text
//!     min  c·x + c0   s.t.   L ≤ Ax ≤ U,   l ≤ x ≤ u,   x_i integral for i ∈ I
//! ```
//!
//! Maximization inputs are negated on load and the flip is recorded so reports
//! can restore the original sense. Bounds of integral variables are rounded
//! inward once, at construction; the rest of the toolkit may assume they are
//! integral.

mod mps;

pub use mps::{parse_mps, parse_mps_str, read_mps_file, write_mps, write_mps_file, MpsError};

use crate::sparse::SparseMatrix;
use thiserror::Error;

/// Absolute slack when deciding whether a bound is already integral.
/// `0.9999999999` counts as 1 rather than being ceiled to 1 and floored to 0.
pub const INTEGRALITY_SNAP: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("row '{name}': lower bound {lb} exceeds upper bound {ub}")]
    RowBoundCross { name: String, lb: f64, ub: f64 },
    #[error("variable '{name}': lower bound {lb} exceeds upper bound {ub}")]
    ColBoundCross { name: String, lb: f64, ub: f64 },
    #[error(
        "integral variable '{name}': bounds [{lb}, {ub}] contain no integer \
         (rounded inward to [{rounded_lb}, {rounded_ub}])"
    )]
    IntegerBoundCross { name: String, lb: f64, ub: f64, rounded_lb: f64, rounded_ub: f64 },
    #[error("duplicate {kind} name '{name}'")]
    DuplicateName { kind: &'static str, name: String },
    #[error("non-finite {what} for '{name}'")]
    NonFinite { what: &'static str, name: String },
    #[error("row '{name}' has no finite bound")]
    UnboundedRow { name: String },
    #[error("{kind} '{name}': bounds [{lb}, {ub}] cannot be satisfied by any finite value")]
    UnsatisfiableBounds { kind: &'static str, name: String, lb: f64, ub: f64 },
}

/// Raw pieces of an instance, prior to validation.
#[derive(Debug, Clone, Default)]
pub struct InstanceParts {
    pub name: String,
    pub objective: Vec<f64>,
    pub objective_constant: f64,
    /// True when the original input maximized and `objective`/`objective_constant`
    /// have already been negated into minimization form.
    pub flipped_sense: bool,
    pub triplets: Vec<(usize, usize, f64)>,
    pub row_lb: Vec<f64>,
    pub row_ub: Vec<f64>,
    pub col_lb: Vec<f64>,
    pub col_ub: Vec<f64>,
    pub integral: Vec<bool>,
    pub row_names: Vec<String>,
    pub col_names: Vec<String>,
}

/// A validated mixed-integer program in minimization form.
#[derive(Debug, Clone, PartialEq)]
pub struct MipInstance {
    name: String,
    objective: Vec<f64>,
    objective_constant: f64,
    flipped_sense: bool,
    matrix: SparseMatrix,
    row_lb: Vec<f64>,
    row_ub: Vec<f64>,
    col_lb: Vec<f64>,
    col_ub: Vec<f64>,
    integral: Vec<bool>,
    row_names: Vec<String>,
    col_names: Vec<String>,
}

/// Ceil that first snaps values within [`INTEGRALITY_SNAP`] of an integer.
pub(crate) fn ceil_snapped(v: f64) -> f64 {
    if (v - v.round()).abs() <= INTEGRALITY_SNAP {
        v.round()
    } else {
        v.ceil()
    }
}

/// Floor that first snaps values within [`INTEGRALITY_SNAP`] of an integer.
pub(crate) fn floor_snapped(v: f64) -> f64 {
    if (v - v.round()).abs() <= INTEGRALITY_SNAP {
        v.round()
    } else {
        v.floor()
    }
}

impl MipInstance {
    /// Validates and assembles an instance.
    ///
    /// Checks dimensions, name uniqueness, finiteness (coefficients must be
    /// finite, bounds must not be NaN), `L ≤ U`, `l ≤ u`, and rounds integral
    /// bounds inward (`ceil` of lower, `floor` of upper). Bounds that cross
    /// only after rounding are reported as [`ModelError::IntegerBoundCross`].
    pub fn from_parts(parts: InstanceParts) -> Result<Self, ModelError> {
        let n = parts.objective.len();
        let m = parts.row_lb.len();
        let dims_ok = parts.row_ub.len() == m
            && parts.col_lb.len() == n
            && parts.col_ub.len() == n
            && parts.integral.len() == n
            && parts.row_names.len() == m
            && parts.col_names.len() == n;
        if !dims_ok {
            return Err(ModelError::Dimension(format!(
                "{} objective entries, {}/{} column bounds, {} integrality flags, \
                 {}/{} row bounds, {} row names, {} column names",
                n,
                parts.col_lb.len(),
                parts.col_ub.len(),
                parts.integral.len(),
                parts.row_lb.len(),
                parts.row_ub.len(),
                parts.row_names.len(),
                parts.col_names.len(),
            )));
        }

        let mut seen = std::collections::HashSet::new();
        for name in &parts.row_names {
            if !seen.insert(name.as_str()) {
                return Err(ModelError::DuplicateName { kind: "row", name: name.clone() });
            }
        }
        seen.clear();
        for name in &parts.col_names {
            if !seen.insert(name.as_str()) {
                return Err(ModelError::DuplicateName { kind: "column", name: name.clone() });
            }
        }

        for (j, &cj) in parts.objective.iter().enumerate() {
            if !cj.is_finite() {
                return Err(ModelError::NonFinite {
                    what: "objective coefficient",
                    name: parts.col_names[j].clone(),
                });
            }
        }
        if !parts.objective_constant.is_finite() {
            return Err(ModelError::NonFinite {
                what: "objective constant",
                name: parts.name.clone(),
            });
        }
        for &(r, c, v) in &parts.triplets {
            if r >= m || c >= n {
                return Err(ModelError::Dimension(format!(
                    "coefficient at ({r}, {c}) outside {m}x{n} matrix"
                )));
            }
            if !v.is_finite() {
                return Err(ModelError::NonFinite {
                    what: "matrix coefficient",
                    name: format!("{}/{}", parts.row_names[r], parts.col_names[c]),
                });
            }
        }

        let mut col_lb = parts.col_lb;
        let mut col_ub = parts.col_ub;
        for j in 0..n {
            let name = &parts.col_names[j];
            if col_lb[j].is_nan() || col_ub[j].is_nan() {
                return Err(ModelError::NonFinite { what: "variable bound", name: name.clone() });
            }
            if col_lb[j] == f64::INFINITY || col_ub[j] == f64::NEG_INFINITY {
                return Err(ModelError::UnsatisfiableBounds {
                    kind: "variable",
                    name: name.clone(),
                    lb: col_lb[j],
                    ub: col_ub[j],
                });
            }
            if col_lb[j] > col_ub[j] {
                return Err(ModelError::ColBoundCross {
                    name: name.clone(),
                    lb: col_lb[j],
                    ub: col_ub[j],
                });
            }
            if parts.integral[j] {
                let rl = if col_lb[j].is_finite() { ceil_snapped(col_lb[j]) } else { col_lb[j] };
                let ru = if col_ub[j].is_finite() { floor_snapped(col_ub[j]) } else { col_ub[j] };
                if rl > ru {
                    return Err(ModelError::IntegerBoundCross {
                        name: name.clone(),
                        lb: col_lb[j],
                        ub: col_ub[j],
                        rounded_lb: rl,
                        rounded_ub: ru,
                    });
                }
                col_lb[j] = rl;
                col_ub[j] = ru;
            }
        }
        for i in 0..m {
            let name = &parts.row_names[i];
            if parts.row_lb[i].is_nan() || parts.row_ub[i].is_nan() {
                return Err(ModelError::NonFinite { what: "row bound", name: name.clone() });
            }
            if !parts.row_lb[i].is_finite() && !parts.row_ub[i].is_finite() {
                if parts.row_lb[i] == f64::NEG_INFINITY && parts.row_ub[i] == f64::INFINITY {
                    return Err(ModelError::UnboundedRow { name: name.clone() });
                }
                return Err(ModelError::UnsatisfiableBounds {
                    kind: "row",
                    name: name.clone(),
                    lb: parts.row_lb[i],
                    ub: parts.row_ub[i],
                });
            }
            if parts.row_lb[i] > parts.row_ub[i] {
                return Err(ModelError::RowBoundCross {
                    name: name.clone(),
                    lb: parts.row_lb[i],
                    ub: parts.row_ub[i],
                });
            }
        }

        Ok(MipInstance {
            name: parts.name,
            objective: parts.objective,
            objective_constant: parts.objective_constant,
            flipped_sense: parts.flipped_sense,
            matrix: SparseMatrix::from_triplets(m, n, &parts.triplets),
            row_lb: parts.row_lb,
            row_ub: parts.row_ub,
            col_lb,
            col_ub,
            integral: parts.integral,
            row_names: parts.row_names,
            col_names: parts.col_names,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.row_lb.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn objective_constant(&self) -> f64 {
        self.objective_constant
    }

    /// True when the original input was a maximization that has been negated.
    pub fn flipped_sense(&self) -> bool {
        self.flipped_sense
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn row_lb(&self) -> &[f64] {
        &self.row_lb
    }

    pub fn row_ub(&self) -> &[f64] {
        &self.row_ub
    }

    pub fn col_lb(&self) -> &[f64] {
        &self.col_lb
    }

    pub fn col_ub(&self) -> &[f64] {
        &self.col_ub
    }

    pub fn is_integral(&self, j: usize) -> bool {
        self.integral[j]
    }

    pub fn integrality(&self) -> &[bool] {
        &self.integral
    }

    /// Indices of integral variables, ascending.
    pub fn integer_vars(&self) -> Vec<usize> {
        (0..self.num_vars()).filter(|&j| self.integral[j]).collect()
    }

    /// Integral with bounds within `[0, 1]`.
    pub fn is_binary(&self, j: usize) -> bool {
        self.integral[j] && self.col_lb[j] >= 0.0 && self.col_ub[j] <= 1.0
    }

    pub fn row_name(&self, i: usize) -> &str {
        &self.row_names[i]
    }

    pub fn col_name(&self, j: usize) -> &str {
        &self.col_names[j]
    }

    pub fn row_names(&self) -> &[String] {
        &self.row_names
    }

    pub fn col_names(&self) -> &[String] {
        &self.col_names
    }

    /// `c·x + c0` in minimization form.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        let mut acc = self.objective_constant;
        for (cj, xj) in self.objective.iter().zip(x) {
            acc += cj * xj;
        }
        acc
    }

    /// Maps a minimization-form objective value back to the input's sense.
    pub fn objective_in_input_sense(&self, minimized: f64) -> f64 {
        if self.flipped_sense {
            -minimized
        } else {
            minimized
        }
    }

    /// The continuous relaxation: same data, no integrality marks.
    ///
    /// Bounds are untouched (they were already rounded inward), so relaxing a
    /// relaxation returns the same instance.
    pub fn lp_relaxation(&self) -> MipInstance {
        let mut relaxed = self.clone();
        relaxed.integral = vec![false; self.num_vars()];
        relaxed
    }

    /// Returns a copy with variable `j` fixed to `value` (both bounds).
    /// Panics if `value` lies outside the current bounds of `j`.
    pub fn with_fixed_var(&self, j: usize, value: f64) -> MipInstance {
        assert!(
            value >= self.col_lb[j] && value <= self.col_ub[j],
            "fixing {} to {} outside [{}, {}]",
            self.col_names[j],
            value,
            self.col_lb[j],
            self.col_ub[j]
        );
        let mut fixed = self.clone();
        fixed.col_lb[j] = value;
        fixed.col_ub[j] = value;
        fixed
    }

    /// Returns a copy with the variable bounds replaced by `(lb, ub)`.
    /// Intended for installing the leaf domain of a search. Panics on crossed
    /// or mismatched bounds.
    pub fn with_bounds(&self, lb: &[f64], ub: &[f64]) -> MipInstance {
        assert_eq!(lb.len(), self.num_vars());
        assert_eq!(ub.len(), self.num_vars());
        for j in 0..self.num_vars() {
            assert!(lb[j] <= ub[j], "crossed bounds for {}", self.col_names[j]);
        }
        let mut out = self.clone();
        out.col_lb = lb.to_vec();
        out.col_ub = ub.to_vec();
        out
    }
}

/// A candidate point together with its violation summary.
///
/// `feasible` records the verdict at the tolerance passed to
/// [`check_feasibility`]; the stored violations allow re-evaluating the same
/// point at any other tolerance via [`MipSolution::is_feasible_at`].
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MipSolution {
    pub x: Vec<f64>,
    /// `c·x + c0` in minimization form.
    pub objective: f64,
    /// Max over rows of `violation / (1 + |violated row bound|)`.
    pub max_row_violation: f64,
    /// Max over variables of `violation / (1 + |violated bound|)`.
    pub max_bound_violation: f64,
    /// Max over integral variables of `|x_i − round(x_i)|`.
    pub max_integrality_violation: f64,
    pub feasible: bool,
}

impl MipSolution {
    /// Whether all three violation measures pass at `rel_tol`.
    pub fn is_feasible_at(&self, rel_tol: f64) -> bool {
        self.max_row_violation <= rel_tol
            && self.max_bound_violation <= rel_tol
            && self.max_integrality_violation <= rel_tol
    }
}

/// Evaluates a point against an instance.
///
/// Row and bound violations are measured relative to the violated bound
/// (`violation / (1 + |bound|)`); integrality violation is the absolute
/// distance to the nearest integer, compared against `rel_tol` directly.
/// The point is feasible iff all three maxima are `≤ rel_tol`.
pub fn check_feasibility(instance: &MipInstance, x: &[f64], rel_tol: f64) -> MipSolution {
    assert_eq!(x.len(), instance.num_vars(), "solution length mismatch");
    let mut ax = vec![0.0; instance.num_rows()];
    instance.matrix().mul_vec(x, &mut ax);

    let mut row_viol: f64 = 0.0;
    for i in 0..instance.num_rows() {
        let (lo, hi) = (instance.row_lb[i], instance.row_ub[i]);
        if ax[i] > hi {
            row_viol = row_viol.max((ax[i] - hi) / (1.0 + hi.abs()));
        }
        if ax[i] < lo {
            row_viol = row_viol.max((lo - ax[i]) / (1.0 + lo.abs()));
        }
    }

    let mut bound_viol: f64 = 0.0;
    for j in 0..instance.num_vars() {
        let (lo, hi) = (instance.col_lb[j], instance.col_ub[j]);
        if x[j] > hi {
            bound_viol = bound_viol.max((x[j] - hi) / (1.0 + hi.abs()));
        }
        if x[j] < lo {
            bound_viol = bound_viol.max((lo - x[j]) / (1.0 + lo.abs()));
        }
    }

    let mut int_viol: f64 = 0.0;
    for j in 0..instance.num_vars() {
        if instance.integral[j] {
            int_viol = int_viol.max((x[j] - x[j].round()).abs());
        }
    }

    let feasible = row_viol <= rel_tol && bound_viol <= rel_tol && int_viol <= rel_tol;
    MipSolution {
        x: x.to_vec(),
        objective: instance.objective_value(x),
        max_row_violation: row_viol,
        max_bound_violation: bound_viol,
        max_integrality_violation: int_viol,
        feasible,
    }
}

/// Largest gap ever reported, in percent. Degenerate references would
/// otherwise produce astronomically large and meaningless figures.
pub const GAP_CAP_PERCENT: f64 = 1e6;

/// Floor for `|reference|` in the gap denominator.
pub const GAP_REFERENCE_FLOOR: f64 = 1e-10;

/// Relative gap in percent: `100 · |objective − reference| / max(|reference|, 1e-10)`,
/// symmetric in sign conventions and capped at [`GAP_CAP_PERCENT`].
pub fn gap_percent(objective: f64, reference: f64) -> f64 {
    let denom = reference.abs().max(GAP_REFERENCE_FLOOR);
    (100.0 * (objective - reference).abs() / denom).min(GAP_CAP_PERCENT)
}

/// Convenience builder for constructing instances in code.
///
/// Variables start with bounds `[0, +∞)`, continuous, objective coefficient 0.
#[derive(Debug, Clone)]
pub struct MipBuilder {
    name: String,
    objective: Vec<f64>,
    objective_constant: f64,
    maximize: bool,
    triplets: Vec<(usize, usize, f64)>,
    row_lb: Vec<f64>,
    row_ub: Vec<f64>,
    col_lb: Vec<f64>,
    col_ub: Vec<f64>,
    integral: Vec<bool>,
    row_names: Vec<String>,
    col_names: Vec<String>,
}

impl MipBuilder {
    pub fn new(name: &str, num_vars: usize) -> Self {
        MipBuilder {
            name: name.to_string(),
            objective: vec![0.0; num_vars],
            objective_constant: 0.0,
            maximize: false,
            triplets: Vec::new(),
            row_lb: Vec::new(),
            row_ub: Vec::new(),
            col_lb: vec![0.0; num_vars],
            col_ub: vec![f64::INFINITY; num_vars],
            integral: vec![false; num_vars],
            row_names: Vec::new(),
            col_names: (0..num_vars).map(|j| format!("x{j}")).collect(),
        }
    }

    pub fn minimize(mut self, coefficients: &[f64]) -> Self {
        assert_eq!(coefficients.len(), self.objective.len());
        self.objective = coefficients.to_vec();
        self.maximize = false;
        self
    }

    pub fn maximize(mut self, coefficients: &[f64]) -> Self {
        assert_eq!(coefficients.len(), self.objective.len());
        self.objective = coefficients.to_vec();
        self.maximize = true;
        self
    }

    pub fn objective_constant(mut self, constant: f64) -> Self {
        self.objective_constant = constant;
        self
    }

    pub fn bounds(mut self, var: usize, lb: f64, ub: f64) -> Self {
        self.col_lb[var] = lb;
        self.col_ub[var] = ub;
        self
    }

    pub fn integer(mut self, var: usize) -> Self {
        self.integral[var] = true;
        self
    }

    /// Integer with bounds `[0, 1]`.
    pub fn binary(mut self, var: usize) -> Self {
        self.integral[var] = true;
        self.col_lb[var] = 0.0;
        self.col_ub[var] = 1.0;
        self
    }

    pub fn var_name(mut self, var: usize, name: &str) -> Self {
        self.col_names[var] = name.to_string();
        self
    }

    fn push_row(&mut self, coefficients: &[(usize, f64)], lb: f64, ub: f64) {
        let i = self.row_lb.len();
        for &(j, v) in coefficients {
            self.triplets.push((i, j, v));
        }
        self.row_lb.push(lb);
        self.row_ub.push(ub);
        self.row_names.push(format!("r{i}"));
    }

    /// `Σ coefficients · x ≤ ub`
    pub fn row_le(mut self, coefficients: &[(usize, f64)], ub: f64) -> Self {
        self.push_row(coefficients, f64::NEG_INFINITY, ub);
        self
    }

    /// `Σ coefficients · x ≥ lb`
    pub fn row_ge(mut self, coefficients: &[(usize, f64)], lb: f64) -> Self {
        self.push_row(coefficients, lb, f64::INFINITY);
        self
    }

    /// `Σ coefficients · x = rhs`
    pub fn row_eq(mut self, coefficients: &[(usize, f64)], rhs: f64) -> Self {
        self.push_row(coefficients, rhs, rhs);
        self
    }

    /// `lb ≤ Σ coefficients · x ≤ ub`
    pub fn row_range(mut self, lb: f64, coefficients: &[(usize, f64)], ub: f64) -> Self {
        self.push_row(coefficients, lb, ub);
        self
    }

    pub fn build(self) -> Result<MipInstance, ModelError> {
        let (objective, constant) = if self.maximize {
            (self.objective.iter().map(|c| -c).collect(), -self.objective_constant)
        } else {
            (self.objective, self.objective_constant)
        };
        MipInstance::from_parts(InstanceParts {
            name: self.name,
            objective,
            objective_constant: constant,
            flipped_sense: self.maximize,
            triplets: self.triplets,
            row_lb: self.row_lb,
            row_ub: self.row_ub,
            col_lb: self.col_lb,
            col_ub: self.col_ub,
            integral: self.integral,
            row_names: self.row_names,
            col_names: self.col_names,
        })
    }
}
