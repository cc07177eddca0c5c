//! First-order LP solving: restarted, averaged primal-dual hybrid gradient.
//!
//! Works on the saddle-point form of `min c·x` over `l ≤ x ≤ u`, `L ≤ Ax ≤ U`:
//!
//! ```text
//!     min_{x ∈ [l,u]}  max_y  c·x − yᵀAx + p(y),
//!     p_i(y_i) = L_i·y_i for y_i ≥ 0,  U_i·y_i for y_i < 0,
//! ```
//!
//! which makes duals of `≤` rows nonpositive, duals of `≥` rows nonnegative,
//! equality duals free, and reduced costs `r = c − Aᵀy`. One iteration is
//!
//! ```text
//!     x⁺ = clamp(x − τ(c − Aᵀy), l, u)
//!     y⁺ = y + σ·(proj_{[L,U]}(A(2x⁺ − x) − y/σ) − A(2x⁺ − x))
//! ```
//!
//! The dual step is the proximal move for `p`; the interval projection covers
//! all four row types uniformly. Iterates are averaged within restart epochs
//! and the method restarts from the average whenever the average's
//! worst-case residual drops below a fixed fraction of its value at the last
//! restart. All termination measures are evaluated on unscaled quantities, so
//! a returned `Optimal` certifies the residuals on the original data.

mod scaling;

pub use scaling::Scaling;

use crate::model::MipInstance;
use crate::sparse::SparseMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Iterations between convergence checks. Checks are costlier than plain
/// iterations (extra products in original space), so they run on a fixed
/// cadence; the cadence is part of the deterministic iteration contract.
pub const CHECK_EVERY: u64 = 32;

/// Iterate sup-norm beyond which the run is declared divergent.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

#[derive(Debug, Error)]
pub enum FolpError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("iterates became non-finite at iteration {iteration}")]
    NonFinite { iteration: u64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FolpConfig {
    /// Relative tolerance applied to all three residual measures.
    pub tolerance: f64,
    pub max_iterations: u64,
    /// Wall-clock limit in seconds. `None` keeps runs machine-independent.
    pub time_limit: Option<f64>,
    /// Restart when the average's merit falls below `trigger ×` its value at
    /// the last restart.
    pub restart_trigger: f64,
    /// Step sizes are `step_scale / ‖A‖`, keeping `τσ‖A‖² < 1`.
    pub step_scale: f64,
    /// Skews τ (primal) against σ (dual): `τ = w·s/‖A‖`, `σ = s/(w·‖A‖)`.
    pub primal_weight: f64,
    pub power_iterations: u32,
    pub ruiz_sweeps: u32,
}

impl Default for FolpConfig {
    fn default() -> Self {
        FolpConfig {
            tolerance: 1e-4,
            max_iterations: 200_000,
            time_limit: None,
            restart_trigger: 0.36,
            step_scale: 0.9,
            primal_weight: 1.0,
            power_iterations: 30,
            ruiz_sweeps: 10,
        }
    }
}

impl FolpConfig {
    pub fn with_tolerance(tolerance: f64) -> Self {
        FolpConfig { tolerance, ..Default::default() }
    }

    fn validate(&self) -> Result<(), FolpError> {
        let mut problems = Vec::new();
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            problems.push("tolerance must be a positive finite number");
        }
        if self.max_iterations == 0 {
            problems.push("max_iterations must be at least 1");
        }
        if !(self.restart_trigger > 0.0 && self.restart_trigger < 1.0) {
            problems.push("restart_trigger must lie in (0, 1)");
        }
        if !(self.step_scale > 0.0 && self.step_scale < 1.0) {
            problems.push("step_scale must lie in (0, 1)");
        }
        if !(self.primal_weight > 0.0 && self.primal_weight.is_finite()) {
            problems.push("primal_weight must be positive");
        }
        if let Some(t) = self.time_limit {
            if !(t > 0.0) {
                problems.push("time_limit must be positive when set");
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(FolpError::InvalidConfig(problems.join("; ")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    /// All three residual measures passed the requested tolerance.
    Optimal,
    IterationLimit,
    TimeLimit,
    /// An iterate diverged past [`DIVERGENCE_LIMIT`]; the most common cause
    /// is an infeasible (or unbounded) problem.
    PrimalInfeasibleGuess,
}

/// Relative termination measures at a primal/dual pair, plus the two
/// objective values they derive from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `‖dist(Ax, [L,U])‖₂ / (1 + max(‖L‖₂, ‖U‖₂))`, norms over finite entries.
    pub primal: f64,
    /// `‖c − Aᵀy − z‖₂ / (1 + ‖c‖₂)` with `z` the part of the reduced cost
    /// absorbable by a finite variable bound.
    pub dual: f64,
    /// `|pobj − dobj| / (1 + |pobj| + |dobj|)`.
    pub gap: f64,
    pub primal_objective: f64,
    pub dual_objective: f64,
}

impl Residuals {
    /// The worst of the three measures; the solver's single merit value.
    pub fn merit(&self) -> f64 {
        self.primal.max(self.dual).max(self.gap)
    }

    pub fn within(&self, tolerance: f64) -> bool {
        self.merit() <= tolerance
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `c − Aᵀy`, recomputed on the original (unscaled) data.
    pub reduced_costs: Vec<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub residuals: Residuals,
    pub iterations: u64,
    /// The average-iterate merit recorded at the start of each restart epoch;
    /// non-increasing by construction.
    pub restart_merits: Vec<f64>,
}

/// `r = c − Aᵀy` on the instance's own data.
pub fn reduced_costs(instance: &MipInstance, y: &[f64]) -> Vec<f64> {
    let mut aty = vec![0.0; instance.num_vars()];
    instance.matrix().mul_vec_transpose(y, &mut aty);
    instance
        .objective()
        .iter()
        .zip(&aty)
        .map(|(c, a)| c - a)
        .collect()
}

/// The part of a reduced cost a finite bound can absorb as a bound dual:
/// nonnegative values need a finite lower bound, negative ones a finite upper.
fn imputed_bound_dual(r: f64, lb: f64, ub: f64) -> f64 {
    if r >= 0.0 {
        if lb.is_finite() {
            r
        } else {
            0.0
        }
    } else if ub.is_finite() {
        r
    } else {
        0.0
    }
}

/// Relative primal/dual residuals and gap at `(x, y)`.
///
/// Pure in its inputs: feeding back a solution's iterates reproduces the
/// solution's stored residuals exactly. The dual objective is `−∞` (and the
/// gap saturates at 1) if `y` lies outside the dual sign cone of some row —
/// the solver never produces such a `y`, but arbitrary callers can.
pub fn residuals(instance: &MipInstance, x: &[f64], y: &[f64]) -> Residuals {
    assert_eq!(x.len(), instance.num_vars());
    assert_eq!(y.len(), instance.num_rows());
    let m = instance.num_rows();
    let n = instance.num_vars();

    let mut ax = vec![0.0; m];
    instance.matrix().mul_vec(x, &mut ax);
    let mut primal_sq = 0.0;
    let mut row_lb_sq = 0.0;
    let mut row_ub_sq = 0.0;
    for i in 0..m {
        let (lo, hi) = (instance.row_lb()[i], instance.row_ub()[i]);
        let over = (ax[i] - hi).max(0.0);
        let under = (lo - ax[i]).max(0.0);
        let dist = over.max(under);
        primal_sq += dist * dist;
        if lo.is_finite() {
            row_lb_sq += lo * lo;
        }
        if hi.is_finite() {
            row_ub_sq += hi * hi;
        }
    }
    let primal = primal_sq.sqrt() / (1.0 + row_lb_sq.sqrt().max(row_ub_sq.sqrt()));

    let r = reduced_costs(instance, y);
    let mut dual_sq = 0.0;
    let mut c_sq = 0.0;
    let mut bound_terms = 0.0;
    for j in 0..n {
        let (lo, hi) = (instance.col_lb()[j], instance.col_ub()[j]);
        let z = imputed_bound_dual(r[j], lo, hi);
        let slack = r[j] - z;
        dual_sq += slack * slack;
        c_sq += instance.objective()[j] * instance.objective()[j];
        if z > 0.0 {
            bound_terms += z * lo;
        } else if z < 0.0 {
            bound_terms += z * hi;
        }
    }
    let dual = dual_sq.sqrt() / (1.0 + c_sq.sqrt());

    let mut row_terms = 0.0;
    for i in 0..m {
        let (lo, hi) = (instance.row_lb()[i], instance.row_ub()[i]);
        if y[i] > 0.0 {
            row_terms += if lo.is_finite() { y[i] * lo } else { f64::NEG_INFINITY };
        } else if y[i] < 0.0 {
            row_terms += if hi.is_finite() { y[i] * hi } else { f64::NEG_INFINITY };
        }
    }

    let primal_objective = instance.objective_value(x);
    let dual_objective = row_terms + bound_terms + instance.objective_constant();
    let gap = if dual_objective.is_finite() {
        (primal_objective - dual_objective).abs()
            / (1.0 + primal_objective.abs() + dual_objective.abs())
    } else {
        1.0
    };

    Residuals { primal, dual, gap, primal_objective, dual_objective }
}

/// Largest singular value of `A` by power iteration on `AᵀA`, from a fixed
/// deterministic start vector. Underestimates slightly; the step-scale margin
/// absorbs that.
fn operator_norm(matrix: &SparseMatrix, iterations: u32) -> f64 {
    let n = matrix.ncols();
    let m = matrix.nrows();
    if n == 0 || m == 0 || matrix.nnz() == 0 {
        return 0.0;
    }
    let mut v: Vec<f64> = (0..n).map(|j| 1.0 + 0.077 * ((j * 7919) % 13) as f64).collect();
    let norm0 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    for a in v.iter_mut() {
        *a /= norm0;
    }
    let mut av = vec![0.0; m];
    let mut atav = vec![0.0; n];
    let mut sigma_sq = 0.0;
    for _ in 0..iterations {
        matrix.mul_vec(&v, &mut av);
        matrix.mul_vec_transpose(&av, &mut atav);
        sigma_sq = atav.iter().map(|a| a * a).sum::<f64>().sqrt();
        if sigma_sq <= 1e-300 {
            return 0.0;
        }
        for (vj, aj) in v.iter_mut().zip(&atav) {
            *vj = aj / sigma_sq;
        }
    }
    sigma_sq.sqrt()
}

/// Row classification for the dual proximal step. The one-sided forms keep
/// the dual inside its sign cone *exactly* (`min`/`max` against 0), where the
/// generic projection formula can leak a few ulps across zero and poison the
/// dual objective with an infinite bound term.
#[derive(Clone, Copy)]
enum RowKind {
    /// `L = U = b`: free dual.
    Equal,
    /// Only an upper bound: dual stays ≤ 0.
    UpperOnly,
    /// Only a lower bound: dual stays ≥ 0.
    LowerOnly,
    /// Two finite bounds: dual may take either sign.
    Range,
}

struct ScaledData {
    matrix: SparseMatrix,
    objective: Vec<f64>,
    col_lb: Vec<f64>,
    col_ub: Vec<f64>,
    row_lb: Vec<f64>,
    row_ub: Vec<f64>,
    row_kind: Vec<RowKind>,
}

fn scale_problem(instance: &MipInstance, scaling: &Scaling) -> ScaledData {
    let n = instance.num_vars();
    let m = instance.num_rows();
    let mut objective = vec![0.0; n];
    let mut col_lb = vec![0.0; n];
    let mut col_ub = vec![0.0; n];
    for j in 0..n {
        let s = scaling.col_scale[j];
        objective[j] = instance.objective()[j] * s;
        col_lb[j] = instance.col_lb()[j] / s;
        col_ub[j] = instance.col_ub()[j] / s;
    }
    let mut row_lb = vec![0.0; m];
    let mut row_ub = vec![0.0; m];
    let mut row_kind = Vec::with_capacity(m);
    for i in 0..m {
        let s = scaling.row_scale[i];
        row_lb[i] = instance.row_lb()[i] * s;
        row_ub[i] = instance.row_ub()[i] * s;
        row_kind.push(match (row_lb[i].is_finite(), row_ub[i].is_finite()) {
            (true, true) if row_lb[i] == row_ub[i] => RowKind::Equal,
            (true, true) => RowKind::Range,
            (false, true) => RowKind::UpperOnly,
            (true, false) => RowKind::LowerOnly,
            (false, false) => unreachable!("both-infinite rows are rejected at construction"),
        });
    }
    ScaledData {
        matrix: scaling.apply(instance.matrix()),
        objective,
        col_lb,
        col_ub,
        row_lb,
        row_ub,
        row_kind,
    }
}

/// Solves the LP over an instance's bounds and rows (integrality marks are
/// ignored; relax explicitly if the distinction matters).
///
/// Deterministic: identical instance and configuration produce bit-identical
/// iterate sequences and results — unless a `time_limit` is set, since wall
/// time is machine-dependent. Returns an error only for invalid
/// configurations or non-finite iterates; infeasibility and unboundedness
/// surface as [`LpStatus::PrimalInfeasibleGuess`] divergence or as an
/// iteration-limited non-optimal result.
pub fn pdhg_solve(instance: &MipInstance, config: &FolpConfig) -> Result<LpSolution, FolpError> {
    config.validate()?;
    let n = instance.num_vars();
    let m = instance.num_rows();
    let started = std::time::Instant::now();

    let scaling = Scaling::ruiz(instance.matrix(), config.ruiz_sweeps);
    let data = scale_problem(instance, &scaling);
    let norm = operator_norm(&data.matrix, config.power_iterations);
    let base_step = if norm > 1e-12 { config.step_scale / norm } else { config.step_scale };
    let tau = base_step * config.primal_weight;
    let sigma = base_step / config.primal_weight;

    // Scaled-space iterates and epoch accumulators.
    let mut x: Vec<f64> = (0..n).map(|j| 0.0f64.clamp(data.col_lb[j], data.col_ub[j])).collect();
    let mut y = vec![0.0; m];
    let mut sum_x = vec![0.0; n];
    let mut sum_y = vec![0.0; m];
    let mut count: u64 = 0;

    let mut aty = vec![0.0; n];
    let mut x_next = vec![0.0; n];
    let mut x_hat = vec![0.0; n];
    let mut ax_hat = vec![0.0; m];

    let mut restart_merits: Vec<f64> = Vec::new();
    let mut baseline: Option<f64> = None;

    // Unscale a scaled pair into original space.
    let unscale = |xs: &[f64], ys: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let xo = xs.iter().zip(&scaling.col_scale).map(|(v, s)| v * s).collect();
        let yo = ys.iter().zip(&scaling.row_scale).map(|(v, s)| v * s).collect();
        (xo, yo)
    };

    let finish = |status: LpStatus,
                  xo: Vec<f64>,
                  yo: Vec<f64>,
                  res: Residuals,
                  iterations: u64,
                  restart_merits: Vec<f64>| {
        let r = reduced_costs(instance, &yo);
        Ok(LpSolution {
            status,
            x: xo,
            y: yo,
            reduced_costs: r,
            primal_objective: res.primal_objective,
            dual_objective: res.dual_objective,
            residuals: res,
            iterations,
            restart_merits,
        })
    };

    let mut iteration: u64 = 0;
    loop {
        let at_limit = iteration >= config.max_iterations;
        if iteration % CHECK_EVERY == 0 || at_limit {
            // Candidates: epoch average first (preferred on merit ties), then
            // the current iterate.
            let (cur_x, cur_y) = unscale(&x, &y);
            if cur_x.iter().chain(cur_y.iter()).any(|v| !v.is_finite()) {
                return Err(FolpError::NonFinite { iteration });
            }
            let sup = cur_x
                .iter()
                .chain(cur_y.iter())
                .fold(0.0f64, |acc, v| acc.max(v.abs()));
            if sup > DIVERGENCE_LIMIT {
                let res = residuals(instance, &cur_x, &cur_y);
                return finish(
                    LpStatus::PrimalInfeasibleGuess,
                    cur_x,
                    cur_y,
                    res,
                    iteration,
                    restart_merits,
                );
            }

            let cur_res = residuals(instance, &cur_x, &cur_y);
            let averaged = if count > 0 {
                let avg_xs: Vec<f64> = sum_x.iter().map(|v| v / count as f64).collect();
                let avg_ys: Vec<f64> = sum_y.iter().map(|v| v / count as f64).collect();
                let (avg_x, avg_y) = unscale(&avg_xs, &avg_ys);
                let res = residuals(instance, &avg_x, &avg_y);
                Some((avg_x, avg_y, res, avg_xs, avg_ys))
            } else {
                None
            };

            let avg_wins = averaged
                .as_ref()
                .is_some_and(|(_, _, res, _, _)| res.merit() <= cur_res.merit());
            let best_res = if avg_wins { averaged.as_ref().unwrap().2 } else { cur_res };

            if best_res.within(config.tolerance) {
                let (xo, yo) = if avg_wins {
                    let (ax, ay, _, _, _) = averaged.unwrap();
                    (ax, ay)
                } else {
                    (cur_x, cur_y)
                };
                return finish(LpStatus::Optimal, xo, yo, best_res, iteration, restart_merits);
            }
            if at_limit {
                let (xo, yo) = if avg_wins {
                    let (ax, ay, _, _, _) = averaged.unwrap();
                    (ax, ay)
                } else {
                    (cur_x, cur_y)
                };
                return finish(
                    LpStatus::IterationLimit,
                    xo,
                    yo,
                    best_res,
                    iteration,
                    restart_merits,
                );
            }
            if let Some(limit) = config.time_limit {
                if started.elapsed().as_secs_f64() > limit {
                    let (xo, yo) = if avg_wins {
                        let (ax, ay, _, _, _) = averaged.unwrap();
                        (ax, ay)
                    } else {
                        (cur_x, cur_y)
                    };
                    return finish(
                        LpStatus::TimeLimit,
                        xo,
                        yo,
                        best_res,
                        iteration,
                        restart_merits,
                    );
                }
            }

            if let Some((_, _, avg_res, avg_xs, avg_ys)) = averaged {
                let merit = avg_res.merit();
                match baseline {
                    None => {
                        baseline = Some(merit);
                        restart_merits.push(merit);
                    }
                    Some(b) if merit <= config.restart_trigger * b => {
                        // Restart from the average.
                        x.copy_from_slice(&avg_xs);
                        y.copy_from_slice(&avg_ys);
                        sum_x.fill(0.0);
                        sum_y.fill(0.0);
                        count = 0;
                        baseline = Some(merit);
                        restart_merits.push(merit);
                    }
                    _ => {}
                }
            }
        }

        // One primal-dual step in scaled space.
        data.matrix.mul_vec_transpose(&y, &mut aty);
        for j in 0..n {
            let step = x[j] - tau * (data.objective[j] - aty[j]);
            x_next[j] = step.clamp(data.col_lb[j], data.col_ub[j]);
            x_hat[j] = 2.0 * x_next[j] - x[j];
        }
        data.matrix.mul_vec(&x_hat, &mut ax_hat);
        for i in 0..m {
            // All four arms are the proximal step for the row's support
            // function; the one-sided arms use the closed form so the sign
            // constraint holds exactly in floating point.
            y[i] = match data.row_kind[i] {
                RowKind::Equal => y[i] + sigma * (data.row_lb[i] - ax_hat[i]),
                RowKind::UpperOnly => (y[i] + sigma * (data.row_ub[i] - ax_hat[i])).min(0.0),
                RowKind::LowerOnly => (y[i] + sigma * (data.row_lb[i] - ax_hat[i])).max(0.0),
                RowKind::Range => {
                    let v = ax_hat[i] - y[i] / sigma;
                    let projected = v.clamp(data.row_lb[i], data.row_ub[i]);
                    y[i] + sigma * (projected - ax_hat[i])
                }
            };
        }
        std::mem::swap(&mut x, &mut x_next);

        for (acc, v) in sum_x.iter_mut().zip(&x) {
            *acc += v;
        }
        for (acc, v) in sum_y.iter_mut().zip(&y) {
            *acc += v;
        }
        count += 1;
        iteration += 1;
    }
}
