//! Independent oracles and instance generators for the test suite.
//!
//! Everything here recomputes expected results from first principles — dense
//! linear algebra, exhaustive enumeration, dynamic programming — and never
//! calls the solver, propagation, or search paths it is used to check.

#![allow(dead_code)] // Each integration test pulls in the parts it needs.

use fixprop::model::{MipBuilder, MipInstance};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Dense LU with partial pivoting. `None` when numerically singular.
pub struct Lu {
    lu: Vec<Vec<f64>>,
    perm: Vec<usize>,
    n: usize,
}

impl Lu {
    pub fn factor(mut a: Vec<Vec<f64>>) -> Option<Lu> {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let pivot_row = (k..n)
                .max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())
                .unwrap();
            if a[pivot_row][k].abs() < 1e-9 {
                return None;
            }
            a.swap(k, pivot_row);
            perm.swap(k, pivot_row);
            for i in k + 1..n {
                let f = a[i][k] / a[k][k];
                a[i][k] = f;
                for j in k + 1..n {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
        Some(Lu { lu: a, perm, n })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = b[self.perm[i]];
            for j in 0..i {
                acc -= self.lu[i][j] * y[j];
            }
            y[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= self.lu[i][j] * y[j];
            }
            y[i] = acc / self.lu[i][i];
        }
        y
    }
}

fn index_combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let needed = k - current.len();
        for i in start..=(n - needed) {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut current, &mut out);
    }
    out
}

/// Exact LP optimum by exhaustive enumeration of basic solutions.
///
/// Rows become equations `Ax − s = 0` with slack bounds `[L, U]`; every choice
/// of `m` basic columns with the nonbasic ones pinned at a finite bound is
/// solved densely and checked. Returns the best `(objective, x)` (objective in
/// minimization form, constant included), or `None` when no basic solution is
/// feasible. Only sensible for tiny instances — the test generators keep
/// `n + m` small enough to enumerate.
pub fn lp_oracle(instance: &MipInstance) -> Option<(f64, Vec<f64>)> {
    let n = instance.num_vars();
    let m = instance.num_rows();
    let total = n + m;

    // Dense [A | -I], extended bounds, extended (zero-padded) objective.
    let mut dense = vec![vec![0.0; total]; m];
    for (i, j, v) in instance.matrix().triplets() {
        dense[i][j] = v;
    }
    for i in 0..m {
        dense[i][n + i] = -1.0;
    }
    let mut lo = instance.col_lb().to_vec();
    let mut hi = instance.col_ub().to_vec();
    lo.extend_from_slice(instance.row_lb());
    hi.extend_from_slice(instance.row_ub());

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut consider = |z: &[f64]| {
        let x = &z[..n];
        let obj = instance.objective_value(x);
        if best.as_ref().is_none_or(|(b, _)| obj < *b) {
            best = Some((obj, x.to_vec()));
        }
    };

    if m == 0 {
        // Pure box problem: each variable sits at its cheap bound.
        let mut x = vec![0.0; n];
        for j in 0..n {
            let c = instance.objective()[j];
            x[j] = if c > 0.0 {
                lo[j]
            } else if c < 0.0 {
                hi[j]
            } else if lo[j].is_finite() {
                lo[j]
            } else {
                hi[j]
            };
            if !x[j].is_finite() {
                return None; // Unbounded below.
            }
        }
        consider(&x);
        return best;
    }

    for basis in index_combinations(total, m) {
        let in_basis = {
            let mut mark = vec![false; total];
            for &b in &basis {
                mark[b] = true;
            }
            mark
        };
        let nonbasic: Vec<usize> = (0..total).filter(|&j| !in_basis[j]).collect();
        let cols: Vec<Vec<f64>> = (0..m)
            .map(|i| basis.iter().map(|&b| dense[i][b]).collect())
            .collect();
        let Some(lu) = Lu::factor(cols) else { continue };

        'mask: for mask in 0u32..(1u32 << nonbasic.len()) {
            let mut z = vec![0.0; total];
            for (bit, &j) in nonbasic.iter().enumerate() {
                let v = if mask >> bit & 1 == 1 { hi[j] } else { lo[j] };
                if !v.is_finite() {
                    continue 'mask;
                }
                z[j] = v;
            }
            let rhs: Vec<f64> = (0..m)
                .map(|i| -nonbasic.iter().map(|&j| dense[i][j] * z[j]).sum::<f64>())
                .collect();
            let zb = lu.solve(&rhs);
            for (k, &j) in basis.iter().enumerate() {
                if !(zb[k] >= lo[j] - 1e-7 && zb[k] <= hi[j] + 1e-7) {
                    continue 'mask;
                }
                z[j] = zb[k];
            }
            consider(&z);
        }
    }
    best
}

/// Exact optimum of a pure-integer instance by full enumeration.
///
/// Panics if any variable is continuous or unbounded, or if the grid exceeds
/// twenty million points. Returns `None` when no integer point is feasible.
/// Row feasibility is absolute (`1e-9` slack), which is exact for the integer
/// test data this is used on.
pub fn mip_brute_force(instance: &MipInstance) -> Option<(f64, Vec<f64>)> {
    feasible_points(instance)
        .into_iter()
        .map(|x| (instance.objective_value(&x), x))
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
}

/// All integer-feasible points of a pure-integer instance (same limits as
/// [`mip_brute_force`]).
pub fn feasible_points(instance: &MipInstance) -> Vec<Vec<f64>> {
    integer_grid(instance.col_lb(), instance.col_ub())
        .into_iter()
        .filter(|x| point_satisfies_rows(instance, x))
        .collect()
}

pub fn point_satisfies_rows(instance: &MipInstance, x: &[f64]) -> bool {
    let mut ax = vec![0.0; instance.num_rows()];
    instance.matrix().mul_vec(x, &mut ax);
    (0..instance.num_rows())
        .all(|i| ax[i] >= instance.row_lb()[i] - 1e-9 && ax[i] <= instance.row_ub()[i] + 1e-9)
}

/// Cartesian grid of integer points between `lb` and `ub` (inclusive).
pub fn integer_grid(lb: &[f64], ub: &[f64]) -> Vec<Vec<f64>> {
    let n = lb.len();
    let mut sizes = Vec::with_capacity(n);
    let mut count: u64 = 1;
    for j in 0..n {
        assert!(lb[j].is_finite() && ub[j].is_finite(), "grid needs finite bounds");
        let w = (ub[j] - lb[j]).round() as u64 + 1;
        sizes.push(w);
        count = count.saturating_mul(w);
        assert!(count <= 20_000_000, "integer grid too large to enumerate");
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut point: Vec<f64> = lb.to_vec();
    loop {
        out.push(point.clone());
        let mut j = 0;
        loop {
            if j == n {
                return out;
            }
            point[j] += 1.0;
            if point[j] <= ub[j] + 0.5 {
                break;
            }
            point[j] = lb[j];
            j += 1;
        }
    }
}

/// 0/1 knapsack optimum (maximum value) by dynamic programming.
pub fn knapsack_dp(weights: &[u64], values: &[u64], capacity: u64) -> u64 {
    let mut dp = vec![0u64; capacity as usize + 1];
    for (&w, &v) in weights.iter().zip(values) {
        for cap in (w..=capacity).rev() {
            dp[cap as usize] = dp[cap as usize].max(dp[(cap - w) as usize] + v);
        }
    }
    dp[capacity as usize]
}

/// Minimum cost to pick items with total weight at least `demand`
/// (covering knapsack), by dynamic programming. `None` if unreachable.
pub fn covering_dp(weights: &[u64], costs: &[u64], demand: u64) -> Option<u64> {
    const UNREACHED: u64 = u64::MAX / 2;
    let mut dp = vec![UNREACHED; demand as usize + 1];
    dp[0] = 0;
    for (&w, &c) in weights.iter().zip(costs) {
        for covered in (0..=demand).rev() {
            let next = (covered + w).min(demand) as usize;
            let candidate = dp[covered as usize].saturating_add(c);
            if candidate < dp[next] {
                dp[next] = candidate;
            }
        }
    }
    (dp[demand as usize] < UNREACHED).then_some(dp[demand as usize])
}

/// Random bounded LP that is feasible by construction: dense-ish coefficients
/// on a quarter-integer grid, box bounds, and row bounds placed around the
/// activity of an interior point. Sizes stay small enough for [`lp_oracle`].
pub fn random_box_lp(seed: u64) -> MipInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=7usize);
    let m = rng.gen_range(2..=5usize);
    let grid = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| -> f64 {
        let steps = ((hi - lo) / 0.25).round() as i64;
        lo + 0.25 * rng.gen_range(0..=steps) as f64
    };

    let mut builder = MipBuilder::new(&format!("boxlp{seed}"), n);
    let mut point = vec![0.0; n];
    let mut lo = vec![0.0; n];
    let mut hi = vec![0.0; n];
    for j in 0..n {
        lo[j] = grid(&mut rng, -3.0, 0.0);
        hi[j] = grid(&mut rng, 0.5, 4.0);
        point[j] = grid(&mut rng, lo[j], hi[j]);
        builder = builder.bounds(j, lo[j], hi[j]);
    }
    let mut objective = vec![0.0; n];
    for coef in objective.iter_mut() {
        *coef = grid(&mut rng, -5.0, 5.0);
    }
    builder = builder.minimize(&objective);

    for _ in 0..m {
        let mut coefficients = Vec::new();
        let mut activity = 0.0;
        for (j, &pj) in point.iter().enumerate() {
            if rng.gen_bool(0.8) {
                let a = grid(&mut rng, -4.0, 4.0);
                if a != 0.0 {
                    coefficients.push((j, a));
                    activity += a * pj;
                }
            }
        }
        if coefficients.is_empty() {
            coefficients.push((0, 1.0));
            activity = point[0];
        }
        builder = match rng.gen_range(0..4) {
            0 => builder.row_le(&coefficients, activity + grid(&mut rng, 0.25, 3.0)),
            1 => builder.row_ge(&coefficients, activity - grid(&mut rng, 0.25, 3.0)),
            2 => builder.row_eq(&coefficients, activity),
            _ => {
                let below = grid(&mut rng, 0.25, 3.0);
                let above = grid(&mut rng, 0.25, 3.0);
                builder.row_range(activity - below, &coefficients, activity + above)
            }
        };
    }
    builder.build().expect("generated LP is valid")
}

/// Random all-binary instance with a handful of small-coefficient rows.
/// Roughly a quarter are integer-infeasible. Objective is generic (distinct
/// optima almost surely).
pub fn random_binary_mip(seed: u64, max_vars: usize) -> MipInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb1a5);
    let n = rng.gen_range(2..=max_vars);
    let m = rng.gen_range(1..=4usize);
    let mut builder = MipBuilder::new(&format!("bin{seed}"), n);
    for j in 0..n {
        builder = builder.binary(j);
    }
    let mut objective = vec![0.0; n];
    for coef in objective.iter_mut() {
        *coef = rng.gen_range(-20..=20i64) as f64 + 0.125;
    }
    builder = builder.minimize(&objective);

    // Anchor point keeps most instances feasible; deliberate over-tightening
    // makes some infeasible.
    let anchor: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=1u8) as f64).collect();
    for _ in 0..m {
        let mut coefficients = Vec::new();
        let mut activity = 0.0;
        for (j, &zj) in anchor.iter().enumerate() {
            if rng.gen_bool(0.7) {
                let a = rng.gen_range(-3..=3i64) as f64;
                if a != 0.0 {
                    coefficients.push((j, a));
                    activity += a * zj;
                }
            }
        }
        if coefficients.is_empty() {
            coefficients.push((0, 1.0));
            activity = anchor[0];
        }
        let infeasible_push = rng.gen_bool(0.25);
        builder = if infeasible_push {
            let shift = rng.gen_range(1..=3) as f64;
            let total: f64 = coefficients.iter().map(|&(_, a)| a.abs()).sum();
            // A window strictly above the maximum possible activity sometimes
            // cuts everything off.
            builder.row_ge(&coefficients, total + shift)
        } else {
            match rng.gen_range(0..3) {
                0 => builder.row_le(&coefficients, activity + rng.gen_range(0..=2) as f64),
                1 => builder.row_ge(&coefficients, activity - rng.gen_range(0..=2) as f64),
                _ => builder.row_eq(&coefficients, activity),
            }
        };
    }
    builder.build().expect("generated binary instance is valid")
}

pub struct KnapsackFamily {
    pub instance: MipInstance,
    /// Exact optimum of the minimization form (negated maximum value).
    pub optimum: f64,
}

/// Binary knapsack: maximize value under one weight row. Weights and values
/// are integers so the DP optimum is exact.
pub fn random_knapsack(seed: u64, max_vars: usize) -> KnapsackFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5ac4);
    let n = rng.gen_range(max_vars / 2..=max_vars);
    let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=30u64)).collect();
    let values: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=25u64)).collect();
    let total: u64 = weights.iter().sum();
    let capacity = (total * 2 / 5).max(*weights.iter().max().unwrap());

    let mut builder = MipBuilder::new(&format!("knap{seed}"), n);
    for j in 0..n {
        builder = builder.binary(j);
    }
    let objective: Vec<f64> = values.iter().map(|&v| v as f64).collect();
    let row: Vec<(usize, f64)> = weights.iter().enumerate().map(|(j, &w)| (j, w as f64)).collect();
    let instance = builder
        .maximize(&objective)
        .row_le(&row, capacity as f64)
        .build()
        .expect("knapsack is valid");
    let optimum = -(knapsack_dp(&weights, &values, capacity) as f64);
    KnapsackFamily { instance, optimum }
}

/// Covering knapsack: minimize cost subject to one ≥ row. Feasible by
/// construction (demand never exceeds total weight).
pub fn random_covering(seed: u64, max_vars: usize) -> KnapsackFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0fe);
    let n = rng.gen_range(max_vars / 2..=max_vars);
    let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=30u64)).collect();
    let costs: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=25u64)).collect();
    let total: u64 = weights.iter().sum();
    let demand = (total * 2 / 5).max(1);

    let mut builder = MipBuilder::new(&format!("cover{seed}"), n);
    for j in 0..n {
        builder = builder.binary(j);
    }
    let objective: Vec<f64> = costs.iter().map(|&c| c as f64).collect();
    let row: Vec<(usize, f64)> = weights.iter().enumerate().map(|(j, &w)| (j, w as f64)).collect();
    let instance = builder
        .minimize(&objective)
        .row_ge(&row, demand as f64)
        .build()
        .expect("covering instance is valid");
    let optimum = covering_dp(&weights, &costs, demand).expect("coverable by construction") as f64;
    KnapsackFamily { instance, optimum }
}
