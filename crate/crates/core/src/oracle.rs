//! Brute-force maximizers and property checkers for small instances.
//!
//! Nothing here calls the solver's update rule or the greedy oracles, so the
//! checks stay independent of the code paths they validate.

use std::fmt;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::{certified_smoothness, uniform_point, MultilinearExtension, Objective};
use crate::point::{dot, join, meet};
use crate::regions::{solve_lp, LpProblem, LpStatus, Region, Sense};
use crate::schedule::Schedule;
use crate::solver::SolveTrace;

pub const GRID_MAX_DIM: usize = 6;
pub const GRID_RESOLUTIONS: [f64; 3] = [0.1, 0.05, 0.02];
pub const CORNER_MAX_DIM: usize = 20;
const GRID_MAX_POINTS: u64 = 100_000_000;
const MEMBERSHIP_TOL: f64 = 1e-9;

/// Tolerance for the sampled DR inequality, the iterate bounds and gradient order.
pub const INEQUALITY_TOL: f64 = 1e-9;
/// Tolerance for the Lyapunov increment bound.
pub const LYAPUNOV_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    CornerEnumeration,
    GridSearch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub point: Vec<f64>,
    pub value: f64,
    pub method: OracleMethod,
    pub resolution: Option<f64>,
    /// Upper bound on `F*_true - value`: 0 for corner enumeration,
    /// `L·sqrt(n)·r` for grid search.
    pub gap: f64,
}

impl OracleResult {
    /// Conservative reference `value - gap` used by certificate checks.
    pub fn lower_reference(&self) -> f64 {
        self.value - self.gap
    }
}

/// Exact maximum of a multilinear extension over the full box, by enumerating
/// all corners. The lowest bitmask wins ties.
pub fn corner_maximize(objective: &MultilinearExtension, region: &Region) -> Result<OracleResult> {
    if !region.is_box() {
        return Err(Error::Oracle("corner enumeration is exact only on the full box".into()));
    }
    let table = objective.table();
    let n = table.n();
    if n != region.dim() {
        return Err(Error::DimensionMismatch { expected: region.dim(), actual: n });
    }
    let (mask, value) =
        table
            .values()
            .iter()
            .enumerate()
            .fold((0usize, f64::NEG_INFINITY), |best, (m, &v)| if v > best.1 { (m, v) } else { best });
    let point = (0..n).map(|i| ((mask >> i) & 1) as f64).collect();
    Ok(OracleResult { point, value, method: OracleMethod::CornerEnumeration, resolution: None, gap: 0.0 })
}

/// Maximum over feasible points of the grid `{0, r, 2r, .., 1}^n`.
///
/// Grid points are ordered by mixed-radix index with coordinate 0 least
/// significant; the smallest index wins ties regardless of how the scan is
/// partitioned across threads.
pub fn grid_maximize<O: Objective + ?Sized>(objective: &O, region: &Region, resolution: f64) -> Result<OracleResult> {
    let n = region.dim();
    if objective.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: objective.dim() });
    }
    if n > GRID_MAX_DIM {
        return Err(Error::Oracle(format!("grid search supports n <= {GRID_MAX_DIM}, got n = {n}")));
    }
    if !GRID_RESOLUTIONS.iter().any(|r| (r - resolution).abs() < 1e-12) {
        return Err(Error::Oracle(format!("resolution must be one of {GRID_RESOLUTIONS:?}, got {resolution}")));
    }
    let steps = (1.0 / resolution).round() as u64;
    let per_axis = steps + 1;
    let total = per_axis.checked_pow(n as u32).filter(|t| *t <= GRID_MAX_POINTS).ok_or_else(|| {
        Error::Oracle(format!("grid of {per_axis}^{n} points is too large; use a coarser resolution"))
    })?;

    let point_at = |mut idx: u64| -> Vec<f64> {
        (0..n)
            .map(|_| {
                let d = idx % per_axis;
                idx /= per_axis;
                d as f64 / steps as f64
            })
            .collect()
    };
    let best = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let x = point_at(idx);
            region.contains(&x, MEMBERSHIP_TOL).then(|| (idx, objective.value(&x)))
        })
        .reduce_with(|a, b| match a.1.partial_cmp(&b.1) {
            Some(std::cmp::Ordering::Greater) => a,
            Some(std::cmp::Ordering::Less) => b,
            _ => {
                if a.0 <= b.0 {
                    a
                } else {
                    b
                }
            }
        });
    let Some((idx, value)) = best else {
        return Err(Error::Oracle(format!(
            "no grid point of resolution {resolution} is feasible; try a finer resolution"
        )));
    };
    let gap = certified_smoothness(objective) * (n as f64).sqrt() * resolution;
    Ok(OracleResult {
        point: point_at(idx),
        value,
        method: OracleMethod::GridSearch,
        resolution: Some(resolution),
        gap,
    })
}

/// Central differences; `x` must sit at least `delta` inside the box.
pub fn finite_difference_gradient<O: Objective + ?Sized>(objective: &O, x: &[f64], delta: f64) -> Result<Vec<f64>> {
    if x.len() != objective.dim() {
        return Err(Error::DimensionMismatch { expected: objective.dim(), actual: x.len() });
    }
    if delta.is_nan() || delta <= 0.0 || x.iter().any(|&v| v < delta || v > 1.0 - delta) {
        return Err(Error::Oracle(format!("finite differences need a margin of {delta} inside the box")));
    }
    let mut probe = x.to_vec();
    Ok((0..x.len())
        .map(|i| {
            probe[i] = x[i] + delta;
            let up = objective.value(&probe);
            probe[i] = x[i] - delta;
            let down = objective.value(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * delta)
        })
        .collect())
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub instance: String,
    /// Worst slack observed; negative beyond the tolerance means failure.
    pub margin: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckReport {
    pub fn new(check: &str, margin: f64, passed: bool) -> Self {
        Self { check: check.into(), instance: String::new(), margin, passed, detail: None }
    }

    pub fn for_instance(mut self, instance: impl Into<String>) -> Self {
        self.instance = instance.into();
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "check={} instance={} margin={:.6e} status={}",
            self.check,
            if self.instance.is_empty() { "-" } else { &self.instance },
            self.margin,
            if self.passed { "pass" } else { "fail" }
        )?;
        if let Some(d) = &self.detail {
            write!(f, " detail=\"{d}\"")?;
        }
        Ok(())
    }
}

/// `F(x∨y) + F(x∧y) - 2F(x) - ⟨∇F(x), y - x⟩`; positive means violated.
pub fn dr_violation<O: Objective + ?Sized>(objective: &O, x: &[f64], y: &[f64]) -> Result<f64> {
    let lhs: f64 = objective.gradient(x).iter().zip(y.iter().zip(x)).map(|(g, (a, b))| g * (a - b)).sum();
    let rhs = objective.value(&join(x, y)?) + objective.value(&meet(x, y)?) - 2.0 * objective.value(x);
    Ok(rhs - lhs)
}

/// Samples `(x, y)` uniformly in the box and checks
/// `⟨∇F(x), y - x⟩ >= F(x∨y) + F(x∧y) - 2F(x)`.
pub fn check_dr_inequality<O: Objective + ?Sized>(objective: &O, trials: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = objective.dim();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials {
        let x = uniform_point(&mut rng, n);
        let y = uniform_point(&mut rng, n);
        worst = worst.max(dr_violation(objective, &x, &y).unwrap_or(f64::INFINITY));
    }
    let worst = if trials == 0 { 0.0 } else { worst };
    CheckReport::new("dr_inequality", -worst, worst <= INEQUALITY_TOL).with_detail(format!("{trials} sampled pairs"))
}

/// For sampled `x <= y`, checks `∇F(x) >= ∇F(y)` coordinatewise.
pub fn check_gradient_antitone<O: Objective + ?Sized>(objective: &O, trials: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = objective.dim();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials {
        let x = uniform_point(&mut rng, n);
        let y: Vec<f64> = x.iter().map(|&xi| xi + (1.0 - xi) * rng.random::<f64>()).collect();
        let (gx, gy) = (objective.gradient(&x), objective.gradient(&y));
        worst = gx.iter().zip(&gy).fold(worst, |w, (a, b)| w.max(b - a));
    }
    let worst = if trials == 0 { 0.0 } else { worst };
    CheckReport::new("gradient_antitone", -worst, worst <= INEQUALITY_TOL)
        .with_detail(format!("{trials} ordered pairs"))
}

/// Finite-difference agreement, error measured relative to `max(1, |∇F_i|)`.
pub fn check_gradient_consistency<O: Objective + ?Sized>(
    objective: &O,
    samples: usize,
    seed: u64,
    delta: f64,
    tol: f64,
) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = objective.dim();
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(delta..=1.0 - delta)).collect();
        let fd = finite_difference_gradient(objective, &x, delta)?;
        let g = objective.gradient(&x);
        for (a, b) in fd.iter().zip(&g) {
            worst = worst.max((a - b).abs() / b.abs().max(1.0));
        }
    }
    Ok(CheckReport::new("gradient_finite_difference", tol - worst, worst <= tol)
        .with_detail(format!("{samples} points, delta {delta:e}, max error {worst:.3e}")))
}

/// Smallest sampled value of `F`; detects objectives that go negative.
pub fn check_nonnegative<O: Objective + ?Sized>(objective: &O, samples: usize, seed: u64) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = objective.dim();
    let lowest = (0..samples)
        .map(|_| objective.value(&uniform_point(&mut rng, n)))
        .fold(objective.value(&vec![0.0; n]).min(objective.value(&vec![1.0; n])), f64::min);
    CheckReport::new("objective_nonnegative", lowest, lowest >= -1e-12)
}

fn start_headroom(trace: &SolveTrace) -> f64 {
    1.0 - trace.records.first().map_or(0.0, |r| r.x_inf_norm)
}

/// `1 - x_i(t_j) >= (1 - ‖x(0)‖_∞) / sqrt(a_{t_j})` for every coordinate and iterate.
pub fn check_coordinate_headroom(trace: &SolveTrace, schedule: &Schedule) -> CheckReport {
    let headroom = start_headroom(trace);
    let margin = trace
        .records
        .iter()
        .zip(schedule.sqrt_a())
        .map(|(r, s)| (1.0 - r.x_inf_norm) - headroom / s)
        .fold(f64::INFINITY, f64::min);
    CheckReport::new("coordinate_headroom", margin, margin >= -INEQUALITY_TOL)
}

/// `F(x(t_j) ∨ x*) >= (1 - ‖x(0)‖_∞) F* / sqrt(a_{t_j})` for every iterate.
pub fn check_join_lower_bound<O: Objective + ?Sized>(
    objective: &O,
    trace: &SolveTrace,
    oracle: &OracleResult,
    schedule: &Schedule,
) -> Result<CheckReport> {
    let iterates =
        trace.iterates.as_ref().ok_or_else(|| Error::Oracle("trace was recorded without iterates".into()))?;
    let headroom = start_headroom(trace);
    let mut margin = f64::INFINITY;
    for (x, s) in iterates.iter().zip(schedule.sqrt_a()) {
        let joined = join(x, &oracle.point)?;
        margin = margin.min(objective.value(&joined) - headroom * oracle.value / s);
    }
    Ok(CheckReport::new("join_lower_bound", margin, margin >= -INEQUALITY_TOL))
}

/// Lyapunov increments and the early-exit implication.
///
/// With `E_j = a_j F_j - sqrt(a_j) (1 - ‖x(0)‖_∞) F*`, every `j` with
/// `E_j <= 0` must satisfy `E_{j+1} - E_j >= -(nL/2)(sqrt(a_{j+1}) - sqrt(a_j))^2`,
/// and every `j` with `E_j > 0` must have `F_j > F*/4`.
pub fn check_lyapunov_increments(
    trace: &SolveTrace,
    f_star: f64,
    schedule: &Schedule,
    smoothness: f64,
) -> (CheckReport, CheckReport) {
    let reference = start_headroom(trace) * f_star;
    let n = trace.dimension as f64;
    let s = schedule.sqrt_a();
    let e: Vec<f64> = trace.records.iter().zip(s).map(|(r, &sa)| sa * sa * r.f - sa * reference).collect();
    let mut inc_margin = f64::INFINITY;
    let mut exit_margin = f64::INFINITY;
    let mut positive = 0usize;
    for j in 0..trace.iterations {
        if e[j] <= 0.0 {
            let slack = e[j + 1] - e[j] + 0.5 * n * smoothness * (s[j + 1] - s[j]).powi(2);
            inc_margin = inc_margin.min(slack);
        } else {
            positive += 1;
            exit_margin = exit_margin.min(trace.records[j].f - reference / 4.0);
        }
    }
    let inc = CheckReport::new("lyapunov_increment", inc_margin, inc_margin >= -LYAPUNOV_TOL);
    let exit = CheckReport::new("lyapunov_early_exit", exit_margin, exit_margin > 0.0)
        .with_detail(format!("{positive} iterations with E > 0"));
    (inc, exit)
}

/// `F(x(t_T)) - F(x(0))/4 >= (1 - ‖x(0)‖_∞) F_ref / 4 - beta - slack`, plus
/// `best >= final`. With the origin start this is `F(x(t_T)) >= F_ref/4 - beta`.
pub fn check_certificate(trace: &SolveTrace, f_reference: f64, slack: f64) -> Result<CheckReport> {
    let beta = trace.beta.ok_or_else(|| Error::Oracle("trace has no certificate term".into()))?;
    let lhs = trace.final_value() - 0.25 * trace.start_value();
    let rhs = 0.25 * start_headroom(trace) * f_reference - beta;
    let margin = lhs - rhs;
    let best_ok = trace.best_value() >= trace.final_value();
    Ok(CheckReport::new("approximation_certificate", margin, margin >= -slack && best_ok).with_detail(format!(
        "final {:.6}, best {:.6}, reference {:.6}, beta {:.6}",
        trace.final_value(),
        trace.best_value(),
        f_reference,
        beta
    )))
}

#[allow(clippy::needless_range_loop)]
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in (col + 1)..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = ((r + 1)..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Every vertex of `P ∩ [0,1]^n`, by solving each `n`-subset of active
/// constraints. Intended for `n <= 6` with few rows.
pub fn enumerate_vertices(region: &Region) -> Result<Vec<Vec<f64>>> {
    let n = region.dim();
    let (rows, rhs) = region.constraint_rows();
    if n > GRID_MAX_DIM || rows.len() > 8 {
        return Err(Error::Oracle(format!("vertex enumeration supports n <= {GRID_MAX_DIM} and at most 8 rows")));
    }
    let mut cons: Vec<(Vec<f64>, f64)> = rows.into_iter().zip(rhs).collect();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        cons.push((e.clone(), 1.0));
        e[i] = -1.0;
        cons.push((e, 0.0));
    }
    let mut out = Vec::new();
    for active in (0..cons.len()).combinations(n) {
        let a = active.iter().map(|&k| cons[k].0.clone()).collect();
        let b = active.iter().map(|&k| cons[k].1).collect();
        if let Some(x) = solve_square(a, b) {
            if region.contains(&x, MEMBERSHIP_TOL) {
                out.push(x);
            }
        }
    }
    Ok(out)
}

/// Compares the region's LMO against an independent route on random
/// gradients: vertex enumeration when small enough, otherwise the LP solver.
pub fn check_lmo(region: &Region, trials: usize, seed: u64) -> Result<CheckReport> {
    let vertices = enumerate_vertices(region).ok();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = region.dim();
    let (rows, rhs) = region.constraint_rows();
    let mut margin = f64::INFINITY;
    let mut worst_residual = 0.0f64;
    for _ in 0..trials {
        let g: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let v = region.lmo(&g)?;
        worst_residual = worst_residual.max(region.residual(&v));
        let best = match &vertices {
            Some(vs) => vs.iter().map(|u| dot(&g, u)).fold(f64::NEG_INFINITY, f64::max),
            None => {
                let sol = solve_lp(&LpProblem::new(Sense::Maximize, g.clone(), rows.clone(), rhs.clone()))?;
                if sol.status == LpStatus::Infeasible {
                    return Err(Error::InfeasibleRegion);
                }
                sol.objective
            }
        };
        margin = margin.min(dot(&g, &v) - best);
    }
    let route = if vertices.is_some() { "vertex enumeration" } else { "simplex" };
    Ok(CheckReport::new("lmo_optimality", margin, margin >= -1e-8 && worst_residual <= 1e-9)
        .with_detail(format!("{trials} gradients vs {route}, max residual {worst_residual:.1e}")))
}
