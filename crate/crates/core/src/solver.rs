//! The FW-Dis iteration and a uniform-step Frank-Wolfe baseline.
//!
//! FW-Dis starts from a feasible point `x(t_0)` and performs `T` updates
//! `x(t_{j+1}) = c_j x(t_j) + (1 - c_j) v_j`, where `v_j` maximizes
//! `⟨∇F(x(t_j)), v⟩` over the region and `c_j` comes from the [`Schedule`].
//! The run produces `T + 1` iterates; the best one and the last one are
//! both reported.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::{certified_smoothness, Objective};
use crate::point::{all_finite, inf_norm};
use crate::regions::Region;
use crate::schedule::Schedule;

pub const DEFAULT_FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartMode {
    /// `x(0) = 0`; the origin must be feasible.
    #[default]
    Origin,
    /// `x(0) = argmin_{x ∈ P} ‖x‖_∞`.
    MinInfNorm,
}

/// How often iterates are checked against the region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeasibilityChecks {
    #[default]
    EveryIteration,
    /// Every `ceil(T/100)` iterations plus the last one.
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub iterations: usize,
    #[serde(default)]
    pub start: StartMode,
    /// Reference optimum for the Lyapunov diagnostic. Off when `None`.
    #[serde(default)]
    pub f_star: Option<f64>,
    #[serde(default)]
    pub feasibility: FeasibilityChecks,
    #[serde(default = "default_tol")]
    pub feasibility_tol: f64,
    /// Keep every iterate in the trace (needed by some oracle checks).
    #[serde(default)]
    pub keep_iterates: bool,
}

fn default_tol() -> f64 {
    DEFAULT_FEASIBILITY_TOL
}

impl SolveConfig {
    pub fn new(iterations: usize) -> Self {
        Self {
            iterations,
            start: StartMode::Origin,
            f_star: None,
            feasibility: FeasibilityChecks::EveryIteration,
            feasibility_tol: DEFAULT_FEASIBILITY_TOL,
            keep_iterates: false,
        }
    }

    pub fn with_start(mut self, start: StartMode) -> Self {
        self.start = start;
        self
    }

    pub fn with_f_star(mut self, f_star: f64) -> Self {
        self.f_star = Some(f_star);
        self
    }

    pub fn with_feasibility(mut self, checks: FeasibilityChecks) -> Self {
        self.feasibility = checks;
        self
    }

    pub fn keeping_iterates(mut self) -> Self {
        self.keep_iterates = true;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    FwDis,
    ClassicFw,
}

/// One row of the trace CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub j: usize,
    pub t: f64,
    pub sqrt_a: Option<f64>,
    /// Coefficient on `x(t_j)` in the step leaving iterate `j`; empty on the last row.
    pub step_coeff: Option<f64>,
    pub f: f64,
    pub best_f: f64,
    pub lyapunov: Option<f64>,
    /// Empty on rows that were not checked.
    pub residual: Option<f64>,
    pub x_inf_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveTrace {
    pub method: Method,
    pub dimension: usize,
    pub iterations: usize,
    pub start: StartMode,
    pub smoothness: f64,
    /// Certificate error term; `None` for the baseline.
    pub beta: Option<f64>,
    pub records: Vec<IterationRecord>,
    pub start_point: Vec<f64>,
    pub best_index: usize,
    pub best_point: Vec<f64>,
    pub final_point: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterates: Option<Vec<Vec<f64>>>,
}

/// Structured run summary (best point, final point, beta, config echo).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub method: Method,
    pub dimension: usize,
    pub iterations: usize,
    pub start: StartMode,
    pub smoothness: f64,
    pub beta: Option<f64>,
    pub start_value: f64,
    pub start_inf_norm: f64,
    pub best_index: usize,
    pub best_value: f64,
    pub best_point: Vec<f64>,
    pub final_value: f64,
    pub final_point: Vec<f64>,
    pub max_residual: f64,
    pub config: Option<SolveConfig>,
}

impl SolveTrace {
    pub fn final_value(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.f)
    }

    pub fn best_value(&self) -> f64 {
        self.records[self.best_index].f
    }

    pub fn start_value(&self) -> f64 {
        self.records[0].f
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.f)
    }

    pub fn max_residual(&self) -> f64 {
        self.records.iter().filter_map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn summary(&self, config: Option<&SolveConfig>) -> TraceSummary {
        TraceSummary {
            method: self.method,
            dimension: self.dimension,
            iterations: self.iterations,
            start: self.start,
            smoothness: self.smoothness,
            beta: self.beta,
            start_value: self.start_value(),
            start_inf_norm: inf_norm(&self.start_point),
            best_index: self.best_index,
            best_value: self.best_value(),
            best_point: self.best_point.clone(),
            final_value: self.final_value(),
            final_point: self.final_point.clone(),
            max_residual: self.max_residual(),
            config: config.cloned(),
        }
    }

    /// Header: `j,t,sqrt_a,step_coeff,f,best_f,lyapunov,residual,x_inf_norm`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for r in &self.records {
            w.serialize(r)?;
        }
        if self.records.is_empty() {
            w.write_record(CSV_HEADER)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub const CSV_HEADER: [&str; 9] =
    ["j", "t", "sqrt_a", "step_coeff", "f", "best_f", "lyapunov", "residual", "x_inf_norm"];

fn starting_point(region: &Region, start: StartMode) -> Result<Vec<f64>> {
    match start {
        StartMode::Origin => {
            if !region.contains_origin() {
                return Err(Error::OriginInfeasible);
            }
            Ok(vec![0.0; region.dim()])
        }
        StartMode::MinInfNorm => region.min_inf_norm_point(),
    }
}

fn non_finite(what: &'static str, iteration: usize, x: &[f64]) -> Error {
    Error::NonFinite { what, iteration, point: serde_json::to_string(x).unwrap_or_else(|_| format!("{x:?}")) }
}

fn evaluate<O: Objective + ?Sized>(objective: &O, j: usize, x: &[f64]) -> Result<f64> {
    let f = objective.value(x);
    if !f.is_finite() {
        return Err(non_finite("objective value", j, x));
    }
    Ok(f)
}

fn gradient<O: Objective + ?Sized>(objective: &O, j: usize, x: &[f64]) -> Result<Vec<f64>> {
    let g = objective.gradient(x);
    if g.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), actual: g.len() });
    }
    if !all_finite(&g) {
        return Err(non_finite("gradient", j, x));
    }
    Ok(g)
}

/// Per-iterate `(F, residual, ‖x‖_∞)` plus the best and last points.
struct RunOutput {
    rows: Vec<(f64, Option<f64>, f64)>,
    best_index: usize,
    best_point: Vec<f64>,
    final_point: Vec<f64>,
    iterates: Option<Vec<Vec<f64>>>,
}

/// Shared iteration driver: `coeff(j)` is the weight kept on the current iterate.
struct Driver<'a, O: ?Sized> {
    objective: &'a O,
    region: &'a Region,
    checks: FeasibilityChecks,
    tol: f64,
    iterations: usize,
}

impl<O: Objective + ?Sized> Driver<'_, O> {
    fn residual(&self, j: usize, x: &[f64]) -> Result<Option<f64>> {
        let stride = self.iterations.div_ceil(100).max(1);
        let due = match self.checks {
            FeasibilityChecks::EveryIteration => true,
            FeasibilityChecks::Sampled => j.is_multiple_of(stride) || j == self.iterations,
        };
        if !due {
            return Ok(None);
        }
        let r = self.region.residual(x).max(0.0);
        if r > self.tol {
            return Err(Error::FeasibilityViolated { iteration: j, residual: r });
        }
        Ok(Some(r))
    }

    fn run(&self, start: Vec<f64>, coeff: impl Fn(usize) -> f64, keep_iterates: bool) -> Result<RunOutput> {
        let mut x = start;
        let mut rows = Vec::with_capacity(self.iterations + 1);
        let mut iterates = keep_iterates.then(|| Vec::with_capacity(self.iterations + 1));
        let mut best = (0usize, f64::NEG_INFINITY, x.clone());
        for j in 0..=self.iterations {
            let f = evaluate(self.objective, j, &x)?;
            let residual = self.residual(j, &x)?;
            if f > best.1 {
                best = (j, f, x.clone());
            }
            rows.push((f, residual, inf_norm(&x)));
            if let Some(it) = iterates.as_mut() {
                it.push(x.clone());
            }
            if j == self.iterations {
                break;
            }
            let g = gradient(self.objective, j, &x)?;
            let v = self.region.lmo(&g)?;
            let c = coeff(j);
            for (xi, vi) in x.iter_mut().zip(&v) {
                *xi = c * *xi + (1.0 - c) * vi;
            }
        }
        Ok(RunOutput { rows, best_index: best.0, best_point: best.2, final_point: x, iterates })
    }
}

fn check_dims<O: Objective + ?Sized>(objective: &O, region: &Region) -> Result<()> {
    if objective.dim() != region.dim() {
        return Err(Error::DimensionMismatch { expected: region.dim(), actual: objective.dim() });
    }
    Ok(())
}

/// Runs FW-Dis for `config.iterations` steps.
pub fn fw_dis<O: Objective + ?Sized>(objective: &O, region: &Region, config: &SolveConfig) -> Result<SolveTrace> {
    check_dims(objective, region)?;
    let schedule = Schedule::new(config.iterations)?;
    let start = starting_point(region, config.start)?;
    let driver = Driver {
        objective,
        region,
        checks: config.feasibility,
        tol: config.feasibility_tol,
        iterations: config.iterations,
    };
    let coeffs = schedule.step_coeffs();
    let RunOutput { rows, best_index, best_point, final_point, iterates } =
        driver.run(start.clone(), |j| coeffs[j], config.keep_iterates)?;

    let mut best_f = f64::NEG_INFINITY;
    let records = rows
        .into_iter()
        .enumerate()
        .map(|(j, (f, residual, x_inf_norm))| {
            best_f = best_f.max(f);
            let sqrt_a = schedule.sqrt_a()[j];
            IterationRecord {
                j,
                t: schedule.times()[j],
                sqrt_a: Some(sqrt_a),
                step_coeff: coeffs.get(j).copied(),
                f,
                best_f,
                lyapunov: config.f_star.map(|fs| sqrt_a * sqrt_a * f - sqrt_a * fs),
                residual,
                x_inf_norm,
            }
        })
        .collect();

    let smoothness = certified_smoothness(objective);
    Ok(SolveTrace {
        method: Method::FwDis,
        dimension: region.dim(),
        iterations: config.iterations,
        start: config.start,
        smoothness,
        beta: Some(schedule.beta(region.dim(), smoothness)),
        records,
        start_point: start,
        best_index,
        best_point,
        final_point,
        iterates,
    })
}

/// Frank-Wolfe ascent with the uniform step `x ← x + (v - x)/T`.
///
/// Starts at the origin when feasible, otherwise at the min-infinity-norm
/// point. Carries no approximation certificate.
pub fn classic_fw_baseline<O: Objective + ?Sized>(
    objective: &O,
    region: &Region,
    iterations: usize,
) -> Result<SolveTrace> {
    check_dims(objective, region)?;
    if iterations == 0 {
        return Err(Error::ZeroIterations);
    }
    let start_mode = if region.contains_origin() { StartMode::Origin } else { StartMode::MinInfNorm };
    let start = starting_point(region, start_mode)?;
    let driver = Driver {
        objective,
        region,
        checks: FeasibilityChecks::EveryIteration,
        tol: DEFAULT_FEASIBILITY_TOL,
        iterations,
    };
    let keep = 1.0 - 1.0 / iterations as f64;
    let RunOutput { rows, best_index, best_point, final_point, iterates } =
        driver.run(start.clone(), |_| keep, false)?;
    let mut best_f = f64::NEG_INFINITY;
    let records = rows
        .into_iter()
        .enumerate()
        .map(|(j, (f, residual, x_inf_norm))| {
            best_f = best_f.max(f);
            IterationRecord {
                j,
                t: j as f64 / iterations as f64,
                sqrt_a: None,
                step_coeff: (j < iterations).then_some(keep),
                f,
                best_f,
                lyapunov: None,
                residual,
                x_inf_norm,
            }
        })
        .collect();
    Ok(SolveTrace {
        method: Method::ClassicFw,
        dimension: region.dim(),
        iterations,
        start: start_mode,
        smoothness: certified_smoothness(objective),
        beta: None,
        records,
        start_point: start,
        best_index,
        best_point,
        final_point,
        iterates,
    })
}

/// `E(t_j) = a_{t_j} F(x(t_j)) - sqrt(a_{t_j}) F*` for every iterate.
pub fn lyapunov_series(trace: &SolveTrace, f_star: f64, schedule: &Schedule) -> Vec<f64> {
    trace.records.iter().zip(schedule.sqrt_a()).map(|(r, &s)| s * s * r.f - s * f_star).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{MultilinearExtension, Quadratic, QuadraticSpec, SetFunctionTable};

    fn cut() -> MultilinearExtension {
        MultilinearExtension::new(SetFunctionTable::cut2()).unwrap()
    }

    #[test]
    fn single_step_on_cut() {
        let trace = fw_dis(&cut(), &Region::unit_box(2), &SolveConfig::new(1)).unwrap();
        assert_eq!(trace.final_point, vec![0.5, 0.5]);
        assert_eq!(trace.final_value(), 0.5);
        assert_eq!(trace.best_value(), 0.5);
        assert_eq!(trace.records[0].f, 0.0);
        assert_eq!(trace.records[0].step_coeff, Some(0.5));
        assert_eq!(trace.records[1].step_coeff, None);
    }

    #[test]
    fn origin_start_requires_feasible_origin() {
        let r = Region::covering(2).unwrap();
        assert!(matches!(fw_dis(&cut(), &r, &SolveConfig::new(5)), Err(Error::OriginInfeasible)));
        let t = fw_dis(&cut(), &r, &SolveConfig::new(5).with_start(StartMode::MinInfNorm)).unwrap();
        assert!((t.start_point[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_dimension_mismatch_and_zero_iterations() {
        assert!(fw_dis(&cut(), &Region::unit_box(3), &SolveConfig::new(1)).is_err());
        assert!(matches!(fw_dis(&cut(), &Region::unit_box(2), &SolveConfig::new(0)), Err(Error::ZeroIterations)));
        assert!(classic_fw_baseline(&cut(), &Region::unit_box(2), 0).is_err());
    }

    #[test]
    fn baseline_examples() {
        let t = classic_fw_baseline(&cut(), &Region::unit_box(2), 2).unwrap();
        assert_eq!(t.records[1].f, 0.5);
        assert_eq!(t.iterates, None);
        let t = classic_fw_baseline(&cut(), &Region::unit_box(2), 1).unwrap();
        assert_eq!(t.final_point, vec![1.0, 1.0]);

        let lin = Quadratic::new(QuadraticSpec::new(vec![vec![0.0; 2]; 2], vec![1.0, 0.0])).unwrap();
        let t = classic_fw_baseline(&lin, &Region::unit_box(2), 10_000).unwrap();
        let expected = 1.0 - (1.0 - 1e-4f64).powi(10_000);
        assert!((t.final_value() - expected).abs() < 1e-9);
        assert_eq!(t.final_point[1], 0.0);
    }

    #[test]
    fn non_finite_values_abort_with_iterate() {
        struct Blowup;
        impl Objective for Blowup {
            fn dim(&self) -> usize {
                1
            }
            fn value(&self, x: &[f64]) -> f64 {
                if x[0] > 0.0 {
                    f64::NAN
                } else {
                    0.0
                }
            }
            fn gradient(&self, _: &[f64]) -> Vec<f64> {
                vec![1.0]
            }
            fn smoothness(&self) -> Option<f64> {
                Some(0.0)
            }
        }
        let err = fw_dis(&Blowup, &Region::unit_box(1), &SolveConfig::new(3)).unwrap_err();
        match err {
            Error::NonFinite { iteration, point, .. } => {
                assert_eq!(iteration, 1);
                let x: Vec<f64> = serde_json::from_str(&point).unwrap();
                assert!((x[0] - 6.0 / 17.0).abs() < 1e-15);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn lyapunov_endpoints() {
        let s = Schedule::new(50).unwrap();
        let cfg = SolveConfig::new(50).with_f_star(1.0);
        let t = fw_dis(&cut(), &Region::unit_box(2), &cfg).unwrap();
        let e = lyapunov_series(&t, 1.0, &s);
        assert_eq!(e[0], -1.0);
        assert!((e[50] - (4.0 * t.final_value() - 2.0)).abs() < 1e-15);
        let recorded: Vec<f64> = t.records.iter().map(|r| r.lyapunov.unwrap()).collect();
        assert_eq!(recorded, e);
        let zero = lyapunov_series(&t, 0.0, &s);
        assert!(zero.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn sampled_checks_skip_rows() {
        let cfg = SolveConfig::new(1000).with_feasibility(FeasibilityChecks::Sampled);
        let t = fw_dis(&cut(), &Region::unit_box(2), &cfg).unwrap();
        let checked = t.records.iter().filter(|r| r.residual.is_some()).count();
        assert_eq!(checked, 101);
        assert!(t.records[1000].residual.is_some());
    }

    #[test]
    fn csv_header_is_fixed() {
        let t = fw_dis(&cut(), &Region::unit_box(2), &SolveConfig::new(2)).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(lines.count(), 3);
        assert!(text.lines().nth(3).unwrap().contains(",,"));
    }
}
