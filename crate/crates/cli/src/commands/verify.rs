use anyhow::anyhow;
use fwdis_core::objectives::certified_smoothness;
use fwdis_core::oracle::{
    check_certificate, check_coordinate_headroom, check_dr_inequality, check_gradient_antitone,
    check_gradient_consistency, check_join_lower_bound, check_lyapunov_increments, check_nonnegative, corner_maximize,
    grid_maximize, CheckReport, OracleResult, CORNER_MAX_DIM, GRID_MAX_DIM,
};
use fwdis_core::{fw_dis, iterations_for_epsilon, Objective, Schedule, SolveConfig, StartMode};
use serde::Serialize;

use crate::config::{RunArgs, RunConfig, DEFAULT_VERIFY_ITERATIONS};
use crate::failure::{Classify, Failure};
use crate::{instance, output};

const SAMPLES: usize = 1000;
const GRADIENT_POINTS: usize = 100;

/// Contents of `report.json`.
#[derive(Debug, Serialize)]
struct VerifyReport<'a> {
    run: &'a RunConfig,
    iterations: usize,
    oracle: &'a OracleResult,
    passed: bool,
    checks: &'a [CheckReport],
}

pub fn run(args: &RunArgs) -> Result<(), Failure> {
    let cfg = args.resolve().usage()?;
    let objective = instance::objective(&cfg.objective, cfg.seed, false).usage()?;
    let region = instance::region(&cfg.region, &objective).usage()?;
    let n = objective.dim();
    let corners = objective.as_multilinear().filter(|_| region.is_box());
    if (corners.is_some() && n > CORNER_MAX_DIM) || (corners.is_none() && n > GRID_MAX_DIM) {
        return Err(Failure::Usage(anyhow!(
            "instance too large to verify: n = {n}, but the reference optimum needs n <= {GRID_MAX_DIM} \
             (or n <= {CORNER_MAX_DIM} for a set-function table on the box)"
        )));
    }
    let iterations = match (cfg.iterations, cfg.epsilon) {
        (Some(t), _) => t,
        (None, Some(eps)) => {
            iterations_for_epsilon(n, certified_smoothness(&objective), eps, cfg.cap).usage()?.iterations
        }
        (None, None) => DEFAULT_VERIFY_ITERATIONS,
    };
    let seed = cfg.seed;

    let issues = objective.issues();
    let mut reports = vec![{
        let r = CheckReport::new("structure", 0.0 - issues.len() as f64, issues.is_empty());
        if issues.is_empty() {
            r
        } else {
            r.with_detail(issues.join("; "))
        }
    }];
    reports.push(check_gradient_consistency(&objective, GRADIENT_POINTS, seed, 1e-5, 1e-5).runtime()?);
    reports.push(check_dr_inequality(&objective, SAMPLES, seed));
    reports.push(check_gradient_antitone(&objective, SAMPLES, seed));
    reports.push(check_nonnegative(&objective, SAMPLES, seed));

    let oracle = match corners {
        Some(m) => corner_maximize(m, &region),
        None => grid_maximize(&objective, &region, cfg.resolution),
    }
    .usage()?;

    let mut solve_cfg = SolveConfig::new(iterations).with_start(cfg.start).keeping_iterates();
    if !cfg.skip_lyapunov {
        solve_cfg = solve_cfg.with_f_star(oracle.value);
    }
    let trace = fw_dis(&objective, &region, &solve_cfg).runtime()?;
    let schedule = Schedule::new(iterations).runtime()?;
    reports.push(check_coordinate_headroom(&trace, &schedule));
    reports.push(check_join_lower_bound(&objective, &trace, &oracle, &schedule).runtime()?);
    if !cfg.skip_lyapunov {
        let (increments, early_exit) = check_lyapunov_increments(&trace, oracle.value, &schedule, trace.smoothness);
        reports.push(increments);
        reports.push(early_exit);
    }
    let slack = if cfg.start == StartMode::Origin { 0.0 } else { 1e-7 };
    reports.push(check_certificate(&trace, oracle.lower_reference(), slack).runtime()?);

    let name = instance::label(&cfg.objective);
    for r in &mut reports {
        r.instance = name.clone();
        println!("{r}");
    }
    let failures = reports.iter().filter(|r| !r.passed).count();
    if let Some(dir) = &cfg.out {
        let report = VerifyReport { run: &cfg, iterations, oracle: &oracle, passed: failures == 0, checks: &reports };
        output::write_json(&dir.join("report.json"), &report).runtime()?;
    }
    if failures > 0 {
        return Err(Failure::Checks(failures));
    }
    Ok(())
}
