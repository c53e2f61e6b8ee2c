use fwdis_core::objectives::certified_smoothness;
use fwdis_core::{fw_dis, iterations_for_epsilon, FeasibilityChecks, Objective, SolveConfig, TraceSummary};
use serde::{Deserialize, Serialize};

use crate::config::{RunArgs, RunConfig};
use crate::failure::{Classify, Failure};
use crate::{instance, output};

/// Contents of `summary.json`.
#[derive(Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub run: RunConfig,
    /// `false` when epsilon mode hit the iteration cap.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_reached: Option<bool>,
    pub summary: TraceSummary,
}

pub fn run(args: &RunArgs) -> Result<(), Failure> {
    let cfg = args.resolve().usage()?;
    let objective = instance::objective(&cfg.objective, cfg.seed, true).usage()?;
    let region = instance::region(&cfg.region, &objective).usage()?;

    let mut epsilon_reached = None;
    let iterations = match (cfg.iterations, cfg.epsilon) {
        (Some(t), _) => t,
        (None, Some(eps)) => {
            let l = certified_smoothness(&objective);
            let choice = iterations_for_epsilon(objective.dim(), l, eps, cfg.cap).usage()?;
            if !choice.reached {
                eprintln!(
                    "warning: epsilon {eps} needs more than {} iterations (n = {}, L = {l}); running with the cap",
                    cfg.cap,
                    objective.dim()
                );
            }
            epsilon_reached = Some(choice.reached);
            choice.iterations
        }
        (None, None) => return Err(Failure::Usage(anyhow::anyhow!("give --iters or --epsilon"))),
    };

    let solve_cfg = SolveConfig::new(iterations).with_start(cfg.start).with_feasibility(FeasibilityChecks::Sampled);
    let trace = fw_dis(&objective, &region, &solve_cfg).runtime()?;

    let dir = super::out_dir(&cfg);
    let mut csv = Vec::new();
    trace.write_csv(&mut csv).runtime()?;
    output::write_atomic(&dir.join("trace.csv"), &csv).runtime()?;
    let report = SolveReport { run: cfg, epsilon_reached, summary: trace.summary(Some(&solve_cfg)) };
    output::write_json(&dir.join("summary.json"), &report).runtime()?;

    let s = &report.summary;
    println!("T = {}  n = {}  L = {:.6}", s.iterations, s.dimension, s.smoothness);
    println!("beta = {:.6e}", s.beta.unwrap_or(f64::NAN));
    println!("best F = {:.9} (iterate {})", s.best_value, s.best_index);
    println!("final F = {:.9}", s.final_value);
    println!("wrote {} and {}", dir.join("trace.csv").display(), dir.join("summary.json").display());
    Ok(())
}
