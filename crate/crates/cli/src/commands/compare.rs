use std::ops::RangeInclusive;
use std::path::PathBuf;

use anyhow::{anyhow, bail};
use clap::Args;
use fwdis_core::instances::seeded_quadratic;
use fwdis_core::oracle::{grid_maximize, GRID_MAX_DIM};
use fwdis_core::{classic_fw_baseline, fw_dis, SolveConfig, StartMode};
use rayon::prelude::*;
use serde::Serialize;

use crate::failure::{Classify, Failure};
use crate::{instance, output};

/// Guarantee of the harmonic-schedule solver.
const FW_DIS_RATIO: f64 = 0.25;

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Inclusive seed range `A..B`; one random quadratic per seed.
    #[arg(long, default_value = "1..10", value_parser = parse_seeds)]
    pub seeds: RangeInclusive<u64>,
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    /// Region family: box, cardinality, knapsack, halfspaces or covering.
    #[arg(long, default_value = "box")]
    pub region: String,
    #[arg(long, default_value_t = 1000)]
    pub iters: usize,
    /// Grid step for the reference optimum; used when dim <= 6.
    #[arg(long, default_value_t = 0.05)]
    pub resolution: f64,
    /// Write `compare.csv` and `compare.json` here.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

fn parse_seeds(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got '{s}'"))?;
    let a: u64 = a.trim().parse().map_err(|_| format!("bad seed '{a}'"))?;
    let b: u64 = b.trim().parse().map_err(|_| format!("bad seed '{b}'"))?;
    if a > b {
        return Err(format!("empty seed range {a}..{b}"));
    }
    Ok(a..=b)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub instance: String,
    pub seed: u64,
    pub n: usize,
    pub fw_dis: f64,
    pub classic_fw: f64,
    /// Grid reference optimum; empty when the instance is too large for the grid.
    pub f_star: Option<f64>,
    pub ratio_fw_dis: Option<f64>,
    pub ratio_classic_fw: Option<f64>,
}

fn compare_one(args: &CompareArgs, seed: u64) -> anyhow::Result<Row> {
    let family = instance::family(&args.region)?;
    let inst = seeded_quadratic(seed, args.dim, family)?;
    let start = if inst.region.contains_origin() { StartMode::Origin } else { StartMode::MinInfNorm };
    let ours = fw_dis(&inst.objective, &inst.region, &SolveConfig::new(args.iters).with_start(start))?;
    let baseline = classic_fw_baseline(&inst.objective, &inst.region, args.iters)?;
    let f_star = if args.dim <= GRID_MAX_DIM {
        Some(grid_maximize(&inst.objective, &inst.region, args.resolution)?.value)
    } else {
        None
    };
    let ratio = |f: f64| f_star.filter(|&s| s > 0.0).map(|s| f / s);
    Ok(Row {
        instance: inst.name,
        seed,
        n: args.dim,
        fw_dis: ours.final_value(),
        classic_fw: baseline.final_value(),
        f_star,
        ratio_fw_dis: ratio(ours.final_value()),
        ratio_classic_fw: ratio(baseline.final_value()),
    })
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |x| format!("{x:.6}"))
}

pub fn run(args: &CompareArgs) -> Result<(), Failure> {
    let validate = || -> anyhow::Result<()> {
        instance::family(&args.region)?;
        if args.iters == 0 {
            bail!("--iters must be at least 1");
        }
        if args.dim == 0 {
            bail!("--dim must be at least 1");
        }
        Ok(())
    };
    validate().usage()?;

    let seeds: Vec<u64> = args.seeds.clone().collect();
    let rows = seeds
        .par_iter()
        .map(|&seed| compare_one(args, seed).map_err(|e| anyhow!("seed {seed}: {e:#}")))
        .collect::<anyhow::Result<Vec<Row>>>()
        .runtime()?;

    println!(
        "{:<34} {:>3} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "instance", "n", "fw_dis", "classic_fw", "f_star", "ratio_fwdis", "ratio_fw"
    );
    for r in &rows {
        println!(
            "{:<34} {:>3} {:>12.6} {:>12.6} {:>12} {:>12} {:>12}",
            r.instance,
            r.n,
            r.fw_dis,
            r.classic_fw,
            cell(r.f_star),
            cell(r.ratio_fw_dis),
            cell(r.ratio_classic_fw)
        );
    }
    println!(
        "reference ratios: fw_dis guarantee {FW_DIS_RATIO:.4}, earlier guarantee 1/(3*sqrt(3)) = {:.4}",
        1.0 / (3.0 * 3f64.sqrt())
    );
    if rows.iter().any(|r| r.f_star.is_none()) {
        println!("ratios unavailable: reference optimum needs n <= {GRID_MAX_DIM}");
    }

    if let Some(dir) = &args.out {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &rows {
            w.serialize(r).runtime()?;
        }
        let bytes = w.into_inner().map_err(|e| anyhow!("{e}")).runtime()?;
        output::write_atomic(&dir.join("compare.csv"), &bytes).runtime()?;
        output::write_json(&dir.join("compare.json"), &rows).runtime()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_ranges() {
        assert_eq!(parse_seeds("1..3").unwrap(), 1..=3);
        assert_eq!(parse_seeds("5..5").unwrap().count(), 1);
        assert!(parse_seeds("3..1").is_err());
        assert!(parse_seeds("1-3").is_err());
    }
}
