use std::path::Path;

use anyhow::{bail, Context};
use fwdis_core::instances::{seeded_quadratic, RegionFamily};
use fwdis_core::io::{load_objective, parse_region, AnyObjective};
use fwdis_core::{MultilinearExtension, Objective, Region, SetFunctionTable};

/// Resolves an objective spec: `cut2`, `random-quadratic:N` (drawn from `seed`),
/// or a file. Validation is skipped when `validate` is false.
pub fn objective(spec: &str, seed: u64, validate: bool) -> anyhow::Result<AnyObjective> {
    if spec == "cut2" {
        return Ok(AnyObjective::Multilinear(MultilinearExtension::new(SetFunctionTable::cut2())?));
    }
    if let Some(n) = spec.strip_prefix("random-quadratic:") {
        let n: usize = n.parse().with_context(|| format!("bad dimension in '{spec}'"))?;
        if n == 0 {
            bail!("random-quadratic needs n >= 1");
        }
        return Ok(AnyObjective::Quadratic(seeded_quadratic(seed, n, RegionFamily::Box)?.objective));
    }
    load_objective(Path::new(spec), validate).with_context(|| format!("loading objective '{spec}'"))
}

pub fn region(spec: &str, objective: &AnyObjective) -> anyhow::Result<Region> {
    parse_region(spec, objective.dim()).with_context(|| format!("parsing region '{spec}'"))
}

pub fn family(name: &str) -> anyhow::Result<RegionFamily> {
    Ok(match name {
        "box" => RegionFamily::Box,
        "cardinality" => RegionFamily::Cardinality,
        "knapsack" => RegionFamily::Knapsack,
        "halfspaces" => RegionFamily::Halfspaces,
        "covering" => RegionFamily::Covering,
        _ => bail!("unknown region family '{name}' (box, cardinality, knapsack, halfspaces, covering)"),
    })
}

/// A readable instance label without path noise.
pub fn label(spec: &str) -> String {
    Path::new(spec)
        .file_name()
        .map_or_else(|| spec.to_string(), |f| f.to_string_lossy().into_owned())
        .replace(char::is_whitespace, "_")
}
