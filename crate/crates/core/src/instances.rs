//! Seeded random test instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::objectives::{Quadratic, QuadraticSpec};
use crate::regions::Region;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionFamily {
    Box,
    Cardinality,
    Knapsack,
    /// Three random halfspaces that keep the origin feasible.
    Halfspaces,
    /// `Σ x_i >= 1`, origin infeasible.
    Covering,
}

impl RegionFamily {
    pub const WITH_ORIGIN: [RegionFamily; 4] =
        [RegionFamily::Box, RegionFamily::Cardinality, RegionFamily::Knapsack, RegionFamily::Halfspaces];
}

/// DR-submodular quadratic with `H` entrywise in `[-1, 0]` and
/// `h_i = s_i Σ_j |H_ij|`, `s_i ∈ [0.5, 1]`.
///
/// `s_i >= 1/2` keeps `F >= 0` on the box; `s_i <= 1` lets the gradient turn
/// negative near the all-ones corner, so the instance is not monotone.
#[allow(clippy::needless_range_loop)]
pub fn random_dr_quadratic(n: usize, rng: &mut impl Rng) -> Result<Quadratic> {
    let mut h = vec![vec![0.0; n]; n];
    for i in 0..n {
        h[i][i] = -rng.random::<f64>();
        for j in (i + 1)..n {
            if rng.random_bool(0.7) {
                let v = -rng.random::<f64>();
                h[i][j] = v;
                h[j][i] = v;
            }
        }
    }
    let linear = h
        .iter()
        .map(|row| {
            let mass: f64 = row.iter().map(|v| v.abs()).sum();
            if mass > 0.0 {
                rng.random_range(0.5..=1.0) * mass
            } else {
                rng.random_range(0.1..=1.0)
            }
        })
        .collect();
    Quadratic::new(QuadraticSpec::new(h, linear))
}

pub fn random_region(family: RegionFamily, n: usize, rng: &mut impl Rng) -> Result<Region> {
    match family {
        RegionFamily::Box => Ok(Region::unit_box(n)),
        RegionFamily::Cardinality => Region::cardinality(n, rng.random_range(0.5..=(n as f64 - 0.5))),
        RegionFamily::Knapsack => {
            let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..=1.0)).collect();
            let budget = rng.random_range(0.3..=0.7) * w.iter().sum::<f64>();
            Region::knapsack(w, budget)
        }
        RegionFamily::Halfspaces => {
            let a = (0..3).map(|_| (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect()).collect();
            let b = (0..3).map(|_| rng.random_range(0.2..=1.0)).collect();
            Region::halfspaces(n, a, b)
        }
        RegionFamily::Covering => Region::covering(n),
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub objective: Quadratic,
    pub region: Region,
}

/// One quadratic instance per seed; the seed fully determines it.
pub fn seeded_quadratic(seed: u64, n: usize, family: RegionFamily) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let objective = random_dr_quadratic(n, &mut rng)?;
    let region = random_region(family, n, &mut rng)?;
    Ok(Instance { name: format!("quad-n{n}-{family:?}-s{seed}").to_lowercase(), objective, region })
}

/// `count` instances cycling through `n ∈ {2,3,4}` and the origin-feasible families.
pub fn quadratic_suite(count: usize, base_seed: u64) -> Result<Vec<Instance>> {
    (0..count)
        .map(|i| {
            let n = 2 + i % 3;
            let family = RegionFamily::WITH_ORIGIN[(i / 3) % 4];
            seeded_quadratic(base_seed + i as u64, n, family)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::Objective;

    #[test]
    fn deterministic_per_seed() {
        let a = seeded_quadratic(9, 3, RegionFamily::Halfspaces).unwrap();
        let b = seeded_quadratic(9, 3, RegionFamily::Halfspaces).unwrap();
        assert_eq!(a.objective, b.objective);
        assert_eq!(a.region, b.region);
        assert!(a.region.contains_origin());
    }

    #[test]
    fn suite_covers_families() {
        let suite = quadratic_suite(12, 100).unwrap();
        assert_eq!(suite.len(), 12);
        for inst in &suite {
            assert_eq!(inst.objective.value(&vec![0.0; inst.region.dim()]), 0.0);
            assert!(inst.region.contains_origin());
        }
        let kinds: std::collections::HashSet<_> =
            suite.iter().map(|i| std::mem::discriminant(i.region.kind())).collect();
        assert_eq!(kinds.len(), 4);
    }
}
