use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Objective;
use crate::error::{Error, Result};

pub const MAX_GROUND_SET: usize = 20;
const EXHAUSTIVE_SUBMODULARITY_LIMIT: usize = 12;

/// A set function on `{0, .., n-1}` stored by subset bitmask: bit `i` of the
/// index is set iff element `i` is in the subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetFunctionTable {
    n: usize,
    values: Vec<f64>,
}

/// Witness that `f(S+i) + f(S+j) < f(S+i+j) + f(S)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmodularityViolation {
    pub subset: u32,
    pub i: usize,
    pub j: usize,
    pub amount: f64,
}

impl SetFunctionTable {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_GROUND_SET {
            return Err(Error::InvalidObjective(format!("ground set size must be in 1..={MAX_GROUND_SET}, got {n}")));
        }
        if values.len() != 1 << n {
            return Err(Error::InvalidObjective(format!(
                "expected {} table entries, got {}",
                1usize << n,
                values.len()
            )));
        }
        if values[0] != 0.0 {
            return Err(Error::InvalidObjective(format!("f(∅) must be 0, got {}", values[0])));
        }
        if let Some((mask, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidObjective(format!("f must be finite and nonnegative; f({mask:#b}) = {v}")));
        }
        Ok(Self { n, values })
    }

    /// Cut function of the single-edge graph on two nodes.
    pub fn cut2() -> Self {
        Self { n: 2, values: vec![0.0, 1.0, 1.0, 0.0] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, mask: u32) -> f64 {
        self.values[mask as usize]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    fn local_violation(&self, s: u32, i: usize, j: usize) -> f64 {
        let (bi, bj) = (1u32 << i, 1u32 << j);
        (self.get(s | bi | bj) + self.get(s)) - (self.get(s | bi) + self.get(s | bj))
    }

    /// Checks `f(S+i) + f(S+j) >= f(S+i+j) + f(S)` for `i, j ∉ S`, which is
    /// equivalent to submodularity. Exhaustive for `n <= 12`, sampled above.
    pub fn submodularity_violation(&self) -> Option<SubmodularityViolation> {
        const TOL: f64 = 1e-12;
        let n = self.n;
        let witness = |s: u32, i: usize, j: usize| {
            let amount = self.local_violation(s, i, j);
            (amount > TOL).then_some(SubmodularityViolation { subset: s, i, j, amount })
        };
        if n <= EXHAUSTIVE_SUBMODULARITY_LIMIT {
            for s in 0u32..(1 << n) {
                for i in 0..n {
                    if s >> i & 1 == 1 {
                        continue;
                    }
                    for j in (i + 1)..n {
                        if s >> j & 1 == 0 {
                            if let Some(w) = witness(s, i, j) {
                                return Some(w);
                            }
                        }
                    }
                }
            }
            return None;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5ab);
        for _ in 0..200_000 {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            if i == j {
                continue;
            }
            let s = rng.random_range(0u32..(1 << n)) & !(1 << i) & !(1 << j);
            if let Some(w) = witness(s, i.min(j), i.max(j)) {
                return Some(w);
            }
        }
        None
    }
}

/// Collapses a table over the given coordinates (lowest table bit first) into
/// `Σ_S f(S) Π_{i∈S} x_i Π_{i∉S} (1 - x_i)`.
fn collapse(mut table: Vec<f64>, coords: &[f64]) -> f64 {
    debug_assert_eq!(table.len(), 1 << coords.len());
    for &xi in coords.iter().rev() {
        let half = table.len() / 2;
        for s in 0..half {
            table[s] = (1.0 - xi) * table[s] + xi * table[s + half];
        }
        table.truncate(half);
    }
    table[0]
}

/// Exact multilinear extension of a submodular [`SetFunctionTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearExtension {
    table: SetFunctionTable,
    smoothness: f64,
}

impl MultilinearExtension {
    pub fn new(table: SetFunctionTable) -> Result<Self> {
        if let Some(v) = table.submodularity_violation() {
            return Err(Error::InvalidObjective(format!(
                "table is not submodular: S={:#b}, i={}, j={} (excess {:e})",
                v.subset, v.i, v.j, v.amount
            )));
        }
        Ok(Self::new_unchecked(table))
    }

    /// Skips the submodularity check.
    pub fn new_unchecked(table: SetFunctionTable) -> Self {
        let n = table.n() as f64;
        let smoothness = n * n * table.max_value();
        Self { table, smoothness }
    }

    pub fn table(&self) -> &SetFunctionTable {
        &self.table
    }

    /// `F` with coordinate `i` pinned to 0 or 1.
    fn restricted(&self, x: &[f64], i: usize, upper: bool) -> f64 {
        let n = self.table.n;
        let low = (1usize << i) - 1;
        let bit = if upper { 1usize << i } else { 0 };
        let sub: Vec<f64> =
            (0..1usize << (n - 1)).map(|s| self.table.values[(s & low) | ((s & !low) << 1) | bit]).collect();
        let coords: Vec<f64> = x.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, v)| *v).collect();
        collapse(sub, &coords)
    }
}

impl Objective for MultilinearExtension {
    fn dim(&self) -> usize {
        self.table.n
    }

    fn value(&self, x: &[f64]) -> f64 {
        collapse(self.table.values.clone(), x)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (0..self.table.n).map(|i| self.restricted(x, i, true) - self.restricted(x, i, false)).collect()
    }

    /// `n² · max_S f(S)`.
    fn smoothness(&self) -> Option<f64> {
        Some(self.smoothness)
    }
}
