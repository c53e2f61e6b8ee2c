//! Convex feasible sets `P ⊆ [0,1]^n` with a linear maximization oracle.
//!
//! Box, cardinality and knapsack regions use closed-form greedy oracles.
//! General halfspace regions go through the simplex solver.

mod simplex;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

pub use simplex::{solve_lp, LpProblem, LpSolution, LpStatus, Sense};

use crate::error::{Error, Result};

/// Shape of a region. Every kind is implicitly intersected with `[0,1]^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionKind {
    Box,
    /// `Σ x_i <= k`
    Cardinality {
        k: f64,
    },
    /// `Σ w_i x_i <= budget`, `w >= 0`
    Knapsack {
        weights: Vec<f64>,
        budget: f64,
    },
    /// `Ax <= b`
    Halfspaces {
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RegionConfig {
    dim: usize,
    #[serde(flatten)]
    kind: RegionKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RegionConfig", into = "RegionConfig")]
pub struct Region {
    dim: usize,
    kind: RegionKind,
}

impl TryFrom<RegionConfig> for Region {
    type Error = Error;

    fn try_from(c: RegionConfig) -> Result<Self> {
        Region::new(c.dim, c.kind)
    }
}

impl From<Region> for RegionConfig {
    fn from(r: Region) -> Self {
        RegionConfig { dim: r.dim, kind: r.kind }
    }
}

fn by_score_then_index(a: &(usize, f64), b: &(usize, f64)) -> Ordering {
    b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then(a.0.cmp(&b.0))
}

impl Region {
    /// Validates parameters and checks that the region meets the unit box.
    pub fn new(dim: usize, kind: RegionKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidRegion("dimension must be positive".into()));
        }
        match &kind {
            RegionKind::Box => {}
            RegionKind::Cardinality { k } => {
                if !k.is_finite() {
                    return Err(Error::InvalidRegion(format!("cardinality budget {k} is not finite")));
                }
                if *k < 0.0 {
                    return Err(Error::InfeasibleRegion);
                }
            }
            RegionKind::Knapsack { weights, budget } => {
                if weights.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, actual: weights.len() });
                }
                if weights.iter().any(|w| !w.is_finite() || *w < 0.0) || !budget.is_finite() {
                    return Err(Error::InvalidRegion("knapsack weights must be finite and nonnegative".into()));
                }
                if *budget < 0.0 {
                    return Err(Error::InfeasibleRegion);
                }
            }
            RegionKind::Halfspaces { a, b } => {
                if a.len() != b.len() {
                    return Err(Error::InvalidRegion(format!("{} rows but {} bounds", a.len(), b.len())));
                }
                if let Some(row) = a.iter().find(|r| r.len() != dim) {
                    return Err(Error::DimensionMismatch { expected: dim, actual: row.len() });
                }
            }
        }
        let region = Self { dim, kind };
        if let RegionKind::Halfspaces { a, b } = &region.kind {
            let feas = solve_lp(&LpProblem::new(Sense::Maximize, vec![0.0; dim], a.clone(), b.clone()))?;
            if feas.status == LpStatus::Infeasible {
                return Err(Error::InfeasibleRegion);
            }
        }
        Ok(region)
    }

    pub fn unit_box(dim: usize) -> Self {
        Self { dim, kind: RegionKind::Box }
    }

    pub fn cardinality(dim: usize, k: f64) -> Result<Self> {
        Self::new(dim, RegionKind::Cardinality { k })
    }

    pub fn knapsack(weights: Vec<f64>, budget: f64) -> Result<Self> {
        Self::new(weights.len(), RegionKind::Knapsack { weights, budget })
    }

    pub fn halfspaces(dim: usize, a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self> {
        Self::new(dim, RegionKind::Halfspaces { a, b })
    }

    /// `{x ∈ [0,1]^n : Σ x_i >= 1}`; the origin is infeasible.
    pub fn covering(dim: usize) -> Result<Self> {
        Self::halfspaces(dim, vec![vec![-1.0; dim]], vec![-1.0])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &RegionKind {
        &self.kind
    }

    pub fn is_box(&self) -> bool {
        matches!(self.kind, RegionKind::Box)
    }

    /// Constraints beyond the box, as rows of `Ax <= b`.
    pub fn constraint_rows(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        match &self.kind {
            RegionKind::Box => (Vec::new(), Vec::new()),
            RegionKind::Cardinality { k } => (vec![vec![1.0; self.dim]], vec![*k]),
            RegionKind::Knapsack { weights, budget } => (vec![weights.clone()], vec![*budget]),
            RegionKind::Halfspaces { a, b } => (a.clone(), b.clone()),
        }
    }

    /// Largest violation among the box bounds and the defining inequalities.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let mut worst = x.iter().fold(0.0f64, |m, &v| m.max(-v).max(v - 1.0));
        let row_violation = |row: &[f64], b: f64| row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() - b;
        match &self.kind {
            RegionKind::Box => {}
            RegionKind::Cardinality { k } => worst = worst.max(x.iter().sum::<f64>() - k),
            RegionKind::Knapsack { weights, budget } => worst = worst.max(row_violation(weights, *budget)),
            RegionKind::Halfspaces { a, b } => {
                for (row, bi) in a.iter().zip(b) {
                    worst = worst.max(row_violation(row, *bi));
                }
            }
        }
        if x.iter().any(|v| v.is_nan()) {
            return f64::INFINITY;
        }
        worst
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim && self.residual(x) <= tol
    }

    pub fn contains_origin(&self) -> bool {
        self.contains(&vec![0.0; self.dim], 0.0)
    }

    /// A vertex of the region maximizing `⟨g, v⟩`.
    ///
    /// Coordinates with `g_i <= 0` stay at 0 in the closed-form oracles, and
    /// ties are filled in index order.
    pub fn lmo(&self, g: &[f64]) -> Result<Vec<f64>> {
        if g.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: g.len() });
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidObjective("non-finite gradient passed to the LMO".into()));
        }
        let positive = || g.iter().copied().enumerate().filter(|(_, gi)| *gi > 0.0);
        let mut v = vec![0.0; self.dim];
        match &self.kind {
            RegionKind::Box => {
                for (i, _) in positive() {
                    v[i] = 1.0;
                }
            }
            RegionKind::Cardinality { k } => {
                let mut order: Vec<(usize, f64)> = positive().collect();
                order.sort_by(by_score_then_index);
                let mut remaining = *k;
                for (i, _) in order {
                    if remaining <= 0.0 {
                        break;
                    }
                    v[i] = remaining.min(1.0);
                    remaining -= v[i];
                }
            }
            RegionKind::Knapsack { weights, budget } => {
                let mut order: Vec<(usize, f64)> = Vec::new();
                for (i, gi) in positive() {
                    if weights[i] == 0.0 {
                        v[i] = 1.0;
                    } else {
                        order.push((i, gi / weights[i]));
                    }
                }
                order.sort_by(by_score_then_index);
                let mut remaining = *budget;
                for (i, _) in order {
                    if remaining <= 0.0 {
                        break;
                    }
                    v[i] = (remaining / weights[i]).min(1.0);
                    remaining -= if v[i] == 1.0 { weights[i] } else { remaining };
                }
            }
            RegionKind::Halfspaces { a, b } => {
                let sol = solve_lp(&LpProblem::new(Sense::Maximize, g.to_vec(), a.clone(), b.clone()))?;
                if sol.status == LpStatus::Infeasible {
                    return Err(Error::InfeasibleRegion);
                }
                v = sol.x;
            }
        }
        Ok(v)
    }

    /// `argmin_{x ∈ P} ‖x‖_∞`, solved as `min s` s.t. `x ∈ P`, `x_i <= s <= 1`.
    pub fn min_inf_norm_point(&self) -> Result<Vec<f64>> {
        if self.contains_origin() {
            return Ok(vec![0.0; self.dim]);
        }
        let n = self.dim;
        let (a, mut b) = self.constraint_rows();
        let mut rows: Vec<Vec<f64>> = a
            .into_iter()
            .map(|mut r| {
                r.push(0.0);
                r
            })
            .collect();
        for i in 0..n {
            let mut r = vec![0.0; n + 1];
            r[i] = 1.0;
            r[n] = -1.0;
            rows.push(r);
            b.push(0.0);
        }
        let mut cost = vec![0.0; n + 1];
        cost[n] = 1.0;
        let sol = solve_lp(&LpProblem::new(Sense::Minimize, cost, rows, b))?;
        if sol.status == LpStatus::Infeasible {
            return Err(Error::InfeasibleRegion);
        }
        let mut x = sol.x;
        x.truncate(n);
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lmo_examples() {
        let b = Region::unit_box(3);
        assert_eq!(b.lmo(&[0.3, -0.2, 0.0]).unwrap(), vec![1.0, 0.0, 0.0]);
        let c = Region::cardinality(3, 1.0).unwrap();
        assert_eq!(c.lmo(&[0.5, 0.9, 0.1]).unwrap(), vec![0.0, 1.0, 0.0]);
        let k = Region::knapsack(vec![1.0, 2.0], 2.0).unwrap();
        let v = k.lmo(&[1.0, 1.0]).unwrap();
        assert_eq!(v, vec![1.0, 0.5]);
    }

    #[test]
    fn lmo_fractional_budgets() {
        let c = Region::cardinality(3, 1.5).unwrap();
        assert_eq!(c.lmo(&[0.5, 0.9, 0.5]).unwrap(), vec![0.5, 1.0, 0.0]);
        let k = Region::knapsack(vec![0.0, 1.0, 4.0], 2.0).unwrap();
        assert_eq!(k.lmo(&[0.1, 1.0, 2.0]).unwrap(), vec![1.0, 1.0, 0.25]);
    }

    #[test]
    fn lmo_halfspaces_agree_with_closed_form() {
        let k = Region::knapsack(vec![1.0, 2.0], 2.0).unwrap();
        let h = Region::halfspaces(2, vec![vec![1.0, 2.0]], vec![2.0]).unwrap();
        assert_eq!(h.lmo(&[1.0, 1.0]).unwrap(), k.lmo(&[1.0, 1.0]).unwrap());
    }

    #[test]
    fn contains_examples() {
        assert!(Region::unit_box(2).contains(&[0.5, 0.5], 0.0));
        assert!(!Region::cardinality(2, 1.0).unwrap().contains(&[0.7, 0.7], 1e-9));
        assert!(Region::knapsack(vec![1.0, 2.0], 2.0).unwrap().contains(&[1.0, 0.5], 1e-9));
        assert!(!Region::unit_box(2).contains(&[0.5], 1.0));
        assert!(!Region::unit_box(1).contains(&[f64::NAN], 1.0));
    }

    #[test]
    fn min_inf_norm_examples() {
        assert_eq!(Region::unit_box(3).min_inf_norm_point().unwrap(), vec![0.0; 3]);
        assert_eq!(Region::cardinality(2, 1.0).unwrap().min_inf_norm_point().unwrap(), vec![0.0; 2]);
        let x = Region::covering(2).unwrap().min_inf_norm_point().unwrap();
        assert!((x[0] - 0.5).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12, "{x:?}");
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(Region::cardinality(2, -1.0), Err(Error::InfeasibleRegion)));
        assert!(Region::knapsack(vec![1.0, -1.0], 1.0).is_err());
        assert!(matches!(Region::halfspaces(2, vec![vec![-1.0, -1.0]], vec![-3.0]), Err(Error::InfeasibleRegion)));
        assert!(Region::halfspaces(2, vec![vec![1.0]], vec![1.0]).is_err());
        assert!(Region::new(0, RegionKind::Box).is_err());
    }

    #[test]
    fn serde_round_trip_validates() {
        let r = Region::knapsack(vec![1.0, 2.0], 2.0).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<Region>(&s).unwrap(), r);
        let bad = r#"{"dim":2,"kind":"halfspaces","a":[[-1,-1]],"b":[-3]}"#;
        assert!(serde_json::from_str::<Region>(bad).is_err());
    }
}
