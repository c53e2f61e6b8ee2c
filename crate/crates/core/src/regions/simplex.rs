//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Problems have the form `max/min cᵀx` s.t. `Ax <= b`, `0 <= x <= u` with
//! `u <= 1`, so every feasible problem is bounded. Upper bounds are added as
//! ordinary rows; at desk scale the tableau stays small.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const PIVOT_CANDIDATE_TOL: f64 = 1e-12;
const PIVOT_INSTABILITY: f64 = 1e-10;
const PHASE_ONE_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpProblem {
    pub sense: Sense,
    pub cost: Vec<f64>,
    /// Rows of `A` in `Ax <= b`.
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    /// Per-variable upper bounds in `[0, 1]`; lower bounds are 0.
    pub upper: Vec<f64>,
}

impl LpProblem {
    /// Variables in the unit box.
    pub fn new(sense: Sense, cost: Vec<f64>, rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> Self {
        let upper = vec![1.0; cost.len()];
        Self { sense, cost, rows, rhs, upper }
    }

    fn validate(&self) -> Result<()> {
        let n = self.cost.len();
        let bad = |msg: String| Err(Error::InvalidRegion(msg));
        if self.upper.len() != n {
            return bad(format!("{} upper bounds for {n} variables", self.upper.len()));
        }
        if self.rows.len() != self.rhs.len() {
            return bad(format!("{} rows but {} right-hand sides", self.rows.len(), self.rhs.len()));
        }
        if self.rows.iter().any(|r| r.len() != n) {
            return bad(format!("constraint rows must have {n} entries"));
        }
        let finite = self.cost.iter().chain(self.rhs.iter()).chain(self.rows.iter().flatten()).all(|v| v.is_finite());
        if !finite {
            return bad("non-finite LP coefficient".into());
        }
        if self.upper.iter().any(|u| !(0.0..=1.0).contains(u)) {
            return bad("variable upper bounds must lie in [0, 1]".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal basic solution; empty when infeasible.
    pub x: Vec<f64>,
    /// NaN when infeasible.
    pub objective: f64,
}

struct Tableau {
    /// Each row holds the column coefficients followed by the right-hand side.
    rows: Vec<Vec<f64>>,
    /// Reduced-cost row `z - cᵀx = 0`, stored as `-c` plus the value in the last slot.
    obj: Vec<f64>,
    basis: Vec<usize>,
    cols: usize,
    pivots: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) -> Result<()> {
        let p = self.rows[r][c];
        if p.abs() < PIVOT_INSTABILITY {
            return Err(Error::NumericInstability { pivot: p.abs() });
        }
        self.pivots += 1;
        if self.pivots > MAX_PIVOTS {
            return Err(Error::PivotLimit(MAX_PIVOTS));
        }
        let inv = 1.0 / p;
        self.rows[r].iter_mut().for_each(|v| *v *= inv);
        self.rows[r][c] = 1.0;
        let pivot_row = self.rows[r].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                row.iter_mut().zip(&pivot_row).for_each(|(v, pr)| *v -= f * pr);
                row[c] = 0.0;
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            self.obj.iter_mut().zip(&pivot_row).for_each(|(v, pr)| *v -= f * pr);
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
        Ok(())
    }

    /// Maximizes over columns `< allowed`. Bland: lowest-index improving
    /// column enters; among minimum-ratio rows the lowest basic index leaves.
    fn optimize(&mut self, allowed: usize) -> Result<()> {
        let rhs = self.cols;
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.obj[j] < -PIVOT_CANDIDATE_TOL) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[enter];
                if a <= PIVOT_CANDIDATE_TOL {
                    continue;
                }
                let ratio = row[rhs] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br - 1e-15 || (ratio <= br + 1e-15 && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter)?,
                // Cannot happen for box-bounded problems.
                None => return Err(Error::InvalidRegion("LP is unbounded".into())),
            }
        }
    }
}

/// Solves the LP to an optimal basic feasible solution.
pub fn solve_lp(problem: &LpProblem) -> Result<LpSolution> {
    problem.validate()?;
    let n = problem.cost.len();

    let mut a_rows: Vec<Vec<f64>> = problem.rows.clone();
    let mut b: Vec<f64> = problem.rhs.clone();
    for (j, &u) in problem.upper.iter().enumerate() {
        let mut row = vec![0.0; n];
        row[j] = 1.0;
        a_rows.push(row);
        b.push(u);
    }
    let m = a_rows.len();

    let needs_artificial: Vec<usize> = (0..m).filter(|&i| b[i] < 0.0).collect();
    let n_art = needs_artificial.len();
    let cols = n + m + n_art;
    let art_start = n + m;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = art_start;
    for i in 0..m {
        let mut row = vec![0.0; cols + 1];
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            row[j] = sign * a_rows[i][j];
        }
        row[n + i] = sign;
        row[cols] = sign * b[i];
        if b[i] < 0.0 {
            row[art] = 1.0;
            basis.push(art);
            art += 1;
        } else {
            basis.push(n + i);
        }
        rows.push(row);
    }

    let mut tab = Tableau { rows, obj: vec![0.0; cols + 1], basis, cols, pivots: 0 };

    if n_art > 0 {
        // maximize -Σ artificials
        for j in art_start..cols {
            tab.obj[j] = 1.0;
        }
        for i in 0..m {
            if tab.basis[i] >= art_start {
                let row = tab.rows[i].clone();
                tab.obj.iter_mut().zip(&row).for_each(|(v, r)| *v -= r);
            }
        }
        tab.optimize(cols)?;
        if -tab.obj[cols] > PHASE_ONE_TOL {
            return Ok(LpSolution { status: LpStatus::Infeasible, x: Vec::new(), objective: f64::NAN });
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= art_start {
                match (0..art_start).find(|&j| tab.rows[i][j].abs() > 1e-9) {
                    Some(j) => {
                        tab.pivot(i, j)?;
                        i += 1;
                    }
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    let sign = match problem.sense {
        Sense::Maximize => 1.0,
        Sense::Minimize => -1.0,
    };
    tab.obj = vec![0.0; cols + 1];
    for j in 0..n {
        tab.obj[j] = -sign * problem.cost[j];
    }
    for i in 0..tab.rows.len() {
        let bj = tab.basis[i];
        let f = tab.obj[bj];
        if f != 0.0 {
            let row = tab.rows[i].clone();
            tab.obj.iter_mut().zip(&row).for_each(|(v, r)| *v -= f * r);
        }
    }
    tab.optimize(art_start)?;

    let mut x = vec![0.0; n];
    for (i, &bj) in tab.basis.iter().enumerate() {
        if bj < n {
            x[bj] = tab.rows[i][cols];
        }
    }
    for (xj, &u) in x.iter_mut().zip(&problem.upper) {
        *xj = xj.clamp(0.0, u);
    }
    let objective = problem.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution { status: LpStatus::Optimal, x, objective })
}
