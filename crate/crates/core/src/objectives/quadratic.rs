use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{uniform_point, Objective};
use crate::error::{Error, Result};

/// `F(x) = hᵀx + ½ xᵀHx` with `H` symmetric and entrywise nonpositive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticSpec {
    #[serde(alias = "H")]
    pub hessian: Vec<Vec<f64>>,
    #[serde(alias = "h")]
    pub linear: Vec<f64>,
    /// Optional declared smoothness constant; must dominate `‖H‖₂`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoothness: Option<f64>,
}

impl QuadraticSpec {
    pub fn new(hessian: Vec<Vec<f64>>, linear: Vec<f64>) -> Self {
        Self { hessian, linear, smoothness: None }
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.linear.len();
        if n == 0 {
            return Err(Error::InvalidObjective("empty linear term".into()));
        }
        if self.hessian.len() != n || self.hessian.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidObjective(format!("hessian must be {n}x{n}")));
        }
        let finite = self.linear.iter().chain(self.hessian.iter().flatten()).all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidObjective("non-finite coefficient".into()));
        }
        Ok(())
    }

    /// Problems that break DR-submodularity, symmetry or nonnegativity.
    pub fn issues(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Err(e) = self.check_shape() {
            out.push(e.to_string());
            return out;
        }
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let hij = self.hessian[i][j];
                if hij > 0.0 {
                    out.push(format!("H[{i}][{j}] = {hij} is positive (breaks DR-submodularity)"));
                }
                if j > i && (hij - self.hessian[j][i]).abs() > 1e-12 {
                    out.push(format!("H is not symmetric at ({i},{j})"));
                }
            }
        }
        if out.is_empty() {
            if let Some((x, v)) = self.nonnegativity_counterexample() {
                out.push(format!("F({x:?}) = {v} is negative"));
            }
        }
        out
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let mut v = 0.0;
        for (i, row) in self.hessian.iter().enumerate() {
            let hx: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            v += x[i] * (self.linear[i] + 0.5 * hx);
        }
        v
    }

    /// Coarse grid, plus every corner for `n <= 12`, plus seeded random
    /// samples above that.
    fn nonnegativity_counterexample(&self) -> Option<(Vec<f64>, f64)> {
        const BUDGET: f64 = 20_000.0;
        let n = self.dim();
        let check = |x: &[f64]| {
            let v = self.eval(x);
            (v < -1e-12).then(|| (x.to_vec(), v))
        };

        let per_axis = (BUDGET.powf(1.0 / n as f64).floor() as usize).clamp(2, 11);
        if (per_axis as f64).powi(n as i32) <= 4.0 * BUDGET {
            let mut idx = vec![0usize; n];
            let mut x = vec![0.0; n];
            loop {
                for (xi, &k) in x.iter_mut().zip(&idx) {
                    *xi = k as f64 / (per_axis - 1) as f64;
                }
                if let Some(bad) = check(&x) {
                    return Some(bad);
                }
                let mut d = 0;
                while d < n {
                    idx[d] += 1;
                    if idx[d] < per_axis {
                        break;
                    }
                    idx[d] = 0;
                    d += 1;
                }
                if d == n {
                    break;
                }
            }
        }
        if n <= 12 {
            for mask in 0u32..(1 << n) {
                let x: Vec<f64> = (0..n).map(|i| f64::from((mask >> i) & 1)).collect();
                if let Some(bad) = check(&x) {
                    return Some(bad);
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..4096 {
                let x = uniform_point(&mut rng, n);
                if let Some(bad) = check(&x) {
                    return Some(bad);
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    spec: QuadraticSpec,
    smoothness: f64,
}

fn operator_norm(hessian: &[Vec<f64>]) -> f64 {
    let n = hessian.len();
    let m = DMatrix::from_fn(n, n, |i, j| hessian[i][j]);
    m.singular_values().max()
}

impl Quadratic {
    /// Validates symmetry, the entrywise-nonpositive Hessian, and
    /// nonnegativity on the box before accepting the spec.
    pub fn new(spec: QuadraticSpec) -> Result<Self> {
        let issues = spec.issues();
        if let Some(first) = issues.into_iter().next() {
            return Err(Error::InvalidObjective(first));
        }
        Self::build(spec)
    }

    /// Shape checks only. Used to load deliberately invalid instances for
    /// verification runs.
    pub fn new_unchecked(spec: QuadraticSpec) -> Result<Self> {
        spec.check_shape()?;
        Self::build(spec)
    }

    fn build(spec: QuadraticSpec) -> Result<Self> {
        let norm = operator_norm(&spec.hessian);
        let smoothness = match spec.smoothness {
            Some(l) if l.is_nan() || l < norm - 1e-12 => {
                return Err(Error::InvalidObjective(format!(
                    "declared smoothness {l} is below the operator norm {norm} of H"
                )))
            }
            Some(l) => l,
            None => norm,
        };
        Ok(Self { spec, smoothness })
    }

    pub fn spec(&self) -> &QuadraticSpec {
        &self.spec
    }
}

impl Objective for Quadratic {
    fn dim(&self) -> usize {
        self.spec.dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.spec.eval(x)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.spec
            .hessian
            .iter()
            .zip(&self.spec.linear)
            .map(|(row, h)| h + row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .collect()
    }

    fn smoothness(&self) -> Option<f64> {
        Some(self.smoothness)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cross() -> Quadratic {
        Quadratic::new(QuadraticSpec::new(vec![vec![0.0, -2.0], vec![-2.0, 0.0]], vec![1.0, 1.0])).unwrap()
    }

    #[test]
    fn evaluates_examples() {
        let q = cross();
        assert_eq!(q.value(&[0.0, 0.0]), 0.0);
        assert_eq!(q.gradient(&[0.0, 0.0]), vec![1.0, 1.0]);
        assert_eq!(q.value(&[1.0, 1.0]), 0.0);
        assert_eq!(q.gradient(&[1.0, 1.0]), vec![-1.0, -1.0]);
        assert_eq!(q.value(&[0.5, 0.5]), 0.5);
        assert_eq!(q.gradient(&[0.5, 0.5]), vec![0.0, 0.0]);
        assert!((q.smoothness().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_positive_entry() {
        let spec = QuadraticSpec::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![0.0, 0.0]);
        assert!(matches!(Quadratic::new(spec.clone()), Err(Error::InvalidObjective(_))));
        assert!(Quadratic::new_unchecked(spec).is_ok());
    }

    #[test]
    fn rejects_asymmetric() {
        let spec = QuadraticSpec::new(vec![vec![0.0, -1.0], vec![-2.0, 0.0]], vec![2.0, 2.0]);
        let err = Quadratic::new(spec).unwrap_err().to_string();
        assert!(err.contains("symmetric"), "{err}");
    }

    #[test]
    fn rejects_negative_values() {
        // F(1,1) = 0.2 + 0.2 - 1 - 1 < 0
        let spec = QuadraticSpec::new(vec![vec![-1.0, -0.5], vec![-0.5, -1.0]], vec![0.2, 0.2]);
        let err = Quadratic::new(spec).unwrap_err().to_string();
        assert!(err.contains("negative"), "{err}");
    }

    #[test]
    fn rejects_understated_smoothness() {
        let mut spec = cross().spec().clone();
        spec.smoothness = Some(1.0);
        assert!(Quadratic::new(spec.clone()).is_err());
        spec.smoothness = Some(3.0);
        assert_eq!(Quadratic::new(spec).unwrap().smoothness(), Some(3.0));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Quadratic::new(QuadraticSpec::new(vec![], vec![])).is_err());
        assert!(Quadratic::new(QuadraticSpec::new(vec![vec![0.0]], vec![1.0, 1.0])).is_err());
        assert!(Quadratic::new_unchecked(QuadraticSpec::new(vec![vec![f64::NAN]], vec![1.0])).is_err());
    }
}
