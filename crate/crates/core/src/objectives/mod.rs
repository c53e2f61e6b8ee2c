//! Value/gradient-evaluable DR-submodular objectives on `[0,1]^n`.

mod multilinear;
mod quadratic;

pub use multilinear::{MultilinearExtension, SetFunctionTable, SubmodularityViolation, MAX_GROUND_SET};
pub use quadratic::{Quadratic, QuadraticSpec};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::point::distance;

/// Factor applied to a sampled smoothness estimate before it is used in a
/// certificate. Sampling only gives a lower bound on the true constant.
pub const SMOOTHNESS_SAFETY_FACTOR: f64 = 1.5;

/// A function `F: [0,1]^n -> R` with a value oracle and a gradient oracle.
///
/// Implementations must be pure: the same input always yields bit-identical
/// output, and evaluation from several threads at once is allowed.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    fn gradient(&self, x: &[f64]) -> Vec<f64>;

    /// Declared Lipschitz constant of the gradient, if known.
    fn smoothness(&self) -> Option<f64>;
}

impl<O: Objective + ?Sized> Objective for &O {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (**self).gradient(x)
    }
    fn smoothness(&self) -> Option<f64> {
        (**self).smoothness()
    }
}

impl<O: Objective + ?Sized> Objective for Box<O> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (**self).gradient(x)
    }
    fn smoothness(&self) -> Option<f64> {
        (**self).smoothness()
    }
}

pub(crate) fn uniform_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random::<f64>()).collect()
}

/// Largest observed `|∇F(x) - ∇F(y)| / |x - y|` over uniformly sampled pairs.
///
/// This is a lower bound on the true constant. Pairs closer than `1e-12`
/// are skipped.
pub fn estimate_smoothness<O: Objective + ?Sized>(objective: &O, samples: usize, seed: u64) -> f64 {
    let n = objective.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    for _ in 0..samples {
        let x = uniform_point(&mut rng, n);
        let y = uniform_point(&mut rng, n);
        let d = distance(&x, &y);
        if d < 1e-12 {
            continue;
        }
        let gx = objective.gradient(&x);
        let gy = objective.gradient(&y);
        best = best.max(distance(&gx, &gy) / d);
    }
    best
}

/// Declared smoothness, or the sampled estimate inflated by
/// [`SMOOTHNESS_SAFETY_FACTOR`] when none is declared.
pub fn certified_smoothness<O: Objective + ?Sized>(objective: &O) -> f64 {
    objective.smoothness().unwrap_or_else(|| SMOOTHNESS_SAFETY_FACTOR * estimate_smoothness(objective, 2000, 0))
}

pub use crate::oracle::finite_difference_gradient;

#[cfg(test)]
mod tests {
    use super::*;

    struct Unannotated(Quadratic);

    impl Objective for Unannotated {
        fn dim(&self) -> usize {
            self.0.dim()
        }
        fn value(&self, x: &[f64]) -> f64 {
            self.0.value(x)
        }
        fn gradient(&self, x: &[f64]) -> Vec<f64> {
            self.0.gradient(x)
        }
        fn smoothness(&self) -> Option<f64> {
            None
        }
    }

    fn cross_quadratic() -> Quadratic {
        Quadratic::new(QuadraticSpec::new(vec![vec![0.0, -2.0], vec![-2.0, 0.0]], vec![1.0, 1.0])).unwrap()
    }

    #[test]
    fn smoothness_of_affine_gradient() {
        let q = cross_quadratic();
        let est = estimate_smoothness(&q, 5000, 7);
        assert!(est <= 2.0 + 1e-12);
        assert!(est > 1.9, "estimate {est} should approach the operator norm");
    }

    #[test]
    fn smoothness_of_linear_is_zero() {
        let q = Quadratic::new(QuadraticSpec::new(vec![vec![0.0; 2]; 2], vec![1.0, 0.0])).unwrap();
        assert_eq!(estimate_smoothness(&q, 100, 1), 0.0);
    }

    #[test]
    fn smoothness_of_cut_extension() {
        let f = MultilinearExtension::new(SetFunctionTable::cut2()).unwrap();
        let est = estimate_smoothness(&f, 5000, 3);
        assert!(est <= 2.0 + 1e-12 && est > 1.9);
    }

    #[test]
    fn certified_uses_safety_factor_only_without_declaration() {
        let q = cross_quadratic();
        assert!((certified_smoothness(&q) - 2.0).abs() < 1e-12);
        let u = Unannotated(cross_quadratic());
        let c = certified_smoothness(&u);
        assert!(c > 2.0 && c <= 3.0 + 1e-12);
    }
}
