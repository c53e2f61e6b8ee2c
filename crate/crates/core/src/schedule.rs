//! Harmonic time grid for the FW-Dis iteration.
//!
//! For `T` iterations the grid is `t_j = 1/(1 - ln(1 + H_j/H_T)) - 1`, which is
//! equivalent to `sqrt(a_{t_j}) = e^{t_j/(1+t_j)} = 1 + H_j/H_T`. The update
//! coefficient `e^{-1/(1+t_j) + 1/(1+t_{j+1})}` reduces to the ratio
//! `sqrt(a_{t_j}) / sqrt(a_{t_{j+1}}) = (H_T + H_j)/(H_T + H_{j+1})`, and that
//! rational form is what the solver uses.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Running sum with Neumaier compensation.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.carry += (self.sum - t) + value;
        } else {
            self.carry += (value - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Precomputed grid for a fixed iteration count. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    iterations: usize,
    harmonic: Vec<f64>,
    harmonic_sq: f64,
    times: Vec<f64>,
    sqrt_a: Vec<f64>,
    step_coeffs: Vec<f64>,
}

impl Schedule {
    pub fn new(iterations: usize) -> Result<Self> {
        if iterations == 0 {
            return Err(Error::ZeroIterations);
        }

        let mut harmonic = Vec::with_capacity(iterations + 1);
        harmonic.push(0.0);
        let mut h = CompensatedSum::default();
        let mut h2 = CompensatedSum::default();
        for i in 1..=iterations {
            let inv = 1.0 / i as f64;
            h.add(inv);
            h2.add(inv * inv);
            harmonic.push(h.total());
        }
        let h_total = harmonic[iterations];

        let sqrt_a: Vec<f64> = harmonic.iter().map(|&hj| 1.0 + hj / h_total).collect();
        let times = harmonic.iter().map(|&hj| 1.0 / (1.0 - (1.0 + hj / h_total).ln()) - 1.0).collect();
        let step_coeffs = harmonic.windows(2).map(|w| (h_total + w[0]) / (h_total + w[1])).collect();

        Ok(Self { iterations, harmonic, harmonic_sq: h2.total(), times, sqrt_a, step_coeffs })
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// `H_0..=H_T`, with `H_0 = 0`.
    pub fn harmonic(&self) -> &[f64] {
        &self.harmonic
    }

    /// `H_T`.
    pub fn harmonic_total(&self) -> f64 {
        self.harmonic[self.iterations]
    }

    /// `H_{2,T} = sum_{i=1..T} 1/i^2`.
    pub fn harmonic_sq(&self) -> f64 {
        self.harmonic_sq
    }

    /// `t_0..=t_T`.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// `sqrt(a_{t_0})..=sqrt(a_{t_T})`, running from 1 to exactly 2.
    pub fn sqrt_a(&self) -> &[f64] {
        &self.sqrt_a
    }

    pub fn a(&self, j: usize) -> f64 {
        self.sqrt_a[j] * self.sqrt_a[j]
    }

    /// `c_0..c_{T-1}`: weight kept on the current iterate in step `j`.
    pub fn step_coeffs(&self) -> &[f64] {
        &self.step_coeffs
    }

    /// The step coefficient evaluated from the time grid instead of the
    /// harmonic ratio. Only used for cross-checks.
    pub fn exponential_step_coeff(&self, j: usize) -> f64 {
        let t0 = self.times[j];
        let t1 = self.times[j + 1];
        (-1.0 / (1.0 + t0) + 1.0 / (1.0 + t1)).exp()
    }

    /// Additive error term of the approximation certificate for this grid.
    pub fn beta(&self, dimension: usize, smoothness: f64) -> f64 {
        beta_from_sums(dimension, smoothness, self.harmonic_total(), self.harmonic_sq)
    }
}

/// Terminal time `t_T = 1/(1 - ln 2) - 1`, independent of `T`.
pub fn terminal_time() -> f64 {
    1.0 / (1.0 - std::f64::consts::LN_2) - 1.0
}

fn beta_from_sums(dimension: usize, smoothness: f64, h: f64, h2: f64) -> f64 {
    dimension as f64 * smoothness * h2 / (2.0 * h * h)
}

fn harmonic_sums(iterations: usize) -> (f64, f64) {
    let mut h = CompensatedSum::default();
    let mut h2 = CompensatedSum::default();
    for i in 1..=iterations {
        let inv = 1.0 / i as f64;
        h.add(inv);
        h2.add(inv * inv);
    }
    (h.total(), h2.total())
}

/// `beta = n * L * H_{2,T} / (2 * H_T^2)`.
pub fn beta_bound(dimension: usize, smoothness: f64, iterations: usize) -> Result<f64> {
    if iterations == 0 {
        return Err(Error::ZeroIterations);
    }
    if dimension == 0 || smoothness.is_nan() || smoothness < 0.0 {
        return Err(Error::InvalidObjective(format!(
            "beta_bound needs n >= 1 and L >= 0 (got n={dimension}, L={smoothness})"
        )));
    }
    let (h, h2) = harmonic_sums(iterations);
    Ok(beta_from_sums(dimension, smoothness, h, h2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonIterations {
    pub iterations: usize,
    /// False when `cap` was hit before `beta <= eps`.
    pub reached: bool,
}

/// Smallest `T <= cap` with `beta_bound(n, L, T) <= eps`.
pub fn iterations_for_epsilon(dimension: usize, smoothness: f64, eps: f64, cap: usize) -> Result<EpsilonIterations> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidObjective(format!("epsilon must be positive, got {eps}")));
    }
    if cap == 0 {
        return Err(Error::ZeroIterations);
    }
    if dimension == 0 || smoothness.is_nan() || smoothness < 0.0 {
        return Err(Error::InvalidObjective(format!("need n >= 1 and L >= 0 (got n={dimension}, L={smoothness})")));
    }
    let mut h = CompensatedSum::default();
    let mut h2 = CompensatedSum::default();
    for t in 1..=cap {
        let inv = 1.0 / t as f64;
        h.add(inv);
        h2.add(inv * inv);
        if beta_from_sums(dimension, smoothness, h.total(), h2.total()) <= eps {
            return Ok(EpsilonIterations { iterations: t, reached: true });
        }
    }
    Ok(EpsilonIterations { iterations: cap, reached: false })
}
