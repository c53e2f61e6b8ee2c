//! Small dense-vector helpers for points of the unit box.

use crate::error::{Error, Result};

fn check_dims(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), actual: y.len() });
    }
    Ok(())
}

/// Componentwise maximum `x ∨ y`.
pub fn join(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    check_dims(x, y)?;
    Ok(x.iter().zip(y).map(|(a, b)| a.max(*b)).collect())
}

/// Componentwise minimum `x ∧ y`.
pub fn meet(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    check_dims(x, y)?;
    Ok(x.iter().zip(y).map(|(a, b)| a.min(*b)).collect())
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub fn inf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

pub fn all_finite(x: &[f64]) -> bool {
    x.iter().all(|v| v.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn join_and_meet() {
        assert_eq!(join(&[0.2, 0.8], &[0.5, 0.1]).unwrap(), vec![0.5, 0.8]);
        assert_eq!(meet(&[0.2, 0.8], &[0.5, 0.1]).unwrap(), vec![0.2, 0.1]);
        let x = [0.3, 0.0, 1.0];
        assert_eq!(join(&x, &x).unwrap(), x.to_vec());
        assert_eq!(meet(&x, &x).unwrap(), x.to_vec());
    }

    #[test]
    fn mismatched_dimensions() {
        assert!(matches!(join(&[0.0], &[0.0, 1.0]), Err(Error::DimensionMismatch { expected: 1, actual: 2 })));
        assert!(meet(&[0.0, 1.0], &[0.0]).is_err());
    }
}
