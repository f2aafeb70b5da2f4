//! Nonnegative weights over a finite alphabet.

use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, is_nonneg, Real};
use serde::{Deserialize, Serialize};

/// Nonnegative weight vector, optionally normalized to a probability vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalWeight<F = f64> {
    weights: Vec<F>,
    normalized: bool,
    norm_tol: F,
}

impl<F: Real> ClassicalWeight<F> {
    /// Any nonnegative finite weights.
    pub fn new(weights: Vec<F>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::ShapeMismatch("empty alphabet".into()));
        }
        if let Some(&bad) = weights.iter().find(|&&w| !is_nonneg(w)) {
            return Err(Error::OutOfRange {
                what: "weight",
                value: bad.to_f64_lossy(),
            });
        }
        Ok(Self {
            weights,
            normalized: false,
            norm_tol: F::c(1e-9),
        })
    }

    /// Probability vector; the sum must be within `1e-9` of one (`1e-5` for `f32`).
    pub fn probability(weights: Vec<F>) -> Result<Self> {
        let mut w = Self::new(weights)?;
        let tol = F::c(1e-9).max(F::epsilon() * F::c(64.0));
        let s = w.total();
        if (s - F::one()).abs() > tol {
            return Err(Error::NotNormalized {
                trace: s.to_f64_lossy(),
            });
        }
        w.normalized = true;
        w.norm_tol = tol;
        Ok(w)
    }

    /// Rescales positive weights to a probability vector.
    pub fn normalize(weights: Vec<F>) -> Result<Self> {
        let w = Self::new(weights)?;
        let s = w.total();
        if s <= F::zero() {
            return Err(Error::ZeroOperator);
        }
        Self::probability(w.weights.iter().map(|&x| x / s).collect())
    }

    pub fn uniform(n: usize) -> Self {
        let p = F::one() / F::from_count(n);
        Self {
            weights: vec![p; n],
            normalized: true,
            norm_tol: F::c(1e-9),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn as_slice(&self) -> &[F] {
        &self.weights
    }

    pub fn get(&self, i: usize) -> F {
        self.weights[i]
    }

    pub fn total(&self) -> F {
        compensated_sum(self.weights.iter().copied())
    }

    /// Indices with strictly positive weight.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.weights[i] > F::zero()).collect()
    }

    pub fn has_full_support(&self) -> bool {
        self.weights.iter().all(|&w| w > F::zero())
    }

    /// `t · w` (drops the normalized flag unless `t = 1`).
    pub fn scale(&self, t: F) -> Self {
        Self {
            weights: self.weights.iter().map(|&w| w * t).collect(),
            normalized: self.normalized && t == F::one(),
            norm_tol: self.norm_tol,
        }
    }

    /// `(1 − t)·self + t·other`.
    pub fn mix(&self, other: &Self, t: F) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self {
            weights: self
                .weights
                .iter()
                .zip(&other.weights)
                .map(|(&a, &b)| (F::one() - t) * a + t * b)
                .collect(),
            normalized: self.normalized && other.normalized,
            norm_tol: self.norm_tol,
        })
    }

    /// Convex combination `Σ cᵢ wᵢ`.
    pub fn convex_combination(items: &[Self], coeffs: &[F]) -> Result<Self> {
        let n = items.first().map(|w| w.len()).ok_or(Error::ShapeMismatch("empty set".into()))?;
        if items.len() != coeffs.len() {
            return Err(Error::ShapeMismatch("coefficient count".into()));
        }
        let mut acc = vec![F::zero(); n];
        for (w, &c) in items.iter().zip(coeffs) {
            if w.len() != n {
                return Err(Error::DimMismatch { left: n, right: w.len() });
            }
            for (a, &x) in acc.iter_mut().zip(&w.weights) {
                *a = *a + c * x;
            }
        }
        Ok(Self {
            weights: acc,
            normalized: items.iter().all(|w| w.normalized),
            norm_tol: items[0].norm_tol,
        })
    }

    /// Product weight on `X × Y`, row-major.
    pub fn kron(&self, other: &Self) -> Self {
        let mut w = Vec::with_capacity(self.len() * other.len());
        for &a in &self.weights {
            for &b in &other.weights {
                w.push(a * b);
            }
        }
        Self {
            weights: w,
            normalized: self.normalized && other.normalized,
            norm_tol: self.norm_tol,
        }
    }

    /// `w^{⊗k}`.
    pub fn kron_power(&self, k: usize) -> Self {
        let mut acc = Self {
            weights: vec![F::one()],
            normalized: true,
            norm_tol: self.norm_tol,
        };
        for _ in 0..k {
            acc = acc.kron(self);
        }
        acc.normalized = self.normalized;
        acc
    }

    pub(crate) fn check_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    /// Lossless cast to `f64`.
    pub fn to_f64(&self) -> ClassicalWeight<f64> {
        ClassicalWeight {
            weights: self.weights.iter().map(|w| w.to_f64_lossy()).collect(),
            normalized: self.normalized,
            norm_tol: self.norm_tol.to_f64_lossy(),
        }
    }
}

impl ClassicalWeight<f64> {
    /// Narrowing cast to `f32`.
    pub fn to_f32(&self) -> ClassicalWeight<f32> {
        ClassicalWeight {
            weights: self.weights.iter().map(|&w| w as f32).collect(),
            normalized: self.normalized,
            norm_tol: 1e-5,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_checks() {
        assert!(ClassicalWeight::<f64>::new(vec![0.2, -0.1]).is_err());
        assert!(ClassicalWeight::<f64>::probability(vec![0.2, 0.7]).is_err());
        let p = ClassicalWeight::<f64>::probability(vec![0.25, 0.75]).unwrap();
        assert!(p.is_normalized());
        assert_eq!(p.support(), vec![0, 1]);
    }

    #[test]
    fn tensor_power() {
        let p = ClassicalWeight::<f64>::probability(vec![0.25, 0.75]).unwrap();
        let p2 = p.kron_power(2);
        assert_eq!(p2.as_slice(), &[0.0625, 0.1875, 0.1875, 0.5625]);
        assert!(p2.is_normalized());
    }
}
