//! Finitely supported probability mass functions over the integers.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{is_nonnegative, to_f64, Rational};

/// A pmf on {offset, offset+1, …, offset+len−1}. Exact weights must sum to
/// exactly 1; floating weights to 1 within 10⁻¹².
#[derive(Debug, Clone, PartialEq)]
pub enum Pmf {
    Exact { offset: usize, weights: Vec<Rational> },
    Floating { offset: usize, weights: Vec<f64> },
}

impl Pmf {
    pub fn exact(offset: usize, weights: Vec<Rational>) -> Result<Self> {
        if weights.iter().any(|w| !is_nonnegative(w)) {
            return Err(Error::domain("pmf weight is negative"));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::domain(format!(
                "exact pmf weights sum to {total}, expected 1"
            )));
        }
        Ok(Pmf::Exact { offset, weights })
    }

    pub fn floating(offset: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::domain("pmf weight is negative or NaN"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "floating pmf weights sum to {total}, expected 1 within 1e-12"
            )));
        }
        Ok(Pmf::Floating { offset, weights })
    }

    pub fn offset(&self) -> usize {
        match self {
            Pmf::Exact { offset, .. } | Pmf::Floating { offset, .. } => *offset,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Pmf::Exact { weights, .. } => weights.len(),
            Pmf::Floating { weights, .. } => weights.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Pmf::Exact { .. })
    }

    /// P(X = k); zero off the stored support.
    pub fn prob(&self, k: usize) -> Rational {
        match self {
            Pmf::Exact { offset, weights } => {
                if k >= *offset && k - offset < weights.len() {
                    weights[k - offset].clone()
                } else {
                    Rational::zero()
                }
            }
            Pmf::Floating { .. } => {
                // exact queries only make sense on the exact variant
                Rational::zero()
            }
        }
    }

    pub fn prob_f64(&self, k: usize) -> f64 {
        match self {
            Pmf::Exact { .. } => to_f64(&self.prob(k)),
            Pmf::Floating { offset, weights } => {
                if k >= *offset && k - offset < weights.len() {
                    weights[k - offset]
                } else {
                    0.0
                }
            }
        }
    }

    /// Iterates (k, P(X=k)) as floats over the support.
    pub fn iter_f64(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let offset = self.offset();
        (0..self.len()).map(move |i| (offset + i, self.prob_f64(offset + i)))
    }

    /// P(X ≤ k), exact. Only meaningful on the exact variant.
    pub fn cdf(&self, k: usize) -> Rational {
        match self {
            Pmf::Exact { offset, weights } => {
                let mut acc = Rational::zero();
                for (i, w) in weights.iter().enumerate() {
                    if offset + i <= k {
                        acc += w;
                    }
                }
                acc
            }
            Pmf::Floating { .. } => Rational::zero(),
        }
    }

    /// Σ k·P(X=k) as an exact rational (exact variant only).
    pub fn mean(&self) -> Rational {
        match self {
            Pmf::Exact { offset, weights } => {
                let mut acc = Rational::zero();
                for (i, w) in weights.iter().enumerate() {
                    acc += w * Rational::from_integer(((offset + i) as i64).into());
                }
                acc
            }
            Pmf::Floating { .. } => Rational::zero(),
        }
    }
}
