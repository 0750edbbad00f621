//! Per-observation weights (the diagonal of the weight matrix) and the weighted
//! inner product `<a, b>_S = Σ S_ii a_i b_i` on binary vectors.

use crate::error::{MetricError, Result};
use crate::scalar::Scalar;

/// Strictly positive observation weights with their cached sum (the trace of the
/// diagonal weight matrix).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector<T> {
    weights: Vec<T>,
    trace: T,
}

impl<T: Scalar> WeightVector<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(MetricError::Empty);
        }
        if let Some((index, &w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > T::zero()))
        {
            return Err(MetricError::InvalidWeight {
                index,
                value: w.to_f64_lossy(),
            });
        }
        let trace = weights.iter().copied().sum();
        Ok(Self { weights, trace })
    }

    /// All-ones weights, i.e. the unweighted setting `S = I`.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![T::one(); n])
    }

    pub fn from_f64(weights: &[f64]) -> Result<Self> {
        Self::new(weights.iter().map(|&w| T::lit(w)).collect())
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.weights
    }

    pub fn trace(&self) -> T {
        self.trace
    }

    pub fn min(&self) -> T {
        self.weights.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max(&self) -> T {
        self.weights.iter().copied().fold(T::zero(), T::max)
    }

    /// `alpha * S`; fails unless `alpha` is finite and positive.
    pub fn scaled(&self, alpha: T) -> Result<Self> {
        Self::new(self.weights.iter().map(|&w| w * alpha).collect())
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if n != self.len() {
            return Err(MetricError::DimensionMismatch {
                expected: self.len(),
                found: n,
            });
        }
        Ok(())
    }
}

/// Weighted inner product of two binary vectors under diagonal weights.
pub fn weighted_inner<T: Scalar>(a: &[u8], b: &[u8], w: &WeightVector<T>) -> Result<T> {
    w.check_len(a.len())?;
    w.check_len(b.len())?;
    let mut acc = T::zero();
    for (index, ((&x, &y), &wi)) in a.iter().zip(b).zip(w.as_slice()).enumerate() {
        for v in [x, y] {
            if v > 1 {
                return Err(MetricError::InvalidBinaryLabel {
                    index,
                    value: v as usize,
                });
            }
        }
        if x == 1 && y == 1 {
            acc += wi;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(xs: &[f64]) -> WeightVector<f64> {
        WeightVector::from_f64(xs).unwrap()
    }

    #[test]
    fn inner_examples() {
        assert_eq!(
            weighted_inner(&[1, 1, 0, 0], &[1, 0, 1, 0], &w(&[1.0; 4])).unwrap(),
            1.0
        );
        assert_eq!(
            weighted_inner(&[1, 1, 1], &[1, 1, 1], &w(&[2.0, 3.0, 4.0])).unwrap(),
            9.0
        );
        assert_eq!(
            weighted_inner(&[1, 1, 0, 0], &[1, 0, 1, 0], &w(&[1.0, 2.0, 3.0, 4.0])).unwrap(),
            1.0
        );
    }

    #[test]
    fn inner_rejects_length_mismatch() {
        let err = weighted_inner(&[1, 0], &[1, 0, 1], &w(&[1.0, 1.0])).unwrap_err();
        assert_eq!(
            err,
            MetricError::DimensionMismatch {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn inner_rejects_non_binary_entries() {
        let err = weighted_inner(&[1, 2], &[1, 1], &w(&[1.0, 1.0])).unwrap_err();
        assert!(matches!(
            err,
            MetricError::InvalidBinaryLabel { index: 1, value: 2 }
        ));
    }

    #[test]
    fn weights_must_be_positive() {
        assert_eq!(WeightVector::<f64>::new(vec![]), Err(MetricError::Empty));
        assert!(matches!(
            WeightVector::<f64>::from_f64(&[1.0, 0.0]),
            Err(MetricError::InvalidWeight { index: 1, .. })
        ));
        assert!(WeightVector::<f64>::from_f64(&[1.0, -3.0]).is_err());
        assert!(WeightVector::<f64>::from_f64(&[f64::NAN]).is_err());
        assert!(WeightVector::<f64>::from_f64(&[f64::INFINITY]).is_err());
    }

    #[test]
    fn trace_is_cached_sum() {
        let wv = w(&[1.0, 100.0, 10000.0]);
        assert_eq!(wv.trace(), 10101.0);
        assert_eq!(wv.min(), 1.0);
        assert_eq!(wv.max(), 10000.0);
        assert_eq!(wv.scaled(2.0).unwrap().trace(), 20202.0);
        assert!(wv.scaled(0.0).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let wv = WeightVector::<f32>::from_f64(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(
            weighted_inner(&[1, 1, 0, 1], &[1, 0, 1, 1], &wv).unwrap(),
            5.0f32
        );
    }
}
