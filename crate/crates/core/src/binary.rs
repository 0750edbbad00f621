//! Weighted confusion masses and the weighted Matthews correlation coefficient.
//!
//! With diagonal weights `S`, the confusion entries are weighted inner products
//! of the truth vector `t` and prediction vector `c`:
//!
//! ```text
//! TP = <t, c>_S        TN = <1-t, 1-c>_S
//! FP = <1-t, c>_S      FN = <t, 1-c>_S
//! ```
//!
//! and the MCC is evaluated in the inner-product form
//!
//! ```text
//!        <t,c><1,1> - <t,1><1,c>
//! MCC = ---------------------------------------
//!       sqrt(<t,1> <1,c> <1-t,1> <1,1-c>)
//! ```

use crate::error::{degenerate, Result};
use crate::labels::BinaryLabeledData;
use crate::scalar::{clamp_unit, Scalar};
use crate::weights::WeightVector;

/// Weighted masses of the four confusion cells. They sum to the trace of the weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedConfusion<T> {
    pub true_pos: T,
    pub true_neg: T,
    pub false_pos: T,
    pub false_neg: T,
}

impl<T: Scalar> WeightedConfusion<T> {
    pub fn total(&self) -> T {
        self.true_pos + self.true_neg + self.false_pos + self.false_neg
    }
}

pub fn confusion<T: Scalar>(
    data: &BinaryLabeledData,
    w: &WeightVector<T>,
) -> Result<WeightedConfusion<T>> {
    w.check_len(data.len())?;
    let mut cm = WeightedConfusion {
        true_pos: T::zero(),
        true_neg: T::zero(),
        false_pos: T::zero(),
        false_neg: T::zero(),
    };
    for ((&t, &c), &wi) in data.truth().iter().zip(data.prediction()).zip(w.as_slice()) {
        match (t, c) {
            (1, 1) => cm.true_pos += wi,
            (0, 0) => cm.true_neg += wi,
            (0, _) => cm.false_pos += wi,
            _ => cm.false_neg += wi,
        }
    }
    Ok(cm)
}

/// The five inner products the MCC (and its stability bound) is built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerProducts<T> {
    /// `<t, c>`
    pub tc: T,
    /// `<t, 1>`
    pub t1: T,
    /// `<1, c>`
    pub c1: T,
    /// `<1 - t, 1>`
    pub not_t1: T,
    /// `<1, 1 - c>`
    pub not_c1: T,
    /// `<1, 1>`, the trace of the weights
    pub ones: T,
}

impl<T: Scalar> InnerProducts<T> {
    pub fn new(data: &BinaryLabeledData, w: &WeightVector<T>) -> Result<Self> {
        let cm = confusion(data, w)?;
        Ok(Self {
            tc: cm.true_pos,
            t1: cm.true_pos + cm.false_neg,
            c1: cm.true_pos + cm.false_pos,
            not_t1: cm.true_neg + cm.false_pos,
            not_c1: cm.true_neg + cm.false_neg,
            ones: w.trace(),
        })
    }

    /// MCC from the inner-product form. The caller guarantees a nonzero denominator.
    pub(crate) fn mcc(&self) -> T {
        let numerator = self.tc * self.ones - self.t1 * self.c1;
        // factored square root keeps the product of four masses in range for f32
        let denominator = (self.t1 * self.not_t1).sqrt() * (self.c1 * self.not_c1).sqrt();
        clamp_unit(numerator / denominator)
    }
}

/// Weighted MCC in `[-1, 1]`. Fails with `DegenerateLabels` when truth or prediction is constant.
pub fn mcc<T: Scalar>(data: &BinaryLabeledData, w: &WeightVector<T>) -> Result<T> {
    check_nondegenerate(data)?;
    Ok(InnerProducts::new(data, w)?.mcc())
}

pub(crate) fn check_nondegenerate(data: &BinaryLabeledData) -> Result<()> {
    if data.truth_is_constant() {
        return Err(degenerate("truth vector is constant"));
    }
    if data.prediction_is_constant() {
        return Err(degenerate("prediction vector is constant"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::MetricError;

    fn data(t: &[u8], c: &[u8]) -> BinaryLabeledData {
        BinaryLabeledData::new(t.to_vec(), c.to_vec()).unwrap()
    }

    fn w(xs: &[f64]) -> WeightVector<f64> {
        WeightVector::from_f64(xs).unwrap()
    }

    // TP*TN - FP*FN over the product of the four marginals
    fn mcc_from_cells(tp: f64, tn: f64, fp: f64, fn_: f64) -> f64 {
        (tp * tn - fp * fn_) / ((tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_)).sqrt()
    }

    #[test]
    fn confusion_examples() {
        let d = data(&[1, 1, 0, 0], &[1, 0, 1, 0]);
        let cm = confusion(&d, &w(&[1.0; 4])).unwrap();
        assert_eq!(
            (cm.true_pos, cm.false_neg, cm.false_pos, cm.true_neg),
            (1.0, 1.0, 1.0, 1.0)
        );

        let cm = confusion(&d, &w(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        assert_eq!(
            (cm.true_pos, cm.false_neg, cm.false_pos, cm.true_neg),
            (1.0, 2.0, 3.0, 4.0)
        );
        assert_eq!(cm.total(), 10.0);
    }

    #[test]
    fn perfect_prediction_has_no_errors() {
        let d = data(&[1, 0, 0, 1, 1], &[1, 0, 0, 1, 1]);
        let cm = confusion(&d, &w(&[0.5, 3.0, 7.0, 1e4, 2.0])).unwrap();
        assert_eq!(cm.false_pos, 0.0);
        assert_eq!(cm.false_neg, 0.0);
    }

    #[test]
    fn mcc_examples() {
        let weights = w(&[0.3, 9.0, 1.5, 100.0]);
        assert_eq!(
            mcc(&data(&[1, 0, 1, 0], &[1, 0, 1, 0]), &weights).unwrap(),
            1.0
        );
        assert_eq!(
            mcc(&data(&[1, 0, 1, 0], &[0, 1, 0, 1]), &weights).unwrap(),
            -1.0
        );

        let expected = mcc_from_cells(1.0, 4.0, 3.0, 2.0);
        let got = mcc(
            &data(&[1, 1, 0, 0], &[1, 0, 1, 0]),
            &w(&[1.0, 2.0, 3.0, 4.0]),
        )
        .unwrap();
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
        assert!((got - (-2.0 / 504f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn mcc_rejects_constant_labels() {
        let wv = w(&[1.0; 3]);
        assert!(matches!(
            mcc(&data(&[1, 1, 1], &[1, 0, 1]), &wv),
            Err(MetricError::DegenerateLabels(_))
        ));
        assert!(matches!(
            mcc(&data(&[1, 0, 1], &[0, 0, 0]), &wv),
            Err(MetricError::DegenerateLabels(_))
        ));
    }

    #[test]
    fn mcc_length_mismatch() {
        assert!(matches!(
            mcc(&data(&[1, 0], &[0, 1]), &w(&[1.0; 3])),
            Err(MetricError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inner_products_match_confusion() {
        let d = data(&[1, 1, 0, 0, 1], &[1, 0, 1, 0, 1]);
        let ip = InnerProducts::new(&d, &w(&[1.0, 2.0, 3.0, 4.0, 5.0])).unwrap();
        assert_eq!(ip.tc, 6.0);
        assert_eq!(ip.t1, 8.0);
        assert_eq!(ip.c1, 9.0);
        assert_eq!(ip.not_t1, 7.0);
        assert_eq!(ip.not_c1, 6.0);
        assert_eq!(ip.ones, 15.0);
    }

    #[test]
    fn single_precision_agrees() {
        let d = data(&[1, 1, 0, 0, 1, 0], &[1, 0, 1, 0, 1, 1]);
        let xs = [1.0, 100.0, 10000.0, 2.5, 7.0, 0.01];
        let a = mcc(&d, &w(&xs)).unwrap();
        let b = mcc(&d, &WeightVector::<f32>::from_f64(&xs).unwrap()).unwrap();
        assert!((a - b as f64).abs() < 1e-5);
    }
}
