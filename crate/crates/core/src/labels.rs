//! Labelled data: paired binary vectors, and paired class assignments with their
//! K×N one-hot view.

use crate::error::{MetricError, Result};
use crate::matrix::Matrix;

/// Truth and prediction binary vectors of equal length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryLabeledData {
    truth: Vec<u8>,
    prediction: Vec<u8>,
}

impl BinaryLabeledData {
    pub fn new(truth: Vec<u8>, prediction: Vec<u8>) -> Result<Self> {
        if truth.is_empty() {
            return Err(MetricError::Empty);
        }
        if truth.len() != prediction.len() {
            return Err(MetricError::DimensionMismatch {
                expected: truth.len(),
                found: prediction.len(),
            });
        }
        for v in [&truth, &prediction] {
            if let Some((index, &value)) = v.iter().enumerate().find(|(_, &x)| x > 1) {
                return Err(MetricError::InvalidBinaryLabel {
                    index,
                    value: value as usize,
                });
            }
        }
        Ok(Self { truth, prediction })
    }

    pub fn len(&self) -> usize {
        self.truth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.truth.is_empty()
    }

    pub fn truth(&self) -> &[u8] {
        &self.truth
    }

    pub fn prediction(&self) -> &[u8] {
        &self.prediction
    }

    pub fn truth_is_constant(&self) -> bool {
        is_constant(&self.truth)
    }

    pub fn prediction_is_constant(&self) -> bool {
        is_constant(&self.prediction)
    }

    /// Truth and prediction exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            truth: self.prediction.clone(),
            prediction: self.truth.clone(),
        }
    }

    /// Same truth, prediction replaced by `1 - c`.
    pub fn with_complemented_prediction(&self) -> Self {
        Self {
            truth: self.truth.clone(),
            prediction: self.prediction.iter().map(|&c| 1 - c).collect(),
        }
    }
}

/// Class assignments over `K` classes (0-based) for truth and prediction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MulticlassLabeledData {
    truth: Vec<usize>,
    prediction: Vec<usize>,
    num_classes: usize,
}

impl MulticlassLabeledData {
    /// `num_classes` must be at least 2; two classes are accepted so results can be
    /// cross-checked against the binary MCC.
    pub fn new(truth: Vec<usize>, prediction: Vec<usize>, num_classes: usize) -> Result<Self> {
        if num_classes < 2 {
            return Err(MetricError::TooFewClasses {
                k: num_classes,
                min: 2,
            });
        }
        if truth.is_empty() {
            return Err(MetricError::Empty);
        }
        if truth.len() != prediction.len() {
            return Err(MetricError::DimensionMismatch {
                expected: truth.len(),
                found: prediction.len(),
            });
        }
        for v in [&truth, &prediction] {
            if let Some((index, &value)) = v.iter().enumerate().find(|(_, &x)| x >= num_classes) {
                return Err(MetricError::ClassOutOfRange {
                    index,
                    value,
                    k: num_classes,
                });
            }
        }
        Ok(Self {
            truth,
            prediction,
            num_classes,
        })
    }

    pub fn from_binary(data: &BinaryLabeledData) -> Self {
        Self {
            truth: data.truth().iter().map(|&x| x as usize).collect(),
            prediction: data.prediction().iter().map(|&x| x as usize).collect(),
            num_classes: 2,
        }
    }

    pub fn len(&self) -> usize {
        self.truth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.truth.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn truth(&self) -> &[usize] {
        &self.truth
    }

    pub fn prediction(&self) -> &[usize] {
        &self.prediction
    }

    pub fn swapped(&self) -> Self {
        Self {
            truth: self.prediction.clone(),
            prediction: self.truth.clone(),
            num_classes: self.num_classes,
        }
    }

    /// K×N one-hot matrices `(t, c)`: column `n` is the unit vector of the class of observation `n`.
    pub fn one_hot(&self) -> (Matrix<u8>, Matrix<u8>) {
        (
            one_hot_matrix(&self.truth, self.num_classes),
            one_hot_matrix(&self.prediction, self.num_classes),
        )
    }
}

fn one_hot_matrix(classes: &[usize], k: usize) -> Matrix<u8> {
    let mut m = Matrix::zeros(k, classes.len());
    for (n, &class) in classes.iter().enumerate() {
        m[(class, n)] = 1;
    }
    m
}

fn is_constant<T: PartialEq>(v: &[T]) -> bool {
    v.windows(2).all(|w| w[0] == w[1])
}
