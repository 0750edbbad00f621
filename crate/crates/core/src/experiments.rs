//! Synthetic sweep experiments: predictions that match the truth at proportion `p` on
//! a contiguous segment and at `p0` elsewhere, averaged over many samples for every
//! segment start index, under uniform and tercile weights.

use std::io::{self, Write};

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::binary::mcc;
use crate::error::MetricError;
use crate::labels::{BinaryLabeledData, MulticlassLabeledData};
use crate::multiclass::scores;
use crate::numfmt::format_significant;
use crate::weights::WeightVector;

/// Attempts per sample before a sweep gives up on drawing non-degenerate labels.
pub const MAX_REDRAWS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    /// `field` is the flag-style name of the offending setting, e.g. `segment-len`.
    #[error("invalid {field}: {message}")]
    InvalidConfig {
        field: &'static str,
        message: String,
    },

    #[error("start index {start} is outside 1..={max}")]
    StartOutOfRange { start: usize, max: usize },

    #[error("no non-degenerate sample after {0} draws")]
    RedrawCapExceeded(usize),

    #[error(transparent)]
    Metric(#[from] MetricError),
}

fn invalid(field: &'static str, message: impl Into<String>) -> SweepError {
    SweepError::InvalidConfig {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n: usize,
    /// 1 for binary labels, otherwise the number of classes (at least 3).
    pub k: usize,
    /// Match proportion inside the sliding segment.
    pub p: f64,
    /// Match proportion outside the segment.
    pub p0: f64,
    pub segment_len: usize,
    pub samples: usize,
    /// Consecutive runs of `(count, weight)` covering all `n` observations.
    pub weight_pattern: Vec<(usize, f64)>,
    pub seed: u64,
    /// Draw one truth vector from the seed and reuse it for every sample.
    pub fixed_truth: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n: 150,
            k: 1,
            p: 0.5,
            p0: 0.5,
            segment_len: 50,
            samples: 100,
            weight_pattern: tercile_weights(150),
            seed: 0,
            fixed_truth: false,
        }
    }
}

/// Thirds of `n` weighted 1, 100 and 10000 (the last third absorbs any remainder).
pub fn tercile_weights(n: usize) -> Vec<(usize, f64)> {
    let third = n / 3;
    vec![(third, 1.0), (third, 100.0), (n - 2 * third, 10000.0)]
}

impl SweepConfig {
    pub fn is_binary(&self) -> bool {
        self.k == 1
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.n == 0 {
            return Err(invalid("n", "must be at least 1"));
        }
        if self.k == 0 || self.k == 2 {
            return Err(invalid(
                "k",
                format!(
                    "{} is not allowed; use 1 for binary or at least 3 classes",
                    self.k
                ),
            ));
        }
        for (field, v) in [("p", self.p), ("p0", self.p0)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(field, format!("{v} is not in [0, 1]")));
            }
        }
        if self.segment_len == 0 || self.segment_len > self.n {
            return Err(invalid(
                "segment-len",
                format!("{} must be in 1..={} (n)", self.segment_len, self.n),
            ));
        }
        if self.samples == 0 {
            return Err(invalid("samples", "must be at least 1"));
        }
        let total: usize = self.weight_pattern.iter().map(|&(c, _)| c).sum();
        if total != self.n {
            return Err(invalid(
                "weights",
                format!("counts sum to {total} but n is {}", self.n),
            ));
        }
        if let Some(&(_, w)) = self
            .weight_pattern
            .iter()
            .find(|&&(_, w)| !(w.is_finite() && w > 0.0))
        {
            return Err(invalid("weights", format!("weight {w} is not positive")));
        }
        Ok(())
    }

    pub fn weights(&self) -> Result<WeightVector<f64>, SweepError> {
        let expanded = self
            .weight_pattern
            .iter()
            .flat_map(|&(count, w)| std::iter::repeat_n(w, count))
            .collect();
        Ok(WeightVector::new(expanded)?)
    }

    pub fn metric_columns(&self) -> &'static [&'static str] {
        if self.is_binary() {
            &["mcc", "wmcc"]
        } else {
            &["ecc", "wecc", "mpc1", "wmpc1", "mpc2", "wmpc2"]
        }
    }

    fn label_classes(&self) -> usize {
        if self.is_binary() {
            2
        } else {
            self.k
        }
    }
}

/// Uniform i.i.d. labels: bits for `k == 1`, classes `0..k` otherwise.
pub fn generate_truth<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    let classes = if k <= 1 { 2 } else { k };
    (0..n).map(|_| rng.random_range(0..classes)).collect()
}

/// Prediction for `truth` that agrees on exactly `round(p * segment_len)` uniformly chosen
/// positions of the segment starting at 1-based `start`, and on exactly
/// `round(p0 * (n - segment_len))` positions outside it. Every other position gets a wrong
/// label: the flipped bit for `k == 1`, a uniformly chosen other class otherwise.
pub fn generate_prediction<R: Rng + ?Sized>(
    truth: &[usize],
    k: usize,
    p: f64,
    p0: f64,
    start: usize,
    segment_len: usize,
    rng: &mut R,
) -> Result<Vec<usize>, SweepError> {
    let n = truth.len();
    if segment_len == 0 || segment_len > n {
        return Err(invalid(
            "segment-len",
            format!("{segment_len} must be in 1..={n}"),
        ));
    }
    let max = n - segment_len + 1;
    if start < 1 || start > max {
        return Err(SweepError::StartOutOfRange { start, max });
    }
    let classes = if k <= 1 { 2 } else { k };
    let lo = start - 1;
    let hi = lo + segment_len;
    let inside: Vec<usize> = (lo..hi).collect();
    let outside: Vec<usize> = (0..lo).chain(hi..n).collect();

    let mut matched = vec![false; n];
    for (positions, prop) in [(&inside, p), (&outside, p0)] {
        let count = ((prop * positions.len() as f64).round() as usize).min(positions.len());
        for i in sample(rng, positions.len(), count) {
            matched[positions[i]] = true;
        }
    }
    Ok(truth
        .iter()
        .zip(matched)
        .map(|(&t, m)| {
            if m {
                t
            } else {
                let other = rng.random_range(0..classes - 1);
                if other >= t {
                    other + 1
                } else {
                    other
                }
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub start_indices: Vec<usize>,
    pub columns: Vec<&'static str>,
    /// `curves[j][i]` is the mean of `columns[j]` at `start_indices[i]`.
    pub curves: Vec<Vec<f64>>,
    /// Samples redrawn because the labels were degenerate.
    pub redraws: u64,
}

impl SweepResult {
    pub fn curve(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .position(|&c| c == name)
            .map(|j| self.curves[j].as_slice())
    }

    /// CSV with header `start_index,<columns>`; values carry 9 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "start_index,{}", self.columns.join(","))?;
        for (i, start) in self.start_indices.iter().enumerate() {
            write!(out, "{start}")?;
            for curve in &self.curves {
                write!(out, ",{}", format_significant(curve[i], 9))?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

fn sample_metrics(
    config: &SweepConfig,
    truth: &[usize],
    prediction: &[usize],
    unweighted: &WeightVector<f64>,
    weighted: &WeightVector<f64>,
) -> Result<Vec<f64>, MetricError> {
    if config.is_binary() {
        let to_bits = |v: &[usize]| v.iter().map(|&x| x as u8).collect();
        let d = BinaryLabeledData::new(to_bits(truth), to_bits(prediction))?;
        Ok(vec![mcc(&d, unweighted)?, mcc(&d, weighted)?])
    } else {
        let d = MulticlassLabeledData::new(truth.to_vec(), prediction.to_vec(), config.k)?;
        let u = scores(&d, unweighted)?;
        let w = scores(&d, weighted)?;
        Ok(vec![u.ecc, w.ecc, u.mpc1, w.mpc1, u.mpc2, w.mpc2])
    }
}

fn is_constant(v: &[usize]) -> bool {
    v.windows(2).all(|w| w[0] == w[1])
}

fn fixed_truth(config: &SweepConfig) -> Result<Vec<usize>, SweepError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(u64::MAX);
    for _ in 0..MAX_REDRAWS {
        let t = generate_truth(config.n, config.k, &mut rng);
        if !is_constant(&t) {
            return Ok(t);
        }
    }
    Err(SweepError::RedrawCapExceeded(MAX_REDRAWS))
}

/// Runs the sweep. Cell `(start, sample)` draws from its own ChaCha stream and
/// per-start sums are accumulated in sample order, so the result is bit-identical
/// for a given configuration regardless of thread scheduling.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult, SweepError> {
    config.validate()?;
    let weighted = config.weights()?;
    let unweighted = WeightVector::uniform(config.n)?;
    let fixed = if config.fixed_truth {
        Some(fixed_truth(config)?)
    } else {
        None
    };
    let columns = config.metric_columns();
    let starts: Vec<usize> = (1..=config.n - config.segment_len + 1).collect();

    let per_start = starts
        .par_iter()
        .map(|&start| -> Result<(Vec<f64>, u64), SweepError> {
            let mut sums = vec![0.0; columns.len()];
            let mut redraws = 0u64;
            for j in 0..config.samples {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(((start - 1) * config.samples + j) as u64);
                let values = (0..MAX_REDRAWS)
                    .find_map(|_| {
                        let truth = match &fixed {
                            Some(t) => t.clone(),
                            None => generate_truth(config.n, config.k, &mut rng),
                        };
                        let prediction = generate_prediction(
                            &truth,
                            config.label_classes(),
                            config.p,
                            config.p0,
                            start,
                            config.segment_len,
                            &mut rng,
                        );
                        let outcome = prediction.map_err(Some).and_then(|c| {
                            sample_metrics(config, &truth, &c, &unweighted, &weighted).map_err(
                                |e| match e {
                                    MetricError::DegenerateLabels(_) => None,
                                    other => Some(SweepError::Metric(other)),
                                },
                            )
                        });
                        match outcome {
                            Ok(v) => Some(Ok(v)),
                            Err(None) => {
                                redraws += 1;
                                None
                            }
                            Err(Some(e)) => Some(Err(e)),
                        }
                    })
                    .unwrap_or(Err(SweepError::RedrawCapExceeded(MAX_REDRAWS)))?;
                for (s, v) in sums.iter_mut().zip(values) {
                    *s += v;
                }
            }
            Ok((sums, redraws))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let samples = config.samples as f64;
    let mut curves = vec![Vec::with_capacity(starts.len()); columns.len()];
    let mut redraws = 0;
    for (sums, r) in per_start {
        redraws += r;
        for (curve, s) in curves.iter_mut().zip(sums) {
            curve.push(s / samples);
        }
    }
    Ok(SweepResult {
        start_indices: starts,
        columns: columns.to_vec(),
        curves,
        redraws,
    })
}
