//! Empirical check of the stability bounds: perturb the weights at random within
//! `eps` and compare the observed metric change against the theoretical bound.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::binary::mcc;
use crate::bounds::{multiclass_constants, BinaryBoundContext};
use crate::error::{precondition, MetricError, Result};
use crate::labels::{BinaryLabeledData, MulticlassLabeledData};
use crate::multiclass::{covariance_set, ecc, mpc1, mpc2};
use crate::scalar::Scalar;
use crate::weights::WeightVector;

/// Perturbations are drawn strictly inside the `eps` ball.
const STRICT_MARGIN: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Mcc,
    Ecc,
    Mpc1,
    Mpc2,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Mcc, Metric::Ecc, Metric::Mpc1, Metric::Mpc2];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Mcc => "mcc",
            Metric::Ecc => "ecc",
            Metric::Mpc1 => "mpc1",
            Metric::Mpc2 => "mpc2",
        }
    }

    pub fn is_binary(self) -> bool {
        self == Metric::Mcc
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown metric '{s}' (expected mcc, ecc, mpc1 or mpc2)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LabeledInstance {
    Binary(BinaryLabeledData),
    Multiclass(MulticlassLabeledData),
}

impl LabeledInstance {
    pub fn len(&self) -> usize {
        match self {
            LabeledInstance::Binary(d) => d.len(),
            LabeledInstance::Multiclass(d) => d.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn binary(&self, metric: Metric) -> Result<&BinaryLabeledData> {
        match self {
            LabeledInstance::Binary(d) => Ok(d),
            LabeledInstance::Multiclass(_) => {
                Err(precondition(format!("{metric} needs binary labels")))
            }
        }
    }

    fn multiclass(&self, metric: Metric) -> Result<&MulticlassLabeledData> {
        match self {
            LabeledInstance::Multiclass(d) => Ok(d),
            LabeledInstance::Binary(_) => {
                Err(precondition(format!("{metric} needs multiclass labels")))
            }
        }
    }
}

pub fn metric_value<T: Scalar>(
    metric: Metric,
    instance: &LabeledInstance,
    w: &WeightVector<T>,
) -> Result<T> {
    match metric {
        Metric::Mcc => mcc(instance.binary(metric)?, w),
        Metric::Ecc => ecc(&covariance_set(instance.multiclass(metric)?, w)?),
        Metric::Mpc1 => mpc1(&covariance_set(instance.multiclass(metric)?, w)?),
        Metric::Mpc2 => Ok(mpc2(&covariance_set(instance.multiclass(metric)?, w)?)),
    }
}

pub fn theoretical_bound<T: Scalar>(
    metric: Metric,
    instance: &LabeledInstance,
    w: &WeightVector<T>,
    eps: T,
) -> Result<T> {
    match metric {
        Metric::Mcc => BinaryBoundContext::new(instance.binary(metric)?, w)?.bound(eps),
        Metric::Ecc => multiclass_constants(instance.multiclass(metric)?, w)?.ecc_bound(eps),
        Metric::Mpc1 => multiclass_constants(instance.multiclass(metric)?, w)?.mpc1_bound(eps),
        Metric::Mpc2 => multiclass_constants(instance.multiclass(metric)?, w)?.mpc2_bound(eps),
    }
}

/// Open upper limit on `eps` for the selected bound: `min{m/2, 1/N}` for MCC,
/// `min{s/2, 1}` for the multiclass measures. Fails when the instance itself violates
/// a precondition (degenerate labels, no weighted true positives).
pub fn eps_limit<T: Scalar>(
    metric: Metric,
    instance: &LabeledInstance,
    w: &WeightVector<T>,
) -> Result<T> {
    match metric {
        Metric::Mcc => {
            let ctx = BinaryBoundContext::new(instance.binary(metric)?, w)?;
            if ctx.small_m <= T::zero() {
                return Err(precondition(
                    "m = min A must be positive (no weighted true positives)",
                ));
            }
            Ok(ctx.eps_max)
        }
        _ => {
            // evaluating the metric surfaces label degeneracy
            metric_value(metric, instance, w)?;
            Ok((w.trace() / T::lit(2.0)).min(T::one()))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub metric: Metric,
    pub eps: f64,
    pub theoretical_bound: f64,
    pub empirical_max_deviation: f64,
    pub trials: usize,
    pub preconditions_ok: bool,
    pub violations: usize,
}

impl fmt::Display for StabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "metric: {}", self.metric)?;
        writeln!(f, "eps: {:e}", self.eps)?;
        writeln!(f, "theoretical_bound: {:e}", self.theoretical_bound)?;
        writeln!(
            f,
            "empirical_max_deviation: {:e}",
            self.empirical_max_deviation
        )?;
        writeln!(f, "trials: {}", self.trials)?;
        writeln!(f, "preconditions_ok: {}", self.preconditions_ok)?;
        write!(f, "violations: {}", self.violations)
    }
}

/// Draws a weight vector `W` with `|W_i - S_i| < eps` for every `i`. A draw that would
/// be non-positive is replaced by `S_i / 2`, which is still within `eps` of `S_i`.
pub fn perturb_weights<T: Scalar, R: Rng + ?Sized>(
    w: &WeightVector<T>,
    eps: T,
    rng: &mut R,
) -> WeightVector<T> {
    let radius = eps.to_f64_lossy() * STRICT_MARGIN;
    let half = T::lit(0.5);
    let perturbed = w
        .as_slice()
        .iter()
        .map(|&s| {
            let u = T::lit(rng.random_range(-radius..=radius));
            let x = s + u;
            if x > T::zero() {
                x
            } else {
                s * half
            }
        })
        .collect();
    WeightVector::new(perturbed).expect("perturbed weights are positive")
}

/// Runs `trials` independent perturbations of `w` and counts how often the metric moves
/// further than the theoretical bound. Trial `i` draws from ChaCha stream `i` of `seed`.
pub fn verify_bound<T: Scalar>(
    metric: Metric,
    instance: &LabeledInstance,
    w: &WeightVector<T>,
    eps: T,
    trials: usize,
    seed: u64,
) -> Result<StabilityReport> {
    let bound = theoretical_bound(metric, instance, w, eps)?;
    let reference = metric_value(metric, instance, w)?;
    let deviations: Vec<T> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let perturbed = perturb_weights(w, eps, &mut rng);
            metric_value(metric, instance, &perturbed).map(|v| (v - reference).abs())
        })
        .collect::<Result<_>>()?;
    let empirical = deviations.iter().copied().fold(T::zero(), T::max);
    let violations = deviations.iter().filter(|&&d| d > bound).count();
    Ok(StabilityReport {
        metric,
        eps: eps.to_f64_lossy(),
        theoretical_bound: bound.to_f64_lossy(),
        empirical_max_deviation: empirical.to_f64_lossy(),
        trials,
        preconditions_ok: true,
        violations,
    })
}

/// Log-uniform range of weights in generated test instances.
pub const INSTANCE_WEIGHT_RANGE: (f64, f64) = (0.1, 10.0);

/// A random instance for `metric`: `n` observations with uniformly drawn labels
/// (`k` classes for the multiclass measures) and log-uniform weights in
/// [`INSTANCE_WEIGHT_RANGE`]. The instance may violate the bound preconditions;
/// check it with [`eps_limit`].
pub fn random_instance<R: Rng + ?Sized>(
    metric: Metric,
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<(LabeledInstance, WeightVector<f64>)> {
    if n == 0 {
        return Err(MetricError::Empty);
    }
    let (lo, hi) = INSTANCE_WEIGHT_RANGE;
    let weights = (0..n)
        .map(|_| rng.random_range(lo.ln()..hi.ln()).exp())
        .collect();
    let w = WeightVector::new(weights)?;
    let instance = if metric.is_binary() {
        let t = (0..n).map(|_| rng.random_range(0..2u8)).collect();
        let c = (0..n).map(|_| rng.random_range(0..2u8)).collect();
        LabeledInstance::Binary(BinaryLabeledData::new(t, c)?)
    } else {
        let t = (0..n).map(|_| rng.random_range(0..k.max(1))).collect();
        let c = (0..n).map(|_| rng.random_range(0..k.max(1))).collect();
        LabeledInstance::Multiclass(MulticlassLabeledData::new(t, c, k)?)
    };
    Ok((instance, w))
}
