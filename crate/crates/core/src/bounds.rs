//! Weight-perturbation stability bounds.
//!
//! Two weight vectors `S` and `W` with `max |S_ii - W_ii| < eps` give metric values
//! that differ by at most the bounds computed here. The binary MCC bound is linear
//! in `eps`; the multiclass bounds carry an `eps^2` factor.
//!
//! The building blocks are elementary perturbation bounds for products,
//! reciprocals, square roots, reciprocal square roots and quotients.

use crate::binary::{check_nondegenerate, InnerProducts};
use crate::error::{precondition, MetricError, Result};
use crate::labels::{BinaryLabeledData, MulticlassLabeledData};
use crate::multiclass::{covariance_set, ecc, mpc1, mpc2_terms, per_class_scales, CovarianceSet};
use crate::scalar::Scalar;
use crate::weights::WeightVector;

fn check_eps_below<T: Scalar>(eps: T, limit: T, what: &str) -> Result<()> {
    if eps > T::zero() && eps < limit {
        Ok(())
    } else {
        Err(precondition(format!(
            "eps = {eps} must satisfy 0 < eps < {what} = {limit}"
        )))
    }
}

fn check_positive<T: Scalar>(x: T, name: &str) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(precondition(format!("{name} = {x} must be positive")))
    }
}

/// Bound `eps 2^n max_{k=0..n} M^k` on `|Π x_i - Π (x_i ± eps)|` for `n` positive factors
/// with maximum `M`. Requires `0 < eps < 1` and `eps < min x_i / 2`.
pub fn bound_product<T: Scalar>(xs: &[T], eps: T) -> Result<T> {
    if xs.is_empty() {
        return Err(MetricError::Empty);
    }
    for &x in xs {
        check_positive(x, "factor")?;
    }
    let min = xs.iter().copied().fold(T::infinity(), T::min);
    let max = xs.iter().copied().fold(T::zero(), T::max);
    check_eps_below(eps, (min / T::lit(2.0)).min(T::one()), "min{min(x)/2, 1}")?;
    let n = xs.len();
    let mut power = T::one();
    let mut largest = T::one();
    for _ in 0..n {
        power *= max;
        largest = largest.max(power);
    }
    Ok(eps * T::lit(2.0).powi(n as i32) * largest)
}

/// `(4 eps / 9x^2, 4 eps / x^2)`: lower and upper bounds on `|1/x - 1/(x ± eps)|`.
pub fn bound_reciprocal<T: Scalar>(x: T, eps: T) -> Result<(T, T)> {
    check_positive(x, "x")?;
    check_eps_below(eps, x / T::lit(2.0), "x/2")?;
    let four_eps = T::lit(4.0) * eps;
    Ok((four_eps / (T::lit(9.0) * x * x), four_eps / (x * x)))
}

/// `(eps / sqrt(6x), eps / sqrt(2x))`: bounds on `|sqrt(x) - sqrt(x ± eps)|`.
pub fn bound_sqrt<T: Scalar>(x: T, eps: T) -> Result<(T, T)> {
    check_positive(x, "x")?;
    check_eps_below(eps, x / T::lit(2.0), "x/2")?;
    Ok((
        eps / (T::lit(6.0) * x).sqrt(),
        eps / (T::lit(2.0) * x).sqrt(),
    ))
}

/// `(sqrt(2) eps / (3x sqrt(3x)), sqrt(2) eps / (x sqrt(x)))`: bounds on
/// `|1/sqrt(x) - 1/sqrt(x ± eps)|`.
pub fn bound_recip_sqrt<T: Scalar>(x: T, eps: T) -> Result<(T, T)> {
    check_positive(x, "x")?;
    check_eps_below(eps, x / T::lit(2.0), "x/2")?;
    let root2_eps = T::lit(2.0).sqrt() * eps;
    Ok((
        root2_eps / (T::lit(3.0) * x * (T::lit(3.0) * x).sqrt()),
        root2_eps / (x * x.sqrt()),
    ))
}

/// `(x1/y1) [4 delta / y1 + eps (1 + 4 delta / y1)]`: bound on `|x1/y1 - x2/y2|` when
/// `|x1 - x2| < eps < x1/2` and `|y1 - y2| < delta < y1/2`. Zero `eps` or `delta` is accepted.
pub fn bound_quotient<T: Scalar>(x1: T, y1: T, eps: T, delta: T) -> Result<T> {
    check_positive(x1, "x1")?;
    check_positive(y1, "y1")?;
    let half = T::lit(0.5);
    if !(eps >= T::zero() && eps < x1 * half) {
        return Err(precondition(format!(
            "eps = {eps} must satisfy 0 <= eps < x1/2 = {}",
            x1 * half
        )));
    }
    if !(delta >= T::zero() && delta < y1 * half) {
        return Err(precondition(format!(
            "delta = {delta} must satisfy 0 <= delta < y1/2 = {}",
            y1 * half
        )));
    }
    let r = T::lit(4.0) * delta / y1;
    Ok(x1 / y1 * (r + eps * (T::one() + r)))
}

/// Quantities the binary MCC bound depends on.
///
/// `A` is the set `{<t,c>, <t,1>, <1,c>, <1-t,1>, <1,1-c>}` under the reference weights.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryBoundContext<T> {
    /// `max A`
    pub big_m: T,
    /// `min A`
    pub small_m: T,
    pub trace_s: T,
    pub n: usize,
    /// Open upper limit `min{m/2, 1/N}` on admissible `eps`.
    pub eps_max: T,
    /// MCC under the reference weights.
    pub mcc: T,
}

impl<T: Scalar> BinaryBoundContext<T> {
    pub fn new(data: &BinaryLabeledData, w: &WeightVector<T>) -> Result<Self> {
        check_nondegenerate(data)?;
        let ip = InnerProducts::new(data, w)?;
        let a = [ip.tc, ip.t1, ip.c1, ip.not_t1, ip.not_c1];
        let small_m = a.iter().copied().fold(T::infinity(), T::min);
        let big_m = a.iter().copied().fold(T::zero(), T::max);
        let n = data.len();
        Ok(Self {
            big_m,
            small_m,
            trace_s: ip.ones,
            n,
            eps_max: (small_m / T::lit(2.0)).min(T::one() / T::from_count(n)),
            mcc: ip.mcc(),
        })
    }

    pub fn check_eps(&self, eps: T) -> Result<()> {
        if self.small_m <= T::zero() {
            return Err(precondition(
                "m = min A must be positive (no weighted true positives)",
            ));
        }
        check_eps_below(eps, self.eps_max, "min{m/2, 1/N}")
    }

    /// `|MCC_S| a [1 + M^2 (1 + a eps)] eps` with `a = 2^5 tr(S)^2 N / m^2`.
    pub fn bound(&self, eps: T) -> Result<T> {
        self.check_eps(eps)?;
        let m2 = self.small_m * self.small_m;
        let a = T::lit(32.0) * self.trace_s * self.trace_s * T::from_count(self.n) / m2;
        let big_m2 = self.big_m * self.big_m;
        Ok(self.mcc.abs() * a * (T::one() + big_m2 * (T::one() + a * eps)) * eps)
    }
}

pub fn mcc_bound<T: Scalar>(data: &BinaryLabeledData, w: &WeightVector<T>, eps: T) -> Result<T> {
    BinaryBoundContext::new(data, w)?.bound(eps)
}

/// Constants the multiclass bounds are assembled from.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticlassBoundContext<T> {
    /// Largest absolute entry of the centered truth matrix `t - t̄ 1^T`.
    pub m_t: T,
    /// Largest absolute entry of the centered prediction matrix `c - c̄ 1^T`.
    pub m_c: T,
    /// `tr(S)`
    pub s: T,
    pub n: usize,
    /// Per-entry constant `M_t M_c` of the diagonal `R_tc` bound.
    pub c_entry: T,
    /// `M_t^2 tr(R_cc) + M_c^2 tr(R_tt) + 4N^2/s^2`, for the product of traces.
    pub c_trace: T,
    /// `[R_tt]_kk M_c^2 + [R_cc]_kk M_t^2 + 4N/s^2`, for each per-class variance product.
    pub c_k: Vec<T>,
    /// `Σ_k C_k / sqrt(2 [R_tt]_kk [R_cc]_kk)` over classes with a nonvanishing product.
    pub c_sum: T,
    /// The constant used by the metric bounds: the largest of the above.
    pub c: T,
    /// `tr(R_tt) tr(R_cc)`
    pub y_ecc: T,
    /// `Σ_k sqrt([R_tt]_kk [R_cc]_kk)`
    pub y_mpc1: T,
    pub covariance: CovarianceSet<T>,
}

pub fn multiclass_constants<T: Scalar>(
    data: &MulticlassLabeledData,
    w: &WeightVector<T>,
) -> Result<MulticlassBoundContext<T>> {
    let cs = covariance_set(data, w)?;
    let s = w.trace();
    let n = data.len();
    let nf = T::from_count(n);
    let m_t = centered_max_abs(data.truth(), &cs.t_bar);
    let m_c = centered_max_abs(data.prediction(), &cs.c_bar);
    let s2 = s * s;

    let c_entry = m_t * m_c;
    let c_trace =
        m_t * m_t * cs.r_cc.trace() + m_c * m_c * cs.r_tt.trace() + T::lit(4.0) * nf * nf / s2;
    let tt = cs.r_tt.diagonal();
    let cc = cs.r_cc.diagonal();
    let c_k: Vec<T> = tt
        .iter()
        .zip(&cc)
        .map(|(&a, &b)| a * m_c * m_c + b * m_t * m_t + T::lit(4.0) * nf / s2)
        .collect();
    let c_sum = c_k
        .iter()
        .zip(tt.iter().zip(&cc))
        .filter_map(|(&ck, (&a, &b))| {
            let prod = a * b;
            (prod.max(T::zero()).sqrt() > T::DEGENERACY_TOL)
                .then(|| ck / (T::lit(2.0) * prod).sqrt())
        })
        .sum::<T>();
    let c = c_k
        .iter()
        .copied()
        .fold(c_entry.max(c_trace).max(c_sum), T::max);

    Ok(MulticlassBoundContext {
        m_t,
        m_c,
        s,
        n,
        c_entry,
        c_trace,
        c_k,
        c_sum,
        c,
        y_ecc: cs.r_tt.trace() * cs.r_cc.trace(),
        y_mpc1: per_class_scales(&cs).into_iter().sum(),
        covariance: cs,
    })
}

fn centered_max_abs<T: Scalar>(classes: &[usize], mean: &[T]) -> T {
    let k = mean.len();
    let mut present = vec![false; k];
    for &class in classes {
        present[class] = true;
    }
    let mut out = T::zero();
    for (j, &m) in mean.iter().enumerate() {
        // entries in row j are 1 - m where the observation is in class j, -m elsewhere
        if present[j] {
            out = out.max((T::one() - m).abs());
        }
        if classes.iter().any(|&c| c != j) {
            out = out.max(m.abs());
        }
    }
    out
}

fn centered_frobenius<T: Scalar>(classes: &[usize], mean: &[T]) -> T {
    let base: T = mean.iter().map(|&m| m * m).sum();
    classes
        .iter()
        .map(|&c| {
            let m = mean[c];
            base - m * m + (T::one() - m) * (T::one() - m)
        })
        .sum::<T>()
        .sqrt()
}

impl<T: Scalar> MulticlassBoundContext<T> {
    fn check_eps(&self, eps: T) -> Result<()> {
        check_eps_below(eps, (self.s / T::lit(2.0)).min(T::one()), "min{s/2, 1}")
    }

    fn scaled_terms(&self) -> (T, T, T) {
        let nf = T::from_count(self.n);
        let s2 = self.s * self.s;
        // 4·4N·C/s^2, 4N^2 M_t M_c / s^2, 4N·C/s^2
        (
            T::lit(16.0) * nf * self.c / s2,
            T::lit(4.0) * nf * nf * self.m_t * self.m_c / s2,
            T::lit(4.0) * nf * self.c / s2,
        )
    }

    pub fn ecc_bound(&self, eps: T) -> Result<T> {
        self.check_eps(eps)?;
        let value = ecc(&self.covariance)?;
        let nf = T::from_count(self.n);
        let (inner, entry, _) = self.scaled_terms();
        let y_root2 = self.y_ecc * T::lit(2.0).sqrt();
        let lead = T::lit(16.0) * nf * nf * self.c / (y_root2 * self.s * self.s);
        let e2 = eps * eps;
        Ok(value.abs() * (lead + entry * (T::one() + inner / y_root2 * e2)) * e2)
    }

    pub fn mpc1_bound(&self, eps: T) -> Result<T> {
        self.check_eps(eps)?;
        let value = mpc1(&self.covariance)?;
        let (inner, entry, _) = self.scaled_terms();
        let lead = inner / self.y_mpc1;
        let e2 = eps * eps;
        Ok(value.abs() * (lead + entry * (T::one() + lead * e2)) * e2)
    }

    pub fn mpc2_bound(&self, eps: T) -> Result<T> {
        self.check_eps(eps)?;
        let k = T::from_count(self.covariance.num_classes());
        let prefactor: T = mpc2_terms(&self.covariance)
            .into_iter()
            .map(|x| (x / k).abs())
            .sum();
        let (inner, _, single) = self.scaled_terms();
        let e2 = eps * eps;
        Ok(prefactor * (inner + single * (T::one() + inner * e2)) * e2)
    }
}

/// `(4 N eps^2 / s^2) ||t - t̄ 1^T||_F ||(c - c̄ 1^T)^T||_F`, a bound on `||R_tc^S - R_tc^W||`.
pub fn rtc_bound<T: Scalar>(
    data: &MulticlassLabeledData,
    w: &WeightVector<T>,
    eps: T,
) -> Result<T> {
    w.check_len(data.len())?;
    let s = w.trace();
    check_eps_below(eps, s / T::lit(2.0), "s/2")?;
    let cs = covariance_set(data, w)?;
    let nf = T::from_count(data.len());
    Ok(T::lit(4.0) * nf * eps * eps / (s * s)
        * centered_frobenius(data.truth(), &cs.t_bar)
        * centered_frobenius(data.prediction(), &cs.c_bar))
}

pub fn ecc_bound<T: Scalar>(
    data: &MulticlassLabeledData,
    w: &WeightVector<T>,
    eps: T,
) -> Result<T> {
    multiclass_constants(data, w)?.ecc_bound(eps)
}

pub fn mpc1_bound<T: Scalar>(
    data: &MulticlassLabeledData,
    w: &WeightVector<T>,
    eps: T,
) -> Result<T> {
    multiclass_constants(data, w)?.mpc1_bound(eps)
}

pub fn mpc2_bound<T: Scalar>(
    data: &MulticlassLabeledData,
    w: &WeightVector<T>,
    eps: T,
) -> Result<T> {
    multiclass_constants(data, w)?.mpc2_bound(eps)
}
