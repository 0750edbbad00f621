//! Weighted class means, covariance matrices and the multiclass correlation
//! measures ECC, MPC1 and MPC2.
//!
//! For one-hot columns `t_n`, `c_n` and weights `S_n` with `s = Σ S_n`:
//!
//! ```text
//! t̄ = (1/s) Σ S_n t_n
//! R_tc = (1/s) Σ S_n (t_n - t̄)(c_n - c̄)^T
//! ```

use crate::error::{degenerate, Result};
use crate::labels::MulticlassLabeledData;
use crate::matrix::Matrix;
use crate::scalar::{clamp_unit, Scalar};
use crate::weights::WeightVector;

/// Weighted means and the three K×K covariance matrices for one `(t, c, S)` triple.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceSet<T> {
    pub t_bar: Vec<T>,
    pub c_bar: Vec<T>,
    pub r_tt: Matrix<T>,
    pub r_tc: Matrix<T>,
    pub r_cc: Matrix<T>,
}

impl<T: Scalar> CovarianceSet<T> {
    pub fn num_classes(&self) -> usize {
        self.t_bar.len()
    }
}

pub fn covariance_set<T: Scalar>(
    data: &MulticlassLabeledData,
    w: &WeightVector<T>,
) -> Result<CovarianceSet<T>> {
    w.check_len(data.len())?;
    let k = data.num_classes();
    let s = w.trace();
    let t_bar = class_means(data.truth(), k, w);
    let c_bar = class_means(data.prediction(), k, w);
    Ok(CovarianceSet {
        r_tt: weighted_cross_covariance(data.truth(), &t_bar, data.truth(), &t_bar, w, s),
        r_tc: weighted_cross_covariance(data.truth(), &t_bar, data.prediction(), &c_bar, w, s),
        r_cc: weighted_cross_covariance(data.prediction(), &c_bar, data.prediction(), &c_bar, w, s),
        t_bar,
        c_bar,
    })
}

fn class_means<T: Scalar>(classes: &[usize], k: usize, w: &WeightVector<T>) -> Vec<T> {
    let mut mass = vec![T::zero(); k];
    for (&class, &wi) in classes.iter().zip(w.as_slice()) {
        mass[class] += wi;
    }
    let s = w.trace();
    mass.into_iter().map(|m| m / s).collect()
}

// direct sum over observations of S_n (a_n - ā)(b_n - b̄)^T
fn weighted_cross_covariance<T: Scalar>(
    a: &[usize],
    a_bar: &[T],
    b: &[usize],
    b_bar: &[T],
    w: &WeightVector<T>,
    s: T,
) -> Matrix<T> {
    let k = a_bar.len();
    let mut r = Matrix::zeros(k, k);
    let mut da = vec![T::zero(); k];
    let mut db = vec![T::zero(); k];
    for n in 0..a.len() {
        centered_one_hot(a[n], a_bar, &mut da);
        centered_one_hot(b[n], b_bar, &mut db);
        let wn = w.as_slice()[n];
        for i in 0..k {
            let wi = wn * da[i];
            for j in 0..k {
                r[(i, j)] += wi * db[j];
            }
        }
    }
    for i in 0..k {
        for j in 0..k {
            r[(i, j)] /= s;
        }
    }
    r
}

fn centered_one_hot<T: Scalar>(class: usize, mean: &[T], out: &mut [T]) {
    for (j, (o, &m)) in out.iter_mut().zip(mean).enumerate() {
        *o = if j == class { T::one() - m } else { -m };
    }
}

/// Extended correlation coefficient `tr(R_tc) / sqrt(tr(R_tt) tr(R_cc))`.
pub fn ecc<T: Scalar>(cs: &CovarianceSet<T>) -> Result<T> {
    let tt = cs.r_tt.trace();
    let cc = cs.r_cc.trace();
    if tt <= T::DEGENERACY_TOL {
        return Err(degenerate("truth labelling is constant (tr(R_tt) = 0)"));
    }
    if cc <= T::DEGENERACY_TOL {
        return Err(degenerate(
            "prediction labelling is constant (tr(R_cc) = 0)",
        ));
    }
    Ok(clamp_unit(cs.r_tc.trace() / (tt * cc).sqrt()))
}

/// `Σ_k [R_tc]_kk / Σ_k sqrt([R_tt]_kk [R_cc]_kk)`.
pub fn mpc1<T: Scalar>(cs: &CovarianceSet<T>) -> Result<T> {
    let denominator: T = per_class_scales(cs).into_iter().sum();
    if denominator <= T::DEGENERACY_TOL {
        return Err(degenerate(
            "per-class variances vanish (MPC1 denominator is 0)",
        ));
    }
    Ok(clamp_unit(cs.r_tc.trace() / denominator))
}

/// Mean over all K classes of the per-class correlations; see [`mpc2_terms`].
pub fn mpc2<T: Scalar>(cs: &CovarianceSet<T>) -> T {
    let terms = mpc2_terms(cs);
    let k = T::from_count(terms.len());
    terms.into_iter().sum::<T>() / k
}

/// Per-class correlations `[R_tc]_kk / sqrt([R_tt]_kk [R_cc]_kk)`.
///
/// A class whose denominator is at or below the degeneracy threshold contributes 0.
/// This happens when the class is absent from (or fills all of) the truth or the
/// prediction, in which case the numerator vanishes as well.
pub fn mpc2_terms<T: Scalar>(cs: &CovarianceSet<T>) -> Vec<T> {
    let rtc = cs.r_tc.diagonal();
    per_class_scales(cs)
        .into_iter()
        .zip(rtc)
        .map(|(den, num)| {
            if den <= T::DEGENERACY_TOL {
                T::zero()
            } else {
                clamp_unit(num / den)
            }
        })
        .collect()
}

/// `sqrt([R_tt]_kk [R_cc]_kk)` for each class.
pub fn per_class_scales<T: Scalar>(cs: &CovarianceSet<T>) -> Vec<T> {
    cs.r_tt
        .diagonal()
        .into_iter()
        .zip(cs.r_cc.diagonal())
        .map(|(a, b)| (a * b).max(T::zero()).sqrt())
        .collect()
}

/// All three measures for one covariance set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MulticlassScores<T> {
    pub ecc: T,
    pub mpc1: T,
    pub mpc2: T,
}

pub fn scores<T: Scalar>(
    data: &MulticlassLabeledData,
    w: &WeightVector<T>,
) -> Result<MulticlassScores<T>> {
    let cs = covariance_set(data, w)?;
    Ok(MulticlassScores {
        ecc: ecc(&cs)?,
        mpc1: mpc1(&cs)?,
        mpc2: mpc2(&cs),
    })
}
