//! Independent reference implementations used as test oracles. Nothing here calls
//! into the library's computation paths; inputs are plain slices.
#![allow(dead_code)]

use rand::Rng;

/// Textbook MCC from integer confusion counts.
pub fn mcc_integer(t: &[u8], c: &[u8]) -> f64 {
    let (mut tp, mut tn, mut fp, mut fn_) = (0i64, 0i64, 0i64, 0i64);
    for (&a, &b) in t.iter().zip(c) {
        match (a, b) {
            (1, 1) => tp += 1,
            (0, 0) => tn += 1,
            (0, 1) => fp += 1,
            _ => fn_ += 1,
        }
    }
    let num = (tp * tn - fp * fn_) as f64;
    let den = ((tp + fp) * (tp + fn_)) as f64 * ((tn + fp) * (tn + fn_)) as f64;
    num / den.sqrt()
}

/// `(TP TN - FP FN) / sqrt((TP+FP)(TP+FN)(TN+FP)(TN+FN))`
pub fn mcc_cells(tp: f64, tn: f64, fp: f64, fn_: f64) -> f64 {
    (tp * tn - fp * fn_) / ((tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_)).sqrt()
}

pub fn weighted_cells(t: &[u8], c: &[u8], w: &[f64]) -> (f64, f64, f64, f64) {
    let (mut tp, mut tn, mut fp, mut fn_) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..t.len() {
        match (t[i], c[i]) {
            (1, 1) => tp += w[i],
            (0, 0) => tn += w[i],
            (0, 1) => fp += w[i],
            _ => fn_ += w[i],
        }
    }
    (tp, tn, fp, fn_)
}

pub type Mat = Vec<Vec<f64>>;

pub fn trace(m: &Mat) -> f64 {
    (0..m.len()).map(|i| m[i][i]).sum()
}

fn one_hot(classes: &[usize], k: usize) -> Mat {
    let mut m = vec![vec![0.0; classes.len()]; k];
    for (n, &c) in classes.iter().enumerate() {
        m[c][n] = 1.0;
    }
    m
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let (r, inner, c) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0.0; c]; r];
    for i in 0..r {
        for l in 0..inner {
            for j in 0..c {
                out[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    out
}

fn transpose(a: &Mat) -> Mat {
    (0..a[0].len())
        .map(|j| (0..a.len()).map(|i| a[i][j]).collect())
        .collect()
}

/// Means and covariances through the matrix identities
/// `t̄ = tS1/tr(S)` and `R_tc = (t - t̄1ᵀ) S (c - c̄1ᵀ)ᵀ / tr(S)`.
pub struct MatrixForm {
    pub t_bar: Vec<f64>,
    pub c_bar: Vec<f64>,
    pub r_tt: Mat,
    pub r_tc: Mat,
    pub r_cc: Mat,
    pub t_centered: Mat,
    pub c_centered: Mat,
}

pub fn matrix_form(t: &[usize], c: &[usize], k: usize, w: &[f64]) -> MatrixForm {
    let n = t.len();
    let s: f64 = w.iter().sum();
    let mut diag = vec![vec![0.0; n]; n];
    for i in 0..n {
        diag[i][i] = w[i];
    }
    let ones = vec![vec![1.0]; n];
    let tm = one_hot(t, k);
    let cm = one_hot(c, k);
    let mean = |m: &Mat| -> Vec<f64> {
        matmul(&matmul(m, &diag), &ones)
            .into_iter()
            .map(|r| r[0] / s)
            .collect()
    };
    let t_bar = mean(&tm);
    let c_bar = mean(&cm);
    let center = |m: &Mat, bar: &[f64]| -> Mat {
        m.iter()
            .zip(bar)
            .map(|(row, &b)| row.iter().map(|x| x - b).collect())
            .collect()
    };
    let tc = center(&tm, &t_bar);
    let cc = center(&cm, &c_bar);
    let cov = |a: &Mat, b: &Mat| -> Mat {
        matmul(&matmul(a, &diag), &transpose(b))
            .into_iter()
            .map(|r| r.into_iter().map(|x| x / s).collect())
            .collect()
    };
    MatrixForm {
        r_tt: cov(&tc, &tc),
        r_tc: cov(&tc, &cc),
        r_cc: cov(&cc, &cc),
        t_bar,
        c_bar,
        t_centered: tc,
        c_centered: cc,
    }
}

/// `[R_tc]_kk = (1/Σ S_i) Σ_n S_n (t_n(k) - t̄_k)(c_n(k) - c̄_k)`, with the means
/// computed inline.
pub fn rtc_diagonal_entry(t: &[usize], c: &[usize], w: &[f64], k: usize) -> f64 {
    let s: f64 = w.iter().sum();
    let ind = |v: usize| if v == k { 1.0 } else { 0.0 };
    let tk: f64 = t.iter().zip(w).map(|(&x, &wi)| wi * ind(x)).sum::<f64>() / s;
    let ck: f64 = c.iter().zip(w).map(|(&x, &wi)| wi * ind(x)).sum::<f64>() / s;
    (0..t.len())
        .map(|n| w[n] * (ind(t[n]) - tk) * (ind(c[n]) - ck))
        .sum::<f64>()
        / s
}

pub struct Measures {
    pub ecc: f64,
    pub mpc1: f64,
    pub mpc2: f64,
    pub terms: Vec<f64>,
}

pub fn measures(f: &MatrixForm) -> Measures {
    let k = f.r_tc.len();
    let ecc = trace(&f.r_tc) / (trace(&f.r_tt) * trace(&f.r_cc)).sqrt();
    let dens: Vec<f64> = (0..k)
        .map(|i| (f.r_tt[i][i] * f.r_cc[i][i]).sqrt())
        .collect();
    let mpc1 = trace(&f.r_tc) / dens.iter().sum::<f64>();
    let terms: Vec<f64> = (0..k)
        .map(|i| {
            if dens[i] <= 1e-15 {
                0.0
            } else {
                f.r_tc[i][i] / dens[i]
            }
        })
        .collect();
    let mpc2 = terms.iter().sum::<f64>() / k as f64;
    Measures {
        ecc,
        mpc1,
        mpc2,
        terms,
    }
}

/// Binary stability bound evaluated from scratch.
pub fn mcc_bound_oracle(t: &[u8], c: &[u8], w: &[f64], eps: f64) -> f64 {
    let n = t.len() as f64;
    let mut a = [0.0f64; 5];
    for i in 0..t.len() {
        let (ti, ci) = (t[i] as f64, c[i] as f64);
        a[0] += w[i] * ti * ci;
        a[1] += w[i] * ti;
        a[2] += w[i] * ci;
        a[3] += w[i] * (1.0 - ti);
        a[4] += w[i] * (1.0 - ci);
    }
    let s: f64 = w.iter().sum();
    let big_m = a.iter().cloned().fold(f64::MIN, f64::max);
    let m = a.iter().cloned().fold(f64::MAX, f64::min);
    let (tp, tn, fp, fn_) = weighted_cells(t, c, w);
    let value = mcc_cells(tp, tn, fp, fn_).abs();
    let factor = 2f64.powi(5) * s.powi(2) * n / m.powi(2);
    value * factor * (1.0 + big_m.powi(2) * (1.0 + factor * eps)) * eps
}

pub struct MulticlassBoundsOracle {
    pub ecc: f64,
    pub mpc1: f64,
    pub mpc2: f64,
    pub rtc: f64,
}

/// The multiclass bounds evaluated from scratch on the matrix form.
pub fn multiclass_bounds_oracle(
    t: &[usize],
    c: &[usize],
    k: usize,
    w: &[f64],
    eps: f64,
) -> MulticlassBoundsOracle {
    let f = matrix_form(t, c, k, w);
    let meas = measures(&f);
    let n = t.len() as f64;
    let s: f64 = w.iter().sum();
    let max_abs = |m: &Mat| m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
    let frob = |m: &Mat| m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let mt = max_abs(&f.t_centered);
    let mc = max_abs(&f.c_centered);

    let c_a = mt.powi(2) * trace(&f.r_cc) + mc.powi(2) * trace(&f.r_tt) + 4.0 * n * n / (s * s);
    let ck: Vec<f64> = (0..k)
        .map(|i| f.r_tt[i][i] * mc.powi(2) + f.r_cc[i][i] * mt.powi(2) + 4.0 * n / (s * s))
        .collect();
    let c_c: f64 = (0..k)
        .filter(|&i| (f.r_tt[i][i] * f.r_cc[i][i]).sqrt() > 1e-15)
        .map(|i| ck[i] / (2.0 * f.r_tt[i][i] * f.r_cc[i][i]).sqrt())
        .sum();
    let mut big_c = mt * mc;
    for x in [c_a, c_c].into_iter().chain(ck.iter().cloned()) {
        big_c = big_c.max(x);
    }

    let e2 = eps * eps;
    let s2 = s * s;
    let y_a = trace(&f.r_tt) * trace(&f.r_cc);
    let y_b: f64 = (0..k).map(|i| (f.r_tt[i][i] * f.r_cc[i][i]).sqrt()).sum();
    let r2 = 2f64.sqrt();
    let entry = 4.0 * n * n * mt * mc / s2;

    let ecc = meas.ecc.abs()
        * (4.0 * 4.0 * n * n * big_c / (y_a * r2 * s2)
            + entry * (1.0 + 4.0 * 4.0 * n * big_c / (y_a * r2 * s2) * e2))
        * e2;
    let mpc1 = meas.mpc1.abs()
        * (4.0 * 4.0 * n * big_c / (y_b * s2)
            + entry * (1.0 + 4.0 * 4.0 * n * big_c / (y_b * s2) * e2))
        * e2;
    let pre: f64 = meas.terms.iter().map(|x| (x / k as f64).abs()).sum();
    let mpc2 = pre
        * (4.0 * 4.0 * n * big_c / s2
            + 4.0 * n * big_c / s2 * (1.0 + 4.0 * 4.0 * n * big_c / s2 * e2))
        * e2;
    let rtc = 4.0 * n * e2 / s2 * frob(&f.t_centered) * frob(&transpose(&f.c_centered));
    MulticlassBoundsOracle {
        ecc,
        mpc1,
        mpc2,
        rtc,
    }
}

pub fn random_bits<R: Rng>(n: usize, rng: &mut R) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..2u8)).collect()
}

/// Random bit vector with at least one 0 and one 1 (needs `n >= 2`).
pub fn nonconstant_bits<R: Rng>(n: usize, rng: &mut R) -> Vec<u8> {
    loop {
        let v = random_bits(n, rng);
        if v.contains(&0) && v.contains(&1) {
            return v;
        }
    }
}

pub fn random_classes<R: Rng>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..k)).collect()
}

pub fn nonconstant_classes<R: Rng>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    loop {
        let v = random_classes(n, k, rng);
        if v.windows(2).any(|p| p[0] != p[1]) {
            return v;
        }
    }
}

pub fn log_uniform_weights<R: Rng>(n: usize, lo: f64, hi: f64, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|_| rng.random_range(lo.ln()..hi.ln()).exp())
        .collect()
}

pub fn uniform_weights<R: Rng>(n: usize, lo: f64, hi: f64, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..=hi)).collect()
}
