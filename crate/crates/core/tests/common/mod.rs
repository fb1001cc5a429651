//! Independent oracles shared by the integration tests. Everything here is
//! written directly against nalgebra so that it does not reuse the library
//! code paths it checks.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use pufir::hankel;
use pufir::LaurentPoly;

pub type M = DMatrix<Complex64>;

pub fn cz(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn circle(j: usize, count: usize) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / count as f64)
}

pub fn max_abs(m: &M) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `sum_k B_k z^(q - k)` term by term.
pub fn eval_oracle(f: &LaurentPoly, z: Complex64) -> M {
    let (p, m) = f.dims();
    let mut acc = M::zeros(p, m);
    for (k, b) in f.coeffs().iter().enumerate() {
        acc += b * z.powi((f.q() - 1 - k as i64) as i32);
    }
    acc
}

/// Worst max-abs deviation of `F*F` (tall) or `F F*` (wide) from `I` at `count` circle points.
pub fn defect_oracle(f: &LaurentPoly, count: usize) -> f64 {
    let (p, m) = f.dims();
    (0..count)
        .map(|j| {
            let v = eval_oracle(f, circle(j, count));
            let g = if p >= m { v.adjoint() * &v - M::identity(m, m) } else { &v * v.adjoint() - M::identity(p, p) };
            max_abs(&g)
        })
        .fold(0.0, f64::max)
}

fn rank(m: &M, rel: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > (rel * top).max(1e-14)).count()
}

/// Square block Hankel of the sequence `seq[0], seq[1], ...` with `len` block rows and columns.
fn hankel_of(seq: &[M], len: usize, p: usize, m: usize) -> M {
    let mut h = M::zeros(len * p, len * m);
    for i in 0..len {
        for j in 0..len {
            if let Some(b) = seq.get(i + j) {
                h.view_mut((i * p, j * m), (p, m)).copy_from(b);
            }
        }
    }
    h
}

/// Rank of the Hankel matrix of the strictly causal part plus rank of the
/// Hankel matrix of the strictly anti-causal part.
pub fn degree_oracle(f: &LaurentPoly) -> usize {
    let (p, m) = f.dims();
    let lo = f.q() - f.len() as i64;
    let hi = f.q() - 1;
    let at = |power: i64| f.coeff_at_power(power).cloned().unwrap_or_else(|| M::zeros(p, m));
    let causal: Vec<M> = (1..=(-lo).max(0)).map(|k| at(-k)).collect();
    let anti: Vec<M> = (1..=hi.max(0)).map(at).collect();
    rank(&hankel_of(&causal, causal.len(), p, m), 1e-10) + rank(&hankel_of(&anti, anti.len(), p, m), 1e-10)
}

/// Max-abs coefficient gap between two polynomials aligned by power.
pub fn coeff_gap(a: &LaurentPoly, b: &LaurentPoly) -> f64 {
    let hi = a.highest_power().max(b.highest_power());
    let lo = a.lowest_power().min(b.lowest_power());
    let (p, m) = a.dims();
    (lo..=hi)
        .map(|k| {
            let x = a.coeff_at_power(k).cloned().unwrap_or_else(|| M::zeros(p, m));
            let y = b.coeff_at_power(k).cloned().unwrap_or_else(|| M::zeros(p, m));
            max_abs(&(x - y))
        })
        .fold(0.0, f64::max)
}

/// Coefficients of `F_b F_c` by explicit convolution.
pub fn convolve_oracle(fb: &LaurentPoly, fc: &LaurentPoly) -> LaurentPoly {
    let n = fb.len();
    let l = fc.len();
    let mut coeffs = vec![M::zeros(fb.rows(), fc.cols()); n + l - 1];
    for (i, b) in fb.coeffs().iter().enumerate() {
        for (j, c) in fc.coeffs().iter().enumerate() {
            coeffs[i + j] += b * c;
        }
    }
    LaurentPoly::new(fb.q() + fc.q() - 1, coeffs).unwrap()
}

/// Both library tests agree on membership at `tol`.
pub fn member(f: &LaurentPoly, tol: f64) -> bool {
    hankel::is_paraunitary_hankel(f, tol).map(|c| c.member && c.residual() < tol).unwrap_or(false)
}
