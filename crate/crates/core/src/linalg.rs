//! Dense complex matrix helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    CMat::zeros(rows, cols)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Builds a complex matrix from real row slices.
pub fn real_rows(rows: &[&[f64]]) -> CMat {
    let r = rows.len();
    let cols = rows.first().map_or(0, |row| row.len());
    CMat::from_fn(r, cols, |i, j| c(rows[i][j], 0.0))
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.norm()))
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn is_zero(m: &CMat, tol: f64) -> bool {
    m.iter().all(|x| x.norm() <= tol)
}

/// Copies the `rows x cols` block whose top-left corner is `(r0, c0)`.
pub fn block(m: &CMat, r0: usize, c0: usize, rows: usize, cols: usize) -> CMat {
    m.view((r0, c0), (rows, cols)).into_owned()
}

pub fn set_block(m: &mut CMat, r0: usize, c0: usize, b: &CMat) {
    if b.nrows() == 0 || b.ncols() == 0 {
        return;
    }
    m.view_mut((r0, c0), (b.nrows(), b.ncols())).copy_from(b);
}

/// Stacks blocks vertically. All blocks must share a column count.
pub fn vstack(blocks: &[CMat], cols: usize) -> CMat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        set_block(&mut out, r, 0, b);
        r += b.nrows();
    }
    out
}

/// Concatenates blocks horizontally. All blocks must share a row count.
pub fn hstack(blocks: &[CMat], rows: usize) -> CMat {
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let mut col = 0;
    for b in blocks {
        set_block(&mut out, 0, col, b);
        col += b.ncols();
    }
    out
}

/// Hermitian part `(X + X*) / 2`.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// Singular values in descending order; empty for degenerate shapes.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = SVD::new(m.clone(), false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Outcome of thresholding a singular value spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankDecision {
    pub rank: usize,
    /// Some singular value sits within a factor of ten of the threshold.
    pub ambiguous: bool,
}

/// Absolute floor used when the largest singular value vanishes.
pub const RANK_FLOOR: f64 = 1e-14;

/// Counts singular values above `rank_tol * sigma_max` (and above [`RANK_FLOOR`]).
pub fn rank_from_singular_values(sv: &[f64], rank_tol: f64) -> RankDecision {
    let smax = sv.first().copied().unwrap_or(0.0);
    let threshold = (rank_tol * smax).max(RANK_FLOOR);
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    let ambiguous = sv
        .iter()
        .any(|&s| s > threshold / 10.0 && s < threshold * 10.0 && smax > RANK_FLOOR);
    RankDecision { rank, ambiguous }
}

pub fn numerical_rank(m: &CMat, rank_tol: f64) -> RankDecision {
    rank_from_singular_values(&singular_values(m), rank_tol)
}

/// Eigenvalues (ascending) of the Hermitian part of a square matrix.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(hermitian_part(m))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Applies `f` to the (clamped at zero) spectrum of a PSD matrix.
fn psd_function(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let n = m.nrows();
    if n == 0 {
        return zeros(0, 0);
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let q = &eig.eigenvectors;
    let d = CMat::from_diagonal(&DVector::from_iterator(
        n,
        eig.eigenvalues.iter().map(|&l| c(f(l.max(0.0)), 0.0)),
    ));
    q * d * q.adjoint()
}

/// Principal square root of a Hermitian PSD matrix.
pub fn psd_sqrt(m: &CMat) -> CMat {
    psd_function(m, f64::sqrt)
}

/// Inverse square root of a Hermitian positive definite matrix.
pub fn psd_inv_sqrt(m: &CMat, floor: f64) -> Option<CMat> {
    let ev = hermitian_eigenvalues(m);
    if ev.first().is_some_and(|&l| l <= floor) {
        return None;
    }
    Some(psd_function(m, |l| 1.0 / l.sqrt()))
}

/// Solves `a x = b`; `None` when `a` is numerically singular.
pub fn solve(a: &CMat, b: &CMat) -> Option<CMat> {
    if a.nrows() == 0 {
        return Some(zeros(0, b.ncols()));
    }
    a.clone().lu().solve(b)
}

pub fn inverse(a: &CMat) -> Option<CMat> {
    if a.nrows() == 0 {
        return Some(zeros(0, 0));
    }
    a.clone().try_inverse()
}

/// Eigenvalues of a square complex matrix via the complex Schur form.
pub fn eigenvalues(a: &CMat) -> Vec<Complex64> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    let (_, t) = Schur::new(a.clone()).unpack();
    t.diagonal().iter().copied().collect()
}

pub fn spectral_radius(a: &CMat) -> f64 {
    eigenvalues(a).iter().fold(0.0, |acc, l| acc.max(l.norm()))
}

/// Column-major vectorization.
pub fn vec_col(m: &CMat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

pub fn unvec_col(v: &CVec, rows: usize, cols: usize) -> CMat {
    CMat::from_column_slice(rows, cols, v.as_slice())
}

/// Integer power of a square matrix by repeated squaring.
pub fn matrix_power(a: &CMat, mut k: usize) -> CMat {
    let mut result = eye(a.nrows());
    let mut base = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        base = &base * &base;
        k >>= 1;
    }
    result
}
