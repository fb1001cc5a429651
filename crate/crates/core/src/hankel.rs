//! Block-Hankel matrices of FIR systems: McMillan degree by Hankel ranks and
//! the Hankel characterization of para-unitarity.

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Role};
use crate::linalg::{self, CMat};

/// Default relative rank threshold.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// A block-Hankel matrix with `p x m` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockHankel {
    block_rows: usize,
    block_cols: usize,
    p: usize,
    m: usize,
    data: CMat,
}

impl BlockHankel {
    /// Square `blocks x blocks` Hankel whose block `(i, j)` is `seq[i + j]`
    /// (zero past the end of the sequence).
    pub fn from_sequence(seq: &[CMat], blocks: usize, p: usize, m: usize) -> Self {
        let mut data = linalg::zeros(blocks * p, blocks * m);
        for i in 0..blocks {
            for j in 0..blocks - i {
                if let Some(b) = seq.get(i + j) {
                    linalg::set_block(&mut data, i * p, j * m, b);
                }
            }
        }
        BlockHankel {
            block_rows: blocks,
            block_cols: blocks,
            p,
            m,
            data,
        }
    }

    /// Wraps an arbitrary matrix, interpreting it with `p x m` blocks.
    pub fn from_matrix(data: CMat, p: usize, m: usize) -> Result<Self> {
        if p == 0 || m == 0 || !data.nrows().is_multiple_of(p) || !data.ncols().is_multiple_of(m) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix cannot be partitioned into {p}x{m} blocks",
                data.nrows(),
                data.ncols()
            )));
        }
        Ok(BlockHankel {
            block_rows: data.nrows() / p,
            block_cols: data.ncols() / m,
            p,
            m,
            data,
        })
    }

    pub fn empty(p: usize, m: usize) -> Self {
        BlockHankel {
            block_rows: 0,
            block_cols: 0,
            p,
            m,
            data: linalg::zeros(0, 0),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.block_rows == 0 || self.block_cols == 0
    }

    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    pub fn block_cols(&self) -> usize {
        self.block_cols
    }

    pub fn block_dims(&self) -> (usize, usize) {
        (self.p, self.m)
    }

    pub fn matrix(&self) -> &CMat {
        &self.data
    }

    pub fn into_matrix(self) -> CMat {
        self.data
    }

    pub fn block(&self, i: usize, j: usize) -> CMat {
        linalg::block(&self.data, i * self.p, j * self.m, self.p, self.m)
    }

    /// Checks that block `(i, j)` depends only on `i + j`.
    pub fn is_hankel(&self, tol: f64) -> bool {
        (0..self.block_rows).all(|i| {
            (0..self.block_cols).all(|j| {
                if i == 0 || j + 1 == self.block_cols {
                    return true;
                }
                linalg::max_abs(&(self.block(i, j) - self.block(i - 1, j + 1))) <= tol
            })
        })
    }

    pub fn singular_values(&self) -> Vec<f64> {
        linalg::singular_values(&self.data)
    }

    pub fn rank(&self, rank_tol: f64) -> usize {
        linalg::numerical_rank(&self.data, rank_tol).rank
    }
}

fn padded_sequence(eta: usize, coeffs: impl IntoIterator<Item = CMat>, p: usize, m: usize) -> Vec<CMat> {
    std::iter::repeat_with(|| linalg::zeros(p, m))
        .take(eta)
        .chain(coeffs)
        .collect()
}

/// Hankel matrix of a strictly causal polynomial. The polynomial's own delay
/// `-q` plus `extra_padding` gives the padding `eta` of the layout.
pub fn hankel_causal(f: &LaurentPoly, extra_padding: usize) -> Result<BlockHankel> {
    if f.q() > 0 {
        return Err(Error::Causality {
            expected: "strictly causal",
            q: f.q(),
            n: f.len(),
        });
    }
    let (p, m) = f.dims();
    let eta = (-f.q()) as usize + extra_padding;
    let seq = padded_sequence(eta, f.coeffs().iter().cloned(), p, m);
    Ok(BlockHankel::from_sequence(&seq, seq.len(), p, m))
}

/// Hankel matrix of a strictly anti-causal polynomial (coefficients in reverse order).
pub fn hankel_anticausal(f: &LaurentPoly, extra_padding: usize) -> Result<BlockHankel> {
    let n = f.len() as i64;
    if f.q() < n + 1 {
        return Err(Error::Causality {
            expected: "strictly anti-causal",
            q: f.q(),
            n: f.len(),
        });
    }
    let (p, m) = f.dims();
    let eta = (f.q() - n - 1) as usize + extra_padding;
    let seq = padded_sequence(eta, f.coeffs().iter().rev().cloned(), p, m);
    Ok(BlockHankel::from_sequence(&seq, seq.len(), p, m))
}

/// The `q = 0` Hankel matrix `H_0` built from all coefficients.
pub fn hankel_normalized(f: &LaurentPoly) -> BlockHankel {
    let (p, m) = f.dims();
    BlockHankel::from_sequence(f.coeffs(), f.len(), p, m)
}

/// Hankel matrices of the strictly causal and strictly anti-causal parts.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelPair {
    pub h: BlockHankel,
    pub h_hat: BlockHankel,
}

pub fn hankel_pair(f: &LaurentPoly) -> HankelPair {
    let (p, m) = f.dims();
    let (left, _, right) = f.split_parts();
    HankelPair {
        h: right
            .map(|r| hankel_causal(&r, 0).expect("right part is strictly causal"))
            .unwrap_or_else(|| BlockHankel::empty(p, m)),
        h_hat: left
            .map(|l| hankel_anticausal(&l, 0).expect("left part is strictly anti-causal"))
            .unwrap_or_else(|| BlockHankel::empty(p, m)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct DegreeReport {
    pub degree: usize,
    pub rank_h: usize,
    pub rank_h_hat: usize,
    /// A singular value fell within a factor of ten of the rank threshold.
    pub ambiguous: bool,
}

pub fn mcmillan_degree_report(f: &LaurentPoly, rank_tol: f64) -> DegreeReport {
    let pair = hankel_pair(f);
    let rh = linalg::numerical_rank(pair.h.matrix(), rank_tol);
    let rhh = linalg::numerical_rank(pair.h_hat.matrix(), rank_tol);
    DegreeReport {
        degree: rh.rank + rhh.rank,
        rank_h: rh.rank,
        rank_h_hat: rhh.rank,
        ambiguous: rh.ambiguous || rhh.ambiguous,
    }
}

/// McMillan degree as `rank(H) + rank(H_hat)`.
pub fn mcmillan_degree(f: &LaurentPoly, rank_tol: f64) -> usize {
    mcmillan_degree_report(f, rank_tol).degree
}

pub fn hankel_singular_values(h: &BlockHankel) -> Vec<f64> {
    h.singular_values()
}

/// Block column `[0_{eta p x m}; B_1; ...; B_n]`.
pub fn stack_b(f: &LaurentPoly, eta: usize) -> CMat {
    let (p, m) = f.dims();
    linalg::vstack(&padded_sequence(eta, f.coeffs().iter().cloned(), p, m), m)
}

/// Block row `(B_1, ..., B_n)`.
pub fn flat_b(f: &LaurentPoly) -> CMat {
    linalg::hstack(f.coeffs(), f.rows())
}

/// `kp x kp` block up-shift with `I_p` on the block superdiagonal.
pub fn shift_j(k: usize, p: usize) -> CMat {
    let mut j = linalg::zeros(k * p, k * p);
    for i in 0..k.saturating_sub(1) {
        linalg::set_block(&mut j, i * p, (i + 1) * p, &linalg::eye(p));
    }
    j
}

/// `k rho x k rho` block flip with `I_rho` on the block anti-diagonal.
pub fn flip_t(k: usize, rho: usize) -> CMat {
    let mut t = linalg::zeros(k * rho, k * rho);
    for i in 0..k {
        linalg::set_block(&mut t, i * rho, (k - 1 - i) * rho, &linalg::eye(rho));
    }
    t
}

/// Outcome of the Hankel para-unitarity test.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ParaunitaryCheck {
    pub member: bool,
    pub role: Role,
    /// Max-abs entry of `(I - H_0* H_0) [I; 0]` (or its co-isometric mirror).
    pub residual_hankel: f64,
    /// Max-abs deviation of the coefficient autocorrelation sums.
    pub residual_coeff: f64,
}

impl ParaunitaryCheck {
    pub fn residual(&self) -> f64 {
        self.residual_hankel.max(self.residual_coeff)
    }
}

fn hankel_residual(f: &LaurentPoly, role: Role) -> f64 {
    let (p, m) = f.dims();
    let n = f.len();
    let h = hankel_normalized(f).into_matrix();
    match role {
        Role::Isometry => {
            let gram = linalg::eye(n * m) - h.adjoint() * &h;
            linalg::max_abs(&linalg::block(&gram, 0, 0, n * m, m))
        }
        Role::CoIsometry => {
            let gram = linalg::eye(n * p) - &h * h.adjoint();
            linalg::max_abs(&linalg::block(&gram, 0, 0, p, n * p))
        }
    }
}

fn coefficient_residual(f: &LaurentPoly, role: Role) -> f64 {
    let b = f.coeffs();
    let n = b.len();
    let (p, m) = f.dims();
    (0..n)
        .map(|shift| {
            let mut acc = match role {
                Role::Isometry => linalg::zeros(m, m),
                Role::CoIsometry => linalg::zeros(p, p),
            };
            for j in 0..n - shift {
                match role {
                    Role::Isometry => acc += b[j + shift].adjoint() * &b[j],
                    Role::CoIsometry => acc += &b[j + shift] * b[j].adjoint(),
                }
            }
            if shift == 0 {
                acc -= linalg::eye(acc.nrows());
            }
            linalg::max_abs(&acc)
        })
        .fold(0.0, f64::max)
}

/// Hankel test for membership in the para-unitary class, cross-checked
/// against the equivalent coefficient autocorrelation conditions.
pub fn is_paraunitary_hankel(f: &LaurentPoly, tol: f64) -> Result<ParaunitaryCheck> {
    let role = f.role();
    let residual_hankel = hankel_residual(f, role);
    let residual_coeff = coefficient_residual(f, role);
    if (residual_hankel - residual_coeff).abs() > 10.0 * tol {
        return Err(Error::Inconsistent(format!(
            "Hankel residual {residual_hankel:e} disagrees with coefficient residual {residual_coeff:e}"
        )));
    }
    Ok(ParaunitaryCheck {
        member: residual_hankel <= tol && residual_coeff <= tol,
        role,
        residual_hankel,
        residual_coeff,
    })
}

/// Block structure of `I - H_0* H_0` (or `I - H_0 H_0*`) for members.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DefectReport {
    pub role: Role,
    pub zero_block_ok: bool,
    pub coupling_ok: bool,
    #[serde(skip)]
    pub delta: CMat,
    pub delta_eigenvalues: Vec<f64>,
    pub delta_psd: bool,
    pub delta_contraction: bool,
    pub delta_projection: bool,
}

pub fn defect_structure(f: &LaurentPoly, tol: f64) -> Result<DefectReport> {
    let check = is_paraunitary_hankel(f, tol)?;
    if !check.member {
        return Err(Error::Precondition(format!(
            "polynomial is not para-unitary (residual {:e})",
            check.residual()
        )));
    }
    let (p, m) = f.dims();
    let n = f.len();
    let h = hankel_normalized(f).into_matrix();
    let (gram, lead) = match check.role {
        Role::Isometry => (linalg::eye(n * m) - h.adjoint() * &h, m),
        Role::CoIsometry => (linalg::eye(n * p) - &h * h.adjoint(), p),
    };
    let size = gram.nrows();
    let rest = size - lead;
    let zero_block = linalg::block(&gram, 0, 0, lead, lead);
    let upper = linalg::block(&gram, 0, lead, lead, rest);
    let lower = linalg::block(&gram, lead, 0, rest, lead);
    let delta = linalg::block(&gram, lead, lead, rest, rest);
    let ev = linalg::hermitian_eigenvalues(&delta);
    let delta_psd = ev.iter().all(|&l| l >= -tol);
    let delta_contraction = ev.iter().all(|&l| l <= 1.0 + tol);
    let delta_projection = ev.iter().all(|&l| l.abs() <= tol || (l - 1.0).abs() <= tol);
    Ok(DefectReport {
        role: check.role,
        zero_block_ok: linalg::max_abs(&zero_block) <= tol,
        coupling_ok: linalg::max_abs(&upper) <= tol && linalg::max_abs(&lower) <= tol,
        delta,
        delta_eigenvalues: ev,
        delta_psd,
        delta_contraction,
        delta_projection,
    })
}

/// Max-abs difference between the Hankel Gram matrices and the Gram matrices
/// of their block-triangular Toeplitz rearrangements.
pub fn toeplitz_gram_residual(f: &LaurentPoly) -> f64 {
    let (p, m) = f.dims();
    let n = f.len();
    let h = hankel_normalized(f).into_matrix();
    let th = flip_t(n, p) * &h;
    let ht = &h * flip_t(n, m);
    let r1 = linalg::max_abs(&(h.adjoint() * &h - th.adjoint() * &th));
    let r2 = linalg::max_abs(&(&h * h.adjoint() - &ht * ht.adjoint()));
    r1.max(r2)
}
