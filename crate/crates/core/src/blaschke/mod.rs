//! Blaschke–Potapov factors and products, FIR synthesis in its three
//! equivalent forms, and the coefficient expansion of causal products.

mod chart;
mod design;

pub use chart::{
    chart_len, decode_angles, param_count, random_angles, random_member, random_product,
    AngleParams, ParamCount,
};
pub use design::{design_optimize, DesignOptions, DesignResult};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Role};
use crate::linalg::{self, c, CMat, CVec};

/// Required distance of a finite pole from the unit circle.
pub const CIRCLE_MARGIN: f64 = 1e-8;
/// Tolerance on `|v*v - 1|` and on the (co)isometry identity of `U`.
pub const UNIT_TOL: f64 = 1e-12;
/// Coefficients below this magnitude are trimmed while expanding products.
const EXPANSION_TRIM: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    Finite(Complex64),
    Infinity,
}

/// `I + (b(z) - 1) v v*` with `b(z) = (1 - conj(alpha) z) / (z - alpha)`,
/// or its reciprocal `1 / b(z)` when `inverted`. `alpha = infinity` stands
/// for `b(z) = z`.
#[derive(Debug, Clone, PartialEq)]
pub struct BPFactor {
    alpha: Alpha,
    v: CVec,
    inverted: bool,
}

fn check_unit(v: &CVec) -> Result<()> {
    if v.is_empty() || (v.norm_squared() - 1.0).abs() > UNIT_TOL {
        return Err(Error::InvalidParameter(format!(
            "factor vector must have unit norm, got |v|^2 = {}",
            v.norm_squared()
        )));
    }
    Ok(())
}

impl BPFactor {
    pub fn new(alpha: Alpha, v: CVec) -> Result<Self> {
        check_unit(&v)?;
        if let Alpha::Finite(a) = alpha {
            if (a.norm() - 1.0).abs() < CIRCLE_MARGIN {
                return Err(Error::InvalidParameter(format!(
                    "alpha = {a} lies on the unit circle"
                )));
            }
        }
        Ok(BPFactor {
            alpha,
            v,
            inverted: false,
        })
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn v(&self) -> &CVec {
        &self.v
    }

    pub fn is_inverted(&self) -> bool {
        self.inverted
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// The scalar Blaschke term at `z`.
    pub fn scalar(&self, z: Complex64) -> Result<Complex64> {
        let pole = || Error::Domain(format!("z = {z} is a pole of the factor"));
        let (num, den) = match self.alpha {
            Alpha::Infinity => (z, c(1.0, 0.0)),
            Alpha::Finite(a) => (c(1.0, 0.0) - a.conj() * z, z - a),
        };
        let (num, den) = if self.inverted { (den, num) } else { (num, den) };
        if den.norm() == 0.0 {
            return Err(pole());
        }
        let b = num / den;
        if !(b.re.is_finite() && b.im.is_finite()) {
            return Err(pole());
        }
        Ok(b)
    }
}

pub fn factor_eval(f: &BPFactor, z: Complex64) -> Result<CMat> {
    let b = f.scalar(z)?;
    let k = f.dim();
    Ok(linalg::eye(k) + &f.v * f.v.adjoint() * (b - c(1.0, 0.0)))
}

/// The factor with the reciprocal Blaschke term and the same vector.
pub fn factor_inverse(f: &BPFactor) -> BPFactor {
    let zero = Alpha::Finite(c(0.0, 0.0));
    // 1/b for alpha = 0 is z (alpha = infinity) and vice versa
    let (alpha, inverted) = match (f.alpha, f.inverted) {
        (Alpha::Finite(a), false) if a == c(0.0, 0.0) => (Alpha::Infinity, false),
        (Alpha::Infinity, false) => (zero, false),
        (alpha, inverted) => (alpha, !inverted),
    };
    BPFactor {
        alpha,
        v: f.v.clone(),
        inverted,
    }
}

/// An FIR product: `gamma` factors with `alpha = infinity` followed by
/// `d - gamma` factors with `alpha = 0`, and a constant (co)isometry `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct BPProduct {
    side: Role,
    gamma: usize,
    vs: Vec<CVec>,
    u: CMat,
}

impl BPProduct {
    pub fn new(side: Role, gamma: usize, vs: Vec<CVec>, u: CMat) -> Result<Self> {
        let (p, m) = u.shape();
        let (k, gram) = match side {
            Role::Isometry if p >= m => (p, u.adjoint() * &u - linalg::eye(m)),
            Role::CoIsometry if m >= p => (m, &u * u.adjoint() - linalg::eye(p)),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "{side} product needs {} but U is {p}x{m}",
                    if side == Role::Isometry { "p >= m" } else { "m >= p" }
                )))
            }
        };
        if p == 0 || m == 0 {
            return Err(Error::InvalidParameter("U must be non-empty".into()));
        }
        if linalg::max_abs(&gram) > UNIT_TOL {
            return Err(Error::InvalidParameter(format!(
                "U is not a{} ({:e})",
                if side == Role::Isometry { "n isometry" } else { " co-isometry" },
                linalg::max_abs(&gram)
            )));
        }
        if gamma > vs.len() {
            return Err(Error::InvalidParameter(format!(
                "gamma = {gamma} exceeds degree {}",
                vs.len()
            )));
        }
        for v in &vs {
            if v.len() != k {
                return Err(Error::DimensionMismatch(format!(
                    "factor vectors must lie in C^{k}, got length {}",
                    v.len()
                )));
            }
            check_unit(v)?;
        }
        Ok(BPProduct { side, gamma, vs, u })
    }

    pub fn side(&self) -> Role {
        self.side
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    pub fn degree(&self) -> usize {
        self.vs.len()
    }

    pub fn vectors(&self) -> &[CVec] {
        &self.vs
    }

    pub fn u(&self) -> &CMat {
        &self.u
    }

    pub fn dims(&self) -> (usize, usize) {
        self.u.shape()
    }

    /// Dimension of the space the factors act on.
    pub fn factor_dim(&self) -> usize {
        match self.side {
            Role::Isometry => self.u.nrows(),
            Role::CoIsometry => self.u.ncols(),
        }
    }

    /// The factors of the first form, in multiplication order.
    pub fn factors(&self) -> Vec<BPFactor> {
        let ordered: Vec<usize> = match self.side {
            Role::Isometry => (0..self.degree()).collect(),
            Role::CoIsometry => (self.gamma..self.degree()).chain(0..self.gamma).collect(),
        };
        ordered
            .into_iter()
            .map(|j| BPFactor {
                alpha: if j < self.gamma {
                    Alpha::Infinity
                } else {
                    Alpha::Finite(c(0.0, 0.0))
                },
                v: self.vs[j].clone(),
                inverted: false,
            })
            .collect()
    }
}

fn projections(v: &CVec) -> (CMat, CMat) {
    let p = v * v.adjoint();
    let q = linalg::eye(v.len()) - &p;
    (p, q)
}

/// `I + (z - 1) v v* = z P + Q`.
fn anti_causal_factor(v: &CVec) -> LaurentPoly {
    let (p, q) = projections(v);
    LaurentPoly::new(2, vec![p, q]).expect("square blocks")
}

/// `I + (1/z - 1) v v* = Q + z^-1 P`.
fn causal_factor(v: &CVec) -> LaurentPoly {
    let (p, q) = projections(v);
    LaurentPoly::new(1, vec![q, p]).expect("square blocks")
}

/// Expands the first form into a Laurent polynomial.
pub fn synth(prod: &BPProduct) -> LaurentPoly {
    let k = prod.factor_dim();
    let mut acc = match prod.side {
        Role::Isometry => LaurentPoly::constant(linalg::eye(k)),
        Role::CoIsometry => LaurentPoly::constant(prod.u.clone()),
    };
    for f in prod.factors() {
        let poly = match f.alpha {
            Alpha::Infinity => anti_causal_factor(&f.v),
            Alpha::Finite(_) => causal_factor(&f.v),
        };
        acc = acc
            .multiply(&poly)
            .expect("factor dimensions agree")
            .trim_tol(EXPANSION_TRIM);
    }
    if prod.side == Role::Isometry {
        acc = acc
            .multiply(&LaurentPoly::constant(prod.u.clone()))
            .expect("factor dimensions agree")
            .trim_tol(EXPANSION_TRIM);
    }
    acc
}

fn eval_factors(k: usize, vs: &[CVec], anti: bool, z: Complex64) -> CMat {
    let b = if anti { z } else { z.inv() };
    vs.iter().fold(linalg::eye(k), |acc, v| {
        acc * (linalg::eye(k) + v * v.adjoint() * (b - c(1.0, 0.0)))
    })
}

fn inverted(m: &CMat) -> Result<CMat> {
    linalg::inverse(m).ok_or_else(|| Error::Singular("factor product".into()))
}

/// Evaluations of the three equivalent forms of the product at `z`.
/// The second and third forms invert products of the opposite-type factors.
pub fn synth_all_forms(prod: &BPProduct, z: Complex64) -> Result<[CMat; 3]> {
    if z == c(0.0, 0.0) {
        return Err(Error::Domain("z = 0".into()));
    }
    let k = prod.factor_dim();
    let g = prod.gamma;
    let anti = &prod.vs[..g];
    let causal = &prod.vs[g..];
    let rev = |vs: &[CVec]| vs.iter().rev().cloned().collect::<Vec<_>>();
    let anti_direct = eval_factors(k, anti, true, z);
    let causal_direct = eval_factors(k, causal, false, z);
    // (prod_{j=d}^{gamma+1} (I + (z-1)P_j))^-1 and (prod_{j=gamma}^{1} (I + (1/z-1)P_j))^-1
    let causal_via_inverse = inverted(&eval_factors(k, &rev(causal), true, z))?;
    let anti_via_inverse = inverted(&eval_factors(k, &rev(anti), false, z))?;
    let u = &prod.u;
    Ok(match prod.side {
        Role::Isometry => [
            &anti_direct * &causal_direct * u,
            &anti_direct * &causal_via_inverse * u,
            &anti_via_inverse * &causal_direct * u,
        ],
        Role::CoIsometry => [
            u * &causal_direct * &anti_direct,
            u * &causal_via_inverse * &anti_direct,
            u * &causal_direct * &anti_via_inverse,
        ],
    })
}

/// Coefficients of a causal product through the subset sums
/// `B_k = sum_{|S| = k-1} prod_j (P_j if j in S else Q_j)`, with `U` applied after.
pub fn expand_coefficients(prod: &BPProduct) -> Result<Vec<CMat>> {
    if prod.gamma != 0 {
        return Err(Error::Precondition(format!(
            "coefficient expansion needs a causal product, got gamma = {}",
            prod.gamma
        )));
    }
    let d = prod.degree();
    if d > 20 {
        return Err(Error::InvalidParameter(format!("degree {d} is too large to enumerate")));
    }
    let k = prod.factor_dim();
    let pq: Vec<(CMat, CMat)> = prod.vs.iter().map(projections).collect();
    // factor multiplication order, as in the first form
    let order: Vec<usize> = (0..d).collect();
    let mut square = vec![linalg::zeros(k, k); d + 1];
    for mask in 0u32..(1u32 << d) {
        let term = order.iter().fold(linalg::eye(k), |acc, &j| {
            let (p, q) = &pq[j];
            acc * if mask >> j & 1 == 1 { p } else { q }
        });
        square[mask.count_ones() as usize] += term;
    }
    Ok(square
        .into_iter()
        .map(|b| match prod.side {
            Role::Isometry => b * &prod.u,
            Role::CoIsometry => &prod.u * b,
        })
        .collect())
}
