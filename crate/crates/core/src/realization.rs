//! State-space realizations of causal FIR systems, Gramians from the Stein
//! equations, unitarity of realization matrices and Gramian normal forms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hankel::{shift_j, BlockHankel};
use crate::laurent::{LaurentPoly, Role};
use crate::linalg::{self, CMat};

/// `F(z) = C (zI - A)^-1 B + D`.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub a: CMat,
    pub b: CMat,
    pub c: CMat,
    pub d: CMat,
    /// The rank decision that fixed the state dimension was close to the threshold.
    pub rank_ambiguous: bool,
}

impl Realization {
    pub fn new(a: CMat, b: CMat, c: CMat, d: CMat) -> Result<Self> {
        let nu = a.nrows();
        let (p, m) = d.shape();
        if a.ncols() != nu || b.shape() != (nu, m) || c.shape() != (p, nu) {
            return Err(Error::DimensionMismatch(format!(
                "A {:?}, B {:?}, C {:?}, D {:?}",
                a.shape(),
                b.shape(),
                c.shape(),
                d.shape()
            )));
        }
        Ok(Realization {
            a,
            b,
            c,
            d,
            rank_ambiguous: false,
        })
    }

    /// Splits `R = [[A, B], [C, D]]` with `A` of size `nu x nu`.
    pub fn from_matrix(r: &CMat, nu: usize) -> Result<Self> {
        if r.nrows() < nu || r.ncols() < nu {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix has no {nu}x{nu} state block",
                r.nrows(),
                r.ncols()
            )));
        }
        let p = r.nrows() - nu;
        let m = r.ncols() - nu;
        Realization::new(
            linalg::block(r, 0, 0, nu, nu),
            linalg::block(r, 0, nu, nu, m),
            linalg::block(r, nu, 0, p, nu),
            linalg::block(r, nu, nu, p, m),
        )
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.d.shape()
    }

    /// The `(nu + p) x (nu + m)` realization matrix.
    pub fn matrix(&self) -> CMat {
        let nu = self.state_dim();
        let (p, m) = self.dims();
        let mut r = linalg::zeros(nu + p, nu + m);
        linalg::set_block(&mut r, 0, 0, &self.a);
        linalg::set_block(&mut r, 0, nu, &self.b);
        linalg::set_block(&mut r, nu, 0, &self.c);
        linalg::set_block(&mut r, nu, nu, &self.d);
        r
    }

    /// Evaluates the transfer function by a linear solve.
    pub fn transfer(&self, z: Complex64) -> Result<CMat> {
        let nu = self.state_dim();
        if nu == 0 {
            return Ok(self.d.clone());
        }
        let shifted = linalg::eye(nu) * z - &self.a;
        let x = linalg::solve(&shifted, &self.b)
            .filter(|x| x.iter().all(|v| v.re.is_finite() && v.im.is_finite()))
            .ok_or_else(|| Error::Singular(format!("zI - A is singular at z = {z}")))?;
        Ok(&self.c * x + &self.d)
    }

    /// The causal polynomial `D + z^-1 CB + ... + z^-terms C A^(terms-1) B`.
    pub fn impulse_response(&self, terms: usize) -> LaurentPoly {
        let mut coeffs = Vec::with_capacity(terms + 1);
        coeffs.push(self.d.clone());
        let mut ak_b = self.b.clone();
        for _ in 0..terms {
            coeffs.push(&self.c * &ak_b);
            ak_b = &self.a * ak_b;
        }
        LaurentPoly::new(1, coeffs).expect("consistent shapes")
    }

    /// Applies the state transformation `(T A T^-1, T B, C T^-1, D)`.
    pub fn transform(&self, t: &CMat, t_inv: &CMat) -> Realization {
        Realization {
            a: t * &self.a * t_inv,
            b: t * &self.b,
            c: &self.c * t_inv,
            d: self.d.clone(),
            rank_ambiguous: self.rank_ambiguous,
        }
    }
}

fn require_causal(f: &LaurentPoly) -> Result<()> {
    if f.q() > 1 {
        return Err(Error::Causality {
            expected: "causal",
            q: f.q(),
            n: f.len(),
        });
    }
    Ok(())
}

/// Direct term and Markov parameters `M_1, ..., M_L` (the coefficients of `z^-k`).
fn markov_parameters(f: &LaurentPoly) -> (CMat, Vec<CMat>) {
    let (p, m) = f.dims();
    let d = f.coeff_at_power(0).cloned().unwrap_or_else(|| linalg::zeros(p, m));
    let len = (-f.lowest_power()).max(0) as usize;
    let markov = (1..=len as i64)
        .map(|k| f.coeff_at_power(-k).cloned().unwrap_or_else(|| linalg::zeros(p, m)))
        .collect();
    (d, markov)
}

/// Block-shift realization with state dimension `L p`, `L` the number of
/// strictly causal taps.
pub fn naive_realization(f: &LaurentPoly) -> Result<Realization> {
    require_causal(f)?;
    let (p, m) = f.dims();
    let (d, markov) = markov_parameters(f);
    let len = markov.len();
    let a = shift_j(len, p);
    let b = linalg::vstack(&markov, m);
    let mut c = linalg::zeros(p, len * p);
    if len > 0 {
        linalg::set_block(&mut c, 0, 0, &linalg::eye(p));
    }
    Realization::new(a, b, c, d)
}

/// Balanced minimal realization by SVD of the Hankel matrix of the Markov parameters.
pub fn minimal_realization(f: &LaurentPoly, rank_tol: f64) -> Result<Realization> {
    require_causal(f)?;
    let (p, m) = f.dims();
    let (d, markov) = markov_parameters(f);
    let len = markov.len();
    if len == 0 {
        return Realization::new(linalg::zeros(0, 0), linalg::zeros(0, m), linalg::zeros(p, 0), d);
    }
    let h = BlockHankel::from_sequence(&markov, len, p, m).into_matrix();
    let h_up = BlockHankel::from_sequence(&markov[1..], len, p, m).into_matrix();
    let svd = nalgebra::SVD::new(h.clone(), true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V*");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let decision = linalg::rank_from_singular_values(&sv, rank_tol);
    let nu = decision.rank;

    let mut u_nu = linalg::zeros(h.nrows(), nu);
    let mut v_nu_t = linalg::zeros(nu, h.ncols());
    for (k, &i) in order.iter().take(nu).enumerate() {
        u_nu.set_column(k, &u.column(i));
        v_nu_t.set_row(k, &v_t.row(i));
    }
    let sqrt = CMat::from_diagonal(&linalg::CVec::from_iterator(
        nu,
        sv.iter().take(nu).map(|s| linalg::c(s.sqrt(), 0.0)),
    ));
    let inv_sqrt = CMat::from_diagonal(&linalg::CVec::from_iterator(
        nu,
        sv.iter().take(nu).map(|s| linalg::c(1.0 / s.sqrt(), 0.0)),
    ));
    let obs = &u_nu * &sqrt;
    let ctrl = &sqrt * &v_nu_t;
    let a = &inv_sqrt * u_nu.adjoint() * h_up * v_nu_t.adjoint() * &inv_sqrt;
    let b = linalg::block(&ctrl, 0, 0, nu, m);
    let c = linalg::block(&obs, 0, 0, p, nu);
    let mut r = Realization::new(a, b, c, d)?;
    r.rank_ambiguous = decision.ambiguous;
    Ok(r)
}

/// Controllability and observability Gramians.
#[derive(Debug, Clone, PartialEq)]
pub struct GramianPair {
    pub w_cont: CMat,
    pub w_obs: CMat,
    pub residual_cont: f64,
    pub residual_obs: f64,
}

/// Margin below one required of the spectral radius of `A`.
const STABILITY_MARGIN: f64 = 1e-12;

/// Solves `W - A W A* = B B*` and `W - A* W A = C* C` as dense linear systems.
pub fn gramians(r: &Realization, tol: f64) -> Result<GramianPair> {
    let nu = r.state_dim();
    if nu == 0 {
        return Ok(GramianPair {
            w_cont: linalg::zeros(0, 0),
            w_obs: linalg::zeros(0, 0),
            residual_cont: 0.0,
            residual_obs: 0.0,
        });
    }
    let rho = linalg::spectral_radius(&r.a);
    if rho >= 1.0 - STABILITY_MARGIN {
        return Err(Error::Unstable(rho));
    }
    let a = &r.a;
    let eye = linalg::eye(nu * nu);
    let stein = |op: CMat, rhs: CMat| -> Result<CMat> {
        let rhs = CMat::from_column_slice(nu * nu, 1, rhs.as_slice());
        let x = linalg::solve(&op, &rhs).ok_or_else(|| Error::Singular("Stein operator".into()))?;
        Ok(linalg::hermitian_part(&CMat::from_column_slice(nu, nu, x.as_slice())))
    };
    let bb = &r.b * r.b.adjoint();
    let cc = r.c.adjoint() * &r.c;
    let w_cont = stein(&eye - a.conjugate().kronecker(a), bb.clone())?;
    let w_obs = stein(&eye - a.transpose().kronecker(&a.adjoint()), cc.clone())?;
    let residual_cont = linalg::max_abs(&(&w_cont - a * &w_cont * a.adjoint() - bb));
    let residual_obs = linalg::max_abs(&(&w_obs - a.adjoint() * &w_obs * a - cc));
    if residual_cont > tol || residual_obs > tol {
        return Err(Error::Inconsistent(format!(
            "Stein residuals {residual_cont:e}, {residual_obs:e} exceed {tol:e}"
        )));
    }
    Ok(GramianPair {
        w_cont,
        w_obs,
        residual_cont,
        residual_obs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RealizationClass {
    Both,
    Isometric,
    CoIsometric,
    Neither,
}

impl RealizationClass {
    pub fn label(self) -> &'static str {
        match self {
            RealizationClass::Both => "both",
            RealizationClass::Isometric => "isometric",
            RealizationClass::CoIsometric => "co-isometric",
            RealizationClass::Neither => "neither",
        }
    }

    pub fn satisfies(self, role: Role) -> bool {
        matches!(
            (self, role),
            (RealizationClass::Both, _)
                | (RealizationClass::Isometric, Role::Isometry)
                | (RealizationClass::CoIsometric, Role::CoIsometry)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct UnitaryRealizationCheck {
    pub class: RealizationClass,
    /// Max-abs entry of `R* R - I`.
    pub residual_iso: f64,
    /// Max-abs entry of `R R* - I`.
    pub residual_coiso: f64,
}

pub fn check_unitary_realization(r: &Realization, tol: f64) -> UnitaryRealizationCheck {
    let rm = r.matrix();
    let residual_iso = linalg::max_abs(&(rm.adjoint() * &rm - linalg::eye(rm.ncols())));
    let residual_coiso = linalg::max_abs(&(&rm * rm.adjoint() - linalg::eye(rm.nrows())));
    let class = match (residual_iso <= tol, residual_coiso <= tol) {
        (true, true) => RealizationClass::Both,
        (true, false) => RealizationClass::Isometric,
        (false, true) => RealizationClass::CoIsometric,
        (false, false) => RealizationClass::Neither,
    };
    UnitaryRealizationCheck {
        class,
        residual_iso,
        residual_coiso,
    }
}

/// Result of bringing a realization to Gramian normal form.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub realization: Realization,
    pub gramians: GramianPair,
    /// The Gramian that was not set to the identity satisfies `W <= I`.
    pub complementary_contractive: bool,
}

/// Smallest eigenvalue accepted for the Gramian being inverted.
const GRAMIAN_FLOOR: f64 = 1e-12;

/// State transformation setting `W_obs = I` (isometric mode) or `W_cont = I`
/// (co-isometric mode).
pub fn gramian_normalize(r: &Realization, mode: Role, tol: f64) -> Result<Normalized> {
    let g = gramians(r, tol)?;
    if r.state_dim() == 0 {
        return Ok(Normalized {
            realization: r.clone(),
            gramians: g,
            complementary_contractive: true,
        });
    }
    let (t, t_inv) = match mode {
        Role::Isometry => {
            let inv = linalg::psd_inv_sqrt(&g.w_obs, GRAMIAN_FLOOR).ok_or_else(|| {
                Error::Precondition("observability Gramian is singular; realization not minimal".into())
            })?;
            (linalg::psd_sqrt(&g.w_obs), inv)
        }
        Role::CoIsometry => {
            let inv = linalg::psd_inv_sqrt(&g.w_cont, GRAMIAN_FLOOR).ok_or_else(|| {
                Error::Precondition("controllability Gramian is singular; realization not minimal".into())
            })?;
            (inv, linalg::psd_sqrt(&g.w_cont))
        }
    };
    let realization = r.transform(&t, &t_inv);
    let gramians = gramians(&realization, tol)?;
    let other = match mode {
        Role::Isometry => &gramians.w_cont,
        Role::CoIsometry => &gramians.w_obs,
    };
    let slack = linalg::eye(other.nrows()) - other;
    let complementary_contractive = linalg::hermitian_eigenvalues(&slack)
        .first()
        .is_none_or(|&l| l >= -tol);
    Ok(Normalized {
        realization,
        gramians,
        complementary_contractive,
    })
}
