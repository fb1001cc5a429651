//! Real-angle coordinates for FIR members of the para-unitary class.
//!
//! Layout of an angle vector: first the constant (co)isometry `U`, as a
//! `K x M` isometry `W` (`U = W` on the isometric side, `U = W*` on the
//! co-isometric side) given by `(theta, phi)` pairs of complex Givens
//! rotations `G(i, j)` for `i < M`, `i < j < K` followed by `M` column
//! phases; then, for each factor vector `v in C^k`, `k - 1` spherical
//! magnitude angles and `k - 1` phases of the components `2..k`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use super::{synth, BPProduct};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Role};
use crate::linalg::{self, c, CMat, CVec};

/// Dimension of the angle box and the number of its copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParamCount {
    pub dimension: usize,
    pub copies: usize,
}

impl ParamCount {
    /// Total number of real parameters across all copies.
    pub fn total(&self) -> usize {
        self.dimension * self.copies
    }
}

/// `(K, M)` with `K >= M`: the larger and smaller dimensions for `side`.
fn oriented(side: Role, p: usize, m: usize) -> Result<(usize, usize)> {
    let (big, small) = match side {
        Role::Isometry => (p, m),
        Role::CoIsometry => (m, p),
    };
    if small == 0 || big < small {
        return Err(Error::InvalidParameter(format!(
            "{side} side needs {} >= {} >= 1, got p = {p}, m = {m}",
            if side == Role::Isometry { "p" } else { "m" },
            if side == Role::Isometry { "m" } else { "p" },
        )));
    }
    Ok((big, small))
}

/// `(2K - M - 1)(M + d) + d(M - 1) + M` with `(K, M) = (p, m)` for the
/// isometric side and `(m, p)` for the co-isometric side.
pub fn param_count(side: Role, p: usize, m: usize, d: usize, causal_only: bool) -> Result<ParamCount> {
    let (k, s) = oriented(side, p, m)?;
    Ok(ParamCount {
        dimension: (2 * k - s - 1) * (s + d) + d * (s - 1) + s,
        copies: if causal_only { 1 } else { d + 1 },
    })
}

/// Number of angles used by the chart.
pub fn chart_len(side: Role, p: usize, m: usize, d: usize) -> Result<usize> {
    let (k, s) = oriented(side, p, m)?;
    Ok(u_len(k, s) + d * (2 * k - 2))
}

fn u_len(k: usize, s: usize) -> usize {
    2 * k * s - s * s
}

/// Angle coordinates of one product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleParams {
    pub side: Role,
    pub p: usize,
    pub m: usize,
    pub d: usize,
    pub gamma: usize,
    pub angles: Vec<f64>,
}

/// `k x s` isometry from Givens rotations applied to `[I_s; 0]` and column phases.
fn decode_isometry(k: usize, s: usize, angles: &[f64]) -> CMat {
    let mut w = linalg::zeros(k, s);
    for i in 0..s {
        w[(i, i)] = c(1.0, 0.0);
    }
    let pairs: Vec<(usize, usize)> = (0..s).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let (rot, phases) = angles.split_at(2 * pairs.len());
    for (col, &psi) in phases.iter().enumerate() {
        let ph = Complex64::from_polar(1.0, psi);
        for r in 0..k {
            w[(r, col)] *= ph;
        }
    }
    // G(i_1, j_1) G(i_2, j_2) ... applied right to left
    for (t, &(i, j)) in pairs.iter().enumerate().rev() {
        let (theta, phi) = (rot[2 * t], rot[2 * t + 1]);
        let (cs, sn) = (theta.cos(), theta.sin());
        let e = Complex64::from_polar(1.0, phi);
        for col in 0..s {
            let (a, b) = (w[(i, col)], w[(j, col)]);
            w[(i, col)] = a * cs - e.conj() * b * sn;
            w[(j, col)] = e * a * sn + b * cs;
        }
    }
    w
}

/// Unit vector from `k - 1` spherical angles and `k - 1` phases.
fn decode_vector(k: usize, angles: &[f64]) -> CVec {
    let (mags, phases) = angles.split_at(k - 1);
    let mut v = CVec::zeros(k);
    let mut tail = 1.0;
    for i in 0..k {
        let mag = if i + 1 < k { tail * mags[i].cos() } else { tail };
        if i + 1 < k {
            tail *= mags[i].sin();
        }
        let phase = if i == 0 { 0.0 } else { phases[i - 1] };
        v[i] = Complex64::from_polar(mag, phase);
    }
    // renormalize away accumulated rounding
    let n = v.norm();
    v / c(n, 0.0)
}

pub fn decode_angles(params: &AngleParams) -> Result<BPProduct> {
    let (k, s) = oriented(params.side, params.p, params.m)?;
    let expected = chart_len(params.side, params.p, params.m, params.d)?;
    if params.angles.len() != expected {
        return Err(Error::InvalidParameter(format!(
            "expected {expected} angles for this chart, got {}",
            params.angles.len()
        )));
    }
    if params.gamma > params.d {
        return Err(Error::InvalidParameter(format!(
            "gamma = {} exceeds degree {}",
            params.gamma, params.d
        )));
    }
    if let Some(x) = params.angles.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(format!("angle {x} is not finite")));
    }
    let (u_angles, rest) = params.angles.split_at(u_len(k, s));
    let w = decode_isometry(k, s, u_angles);
    let u = match params.side {
        Role::Isometry => w,
        Role::CoIsometry => w.adjoint(),
    };
    let vs = if k > 1 {
        rest.chunks(2 * k - 2).map(|a| decode_vector(k, a)).collect()
    } else {
        vec![CVec::from_element(1, c(1.0, 0.0)); params.d]
    };
    BPProduct::new(params.side, params.gamma, vs, u)
}

/// Uniform angles on the chart box.
pub fn random_angles<R: Rng>(side: Role, p: usize, m: usize, d: usize, gamma: usize, rng: &mut R) -> Result<AngleParams> {
    let len = chart_len(side, p, m, d)?;
    Ok(AngleParams {
        side,
        p,
        m,
        d,
        gamma,
        angles: (0..len).map(|_| rng.random_range(0.0..TAU)).collect(),
    })
}

/// Random product on the side determined by the dimensions.
pub fn random_product<R: Rng>(p: usize, m: usize, d: usize, gamma: usize, rng: &mut R) -> Result<BPProduct> {
    decode_angles(&random_angles(Role::for_dims(p, m), p, m, d, gamma, rng)?)
}

/// Deterministic random member of the class for a given seed.
pub fn random_member(p: usize, m: usize, d: usize, gamma: usize, seed: u64) -> Result<LaurentPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(synth(&random_product(p, m, d, gamma, &mut rng)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hankel::{is_paraunitary_hankel, mcmillan_degree, DEFAULT_RANK_TOL};
    use crate::laurent::unit_circle_point;
    use crate::linalg::{eye, max_abs};

    #[test]
    fn parameter_counts() {
        for d in 0..6 {
            assert_eq!(param_count(Role::Isometry, 1, 1, d, true).unwrap().dimension, 1);
        }
        assert_eq!(param_count(Role::Isometry, 2, 1, 0, true).unwrap().dimension, 3);
        assert_eq!(param_count(Role::Isometry, 3, 2, 2, true).unwrap().dimension, 16);
        assert_eq!(param_count(Role::CoIsometry, 2, 3, 2, false).unwrap(), ParamCount { dimension: 16, copies: 3 });
        assert!(param_count(Role::Isometry, 1, 2, 1, true).is_err());
        assert!(param_count(Role::CoIsometry, 2, 1, 1, true).is_err());
    }

    #[test]
    fn chart_size_equals_count() {
        for p in 1..=5 {
            for m in 1..=p {
                for d in 0..=5 {
                    let n = chart_len(Role::Isometry, p, m, d).unwrap();
                    assert_eq!(n, param_count(Role::Isometry, p, m, d, true).unwrap().dimension);
                    assert_eq!(chart_len(Role::CoIsometry, m, p, d).unwrap(), n);
                }
            }
        }
    }

    #[test]
    fn basepoint() {
        let params = AngleParams { side: Role::Isometry, p: 3, m: 2, d: 2, gamma: 1, angles: vec![0.0; 16] };
        let prod = decode_angles(&params).unwrap();
        let mut expected = linalg::zeros(3, 2);
        expected[(0, 0)] = c(1.0, 0.0);
        expected[(1, 1)] = c(1.0, 0.0);
        assert_eq!(prod.u(), &expected);
        for v in prod.vectors() {
            assert_eq!(v[0], c(1.0, 0.0));
            assert!(v.iter().skip(1).all(|x| x.norm() == 0.0));
        }
        let coiso = AngleParams { side: Role::CoIsometry, p: 2, m: 3, d: 0, gamma: 0, angles: vec![0.0; 8] };
        assert_eq!(decode_angles(&coiso).unwrap().u(), &expected.transpose());
    }

    #[test]
    fn wrong_length_rejected() {
        let params = AngleParams { side: Role::Isometry, p: 2, m: 2, d: 1, gamma: 0, angles: vec![0.0; 3] };
        assert!(decode_angles(&params).is_err());
    }

    #[test]
    fn decoded_products_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..100 {
            let p = 1 + trial % 3;
            let m = 1 + (trial / 3) % 3;
            let d = trial % 4;
            let side = Role::for_dims(p, m);
            let params = random_angles(side, p, m, d, trial % (d + 1), &mut rng).unwrap();
            let prod = decode_angles(&params).unwrap();
            let f = synth(&prod);
            assert!(f.unitary_defect(f.default_samples()) < 1e-9);
            assert!(is_paraunitary_hankel(&f, 1e-9).unwrap().member);
            let mut shifted = params.clone();
            shifted.angles.iter_mut().for_each(|a| *a += TAU);
            let g = synth(&decode_angles(&shifted).unwrap());
            for j in 0..8 {
                let z = unit_circle_point(j, 8);
                assert!(max_abs(&(f.eval(z).unwrap() - g.eval(z).unwrap())) < 1e-12);
            }
        }
    }

    #[test]
    fn isometry_chart_reaches_identity_and_permutations() {
        let w = decode_isometry(2, 2, &[std::f64::consts::FRAC_PI_2, 0.0, 0.0, 0.0]);
        assert!(max_abs(&(w.adjoint() * &w - eye(2))) < 1e-15);
        assert!((w[(1, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_member_is_seeded() {
        let a = random_member(2, 2, 3, 1, 7).unwrap();
        assert_eq!(a, random_member(2, 2, 3, 1, 7).unwrap());
        assert_ne!(a, random_member(2, 2, 3, 1, 8).unwrap());
        assert!(mcmillan_degree(&a, DEFAULT_RANK_TOL) <= 3);
        for seed in 0..100 {
            let f = random_member(3, 2, 3, 0, seed).unwrap();
            assert_eq!(mcmillan_degree(&f, DEFAULT_RANK_TOL), 3);
        }
    }
}
