//! Matrix-valued Laurent polynomials `F(z) = z^q (z^-1 B_1 + ... + z^-n B_n)`.
//!
//! Coefficient `B_k` (1-based) multiplies the power `z^(q-k)`; the slice
//! returned by [`LaurentPoly::coeffs`] is 0-based, so `coeffs()[k-1] == B_k`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat};

/// Which side of the unitarity identity applies on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// `F(z)* F(z) = I_m`, requires `p >= m`.
    #[serde(rename = "iso")]
    Isometry,
    /// `F(z) F(z)* = I_p`, requires `m >= p`.
    #[serde(rename = "coiso")]
    CoIsometry,
}

impl Role {
    /// The role tested for a `p x m` system (square systems are tested as isometries).
    pub fn for_dims(p: usize, m: usize) -> Role {
        if p >= m {
            Role::Isometry
        } else {
            Role::CoIsometry
        }
    }

    pub fn opposite(self) -> Role {
        match self {
            Role::Isometry => Role::CoIsometry,
            Role::CoIsometry => Role::Isometry,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Isometry => "isometry",
            Role::CoIsometry => "co-isometry",
        })
    }
}

/// Causality flags. The classes overlap at boundary values of `q`, so every
/// applicable flag is reported along with a single strongest label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Causality {
    pub strictly_causal: bool,
    pub causal: bool,
    pub anti_causal: bool,
    pub strictly_anti_causal: bool,
    pub mixed: bool,
}

impl Causality {
    pub fn of(q: i64, n: usize) -> Causality {
        let n = n as i64;
        Causality {
            strictly_causal: q <= 0,
            causal: q <= 1,
            anti_causal: q >= n,
            strictly_anti_causal: q > n,
            mixed: q >= 2 && q < n,
        }
    }

    pub fn label(&self) -> &'static str {
        if self.strictly_causal {
            "strictly-causal"
        } else if self.strictly_anti_causal {
            "strictly-anti-causal"
        } else if self.causal {
            "causal"
        } else if self.anti_causal {
            "anti-causal"
        } else {
            "mixed-laurent"
        }
    }

    pub fn flags(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.strictly_causal {
            out.push("strictly-causal");
        }
        if self.causal {
            out.push("causal");
        }
        if self.mixed {
            out.push("mixed-laurent");
        }
        if self.anti_causal {
            out.push("anti-causal");
        }
        if self.strictly_anti_causal {
            out.push("strictly-anti-causal");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    p: usize,
    m: usize,
    q: i64,
    coeffs: Vec<CMat>,
}

impl LaurentPoly {
    pub fn new(q: i64, coeffs: Vec<CMat>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::InvalidParameter("at least one coefficient is required".into()))?;
        let (p, m) = first.shape();
        if p == 0 || m == 0 {
            return Err(Error::InvalidParameter(format!(
                "coefficient blocks must be non-empty, got {p}x{m}"
            )));
        }
        if let Some((k, b)) = coeffs.iter().enumerate().find(|(_, b)| b.shape() != (p, m)) {
            return Err(Error::DimensionMismatch(format!(
                "coefficient B_{} is {}x{}, expected {p}x{m}",
                k + 1,
                b.nrows(),
                b.ncols()
            )));
        }
        Ok(LaurentPoly { p, m, q, coeffs })
    }

    /// Canonical zero: `n = 1`, `q = 0`, `B_1 = 0`.
    pub fn zero(p: usize, m: usize) -> Self {
        LaurentPoly {
            p,
            m,
            q: 0,
            coeffs: vec![linalg::zeros(p, m)],
        }
    }

    /// The constant function `F(z) = d`.
    pub fn constant(d: CMat) -> Self {
        Self::monomial(0, d)
    }

    /// `F(z) = z^power * b`.
    pub fn monomial(power: i64, b: CMat) -> Self {
        let (p, m) = b.shape();
        LaurentPoly {
            p,
            m,
            q: power + 1,
            coeffs: vec![b],
        }
    }

    /// Builds a polynomial from coefficients listed by descending power,
    /// starting at `z^highest`.
    pub fn from_descending(highest: i64, coeffs: Vec<CMat>) -> Result<Self> {
        Self::new(highest + 1, coeffs)
    }

    pub fn rows(&self) -> usize {
        self.p
    }

    pub fn cols(&self) -> usize {
        self.m
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.p, self.m)
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Number of coefficient blocks `n`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<CMat> {
        self.coeffs
    }

    pub fn highest_power(&self) -> i64 {
        self.q - 1
    }

    pub fn lowest_power(&self) -> i64 {
        self.q - self.coeffs.len() as i64
    }

    pub fn role(&self) -> Role {
        Role::for_dims(self.p, self.m)
    }

    pub fn coeff_at_power(&self, power: i64) -> Option<&CMat> {
        let k = self.q - power;
        if k >= 1 && k as usize <= self.coeffs.len() {
            Some(&self.coeffs[k as usize - 1])
        } else {
            None
        }
    }

    pub fn causality(&self) -> Causality {
        Causality::of(self.q, self.coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|b| linalg::is_zero(b, 0.0))
    }

    /// `F(z) = z^q sum_k z^-k B_k`, by Horner's rule in `1/z`.
    pub fn eval(&self, z: Complex64) -> Result<CMat> {
        if z == linalg::ZERO {
            return Err(Error::Domain("z = 0".into()));
        }
        let w = z.inv();
        let mut acc = self.coeffs[self.coeffs.len() - 1].clone();
        for b in self.coeffs.iter().rev().skip(1) {
            acc = b + acc * w;
        }
        Ok(acc * (w * zpow(z, self.q)))
    }

    /// Limit as `z -> infinity`, defined for causal polynomials.
    pub fn eval_at_infinity(&self) -> Option<CMat> {
        if self.q > 1 {
            return None;
        }
        Some(
            self.coeff_at_power(0)
                .cloned()
                .unwrap_or_else(|| linalg::zeros(self.p, self.m)),
        )
    }

    /// `F#(z) = F(1/z*)*`, an `m x p` polynomial.
    pub fn conjugate(&self) -> Self {
        let n = self.coeffs.len() as i64;
        LaurentPoly {
            p: self.m,
            m: self.p,
            q: n - self.q + 1,
            coeffs: self.coeffs.iter().rev().map(|b| b.adjoint()).collect(),
        }
    }

    /// `z^k F(z)`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            q: self.q + k,
            ..self.clone()
        }
    }

    /// The `q = 0` form `z^-1 B_1 + ... + z^-n B_n`.
    pub fn normalized(&self) -> Self {
        self.shift(-self.q)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|b| b * s).collect(),
            ..self.clone()
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&CMat) -> CMat) -> Result<Self> {
        Self::new(self.q, self.coeffs.iter().map(f).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.p, self.m, other.p, other.m
            )));
        }
        let hi = self.highest_power().max(other.highest_power());
        let lo = self.lowest_power().min(other.lowest_power());
        let coeffs = (lo..=hi)
            .rev()
            .map(|power| {
                let mut b = linalg::zeros(self.p, self.m);
                if let Some(x) = self.coeff_at_power(power) {
                    b += x;
                }
                if let Some(x) = other.coeff_at_power(power) {
                    b += x;
                }
                b
            })
            .collect();
        Self::from_descending(hi, coeffs)
    }

    /// Largest entrywise difference of power-aligned coefficients.
    pub fn max_distance(&self, other: &Self) -> Result<f64> {
        let diff = self.add(&other.scale(c(-1.0, 0.0)))?;
        Ok(diff.coeffs.iter().map(linalg::max_abs).fold(0.0, f64::max))
    }

    /// Coefficient convolution; the result is trimmed of exactly-zero outer blocks.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.m != other.p {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.p, self.m, other.p, other.m
            )));
        }
        let (n1, n2) = (self.coeffs.len(), other.coeffs.len());
        let mut out = vec![linalg::zeros(self.p, other.m); n1 + n2 - 1];
        for (i, bi) in self.coeffs.iter().enumerate() {
            for (j, cj) in other.coeffs.iter().enumerate() {
                out[i + j] += bi * cj;
            }
        }
        // z^(q1-i) z^(q2-j) = z^((q1+q2-1) - (i+j-1)) with 1-based i, j
        Ok(Self::new(self.q + other.q - 1, out)?.trim())
    }

    /// Strips exactly-zero leading and trailing blocks.
    pub fn trim(&self) -> Self {
        self.trim_tol(0.0)
    }

    /// Strips outer blocks whose entries are all within `tol` of zero.
    pub fn trim_tol(&self, tol: f64) -> Self {
        let is_small = |b: &CMat| linalg::is_zero(b, tol);
        let Some(first) = self.coeffs.iter().position(|b| !is_small(b)) else {
            return Self::zero(self.p, self.m);
        };
        let last = self.coeffs.iter().rposition(|b| !is_small(b)).unwrap_or(first);
        LaurentPoly {
            p: self.p,
            m: self.m,
            q: self.q - first as i64,
            coeffs: self.coeffs[first..=last].to_vec(),
        }
    }

    /// Splits into the strictly anti-causal part, the constant term and the
    /// strictly causal part; absent parts are `None`.
    pub fn split_parts(&self) -> (Option<Self>, CMat, Option<Self>) {
        let n = self.coeffs.len() as i64;
        // B_k has power q - k: positive for k < q, zero at k = q, negative for k > q.
        let left_end = (self.q - 1).min(n);
        let left = (left_end >= 1).then(|| LaurentPoly {
            p: self.p,
            m: self.m,
            q: self.q,
            coeffs: self.coeffs[..left_end as usize].to_vec(),
        });
        let d = self
            .coeff_at_power(0)
            .cloned()
            .unwrap_or_else(|| linalg::zeros(self.p, self.m));
        let right_start = (self.q + 1).max(1);
        let right = (right_start <= n).then(|| LaurentPoly {
            p: self.p,
            m: self.m,
            q: self.q - (right_start - 1),
            coeffs: self.coeffs[right_start as usize - 1..].to_vec(),
        });
        (left, d, right)
    }

    /// `F = F_l + D + F_r`, with canonical zeros for empty parts.
    pub fn split(&self) -> (Self, CMat, Self) {
        let (l, d, r) = self.split_parts();
        (
            l.unwrap_or_else(|| Self::zero(self.p, self.m)),
            d,
            r.unwrap_or_else(|| Self::zero(self.p, self.m)),
        )
    }

    /// Default number of unit-circle samples for [`Self::unitary_defect`].
    pub fn default_samples(&self) -> usize {
        4 * (self.coeffs.len() + 1)
    }

    /// Worst Frobenius deviation from unitarity over `samples` equispaced
    /// points of the unit circle.
    pub fn unitary_defect(&self, samples: usize) -> f64 {
        self.unitary_defect_as(self.role(), samples)
    }

    pub fn unitary_defect_as(&self, role: Role, samples: usize) -> f64 {
        let samples = samples.max(1);
        (0..samples)
            .map(|j| {
                let z = unit_circle_point(j, samples);
                let f = self.eval(z).expect("unit circle point is nonzero");
                let gram = match role {
                    Role::Isometry => f.adjoint() * &f - linalg::eye(self.m),
                    Role::CoIsometry => &f * f.adjoint() - linalg::eye(self.p),
                };
                linalg::frobenius(&gram)
            })
            .fold(0.0, f64::max)
    }
}

/// `exp(2 pi i j / count)`.
pub fn unit_circle_point(j: usize, count: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * j as f64 / count as f64)
}

fn zpow(z: Complex64, k: i64) -> Complex64 {
    match i32::try_from(k) {
        Ok(k) => z.powi(k),
        Err(_) => z.powc(c(k as f64, 0.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eye, max_abs, real_rows};
    use crate::reference;

    #[test]
    fn delay_evaluates_to_inverse() {
        let f = LaurentPoly::new(0, vec![eye(2)]).unwrap();
        let v = f.eval(c(0.0, 1.0)).unwrap();
        assert!(max_abs(&(v - eye(2) * c(0.0, -1.0))) < 1e-15);
    }

    #[test]
    fn example_one_at_one() {
        let f = reference::example_one(2);
        let v = f.eval(c(1.0, 0.0)).unwrap();
        let expected = real_rows(&[&[0.8, 0.6], &[-0.6, 0.8]]);
        assert!(max_abs(&(v - expected)) < 1e-15);
    }

    #[test]
    fn example_two_at_one() {
        let f = reference::example_two(0);
        let v = f.eval(c(1.0, 0.0)).unwrap();
        assert!(max_abs(&(v - real_rows(&[&[0.8, -0.6]]))) < 1e-15);
    }

    #[test]
    fn eval_at_zero_is_domain_error() {
        let f = LaurentPoly::zero(1, 1);
        assert!(matches!(f.eval(c(0.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn conjugate_single_term() {
        let b = real_rows(&[&[1.0, 2.0]]);
        let f = LaurentPoly::new(0, vec![b.clone()]).unwrap();
        let g = f.conjugate();
        assert_eq!(g.dims(), (2, 1));
        assert_eq!(g.highest_power(), 1);
        assert_eq!(g.lowest_power(), 1);
        assert_eq!(g.coeffs()[0], b.adjoint());
    }

    #[test]
    fn conjugate_of_example_one_reflects_coefficients() {
        let f = reference::example_one(2);
        let g = f.conjugate();
        // z B_3* + B_2* + z^-1 B_1*
        assert_eq!(g.coeff_at_power(1).unwrap(), &f.coeffs()[2].adjoint());
        assert_eq!(g.coeff_at_power(0).unwrap(), &f.coeffs()[1].adjoint());
        assert_eq!(g.coeff_at_power(-1).unwrap(), &f.coeffs()[0].adjoint());
        for j in 0..8 {
            let z = unit_circle_point(j, 8);
            let lhs = g.eval(z).unwrap();
            let rhs = f.eval(z).unwrap().adjoint();
            assert!(max_abs(&(lhs - rhs)) < 1e-14);
        }
    }

    #[test]
    fn product_of_delays() {
        let u = real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let f = LaurentPoly::new(0, vec![eye(2)]).unwrap();
        let g = LaurentPoly::new(0, vec![u.clone()]).unwrap();
        let h = f.multiply(&g).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.highest_power(), -2);
        assert_eq!(h.coeffs()[0], u);
    }

    #[test]
    fn example_two_times_conjugate_is_one_on_circle() {
        let f = reference::example_two(0);
        let g = f.multiply(&f.conjugate()).unwrap();
        for j in 0..16 {
            let v = g.eval(unit_circle_point(j, 16)).unwrap();
            assert!(max_abs(&(v - eye(1))) < 1e-14);
        }
    }

    #[test]
    fn multiply_trims_zero_blocks() {
        let a = LaurentPoly::new(0, vec![linalg::zeros(1, 1), eye(1), linalg::zeros(1, 1)]).unwrap();
        let b = LaurentPoly::new(0, vec![eye(1)]).unwrap();
        let h = a.multiply(&b).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.highest_power(), -3);
    }

    #[test]
    fn split_example_one() {
        let f = reference::example_one(2);
        let (l, d, r) = f.split();
        let b = f.coeffs();
        assert_eq!(l.len(), 1);
        assert_eq!(l.highest_power(), 1);
        assert_eq!(l.coeffs()[0], b[0]);
        assert_eq!(d, b[1]);
        assert_eq!(r.len(), 1);
        assert_eq!(r.highest_power(), -1);
        assert_eq!(r.coeffs()[0], b[2]);
    }

    #[test]
    fn split_extremes() {
        let f = reference::example_one(0);
        let (l, d, r) = f.split();
        assert!(l.is_zero());
        assert!(linalg::is_zero(&d, 0.0));
        assert_eq!(r, f);

        let g = reference::example_one(4);
        let (l, d, r) = g.split();
        assert_eq!(l, g);
        assert!(linalg::is_zero(&d, 0.0));
        assert!(r.is_zero());
    }

    #[test]
    fn unitary_defect_cases() {
        let u = real_rows(&[&[0.6, -0.8], &[0.8, 0.6]]);
        let f = LaurentPoly::new(3, vec![u]).unwrap().shift(-6);
        assert!(f.unitary_defect(f.default_samples()) < 1e-14);
        let ex = reference::example_two(0);
        assert!(ex.unitary_defect(64) < 1e-12);
        let bad = LaurentPoly::new(0, vec![real_rows(&[&[1.0, 0.0], &[0.0, 0.0]])]).unwrap();
        assert!((bad.unitary_defect(8) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trim_and_add() {
        let z = LaurentPoly::new(5, vec![linalg::zeros(2, 3); 4]).unwrap().trim();
        assert_eq!(z, LaurentPoly::zero(2, 3));
        let f = reference::example_one(1);
        let sum = f.add(&f.scale(c(-1.0, 0.0))).unwrap();
        assert!(sum.is_zero());
        assert_eq!(sum.trim(), LaurentPoly::zero(2, 2));
        assert!(f.add(&reference::example_two(0)).is_err());
    }

    #[test]
    fn shift_normalizes() {
        let f = reference::example_one(2);
        let f0 = f.shift(-f.q());
        assert_eq!(f0.q(), 0);
        assert_eq!(f0.coeffs(), f.coeffs());
        assert_eq!(f.normalized(), f0);
    }

    #[test]
    fn causality_flags() {
        let c = Causality::of(1, 1);
        assert!(c.causal && c.anti_causal && !c.strictly_causal);
        assert_eq!(c.label(), "causal");
        assert_eq!(Causality::of(0, 3).label(), "strictly-causal");
        assert_eq!(Causality::of(2, 3).label(), "mixed-laurent");
        assert_eq!(Causality::of(3, 3).label(), "anti-causal");
        assert_eq!(Causality::of(4, 3).label(), "strictly-anti-causal");
    }

    #[test]
    fn value_at_infinity() {
        let f = reference::example_one(1);
        assert_eq!(f.eval_at_infinity().unwrap(), f.coeffs()[0]);
        assert!(reference::example_one(2).eval_at_infinity().is_none());
        assert!(linalg::is_zero(&reference::example_one(0).eval_at_infinity().unwrap(), 0.0));
    }
}
