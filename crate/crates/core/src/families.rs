//! Constructions producing new FIR systems from given ones: reversal,
//! degree-preserving reblocking, power dilation and sparse exponent maps,
//! rectangular stacking, compositions and Hankel-level products.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hankel::{flip_t, BlockHankel};
use crate::laurent::LaurentPoly;
use crate::linalg::{self, c, CMat};

/// `B_k -> B_{n+1-k}` with the same `q`.
pub fn reverse_poly(f: &LaurentPoly) -> LaurentPoly {
    LaurentPoly::new(f.q(), f.coeffs().iter().rev().cloned().collect()).expect("same shapes")
}

/// `jp x jm` polynomial read off the `j x j` superblocks of the padded
/// Hankel matrix of a strictly causal polynomial with delay `-q >= 1`.
pub fn reblock(f: &LaurentPoly, j: usize) -> Result<LaurentPoly> {
    if f.q() > -1 {
        return Err(Error::Causality {
            expected: "strictly causal with delay at least one (q <= -1)",
            q: f.q(),
            n: f.len(),
        });
    }
    let eta = (-f.q()) as usize;
    if j == 0 || j > 1 + eta {
        return Err(Error::InvalidParameter(format!("j = {j} outside [1, {}]", 1 + eta)));
    }
    if j == 1 {
        return Ok(f.clone());
    }
    let (p, m) = f.dims();
    let seq: Vec<&CMat> = f.coeffs().iter().collect();
    let at = |k: usize| -> Option<&CMat> { k.checked_sub(eta).and_then(|i| seq.get(i).copied()) };
    let total = f.len() + eta;
    let count = total.div_ceil(j);
    let coeffs = (0..count)
        .map(|big| {
            let mut d = linalg::zeros(j * p, j * m);
            for r in 0..j {
                for col in 0..j {
                    if let Some(b) = at(big * j + r + col) {
                        linalg::set_block(&mut d, r * p, col * m, b);
                    }
                }
            }
            d
        })
        .collect();
    LaurentPoly::new(0, coeffs)
}

/// `z^a (z^-gamma B_1 + z^-2gamma B_2 + ... + z^-n gamma B_n)`.
pub fn dilate(f: &LaurentPoly, a: i64, gamma: usize) -> Result<LaurentPoly> {
    if gamma == 0 {
        return Err(Error::InvalidParameter("gamma must be at least one".into()));
    }
    let (p, m) = f.dims();
    let n = f.len();
    let mut coeffs = vec![linalg::zeros(p, m); (n - 1) * gamma + 1];
    for (k, b) in f.coeffs().iter().enumerate() {
        coeffs[k * gamma] = b.clone();
    }
    LaurentPoly::new(a - gamma as i64 + 1, coeffs)
}

/// Run length, run spacing and offset of an exponent pattern made of runs
/// of consecutive integers of equal length with equally spaced starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentPattern {
    pub run: usize,
    pub spacing: usize,
    pub offset: usize,
}

pub fn exponent_pattern(exponents: &[usize]) -> Result<ExponentPattern> {
    let first = *exponents
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty exponent pattern".into()))?;
    if first == 0 {
        return Err(Error::InvalidParameter("exponents must be positive".into()));
    }
    if exponents.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("exponents must be strictly increasing".into()));
    }
    let run = exponents.windows(2).take_while(|w| w[1] == w[0] + 1).count() + 1;
    let n = exponents.len();
    let reject = || {
        Error::InvalidParameter(format!(
            "exponents {exponents:?} are not runs of equal length with uniform spacing"
        ))
    };
    if !n.is_multiple_of(run) {
        return Err(reject());
    }
    let spacing = if n == run { run } else { exponents[run] - first };
    if spacing <= run && n > run {
        return Err(reject());
    }
    let ok = exponents
        .iter()
        .enumerate()
        .all(|(i, &e)| e == first + (i / run) * spacing + i % run);
    if !ok {
        return Err(reject());
    }
    Ok(ExponentPattern {
        run,
        spacing,
        offset: first - 1,
    })
}

/// `sum_k z^-e_k B_k` for an accepted exponent pattern.
pub fn exponent_map(f: &LaurentPoly, exponents: &[usize]) -> Result<LaurentPoly> {
    if exponents.len() != f.len() {
        return Err(Error::InvalidParameter(format!(
            "{} exponents for {} coefficients",
            exponents.len(),
            f.len()
        )));
    }
    exponent_pattern(exponents)?;
    let (p, m) = f.dims();
    let first = exponents[0];
    let last = exponents[exponents.len() - 1];
    let mut coeffs = vec![linalg::zeros(p, m); last - first + 1];
    for (b, &e) in f.coeffs().iter().zip(exponents) {
        coeffs[e - first] = b.clone();
    }
    LaurentPoly::new(1 - first as i64, coeffs)
}

/// `I_eta (x) [0_{beta x delta}; I_delta; 0_{alpha x delta}]`.
pub fn u_iso(alpha: usize, beta: usize, eta: usize, delta: usize) -> CMat {
    let h = alpha + beta + delta;
    let mut u = linalg::zeros(eta * h, eta * delta);
    for t in 0..eta {
        for i in 0..delta {
            u[(t * h + beta + i, t * delta + i)] = c(1.0, 0.0);
        }
    }
    u
}

/// `I_eta (x) [0_{delta x beta}, I_delta, 0_{delta x alpha}]`.
pub fn u_coiso(alpha: usize, beta: usize, eta: usize, delta: usize) -> CMat {
    u_iso(alpha, beta, eta, delta).transpose()
}

fn padded_coeffs(f: &LaurentPoly, rho: usize) -> Vec<CMat> {
    let (p, m) = f.dims();
    let mut coeffs = f.coeffs().to_vec();
    coeffs.resize(f.len().div_ceil(rho) * rho, linalg::zeros(p, m));
    coeffs
}

fn require_rho(rho: usize) -> Result<()> {
    if rho == 0 {
        return Err(Error::InvalidParameter("rho must be at least one".into()));
    }
    Ok(())
}

/// `rho p x m` polynomial whose coefficients stack groups of `rho` consecutive coefficients.
pub fn rect_stack(f: &LaurentPoly, rho: usize) -> Result<LaurentPoly> {
    require_rho(rho)?;
    let m = f.cols();
    let coeffs = padded_coeffs(f, rho)
        .chunks(rho)
        .map(|group| linalg::vstack(group, m))
        .collect();
    LaurentPoly::new(f.q(), coeffs)
}

/// `p x rho m` polynomial whose coefficients concatenate groups of `rho` coefficients.
pub fn rect_widen(f: &LaurentPoly, rho: usize) -> Result<LaurentPoly> {
    require_rho(rho)?;
    let p = f.rows();
    let coeffs = padded_coeffs(f, rho)
        .chunks(rho)
        .map(|group| linalg::hstack(group, p))
        .collect();
    LaurentPoly::new(f.q(), coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagVariant {
    Diag,
    AntiDiag,
}

fn power_range(fb: &LaurentPoly, fc: &LaurentPoly) -> (i64, i64) {
    (
        fb.highest_power().max(fc.highest_power()),
        fb.lowest_power().min(fc.lowest_power()),
    )
}

fn compose_by_power(
    fb: &LaurentPoly,
    fc: &LaurentPoly,
    rows: usize,
    cols: usize,
    place: impl Fn(&mut CMat, Option<&CMat>, Option<&CMat>),
) -> Result<LaurentPoly> {
    let (hi, lo) = power_range(fb, fc);
    let coeffs = (lo..=hi)
        .rev()
        .map(|power| {
            let mut d = linalg::zeros(rows, cols);
            place(&mut d, fb.coeff_at_power(power), fc.coeff_at_power(power));
            d
        })
        .collect();
    LaurentPoly::from_descending(hi, coeffs)
}

/// Block-diagonal (or anti-diagonal) composition, terms aligned by power.
pub fn compose_diag(fb: &LaurentPoly, fc: &LaurentPoly, variant: DiagVariant) -> Result<LaurentPoly> {
    let (pb, mb) = fb.dims();
    let (pc, mc) = fc.dims();
    compose_by_power(fb, fc, pb + pc, mb + mc, |d, b, cc| match variant {
        DiagVariant::Diag => {
            if let Some(b) = b {
                linalg::set_block(d, 0, 0, b);
            }
            if let Some(cc) = cc {
                linalg::set_block(d, pb, mb, cc);
            }
        }
        DiagVariant::AntiDiag => {
            if let Some(b) = b {
                linalg::set_block(d, 0, mc, b);
            }
            if let Some(cc) = cc {
                linalg::set_block(d, pb, 0, cc);
            }
        }
    })
}

fn check_alpha(alpha: f64) -> Result<(Complex64, Complex64)> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} outside [0, 1]")));
    }
    Ok((c(alpha.sqrt(), 0.0), c((1.0 - alpha).sqrt(), 0.0)))
}

/// `D_k = [sqrt(alpha) (B_k, 0); sqrt(1 - alpha) C_k]`, requires `m_c >= m_b`.
pub fn compose_mix_rows(fb: &LaurentPoly, fc: &LaurentPoly, alpha: f64) -> Result<LaurentPoly> {
    let (pb, mb) = fb.dims();
    let (pc, mc) = fc.dims();
    if mc < mb {
        return Err(Error::DimensionMismatch(format!("row mixing needs m_c >= m_b, got {mc} < {mb}")));
    }
    let (sa, sb) = check_alpha(alpha)?;
    compose_by_power(fb, fc, pb + pc, mc, |d, b, cc| {
        if let Some(b) = b {
            linalg::set_block(d, 0, 0, &(b * sa));
        }
        if let Some(cc) = cc {
            linalg::set_block(d, pb, 0, &(cc * sb));
        }
    })
}

/// `D_k = [sqrt(alpha) B_k, sqrt(1 - alpha) (C_k; 0)]`, requires `p_b >= p_c`.
pub fn compose_mix_cols(fb: &LaurentPoly, fc: &LaurentPoly, alpha: f64) -> Result<LaurentPoly> {
    let (pb, mb) = fb.dims();
    let (pc, mc) = fc.dims();
    if pb < pc {
        return Err(Error::DimensionMismatch(format!("column mixing needs p_b >= p_c, got {pb} < {pc}")));
    }
    let (sa, sb) = check_alpha(alpha)?;
    compose_by_power(fb, fc, pb, mb + mc, |d, b, cc| {
        if let Some(b) = b {
            linalg::set_block(d, 0, 0, &(b * sa));
        }
        if let Some(cc) = cc {
            linalg::set_block(d, 0, mb, &(cc * sb));
        }
    })
}

fn delayed_hankel(coeffs: &[CMat], delay: usize) -> CMat {
    let (p, m) = coeffs[0].shape();
    let seq: Vec<CMat> = std::iter::repeat_with(|| linalg::zeros(p, m))
        .take(delay)
        .chain(coeffs.iter().cloned())
        .collect();
    BlockHankel::from_sequence(&seq, seq.len(), p, m).into_matrix()
}

/// Product `F_b F_c` with coefficients from `H_{B,n,l} T_{n+l,rho} [0; C_1; ...; C_l]`.
pub fn product_via_hankel(fb: &LaurentPoly, fc: &LaurentPoly) -> Result<LaurentPoly> {
    let (pb, rho) = fb.dims();
    let (rc, mc) = fc.dims();
    if rho != rc {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {pb}x{rho} by {rc}x{mc}"
        )));
    }
    let n = fb.len();
    let l = fc.len();
    let h = delayed_hankel(fb.coeffs(), l);
    let mut c_stack = linalg::zeros((n + l) * rho, mc);
    for (k, ck) in fc.coeffs().iter().enumerate() {
        linalg::set_block(&mut c_stack, (n + k) * rho, 0, ck);
    }
    let d_stack = h * flip_t(n + l, rho) * c_stack;
    let coeffs = (1..n + l)
        .map(|k| linalg::block(&d_stack, k * pb, 0, pb, mc))
        .collect();
    LaurentPoly::new(fb.q() + fc.q() - 1, coeffs)
}

/// Max-abs residual of `H_{D,n+l-1,1} = H_{B,n,l} T_{n+l,rho} H_{C,l,n}`.
pub fn product_hankel_identity_residual(fb: &LaurentPoly, fc: &LaurentPoly) -> Result<f64> {
    let d = product_via_hankel(fb, fc)?;
    let (n, l, rho) = (fb.len(), fc.len(), fb.cols());
    let lhs = delayed_hankel(d.coeffs(), 1);
    let rhs = delayed_hankel(fb.coeffs(), l) * flip_t(n + l, rho) * delayed_hankel(fc.coeffs(), n);
    Ok(linalg::max_abs(&(lhs - rhs)))
}

/// The Hankel matrix `H(a, b, rho)` of the sequence `U_Iso B`, zero-padding
/// `n` to a multiple of `rho`. The same sequence is formed as `B^ U_Coiso`
/// and the two are required to agree.
pub fn hankel_ab_rho(f: &LaurentPoly, a: usize, b: usize, rho: usize) -> Result<BlockHankel> {
    require_rho(rho)?;
    let (p, m) = f.dims();
    let coeffs = padded_coeffs(f, rho);
    let n = coeffs.len();
    let eta = n / rho;
    let tall = u_iso(a * rho * p, b * rho * p, eta, rho * p) * linalg::vstack(&coeffs, m);
    let wide = linalg::hstack(&coeffs, p) * u_coiso(a * rho * m, b * rho * m, eta, rho * m);
    let len = (a + b + 1) * n;
    let from_tall: Vec<CMat> = (0..len).map(|k| linalg::block(&tall, k * p, 0, p, m)).collect();
    let from_wide: Vec<CMat> = (0..len).map(|k| linalg::block(&wide, 0, k * m, p, m)).collect();
    if from_tall != from_wide {
        return Err(Error::Inconsistent("U_Iso B and B^ U_Coiso sequences differ".into()));
    }
    Ok(BlockHankel::from_sequence(&from_tall, len, p, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hankel::{hankel_causal, hankel_normalized, is_paraunitary_hankel, mcmillan_degree, DEFAULT_RANK_TOL};
    use crate::laurent::unit_circle_point;
    use crate::linalg::{eye, max_abs, real_rows, zeros};
    use crate::reference;

    /// Distinct symbolic 1x1 coefficients `B_k = k`.
    fn symbolic(n: usize, q: i64) -> LaurentPoly {
        LaurentPoly::new(q, (1..=n).map(|k| real_rows(&[&[k as f64]])).collect()).unwrap()
    }

    fn blocks(rows: &[&[usize]], f: &LaurentPoly) -> CMat {
        let (p, m) = f.dims();
        let mut out = zeros(rows.len() * p, rows[0].len() * m);
        for (r, row) in rows.iter().enumerate() {
            for (col, &k) in row.iter().enumerate() {
                if k > 0 {
                    linalg::set_block(&mut out, r * p, col * m, &f.coeffs()[k - 1]);
                }
            }
        }
        out
    }

    fn member(f: &LaurentPoly) -> bool {
        is_paraunitary_hankel(f, 1e-9).unwrap().member
    }

    #[test]
    fn reverse_examples() {
        let f = reference::example_two(0);
        let r = reverse_poly(&f);
        assert_eq!(r.coeffs()[0], f.coeffs()[1]);
        assert!(member(&r));
        assert_eq!(reverse_poly(&r), f);
        let single = LaurentPoly::new(0, vec![eye(2)]).unwrap();
        assert_eq!(reverse_poly(&single), single);
    }

    #[test]
    fn reblock_displayed_cases() {
        let f = reference::four_tap(-1);
        let g = reblock(&f, 2).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.coeffs()[0], blocks(&[&[0, 1], &[1, 2]], &f));
        assert_eq!(g.coeffs()[1], blocks(&[&[2, 3], &[3, 4]], &f));
        assert_eq!(g.coeffs()[2], blocks(&[&[4, 0], &[0, 0]], &f));
        let f2 = reference::four_tap(-2);
        let g2 = reblock(&f2, 2).unwrap();
        assert_eq!(g2.coeffs()[0], blocks(&[&[0, 0], &[0, 1]], &f2));
        assert_eq!(g2.coeffs()[1], blocks(&[&[1, 2], &[2, 3]], &f2));
        assert_eq!(g2.coeffs()[2], blocks(&[&[3, 4], &[4, 0]], &f2));
        let g3 = reblock(&f2, 3).unwrap();
        assert_eq!(g3.len(), 2);
        assert_eq!(g3.coeffs()[0], blocks(&[&[0, 0, 1], &[0, 1, 2], &[1, 2, 3]], &f2));
        assert_eq!(g3.coeffs()[1], blocks(&[&[2, 3, 4], &[3, 4, 0], &[4, 0, 0]], &f2));
        assert_eq!(reblock(&f, 1).unwrap(), f);
        assert!(reblock(&f, 3).is_err());
        assert!(reblock(&reference::four_tap(0), 1).is_err());
    }

    #[test]
    fn reblock_concrete_instance() {
        for q in [-1, -2, -3] {
            let f = reference::four_tap(q);
            assert!(member(&f));
            let deg = mcmillan_degree(&f, DEFAULT_RANK_TOL);
            for j in 1..=(1 - q) as usize {
                let g = reblock(&f, j).unwrap();
                assert!(member(&g), "q = {q}, j = {j}");
                assert_eq!(mcmillan_degree(&g, DEFAULT_RANK_TOL), deg);
            }
        }
    }

    #[test]
    fn reblock_membership_identity() {
        // (I - H_1* H_1) [I_2m; 0] = 0 for the extended Hankel of a q = -1 member
        let f = reference::four_tap(-1);
        let h = hankel_causal(&f, 0).unwrap().into_matrix();
        let gram = eye(h.ncols()) - h.adjoint() * &h;
        assert!(max_abs(&linalg::block(&gram, 0, 0, h.ncols(), 4)) < 1e-12);
        let f2 = reference::four_tap(-2);
        let h2 = hankel_causal(&f2, 0).unwrap().into_matrix();
        let gram2 = eye(h2.ncols()) - h2.adjoint() * &h2;
        assert!(max_abs(&linalg::block(&gram2, 0, 0, h2.ncols(), 6)) < 1e-12);
    }

    #[test]
    fn dilate_examples() {
        let f = reference::example_two(0);
        assert_eq!(dilate(&f, 0, 1).unwrap(), f);
        let g = dilate(&f, 0, 2).unwrap();
        assert_eq!(g.coeff_at_power(-2), Some(&f.coeffs()[0]));
        assert_eq!(g.coeff_at_power(-4), Some(&f.coeffs()[1]));
        assert!(member(&g));
        for j in 0..16 {
            let z = unit_circle_point(j, 16) * c(1.3, 0.0);
            let lhs = dilate(&f, 0, 3).unwrap().eval(z).unwrap();
            assert!(max_abs(&(lhs - f.eval(z.powi(3)).unwrap())) < 1e-13);
        }
        assert!(dilate(&f, 0, 0).is_err());
    }

    #[test]
    fn exponent_patterns() {
        let f = symbolic(6, 0);
        let g = exponent_map(&f, &[1, 2, 3, 9, 10, 11]).unwrap();
        for (k, e) in [1, 2, 3, 9, 10, 11].into_iter().enumerate() {
            assert_eq!(g.coeff_at_power(-e), Some(&f.coeffs()[k]));
        }
        assert!(g.coeff_at_power(-5).unwrap().iter().all(|x| x.norm() == 0.0));
        assert_eq!(exponent_map(&f, &[1, 2, 3, 4, 5, 6]).unwrap(), f);
        assert_eq!(exponent_pattern(&[2, 5, 8]).unwrap(), ExponentPattern { run: 1, spacing: 3, offset: 1 });
        assert!(exponent_map(&f, &[1, 2, 4, 5, 6, 7]).is_err());
        assert!(exponent_map(&f, &[1, 2, 3, 9, 10]).is_err());
        assert!(exponent_pattern(&[1, 2, 5, 7]).is_err());
        assert!(exponent_pattern(&[3, 2]).is_err());
    }

    #[test]
    fn exponent_maps_preserving_membership() {
        let f = reference::four_tap(0);
        for pattern in [[1, 3, 5, 7], [2, 3, 4, 5], [4, 7, 10, 13]] {
            assert!(member(&exponent_map(&f, &pattern).unwrap()), "{pattern:?}");
        }
    }

    #[test]
    fn grouped_gaps_can_break_membership() {
        // runs (1,2) and (5,6): the shift-4 autocorrelation of the new
        // sequence is B_3* B_2 alone, which need not vanish
        let f = reference::four_tap(0);
        let g = exponent_map(&f, &[1, 2, 5, 6]).unwrap();
        let cross = f.coeffs()[2].adjoint() * &f.coeffs()[1];
        assert_eq!(max_abs(&cross) > 1e-3, !member(&g));
    }

    #[test]
    fn kronecker_embeddings() {
        assert_eq!(u_iso(0, 0, 3, 2), eye(6));
        let u = u_iso(1, 1, 2, 1);
        assert_eq!(u.shape(), (6, 2));
        let col0: Vec<f64> = u.column(0).iter().map(|x| x.re).collect();
        let col1: Vec<f64> = u.column(1).iter().map(|x| x.re).collect();
        assert_eq!(col0, vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(col1, vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let big = u_iso(2, 3, 4, 2);
        assert_eq!(big.adjoint() * &big, eye(8));
        let w = u_coiso(2, 3, 4, 2);
        assert_eq!(&w * w.adjoint(), eye(8));
    }

    #[test]
    fn stacking_and_widening() {
        let f = reference::example_one(0);
        assert_eq!(rect_stack(&f, 1).unwrap(), f);
        let s = rect_stack(&f, 2).unwrap();
        assert_eq!(s.dims(), (4, 2));
        assert_eq!(s.len(), 2);
        assert!(s.unitary_defect_as(crate::laurent::Role::Isometry, 32) < 1e-12);
        let w = rect_widen(&f, 3).unwrap();
        assert_eq!((w.dims(), w.len()), ((2, 6), 1));
        assert!(member(&w));
    }

    #[test]
    fn stacking_hankel_identities() {
        for rho in 1..=4 {
            let f = LaurentPoly::new(0, reference::four_tap_coeffs()).unwrap();
            let (p, m) = f.dims();
            let n = f.len().div_ceil(rho) * rho;
            let padded = LaurentPoly::new(0, padded_coeffs(&f, rho)).unwrap();
            let h0 = hankel_normalized(&padded).into_matrix();
            let hs = hankel_normalized(&rect_stack(&f, rho).unwrap()).into_matrix();
            assert_eq!(hs, &h0 * u_iso((rho - 1) * m, 0, n / rho, m));
            let hw = hankel_normalized(&rect_widen(&f, rho).unwrap()).into_matrix();
            assert_eq!(hw, u_coiso((rho - 1) * p, 0, n / rho, p) * &h0);
        }
    }

    #[test]
    fn diagonal_compositions() {
        let f = reference::example_one(0);
        let d = compose_diag(&f, &f, DiagVariant::Diag).unwrap();
        assert_eq!(d.dims(), (4, 4));
        assert!(member(&d));
        let u = LaurentPoly::constant(real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
        let aug = compose_diag(&f, &u, DiagVariant::Diag).unwrap();
        assert!(member(&aug));
        assert_eq!(aug.len(), 4);
        let z1 = LaurentPoly::monomial(-1, eye(1));
        let z2 = LaurentPoly::monomial(-2, eye(1));
        let anti = compose_diag(&z1, &z2, DiagVariant::AntiDiag).unwrap();
        for j in 0..8 {
            let z = unit_circle_point(j, 8);
            let expected = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), z.inv(), z.inv() * z.inv(), c(0.0, 0.0)]);
            let val = anti.eval(z).unwrap();
            assert!(max_abs(&(&val - expected)) < 1e-14);
            assert!(max_abs(&(val.adjoint() * &val - eye(2))) < 1e-14);
        }
    }

    #[test]
    fn mixing_compositions() {
        let iso = reference::example_two(0).conjugate().normalized();
        for alpha in [0.0, 0.5, 1.0] {
            let r = compose_mix_rows(&iso, &iso, alpha).unwrap();
            assert_eq!(r.dims(), (4, 1));
            assert!(r.unitary_defect_as(crate::laurent::Role::Isometry, 32) < 1e-12);
        }
        let co = reference::example_two(0);
        for alpha in [0.0, 0.5, 1.0] {
            let r = compose_mix_cols(&co, &co, alpha).unwrap();
            assert_eq!(r.dims(), (1, 4));
            assert!(member(&r));
        }
        let one = reference::example_one(0);
        let bottom = compose_mix_rows(&one, &one, 0.0).unwrap();
        assert!(bottom.coeffs()[0].rows(0, 2).iter().all(|x| x.norm() == 0.0));
        assert!(compose_mix_rows(&one, &iso, 0.5).is_err());
        assert!(compose_mix_cols(&co, &one, 0.5).is_err());
        assert!(compose_mix_rows(&one, &one, 1.5).is_err());
    }

    #[test]
    fn unequal_inner_dimensions_lose_membership() {
        // m_b < m_c: the Gram matrix is alpha diag(I, 0) + (1 - alpha) I
        let fb = reference::example_two(0).conjugate().normalized();
        let fc = reference::example_one(0);
        let r = compose_mix_rows(&fb, &fc, 0.5).unwrap();
        assert!(!member(&r));
        assert!(member(&compose_mix_rows(&fb, &fc, 0.0).unwrap()));
    }

    #[test]
    fn products_match_convolution() {
        let fb = LaurentPoly::monomial(-1, eye(2));
        let u = real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let fc = LaurentPoly::monomial(-1, u.clone());
        let d = product_via_hankel(&fb, &fc).unwrap();
        assert!(d.max_distance(&LaurentPoly::monomial(-2, u)).unwrap() < 1e-15);
        let x = reference::four_tap(0);
        let y = reference::example_one(2);
        let direct = x.multiply(&y).unwrap();
        assert!(product_via_hankel(&x, &y).unwrap().max_distance(&direct).unwrap() < 1e-12);
        assert!(product_hankel_identity_residual(&x, &y).unwrap() < 1e-12);
        assert!(member(&product_via_hankel(&x, &y).unwrap()));
        assert!(product_via_hankel(&x, &reference::example_two(0)).is_err());
    }

    #[test]
    fn hankel_ab_rho_layouts() {
        let f = symbolic(2, 0);
        assert_eq!(hankel_ab_rho(&f, 0, 0, 1).unwrap(), hankel_normalized(&f));
        // sequence (0, 0, B_1, 0, 0, B_2)
        let h = hankel_ab_rho(&f, 0, 2, 1).unwrap();
        let seq = [0, 0, 1, 0, 0, 2];
        for i in 0..6 {
            for j in 0..6 {
                let k = seq.get(i + j).copied().unwrap_or(0);
                assert_eq!(h.block(i, j)[(0, 0)].re, k as f64);
            }
        }
        // H(2, 2, 2), n = 4: four zeros, B_1 B_2, eight zeros, B_3 B_4, four zeros
        let f4 = symbolic(4, 0);
        let h4 = hankel_ab_rho(&f4, 2, 2, 2).unwrap();
        let mut seq4 = [0; 20];
        seq4[4] = 1;
        seq4[5] = 2;
        seq4[14] = 3;
        seq4[15] = 4;
        for i in 0..20 {
            for j in 0..20 {
                let k = seq4.get(i + j).copied().unwrap_or(0);
                assert_eq!(h4.block(i, j)[(0, 0)].re, k as f64);
            }
        }
    }

    #[test]
    fn hankel_ab_one_is_dilation() {
        let f = reference::four_tap(0);
        for (a, b) in [(0, 0), (1, 0), (0, 2), (2, 1)] {
            let gamma = a + b + 1;
            let g = dilate(&f, a as i64, gamma).unwrap();
            let h = hankel_ab_rho(&f, a, b, 1).unwrap();
            let (p, m) = f.dims();
            let mut seq = vec![zeros(p, m); b];
            seq.extend(g.coeffs().iter().cloned());
            let expected = BlockHankel::from_sequence(&seq, h.block_rows(), p, m);
            assert_eq!(h, expected);
            assert_eq!(hankel_causal(&g, 0).unwrap().matrix().shape().0, seq.len() * p);
        }
    }
}
