//! Embedded reproduction of the worked examples as named checks.

use crate::families::reblock;
use crate::hankel::{self, DEFAULT_RANK_TOL};
use crate::laurent::{unit_circle_point, LaurentPoly, Role};
use crate::linalg::{self, c, real_rows, CMat};
use crate::realization::{self, Realization, RealizationClass};
use crate::reference;

/// Tolerance for every check unless stated otherwise.
pub const CHECK_TOL: f64 = 1e-9;
/// Tighter tolerance for the rational singular values and Gramians.
pub const VALUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ExampleId {
    One,
    Two,
    FourTap,
}

/// Coefficient data the checks run on.
#[derive(Debug, Clone, PartialEq)]
pub struct Examples {
    pub one: Vec<CMat>,
    pub two: Vec<CMat>,
    pub four_tap: Vec<CMat>,
}

impl Examples {
    pub fn embedded() -> Self {
        Examples {
            one: reference::example_one_coeffs(),
            two: reference::example_two(0).into_coeffs(),
            four_tap: reference::four_tap_coeffs(),
        }
    }

    /// Adds `delta` to entry (1, 1) of the first coefficient of one example.
    pub fn perturbed(mut self, target: ExampleId, delta: f64) -> Self {
        let coeffs = match target {
            ExampleId::One => &mut self.one,
            ExampleId::Two => &mut self.two,
            ExampleId::FourTap => &mut self.four_tap,
        };
        coeffs[0][(0, 0)] += c(delta, 0.0);
        self
    }

    fn one(&self, q: i64) -> LaurentPoly {
        LaurentPoly::new(q, self.one.clone()).expect("example dimensions")
    }

    fn two(&self, q: i64) -> LaurentPoly {
        LaurentPoly::new(q, self.two.clone()).expect("example dimensions")
    }

    fn four_tap(&self, q: i64) -> LaurentPoly {
        LaurentPoly::new(q, self.four_tap.clone()).expect("example dimensions")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn outcome(name: &'static str, result: Result<String, String>) -> CheckOutcome {
    match result {
        Ok(detail) => CheckOutcome { name, pass: true, detail },
        Err(detail) => CheckOutcome { name, pass: false, detail },
    }
}

fn ensure(ok: bool, detail: String) -> Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: crate::Error) -> String {
    e.to_string()
}

/// Largest entrywise gap between a realization's transfer function and `f`
/// at points on the unit circle.
fn transfer_gap(r: &Realization, f: &LaurentPoly) -> Result<f64, String> {
    let mut gap: f64 = 0.0;
    for j in 0..16 {
        let z = unit_circle_point(j, 16);
        let diff = r.transfer(z).map_err(err)? - f.eval(z).map_err(err)?;
        gap = gap.max(linalg::max_abs(&diff));
    }
    Ok(gap)
}

fn dist_to(values: &[f64], expected: &[f64]) -> f64 {
    if values.len() < expected.len() {
        return f64::INFINITY;
    }
    let head = values.iter().zip(expected).map(|(a, b)| (a - b).abs());
    let tail = values[expected.len()..].iter().map(|a| a.abs());
    head.chain(tail).fold(0.0, f64::max)
}

fn check_degree(f: &LaurentPoly, expected: (usize, usize)) -> Result<String, String> {
    let rep = hankel::mcmillan_degree_report(f, DEFAULT_RANK_TOL);
    ensure(
        (rep.rank_h_hat, rep.rank_h) == expected,
        format!("degree {} = {} + {}", rep.degree, rep.rank_h_hat, rep.rank_h),
    )
}

fn check_member(f: &LaurentPoly) -> Result<String, String> {
    let chk = hankel::is_paraunitary_hankel(f, CHECK_TOL).map_err(err)?;
    let defect = f.unitary_defect(f.default_samples());
    ensure(
        chk.member && defect <= CHECK_TOL,
        format!("hankel residual {:.3e}, sampled defect {defect:.3e}", chk.residual()),
    )
}

fn check_reference_realization(r: &Realization, f: &LaurentPoly, class: RealizationClass) -> Result<String, String> {
    let u = realization::check_unitary_realization(r, CHECK_TOL);
    let gap = transfer_gap(r, f)?;
    ensure(
        u.class == class && gap <= CHECK_TOL,
        format!(
            "class {}, residuals {:.3e}/{:.3e}, transfer gap {gap:.3e}",
            u.class.label(),
            u.residual_iso,
            u.residual_coiso
        ),
    )
}

fn check_w_obs(r: &Realization, expected: &CMat) -> Result<String, String> {
    let g = realization::gramians(r, CHECK_TOL).map_err(err)?;
    let gap = linalg::max_abs(&(&g.w_obs - expected));
    ensure(gap <= VALUE_TOL, format!("W_obs gap {gap:.3e}"))
}

/// Runs every check in a fixed order.
pub fn run_checks(ex: &Examples) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let one1 = ex.one(1);
    let two0 = ex.two(0);
    let two1 = ex.two(1);

    out.push(outcome("example-1/degree-q2", check_degree(&ex.one(2), (1, 1))));
    out.push(outcome("example-1/degree-q1", check_degree(&one1, (0, 2))));
    out.push(outcome("example-1/paraunitary", check_member(&one1)));
    out.push(outcome(
        "example-1/reference-realization",
        check_reference_realization(&reference::example_one_realization(), &one1, RealizationClass::Both),
    ));
    out.push(outcome("example-1/normalized-realization", (|| {
        let r = realization::minimal_realization(&one1, DEFAULT_RANK_TOL).map_err(err)?;
        let n = realization::gramian_normalize(&r, Role::Isometry, CHECK_TOL).map_err(err)?;
        let u = realization::check_unitary_realization(&n.realization, CHECK_TOL);
        let gap = transfer_gap(&n.realization, &one1)?;
        ensure(
            r.state_dim() == 2 && u.class == RealizationClass::Both && gap <= CHECK_TOL,
            format!(
                "state dimension {}, residuals {:.3e}/{:.3e}, transfer gap {gap:.3e}",
                r.state_dim(),
                u.residual_iso,
                u.residual_coiso
            ),
        )
    })()));
    out.push(outcome("example-1/defect-projection", (|| {
        let rep = hankel::defect_structure(&one1, CHECK_TOL).map_err(err)?;
        ensure(
            rep.zero_block_ok && rep.coupling_ok && rep.delta_projection,
            format!("delta {}x{}, eigenvalues {:?}", rep.delta.nrows(), rep.delta.ncols(), rep.delta_eigenvalues),
        )
    })()));

    out.push(outcome("example-2/hankel-singular-values", (|| {
        let sv = hankel::hankel_singular_values(&hankel::hankel_causal(&two0, 0).map_err(err)?);
        let gap = dist_to(&sv, &[1.0, 0.8]);
        ensure(gap <= VALUE_TOL, format!("gap to (1, 0.8) {gap:.3e}"))
    })()));
    out.push(outcome("example-2/degree-q0", check_degree(&two0, (0, 2))));
    out.push(outcome("example-2/degree-q1", check_degree(&two1, (0, 1))));
    out.push(outcome("example-2/paraunitary", check_member(&two0)));
    out.push(outcome(
        "example-2/reference-realization-q0",
        check_reference_realization(&reference::example_two_realization_q0(), &two0, RealizationClass::CoIsometric),
    ));
    out.push(outcome(
        "example-2/reference-realization-q1",
        check_reference_realization(&reference::example_two_realization_q1(), &two1, RealizationClass::CoIsometric),
    ));
    out.push(outcome(
        "example-2/w-obs-q0",
        check_w_obs(&reference::example_two_realization_q0(), &real_rows(&[&[1.0, 0.0], &[0.0, 0.64]])),
    ));
    out.push(outcome(
        "example-2/w-obs-q1",
        check_w_obs(&reference::example_two_realization_q1(), &real_rows(&[&[0.64]])),
    ));
    out.push(outcome("example-2/normalized-gramians", (|| {
        let r = realization::minimal_realization(&two0, DEFAULT_RANK_TOL).map_err(err)?;
        let n = realization::gramian_normalize(&r, Role::CoIsometry, CHECK_TOL).map_err(err)?;
        let u = realization::check_unitary_realization(&n.realization, CHECK_TOL);
        let cont_gap = linalg::max_abs(&(&n.gramians.w_cont - linalg::eye(2)));
        let obs_gap = linalg::max_abs(&(&n.gramians.w_obs - real_rows(&[&[1.0, 0.0], &[0.0, 0.64]])));
        ensure(
            u.class.satisfies(Role::CoIsometry) && cont_gap <= VALUE_TOL && obs_gap <= VALUE_TOL,
            format!("class {}, W_cont gap {cont_gap:.3e}, W_obs gap {obs_gap:.3e}", u.class.label()),
        )
    })()));
    out.push(outcome("example-2/gramian-hankel-link", (|| {
        let r = realization::minimal_realization(&two0, DEFAULT_RANK_TOL).map_err(err)?;
        let g = realization::gramians(&r, CHECK_TOL).map_err(err)?;
        let mut ev: Vec<f64> = linalg::eigenvalues(&(&g.w_cont * &g.w_obs))
            .iter()
            .map(|l| l.re.max(0.0).sqrt())
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        let gap = dist_to(&ev, &[1.0, 0.8]);
        ensure(gap <= CHECK_TOL, format!("gap to (1, 0.8) {gap:.3e}"))
    })()));
    out.push(outcome("example-2/defect", (|| {
        let rep = hankel::defect_structure(&two0, CHECK_TOL).map_err(err)?;
        let gap = linalg::max_abs(&(&rep.delta - real_rows(&[&[0.36]])));
        ensure(
            rep.zero_block_ok && rep.coupling_ok && gap <= VALUE_TOL && !rep.delta_projection,
            format!("delta gap to 0.36 {gap:.3e}"),
        )
    })()));

    out.push(outcome("four-tap/reblockings", (|| {
        let mut count = 0;
        for q in [-1, -2, -3] {
            let f = ex.four_tap(q);
            check_member(&f)?;
            let deg = hankel::mcmillan_degree(&f, DEFAULT_RANK_TOL);
            for j in 1..=(1 - q) as usize {
                let g = reblock(&f, j).map_err(err)?;
                check_member(&g).map_err(|e| format!("q = {q}, j = {j}: {e}"))?;
                let dg = hankel::mcmillan_degree(&g, DEFAULT_RANK_TOL);
                if dg != deg {
                    return Err(format!("q = {q}, j = {j}: degree {dg} != {deg}"));
                }
                count += 1;
            }
        }
        Ok(format!("{count} reblockings members with unchanged degree"))
    })()));
    out
}
