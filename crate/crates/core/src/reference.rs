//! Worked-example data: small exact-rational systems used by the
//! `verify-examples` command and throughout the tests.

use crate::laurent::LaurentPoly;
use crate::linalg::{real_rows, CMat};
use crate::realization::Realization;

fn fifths(rows: &[&[f64]]) -> CMat {
    real_rows(rows) / num_complex::Complex64::new(5.0, 0.0)
}

fn tenths(rows: &[&[f64]]) -> CMat {
    real_rows(rows) / num_complex::Complex64::new(10.0, 0.0)
}

/// Coefficients of the square 2x2 three-tap example.
pub fn example_one_coeffs() -> Vec<CMat> {
    vec![
        fifths(&[&[2.0, 2.0], &[2.0, 2.0]]),
        fifths(&[&[0.0, 3.0], &[-3.0, 0.0]]),
        fifths(&[&[2.0, -2.0], &[-2.0, 2.0]]),
    ]
}

/// `z^q (z^-1 B_1 + z^-2 B_2 + z^-3 B_3)`, 2x2 and square-unitary on the circle.
pub fn example_one(q: i64) -> LaurentPoly {
    LaurentPoly::new(q, example_one_coeffs()).expect("static example")
}

/// `z^q (z^-1 (0, -3/5) + z^-2 (4/5, 0))`, a 1x2 co-isometry.
pub fn example_two(q: i64) -> LaurentPoly {
    LaurentPoly::new(
        q,
        vec![real_rows(&[&[0.0, -0.6]]), real_rows(&[&[0.8, 0.0]])],
    )
    .expect("static example")
}

/// The four-tap 2x2 instance used to illustrate degree-preserving reblocking.
pub fn four_tap_coeffs() -> Vec<CMat> {
    vec![
        tenths(&[&[3.0, 3.0], &[3.0, 3.0]]),
        fifths(&[&[2.0, -2.0], &[2.0, -2.0]]),
        fifths(&[&[-2.0, -2.0], &[2.0, 2.0]]),
        tenths(&[&[3.0, -3.0], &[-3.0, 3.0]]),
    ]
}

pub fn four_tap(q: i64) -> LaurentPoly {
    LaurentPoly::new(q, four_tap_coeffs()).expect("static example")
}

/// The minimal dimension-2 realization of [`example_one`] with `q = 1`.
pub fn example_one_realization() -> Realization {
    let r = fifths(&[
        &[-2.0, -2.0, 1.0, -4.0],
        &[2.0, 2.0, 4.0, -1.0],
        &[-4.0, 1.0, 2.0, 2.0],
        &[1.0, -4.0, 2.0, 2.0],
    ]);
    Realization::from_matrix(&r, 2).expect("static example")
}

/// The minimal realization of [`example_two`] with `q = 0` (state dimension 2).
pub fn example_two_realization_q0() -> Realization {
    let r = real_rows(&[&[0.0, 0.8, 0.0, -0.6], &[0.0, 0.0, 1.0, 0.0], &[1.0, 0.0, 0.0, 0.0]]);
    Realization::from_matrix(&r, 2).expect("static example")
}

/// The minimal realization of [`example_two`] with `q = 1` (state dimension 1).
pub fn example_two_realization_q1() -> Realization {
    let r = real_rows(&[&[0.0, 1.0, 0.0], &[0.8, 0.0, -0.6]]);
    Realization::from_matrix(&r, 1).expect("static example")
}
