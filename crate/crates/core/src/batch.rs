//! Batch evaluation over independent cases: data-parallel with the
//! `parallel` feature, sequential otherwise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blaschke::{self, BPProduct};
use crate::error::Result;
use crate::hankel::{self, DEFAULT_RANK_TOL};
use crate::laurent::{unit_circle_point, LaurentPoly};
use crate::linalg;

pub fn map_seq<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_par<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// [`map_par`] when built with `parallel`, [`map_seq`] otherwise.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_par(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_seq(items, f)
    }
}

/// One random product to synthesize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurveyCase {
    pub p: usize,
    pub m: usize,
    pub d: usize,
    pub gamma: usize,
    pub seed: u64,
}

impl SurveyCase {
    pub fn product(&self) -> Result<BPProduct> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        blaschke::random_product(self.p, self.m, self.d, self.gamma, &mut rng)
    }
}

/// Deterministic cases with `1 <= p, m <= max_dim`, `d <= max_degree` and `gamma <= d`.
pub fn survey_cases(count: usize, max_dim: usize, max_degree: usize, seed: u64) -> Vec<SurveyCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d = rng.random_range(0..=max_degree);
            SurveyCase {
                p: rng.random_range(1..=max_dim),
                m: rng.random_range(1..=max_dim),
                d,
                gamma: rng.random_range(0..=d),
                seed: rng.random(),
            }
        })
        .collect()
}

/// Checks on one synthesized member.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyResult {
    pub case: SurveyCase,
    pub poly: LaurentPoly,
    pub defect: f64,
    pub hankel_member: bool,
    pub hankel_residual: f64,
    /// Largest disagreement of the three product forms with the expansion.
    pub form_gap: f64,
    pub degree: usize,
}

pub fn run_case(case: &SurveyCase) -> Result<SurveyResult> {
    let prod = case.product()?;
    let poly = blaschke::synth(&prod);
    let defect = poly.unitary_defect(poly.default_samples().max(64));
    let check = hankel::is_paraunitary_hankel(&poly, 1e-9)?;
    let mut form_gap: f64 = 0.0;
    for j in 0..16 {
        let z = unit_circle_point(j, 16);
        let direct = poly.eval(z)?;
        for form in blaschke::synth_all_forms(&prod, z)? {
            form_gap = form_gap.max(linalg::max_abs(&(form - &direct)));
        }
    }
    Ok(SurveyResult {
        case: *case,
        degree: hankel::mcmillan_degree(&poly, DEFAULT_RANK_TOL),
        poly,
        defect,
        hankel_member: check.member,
        hankel_residual: check.residual(),
        form_gap,
    })
}

pub fn run_survey_seq(cases: &[SurveyCase]) -> Result<Vec<SurveyResult>> {
    map_seq(cases, run_case).into_iter().collect()
}

#[cfg(feature = "parallel")]
pub fn run_survey_par(cases: &[SurveyCase]) -> Result<Vec<SurveyResult>> {
    map_par(cases, run_case).into_iter().collect()
}

pub fn run_survey(cases: &[SurveyCase]) -> Result<Vec<SurveyResult>> {
    map(cases, run_case).into_iter().collect()
}
