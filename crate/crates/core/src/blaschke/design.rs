//! Derivative-free design over the angle chart: cyclic coordinate descent
//! with a coarse periodic scan and golden-section refinement per coordinate,
//! plus random restarts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use super::chart::{decode_angles, random_angles, AngleParams};
use super::synth;
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Role};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignOptions {
    /// Maximum number of objective evaluations.
    pub budget: usize,
    pub seed: u64,
    /// Scan points per coordinate on the circle.
    pub grid: usize,
    /// Golden-section steps per coordinate.
    pub line_steps: usize,
    /// A sweep improving the value by less than this ends the current start.
    pub sweep_tol: f64,
}

impl Default for DesignOptions {
    fn default() -> Self {
        DesignOptions {
            budget: 5000,
            seed: 0,
            grid: 12,
            line_steps: 30,
            sweep_tol: 1e-13,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignResult {
    pub params: AngleParams,
    pub poly: LaurentPoly,
    pub value: f64,
    pub evaluations: usize,
}

struct Search<'a, F> {
    objective: &'a mut F,
    template: AngleParams,
    budget: usize,
    evaluations: usize,
    best: Option<(f64, Vec<f64>, LaurentPoly)>,
}

impl<F: FnMut(&LaurentPoly) -> f64> Search<'_, F> {
    fn exhausted(&self) -> bool {
        self.evaluations >= self.budget
    }

    /// Evaluates the objective at `angles`; `+inf` once the budget is spent.
    fn eval(&mut self, angles: &[f64]) -> f64 {
        if self.exhausted() {
            return f64::INFINITY;
        }
        let mut params = self.template.clone();
        params.angles = angles.iter().map(|a| a.rem_euclid(TAU)).collect();
        let poly = synth(&decode_angles(&params).expect("chart-sized angle vector"));
        self.evaluations += 1;
        let value = (self.objective)(&poly);
        let value = if value.is_nan() { f64::INFINITY } else { value };
        if self.best.as_ref().is_none_or(|(b, _, _)| value < *b) {
            self.best = Some((value, params.angles, poly));
        }
        value
    }

    /// Minimizes along coordinate `i`, returning the new value at `x`.
    fn line_search(&mut self, x: &mut [f64], i: usize, current: f64, grid: usize, steps: usize) -> f64 {
        let origin = x[i];
        let h = TAU / grid as f64;
        let at = |s: &mut Self, t: f64, x: &mut [f64]| {
            x[i] = origin + t;
            s.eval(x)
        };
        let mut best_t = 0.0;
        let mut best_v = current;
        for g in 1..grid {
            let t = g as f64 * h;
            let v = at(self, t, x);
            if v < best_v {
                best_t = t;
                best_v = v;
            }
        }
        let (mut lo, mut hi) = (best_t - h, best_t + h);
        let ratio = (5f64.sqrt() - 1.0) / 2.0;
        let mut a = hi - ratio * (hi - lo);
        let mut b = lo + ratio * (hi - lo);
        let mut fa = at(self, a, x);
        let mut fb = at(self, b, x);
        for _ in 0..steps {
            if self.exhausted() {
                break;
            }
            if fa < fb {
                hi = b;
                b = a;
                fb = fa;
                a = hi - ratio * (hi - lo);
                fa = at(self, a, x);
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + ratio * (hi - lo);
                fb = at(self, b, x);
            }
        }
        for (t, v) in [(a, fa), (b, fb)] {
            if v < best_v {
                best_t = t;
                best_v = v;
            }
        }
        x[i] = origin + best_t;
        best_v
    }
}

/// Minimizes `objective` over members of degree `d` with `gamma` anti-causal
/// factors. Every candidate is synthesized from the chart, so every iterate
/// lies in the class.
pub fn design_optimize<F>(
    mut objective: F,
    p: usize,
    m: usize,
    d: usize,
    gamma: usize,
    options: &DesignOptions,
) -> Result<DesignResult>
where
    F: FnMut(&LaurentPoly) -> f64,
{
    if options.budget == 0 {
        return Err(Error::InvalidParameter("budget must be at least one evaluation".into()));
    }
    if options.grid < 2 {
        return Err(Error::InvalidParameter("grid needs at least two points".into()));
    }
    let side = Role::for_dims(p, m);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let template = random_angles(side, p, m, d, gamma, &mut rng)?;
    decode_angles(&template)?;
    let mut search = Search {
        objective: &mut objective,
        template: template.clone(),
        budget: options.budget,
        evaluations: 0,
        best: None,
    };
    let mut start = template.angles;
    while !search.exhausted() {
        let mut x = start;
        let mut value = search.eval(&x);
        while !search.exhausted() {
            let before = value;
            for i in 0..x.len() {
                value = search.line_search(&mut x, i, value, options.grid, options.line_steps);
            }
            let gain = before - value;
            if gain.is_nan() || gain <= options.sweep_tol {
                break;
            }
        }
        start = random_angles(side, p, m, d, gamma, &mut rng)?.angles;
    }
    let evaluations = search.evaluations;
    let (value, angles, poly) = search.best.expect("budget allows one evaluation");
    let mut params = search.template;
    params.angles = angles;
    Ok(DesignResult {
        params,
        poly,
        value,
        evaluations,
    })
}
