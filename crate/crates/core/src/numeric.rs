//! Floating-point oracle: finite-difference application of operators and
//! sampled agreement checks against the symbolic engine.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diffop::{MatrixOp, MultiIndex};
use crate::expr::{Angle, Angles, Expr};
use crate::scalar::Scalar;
use crate::spinor::Spinor;

pub const DEFAULT_SEED: u64 = 20240611;
pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_STEP: f64 = 1e-5;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Pole margin on theta; phi is sampled over a full period.
pub const THETA_MARGIN: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SamplePlan {
    pub seed: u64,
    pub count: usize,
    pub fd_step: f64,
    pub tolerance: f64,
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan { seed: DEFAULT_SEED, count: DEFAULT_SAMPLES, fd_step: DEFAULT_STEP, tolerance: DEFAULT_TOLERANCE }
    }
}

impl SamplePlan {
    pub fn with_seed(seed: u64) -> Self {
        SamplePlan { seed, ..Default::default() }
    }

    /// Sample points with `theta` in `[0.1, pi - 0.1]` and `phi` in `[0, 2 pi)`.
    pub fn samples(&self) -> Vec<Angles> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.count)
            .map(|_| {
                let theta = rng.random_range(THETA_MARGIN..=PI - THETA_MARGIN);
                let phi = rng.random_range(0.0..TAU);
                Angles::new(theta, phi)
            })
            .collect()
    }
}

/// Step used for a derivative of total order `k`.
///
/// First derivatives use `step` itself; higher orders widen it so that
/// roundoff (about `eps / h^k`) stays below truncation (about `h^2`).
pub fn scaled_step(step: f64, order: u32) -> f64 {
    if order <= 1 {
        step
    } else {
        step.powf(3.0 / (order as f64 + 2.0))
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Central stencil for `d^k`: offsets (in units of `h`) and weights.
fn stencil(k: u32) -> Vec<(f64, f64)> {
    (0..=k)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            (k as f64 / 2.0 - j as f64, sign * binomial(k, j))
        })
        .collect()
}

/// Tensor-product central difference of `f` at `angles`.
pub fn fd_derivative(f: &Expr, idx: MultiIndex, angles: &Angles, step: f64) -> Complex64 {
    if idx.order() == 0 {
        return f.eval(angles);
    }
    let h = scaled_step(step, idx.order());
    let mut acc = Complex64::new(0.0, 0.0);
    for (dt, wt) in stencil(idx.theta) {
        let at = angles.shifted(Angle::Theta, dt * h);
        for (dp, wp) in stencil(idx.phi) {
            acc += f.eval(&at.shifted(Angle::Phi, dp * h)) * (wt * wp);
        }
    }
    acc / h.powi(idx.order() as i32)
}

/// Applies `op` to `s` numerically. Only evaluation of `s` and of the
/// operator's coefficient functions is used; no symbolic differentiation.
pub fn fd_apply(op: &MatrixOp, s: &Spinor, angles: &Angles, step: f64) -> [Complex64; 2] {
    assert!(step > 0.0, "finite-difference step must be positive");
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for (r, slot) in out.iter_mut().enumerate() {
        for c in 0..2 {
            for (idx, coeff) in op.entry(r, c).terms() {
                *slot += coeff.eval(angles) * fd_derivative(s.component(c), *idx, angles, step);
            }
        }
    }
    out
}

pub fn eval_spinor(s: &Spinor, angles: &Angles) -> [Complex64; 2] {
    [s.top.eval(angles), s.bottom.eval(angles)]
}

fn max_dev(a: &[Complex64; 2], b: &[Complex64; 2]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub samples: usize,
    pub tolerance: f64,
    /// Max over samples of `|fd_apply - eval(apply)|`.
    pub fd_deviation: f64,
    pub fd_pass: bool,
    /// Max over samples of `|eval(apply) - lambda * eval(s)|`, when an
    /// eigenvalue was given.
    pub eigen_deviation: Option<f64>,
    pub eigen_pass: Option<bool>,
    pub note: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.fd_pass && self.eigen_pass.unwrap_or(true)
    }
}

pub fn crosscheck(op: &MatrixOp, s: &Spinor, expected: Option<&Scalar>, plan: &SamplePlan) -> CheckReport {
    let symbolic = op.apply(s);
    let lambda = expected.map(Scalar::to_complex);
    let mut fd_deviation: f64 = 0.0;
    let mut eigen_deviation: f64 = 0.0;
    for angles in plan.samples() {
        let sym = eval_spinor(&symbolic, &angles);
        fd_deviation = fd_deviation.max(max_dev(&fd_apply(op, s, &angles, plan.fd_step), &sym));
        if let Some(l) = lambda {
            let v = eval_spinor(s, &angles);
            eigen_deviation = eigen_deviation.max(max_dev(&sym, &[v[0] * l, v[1] * l]));
        }
    }
    CheckReport {
        samples: plan.count,
        tolerance: plan.tolerance,
        fd_deviation,
        fd_pass: fd_deviation < plan.tolerance,
        eigen_deviation: lambda.map(|_| eigen_deviation),
        eigen_pass: lambda.map(|_| eigen_deviation < plan.tolerance),
        note: (plan.count == 0).then(|| "no samples".to_string()),
    }
}
