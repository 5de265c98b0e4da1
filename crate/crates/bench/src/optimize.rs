//! Derivative-free and finite-difference optimizers behind one trait, with
//! seeded multi-start.

use std::sync::atomic::{AtomicU64, Ordering};

use argmin::core::{CostFunction, Executor, Gradient, State};
use argmin::solver::linesearch::MoreThuenteLineSearch;
use argmin::solver::neldermead::NelderMead;
use argmin::solver::quasinewton::BFGS;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

pub type Objective<'a> = &'a (dyn Fn(&[f64]) -> f64 + Sync);
/// Analytic gradient; optimizers fall back to central differences without one.
pub type GradientFn<'a> = &'a (dyn Fn(&[f64]) -> Vec<f64> + Sync);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: u64,
    pub evaluations: u64,
}

pub trait Optimizer: Send + Sync {
    fn name(&self) -> &'static str;
    fn minimize(&self, f: Objective, grad: Option<GradientFn>, x0: &[f64]) -> Result<OptResult>;
}

struct Problem<'a> {
    f: Objective<'a>,
    grad: Option<GradientFn<'a>>,
    step: f64,
    evals: &'a AtomicU64,
}

impl Problem<'_> {
    fn eval(&self, x: &[f64]) -> f64 {
        self.evals.fetch_add(1, Ordering::Relaxed);
        let v = (self.f)(x);
        if v.is_finite() {
            v
        } else {
            f64::MAX
        }
    }
}

impl CostFunction for Problem<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        Ok(self.eval(x))
    }
}

impl Gradient for Problem<'_> {
    type Param = Vec<f64>;
    type Gradient = Vec<f64>;

    /// The analytic gradient if given, else central differences.
    fn gradient(&self, x: &Vec<f64>) -> std::result::Result<Vec<f64>, argmin::core::Error> {
        if let Some(g) = self.grad {
            self.evals.fetch_add(1, Ordering::Relaxed);
            return Ok(g(x));
        }
        let mut g = vec![0.0; x.len()];
        let mut y = x.clone();
        for i in 0..x.len() {
            y[i] = x[i] + self.step;
            let up = self.eval(&y);
            y[i] = x[i] - self.step;
            let down = self.eval(&y);
            y[i] = x[i];
            g[i] = (up - down) / (2.0 * self.step);
        }
        Ok(g)
    }
}

fn problem<'a>(f: Objective<'a>, grad: Option<GradientFn<'a>>, evals: &'a AtomicU64) -> Problem<'a> {
    Problem { f, grad, step: 1e-6, evals }
}

/// Quasi-Newton with a More-Thuente line search.
#[derive(Clone, Debug)]
pub struct Bfgs {
    pub max_iters: u64,
    pub grad_tol: f64,
}

impl Default for Bfgs {
    fn default() -> Self {
        Bfgs { max_iters: 200, grad_tol: 1e-7 }
    }
}

impl Optimizer for Bfgs {
    fn name(&self) -> &'static str {
        "bfgs"
    }

    fn minimize(&self, f: Objective, grad: Option<GradientFn>, x0: &[f64]) -> Result<OptResult> {
        let evals = AtomicU64::new(0);
        let p = problem(f, grad, &evals);
        let start = p.eval(x0);
        let n = x0.len();
        let inv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        let solver = BFGS::new(MoreThuenteLineSearch::new()).with_tolerance_grad(self.grad_tol).map_err(opt_err)?;
        let run = Executor::new(p, solver)
            .configure(|s| s.param(x0.to_vec()).inv_hessian(inv).max_iters(self.max_iters))
            .run();
        // Line-search failures keep the best point seen so far.
        let (x, value, iterations) = match run {
            Ok(r) => {
                let st = r.state();
                (st.get_best_param().cloned().unwrap_or_else(|| x0.to_vec()), st.get_best_cost(), st.get_iter())
            }
            Err(_) => (x0.to_vec(), start, 0),
        };
        let (x, value) = if value <= start { (x, value) } else { (x0.to_vec(), start) };
        Ok(OptResult { x, value, iterations, evaluations: evals.load(Ordering::Relaxed) })
    }
}

#[derive(Clone, Debug)]
pub struct NelderMeadOpt {
    pub max_iters: u64,
    pub initial_step: f64,
    pub sd_tol: f64,
}

impl Default for NelderMeadOpt {
    fn default() -> Self {
        NelderMeadOpt { max_iters: 2000, initial_step: 0.3, sd_tol: 1e-9 }
    }
}

impl Optimizer for NelderMeadOpt {
    fn name(&self) -> &'static str {
        "nelder-mead"
    }

    fn minimize(&self, f: Objective, _grad: Option<GradientFn>, x0: &[f64]) -> Result<OptResult> {
        let evals = AtomicU64::new(0);
        let p = problem(f, None, &evals);
        let start = p.eval(x0);
        let mut simplex = vec![x0.to_vec()];
        for i in 0..x0.len() {
            let mut v = x0.to_vec();
            v[i] += self.initial_step;
            simplex.push(v);
        }
        let solver = NelderMead::new(simplex).with_sd_tolerance(self.sd_tol).map_err(opt_err)?;
        let r = Executor::new(p, solver).configure(|s| s.max_iters(self.max_iters)).run().map_err(opt_err)?;
        let st = r.state();
        let (x, value) = match st.get_best_param() {
            Some(x) if st.get_best_cost() <= start => (x.clone(), st.get_best_cost()),
            _ => (x0.to_vec(), start),
        };
        let iterations = st.get_iter();
        Ok(OptResult { x, value, iterations, evaluations: evals.load(Ordering::Relaxed) })
    }
}

fn opt_err(e: argmin::core::Error) -> BenchError {
    BenchError::Optimizer(e.to_string())
}

pub const OPTIMIZERS: &[&str] = &["bfgs", "nelder-mead"];

/// Registered optimizer by name, with an iteration cap.
pub fn optimizer(name: &str, max_iters: u64) -> Result<Box<dyn Optimizer>> {
    match name {
        "bfgs" => Ok(Box::new(Bfgs { max_iters, ..Bfgs::default() })),
        "nelder-mead" => Ok(Box::new(NelderMeadOpt { max_iters, ..NelderMeadOpt::default() })),
        other => Err(BenchError::Config(format!("unknown optimizer '{other}' (known: {})", OPTIMIZERS.join(", ")))),
    }
}

/// Best of `restarts` runs, restart `r` starting at `x0` plus uniform noise
/// of half-width `spread` drawn from stream `(seed, r)`. Restarts run on the
/// current rayon pool. The result is never worse than `x0` itself.
pub fn multistart(
    opt: &dyn Optimizer,
    f: Objective,
    grad: Option<GradientFn>,
    x0: &[f64],
    restarts: usize,
    spread: f64,
    seed: u64,
) -> Result<(OptResult, Vec<OptResult>)> {
    let runs = (0..restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let start: Vec<f64> =
                x0.iter().map(|v| if spread > 0.0 { v + rng.random_range(-spread..spread) } else { *v }).collect();
            opt.minimize(f, grad, &start)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = runs.iter().min_by(|a, b| a.value.total_cmp(&b.value)).cloned().expect("at least one restart");
    let base = f(x0);
    if !(best.value <= base) {
        best = OptResult { x: x0.to_vec(), value: base, iterations: 0, evaluations: 1 };
    }
    Ok((best, runs))
}
