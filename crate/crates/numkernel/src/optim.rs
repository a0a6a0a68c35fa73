//! Thin wrappers around argmin for closures over `Vec<f64>`.

use std::cell::RefCell;

use argmin::core::{CostFunction, Error, Executor, Gradient, State};
use argmin::solver::linesearch::MoreThuenteLineSearch;
use argmin::solver::neldermead::NelderMead;
use argmin::solver::quasinewton::LBFGS;

/// Result of a local minimization.
#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iters: u64,
}

struct Smooth<F> {
    f: F,
    // argmin asks for cost and gradient separately at the same point
    cache: RefCell<Option<(Vec<f64>, f64, Vec<f64>)>>,
}

impl<F: Fn(&[f64]) -> (f64, Vec<f64>)> Smooth<F> {
    fn eval(&self, p: &[f64]) -> (f64, Vec<f64>) {
        if let Some((x, v, g)) = self.cache.borrow().as_ref() {
            if x.as_slice() == p {
                return (*v, g.clone());
            }
        }
        let (v, g) = (self.f)(p);
        *self.cache.borrow_mut() = Some((p.to_vec(), v, g.clone()));
        (v, g)
    }
}

impl<F: Fn(&[f64]) -> (f64, Vec<f64>)> CostFunction for Smooth<F> {
    type Param = Vec<f64>;
    type Output = f64;
    fn cost(&self, p: &Vec<f64>) -> Result<f64, Error> {
        Ok(self.eval(p).0)
    }
}

impl<F: Fn(&[f64]) -> (f64, Vec<f64>)> Gradient for Smooth<F> {
    type Param = Vec<f64>;
    type Gradient = Vec<f64>;
    fn gradient(&self, p: &Vec<f64>) -> Result<Vec<f64>, Error> {
        Ok(self.eval(p).1)
    }
}

/// L-BFGS on a function returning value and gradient. Falls back to the
/// starting point if the solver fails before the first accepted step.
pub fn lbfgs(f: impl Fn(&[f64]) -> (f64, Vec<f64>), x0: Vec<f64>, max_iters: u64, grad_tol: f64) -> Minimum {
    let problem = Smooth { f, cache: RefCell::new(None) };
    let (v0, _) = problem.eval(&x0);
    let start = Minimum { x: x0.clone(), value: v0, iters: 0 };
    let run = || -> Result<Minimum, Error> {
        let solver = LBFGS::new(MoreThuenteLineSearch::new(), 20)
            .with_tolerance_grad(grad_tol)?
            .with_tolerance_cost(1e-16)?;
        let res = Executor::new(problem, solver).configure(|s| s.param(x0).max_iters(max_iters)).run()?;
        let st = res.state();
        let x = st.get_best_param().cloned().ok_or_else(|| Error::msg("no best param"))?;
        Ok(Minimum { x, value: st.get_best_cost(), iters: st.get_iter() })
    };
    match run() {
        Ok(m) if m.value <= start.value => m,
        _ => start,
    }
}

struct Plain<F>(F);

impl<F: Fn(&[f64]) -> f64> CostFunction for Plain<F> {
    type Param = Vec<f64>;
    type Output = f64;
    fn cost(&self, p: &Vec<f64>) -> Result<f64, Error> {
        Ok((self.0)(p))
    }
}

/// Nelder-Mead from an axis-aligned simplex of edge `step` around `x0`.
pub fn nelder_mead(f: impl Fn(&[f64]) -> f64, x0: Vec<f64>, step: f64, max_iters: u64, sd_tol: f64) -> Minimum {
    let v0 = f(&x0);
    let mut simplex = vec![x0.clone()];
    for i in 0..x0.len() {
        let mut p = x0.clone();
        p[i] += step;
        simplex.push(p);
    }
    let run = || -> Result<Minimum, Error> {
        let solver = NelderMead::new(simplex).with_sd_tolerance(sd_tol)?;
        let res = Executor::new(Plain(&f), solver).configure(|s| s.max_iters(max_iters)).run()?;
        let st = res.state();
        let x = st.get_best_param().cloned().ok_or_else(|| Error::msg("no best param"))?;
        Ok(Minimum { x, value: st.get_best_cost(), iters: st.get_iter() })
    };
    match run() {
        Ok(m) if m.value <= v0 => m,
        _ => Minimum { x: x0, value: v0, iters: 0 },
    }
}

/// Golden-section search for the minimum of a unimodal function on
/// [lo, hi]. Returns (argmin, min).
pub fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    // the endpoints matter for monotone functions
    let (fl, fh) = (f(lo), f(hi));
    if fl < fx && fl <= fh {
        (lo, fl)
    } else if fh < fx {
        (hi, fh)
    } else {
        (x, fx)
    }
}

/// Grid scan followed by golden-section refinement around the best cell.
pub fn grid_golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, cells: usize, tol: f64) -> (f64, f64) {
    let h = (hi - lo) / cells as f64;
    let mut best = (lo, f(lo));
    for i in 1..=cells {
        let x = lo + h * i as f64;
        let v = f(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    let a = (best.0 - h).max(lo);
    let b = (best.0 + h).min(hi);
    let refined = golden_min(&f, a, b, tol);
    if refined.1 <= best.1 {
        refined
    } else {
        best
    }
}
