//! Runs a method from a starting point and estimates the order of
//! convergence from the resulting trace.

use core::fmt;

use alloc::vec::Vec;

use crate::methods::{Method, MethodId, Outcome, StepError};
use crate::numeric::{Precision, RealScalar, Scalar};
use crate::problem::{CountingOracle, Objective};

#[derive(Clone, Debug, PartialEq)]
pub enum Termination {
    MaxIters,
    /// `|f(x_n)|` fell below the residual tolerance.
    Residual,
    /// `f` vanished exactly at the last iterate.
    AtRoot,
    StepError(StepError),
    /// `|x_n|` exceeded the divergence bound or became non-finite.
    Diverged,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Termination::MaxIters => f.write_str("iteration limit reached"),
            Termination::Residual => f.write_str("residual below tolerance"),
            Termination::AtRoot => f.write_str("exact root reached"),
            Termination::StepError(e) => write!(f, "step failed: {e}"),
            Termination::Diverged => f.write_str("diverged"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunPolicy<R> {
    pub max_iters: usize,
    pub residual_tol: Option<R>,
    pub divergence_bound: R,
}

impl<R: RealScalar> RunPolicy<R> {
    /// No residual stopping, bound `10^10`.
    pub fn new(max_iters: usize, p: Precision) -> Self {
        RunPolicy {
            max_iters: max_iters.max(1),
            residual_tol: None,
            divergence_bound: R::pow10(10, p),
        }
    }

    /// Three iterations, as in the benchmark tables.
    pub fn benchmark(p: Precision) -> Self {
        Self::new(3, p)
    }
}

/// Iterates `x_0 .. x_N` with errors against a known root.
#[derive(Clone, Debug)]
pub struct Trace<S: Scalar> {
    pub method: MethodId,
    pub iterates: Vec<S>,
    /// `|x_n - x*|`, aligned with `iterates`; empty without a root.
    pub errors: Vec<S::Real>,
    pub f_evals: u64,
    pub fprime_evals: u64,
    pub termination: Termination,
}

impl<S: Scalar> Trace<S> {
    pub fn steps(&self) -> usize {
        self.iterates.len() - 1
    }

    pub fn last(&self) -> &S {
        self.iterates.last().expect("trace holds x0")
    }

    pub fn evals(&self) -> u64 {
        self.f_evals + self.fprime_evals
    }

    pub fn coc(&self) -> Result<f64, RateError> {
        let p = self.iterates[0].precision();
        coc(&self.errors, admissible_floor(p))
    }

    pub fn acoc(&self) -> Result<f64, RateError> {
        acoc(&self.iterates)
    }
}

/// Applies `method` up to `policy.max_iters` times from `x0`.
pub fn iterate<F: Objective, S: Scalar>(
    f: &F,
    method: &Method,
    x0: S,
    root: Option<&S>,
    policy: &RunPolicy<S::Real>,
) -> Trace<S> {
    let p = x0.precision();
    let mut oracle = CountingOracle::<F, S>::new(f, p);
    let error = |x: &S| root.map(|r| (x.clone() - r.clone()).modulus());
    let mut trace = Trace {
        method: method.id,
        errors: error(&x0).into_iter().collect(),
        iterates: alloc::vec![x0],
        f_evals: 0,
        fprime_evals: 0,
        termination: Termination::MaxIters,
    };
    let push = |trace: &mut Trace<S>, x: S| {
        if let Some(e) = error(&x) {
            trace.errors.push(e);
        }
        trace.iterates.push(x);
    };
    for _ in 0..policy.max_iters {
        let x = trace.last().clone();
        let outcome = method.step(&mut oracle, &x);
        trace.f_evals = oracle.f_count();
        trace.fprime_evals = oracle.fprime_count();
        match outcome {
            Err(e) => {
                trace.termination = Termination::StepError(e);
                break;
            }
            Ok(Outcome::AtRoot(r)) => {
                // an intermediate point of the step landed on the root
                if !(r.clone() - x).is_zero() {
                    push(&mut trace, r);
                }
                trace.termination = Termination::AtRoot;
                break;
            }
            Ok(Outcome::Next(next)) => {
                let blown = !next.is_finite() || next.modulus() > policy.divergence_bound;
                push(&mut trace, next);
                if blown {
                    trace.termination = Termination::Diverged;
                    break;
                }
                if let Some(tol) = &policy.residual_tol {
                    let fx = oracle.eval_f(trace.last());
                    trace.f_evals = oracle.f_count();
                    if matches!(fx, Ok(v) if v.modulus() < *tol) {
                        trace.termination = Termination::Residual;
                        break;
                    }
                }
            }
        }
    }
    trace
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateError {
    InsufficientData,
    ExactRootReached,
}

impl fmt::Display for RateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RateError::InsufficientData => f.write_str("not enough distinct data points"),
            RateError::ExactRootReached => f.write_str("an error is exactly zero"),
        }
    }
}

impl core::error::Error for RateError {}

/// Errors at or below this are too close to rounding to enter a rate
/// estimate: `10^(-digits + 50)`, with a smaller margin at low precision.
pub fn admissible_floor<R: RealScalar>(p: Precision) -> R {
    let d = p.decimal_digits() as i64;
    R::pow10(-d + (d / 4).min(50), p)
}

/// `ln(e3/e2) / ln(e2/e1)` over the last three errors above `floor`.
pub fn coc<R: RealScalar>(errors: &[R], floor: R) -> Result<f64, RateError> {
    let usable: Vec<&R> = errors.iter().filter(|e| **e > floor).collect();
    if usable.len() < 3 {
        return Err(if errors.iter().any(|e| e.is_zero()) {
            RateError::ExactRootReached
        } else {
            RateError::InsufficientData
        });
    }
    let l: Vec<f64> = usable[usable.len() - 3..]
        .iter()
        .map(|e| e.ln_abs_f64())
        .collect();
    let den = l[1] - l[0];
    if den == 0.0 {
        return Err(RateError::InsufficientData);
    }
    Ok((l[2] - l[1]) / den)
}

/// `ln|d3/d2| / ln|d2/d1|` with `d_k` the last three differences of
/// consecutive iterates.
pub fn acoc<S: Scalar>(iterates: &[S]) -> Result<f64, RateError> {
    if iterates.len() < 4 {
        return Err(RateError::InsufficientData);
    }
    let w = &iterates[iterates.len() - 4..];
    let mut l = [0.0; 3];
    for k in 0..3 {
        let d = (w[k + 1].clone() - w[k].clone()).modulus();
        if d.is_zero() {
            return Err(RateError::InsufficientData);
        }
        l[k] = d.ln_abs_f64();
    }
    let den = l[1] - l[0];
    if den == 0.0 {
        return Err(RateError::InsufficientData);
    }
    Ok((l[2] - l[1]) / den)
}
