//! Test problems and the evaluation-counting oracle.

use core::fmt;
use core::str::FromStr;

use alloc::vec::Vec;

use crate::numeric::{NumericError, Precision, RealScalar, Scalar};

/// A function could not be evaluated at the requested point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainError {
    /// Division by zero inside `f` or `f'`.
    Pole,
    /// Logarithm of a non-positive real (or of complex zero).
    LogDomain,
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainError::Pole => f.write_str("pole"),
            DomainError::LogDomain => f.write_str("logarithm of a non-positive argument"),
        }
    }
}

impl core::error::Error for DomainError {}

/// A scalar function with an analytic derivative, evaluable on any
/// [`Scalar`].
pub trait Objective {
    fn f<S: Scalar>(&self, x: &S, env: &mut S::Env) -> Result<S, DomainError>;
    fn fprime<S: Scalar>(&self, x: &S, env: &mut S::Env) -> Result<S, DomainError>;

    /// Known simple zeros, if any. Roots that `S` cannot represent (complex
    /// roots on a real scalar) are skipped.
    fn roots<S: Scalar>(&self, _p: Precision) -> Vec<S> {
        Vec::new()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemId {
    /// `sin x - x/100`
    T1,
    /// `atan x`
    T2,
    /// `exp(sin x) - 1 - x/5`
    T3,
    /// `ln(1 - x + x^2) + 4 sin(1 - x)`
    T4,
    /// `z^3 - 1/z` on the complex plane
    B1,
    /// `exp(x - 1/5) - 1`, a problem whose eighth-order error constant is
    /// nonzero
    E2,
}

impl ProblemId {
    pub const ALL: [ProblemId; 6] = [
        ProblemId::T1,
        ProblemId::T2,
        ProblemId::T3,
        ProblemId::T4,
        ProblemId::B1,
        ProblemId::E2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemId::T1 => "t1",
            ProblemId::T2 => "t2",
            ProblemId::T3 => "t3",
            ProblemId::T4 => "t4",
            ProblemId::B1 => "b1",
            ProblemId::E2 => "e2",
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownProblem;

impl fmt::Display for UnknownProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown problem id (expected one of t1, t2, t3, t4, b1, e2)")
    }
}

impl core::error::Error for UnknownProblem {}

impl FromStr for ProblemId {
    type Err = UnknownProblem;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProblemId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or(UnknownProblem)
    }
}

/// A built-in test problem: function, derivative, known roots and the
/// canonical starting point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Problem {
    pub id: ProblemId,
    pub description: &'static str,
    /// Canonical starting point as a decimal literal.
    pub x0: &'static str,
    /// Exact roots as `(re, im)` decimal literals.
    pub roots: &'static [(&'static str, &'static str)],
    /// Only meaningful on complex scalars.
    pub complex: bool,
}

/// The five problems of the benchmark tables and the basin experiment.
pub fn builtin_suite() -> Vec<Problem> {
    [
        ProblemId::T1,
        ProblemId::T2,
        ProblemId::T3,
        ProblemId::T4,
        ProblemId::B1,
    ]
    .into_iter()
    .map(Problem::new)
    .collect()
}

impl Problem {
    pub fn new(id: ProblemId) -> Problem {
        match id {
            ProblemId::T1 => Problem {
                id,
                description: "f(x) = sin(x) - x/100",
                x0: "0.1",
                roots: &[("0", "0")],
                complex: false,
            },
            ProblemId::T2 => Problem {
                id,
                description: "f(x) = atan(x)",
                x0: "0.1",
                roots: &[("0", "0")],
                complex: false,
            },
            ProblemId::T3 => Problem {
                id,
                description: "f(x) = exp(sin(x)) - 1 - x/5",
                x0: "0.1",
                roots: &[("0", "0")],
                complex: false,
            },
            ProblemId::T4 => Problem {
                id,
                description: "f(x) = ln(1 - x + x^2) + 4 sin(1 - x)",
                x0: "1.1",
                roots: &[("1", "0")],
                complex: false,
            },
            ProblemId::B1 => Problem {
                id,
                description: "f(z) = z^3 - 1/z",
                x0: "2",
                roots: &[("1", "0"), ("-1", "0"), ("0", "1"), ("0", "-1")],
                complex: true,
            },
            ProblemId::E2 => Problem {
                id,
                description: "f(x) = exp(x - 0.2) - 1",
                x0: "0.3",
                roots: &[("0.2", "0")],
                complex: false,
            },
        }
    }

    /// Canonical starting point at precision `p`.
    pub fn start<S: Scalar>(&self, p: Precision) -> Result<S, NumericError> {
        let re = S::Real::parse_literal(self.x0, p)?;
        Ok(S::from_real(re))
    }

    /// The (single) real root of a real problem.
    pub fn real_root<R: RealScalar>(&self, p: Precision) -> Option<R> {
        self.roots::<R>(p).into_iter().next()
    }
}

fn nonzero<S: Scalar>(den: S) -> Result<S, DomainError> {
    if den.is_zero() {
        Err(DomainError::Pole)
    } else {
        Ok(den)
    }
}

impl Objective for Problem {
    fn f<S: Scalar>(&self, x: &S, env: &mut S::Env) -> Result<S, DomainError> {
        let p = x.precision();
        let int = |v| S::from_i64(v, p);
        Ok(match self.id {
            ProblemId::T1 => x.sin(env) - x.clone() / int(100),
            ProblemId::T2 => x.atan(env),
            ProblemId::T3 => x.sin(env).exp(env) - int(1) - x.clone() / int(5),
            ProblemId::T4 => {
                let q = int(1) - x.clone() + x.clone() * x.clone();
                let l = q.ln(env).ok_or(DomainError::LogDomain)?;
                l + int(4) * (int(1) - x.clone()).sin(env)
            }
            ProblemId::B1 => {
                let z = nonzero(x.clone())?;
                z.powi(3) - int(1) / z
            }
            ProblemId::E2 => (x.clone() - S::ratio(1, 5, p)).exp(env) - int(1),
        })
    }

    fn fprime<S: Scalar>(&self, x: &S, env: &mut S::Env) -> Result<S, DomainError> {
        let p = x.precision();
        let int = |v| S::from_i64(v, p);
        Ok(match self.id {
            ProblemId::T1 => x.cos(env) - S::ratio(1, 100, p),
            ProblemId::T2 => int(1) / nonzero(int(1) + x.clone() * x.clone())?,
            ProblemId::T3 => x.sin(env).exp(env) * x.cos(env) - S::ratio(1, 5, p),
            ProblemId::T4 => {
                let q = nonzero(int(1) - x.clone() + x.clone() * x.clone())?;
                (int(2) * x.clone() - int(1)) / q - int(4) * (int(1) - x.clone()).cos(env)
            }
            ProblemId::B1 => {
                let z2 = nonzero(x.clone() * x.clone())?;
                int(3) * z2.clone() + int(1) / z2
            }
            ProblemId::E2 => (x.clone() - S::ratio(1, 5, p)).exp(env),
        })
    }

    fn roots<S: Scalar>(&self, p: Precision) -> Vec<S> {
        self.roots
            .iter()
            .filter_map(|(re, im)| {
                let re = S::Real::parse_literal(re, p).ok()?;
                let im = S::Real::parse_literal(im, p).ok()?;
                S::from_parts(re, im)
            })
            .collect()
    }
}

/// Wraps an objective and counts every evaluation of `f` and `f'`.
///
/// Owns the scratch environment for transcendental functions, so one
/// oracle serves one trace.
pub struct CountingOracle<'a, F, S: Scalar> {
    inner: &'a F,
    env: S::Env,
    f_count: u64,
    fprime_count: u64,
}

impl<'a, F: Objective, S: Scalar> CountingOracle<'a, F, S> {
    pub fn new(inner: &'a F, p: Precision) -> Self {
        CountingOracle {
            inner,
            env: S::env(p),
            f_count: 0,
            fprime_count: 0,
        }
    }

    pub fn eval_f(&mut self, x: &S) -> Result<S, DomainError> {
        self.f_count += 1;
        self.inner.f(x, &mut self.env)
    }

    pub fn eval_fprime(&mut self, x: &S) -> Result<S, DomainError> {
        self.fprime_count += 1;
        self.inner.fprime(x, &mut self.env)
    }

    pub fn f_count(&self) -> u64 {
        self.f_count
    }

    pub fn fprime_count(&self) -> u64 {
        self.fprime_count
    }

    pub fn total(&self) -> u64 {
        self.f_count + self.fprime_count
    }

    pub fn objective(&self) -> &'a F {
        self.inner
    }

    pub fn env_mut(&mut self) -> &mut S::Env {
        &mut self.env
    }
}
