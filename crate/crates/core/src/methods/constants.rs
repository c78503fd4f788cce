use core::fmt;

use crate::numeric::{nth_derivative_fd, BigEnv, BigReal, DiffError, RealScalar, Scalar};
use crate::problem::{DomainError, Objective};

/// `c_k = f^(k)(x*) / (k! f'(x*))` and the predicted leading error
/// coefficients of the fourth- and eighth-order schemes.
#[derive(Clone, Debug)]
pub struct ErrorConstants {
    pub c2: BigReal,
    pub c3: BigReal,
    pub c4: BigReal,
    /// `-c2 c3 + c2^3 (5/2 + phi''(0))`
    pub r4: BigReal,
    /// `c2^2 c3 (29 c2^3 + 4 c2 c3 - 4 c4) / 4`
    pub r8: BigReal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstantsError {
    NotSimpleRoot,
    Eval(DiffError<DomainError>),
}

impl fmt::Display for ConstantsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstantsError::NotSimpleRoot => f.write_str("f'(root) = 0, root is not simple"),
            ConstantsError::Eval(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ConstantsError {}

impl From<DiffError<DomainError>> for ConstantsError {
    fn from(e: DiffError<DomainError>) -> Self {
        ConstantsError::Eval(e)
    }
}

/// Estimates `c2, c3, c4` at `root` by central differences of `f` and
/// combines them into `R4`, `R8`. The step for order `k` is
/// `10^(-digits/(k+2))`, balancing `O(h^2)` truncation against
/// `O(eps/h^k)` cancellation.
pub fn error_constants<F: Objective>(
    f: &F,
    root: &BigReal,
    phi_second: &BigReal,
) -> Result<ErrorConstants, ConstantsError> {
    let p = root.precision();
    let digits = p.decimal_digits() as i64;
    let mut env = BigEnv::new();
    let fp = f
        .fprime(root, &mut env)
        .map_err(|e| ConstantsError::Eval(DiffError::Eval(e)))?;
    if fp.is_zero() {
        return Err(ConstantsError::NotSimpleRoot);
    }
    let mut c = |k: usize, factorial: i64| -> Result<BigReal, ConstantsError> {
        let h = BigReal::pow10(-digits / (k as i64 + 2), p);
        let d = nth_derivative_fd(|t: &BigReal| f.f(t, &mut env), k, root, &h)?;
        Ok(d / (BigReal::from_i64(factorial, p) * fp.clone()))
    };
    let c2 = c(2, 2)?;
    let c3 = c(3, 6)?;
    let c4 = c(4, 24)?;
    let int = |v| BigReal::from_i64(v, p);
    let c2_cubed = c2.powi(3);
    let r4 = -(c2.clone() * c3.clone()) + c2_cubed.clone() * (BigReal::ratio(5, 2, p) + phi_second.clone());
    let r8 = c2.powi(2)
        * c3.clone()
        * (int(29) * c2_cubed + int(4) * c2.clone() * c3.clone() - int(4) * c4.clone())
        / int(4);
    Ok(ErrorConstants { c2, c3, c4, r4, r8 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Precision;
    use crate::problem::{Problem, ProblemId};

    /// `e^x - 1`
    struct ExpM1;

    impl Objective for ExpM1 {
        fn f<S: Scalar>(&self, x: &S, env: &mut S::Env) -> Result<S, DomainError> {
            Ok(x.exp(env) - S::one(x.precision()))
        }
        fn fprime<S: Scalar>(&self, x: &S, env: &mut S::Env) -> Result<S, DomainError> {
            Ok(x.exp(env))
        }
    }

    /// `x^2`, double root at 0.
    struct Square;

    impl Objective for Square {
        fn f<S: Scalar>(&self, x: &S, _: &mut S::Env) -> Result<S, DomainError> {
            Ok(x.clone() * x.clone())
        }
        fn fprime<S: Scalar>(&self, x: &S, _: &mut S::Env) -> Result<S, DomainError> {
            Ok(S::from_i64(2, x.precision()) * x.clone())
        }
    }

    #[test]
    fn exp_minus_one_at_zero() {
        let p = Precision::BENCHMARK;
        let close = |a: &BigReal, n: i64, d: i64| {
            (a.clone() - BigReal::ratio(n, d, p)).abs() < BigReal::pow10(-500, p)
        };
        let k = error_constants(&ExpM1, &BigReal::zero(p), &BigReal::ratio(-5, 2, p)).unwrap();
        assert!(close(&k.c2, 1, 2));
        assert!(close(&k.c3, 1, 6));
        assert!(close(&k.c4, 1, 24));
        assert!(close(&k.r8, 91, 2304));
        assert!(close(&k.r4, -1, 12));
    }

    #[test]
    fn shifted_problem_matches_unshifted_constants() {
        let p = Precision::BENCHMARK;
        let e2 = Problem::new(ProblemId::E2);
        let root: BigReal = e2.real_root(p).unwrap();
        let k = error_constants(&e2, &root, &BigReal::ratio(-5, 2, p)).unwrap();
        assert!((k.r8 - BigReal::ratio(91, 2304, p)).abs() < BigReal::pow10(-500, p));
    }

    #[test]
    fn odd_problem_has_zero_r8() {
        let p = Precision::BENCHMARK;
        let t1 = Problem::new(ProblemId::T1);
        let k = error_constants(&t1, &BigReal::zero(p), &BigReal::ratio(-5, 2, p)).unwrap();
        assert!(k.c2.abs() < BigReal::pow10(-500, p));
        assert!(k.r8.abs() < BigReal::pow10(-500, p));
    }

    #[test]
    fn double_root_is_rejected() {
        let p = Precision::new(50).unwrap();
        let r = error_constants(&Square, &BigReal::zero(p), &BigReal::zero(p));
        assert_eq!(r.unwrap_err(), ConstantsError::NotSimpleRoot);
    }
}
