//! Newton, Newton-Secant and the weighted two- and three-point schemes
//! built on top of them.

use crate::numeric::Scalar;
use crate::problem::{CountingOracle, Objective};

use super::{checked_div, head, proceed, Flow, Head, Outcome, StepError, WeightPair};

/// `(f_u - f_v) / (u - v)`
pub fn divided_difference<S: Scalar>(f_u: &S, f_v: &S, u: &S, v: &S) -> Result<S, StepError> {
    checked_div(
        f_u.clone() - f_v.clone(),
        u.clone() - v.clone(),
        StepError::DegenerateNodes,
    )
}

pub fn newton_step<F: Objective, S: Scalar>(
    o: &mut CountingOracle<'_, F, S>,
    x: &S,
) -> Result<Outcome<S>, StepError> {
    let fx = o.eval_f(x)?;
    if fx.is_zero() {
        return Ok(Outcome::AtRoot(x.clone()));
    }
    let fpx = o.eval_fprime(x)?;
    let dx = checked_div(fx, fpx, StepError::DerivativeZero)?;
    Ok(Outcome::Next(x.clone() - dx))
}

/// `z = x - f(x)^2 / ((f(x) - f(y)) f'(x))`
fn secant_point<S: Scalar>(x: &S, h: &Head<S>) -> Result<S, StepError> {
    let den = h.fx.clone() - h.fy.clone();
    if den.is_zero() {
        return Err(StepError::SecantDegenerate);
    }
    Ok(x.clone() - h.fx.clone() * h.fx.clone() / (den * h.fpx.clone()))
}

pub fn newton_secant_step<F: Objective, S: Scalar>(
    o: &mut CountingOracle<'_, F, S>,
    x: &S,
) -> Result<Outcome<S>, StepError> {
    let h = proceed!(head(o, x));
    Ok(Outcome::Next(secant_point(x, &h)?))
}

/// Head values, the Newton-Secant point and the fourth-order point.
type FourthOrder<S> = (Head<S>, S, S);

/// `x, y, z` and the fourth-order point, shared by both weighted schemes.
fn fourth_order_point<F: Objective, S: Scalar>(
    o: &mut CountingOracle<'_, F, S>,
    x: &S,
    w: &WeightPair,
) -> Result<Flow<FourthOrder<S>, S>, StepError> {
    let h = match head(o, x)? {
        Flow::Go(h) => h,
        Flow::Stop(out) => return Ok(Flow::Stop(out)),
    };
    let z = secant_point(x, &h)?;
    let t = h.fy.clone() / h.fx.clone();
    let diff = h.fx.clone() - h.fy.clone();
    let one = S::one(x.precision());
    let bracket = one.clone() - h.fx.clone() / diff.clone() * (one + h.fy.clone() / diff);
    let phi = w.phi.eval(&t, o.env_mut())?;
    let next = z.clone() - bracket * (h.fx.clone() / h.fpx.clone()) * phi;
    Ok(Flow::Go((h, z, next)))
}

/// One step of the optimal two-point method: `y`, the Newton-Secant point
/// `z`, then a `phi`-weighted correction.
pub fn two_point4_step<F: Objective, S: Scalar>(
    o: &mut CountingOracle<'_, F, S>,
    x: &S,
    w: &WeightPair,
) -> Result<Outcome<S>, StepError> {
    let (_, _, next) = proceed!(fourth_order_point(o, x, w));
    Ok(Outcome::Next(next))
}

/// Cubic model of `f(z)` built from `f(x)`, `f'(x)`, `f(y)` and `f(v)`,
/// replacing an evaluation of `f` at `z`.
#[allow(clippy::too_many_arguments)]
pub fn approx_fz<S: Scalar>(
    fx: &S,
    fy: &S,
    fv: &S,
    fpx: &S,
    x: &S,
    _y: &S,
    z: &S,
    v: &S,
) -> Result<S, StepError> {
    if fx.is_zero() {
        return Err(StepError::AtRoot);
    }
    let fvx = divided_difference(fv, fx, v, x)?;
    let w = fy.clone() * fpx.clone() * fpx.clone() / (fx.clone() * fx.clone());
    let dz = z.clone() - x.clone();
    let dv = v.clone() - x.clone();
    let cubic = (fvx - fpx.clone() - w.clone() * dv.clone()) * dz.powi(3) / (dv.clone() * dv);
    Ok(fx.clone() + fpx.clone() * dz.clone() + w * dz.powi(2) + cubic)
}

/// Linear model of `f'(v)` from divided differences through `x, y, z`.
#[allow(clippy::too_many_arguments)]
pub fn approx_fprime_v<S: Scalar>(
    fz_approx: &S,
    fy: &S,
    fx: &S,
    fpx: &S,
    x: &S,
    y: &S,
    z: &S,
    v: &S,
) -> Result<S, StepError> {
    let fzy = divided_difference(fz_approx, fy, z, y)?;
    let fzx = divided_difference(fz_approx, fx, z, x)?;
    let zx = z.clone() - x.clone();
    let slope = (fzy + (fzx - fpx.clone()) * (z.clone() - y.clone()) / zx.clone() - fpx.clone()) / zx;
    Ok(fpx.clone() + slope * (v.clone() - x.clone()))
}

/// One step of the optimal three-point method: the two-point scheme gives
/// `v`, then a `psi`-weighted Newton step at `v` with `f'(v)` interpolated.
pub fn three_point8_step<F: Objective, S: Scalar>(
    o: &mut CountingOracle<'_, F, S>,
    x: &S,
    w: &WeightPair,
) -> Result<Outcome<S>, StepError> {
    let (h, z, v) = proceed!(fourth_order_point(o, x, w));
    let fv = o.eval_f(&v)?;
    if fv.is_zero() {
        return Ok(Outcome::AtRoot(v));
    }
    let Head { fx, fpx, y, fy } = h;
    let fz = approx_fz(&fx, &fy, &fv, &fpx, x, &y, &z, &v)?;
    let fpv = approx_fprime_v(&fz, &fy, &fx, &fpx, x, &y, &z, &v)?;
    let s = fv.clone() / fx;
    let psi = w.psi.eval(&s, o.env_mut())?;
    let dv = checked_div(fv, fpv, StepError::ApproxDerivativeZero)?;
    Ok(Outcome::Next(v - dv * psi))
}

#[cfg(test)]
mod tests {
    use super::super::testing::{Linear, Sqrt2};
    use super::super::{builtin_weight_pairs, WeightFn};
    use super::*;
    use crate::numeric::{BigReal, Precision, RealScalar};

    fn p() -> Precision {
        Precision::BENCHMARK
    }

    fn q(n: i64, d: i64) -> BigReal {
        BigReal::ratio(n, d, p())
    }

    fn close(a: &BigReal, b: &BigReal, digits: i64) -> bool {
        (a.clone() - b.clone()).abs() < BigReal::pow10(-digits, p())
    }

    #[test]
    fn divided_difference_cases() {
        let (u, v) = (1.0, 3.0);
        assert_eq!(divided_difference(&(u * u), &(v * v), &u, &v), Ok(4.0));
        assert_eq!(
            divided_difference(&(2.0 * u + 7.0), &(2.0 * 0.25 + 7.0), &u, &0.25),
            Ok(2.0)
        );
        assert_eq!(
            divided_difference(&1.0, &1.0, &2.0, &2.0),
            Err(StepError::DegenerateNodes)
        );
    }

    #[test]
    fn newton_cases() {
        let mut o = CountingOracle::<_, BigReal>::new(&Sqrt2, p());
        let x1 = newton_step(&mut o, &q(3, 2)).unwrap().value();
        assert!(close(&x1, &q(17, 12), 1790));
        assert_eq!(o.total(), 2);

        let mut o = CountingOracle::<_, f64>::new(&Linear, Precision::DOUBLE);
        assert_eq!(newton_step(&mut o, &-4.5), Ok(Outcome::Next(2.0)));

        let mut o = CountingOracle::<_, f64>::new(&Sqrt2, Precision::DOUBLE);
        assert_eq!(newton_step(&mut o, &0.0), Err(StepError::DerivativeZero));
    }

    #[test]
    fn newton_secant_cases() {
        let mut o = CountingOracle::<_, BigReal>::new(&Sqrt2, p());
        let x1 = newton_secant_step(&mut o, &q(3, 2)).unwrap().value();
        assert!(close(&x1, &q(99, 70), 1790));
        assert_eq!((o.f_count(), o.fprime_count()), (2, 1));

        let mut o = CountingOracle::<_, f64>::new(&Linear, Precision::DOUBLE);
        assert_eq!(newton_secant_step(&mut o, &5.0).unwrap().value(), 2.0);

        let mut o = CountingOracle::<_, f64>::new(&Linear, Precision::DOUBLE);
        assert_eq!(newton_secant_step(&mut o, &2.0), Ok(Outcome::AtRoot(2.0)));
        assert_eq!(o.total(), 1);
    }

    #[test]
    fn two_point_cases() {
        let p1 = &builtin_weight_pairs()[0];
        let mut o = CountingOracle::<_, BigReal>::new(&Sqrt2, p());
        let x1 = two_point4_step(&mut o, &q(3, 2), p1).unwrap().value();
        assert!(close(&x1, &q(107_769_893, 76_204_800), 1790));
        assert_eq!(o.total(), 3);

        let mut o = CountingOracle::<_, f64>::new(&Linear, Precision::DOUBLE);
        assert_eq!(two_point4_step(&mut o, &-1.0, p1).unwrap().value(), 2.0);
    }

    #[test]
    fn weight_pole_is_reported() {
        // x^2 - 2 from x = 2: y = 3/2 and t = 1/8 exactly
        let pole = WeightPair::new(
            "pole",
            WeightFn::Rational {
                num: alloc::vec![(1, 1)],
                den: alloc::vec![(-1, 8), (1, 1)],
            },
            builtin_weight_pairs()[0].psi.clone(),
        );
        let mut o = CountingOracle::<_, f64>::new(&Sqrt2, Precision::DOUBLE);
        assert_eq!(two_point4_step(&mut o, &2.0, &pole), Err(StepError::WeightPole));
    }

    fn sub_values() -> [BigReal; 4] {
        // x = 3/2 on x^2 - 2: y = 17/12, z = 99/70, v from the P1 two-point step
        [q(3, 2), q(17, 12), q(99, 70), q(107_769_893, 76_204_800)]
    }

    #[test]
    fn approx_fz_matches_direct_evaluation() {
        let [x, y, z, v] = sub_values();
        let f = |t: &BigReal| t.clone() * t.clone() - BigReal::from_i64(2, p());
        let fz = approx_fz(&f(&x), &f(&y), &f(&v), &(q(2, 1) * x.clone()), &x, &y, &z, &v).unwrap();
        assert!(close(&f(&z), &q(1, 4900), 1790));
        assert!((fz - q(1, 4900)).abs() < BigReal::pow10(-5, p()));
        assert_eq!(
            approx_fz(&f(&x), &f(&y), &f(&x), &q(3, 1), &x, &y, &z, &x),
            Err(StepError::DegenerateNodes)
        );
        assert_eq!(
            approx_fz(&q(0, 1), &f(&y), &f(&v), &q(3, 1), &x, &y, &z, &v),
            Err(StepError::AtRoot)
        );
    }

    #[test]
    fn approximations_are_exact_on_linear_f() {
        let f = |t: f64| 3.0 * t - 6.0;
        let (x, y, z, v) = (5.0, 4.0, 3.5, 2.5);
        let fz = approx_fz(&f(x), &f(y), &f(v), &3.0, &x, &y, &z, &v).unwrap();
        // y here is not the Newton point, so the quadratic term survives;
        // with f(y) = 0 the model reduces to the line
        let fz_lin = approx_fz(&f(x), &0.0, &f(v), &3.0, &x, &2.0, &z, &v).unwrap();
        assert!((fz_lin - f(z)).abs() < 1e-12);
        assert!(fz.is_finite());
        let fpv = approx_fprime_v(&f(z), &f(y), &f(x), &3.0, &x, &y, &z, &v).unwrap();
        assert!((fpv - 3.0).abs() < 1e-12);
        assert_eq!(
            approx_fprime_v(&f(z), &f(y), &f(x), &3.0, &x, &z, &z, &v),
            Err(StepError::DegenerateNodes)
        );
    }

    /// Sub-values of one P1 step on `f` from `x`, with `f(z)` exact.
    fn fprime_v_error(f: impl Fn(&BigReal) -> BigReal, fp: impl Fn(&BigReal) -> BigReal, x: BigReal) -> f64 {
        let fx = f(&x);
        let fpx = fp(&x);
        let y = x.clone() - fx.clone() / fpx.clone();
        let fy = f(&y);
        let z = x.clone() - fx.clone() * fx.clone() / ((fx.clone() - fy.clone()) * fpx.clone());
        let t = fy.clone() / fx.clone();
        let diff = fx.clone() - fy.clone();
        let one = BigReal::one(x.precision());
        let bracket = one.clone() - fx.clone() / diff.clone() * (one + fy.clone() / diff);
        let phi = WeightFn::Phi1
            .eval(&t, &mut crate::numeric::BigEnv::new())
            .unwrap();
        let v = z.clone() - bracket * (fx.clone() / fpx.clone()) * phi;
        let fpv = approx_fprime_v(&f(&z), &fy, &fx, &fpx, &x, &y, &z, &v).unwrap();
        let exact = fp(&v);
        ((fpv - exact.clone()) / exact).abs().to_f64()
    }

    #[test]
    fn approx_fprime_v_against_direct_derivative() {
        let pp = Precision::new(200).unwrap();
        let two = BigReal::from_i64(2, pp);
        // exact for quadratics: 2v up to rounding
        for x0 in ["1.5", "1.42", "1.4143"] {
            let x = BigReal::parse_literal(x0, pp).unwrap();
            let rel = fprime_v_error(
                |t| t.clone() * t.clone() - two.clone(),
                |t| two.clone() * t.clone(),
                x,
            );
            assert!(rel < 1e-190, "{x0}: {rel}");
        }
        // shrinks as x approaches the root otherwise: e^x - 2
        let mut env = crate::numeric::BigEnv::new();
        let mut env2 = crate::numeric::BigEnv::new();
        let env = core::cell::RefCell::new(&mut env);
        let env2 = core::cell::RefCell::new(&mut env2);
        let mut last = f64::INFINITY;
        for x0 in ["1", "0.75", "0.7", "0.6932"] {
            let x = BigReal::parse_literal(x0, pp).unwrap();
            let rel = fprime_v_error(
                |t| t.exp(&mut env.borrow_mut()) - two.clone(),
                |t| t.exp(&mut env2.borrow_mut()),
                x,
            );
            assert!(rel < last, "{x0}: {rel}");
            last = rel;
        }
        assert!(last < 1e-8, "{last}");
    }

    #[test]
    fn three_point_budget_and_linear_exactness() {
        let p1 = &builtin_weight_pairs()[0];
        let mut o = CountingOracle::<_, BigReal>::new(&Sqrt2, p());
        three_point8_step(&mut o, &q(3, 2), p1).unwrap();
        assert_eq!((o.f_count(), o.fprime_count()), (3, 1));

        for pair in builtin_weight_pairs() {
            let mut o = CountingOracle::<_, f64>::new(&Linear, Precision::DOUBLE);
            assert_eq!(three_point8_step(&mut o, &11.0, &pair).unwrap().value(), 2.0);
        }
    }
}
