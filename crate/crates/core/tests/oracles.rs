//! Single steps on x^2 - 2 against exact rational arithmetic. Every scheme
//! below is rational in f, f' and the iterate, so from x = 3/2 each step has
//! an exact rational value.

use multipoint_core::methods::{Method, MethodId};
use multipoint_core::numeric::{make_scalar, BigReal, Precision, RealScalar, Scalar};
use multipoint_core::problem::{CountingOracle, DomainError, Objective};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

type Q = BigRational;

struct Sqrt2;

impl Objective for Sqrt2 {
    fn f<S: Scalar>(&self, x: &S, _: &mut S::Env) -> Result<S, DomainError> {
        Ok(x.clone() * x.clone() - S::from_i64(2, x.precision()))
    }

    fn fprime<S: Scalar>(&self, x: &S, _: &mut S::Env) -> Result<S, DomainError> {
        Ok(S::from_i64(2, x.precision()) * x.clone())
    }
}

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn f(x: &Q) -> Q {
    x * x - q(2, 1)
}

fn fp(x: &Q) -> Q {
    q(2, 1) * x
}

fn dd(fa: &Q, fb: &Q, a: &Q, b: &Q) -> Q {
    (fa - fb) / (a - b)
}

fn one() -> Q {
    q(1, 1)
}

struct Head {
    fx: Q,
    fpx: Q,
    y: Q,
    fy: Q,
}

fn head(x: &Q) -> Head {
    let fx = f(x);
    let fpx = fp(x);
    let y = x - &fx / &fpx;
    let fy = f(&y);
    Head { fx, fpx, y, fy }
}

fn newton_secant(x: &Q) -> Q {
    let h = head(x);
    x - &h.fx * &h.fx / ((&h.fx - &h.fy) * &h.fpx)
}

/// Two-point step with phi(t) = -t/2 - 5t^2/4; also returns the pieces the
/// three-point step needs.
fn two_point(x: &Q) -> (Head, Q, Q) {
    let h = head(x);
    let z = newton_secant(x);
    let t = &h.fy / &h.fx;
    let d = &h.fx - &h.fy;
    let bracket = one() - &h.fx / &d * (one() + &h.fy / &d);
    let phi = -&t / q(2, 1) - q(5, 4) * &t * &t;
    let v = &z - bracket * (&h.fx / &h.fpx) * phi;
    (h, z, v)
}

fn slss(x: &Q) -> Q {
    let (h, z, v) = two_point(x);
    let fv = f(&v);
    let (dz, dv) = (&z - x, &v - x);
    let w = &h.fy * &h.fpx * &h.fpx / (&h.fx * &h.fx);
    let fvx = dd(&fv, &h.fx, &v, x);
    let fz =
        &h.fx + &h.fpx * &dz + &w * &dz * &dz + (fvx - &h.fpx - &w * &dv) * &dz * &dz * &dz / (&dv * &dv);
    let fzy = dd(&fz, &h.fy, &z, &h.y);
    let fzx = dd(&fz, &h.fx, &z, x);
    let slope = (fzy + (fzx - &h.fpx) * (&z - &h.y) / &dz - &h.fpx) / &dz;
    let fpv = &h.fpx + slope * &dv;
    let s = &fv / &h.fx;
    let psi = (one() + q(2, 1) * &s) / (one() + &s);
    &v - &fv / fpv * psi
}

fn brw(x: &Q) -> Q {
    let h = head(x);
    let beta = q(-1, 2);
    let z = &h.y - &h.fy / &h.fpx * (&h.fx + &beta * &h.fy) / (&h.fx + (&beta - q(2, 1)) * &h.fy);
    let fz = f(&z);
    let fzy = dd(&fz, &h.fy, &z, &h.y);
    let fzxx = (dd(&fz, &h.fx, &z, x) - &h.fpx) / (&z - x);
    let t = &fz / &h.fx;
    let slope = fzy + fzxx * (&z - &h.y);
    let weight = one() / ((one() - &t) * (one() - &t));
    &z - &fz / slope * weight
}

fn cfgt(x: &Q) -> Q {
    let h = head(x);
    let (fx, fy) = (&h.fx, &h.fy);
    let den = fx * fx * fx - q(2, 1) * fx * fx * fy - fx * fy * fy - fy * fy * fy / q(2, 1);
    let z = &h.y - fx * fx * fx / den * fy / &h.fpx;
    let fz = f(&z);
    let fzy = dd(&fz, fy, &z, &h.y);
    let fzxx = (dd(&fz, fx, &z, x) - &h.fpx) / (&z - x);
    &z - (fx + q(3, 1) * &fz) / (fx + &fz) * &fz / (fzy + fzxx * (&z - &h.y))
}

fn to_big(v: &Q, p: Precision) -> BigReal {
    let n = make_scalar(&v.numer().to_string(), p).unwrap();
    let d = make_scalar(&v.denom().to_string(), p).unwrap();
    n / d
}

fn assert_step_matches(id: MethodId, exact: Q) {
    let p = Precision::BENCHMARK;
    let mut o = CountingOracle::<_, BigReal>::new(&Sqrt2, p);
    let got = Method::new(id)
        .step(&mut o, &BigReal::ratio(3, 2, p))
        .unwrap()
        .value();
    let want = to_big(&exact, p);
    let gap = (got - want.clone()).abs() / want.abs();
    assert!(
        gap < BigReal::pow10(-1790, p),
        "{id}: relative gap {:e}",
        gap.to_f64()
    );
}

#[test]
fn newton_secant_from_three_halves() {
    let exact = newton_secant(&q(3, 2));
    assert_eq!(exact, q(99, 70));
    assert_step_matches(MethodId::Ns3, exact);
}

#[test]
fn two_point_from_three_halves() {
    let exact = two_point(&q(3, 2)).2;
    assert_eq!(exact, q(107_769_893, 76_204_800));
    assert_step_matches(MethodId::TwoPoint4, exact);
}

#[test]
fn three_point_from_three_halves() {
    let exact = slss(&q(3, 2));
    // error shrinks by roughly the eighth power of 0.086
    let err = (&exact * &exact - q(2, 1)).abs();
    assert!(err < q(1, 1_000_000_000));
    assert_step_matches(MethodId::Slss, exact);
}

#[test]
fn comparators_from_three_halves() {
    assert_step_matches(MethodId::Brw, brw(&q(3, 2)));
    assert_step_matches(MethodId::Cfgt, cfgt(&q(3, 2)));
}
