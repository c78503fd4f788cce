use multipoint_core::driver::{acoc, coc};
use multipoint_core::methods::{Method, MethodId};
use multipoint_core::numeric::{
    nth_derivative_fd, BigComplex, BigReal, Complex64, ComplexScalar, Precision, RealScalar, Scalar,
};
use multipoint_core::problem::{CountingOracle, Problem, ProblemId};
use proptest::prelude::*;

fn p60() -> Precision {
    Precision::new(60).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn add_then_subtract_round_trips(a in -1e6f64..1e6, b in -1e6f64..1e6) {
        let p = p60();
        let (x, y) = (BigReal::from_f64(a, p), BigReal::from_f64(b, p));
        let back = (x.clone() + y.clone()) - y;
        prop_assert!((back - x).abs() < BigReal::pow10(-50, p));
    }

    #[test]
    fn real_steps_embed_in_complex(x0 in 0.05f64..0.3, m in prop::sample::select(MethodId::ALL.to_vec())) {
        let p = p60();
        let t3 = Problem::new(ProblemId::T3);
        let x = BigReal::from_f64(x0, p);
        let mut ro = CountingOracle::<_, BigReal>::new(&t3, p);
        let mut co = CountingOracle::<_, BigComplex>::new(&t3, p);
        let method = Method::new(m);
        let real = method.step(&mut ro, &x);
        let complex = method.step(&mut co, &BigComplex::new(x.clone(), BigReal::zero(p)));
        match (real, complex) {
            (Ok(r), Ok(c)) => {
                let (r, c) = (r.value(), c.value());
                prop_assert!((c.real_part() - r).abs() < BigReal::pow10(-50, p));
                prop_assert!(c.imag_part().abs() < BigReal::pow10(-50, p));
            }
            (r, c) => prop_assert_eq!(r.is_err(), c.is_err()),
        }
        prop_assert_eq!(ro.total(), co.total());
    }

    #[test]
    fn finite_differences_are_exact_on_low_degree_polynomials(
        c in prop::collection::vec(-5i64..=5, 6),
        x0 in -2.0f64..2.0,
        k in 1usize..=4,
    ) {
        // central differences of order k are exact up to degree k + 1
        let c = &c[..k + 2];
        let p = Precision::new(200).unwrap();
        let coeffs: Vec<BigReal> = c.iter().map(|&v| BigReal::from_i64(v, p)).collect();
        let poly = |t: &BigReal| -> Result<BigReal, ()> {
            Ok(coeffs.iter().rev().fold(BigReal::zero(p), |acc, a| acc * t.clone() + a.clone()))
        };
        let x = BigReal::from_f64(x0, p);
        let h = BigReal::pow10(-20, p);
        let got = nth_derivative_fd(poly, k, &x, &h).unwrap();
        // k-th derivative of sum c_j t^j
        let mut want = BigReal::zero(p);
        for (j, cj) in coeffs.iter().enumerate().skip(k) {
            let falling: i64 = ((j - k + 1)..=j).map(|v| v as i64).product();
            want = want + cj.clone() * BigReal::from_i64(falling, p) * x.powi((j - k) as u32);
        }
        prop_assert!((got - want).abs() < BigReal::pow10(-100, p), "k = {}", k);
    }

    #[test]
    fn coc_recovers_order_and_ignores_scale(r in 2.0f64..9.0, e0 in -1.5f64..-0.5, scale in -3i32..3) {
        let errs: Vec<f64> = (0..4).map(|n| 10f64.powf(e0 * r.powi(n))).collect();
        let est = coc(&errs, 0.0).unwrap();
        prop_assert!((est - r).abs() < 1e-9 * r, "{} vs {}", est, r);

        let c = 10f64.powi(scale);
        let scaled: Vec<f64> = errs.iter().map(|e| e * c).collect();
        prop_assert!((coc(&scaled, 0.0).unwrap() - est).abs() < 1e-9 * r);
    }

    #[test]
    fn acoc_is_translation_invariant(r in 2.0f64..4.0, shift in -10i64..10) {
        let p = Precision::new(300).unwrap();
        let root = BigReal::from_i64(shift, p);
        let iterates: Vec<BigReal> = (0..4)
            .map(|n| root.clone() + BigReal::pow10(-((2.0 * r.powi(n)).round() as i64), p))
            .collect();
        let at_zero: Vec<BigReal> = iterates.iter().map(|x| x.clone() - root.clone()).collect();
        let (a, b) = (acoc(&iterates).unwrap(), acoc(&at_zero).unwrap());
        prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn complex_f64_backend_matches_real(x0 in 0.05f64..0.3) {
        let t3 = Problem::new(ProblemId::T3);
        let p = Precision::DOUBLE;
        let mut ro = CountingOracle::<_, f64>::new(&t3, p);
        let mut co = CountingOracle::<_, Complex64>::new(&t3, p);
        let m = Method::new(MethodId::Slss);
        let r = m.step(&mut ro, &x0).unwrap().value();
        let c = m.step(&mut co, &Complex64::new(x0, 0.0)).unwrap().value();
        prop_assert!((c.re - r).abs() < 1e-14 && c.im.abs() < 1e-14);
    }
}
