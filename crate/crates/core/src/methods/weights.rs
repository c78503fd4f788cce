use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::numeric::{nth_derivative_fd, BigEnv, BigReal, DiffError, Precision, RealScalar, Scalar};

use super::{checked_div, StepError};

/// A weight function of one variable (`t` for `phi`, `s` for `psi`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightFn {
    /// `-t/2 - 5t^2/4`
    Phi1,
    /// `t + 9t/(5t - 6)`
    Phi2,
    /// `t/(5t - 2)`
    Phi3,
    /// `-(6t + t^2)/4 + t/(1 + t)`
    Phi4,
    /// `(1 + 2s)/(1 + s)`
    Psi1,
    /// `1/(1 - s)`
    Psi2,
    /// `1 + 2s/(2 + 5s)`
    Psi3,
    /// `(1 + s)^((s + 1)/(2s + 1))`
    Psi4,
    /// Ratio of polynomials with rational coefficients `(num, den)`,
    /// lowest degree first.
    Rational {
        num: Vec<(i64, i64)>,
        den: Vec<(i64, i64)>,
    },
}

fn horner<S: Scalar>(coeffs: &[(i64, i64)], t: &S) -> S {
    let p = t.precision();
    coeffs
        .iter()
        .rev()
        .fold(S::zero(p), |acc, &(n, d)| acc * t.clone() + S::ratio(n, d, p))
}

impl WeightFn {
    /// Polynomial with rational coefficients, lowest degree first.
    pub fn polynomial(coeffs: Vec<(i64, i64)>) -> WeightFn {
        WeightFn::Rational {
            num: coeffs,
            den: alloc::vec![(1, 1)],
        }
    }

    pub fn eval<S: Scalar>(&self, t: &S, env: &mut S::Env) -> Result<S, StepError> {
        let p = t.precision();
        let c = |v: i64| S::from_i64(v, p);
        let t = t.clone();
        let pole = StepError::WeightPole;
        Ok(match self {
            WeightFn::Phi1 => -(t.clone() * (c(2) + c(5) * t)) / c(4),
            WeightFn::Phi2 => t.clone() + checked_div(c(9) * t.clone(), c(5) * t - c(6), pole)?,
            WeightFn::Phi3 => checked_div(t.clone(), c(5) * t - c(2), pole)?,
            WeightFn::Phi4 => {
                -(c(6) * t.clone() + t.clone() * t.clone()) / c(4) + checked_div(t.clone(), c(1) + t, pole)?
            }
            WeightFn::Psi1 => checked_div(c(1) + c(2) * t.clone(), c(1) + t, pole)?,
            WeightFn::Psi2 => checked_div(c(1), c(1) - t, pole)?,
            WeightFn::Psi3 => c(1) + checked_div(c(2) * t.clone(), c(2) + c(5) * t, pole)?,
            WeightFn::Psi4 => {
                let base = c(1) + t.clone();
                let expo = checked_div(t.clone() + c(1), c(2) * t + c(1), pole)?;
                base.pow(&expo, env).ok_or(pole)?
            }
            WeightFn::Rational { num, den } => checked_div(horner(num, &t), horner(den, &t), pole)?,
        })
    }

    /// Where the function is undefined.
    pub fn pole_note(&self) -> &'static str {
        match self {
            WeightFn::Phi1 => "none",
            WeightFn::Phi2 => "t = 6/5",
            WeightFn::Phi3 => "t = 2/5",
            WeightFn::Phi4 => "t = -1",
            WeightFn::Psi1 => "s = -1",
            WeightFn::Psi2 => "s = 1",
            WeightFn::Psi3 => "s = -2/5",
            WeightFn::Psi4 => "s = -1/2; real base needs s > -1",
            WeightFn::Rational { .. } => "zeros of the denominator",
        }
    }
}

impl core::fmt::Display for WeightFn {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let text = match self {
            WeightFn::Phi1 => "-t/2 - 5t^2/4",
            WeightFn::Phi2 => "t + 9t/(5t - 6)",
            WeightFn::Phi3 => "t/(5t - 2)",
            WeightFn::Phi4 => "-(6t + t^2)/4 + t/(1 + t)",
            WeightFn::Psi1 => "(1 + 2s)/(1 + s)",
            WeightFn::Psi2 => "1/(1 - s)",
            WeightFn::Psi3 => "1 + 2s/(2 + 5s)",
            WeightFn::Psi4 => "(1 + s)^((s + 1)/(2s + 1))",
            WeightFn::Rational { num, den } => return write!(f, "rational {num:?} / {den:?}"),
        };
        f.write_str(text)
    }
}

/// The pair `(phi, psi)` of an eighth-order scheme. The two-point scheme
/// uses only `phi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightPair {
    pub name: String,
    pub phi: WeightFn,
    pub psi: WeightFn,
    pub phi_poles: String,
    pub psi_poles: String,
}

impl WeightPair {
    pub fn new(name: &str, phi: WeightFn, psi: WeightFn) -> WeightPair {
        WeightPair {
            name: name.to_string(),
            phi_poles: phi.pole_note().to_string(),
            psi_poles: psi.pole_note().to_string(),
            phi,
            psi,
        }
    }
}

/// The four pairs P1-P4.
pub fn builtin_weight_pairs() -> Vec<WeightPair> {
    alloc::vec![
        WeightPair::new("p1", WeightFn::Phi1, WeightFn::Psi1),
        WeightPair::new("p2", WeightFn::Phi2, WeightFn::Psi2),
        WeightPair::new("p3", WeightFn::Phi3, WeightFn::Psi3),
        WeightPair::new("p4", WeightFn::Phi4, WeightFn::Psi4),
    ]
}

#[derive(Clone, Debug)]
pub struct ConditionCheck {
    pub label: &'static str,
    /// `|estimate - target|`
    pub residual: BigReal,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct WeightReport {
    pub pair: String,
    /// `tau = 10^(-digits/4)`
    pub tolerance: BigReal,
    pub checks: Vec<ConditionCheck>,
}

impl WeightReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.label)
            .collect()
    }
}

/// Checks `phi(0) = 0`, `phi'(0) = -1/2`, `phi''(0) = -5/2`, `psi(0) = 1`,
/// `psi'(0) = 1` by central differences with step and tolerance
/// `10^(-digits/4)`.
pub fn validate_weight_pair(w: &WeightPair, p: Precision) -> Result<WeightReport, DiffError<StepError>> {
    let quarter = -(p.decimal_digits() as i64) / 4;
    let tau = BigReal::pow10(quarter, p);
    let h = tau.clone();
    let zero = BigReal::zero(p);
    let mut env = BigEnv::new();
    let targets: [(&'static str, &WeightFn, usize, BigReal); 5] = [
        ("phi(0) = 0", &w.phi, 0, BigReal::zero(p)),
        ("phi'(0) = -1/2", &w.phi, 1, BigReal::ratio(-1, 2, p)),
        ("phi''(0) = -5/2", &w.phi, 2, BigReal::ratio(-5, 2, p)),
        ("psi(0) = 1", &w.psi, 0, BigReal::one(p)),
        ("psi'(0) = 1", &w.psi, 1, BigReal::one(p)),
    ];
    let mut checks = Vec::with_capacity(targets.len());
    for (label, g, k, target) in targets {
        let est = nth_derivative_fd(|t: &BigReal| g.eval(t, &mut env), k, &zero, &h)?;
        let residual = (est - target).abs();
        let passed = residual < tau;
        checks.push(ConditionCheck {
            label,
            residual,
            passed,
        });
    }
    Ok(WeightReport {
        pair: w.name.clone(),
        tolerance: tau,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero() {
        let pairs = builtin_weight_pairs();
        for w in &pairs {
            assert_eq!(w.phi.eval(&0.0, &mut ()), Ok(0.0), "{}", w.name);
            assert_eq!(w.psi.eval(&0.0, &mut ()), Ok(1.0), "{}", w.name);
        }
        assert_eq!(pairs[1].phi_poles, "t = 6/5");
        assert_eq!(pairs[2].phi_poles, "t = 2/5");
        assert_eq!(pairs[0].psi_poles, "s = -1");
        assert!(pairs[3].psi_poles.starts_with("s = -1/2"));
    }

    #[test]
    fn poles_raise() {
        assert_eq!(WeightFn::Phi3.eval(&0.4, &mut ()), Err(StepError::WeightPole));
        assert_eq!(WeightFn::Psi2.eval(&1.0, &mut ()), Err(StepError::WeightPole));
        assert_eq!(WeightFn::Psi1.eval(&-1.0, &mut ()), Err(StepError::WeightPole));
        assert_eq!(WeightFn::Psi4.eval(&-0.5, &mut ()), Err(StepError::WeightPole));
        assert_eq!(WeightFn::Psi4.eval(&-3.0, &mut ()), Err(StepError::WeightPole));
    }

    #[test]
    fn builtin_pairs_pass_all_conditions() {
        for w in builtin_weight_pairs() {
            let r = validate_weight_pair(&w, Precision::BENCHMARK).unwrap();
            assert!(r.all_passed(), "{}: {:?}", w.name, r.failed());
            for c in &r.checks {
                assert!(
                    c.residual < BigReal::pow10(-400, Precision::BENCHMARK),
                    "{} {}",
                    w.name,
                    c.label
                );
            }
        }
    }

    #[test]
    fn broken_pairs_fail_the_right_conditions() {
        let p = Precision::new(200).unwrap();
        let identity = WeightPair::new(
            "identity",
            WeightFn::polynomial(alloc::vec![(0, 1), (1, 1)]),
            WeightFn::polynomial(alloc::vec![(1, 1)]),
        );
        let r = validate_weight_pair(&identity, p).unwrap();
        assert_eq!(r.failed(), ["phi'(0) = -1/2", "phi''(0) = -5/2", "psi'(0) = 1"]);

        let slope_only = WeightPair::new(
            "slope",
            WeightFn::polynomial(alloc::vec![(0, 1), (1, 1), (-5, 4)]),
            WeightFn::Psi1,
        );
        let r = validate_weight_pair(&slope_only, p).unwrap();
        assert_eq!(r.failed(), ["phi'(0) = -1/2"]);

        let steep_psi = WeightPair::new(
            "steep",
            WeightFn::Phi1,
            WeightFn::polynomial(alloc::vec![(1, 1), (2, 1)]),
        );
        let r = validate_weight_pair(&steep_psi, p).unwrap();
        assert_eq!(r.failed(), ["psi'(0) = 1"]);
    }
}
