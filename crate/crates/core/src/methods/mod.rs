//! Step functions for every iteration scheme, weight functions and
//! asymptotic error constants.

mod comparators;
mod constants;
mod newton_secant;
mod weights;

use core::fmt;
use core::str::FromStr;

use crate::numeric::Scalar;
use crate::problem::{CountingOracle, DomainError, Objective};

pub use comparators::comparator_step;
pub use constants::{error_constants, ConstantsError, ErrorConstants};
pub use newton_secant::{
    approx_fprime_v, approx_fz, divided_difference, newton_secant_step, newton_step, three_point8_step,
    two_point4_step,
};
pub use weights::{
    builtin_weight_pairs, validate_weight_pair, ConditionCheck, WeightFn, WeightPair, WeightReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MethodId {
    Newton,
    /// Newton-Secant, third order.
    Ns3,
    /// Two-point fourth-order method with a weight `phi`.
    TwoPoint4,
    /// Three-point eighth-order method with weight pair P1.
    Slss,
    /// Same scheme with pair P2.
    M2,
    /// Same scheme with pair P3.
    M3,
    /// Same scheme with pair P4.
    M4,
    Brw,
    Wl,
    Ss,
    Bcst,
    Cfgt,
    Ctv,
    Tp,
    Cl,
}

impl MethodId {
    pub const ALL: [MethodId; 15] = [
        MethodId::Newton,
        MethodId::Ns3,
        MethodId::TwoPoint4,
        MethodId::Slss,
        MethodId::M2,
        MethodId::M3,
        MethodId::M4,
        MethodId::Brw,
        MethodId::Wl,
        MethodId::Ss,
        MethodId::Bcst,
        MethodId::Cfgt,
        MethodId::Ctv,
        MethodId::Tp,
        MethodId::Cl,
    ];

    pub const COMPARATORS: [MethodId; 8] = [
        MethodId::Brw,
        MethodId::Wl,
        MethodId::Ss,
        MethodId::Bcst,
        MethodId::Cfgt,
        MethodId::Ctv,
        MethodId::Tp,
        MethodId::Cl,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MethodId::Newton => "newton",
            MethodId::Ns3 => "ns3",
            MethodId::TwoPoint4 => "tp4",
            MethodId::Slss => "slss",
            MethodId::M2 => "m2",
            MethodId::M3 => "m3",
            MethodId::M4 => "m4",
            MethodId::Brw => "brw",
            MethodId::Wl => "wl",
            MethodId::Ss => "ss",
            MethodId::Bcst => "bcst",
            MethodId::Cfgt => "cfgt",
            MethodId::Ctv => "ctv",
            MethodId::Tp => "tp",
            MethodId::Cl => "cl",
        }
    }

    /// Theoretical order of convergence.
    pub fn order(self) -> u32 {
        match self {
            MethodId::Newton => 2,
            MethodId::Ns3 => 3,
            MethodId::TwoPoint4 => 4,
            _ => 8,
        }
    }

    /// Function plus derivative evaluations per iteration.
    pub fn evals(self) -> u32 {
        match self {
            MethodId::Newton => 2,
            MethodId::Ns3 | MethodId::TwoPoint4 => 3,
            _ => 4,
        }
    }

    /// `order^(1/evals)`.
    pub fn efficiency_index(self) -> f64 {
        libm::pow(self.order() as f64, 1.0 / self.evals() as f64)
    }

    pub fn is_comparator(self) -> bool {
        MethodId::COMPARATORS.contains(&self)
    }

    /// The weight pair a weighted scheme uses unless told otherwise.
    pub fn default_weights(self) -> Option<WeightPair> {
        let pairs = builtin_weight_pairs();
        let k = match self {
            MethodId::TwoPoint4 | MethodId::Slss => 0,
            MethodId::M2 => 1,
            MethodId::M3 => 2,
            MethodId::M4 => 3,
            _ => return None,
        };
        pairs.into_iter().nth(k)
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownMethod;

impl fmt::Display for UnknownMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown method id")
    }
}

impl core::error::Error for UnknownMethod {}

impl FromStr for MethodId {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MethodId::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or(UnknownMethod)
    }
}

/// Why a step could not be completed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepError {
    DerivativeZero,
    /// `f(x) = f(y)` in a secant denominator.
    SecantDegenerate,
    DegenerateNodes,
    WeightPole,
    ApproxDerivativeZero,
    /// A zero denominator inside a comparator formula.
    DegenerateStep {
        term: &'static str,
    },
    Domain(DomainError),
    /// `f(x) = 0` where a helper needs a nonzero residual.
    AtRoot,
    /// Weighted method requested without a weight pair.
    MissingWeights,
    NotComparator,
}

impl From<DomainError> for StepError {
    fn from(e: DomainError) -> Self {
        StepError::Domain(e)
    }
}

impl fmt::Display for StepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepError::DerivativeZero => f.write_str("derivative is zero"),
            StepError::SecantDegenerate => f.write_str("f(x) = f(y) in secant denominator"),
            StepError::DegenerateNodes => f.write_str("coincident interpolation nodes"),
            StepError::WeightPole => f.write_str("weight function evaluated at a pole"),
            StepError::ApproxDerivativeZero => f.write_str("approximate derivative f'(v) is zero"),
            StepError::DegenerateStep { term } => write!(f, "zero denominator in {term}"),
            StepError::Domain(e) => write!(f, "domain error: {e}"),
            StepError::AtRoot => f.write_str("residual is exactly zero"),
            StepError::MissingWeights => f.write_str("method needs a weight pair"),
            StepError::NotComparator => f.write_str("not a comparator method"),
        }
    }
}

impl core::error::Error for StepError {}

/// Result of one successful step.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome<S> {
    /// The next iterate.
    Next(S),
    /// A point where `f` evaluated to exactly zero, either the input or an
    /// intermediate point of the step.
    AtRoot(S),
}

impl<S> Outcome<S> {
    pub fn value(self) -> S {
        match self {
            Outcome::Next(x) | Outcome::AtRoot(x) => x,
        }
    }

    pub fn is_at_root(&self) -> bool {
        matches!(self, Outcome::AtRoot(_))
    }
}

/// A method together with its weight pair, if it has one.
#[derive(Clone, Debug, PartialEq)]
pub struct Method {
    pub id: MethodId,
    pub weights: Option<WeightPair>,
}

impl Method {
    pub fn new(id: MethodId) -> Method {
        Method {
            id,
            weights: id.default_weights(),
        }
    }

    pub fn with_weights(id: MethodId, weights: WeightPair) -> Method {
        Method {
            id,
            weights: Some(weights),
        }
    }

    pub fn step<F: Objective, S: Scalar>(
        &self,
        o: &mut CountingOracle<'_, F, S>,
        x: &S,
    ) -> Result<Outcome<S>, StepError> {
        let weights = || self.weights.as_ref().ok_or(StepError::MissingWeights);
        match self.id {
            MethodId::Newton => newton_step(o, x),
            MethodId::Ns3 => newton_secant_step(o, x),
            MethodId::TwoPoint4 => two_point4_step(o, x, weights()?),
            MethodId::Slss | MethodId::M2 | MethodId::M3 | MethodId::M4 => {
                three_point8_step(o, x, weights()?)
            }
            id => comparator_step(id, o, x),
        }
    }
}

impl From<MethodId> for Method {
    fn from(id: MethodId) -> Self {
        Method::new(id)
    }
}

pub(crate) fn checked_div<S: Scalar>(num: S, den: S, err: StepError) -> Result<S, StepError> {
    if den.is_zero() {
        Err(err)
    } else {
        Ok(num / den)
    }
}

/// `f(x)`, `f'(x)`, the Newton point `y` and `f(y)`, shared by every
/// multi-point scheme.
pub(crate) struct Head<S> {
    pub fx: S,
    pub fpx: S,
    pub y: S,
    pub fy: S,
}

pub(crate) enum Flow<T, S> {
    Go(T),
    Stop(Outcome<S>),
}

macro_rules! proceed {
    ($e:expr) => {
        match $e? {
            $crate::methods::Flow::Go(v) => v,
            $crate::methods::Flow::Stop(out) => return Ok(out),
        }
    };
}
pub(crate) use proceed;

pub(crate) fn head<F: Objective, S: Scalar>(
    o: &mut CountingOracle<'_, F, S>,
    x: &S,
) -> Result<Flow<Head<S>, S>, StepError> {
    let fx = o.eval_f(x)?;
    if fx.is_zero() {
        return Ok(Flow::Stop(Outcome::AtRoot(x.clone())));
    }
    let fpx = o.eval_fprime(x)?;
    let y = x.clone() - checked_div(fx.clone(), fpx.clone(), StepError::DerivativeZero)?;
    let fy = o.eval_f(&y)?;
    if fy.is_zero() {
        return Ok(Flow::Stop(Outcome::AtRoot(y)));
    }
    Ok(Flow::Go(Head { fx, fpx, y, fy }))
}


#[cfg(test)]
mod tests {
    use super::testing::Linear;
    use super::*;
    use crate::numeric::{BigComplex, BigReal, Precision, RealScalar};
    use crate::problem::{Problem, ProblemId};

    #[test]
    fn ids_orders_and_budgets() {
        for m in MethodId::ALL {
            assert_eq!(m.as_str().parse::<MethodId>(), Ok(m));
            let expect = match m {
                MethodId::Newton => (2, 2),
                MethodId::Ns3 => (3, 3),
                MethodId::TwoPoint4 => (4, 3),
                _ => (8, 4),
            };
            assert_eq!((m.order(), m.evals()), expect);
        }
        assert!("nosuch".parse::<MethodId>().is_err());
        assert!((MethodId::Slss.efficiency_index() - 1.681_792_830_507_429).abs() < 1e-12);
    }

    #[test]
    fn every_method_is_exact_on_linear_f() {
        let p = Precision::BENCHMARK;
        // BCST perturbs its first substep by (f/f')^5, so y misses the root
        for id in MethodId::ALL.into_iter().filter(|&m| m != MethodId::Bcst) {
            let mut o = CountingOracle::<_, BigReal>::new(&Linear, p);
            let x0 = BigReal::from_i64(5, p);
            let x1 = Method::new(id).step(&mut o, &x0).unwrap().value();
            assert_eq!(x1, BigReal::from_i64(2, p), "{id}");
        }
    }

    #[test]
    fn evaluation_budget_per_step() {
        let p = Precision::BENCHMARK;
        let t3 = Problem::new(ProblemId::T3);
        for id in MethodId::ALL {
            let mut o = CountingOracle::<_, BigReal>::new(&t3, p);
            let x0: BigReal = t3.start(p).unwrap();
            let out = Method::new(id).step(&mut o, &x0).unwrap();
            assert!(!out.is_at_root());
            assert_eq!(o.total(), id.evals() as u64, "{id}");
            assert_eq!(o.fprime_count(), 1, "{id}");
        }
    }

    #[test]
    fn complex_embedding_matches_real_steps() {
        let p = Precision::new(60).unwrap();
        let t4 = Problem::new(ProblemId::T4);
        let b1 = Problem::new(ProblemId::B1);
        for id in MethodId::ALL {
            let m = Method::new(id);
            let mut real = CountingOracle::<_, BigReal>::new(&b1, p);
            let mut cplx = CountingOracle::<_, BigComplex>::new(&b1, p);
            let x = BigReal::ratio(13, 10, p);
            let r = m.step(&mut real, &x).unwrap().value();
            let c = m.step(&mut cplx, &BigComplex::from_real(x)).unwrap().value();
            let tol = BigReal::pow10(-55, p);
            assert!((c.re - r).abs() < tol, "{id}");
            assert!(c.im.is_zero(), "{id}");

            // T4 is real-only in the suite, but its complex instantiation
            // must still agree on the real axis
            let mut real = CountingOracle::<_, BigReal>::new(&t4, p);
            let mut cplx = CountingOracle::<_, BigComplex>::new(&t4, p);
            let x = BigReal::ratio(11, 10, p);
            let r = m.step(&mut real, &x).unwrap().value();
            let c = m.step(&mut cplx, &BigComplex::from_real(x)).unwrap().value();
            let tol = BigReal::pow10(-55, p);
            assert!((c.re - r).abs() < tol, "{id}");
            assert!(c.im.abs() < tol, "{id}");
        }
    }

    #[test]
    fn weighted_method_without_pair_is_rejected() {
        let p = Precision::DOUBLE;
        let m = Method {
            id: MethodId::Slss,
            weights: None,
        };
        let mut o = CountingOracle::<_, f64>::new(&Linear, p);
        assert_eq!(m.step(&mut o, &1.0), Err(StepError::MissingWeights));
    }
}
