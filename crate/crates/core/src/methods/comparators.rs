//! Published eighth-order three-point methods used for comparison. Each
//! uses `f(x)`, `f'(x)`, `f(y)` and `f(z)`.

use crate::numeric::{Precision, Scalar};
use crate::problem::{CountingOracle, Objective};

use super::{head, proceed, Flow, Head, MethodId, Outcome, StepError};

/// Free parameters `(alpha, beta)` of TP.
const TP_PARAMS: (i64, i64) = (1, 1);
/// `(beta1, beta2, beta3)` of CTV; `gamma = 3 (beta2 + beta3)`.
const CTV_PARAMS: (i64, i64, i64) = (1, 1, 1);
/// `(beta, gamma)` of CL. They cancel in the final weight.
const CL_PARAMS: (i64, i64) = (0, 0);

fn div<S: Scalar>(num: S, den: S, term: &'static str) -> Result<S, StepError> {
    if den.is_zero() {
        Err(StepError::DegenerateStep { term })
    } else {
        Ok(num / den)
    }
}

fn dd<S: Scalar>(fa: &S, fb: &S, a: &S, b: &S, term: &'static str) -> Result<S, StepError> {
    div(fa.clone() - fb.clone(), a.clone() - b.clone(), term)
}

fn int<S: Scalar>(v: i64, p: Precision) -> S {
    S::from_i64(v, p)
}

/// Evaluates `f(z)`, stopping the step if `z` is an exact root.
macro_rules! eval_z {
    ($o:expr, $z:expr) => {{
        let fz = $o.eval_f(&$z)?;
        if fz.is_zero() {
            return Ok(Outcome::AtRoot($z));
        }
        fz
    }};
}

/// `z = y - f(y)/f'(x) * (f(x) + beta f(y)) / (f(x) + (beta - 2) f(y))`
fn king_point<S: Scalar>(h: &Head<S>, beta: S) -> Result<S, StepError> {
    let p = h.fx.precision();
    let num = h.fx.clone() + beta.clone() * h.fy.clone();
    let den = h.fx.clone() + (beta - int(2, p)) * h.fy.clone();
    let ratio = div(num, den, "second-step weight")?;
    Ok(h.y.clone() - h.fy.clone() / h.fpx.clone() * ratio)
}

/// `z = y - f(y)/f'(x) / (1 - f(y)/f(x))^2`
fn squared_secant_point<S: Scalar>(h: &Head<S>) -> Result<S, StepError> {
    let p = h.fx.precision();
    let t = h.fy.clone() / h.fx.clone();
    let den = (int::<S>(1, p) - t).powi(2);
    Ok(h.y.clone() - div(h.fy.clone() / h.fpx.clone(), den, "(1 - f(y)/f(x))^2")?)
}

/// `f[z, y] + f[z, x, x] (z - y)`
fn hermite_slope<S: Scalar>(x: &S, h: &Head<S>, z: &S, fz: &S) -> Result<S, StepError> {
    let fzy = dd(fz, &h.fy, z, &h.y, "f[z, y]")?;
    let fzx = dd(fz, &h.fx, z, x, "f[z, x]")?;
    let fzxx = div(fzx - h.fpx.clone(), z.clone() - x.clone(), "f[z, x, x]")?;
    Ok(fzy + fzxx * (z.clone() - h.y.clone()))
}

fn brw<S: Scalar>(x: &S, h: &Head<S>, z: S, fz: S) -> Result<S, StepError> {
    let p = x.precision();
    let slope = hermite_slope(x, h, &z, &fz)?;
    let t = fz.clone() / h.fx.clone();
    let weight = div(int(1, p), (int::<S>(1, p) - t).powi(2), "H(t)")?;
    Ok(z - div(fz, slope, "f[z, y] + f[z, x, x](z - y)")? * weight)
}

fn wl<S: Scalar>(h: &Head<S>, z: S, fz: S) -> Result<S, StepError> {
    let p = z.precision();
    let t = h.fy.clone() / h.fx.clone();
    let s = fz.clone() / h.fy.clone();
    let big_h = div(
        int::<S>(5, p) - int::<S>(2, p) * t.clone() + t.clone() * t.clone(),
        int::<S>(5, p) - int::<S>(12, p) * t.clone(),
        "H(t)",
    )?;
    let v = int::<S>(1, p) + int::<S>(4, p) * t;
    Ok(z - fz / h.fpx.clone() * (big_h + v * s))
}

fn ss<S: Scalar>(x: &S, h: &Head<S>, z: S, fz: S) -> Result<S, StepError> {
    let p = x.precision();
    let fxy = dd(&h.fx, &h.fy, x, &h.y, "f[x, y]")?;
    let fxz = dd(&h.fx, &fz, x, &z, "f[x, z]")?;
    let fyz = dd(&h.fy, &fz, &h.y, &z, "f[y, z]")?;
    let t = fz.clone() / h.fx.clone();
    let w = int::<S>(1, p) + div(t.clone(), int::<S>(1, p) + t, "W(t)")?;
    Ok(z - div(fxy * fz, fxz * fyz, "f[x, z] f[y, z]")? * w)
}

fn bcst<S: Scalar>(h: &Head<S>, z: S, fz: S) -> Result<S, StepError> {
    let p = z.precision();
    let t = h.fy.clone() / h.fx.clone();
    let num =
        int::<S>(1, p) + t.clone().powi(2) + int::<S>(5, p) * t.clone().powi(4) + fz.clone() / h.fy.clone();
    let den = (int::<S>(1, p) - t - fz.clone() / h.fx.clone()).powi(2);
    Ok(z - fz / h.fpx.clone() * div(num, den, "(1 - f(y)/f(x) - f(z)/f(x))^2")?)
}

fn cfgt<S: Scalar>(x: &S, h: &Head<S>, z: S, fz: S) -> Result<S, StepError> {
    let p = x.precision();
    let slope = hermite_slope(x, h, &z, &fz)?;
    let weight = div(
        h.fx.clone() + int::<S>(3, p) * fz.clone(),
        h.fx.clone() + fz.clone(),
        "f(x) + f(z)",
    )?;
    Ok(z - weight * div(fz, slope, "f[z, y] + f[z, x, x](z - y)")?)
}

fn ctv<S: Scalar>(x: &S, h: &Head<S>, z: S, fz: S) -> Result<S, StepError> {
    let p = x.precision();
    let (b1, b2, b3) = CTV_PARAMS;
    let gamma = 3 * (b2 + b3);
    let fx2fy = h.fx.clone() - int::<S>(2, p) * h.fy.clone();
    let a = div(h.fx.clone() - h.fy.clone(), fx2fy, "f(x) - 2f(y)")?;
    let b = div(
        fz.clone(),
        int::<S>(2, p) * (h.fy.clone() - int::<S>(2, p) * fz.clone()),
        "f(y) - 2f(z)",
    )?;
    let step = fz.clone() / h.fpx.clone();
    let v = z.clone() - step.clone() * (a + b).powi(2);
    let den = int::<S>(b1, p) * (v.clone() - z.clone())
        + int::<S>(b2, p) * (h.y.clone() - x.clone())
        + int::<S>(b3, p) * (z.clone() - x.clone());
    let w = div(
        int::<S>(gamma, p) * (v.clone() - z),
        den,
        "beta-weighted node sum",
    )?;
    Ok(v - step * w)
}

/// `H(t)` of TP for free parameter `beta`.
fn tp_weight<S: Scalar>(t: S, beta: i64) -> Result<S, StepError> {
    let p = t.precision();
    let num = int::<S>(5 - 2 * beta, p) - int::<S>(2 - 8 * beta + 2 * beta * beta, p) * t.clone()
        + int::<S>(1 + 4 * beta, p) * t.clone() * t.clone();
    let den = int::<S>(5 - 2 * beta, p) - int::<S>(12 - 12 * beta + 2 * beta * beta, p) * t;
    div(num, den, "H(t)")
}

fn tp<S: Scalar>(h: &Head<S>, z: S, fz: S, alpha: i64, beta: i64) -> Result<S, StepError> {
    let p = z.precision();
    let t = h.fy.clone() / h.fx.clone();
    let mid = div(
        fz.clone(),
        h.fy.clone() - int::<S>(alpha, p) * fz.clone(),
        "f(y) - alpha f(z)",
    )?;
    let w = tp_weight(t, beta)? + mid + int::<S>(4, p) * fz.clone() / h.fx.clone();
    Ok(z - fz / h.fpx.clone() * w)
}

/// `1 - H(t) - J(s) - P(u)`
fn cl_denominator<S: Scalar>(t: S, s: S, u: S, beta: i64, gamma: i64) -> S {
    let p = t.precision();
    let half = S::ratio(1, 2, p);
    let big_h = int::<S>(-beta - gamma, p) + t.clone() + half.clone() * t.clone() * t.clone()
        - half.clone() * t.clone().powi(3);
    let j = int::<S>(beta, p) + half.clone() * s;
    let pp = int::<S>(gamma, p) + half * u;
    int::<S>(1, p) - big_h - j - pp
}

fn cl<S: Scalar>(h: &Head<S>, z: S, fz: S) -> Result<S, StepError> {
    let (beta, gamma) = CL_PARAMS;
    let t = h.fy.clone() / h.fx.clone();
    let s = fz.clone() / h.fx.clone();
    let u = fz.clone() / h.fy.clone();
    let den = cl_denominator(t, s, u, beta, gamma).powi(2);
    Ok(z - div(fz / h.fpx.clone(), den, "(1 - H - J - P)^2")?)
}

/// One iteration of a comparator method.
pub fn comparator_step<F: Objective, S: Scalar>(
    m: MethodId,
    o: &mut CountingOracle<'_, F, S>,
    x: &S,
) -> Result<Outcome<S>, StepError> {
    if !m.is_comparator() {
        return Err(StepError::NotComparator);
    }
    let h = if m == MethodId::Bcst {
        proceed!(perturbed_head(o, x))
    } else {
        proceed!(head(o, x))
    };
    let p = x.precision();
    let z = match m {
        MethodId::Brw => king_point(&h, S::ratio(-1, 2, p))?,
        MethodId::Wl => {
            let t = h.fy.clone() / h.fx.clone();
            let g = div(
                int::<S>(1, p) - t.clone(),
                int::<S>(1, p) - int::<S>(2, p) * t,
                "G(t)",
            )?;
            x.clone() - h.fx.clone() / h.fpx.clone() * g
        }
        MethodId::Ss | MethodId::Ctv => king_point(&h, S::zero(p))?,
        MethodId::Bcst | MethodId::Cl => squared_secant_point(&h)?,
        MethodId::Cfgt => {
            let (fx, fy) = (&h.fx, &h.fy);
            let den = fx.clone().powi(3)
                - int::<S>(2, p) * fx.clone().powi(2) * fy.clone()
                - fx.clone() * fy.clone().powi(2)
                - S::ratio(1, 2, p) * fy.clone().powi(3);
            let w = div(fx.clone().powi(3), den, "cubic second-step denominator")?;
            h.y.clone() - w * fy.clone() / h.fpx.clone()
        }
        MethodId::Tp => king_point(&h, int(TP_PARAMS.1, p))?,
        _ => unreachable!(),
    };
    let fz = eval_z!(o, z);
    let next = match m {
        MethodId::Brw => brw(x, &h, z, fz)?,
        MethodId::Wl => wl(&h, z, fz)?,
        MethodId::Ss => ss(x, &h, z, fz)?,
        MethodId::Bcst => bcst(&h, z, fz)?,
        MethodId::Cfgt => cfgt(x, &h, z, fz)?,
        MethodId::Ctv => ctv(x, &h, z, fz)?,
        MethodId::Tp => tp(&h, z, fz, TP_PARAMS.0, TP_PARAMS.1)?,
        MethodId::Cl => cl(&h, z, fz)?,
        _ => unreachable!(),
    };
    Ok(Outcome::Next(next))
}

/// BCST's first substep `y = x - u (1 + u^5)`, `u = f(x)/f'(x)`.
fn perturbed_head<F: Objective, S: Scalar>(
    o: &mut CountingOracle<'_, F, S>,
    x: &S,
) -> Result<Flow<Head<S>, S>, StepError> {
    let fx = o.eval_f(x)?;
    if fx.is_zero() {
        return Ok(Flow::Stop(Outcome::AtRoot(x.clone())));
    }
    let fpx = o.eval_fprime(x)?;
    if fpx.is_zero() {
        return Err(StepError::DerivativeZero);
    }
    let u = fx.clone() / fpx.clone();
    let y = x.clone() - u.clone() * (int::<S>(1, x.precision()) + u.powi(5));
    let fy = o.eval_f(&y)?;
    if fy.is_zero() {
        return Ok(Flow::Stop(Outcome::AtRoot(y)));
    }
    Ok(Flow::Go(Head { fx, fpx, y, fy }))
}
