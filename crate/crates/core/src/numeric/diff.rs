use core::fmt;

use super::Scalar;

pub const MAX_FD_ORDER: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiffError<E> {
    UnsupportedOrder(usize),
    Eval(E),
}

impl<E: fmt::Display> fmt::Display for DiffError<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffError::UnsupportedOrder(k) => {
                write!(f, "derivative order {k} exceeds {MAX_FD_ORDER}")
            }
            DiffError::Eval(e) => write!(f, "evaluation failed: {e}"),
        }
    }
}

impl<E: fmt::Debug + fmt::Display> core::error::Error for DiffError<E> {}

/// Second-order central difference estimate of `g^(k)(x0)`.
///
/// Stencils: `k = 1, 2` use `x0 ± h`; `k = 3, 4` use `x0 ± h, x0 ± 2h`.
/// Truncation error is `O(h^2)`, rounding error `O(eps / h^k)`.
pub fn nth_derivative_fd<S, E, G>(mut g: G, k: usize, x0: &S, h: &S) -> Result<S, DiffError<E>>
where
    S: Scalar,
    G: FnMut(&S) -> Result<S, E>,
{
    if k > MAX_FD_ORDER {
        return Err(DiffError::UnsupportedOrder(k));
    }
    let p = x0.precision();
    let int = |v: i64| S::from_i64(v, p);
    let mut at = |offset: i64| g(&(x0.clone() + int(offset) * h.clone())).map_err(DiffError::Eval);
    Ok(match k {
        0 => at(0)?,
        1 => (at(1)? - at(-1)?) / (int(2) * h.clone()),
        2 => (at(1)? - int(2) * at(0)? + at(-1)?) / h.powi(2),
        3 => {
            let num = at(2)? - int(2) * at(1)? + int(2) * at(-1)? - at(-2)?;
            num / (int(2) * h.powi(3))
        }
        _ => {
            let num = at(2)? - int(4) * at(1)? + int(6) * at(0)? - int(4) * at(-1)? + at(-2)?;
            num / h.powi(4)
        }
    })
}
