use num_integer::Integer;
use num_traits::{CheckedMul, FromPrimitive};

use crate::error::{Error, Result};

/// Exact binomial coefficient C(n, r) in any integer type.
///
/// Uses the multiplicative recurrence `C(n, i+1) = C(n, i)·(n−i)/(i+1)`, which
/// stays integral at every step. Fixed-width types report overflow as a
/// capacity error; `BigUint` never overflows.
pub fn binomial<T>(n: u64, r: u64) -> Result<T>
where
    T: Integer + Clone + CheckedMul + FromPrimitive,
{
    if r > n {
        return Err(Error::Domain(format!("C({n}, {r}) requires r <= n")));
    }
    let r = r.min(n - r);
    let mut acc = T::one();
    for i in 0..r {
        let factor = T::from_u64(n - i).ok_or_else(|| overflow(n, r))?;
        let divisor = T::from_u64(i + 1).ok_or_else(|| overflow(n, r))?;
        // Divide out the gcd first so fixed-width types overflow as late as possible.
        let g = acc.gcd(&divisor);
        let (a, d) = (acc.div_floor(&g), divisor.div_floor(&g));
        acc = a
            .checked_mul(&factor.div_floor(&d))
            .ok_or_else(|| overflow(n, r))?;
    }
    Ok(acc)
}

fn overflow(n: u64, r: u64) -> Error {
    Error::capacity(
        "binomial coefficient",
        format!("C({n}, {r})"),
        "the target integer width",
    )
}

/// Falling factorial n·(n−1)···(n−r+1).
pub fn falling_factorial<T>(n: &T, r: u64) -> T
where
    T: Integer + Clone + FromPrimitive,
{
    let mut acc = T::one();
    let mut f = n.clone();
    for _ in 0..r {
        acc = acc * f.clone();
        f = f - T::one();
    }
    acc
}

/// Binomial coefficient with a big-integer top argument: C(n, r) for
/// `n` that may not fit a machine word and small `r`.
pub fn binomial_big<T>(n: &T, r: u64) -> Result<T>
where
    T: Integer + Clone + FromPrimitive,
{
    let r_t = T::from_u64(r).ok_or_else(|| overflow(0, r))?;
    if r_t > *n {
        return Err(Error::Domain(format!("C(n, {r}) requires r <= n")));
    }
    let mut acc = T::one();
    let mut f = n.clone();
    let mut i = T::one();
    for _ in 0..r {
        acc = acc * f.clone() / i.clone();
        f = f - T::one();
        i = i + T::one();
    }
    Ok(acc)
}
