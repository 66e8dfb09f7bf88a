use crate::error::{Error, Result};
use crate::primitives::{ShMatrix, SignMatrix};

/// Largest number of matrices [`degenerate`] will materialize.
pub const DEFAULT_DEGENERATION_CAP: usize = 1 << 20;

/// Negates the rows whose first entry is −1, so the first column becomes
/// all-ones. Fails unless the input is a Hadamard matrix of order 4k.
pub fn seminormalize(m: &SignMatrix) -> Result<ShMatrix> {
    if !m.is_hadamard() {
        return Err(Error::Precondition("matrix is not Hadamard".into()));
    }
    let mut out = m.clone();
    for i in 0..m.order() {
        if m.get(i, 0) < 0 {
            out.negate_row(i);
        }
    }
    ShMatrix::try_from(out)
}

/// Seminormalizes, then negates the columns whose first entry is −1.
pub fn normalize(m: &SignMatrix) -> Result<ShMatrix> {
    let mut out = seminormalize(m)?.into_sign_matrix();
    for j in 1..out.order() {
        if out.get(0, j) < 0 {
            out.negate_column(j);
        }
    }
    ShMatrix::try_from(out)
}

/// Every matrix obtained from a normalized `h` by negating a subset of its
/// last 4k − 1 columns, 2^(4k−1) in all.
///
/// Subset `s` negates column `j` when bit `j − 1` of `s` is set, and results
/// are listed by increasing `s`, so the first entry is `h` itself.
pub fn degenerate(h: &ShMatrix) -> Result<Vec<ShMatrix>> {
    degenerate_with_cap(h, DEFAULT_DEGENERATION_CAP)
}

pub fn degenerate_with_cap(h: &ShMatrix, cap: usize) -> Result<Vec<ShMatrix>> {
    let base = h.as_sign_matrix();
    if !base.is_normalized() {
        return Err(Error::Precondition("matrix is not normalized".into()));
    }
    let free = h.order() - 1;
    if free >= usize::BITS as usize - 1 || (1usize << free) > cap {
        return Err(Error::capacity("degenerate set", format!("2^{free}"), cap));
    }
    (0..1usize << free)
        .map(|s| {
            let mut m = base.clone();
            for j in 0..free {
                if s >> j & 1 == 1 {
                    m.negate_column(j + 1);
                }
            }
            ShMatrix::try_from(m)
        })
        .collect()
}
