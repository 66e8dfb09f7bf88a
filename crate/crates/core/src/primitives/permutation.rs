use crate::error::{Error, Result};
use crate::primitives::vector::{ShVector, SignVector, UnityVector};

/// A permutation of `n` positions.
///
/// Applying it to a vector `v` gives `out[j] = v[source(j)]`: each output
/// position reads from a source position. The two-row notation
/// `(1→a₁, 2→a₂, …)`, where the entry at position `i` travels to position
/// `aᵢ`, is the inverse of this source map; use [`Permutation::from_two_row`]
/// for that form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    source: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            source: (0..n).collect(),
        }
    }

    /// Builds from the zero-based source map `out[j] = v[source[j]]`.
    pub fn from_source_map(source: Vec<usize>) -> Result<Self> {
        let n = source.len();
        let mut seen = vec![false; n];
        for &s in &source {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(Error::Domain(format!(
                    "{source:?} is not a bijection on 0..{n}"
                )));
            }
        }
        Ok(Self { source })
    }

    /// Builds from one-based two-row notation: `targets[i - 1]` is where the
    /// entry at position `i` ends up.
    pub fn from_two_row(targets: &[usize]) -> Result<Self> {
        let n = targets.len();
        let mut source = vec![usize::MAX; n];
        for (i, &t) in targets.iter().enumerate() {
            if t == 0 || t > n || source[t - 1] != usize::MAX {
                return Err(Error::Domain(format!(
                    "{targets:?} is not a bijection on 1..={n}"
                )));
            }
            source[t - 1] = i;
        }
        Ok(Self { source })
    }

    pub fn order(&self) -> usize {
        self.source.len()
    }

    pub fn source(&self, j: usize) -> usize {
        self.source[j]
    }

    pub fn inverse(&self) -> Self {
        let mut source = vec![0; self.source.len()];
        for (j, &s) in self.source.iter().enumerate() {
            source[s] = j;
        }
        Self { source }
    }

    pub fn is_identity(&self) -> bool {
        self.source.iter().enumerate().all(|(j, &s)| j == s)
    }

    pub fn apply_slice<T: Clone>(&self, v: &[T]) -> Result<Vec<T>> {
        self.check(v.len())?;
        Ok(self.source.iter().map(|&s| v[s].clone()).collect())
    }

    pub fn apply<V: Permute>(&self, v: &V) -> Result<V> {
        self.check(v.as_ref().order())?;
        Ok(v.permuted_unchecked(self))
    }

    fn check(&self, order: usize) -> Result<()> {
        if order != self.order() {
            return Err(Error::Dimension {
                expected: self.order(),
                found: order,
            });
        }
        Ok(())
    }

    pub(crate) fn permute_bits(&self, bits: u128) -> u128 {
        self.source
            .iter()
            .enumerate()
            .fold(0u128, |acc, (j, &s)| acc | ((bits >> s & 1) << j))
    }
}

/// Sign vectors that stay in their family under a permutation of entries.
pub trait Permute: AsRef<SignVector> + Sized {
    #[doc(hidden)]
    fn permuted_unchecked(&self, sigma: &Permutation) -> Self;
}

impl Permute for SignVector {
    fn permuted_unchecked(&self, sigma: &Permutation) -> Self {
        SignVector::from_bits_unchecked(self.order(), sigma.permute_bits(self.bits()))
    }
}

impl Permute for ShVector {
    fn permuted_unchecked(&self, sigma: &Permutation) -> Self {
        ShVector::from_bits_unchecked(self.order(), sigma.permute_bits(self.bits()))
    }
}

impl Permute for UnityVector {
    fn permuted_unchecked(&self, _sigma: &Permutation) -> Self {
        *self
    }
}
