//! The structured families of balanced ±1 vectors and the orthogonal set of
//! an SH vector.
//!
//! Orders are indexed by `k`: SH, OSH and PSH vectors have order 4k, HSH and
//! OHH vectors have order 2k. Every enumeration yields its members in
//! increasing order of their packed bits.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::Rng;

use crate::analysis::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::primitives::{Permutation, Permute, ShVector, SignVector, MAX_ORDER};

/// Upper bound on how many vectors an enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FamilyKind {
    /// All-ones vector of order k.
    Unity,
    /// `(−ᵏ1, ᵏ1)`, order 2k.
    Ohh,
    /// Every permutation of the OHH vector, order 2k.
    Hsh,
    /// `(−ᵏ1, −ᵏ1, ᵏ1, ᵏ1)`, order 4k.
    Osh,
    /// Concatenations of two HSH vectors, order 4k.
    Psh,
    /// Every permutation of the OSH vector, order 4k.
    Sh,
}

impl FamilyKind {
    pub fn vector_order(self, k: usize) -> usize {
        match self {
            FamilyKind::Unity => k,
            FamilyKind::Ohh | FamilyKind::Hsh => 2 * k,
            FamilyKind::Osh | FamilyKind::Psh | FamilyKind::Sh => 4 * k,
        }
    }

    /// Exact family size.
    pub fn count(self, k: usize) -> BigUint {
        let k = k as u64;
        match self {
            FamilyKind::Unity | FamilyKind::Ohh | FamilyKind::Osh => BigUint::from(1u8),
            FamilyKind::Hsh => binomial(2 * k, k).expect("r <= n"),
            FamilyKind::Psh => binomial::<BigUint>(2 * k, k).expect("r <= n").pow(2),
            FamilyKind::Sh => binomial(4 * k, 2 * k).expect("r <= n"),
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "unity" => FamilyKind::Unity,
            "ohh" => FamilyKind::Ohh,
            "hsh" => FamilyKind::Hsh,
            "osh" => FamilyKind::Osh,
            "psh" => FamilyKind::Psh,
            "sh" => FamilyKind::Sh,
            other => return Err(Error::UnknownFormat(other.to_string())),
        })
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Unity => "unity",
            FamilyKind::Ohh => "ohh",
            FamilyKind::Hsh => "hsh",
            FamilyKind::Osh => "osh",
            FamilyKind::Psh => "psh",
            FamilyKind::Sh => "sh",
        })
    }
}

/// A family of vectors for a fixed `k`, enumerable on demand.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct VectorFamily {
    pub kind: FamilyKind,
    pub k: usize,
}

impl VectorFamily {
    pub fn new(kind: FamilyKind, k: usize) -> Result<Self> {
        check_k(k, kind.vector_order(k))?;
        Ok(Self { kind, k })
    }

    pub fn count(&self) -> BigUint {
        self.kind.count(self.k)
    }

    /// Streams the members, subject to `cap`.
    pub fn members(&self, cap: u64) -> Result<Box<dyn Iterator<Item = SignVector> + Send>> {
        let k = self.k;
        Ok(match self.kind {
            FamilyKind::Unity => Box::new(std::iter::once(SignVector::ones(k)?)),
            FamilyKind::Ohh => Box::new(std::iter::once(ohh_vector(k)?)),
            FamilyKind::Hsh => Box::new(enumerate_hsh_vectors_with_cap(k, cap)?),
            FamilyKind::Osh => Box::new(std::iter::once(SignVector::from(osh_vector(k)?))),
            FamilyKind::Psh => {
                Box::new(enumerate_psh_vectors_with_cap(k, cap)?.map(SignVector::from))
            }
            FamilyKind::Sh => {
                Box::new(enumerate_sh_vectors_with_cap(k, cap)?.map(SignVector::from))
            }
        })
    }
}

fn check_k(k: usize, order: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    if order > MAX_ORDER {
        return Err(Error::capacity("vector order", order, MAX_ORDER));
    }
    Ok(())
}

fn check_cap(what: &'static str, n: u64, r: u64, squared: bool, cap: u64) -> Result<u64> {
    let count =
        binomial::<u64>(n, r)
            .ok()
            .and_then(|c| if squared { c.checked_mul(c) } else { Some(c) });
    match count {
        Some(c) if c <= cap => Ok(c),
        _ => {
            let exact: BigUint = binomial(n, r)?;
            let exact = if squared { exact.pow(2) } else { exact };
            Err(Error::capacity(what, exact, cap))
        }
    }
}

/// The OHH vector of order 2k: k entries −1 followed by k entries +1.
pub fn ohh_vector(k: usize) -> Result<SignVector> {
    check_k(k, 2 * k)?;
    SignVector::from_bits(2 * k, (1u128 << k) - 1)
}

/// The OSH vector of order 4k: 2k entries −1 followed by 2k entries +1.
pub fn osh_vector(k: usize) -> Result<ShVector> {
    check_k(k, 4 * k)?;
    ShVector::from_bits(4 * k, (1u128 << (2 * k)) - 1)
}

/// All `order`-bit words with exactly `ones` bits set, in increasing order.
#[derive(Clone, Debug)]
pub struct FixedWeightWords {
    next: u128,
    remaining: u64,
}

impl FixedWeightWords {
    fn new(ones: usize, count: u64) -> Self {
        let first = if ones == 0 {
            0
        } else {
            u128::MAX >> (128 - ones)
        };
        Self {
            next: first,
            remaining: count,
        }
    }
}

impl Iterator for FixedWeightWords {
    type Item = u128;

    fn next(&mut self) -> Option<u128> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let x = self.next;
        if self.remaining > 0 {
            // Gosper's hack: smallest larger word with the same popcount.
            let c = x & x.wrapping_neg();
            let r = x.wrapping_add(c);
            self.next = (((r ^ x) >> 2) / c) | r;
        }
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.remaining as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for FixedWeightWords {}

/// Iterator over every SH vector of order 4k.
#[derive(Clone, Debug)]
pub struct ShVectors {
    order: usize,
    words: FixedWeightWords,
}

impl Iterator for ShVectors {
    type Item = ShVector;

    fn next(&mut self) -> Option<ShVector> {
        let order = self.order;
        self.words
            .next()
            .map(|bits| ShVector::from_bits_unchecked(order, bits))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.words.size_hint()
    }
}

impl ExactSizeIterator for ShVectors {}

pub fn enumerate_sh_vectors(k: usize) -> Result<ShVectors> {
    enumerate_sh_vectors_with_cap(k, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_sh_vectors_with_cap(k: usize, cap: u64) -> Result<ShVectors> {
    check_k(k, 4 * k)?;
    let n = 4 * k as u64;
    let count = check_cap("SH vector enumeration", n, n / 2, false, cap)?;
    Ok(ShVectors {
        order: 4 * k,
        words: FixedWeightWords::new(2 * k, count),
    })
}

pub fn enumerate_hsh_vectors(k: usize) -> Result<impl Iterator<Item = SignVector>> {
    enumerate_hsh_vectors_with_cap(k, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_hsh_vectors_with_cap(
    k: usize,
    cap: u64,
) -> Result<impl Iterator<Item = SignVector> + Send> {
    check_k(k, 2 * k)?;
    let count = check_cap("HSH vector enumeration", 2 * k as u64, k as u64, false, cap)?;
    Ok(FixedWeightWords::new(k, count).map(move |b| SignVector::from_bits_unchecked(2 * k, b)))
}

/// Packed words of every PSH vector of order 4k: the low 2k positions and
/// the high 2k positions are each balanced.
fn psh_words(k: usize) -> impl Iterator<Item = u128> + Clone + Send {
    let half = binomial::<u64>(2 * k as u64, k as u64).expect("checked by caller");
    FixedWeightWords::new(k, half)
        .flat_map(move |high| FixedWeightWords::new(k, half).map(move |low| low | high << (2 * k)))
}

pub fn enumerate_psh_vectors(k: usize) -> Result<impl Iterator<Item = ShVector>> {
    enumerate_psh_vectors_with_cap(k, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_psh_vectors_with_cap(
    k: usize,
    cap: u64,
) -> Result<impl Iterator<Item = ShVector> + Send> {
    check_k(k, 4 * k)?;
    check_cap("PSH vector enumeration", 2 * k as u64, k as u64, true, cap)?;
    Ok(psh_words(k).map(move |b| ShVector::from_bits_unchecked(4 * k, b)))
}

/// The permutation that carries the OSH vector onto `v`.
///
/// The i-th −1 position of the OSH vector is sent to the i-th −1 position of
/// `v`, and likewise for the +1 positions, both in increasing order.
pub fn canonical_permutation(v: &ShVector) -> Permutation {
    let half = v.order() / 2;
    let mut source = vec![0; v.order()];
    for (i, p) in v.as_signs().negative_positions().into_iter().enumerate() {
        source[p] = i;
    }
    for (i, p) in v.as_signs().positive_positions().into_iter().enumerate() {
        source[p] = half + i;
    }
    Permutation::from_source_map(source).expect("positions partition 0..order")
}

/// Every SH vector orthogonal to `v`, obtained by carrying the PSH family
/// along the canonical permutation from the OSH vector to `v`.
///
/// The result has C(2k,k)² members, listed in increasing packed order.
pub fn orthogonal_set(v: &ShVector) -> Result<Vec<ShVector>> {
    orthogonal_set_with_cap(v, DEFAULT_ENUMERATION_CAP)
}

pub fn orthogonal_set_with_cap(v: &ShVector, cap: u64) -> Result<Vec<ShVector>> {
    let k = v.k();
    let sigma = canonical_permutation(v);
    let mut out: Vec<ShVector> = enumerate_psh_vectors_with_cap(k, cap)?
        .map(|w| w.permuted_unchecked(&sigma))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Uniformly random SH vector of order 4k.
///
/// Chooses the 2k positions of −1 with a partial Fisher–Yates shuffle.
pub fn random_sh_vector<R: Rng + ?Sized>(k: usize, rng: &mut R) -> ShVector {
    assert!(
        k >= 1 && 4 * k <= MAX_ORDER,
        "k = {k} outside supported range"
    );
    let n = 4 * k;
    let mut idx = [0u8; MAX_ORDER];
    for (i, slot) in idx[..n].iter_mut().enumerate() {
        *slot = i as u8;
    }
    let mut bits = 0u128;
    for i in 0..2 * k {
        let j = rng.random_range(i..n);
        idx.swap(i, j);
        bits |= 1 << idx[i];
    }
    ShVector::from_bits_unchecked(n, bits)
}
