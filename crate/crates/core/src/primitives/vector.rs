use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest vector or matrix order supported by the packed representation.
pub const MAX_ORDER: usize = 128;

/// A ±1 vector of order `1..=MAX_ORDER`, packed one sign per bit.
///
/// Bit `j` set means entry `j` is −1, clear means +1. Bits at or above the
/// order are always zero, so equality of packed words is equality of vectors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    order: usize,
    bits: u128,
}

#[inline]
fn mask(order: usize) -> u128 {
    if order == MAX_ORDER {
        u128::MAX
    } else {
        (1u128 << order) - 1
    }
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::capacity(
            "vector order",
            order,
            format!("1..={MAX_ORDER}"),
        ));
    }
    Ok(())
}

impl SignVector {
    /// The all-ones vector.
    pub fn ones(order: usize) -> Result<Self> {
        check_order(order)?;
        Ok(Self { order, bits: 0 })
    }

    pub fn from_bits(order: usize, bits: u128) -> Result<Self> {
        check_order(order)?;
        if bits & !mask(order) != 0 {
            return Err(Error::InvalidVector(format!(
                "packed bits {bits:#x} extend beyond order {order}"
            )));
        }
        Ok(Self { order, bits })
    }

    /// Builds a vector from entries that must each be +1 or −1.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        check_order(signs.len())?;
        let mut bits = 0u128;
        for (j, &s) in signs.iter().enumerate() {
            match s {
                1 => {}
                -1 => bits |= 1 << j,
                other => {
                    return Err(Error::InvalidVector(format!(
                        "entry {j} is {other}, expected +1 or -1"
                    )))
                }
            }
        }
        Ok(Self {
            order: signs.len(),
            bits,
        })
    }

    #[inline]
    pub(crate) fn from_bits_unchecked(order: usize, bits: u128) -> Self {
        debug_assert!(order > 0 && order <= MAX_ORDER && bits & !mask(order) == 0);
        Self { order, bits }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn bits(&self) -> u128 {
        self.bits
    }

    #[inline]
    pub fn is_negative(&self, j: usize) -> bool {
        debug_assert!(j < self.order);
        self.bits >> j & 1 == 1
    }

    /// Entry `j` as +1 or −1.
    #[inline]
    pub fn get(&self, j: usize) -> i8 {
        if self.is_negative(j) {
            -1
        } else {
            1
        }
    }

    pub fn negative_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_balanced(&self) -> bool {
        2 * self.negative_count() == self.order
    }

    pub fn is_ones(&self) -> bool {
        self.bits == 0
    }

    pub fn negated(&self) -> Self {
        Self {
            order: self.order,
            bits: !self.bits & mask(self.order),
        }
    }

    /// Flips the sign of entry `j`.
    #[inline]
    pub fn flip(&mut self, j: usize) {
        debug_assert!(j < self.order);
        self.bits ^= 1 << j;
    }

    pub fn signs(&self) -> impl Iterator<Item = i8> + '_ {
        (0..self.order).map(move |j| self.get(j))
    }

    pub fn to_vec(&self) -> Vec<i8> {
        self.signs().collect()
    }

    /// Positions holding −1, in increasing order.
    pub fn negative_positions(&self) -> Vec<usize> {
        (0..self.order).filter(|&j| self.is_negative(j)).collect()
    }

    /// Positions holding +1, in increasing order.
    pub fn positive_positions(&self) -> Vec<usize> {
        (0..self.order).filter(|&j| !self.is_negative(j)).collect()
    }

    /// Inner product without the order check. `m - 2 * popcount(a ^ b)`.
    #[inline]
    pub(crate) fn dot(&self, other: &Self) -> i64 {
        debug_assert_eq!(self.order, other.order);
        self.order as i64 - 2 * (self.bits ^ other.bits).count_ones() as i64
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.order {
            f.write_str(if self.is_negative(j) { "-" } else { "+" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignVector({self})")
    }
}

impl FromStr for SignVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut signs = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '+' => signs.push(1),
                '-' => signs.push(-1),
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        column: i + 1,
                        message: format!("unexpected character {other:?}, expected '+' or '-'"),
                    })
                }
            }
        }
        if signs.is_empty() {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "empty sign string".into(),
            });
        }
        Self::from_signs(&signs)
    }
}

impl AsRef<SignVector> for SignVector {
    fn as_ref(&self) -> &SignVector {
        self
    }
}

macro_rules! string_serde {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(SignVector);
string_serde!(ShVector);

/// A balanced ±1 vector of order 4k: 2k entries are −1 and 2k are +1.
///
/// These are the only admissible non-first columns of a seminormalized
/// Hadamard matrix.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShVector(SignVector);

impl ShVector {
    pub fn new(v: SignVector) -> Result<Self> {
        if !v.order().is_multiple_of(4) {
            return Err(Error::BadOrder(v.order()));
        }
        if !v.is_balanced() {
            return Err(Error::InvalidVector(format!(
                "{v} has {} negative entries, expected {}",
                v.negative_count(),
                v.order() / 2
            )));
        }
        Ok(Self(v))
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        Self::new(SignVector::from_signs(signs)?)
    }

    pub fn from_bits(order: usize, bits: u128) -> Result<Self> {
        Self::new(SignVector::from_bits(order, bits)?)
    }

    #[inline]
    pub(crate) fn from_bits_unchecked(order: usize, bits: u128) -> Self {
        let v = SignVector::from_bits_unchecked(order, bits);
        debug_assert!(v.is_balanced() && order.is_multiple_of(4));
        Self(v)
    }

    /// The `k` for which the order is 4k.
    pub fn k(&self) -> usize {
        self.0.order() / 4
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.0.order()
    }

    #[inline]
    pub fn bits(&self) -> u128 {
        self.0.bits()
    }

    #[inline]
    pub fn as_signs(&self) -> &SignVector {
        &self.0
    }

    pub fn negated(&self) -> Self {
        Self(self.0.negated())
    }

    /// Swaps the −1 at `neg` with the +1 at `pos`, keeping the vector balanced.
    ///
    /// Panics in debug builds if the entries do not have the stated signs.
    #[inline]
    pub fn exchange(&mut self, neg: usize, pos: usize) {
        debug_assert!(self.0.is_negative(neg) && !self.0.is_negative(pos));
        self.0.flip(neg);
        self.0.flip(pos);
    }
}

impl AsRef<SignVector> for ShVector {
    fn as_ref(&self) -> &SignVector {
        &self.0
    }
}

impl From<ShVector> for SignVector {
    fn from(v: ShVector) -> Self {
        v.0
    }
}

impl TryFrom<SignVector> for ShVector {
    type Error = Error;

    fn try_from(v: SignVector) -> Result<Self> {
        Self::new(v)
    }
}

impl FromStr for ShVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s.parse()?)
    }
}

impl fmt::Display for ShVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for ShVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ShVector({})", self.0)
    }
}

/// The all-ones vector of a given order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct UnityVector(SignVector);

impl UnityVector {
    pub fn new(order: usize) -> Result<Self> {
        Ok(Self(SignVector::ones(order)?))
    }

    pub fn order(&self) -> usize {
        self.0.order()
    }
}

impl AsRef<SignVector> for UnityVector {
    fn as_ref(&self) -> &SignVector {
        &self.0
    }
}

impl From<UnityVector> for SignVector {
    fn from(v: UnityVector) -> Self {
        v.0
    }
}

/// Σⱼ a[j]·b[j] for two ±1 vectors of the same order.
pub fn inner_product<A, B>(a: &A, b: &B) -> Result<i64>
where
    A: AsRef<SignVector> + ?Sized,
    B: AsRef<SignVector> + ?Sized,
{
    let (a, b) = (a.as_ref(), b.as_ref());
    if a.order() != b.order() {
        return Err(Error::Dimension {
            expected: a.order(),
            found: b.order(),
        });
    }
    Ok(a.dot(b))
}

pub fn is_orthogonal<A, B>(a: &A, b: &B) -> Result<bool>
where
    A: AsRef<SignVector> + ?Sized,
    B: AsRef<SignVector> + ?Sized,
{
    Ok(inner_product(a, b)? == 0)
}
