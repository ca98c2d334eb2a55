//! Exact half-integers and coordinate vectors of them.
//!
//! Every value is stored doubled, so `HalfInt(3)` is `3/2`. All arithmetic
//! stays in `i64`; pairings come back as exact rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A number in `½ℤ`, stored as twice its value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    /// Builds `doubled / 2`.
    pub const fn from_doubled(doubled: i64) -> Self {
        HalfInt(doubled)
    }

    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// `Some(n)` when the value is the integer `n`.
    pub const fn to_integer(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.0 / 2)
        } else {
            None
        }
    }

    pub const fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    pub const fn signum(self) -> i64 {
        self.0.signum()
    }

    /// Smallest integer not below `self`.
    pub fn ceil(self) -> i64 {
        self.0.div_euclid(2) + self.0.rem_euclid(2)
    }

    pub fn to_rational(self) -> Rational64 {
        Rational64::new(self.0, 2)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl From<i64> for HalfInt {
    fn from(n: i64) -> Self {
        HalfInt::from_int(n)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl AddAssign for HalfInt {
    fn add_assign(&mut self, rhs: HalfInt) {
        self.0 += rhs.0;
    }
}

impl SubAssign for HalfInt {
    fn sub_assign(&mut self, rhs: HalfInt) {
        self.0 -= rhs.0;
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl Mul<i64> for HalfInt {
    type Output = HalfInt;
    fn mul(self, rhs: i64) -> HalfInt {
        HalfInt(self.0 * rhs)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `"k"` or `"k/2"` (with an optional sign on `k`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a half-integer: {s:?}"));
        match s.split_once('/') {
            None => s.parse::<i64>().map(HalfInt::from_int).map_err(|_| bad()),
            Some((num, den)) => {
                if den.trim() != "2" {
                    return Err(bad());
                }
                num.trim().parse::<i64>().map(HalfInt).map_err(|_| bad())
            }
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A coordinate vector with half-integer entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<HalfInt>);

impl Weight {
    pub fn zero(len: usize) -> Self {
        Weight(vec![HalfInt::ZERO; len])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Weight(coords.iter().copied().map(HalfInt::from_int).collect())
    }

    pub fn from_doubled(coords: &[i64]) -> Self {
        Weight(coords.iter().copied().map(HalfInt::from_doubled).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[HalfInt] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, HalfInt> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == HalfInt::ZERO)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    fn check_len(&self, other: &Weight) -> Result<()> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            })
        }
    }

    /// Pairing `⟨a, b⟩ = Σ aᵢbᵢ` on doubled integers; the result is divided by 4 only at the end.
    fn pairing_quadrupled(&self, other: &Weight) -> i64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.doubled() * b.doubled())
            .sum()
    }

    /// The standard coordinate pairing.
    pub fn pairing(&self, other: &Weight) -> Result<Rational64> {
        self.check_len(other)?;
        Ok(Rational64::new(self.pairing_quadrupled(other), 4))
    }

    pub fn norm_sq(&self) -> Rational64 {
        Rational64::new(self.pairing_quadrupled(self), 4)
    }

    pub fn try_add(&self, other: &Weight) -> Result<Weight> {
        self.check_len(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Weight) -> Result<Weight> {
        self.check_len(other)?;
        Ok(self - other)
    }

    pub fn concat(&self, other: &Weight) -> Weight {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Weight(v)
    }

    /// Coordinates sorted into non-increasing order.
    pub fn sorted_desc(&self) -> Weight {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Weight(v)
    }
}

impl Index<usize> for Weight {
    type Output = HalfInt;
    fn index(&self, i: usize) -> &HalfInt {
        &self.0[i]
    }
}

impl IndexMut<usize> for Weight {
    fn index_mut(&mut self, i: usize) -> &mut HalfInt {
        &mut self.0[i]
    }
}

impl FromIterator<HalfInt> for Weight {
    fn from_iter<I: IntoIterator<Item = HalfInt>>(iter: I) -> Self {
        Weight(iter.into_iter().collect())
    }
}

impl<'a> Add<&'a Weight> for &'a Weight {
    type Output = Weight;
    /// Panics on a length mismatch; use [`Weight::try_add`] on unchecked input.
    fn add(self, rhs: &Weight) -> Weight {
        assert_eq!(self.len(), rhs.len(), "weight length mismatch");
        self.0.iter().zip(&rhs.0).map(|(a, b)| *a + *b).collect()
    }
}

impl<'a> Sub<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        assert_eq!(self.len(), rhs.len(), "weight length mismatch");
        self.0.iter().zip(&rhs.0).map(|(a, b)| *a - *b).collect()
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.0.iter().map(|c| -*c).collect()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
