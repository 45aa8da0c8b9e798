//! Exact scalar types used by the chord-length measurements.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

/// A nonnegative multiple of one half, stored as twice its value.
///
/// Layer counts are half-integral exactly when the graph has a diameter, so
/// they are kept here instead of in a float.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    doubled: u64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { doubled: 0 };
    pub const HALF: HalfInt = HalfInt { doubled: 1 };

    pub const fn from_doubled(doubled: u64) -> Self {
        HalfInt { doubled }
    }

    pub const fn from_int(value: u64) -> Self {
        HalfInt { doubled: 2 * value }
    }

    /// Twice the represented value.
    pub const fn doubled(self) -> u64 {
        self.doubled
    }

    pub const fn is_integer(self) -> bool {
        self.doubled.is_multiple_of(2)
    }

    /// The value as an integer, or `None` when it has a half part.
    pub const fn to_int(self) -> Option<u64> {
        if self.is_integer() {
            Some(self.doubled / 2)
        } else {
            None
        }
    }

    pub fn checked_sub(self, other: HalfInt) -> Option<HalfInt> {
        self.doubled.checked_sub(other.doubled).map(HalfInt::from_doubled)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;

    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_doubled(self.doubled + rhs.doubled)
    }
}

impl AddAssign for HalfInt {
    fn add_assign(&mut self, rhs: HalfInt) {
        self.doubled += rhs.doubled;
    }
}

impl Sum for HalfInt {
    fn sum<I: Iterator<Item = HalfInt>>(iter: I) -> HalfInt {
        iter.fold(HalfInt::ZERO, Add::add)
    }
}

impl From<u64> for HalfInt {
    fn from(value: u64) -> Self {
        HalfInt::from_int(value)
    }
}

/// Prints `3/2` for half-integral values and `7` otherwise.
impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

/// A total chord length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TclValue(pub u64);

impl TclValue {
    pub const fn get(self) -> u64 {
        self.0
    }

    /// Absolute difference, used as a search distance.
    pub fn abs_diff(self, other: TclValue) -> u64 {
        self.0.abs_diff(other.0)
    }
}

impl From<u64> for TclValue {
    fn from(value: u64) -> Self {
        TclValue(value)
    }
}

impl From<TclValue> for HalfInt {
    fn from(value: TclValue) -> Self {
        HalfInt::from_int(value.0)
    }
}

impl fmt::Display for TclValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
