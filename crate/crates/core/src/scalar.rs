//! Scalar abstraction for cube entries.
//!
//! Every cube operation is written against [`Entry`], so the same code runs on
//! machine words (`u32`, `u64`, `u128`) and on arbitrary-precision
//! [`num_bigint::BigUint`].

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, ToPrimitive, Unsigned};

/// A nonnegative integer usable as a cube entry or line sum.
pub trait Entry:
    Unsigned
    + CheckedAdd
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Clone
    + Ord
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts a `u64`, failing when the value does not fit.
    fn from_u64_checked(value: u64) -> Option<Self> {
        <Self as FromPrimitive>::from_u64(value)
    }
}

impl<T> Entry for T where
    T: Unsigned
        + CheckedAdd
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + FromStr
        + Clone
        + Ord
        + Hash
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Overflow-checked `a + b`.
pub(crate) fn add<T: Entry>(a: &T, b: &T) -> crate::Result<T> {
    a.checked_add(b).ok_or(crate::Error::Overflow)
}

/// Overflow-checked `a * b`.
pub(crate) fn mul<T: Entry>(a: &T, b: &T) -> crate::Result<T> {
    a.checked_mul(b).ok_or(crate::Error::Overflow)
}

/// Lifts a `usize` into `T`.
pub(crate) fn from_usize<T: Entry>(value: usize) -> crate::Result<T> {
    T::from_usize(value).ok_or(crate::Error::Overflow)
}
