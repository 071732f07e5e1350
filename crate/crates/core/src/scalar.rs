//! Integer backends for exact rational arithmetic.
//!
//! Every rational computation in the crate is generic over [`DadicInt`], so the
//! same code runs on machine integers (fast, overflow-checked) or on
//! [`num_bigint::BigInt`] (never overflows).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Signed integer type usable as numerator/denominator of a [`crate::DadicRational`].
pub trait DadicInt:
    Integer
    + Signed
    + Clone
    + Hash
    + Debug
    + Display
    + FromStr
    + FromPrimitive
    + ToPrimitive
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + Send
    + Sync
    + 'static
{
    fn from_digit(value: u64) -> Self {
        Self::from_u64(value).expect("small constants fit every backend")
    }
}

impl DadicInt for i64 {}
impl DadicInt for i128 {}
impl DadicInt for num_bigint::BigInt {}

pub(crate) fn checked_add<T: DadicInt>(a: &T, b: &T) -> Result<T> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn checked_sub<T: DadicInt>(a: &T, b: &T) -> Result<T> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

pub(crate) fn checked_mul<T: DadicInt>(a: &T, b: &T) -> Result<T> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

pub(crate) fn checked_pow<T: DadicInt>(base: &T, exp: usize) -> Result<T> {
    let mut acc = T::one();
    for _ in 0..exp {
        acc = checked_mul(&acc, base)?;
    }
    Ok(acc)
}

/// Residue of `value` modulo `modulus` in `0..modulus`.
pub(crate) fn residue<T: DadicInt>(value: &T, modulus: u8) -> u64 {
    value
        .mod_floor(&T::from_digit(modulus as u64))
        .to_u64()
        .expect("residue is below the radix")
}

/// Inverse of `value` modulo `modulus`, if it exists.
pub(crate) fn inverse_mod<T: DadicInt>(value: &T, modulus: u8) -> Option<u64> {
    let m = modulus as u64;
    let r = residue(value, modulus);
    (1..m).find(|k| (r * k) % m == 1)
}
