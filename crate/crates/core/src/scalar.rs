//! Scalar abstraction shared by every exact routine in the crate.
//!
//! All arithmetic is over an integer ring `T: Int` (and its fraction field
//! `Ratio<T>`). `BigInt` is the default everywhere; `i64`/`i128` work for
//! small inputs and are noticeably faster, at the cost of silent overflow
//! in release builds.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact signed integer type usable as lattice entries and series coefficients.
pub trait Int:
    Clone
    + Debug
    + Display
    + Hash
    + Ord
    + Integer
    + Signed
    + Roots
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Int for T where
    T: Clone
        + Debug
        + Display
        + Hash
        + Ord
        + Integer
        + Signed
        + Roots
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Exact rationals over `T`.
pub type Rational<T> = Ratio<T>;

#[inline]
pub(crate) fn int<T: Int>(v: i64) -> T {
    T::from_i64(v).expect("i64 fits every Int type")
}

#[inline]
pub(crate) fn rat<T: Int>(v: T) -> Ratio<T> {
    Ratio::from_integer(v)
}

/// Parses a decimal integer literal into `T`.
pub(crate) fn parse_int<T: Int>(s: &str) -> Option<T> {
    T::from_str_radix(s.trim(), 10).ok()
}

/// Largest integer `s` with `s*s <= n`, for `n >= 0`.
pub(crate) fn isqrt<T: Int>(n: &T) -> T {
    n.sqrt()
}

/// `Some(s)` when `n` is a perfect square `s*s` with `s >= 0`.
pub(crate) fn exact_sqrt<T: Int>(n: &T) -> Option<T> {
    if n.is_negative() {
        return None;
    }
    let s = isqrt(n);
    if s.clone() * s.clone() == *n {
        Some(s)
    } else {
        None
    }
}

pub(crate) fn ratio_to_f64<T: Int>(r: &Ratio<T>) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Floor of a rational.
pub(crate) fn ratio_floor<T: Int>(r: &Ratio<T>) -> T {
    r.numer().div_floor(r.denom())
}

/// Reduces a rational into the half-open interval `[0, modulus)`.
pub(crate) fn ratio_mod<T: Int>(r: &Ratio<T>, modulus: &T) -> Ratio<T> {
    let m = rat(modulus.clone());
    let q = ratio_floor(&(r.clone() / m.clone()));
    r.clone() - m * rat(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn square_roots() {
        assert_eq!(exact_sqrt(&49i64), Some(7));
        assert_eq!(exact_sqrt(&48i64), None);
        assert_eq!(exact_sqrt(&-4i64), None);
        assert_eq!(exact_sqrt(&BigInt::from(0)), Some(BigInt::from(0)));
    }

    #[test]
    fn rational_mod_two() {
        let r = Ratio::new(-3i64, 4);
        assert_eq!(ratio_mod(&r, &2), Ratio::new(5, 4));
        assert_eq!(ratio_mod(&Ratio::new(7i64, 2), &2), Ratio::new(3, 2));
    }
}
