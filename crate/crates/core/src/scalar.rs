//! Numeric abstraction for the closed-form throughput formulas.
//!
//! Slot counting is always integral. Only the formulas that combine duty
//! factors (products, binomial sums) are generic, so the same code can run
//! exactly over rationals or approximately over `f32`/`f64`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Num, ToPrimitive};

use crate::Rational;

/// A field-like scalar the throughput formulas can be evaluated in.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Send + Sync {
    fn from_rational(r: &Rational) -> Self;

    fn from_count(n: u64) -> Self;

    fn to_f64(&self) -> f64;

    /// True when arithmetic in this type is exact.
    const EXACT: bool;

    fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        *r.numer() as f64 / *r.denom() as f64
    }

    fn from_count(n: u64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        (*r.numer() as f64 / *r.denom() as f64) as f32
    }

    fn from_count(n: u64) -> Self {
        n as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

// Machine-word rationals panic on overflow in debug builds; prefer
// `BigRational` for large user counts.
impl Scalar for Ratio<i64> {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        *r
    }

    fn from_count(n: u64) -> Self {
        Ratio::from_integer(n as i64)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for Ratio<i128> {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        Ratio::new(*r.numer() as i128, *r.denom() as i128)
    }

    fn from_count(n: u64) -> Self {
        Ratio::from_integer(n as i128)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for Ratio<BigInt> {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        Ratio::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
    }

    fn from_count(n: u64) -> Self {
        Ratio::from_integer(BigInt::from(n))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::BigRational;

    #[test]
    fn pow_matches_repeated_multiplication() {
        let r = Rational::new(2, 3);
        assert_eq!(Scalar::pow(&r, 0), Rational::from_integer(1));
        assert_eq!(Scalar::pow(&r, 5), Rational::new(32, 243));
        assert!((Scalar::pow(&0.5f64, 10) - 1.0 / 1024.0).abs() < 1e-15);
    }

    #[test]
    fn conversions_agree() {
        let r = Rational::new(7, 27);
        let big = <BigRational as Scalar>::from_rational(&r);
        assert!((Scalar::to_f64(&big) - 7.0 / 27.0).abs() < 1e-15);
        assert_eq!(<Ratio<i128> as Scalar>::from_rational(&r), Ratio::new(7i128, 27));
        assert!((<f32 as Scalar>::from_rational(&r) - 7.0 / 27.0).abs() < 1e-6);
    }
}
