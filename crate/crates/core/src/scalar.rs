//! Scalar abstraction shared by the exact and floating evaluation paths.
//!
//! Every formula that only needs ring operations plus multiplication by a
//! rational constant (character-map evaluation, brick specialization, power
//! sum products) is written once against [`Scalar`] and instantiated for
//! exact rationals, real floats and complex floats.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// A commutative ring element that can absorb exact rational constants.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Embeds an exact rational. Floating instantiations round to nearest.
    fn from_rational(r: &BigRational) -> Self;

    fn from_integer(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    /// Multiplies by an exact rational constant.
    fn scale(&self, r: &BigRational) -> Self {
        self.clone() * Self::from_rational(r)
    }

    fn powu(&self, exp: usize) -> Self {
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

impl Scalar for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn scale(&self, r: &BigRational) -> Self {
        self * r
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Scalar for f64 {
    fn from_rational(r: &BigRational) -> Self {
        rational_to_f64(r)
    }
}

impl Scalar for f32 {
    fn from_rational(r: &BigRational) -> Self {
        rational_to_f64(r) as f32
    }
}

impl Scalar for Complex<f64> {
    fn from_rational(r: &BigRational) -> Self {
        Complex::new(rational_to_f64(r), 0.0)
    }
}

impl Scalar for Complex<f32> {
    fn from_rational(r: &BigRational) -> Self {
        Complex::new(rational_to_f64(r) as f32, 0.0)
    }
}
