//! Scalar field abstraction.
//!
//! Everything in the crate is generic over [`Scalar`]. Exact results need an
//! exact field such as [`num_rational::BigRational`]; `f64` and `f32` are
//! supported for fast approximate evaluation, where zero tests are literal.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone + PartialEq + PartialOrd + Debug + Display + Send + Sync + Zero + One + Neg<Output = Self> + 'static
{
    /// True when arithmetic is exact, so zero tests are reliable.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).div_ref(&Self::from_i64(den))
    }
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn div_ref(&self, rhs: &Self) -> Self;
    fn to_f64(&self) -> f64;

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self = self.add_ref(rhs);
    }
    fn is_positive_s(&self) -> bool {
        *self > Self::zero()
    }
    fn is_negative_s(&self) -> bool {
        *self < Self::zero()
    }
    fn abs_s(&self) -> Self {
        if self.is_negative_s() {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn powi_s(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }
    /// Positive normaliser `c` such that `coeffs / c` is as simple as the
    /// field allows: a primitive integer vector for rationals, unit leading
    /// magnitude otherwise. Returns one for an all-zero slice.
    /// Image in `Z / MODULUS`, if the scalar is rational with denominator
    /// prime to the modulus.
    fn modular(&self) -> Option<u64> {
        None
    }

    fn content(coeffs: &[Self]) -> Self {
        coeffs
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.abs_s())
            .unwrap_or_else(Self::one)
    }
}

fn ratio_content<T>(coeffs: &[Ratio<T>]) -> Ratio<T>
where
    T: Clone + Integer + Signed,
{
    let mut g = T::zero();
    let mut l = T::one();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = g.gcd(c.numer());
        l = l.lcm(c.denom());
    }
    if g.is_zero() {
        Ratio::one()
    } else {
        Ratio::new(g, l)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn modular(&self) -> Option<u64> {
        let m = BigInt::from(MODULUS);
        let n = self.numer().mod_floor(&m).to_u64()?;
        let d = self.denom().mod_floor(&m).to_u64()?;
        modular::div(n, d)
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn content(coeffs: &[Self]) -> Self {
        ratio_content(coeffs)
    }
}

impl Scalar for Ratio<i64> {
    const EXACT: bool = true;
    fn modular(&self) -> Option<u64> {
        let m = MODULUS as i128;
        let n = (*self.numer() as i128).rem_euclid(m) as u64;
        let d = (*self.denom() as i128).rem_euclid(m) as u64;
        modular::div(n, d)
    }
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn content(coeffs: &[Self]) -> Self {
        ratio_content(coeffs)
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;
            fn from_i64(v: i64) -> Self {
                v as $t
            }
            fn add_ref(&self, rhs: &Self) -> Self {
                self + rhs
            }
            fn sub_ref(&self, rhs: &Self) -> Self {
                self - rhs
            }
            fn mul_ref(&self, rhs: &Self) -> Self {
                self * rhs
            }
            fn div_ref(&self, rhs: &Self) -> Self {
                self / rhs
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    };
}

float_scalar!(f64);
float_scalar!(f32);

/// Convert exact rationals into another scalar type.
pub trait FromRational: Scalar {
    fn from_rational(r: &BigRational) -> Self;
}

impl FromRational for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
}

impl FromRational for f64 {
    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
}

impl FromRational for f32 {
    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f32(r).unwrap_or(f32::NAN)
    }
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::from_ratio(num, den)
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_i64(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_content_is_primitive() {
        let c = BigRational::content(&[rat(2, 3), rat(-4, 9), rat(0, 1)]);
        assert_eq!(c, rat(2, 9));
    }

    #[test]
    fn float_content_uses_leading_magnitude() {
        assert_eq!(f64::content(&[0.0, -4.0, 2.0]), 4.0);
    }

    #[test]
    fn powers() {
        assert_eq!(rat(-2, 3).powi_s(3), rat(-8, 27));
        assert_eq!(3.0f64.powi_s(0), 1.0);
    }
}

/// Prime modulus for fast probabilistic zero tests, `2^61 - 1`.
pub const MODULUS: u64 = (1 << 61) - 1;

pub mod modular {
    use super::MODULUS;

    pub fn add(a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= MODULUS {
            s - MODULUS
        } else {
            s
        }
    }

    pub fn mul(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % MODULUS as u128) as u64
    }

    pub fn pow(mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn div(a: u64, b: u64) -> Option<u64> {
        if b == 0 {
            None
        } else {
            Some(mul(a, pow(b, MODULUS - 2)))
        }
    }

    pub fn neg(a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            MODULUS - a
        }
    }
}
