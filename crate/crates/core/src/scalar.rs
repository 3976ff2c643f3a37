//! Exact coefficient fields.
//!
//! Every expression in the engine carries coefficients in a field of
//! Gaussian rationals `a + b·i`. The engine is generic over the concrete
//! representation through [`Coeff`]; the default is
//! `Complex<BigRational>`, which never overflows. `Complex<Rational64>` is
//! also supported and is faster, but panics on overflow.

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

/// Real part type of a Gaussian-rational coefficient.
pub trait ExactReal:
    Clone + Debug + Ord + Hash + Signed + Send + Sync + 'static
{
    fn to_big(&self) -> BigRational;
    fn from_big(r: &BigRational) -> Option<Self>;
    fn from_ratio(num: i64, den: i64) -> Self;
}

impl ExactReal for BigRational {
    fn to_big(&self) -> BigRational {
        self.clone()
    }

    fn from_big(r: &BigRational) -> Option<Self> {
        Some(r.clone())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

impl ExactReal for Ratio<i64> {
    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }

    fn from_big(r: &BigRational) -> Option<Self> {
        let n = i64::try_from(r.numer()).ok()?;
        let d = i64::try_from(r.denom()).ok()?;
        Some(Ratio::new(n, d))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
}

/// A coefficient of the symbolic algebra: an exact field containing `i`.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Eq
    + Hash
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// The imaginary unit.
    fn i() -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    /// Builds `re + im·i`; `None` if the representation cannot hold it.
    fn from_parts(re: &BigRational, im: &BigRational) -> Option<Self>;

    fn re(&self) -> BigRational;

    fn im(&self) -> BigRational;

    fn mul_ref(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }
}

impl<R: ExactReal> Coeff for Complex<R> {
    fn i() -> Self {
        Complex::new(R::zero(), R::one())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(R::from_ratio(num, den), R::zero())
    }

    fn from_parts(re: &BigRational, im: &BigRational) -> Option<Self> {
        Some(Complex::new(R::from_big(re)?, R::from_big(im)?))
    }

    fn re(&self) -> BigRational {
        self.re.to_big()
    }

    fn im(&self) -> BigRational {
        self.im.to_big()
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Complex::new(self.re.clone() * rhs.re.clone(), R::zero());
        }
        self * rhs
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
}

/// Formats a rational in the expression grammar: `n` or `n/d`.
pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Scalar;

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        let i = Scalar::i();
        assert_eq!(i.clone() * i, -Scalar::one());
    }

    #[test]
    fn ratios_are_reduced() {
        let a = Scalar::from_ratio(2, 4);
        let b = Scalar::from_ratio(-3, -6);
        assert_eq!(a, b);
        assert_eq!(a.re(), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn small_representation_rejects_huge_parts() {
        let big = BigRational::from_integer(BigInt::from(i64::MAX) * 4);
        assert!(Complex::<Ratio<i64>>::from_parts(&big, &BigRational::zero()).is_none());
        assert!(Scalar::from_parts(&big, &BigRational::zero()).is_some());
    }

    #[test]
    fn field_axioms_on_samples() {
        let xs = [
            Scalar::from_parts(&BigRational::new(1.into(), 3.into()), &BigRational::from_integer((-2).into())).unwrap(),
            Scalar::from_ratio(5, 7),
            Scalar::i(),
            Scalar::from_parts(&BigRational::new((-4).into(), 9.into()), &BigRational::new(1.into(), 2.into())).unwrap(),
        ];
        for a in &xs {
            for b in &xs {
                assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
                assert_eq!(a.mul_ref(b), b.mul_ref(a));
                for c in &xs {
                    assert_eq!(a.mul_ref(&b.mul_ref(c)), a.mul_ref(b).mul_ref(c));
                    assert_eq!(
                        a.mul_ref(&(b.clone() + c.clone())),
                        a.mul_ref(b) + a.mul_ref(c)
                    );
                }
            }
        }
    }
}
