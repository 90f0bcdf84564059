//! The scalar abstraction the formula layer is written against.
//!
//! [`BoundedReal`] gives certified enclosures; any `num_traits::Float` gives fast
//! estimates of the same formulas (window seeds, finite differences, plotting).

use std::cmp::Ordering;
use std::fmt::Debug;

use num_traits::{Float, FloatConst};

use crate::elementary;
use crate::error::{Error, Result};
use crate::interval::{BoundedReal, Comparison};

pub trait Scalar: Clone + Debug {
    /// `num / den` at the precision of `self`.
    fn ratio(&self, num: i64, den: i64) -> Self;

    fn int(&self, v: i64) -> Self {
        self.ratio(v, 1)
    }

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Result<Self>;
    fn ln(&self) -> Result<Self>;
    fn exp(&self) -> Result<Self>;

    fn pi(&self) -> Self;

    fn ln_pi(&self) -> Self {
        self.pi().ln().expect("pi is positive")
    }

    fn e(&self) -> Self {
        self.int(1).exp().expect("exp(1)")
    }

    fn square(&self) -> Self {
        self.mul(self)
    }

    /// Order of the lower endpoints (plain order for point types).
    fn inf_cmp(&self, rhs: &Self) -> Ordering;

    fn compare(&self, rhs: &Self) -> Comparison;

    fn to_f64(&self) -> f64;
}

impl Scalar for BoundedReal {
    fn ratio(&self, num: i64, den: i64) -> Self {
        BoundedReal::from_ratio(num, den, self.bits())
    }

    fn add(&self, rhs: &Self) -> Self {
        BoundedReal::add(self, rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        BoundedReal::sub(self, rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        BoundedReal::mul(self, rhs)
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        BoundedReal::div(self, rhs)
    }

    fn ln(&self) -> Result<Self> {
        elementary::ln(self)
    }

    fn exp(&self) -> Result<Self> {
        elementary::exp(self)
    }

    fn pi(&self) -> Self {
        elementary::pi(self.bits())
    }

    fn ln_pi(&self) -> Self {
        elementary::ln_pi(self.bits())
    }

    fn e(&self) -> Self {
        elementary::e(self.bits())
    }

    fn square(&self) -> Self {
        BoundedReal::square(self)
    }

    fn inf_cmp(&self, rhs: &Self) -> Ordering {
        self.lo().cmp(rhs.lo())
    }

    fn compare(&self, rhs: &Self) -> Comparison {
        crate::interval::compare_certified(self, rhs)
    }

    fn to_f64(&self) -> f64 {
        self.mid_f64()
    }
}

impl<F> Scalar for F
where
    F: Float + FloatConst + Debug,
{
    fn ratio(&self, num: i64, den: i64) -> Self {
        let n = F::from(num).unwrap_or_else(F::nan);
        let d = F::from(den).unwrap_or_else(F::nan);
        n / d
    }

    fn add(&self, rhs: &Self) -> Self {
        *self + *rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        *self - *rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        *self * *rhs
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(*self / *rhs)
    }

    fn ln(&self) -> Result<Self> {
        if *self <= F::zero() {
            return Err(Error::Domain(format!("ln of {self:?}")));
        }
        Ok(Float::ln(*self))
    }

    fn exp(&self) -> Result<Self> {
        Ok(Float::exp(*self))
    }

    fn pi(&self) -> Self {
        F::PI()
    }

    fn e(&self) -> Self {
        F::E()
    }

    fn inf_cmp(&self, rhs: &Self) -> Ordering {
        self.partial_cmp(rhs).unwrap_or(Ordering::Equal)
    }

    fn compare(&self, rhs: &Self) -> Comparison {
        match self.partial_cmp(rhs) {
            Some(Ordering::Less) => Comparison::Lt,
            Some(Ordering::Greater) => Comparison::Gt,
            _ => Comparison::Undecided,
        }
    }

    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hypot_ish<S: Scalar>(x: &S) -> S {
        x.square().add(&x.int(1)).ln().unwrap()
    }

    #[test]
    fn same_formula_both_scalars() {
        let est = hypot_ish(&2.0f64);
        let cert = hypot_ish(&BoundedReal::from_int(2, 128));
        assert!((est - 5f64.ln()).abs() < 1e-15);
        assert!((cert.mid_f64() - est).abs() < 1e-15);
        assert!((hypot_ish(&2.0f32) - 5f32.ln()).abs() < 1e-6);
    }

    #[test]
    fn float_errors() {
        assert!(Scalar::ln(&0.0f64).is_err());
        assert!(Scalar::div(&1.0f64, &0.0).is_err());
        assert_eq!(Scalar::compare(&1.0f64, &1.0), Comparison::Undecided);
    }
}
