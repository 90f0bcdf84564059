//! Certified enclosures `[lo, hi]` with outward-rounded arithmetic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

/// Working precision used when callers do not supply a policy.
pub const DEFAULT_BITS: u32 = 128;

/// Smallest precision accepted anywhere; below this the elementary functions lose
/// their guard-bit headroom.
pub const MIN_BITS: u32 = 16;

/// A closed interval known to contain one real number.
///
/// Endpoints are exact dyadic rationals kept to at most `bits` significant bits.
/// Every operation rounds its lower endpoint down and its upper endpoint up.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoundedReal {
    lo: Dyadic,
    hi: Dyadic,
    bits: u32,
}

/// Outcome of a certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    Lt,
    Gt,
    Undecided,
}

impl Comparison {
    pub fn is_decided(self) -> bool {
        self != Comparison::Undecided
    }

    pub fn reverse(self) -> Comparison {
        match self {
            Comparison::Lt => Comparison::Gt,
            Comparison::Gt => Comparison::Lt,
            Comparison::Undecided => Comparison::Undecided,
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::Lt => "LT",
            Comparison::Gt => "GT",
            Comparison::Undecided => "UNDECIDED",
        })
    }
}

/// The four arithmetic operations of [`interval_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
}

/// Precision escalation schedule: `initial_bits`, `initial_bits * growth_factor`, ...
/// up to and including `max_bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    initial_bits: u32,
    max_bits: u32,
    growth_factor: u32,
}

impl PrecisionPolicy {
    pub fn new(initial_bits: u32, max_bits: u32, growth_factor: u32) -> Result<Self> {
        if initial_bits < MIN_BITS {
            return Err(Error::InvalidPolicy(format!(
                "initial_bits {initial_bits} is below the minimum of {MIN_BITS}"
            )));
        }
        if initial_bits > max_bits {
            return Err(Error::InvalidPolicy(format!(
                "initial_bits {initial_bits} exceeds max_bits {max_bits}"
            )));
        }
        if growth_factor < 2 {
            return Err(Error::InvalidPolicy(format!(
                "growth_factor must be at least 2, got {growth_factor}"
            )));
        }
        Ok(PrecisionPolicy {
            initial_bits,
            max_bits,
            growth_factor,
        })
    }

    pub fn initial_bits(&self) -> u32 {
        self.initial_bits
    }

    pub fn max_bits(&self) -> u32 {
        self.max_bits
    }

    pub fn growth_factor(&self) -> u32 {
        self.growth_factor
    }

    /// Same schedule with a different cap; fails if the cap drops below `initial_bits`.
    pub fn with_max_bits(&self, max_bits: u32) -> Result<Self> {
        PrecisionPolicy::new(self.initial_bits, max_bits, self.growth_factor)
    }

    /// The escalation sequence; never exceeds `max_bits`.
    pub fn steps(&self) -> impl Iterator<Item = u32> {
        let (max, g) = (self.max_bits as u64, self.growth_factor as u64);
        std::iter::successors(Some(self.initial_bits as u64), move |&b| {
            let next = b * g;
            (next <= max).then_some(next)
        })
        .map(|b| b as u32)
    }
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            initial_bits: 128,
            max_bits: 8192,
            growth_factor: 2,
        }
    }
}

impl BoundedReal {
    pub fn new(lo: Dyadic, hi: Dyadic, bits: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Inconsistent(format!("lower endpoint {lo:?} above upper {hi:?}")));
        }
        Ok(BoundedReal::from_bounds(lo, hi, bits))
    }

    /// Rounds outward to `bits`; the caller guarantees `lo <= hi`.
    pub(crate) fn from_bounds(lo: Dyadic, hi: Dyadic, bits: u32) -> Self {
        debug_assert!(lo <= hi);
        BoundedReal {
            lo: lo.round(bits, Round::Down),
            hi: hi.round(bits, Round::Up),
            bits,
        }
    }

    /// Enclosure of an exact dyadic value, widened only if it has more than `bits` bits.
    pub fn point(v: Dyadic, bits: u32) -> Self {
        BoundedReal::from_bounds(v.clone(), v, bits)
    }

    pub fn zero(bits: u32) -> Self {
        BoundedReal::point(Dyadic::zero(), bits)
    }

    pub fn one(bits: u32) -> Self {
        BoundedReal::point(Dyadic::one(), bits)
    }

    pub fn from_int(v: i64, bits: u32) -> Self {
        BoundedReal::point(Dyadic::from_int(v), bits)
    }

    pub fn from_u64(v: u64, bits: u32) -> Self {
        BoundedReal::point(Dyadic::from_bigint(BigInt::from(v)), bits)
    }

    pub fn from_bigint(v: &BigInt, bits: u32) -> Self {
        BoundedReal::point(Dyadic::from_bigint(v.clone()), bits)
    }

    pub fn from_rational(q: &BigRational, bits: u32) -> Self {
        BoundedReal {
            lo: Dyadic::from_rational(q, bits, Round::Down),
            hi: Dyadic::from_rational(q, bits, Round::Up),
            bits,
        }
    }

    /// `num / den` enclosed at `bits`; `den` must be nonzero.
    pub fn from_ratio(num: i64, den: i64, bits: u32) -> Self {
        BoundedReal::from_rational(&BigRational::new(num.into(), den.into()), bits)
    }

    /// Exact enclosure of a finite `f64` (rounded outward if `bits < 53`).
    pub fn from_f64(v: f64, bits: u32) -> Result<Self> {
        Dyadic::from_f64(v)
            .map(|d| BoundedReal::point(d, bits))
            .ok_or_else(|| Error::Domain(format!("{v} is not finite")))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub_exact(&self.lo)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Midpoint as `f64`, for display and heuristics only.
    pub fn mid_f64(&self) -> f64 {
        self.lo.add_exact(&self.hi).shifted(-1).to_f64()
    }

    /// `max(|lo|, |hi|)`.
    pub fn mag(&self) -> Dyadic {
        let (a, b) = (self.lo.abs(), self.hi.abs());
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn contains(&self, v: &Dyadic) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.lo.to_rational() <= *q && *q <= self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = if self.lo > other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi < other.hi { &self.hi } else { &other.hi };
        (lo <= hi).then(|| BoundedReal {
            lo: lo.clone(),
            hi: hi.clone(),
            bits: self.bits.min(other.bits),
        })
    }

    /// Change the working precision. Lowering it rounds the endpoints outward.
    pub fn with_bits(&self, bits: u32) -> Self {
        BoundedReal::from_bounds(self.lo.clone(), self.hi.clone(), bits)
    }

    /// Multiply by `2^k` (exact).
    pub fn scale_pow2(&self, k: i64) -> Self {
        BoundedReal {
            lo: self.lo.shifted(k),
            hi: self.hi.shifted(k),
            bits: self.bits,
        }
    }

    pub fn compare(&self, other: &Self) -> Comparison {
        compare_certified(self, other)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let bits = self.bits.min(rhs.bits);
        BoundedReal {
            lo: self.lo.add_round(&rhs.lo, bits, Round::Down),
            hi: self.hi.add_round(&rhs.hi, bits, Round::Up),
            bits,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let bits = self.bits.min(rhs.bits);
        BoundedReal {
            lo: self.lo.sub_round(&rhs.hi, bits, Round::Down),
            hi: self.hi.sub_round(&rhs.lo, bits, Round::Up),
            bits,
        }
    }

    pub fn neg(&self) -> Self {
        BoundedReal {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            bits: self.bits,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let bits = self.bits.min(rhs.bits);
        let nonneg = |x: &Self| x.lo.signum() >= 0;
        let nonpos = |x: &Self| x.hi.signum() <= 0;
        let (lo, hi) = if nonneg(self) && nonneg(rhs) {
            (
                self.lo.mul_round(&rhs.lo, bits, Round::Down),
                self.hi.mul_round(&rhs.hi, bits, Round::Up),
            )
        } else if nonpos(self) && nonpos(rhs) {
            (
                self.hi.mul_round(&rhs.hi, bits, Round::Down),
                self.lo.mul_round(&rhs.lo, bits, Round::Up),
            )
        } else {
            let products = [
                self.lo.mul_exact(&rhs.lo),
                self.lo.mul_exact(&rhs.hi),
                self.hi.mul_exact(&rhs.lo),
                self.hi.mul_exact(&rhs.hi),
            ];
            let min = products.iter().min().cloned().unwrap_or_else(Dyadic::zero);
            let max = products.iter().max().cloned().unwrap_or_else(Dyadic::zero);
            (min.round(bits, Round::Down), max.round(bits, Round::Up))
        };
        BoundedReal { lo, hi, bits }
    }

    pub fn square(&self) -> Self {
        if self.contains_zero() {
            let m = self.mag();
            BoundedReal {
                lo: Dyadic::zero(),
                hi: m.mul_round(&m, self.bits, Round::Up),
                bits: self.bits,
            }
        } else {
            self.mul(self)
        }
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let bits = self.bits.min(rhs.bits);
        let q = |a: &Dyadic, b: &Dyadic, dir| a.div_round(b, bits, dir);
        let candidates_lo = [
            q(&self.lo, &rhs.lo, Round::Down),
            q(&self.lo, &rhs.hi, Round::Down),
            q(&self.hi, &rhs.lo, Round::Down),
            q(&self.hi, &rhs.hi, Round::Down),
        ];
        let candidates_hi = [
            q(&self.lo, &rhs.lo, Round::Up),
            q(&self.lo, &rhs.hi, Round::Up),
            q(&self.hi, &rhs.lo, Round::Up),
            q(&self.hi, &rhs.hi, Round::Up),
        ];
        let lo = candidates_lo.into_iter().min().unwrap_or_else(Dyadic::zero);
        let hi = candidates_hi.into_iter().max().unwrap_or_else(Dyadic::zero);
        Ok(BoundedReal { lo, hi, bits })
    }

    pub fn recip(&self) -> Result<Self> {
        BoundedReal::one(self.bits).div(self)
    }

    /// Divide by a nonzero machine integer.
    pub fn div_int(&self, k: i64) -> Result<Self> {
        self.div(&BoundedReal::from_int(k, self.bits))
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.mul(&BoundedReal::from_int(k, self.bits))
    }
}

impl fmt::Debug for BoundedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]@{}",
            crate::decimal::lower_decimal(&self.lo, self.bits),
            crate::decimal::upper_decimal(&self.hi, self.bits),
            self.bits
        )
    }
}

impl fmt::Display for BoundedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &BoundedReal {
    type Output = BoundedReal;
    fn add(self, rhs: &BoundedReal) -> BoundedReal {
        BoundedReal::add(self, rhs)
    }
}

impl Sub for &BoundedReal {
    type Output = BoundedReal;
    fn sub(self, rhs: &BoundedReal) -> BoundedReal {
        BoundedReal::sub(self, rhs)
    }
}

impl Mul for &BoundedReal {
    type Output = BoundedReal;
    fn mul(self, rhs: &BoundedReal) -> BoundedReal {
        BoundedReal::mul(self, rhs)
    }
}

impl Neg for &BoundedReal {
    type Output = BoundedReal;
    fn neg(self) -> BoundedReal {
        BoundedReal::neg(self)
    }
}

/// `LT` iff `a.hi < b.lo`, `GT` iff `a.lo > b.hi`, otherwise `UNDECIDED`.
pub fn compare_certified(a: &BoundedReal, b: &BoundedReal) -> Comparison {
    if a.hi < b.lo {
        Comparison::Lt
    } else if a.lo > b.hi {
        Comparison::Gt
    } else {
        Comparison::Undecided
    }
}

/// Outward-rounded `a (kind) b`; the result carries `min(a.bits, b.bits)`.
pub fn interval_arith(kind: ArithKind, a: &BoundedReal, b: &BoundedReal) -> Result<BoundedReal> {
    match kind {
        ArithKind::Add => Ok(a.add(b)),
        ArithKind::Sub => Ok(a.sub(b)),
        ArithKind::Mul => Ok(a.mul(b)),
        ArithKind::Div => a.div(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn iv(lo: f64, hi: f64) -> BoundedReal {
        BoundedReal::new(Dyadic::from_f64(lo).unwrap(), Dyadic::from_f64(hi).unwrap(), 64).unwrap()
    }

    #[test]
    fn add_exact_integers() {
        let r = interval_arith(ArithKind::Add, &BoundedReal::from_int(1, 64), &BoundedReal::from_int(2, 64)).unwrap();
        assert!(r.is_point());
        assert!(r.contains(&Dyadic::from_int(3)));
    }

    #[test]
    fn mul_sign_analysis() {
        let r = interval_arith(ArithKind::Mul, &iv(-1.0, 1.0), &iv(-1.0, 1.0)).unwrap();
        assert_eq!(r.lo(), &Dyadic::from_int(-1));
        assert_eq!(r.hi(), &Dyadic::from_int(1));
        let r = iv(-3.0, -2.0).mul(&iv(-5.0, -4.0));
        assert_eq!((r.lo().to_f64(), r.hi().to_f64()), (8.0, 15.0));
        let r = iv(-3.0, 2.0).mul(&iv(4.0, 5.0));
        assert_eq!((r.lo().to_f64(), r.hi().to_f64()), (-15.0, 10.0));
    }

    #[test]
    fn one_third_width() {
        for bits in [32u32, 64, 128, 300] {
            let r = interval_arith(ArithKind::Div, &BoundedReal::one(bits), &BoundedReal::from_int(3, bits)).unwrap();
            let third = BigRational::new(BigInt::one(), BigInt::from(3));
            assert!(r.lo().to_rational() < third && third < r.hi().to_rational());
            assert!(r.width() <= Dyadic::pow2(1 - bits as i64));
        }
    }

    #[test]
    fn division_by_zero_interval() {
        assert_eq!(iv(1.0, 2.0).div(&iv(-1.0, 1.0)), Err(Error::DivisionByZero));
        assert_eq!(iv(1.0, 2.0).div(&iv(0.0, 0.0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn bits_is_minimum() {
        let r = BoundedReal::from_int(1, 64).add(&BoundedReal::from_int(1, 200));
        assert_eq!(r.bits(), 64);
    }

    #[test]
    fn certified_comparisons() {
        assert_eq!(compare_certified(&iv(0.9, 1.1), &iv(1.2, 1.3)), Comparison::Lt);
        assert_eq!(compare_certified(&iv(1.0, 1.5), &iv(1.4, 2.0)), Comparison::Undecided);
        assert_eq!(compare_certified(&BoundedReal::from_int(3, 64), &BoundedReal::from_int(2, 64)), Comparison::Gt);
        assert_eq!(compare_certified(&iv(1.0, 1.0), &iv(1.0, 1.0)), Comparison::Undecided);
    }

    #[test]
    fn policy_steps() {
        let p = PrecisionPolicy::default();
        assert_eq!(p.steps().collect::<Vec<_>>(), vec![128, 256, 512, 1024, 2048, 4096, 8192]);
        let p = PrecisionPolicy::new(100, 1000, 3).unwrap();
        assert_eq!(p.steps().collect::<Vec<_>>(), vec![100, 300, 900]);
        assert!(PrecisionPolicy::new(256, 128, 2).is_err());
        assert!(PrecisionPolicy::new(128, 256, 1).is_err());
    }

    #[test]
    fn inverted_bounds_rejected() {
        assert!(BoundedReal::new(Dyadic::from_int(2), Dyadic::from_int(1), 64).is_err());
    }
}
