//! Certified `ln n!`.
//!
//! Up to [`N_SWITCH`] the factorial itself is enclosed by an outward-rounded running
//! product and a single certified logarithm is taken. Above it the Stirling series
//! with [`SERIES_TERMS`] Bernoulli corrections is used; the truncation error is
//! enclosed by plus or minus the first omitted term.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{Dyadic, Round};
use crate::elementary::{ln, ln_two_pi};
use crate::error::{Error, Result};
use crate::interval::{BoundedReal, PrecisionPolicy};

pub const N_SWITCH: u64 = 1_000_000;
pub const SERIES_TERMS: usize = 8;

/// Even Bernoulli numbers `B_2, B_4, ..., B_18` as `(numerator, denominator)`.
pub const BERNOULLI_EVEN: [(i64, i64); 9] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LnFactorialMethod {
    ExactSum,
    Series,
}

impl LnFactorialMethod {
    pub fn for_n(n: u64) -> Self {
        if n <= N_SWITCH {
            LnFactorialMethod::ExactSum
        } else {
            LnFactorialMethod::Series
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LnFactorialMethod::ExactSum => "exact-sum",
            LnFactorialMethod::Series => "series",
        }
    }
}

impl fmt::Display for LnFactorialMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `B_{2k}` for `k = 1..=9`.
pub fn bernoulli_even(k: usize) -> BigRational {
    let (p, q) = BERNOULLI_EVEN[k - 1];
    BigRational::new(p.into(), q.into())
}

fn working_bits(n: u64, bits: u32) -> u32 {
    bits + 32 + (64 - n.leading_zeros())
}

/// Enclosure of `ln n!` by way of an outward-rounded product `2 * 3 * ... * n`.
///
/// Consecutive factors are packed into a `u64` before each big multiply.
pub fn ln_factorial_exact_sum(n: u64, bits: u32) -> Result<BoundedReal> {
    if n == 0 {
        return Err(Error::Domain("ln_factorial needs n >= 1".into()));
    }
    let w = working_bits(n, bits);
    let (lo, hi) = product_bounds(2..=n, Dyadic::one(), Dyadic::one(), w);
    let prod = BoundedReal::new(lo, hi, w)?;
    Ok(ln(&prod)?.with_bits(bits))
}

fn product_bounds(range: std::ops::RangeInclusive<u64>, lo: Dyadic, hi: Dyadic, w: u32) -> (Dyadic, Dyadic) {
    let (mut lo, mut hi) = (lo, hi);
    let mut acc: u64 = 1;
    for k in range {
        match acc.checked_mul(k) {
            Some(v) => acc = v,
            None => {
                lo = lo.mul_u64(acc).round(w, Round::Down);
                hi = hi.mul_u64(acc).round(w, Round::Up);
                acc = k;
            }
        }
    }
    if acc > 1 {
        lo = lo.mul_u64(acc).round(w, Round::Down);
        hi = hi.mul_u64(acc).round(w, Round::Up);
    }
    (lo, hi)
}

/// `sum_{k=1..terms} B_{2k} / (2k (2k-1) n^(2k-1))` and the first omitted term, exactly.
fn stirling_correction(n: u64, terms: usize) -> (BigRational, BigRational) {
    let n = BigRational::from_integer(BigInt::from(n));
    let coefficient = |k: usize| {
        let d = (2 * k * (2 * k - 1)) as i64;
        bernoulli_even(k) / BigRational::from_integer(d.into()) / num_traits::pow(n.clone(), 2 * k - 1)
    };
    let sum = (1..=terms).fold(BigRational::zero(), |acc, k| acc + coefficient(k));
    (sum, coefficient(terms + 1).abs())
}

/// Stirling series enclosure of `ln n!` with `terms` corrections (`1..=8`).
pub fn ln_factorial_series(n: u64, bits: u32, terms: usize) -> Result<BoundedReal> {
    if n == 0 {
        return Err(Error::Domain("ln_factorial needs n >= 1".into()));
    }
    if !(1..=SERIES_TERMS).contains(&terms) {
        return Err(Error::Domain(format!("series term count {terms} outside 1..={SERIES_TERMS}")));
    }
    let w = working_bits(n, bits);
    let nn = BoundedReal::from_u64(n, w);
    // (n + 1/2) ln n - n + ln(2 pi) / 2
    let main = BoundedReal::from_rational(&(BigRational::from_integer(n.into()) + BigRational::new(1.into(), 2.into())), w)
        .mul(&ln(&nn)?)
        .sub(&nn)
        .add(&ln_two_pi(w).scale_pow2(-1));
    let (corr, rem) = stirling_correction(n, terms);
    let lo = &corr - &rem;
    let hi = &corr + &rem;
    let tail = BoundedReal::new(
        Dyadic::from_rational(&lo, w, Round::Down),
        Dyadic::from_rational(&hi, w, Round::Up),
        w,
    )?;
    Ok(main.add(&tail).with_bits(bits))
}

/// `ln n!` at a fixed precision, choosing the method by [`N_SWITCH`].
pub fn ln_factorial_at(n: u64, bits: u32) -> Result<(BoundedReal, LnFactorialMethod)> {
    let method = LnFactorialMethod::for_n(n);
    let v = match method {
        LnFactorialMethod::ExactSum => ln_factorial_exact_sum(n, bits)?,
        LnFactorialMethod::Series => ln_factorial_series(n, bits, SERIES_TERMS)?,
    };
    Ok((v, method))
}

/// Robbins' bounds `s(n) + 1/(12n+1) < ln n! < s(n) + 1/(12n)`, with
/// `s(n) = (n + 1/2) ln n - n + ln(2 pi)/2`, as one enclosure.
pub fn robbins_enclosure(n: u64, bits: u32) -> Result<BoundedReal> {
    if n == 0 {
        return Err(Error::Domain("Robbins bounds need n >= 1".into()));
    }
    let w = working_bits(n, bits);
    let nn = BoundedReal::from_u64(n, w);
    let s = nn
        .add(&BoundedReal::from_ratio(1, 2, w))
        .mul(&ln(&nn)?)
        .sub(&nn)
        .add(&ln_two_pi(w).scale_pow2(-1));
    let twelve_n = BigInt::from(n) * BigInt::from(12);
    let low_corr = BigRational::new(1.into(), twelve_n.clone() + BigInt::one());
    let high_corr = BigRational::new(1.into(), twelve_n);
    let lo = s.add(&BoundedReal::from_rational(&low_corr, w));
    let hi = s.add(&BoundedReal::from_rational(&high_corr, w));
    Ok(BoundedReal::from_bounds(lo.lo().clone(), hi.hi().clone(), bits))
}

/// Certified `ln n!` whose width is at most `2^(16 - initial_bits) * max(1, |ln n!|)`,
/// escalating precision per `policy`. The result is also checked against Robbins'
/// bounds; a disjoint pair means a bug, reported as [`Error::Inconsistent`].
pub fn ln_factorial(n: u64, policy: &PrecisionPolicy) -> Result<BoundedReal> {
    ln_factorial_with_method(n, policy).map(|(v, _, _)| v)
}

/// As [`ln_factorial`], also returning the method and the precision that sufficed.
pub fn ln_factorial_with_method(n: u64, policy: &PrecisionPolicy) -> Result<(BoundedReal, LnFactorialMethod, u32)> {
    if n == 0 {
        return Err(Error::Domain("ln_factorial needs n >= 1".into()));
    }
    let mut last_width = None;
    for bits in policy.steps() {
        let (v, method) = ln_factorial_at(n, bits)?;
        let robbins = robbins_enclosure(n, bits)?;
        if !v.overlaps(&robbins) {
            return Err(Error::Inconsistent(format!("ln({n}!) = {v} lies outside Robbins' bounds {robbins}")));
        }
        let scale = {
            let m = v.mag();
            if m > Dyadic::one() {
                m
            } else {
                Dyadic::one()
            }
        };
        let allowed = scale.shifted(16 - policy.initial_bits() as i64);
        let width = v.width();
        if width <= allowed {
            return Ok((v, method, bits));
        }
        last_width = Some(width);
    }
    Err(Error::PrecisionCap {
        max_bits: policy.max_bits(),
        achieved_width: last_width.map_or_else(|| "none".into(), |w| format!("{:e}", w.to_f64())),
    })
}

/// Successive enclosures of `ln 1!, ln 2!, ln 3!, ...` sharing one running product.
///
/// Each step costs one small multiply and one logarithm, so ranges are linear in `n`
/// rather than quadratic. The working precision is fixed at construction from the
/// largest `n` the caller intends to reach.
#[derive(Clone, Debug)]
pub struct LnFactorialScan {
    n: u64,
    bits: u32,
    w: u32,
    lo: Dyadic,
    hi: Dyadic,
}

impl LnFactorialScan {
    /// Starts so that the first item is `ln(start!)`.
    pub fn new(start: u64, max_n: u64, bits: u32) -> Result<Self> {
        if start == 0 {
            return Err(Error::Domain("ln_factorial needs n >= 1".into()));
        }
        let w = working_bits(max_n.max(start), bits);
        let (lo, hi) = product_bounds(2..=start.saturating_sub(1), Dyadic::one(), Dyadic::one(), w);
        Ok(LnFactorialScan {
            n: start - 1,
            bits,
            w,
            lo,
            hi,
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }
}

impl Iterator for LnFactorialScan {
    type Item = (u64, Result<BoundedReal>);

    fn next(&mut self) -> Option<Self::Item> {
        self.n = self.n.checked_add(1)?;
        let n = self.n;
        if n > 1 {
            self.lo = self.lo.mul_u64(n).round(self.w, Round::Down);
            self.hi = self.hi.mul_u64(n).round(self.w, Round::Up);
        }
        let prod = BoundedReal::from_bounds(self.lo.clone(), self.hi.clone(), self.w);
        Some((n, ln(&prod).map(|v| v.with_bits(self.bits))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decimal::parse_decimal;
    use num_traits::One;

    /// Bernoulli numbers from `sum_{j=0}^{m} C(m+1, j) B_j = 0`.
    fn bernoulli_by_recurrence(max: usize) -> Vec<BigRational> {
        let mut b = vec![BigRational::one()];
        for m in 1..=max {
            let mut s = BigRational::zero();
            let mut binom = BigInt::one();
            for j in 0..m {
                s += BigRational::from_integer(binom.clone()) * &b[j];
                binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
            }
            b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b
    }

    #[test]
    fn bernoulli_table_matches_recurrence() {
        let b = bernoulli_by_recurrence(18);
        for k in 1..=9 {
            assert_eq!(bernoulli_even(k), b[2 * k], "B_{}", 2 * k);
        }
    }

    #[test]
    fn ln_one_factorial_is_zero() {
        let v = ln_factorial(1, &PrecisionPolicy::default()).unwrap();
        assert!(v.contains(&Dyadic::zero()));
    }

    #[test]
    fn ln_five_factorial() {
        // oracle: ln 120 to 30 digits
        let v = ln_factorial(5, &PrecisionPolicy::default()).unwrap();
        let q = parse_decimal("4.78749174278204599424770093452").unwrap();
        let eps = parse_decimal("1e-29").unwrap();
        assert!(v.lo().to_rational() <= &q + &eps && &q - &eps <= v.hi().to_rational());
        assert!(v.width() < Dyadic::pow2(-100));
    }

    #[test]
    fn series_agrees_with_product_near_switch() {
        for n in (N_SWITCH - 100..=N_SWITCH).step_by(25) {
            let a = ln_factorial_exact_sum(n, 128).unwrap();
            let b = ln_factorial_series(n, 128, SERIES_TERMS).unwrap();
            assert!(a.overlaps(&b), "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn ten_to_twelve_is_tight_at_256_bits() {
        let policy = PrecisionPolicy::new(256, 8192, 2).unwrap();
        let (v, method, bits) = ln_factorial_with_method(1_000_000_000_000, &policy).unwrap();
        assert_eq!(method, LnFactorialMethod::Series);
        assert_eq!(bits, 256);
        let limit = Dyadic::from_rational(&parse_decimal("1e-30").unwrap(), 64, Round::Down);
        assert!(v.width() <= limit);
    }

    #[test]
    fn scan_matches_direct() {
        let scan = LnFactorialScan::new(1, 300, 128).unwrap();
        for (n, v) in scan.take(300).filter(|(n, _)| n % 37 == 1) {
            let direct = ln_factorial_exact_sum(n, 128).unwrap();
            assert!(v.unwrap().overlaps(&direct), "n={n}");
        }
        let mut mid = LnFactorialScan::new(50, 60, 128).unwrap();
        let (n, v) = mid.next().unwrap();
        assert_eq!(n, 50);
        assert!(v.unwrap().overlaps(&ln_factorial_exact_sum(50, 128).unwrap()));
    }

    #[test]
    fn zero_rejected() {
        assert!(ln_factorial(0, &PrecisionPolicy::default()).is_err());
        assert!(ln_factorial_series(10, 128, 9).is_err());
    }
}
