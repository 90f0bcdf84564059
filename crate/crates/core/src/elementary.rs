//! Certified `exp`, `ln` and the constants `pi`, `ln 2`, `ln pi`, `e`.
//!
//! Point evaluations run at `bits + guard` with interval arithmetic, so truncation
//! tails are added as explicit intervals and every rounding is outward. Interval
//! arguments use monotonicity: both functions are evaluated at the endpoints.

use std::sync::{Mutex, OnceLock};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::interval::BoundedReal;

const GUARD_BITS: u32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementaryKind {
    Ln,
    Exp,
}

pub fn enclose_elementary(kind: ElementaryKind, x: &BoundedReal) -> Result<BoundedReal> {
    match kind {
        ElementaryKind::Ln => ln(x),
        ElementaryKind::Exp => exp(x),
    }
}

/// Natural logarithm; the argument must be certified positive.
pub fn ln(x: &BoundedReal) -> Result<BoundedReal> {
    if x.lo().signum() <= 0 {
        return Err(Error::Domain(format!("ln of an interval reaching {:?}", x.lo())));
    }
    let bits = x.bits();
    let lo = ln_point(x.lo(), bits)?;
    if x.is_point() {
        return Ok(lo.with_bits(bits));
    }
    let hi = ln_point(x.hi(), bits)?;
    Ok(BoundedReal::from_bounds(lo.lo().clone(), hi.hi().clone(), bits))
}

pub fn exp(x: &BoundedReal) -> Result<BoundedReal> {
    let bits = x.bits();
    let lo = exp_point(x.lo(), bits)?;
    if x.is_point() {
        return Ok(lo.with_bits(bits));
    }
    let hi = exp_point(x.hi(), bits)?;
    Ok(BoundedReal::from_bounds(lo.lo().clone(), hi.hi().clone(), bits))
}

/// `x^(1/k)` for positive `x`, via `exp(ln x / k)`.
pub fn root(x: &BoundedReal, k: i64) -> Result<BoundedReal> {
    exp(&ln(x)?.div_int(k)?)
}

/// Threshold below which a series term no longer matters at working precision `w`.
fn negligible(term: &BoundedReal, w: u32) -> bool {
    term.mag() < Dyadic::pow2(-(w as i64) - 4)
}

/// Symmetric interval `[-m, m]`.
fn plus_minus(m: &Dyadic, bits: u32) -> BoundedReal {
    BoundedReal::from_bounds(m.neg(), m.clone(), bits)
}

fn exp_point(x: &Dyadic, bits: u32) -> Result<BoundedReal> {
    if x.is_zero() {
        return Ok(BoundedReal::one(bits));
    }
    // |x| < 2^(top+1); the result needs about 2^top bits of exponent.
    if x.top() > 40 {
        return Err(Error::Domain(format!("exp argument {x:?} out of range")));
    }
    // Halve until |t| < 2^-8, then undo with repeated squaring.
    let halvings = (x.top() + 9).max(0) as u32;
    let w = bits + GUARD_BITS + halvings;
    let t = BoundedReal::point(x.shifted(-(halvings as i64)), w);

    let mut sum = BoundedReal::one(w);
    let mut term = BoundedReal::one(w);
    let mut k = 1i64;
    loop {
        term = term.mul(&t).div_int(k)?;
        sum = sum.add(&term);
        if negligible(&term, w) {
            break;
        }
        k += 1;
    }
    // |t| < 1/256: the remaining tail is below |last term|.
    sum = sum.add(&plus_minus(&term.mag(), w));
    for _ in 0..halvings {
        sum = sum.square();
    }
    Ok(sum.with_bits(bits + GUARD_BITS))
}

/// `sum_{k>=0} u^(2k+1) / (2k+1)` for `|u| <= 1/3`, with its tail.
fn atanh_series(u: &BoundedReal, w: u32) -> Result<BoundedReal> {
    let u2 = u.square();
    let mut pow = u.clone();
    let mut sum = u.clone();
    let mut k = 1i64;
    loop {
        pow = pow.mul(&u2);
        let term = pow.div_int(2 * k + 1)?;
        sum = sum.add(&term);
        if negligible(&term, w) {
            // ratio of successive terms is at most u^2 <= 1/9
            sum = sum.add(&plus_minus(&term.mag(), w));
            return Ok(sum);
        }
        k += 1;
    }
}

fn ln_point(x: &Dyadic, bits: u32) -> Result<BoundedReal> {
    let one = Dyadic::one();
    if *x == one {
        return Ok(BoundedReal::zero(bits));
    }
    // x = m * 2^e with m in [2/3, 4/3)
    let mut e = x.top();
    let mut m = x.shifted(-e);
    if m.mul_u64(3) >= Dyadic::from_int(4) {
        e += 1;
        m = m.shifted(-1);
    }
    let w = bits + GUARD_BITS + 64 - (e.unsigned_abs().leading_zeros());
    let mi = BoundedReal::point(m, w);
    let one_w = BoundedReal::one(w);
    let u = mi.sub(&one_w).div(&mi.add(&one_w))?;
    let ln_m = atanh_series(&u, w)?.scale_pow2(1);
    if e == 0 {
        return Ok(ln_m);
    }
    let ln2 = ln2(w);
    Ok(ln_m.add(&ln2.mul(&BoundedReal::from_int(e, w))))
}

struct ConstantCache {
    entries: Mutex<Vec<BoundedReal>>,
}

impl ConstantCache {
    const fn new() -> Self {
        ConstantCache {
            entries: Mutex::new(Vec::new()),
        }
    }

    /// Cached value narrowed to `bits`; `compute` runs without the lock held.
    fn get(&self, bits: u32, compute: impl FnOnce(u32) -> BoundedReal) -> BoundedReal {
        if let Some(v) = self.lookup(bits) {
            return v;
        }
        let target = bits.max(256);
        let v = compute(target);
        let mut entries = self.entries.lock().unwrap_or_else(|e| e.into_inner());
        if !entries.iter().any(|c| c.bits() >= target) {
            entries.push(v.clone());
        }
        v.with_bits(bits)
    }

    fn lookup(&self, bits: u32) -> Option<BoundedReal> {
        let entries = self.entries.lock().unwrap_or_else(|e| e.into_inner());
        entries.iter().find(|c| c.bits() >= bits).map(|c| c.with_bits(bits))
    }
}

fn cache(slot: &'static OnceLock<ConstantCache>) -> &'static ConstantCache {
    slot.get_or_init(ConstantCache::new)
}

/// `ln 2 = 2 atanh(1/3)`.
pub fn ln2(bits: u32) -> BoundedReal {
    static SLOT: OnceLock<ConstantCache> = OnceLock::new();
    cache(&SLOT).get(bits, |b| {
        let w = b + GUARD_BITS;
        let third = BoundedReal::from_ratio(1, 3, w);
        let v = atanh_series(&third, w).expect("series for ln 2").scale_pow2(1);
        v.with_bits(b)
    })
}

/// `atan(1/k)` for integer `k >= 2`: alternating series with decreasing terms.
fn atan_inv(k: i64, w: u32) -> BoundedReal {
    let x = BoundedReal::from_ratio(1, k, w);
    let x2 = x.square();
    let mut pow = x.clone();
    let mut sum = x;
    let mut j = 1i64;
    loop {
        pow = pow.mul(&x2);
        let term = pow.div_int(2 * j + 1).expect("odd divisor");
        sum = if j % 2 == 1 { sum.sub(&term) } else { sum.add(&term) };
        if negligible(&term, w) {
            return sum.add(&plus_minus(&term.mag(), w));
        }
        j += 1;
    }
}

/// Machin: `pi = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi(bits: u32) -> BoundedReal {
    static SLOT: OnceLock<ConstantCache> = OnceLock::new();
    cache(&SLOT).get(bits, |b| {
        let w = b + GUARD_BITS;
        atan_inv(5, w).scale_pow2(4).sub(&atan_inv(239, w).scale_pow2(2)).with_bits(b)
    })
}

pub fn ln_pi(bits: u32) -> BoundedReal {
    static SLOT: OnceLock<ConstantCache> = OnceLock::new();
    cache(&SLOT).get(bits, |b| {
        let p = pi(b + GUARD_BITS);
        ln(&p).expect("pi is positive").with_bits(b)
    })
}

pub fn e(bits: u32) -> BoundedReal {
    static SLOT: OnceLock<ConstantCache> = OnceLock::new();
    cache(&SLOT).get(bits, |b| exp(&BoundedReal::one(b)).expect("exp(1)"))
}

/// `ln(2 pi)`.
pub fn ln_two_pi(bits: u32) -> BoundedReal {
    ln_pi(bits).add(&ln2(bits))
}
