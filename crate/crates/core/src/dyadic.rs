//! Binary floating values `mant * 2^exp` with exact storage and directed rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for a single operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// An exact dyadic rational. Normalized so the mantissa is odd (or the value is zero with
/// exponent zero), which makes structural equality coincide with numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        match mant.trailing_zeros() {
            None => Dyadic::zero(),
            Some(0) => Dyadic { mant, exp },
            Some(tz) => Dyadic {
                mant: mant >> tz,
                exp: exp + tz as i64,
            },
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: k,
        }
    }

    /// Exact conversion; `None` for NaN and infinities.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Dyadic::new(BigInt::from(m) * sign, e))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Number of significant bits of the mantissa.
    pub fn bit_len(&self) -> u64 {
        self.mant.bits()
    }

    /// Position of the most significant bit: `2^top <= |self| < 2^(top+1)`.
    /// Zero reports `i64::MIN`.
    pub fn top(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64 - 1
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    /// Multiply by `2^k` (exact).
    pub fn shifted(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Round to at most `bits` significant bits in direction `dir`.
    pub fn round(&self, bits: u32, dir: Round) -> Self {
        let len = self.mant.bits();
        if len <= bits as u64 {
            return self.clone();
        }
        let shift = len - bits as u64;
        let mant = match dir {
            // BigInt >> floors for negative values.
            Round::Down => &self.mant >> shift,
            Round::Up => -((-&self.mant) >> shift),
        };
        Dyadic::new(mant, self.exp + shift as i64)
    }

    pub fn add_exact(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub_exact(&self, rhs: &Self) -> Self {
        self.add_exact(&rhs.neg())
    }

    pub fn mul_exact(&self, rhs: &Self) -> Self {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }

    /// Rounded sum. An addend far below the rounding grid of the other is replaced by a
    /// same-signed stand-in inside the same grid cell, which leaves the rounded result
    /// unchanged while avoiding huge alignment shifts.
    pub fn add_round(&self, rhs: &Self, bits: u32, dir: Round) -> Self {
        if self.is_zero() {
            return rhs.round(bits, dir);
        }
        if rhs.is_zero() {
            return self.round(bits, dir);
        }
        let (big, small) = if self.top() >= rhs.top() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let cell = big.exp.min(big.top() - bits as i64) - 1;
        if small.top() < cell {
            let standin = Dyadic {
                mant: BigInt::from(small.signum()),
                exp: cell - 1,
            };
            return big.add_exact(&standin).round(bits, dir);
        }
        self.add_exact(rhs).round(bits, dir)
    }

    pub fn sub_round(&self, rhs: &Self, bits: u32, dir: Round) -> Self {
        self.add_round(&rhs.neg(), bits, dir)
    }

    pub fn mul_round(&self, rhs: &Self, bits: u32, dir: Round) -> Self {
        self.mul_exact(rhs).round(bits, dir)
    }

    /// Rounded quotient; `rhs` must be nonzero.
    pub fn div_round(&self, rhs: &Self, bits: u32, dir: Round) -> Self {
        assert!(!rhs.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let want = bits as i64 + 2 + rhs.bit_len() as i64 - self.bit_len() as i64;
        let sh = want.max(0);
        let num = &self.mant << sh as u64;
        let q = match dir {
            Round::Down => num.div_floor(&rhs.mant),
            Round::Up => num.div_ceil(&rhs.mant),
        };
        Dyadic::new(q, self.exp - rhs.exp - sh).round(bits, dir)
    }

    /// Exact product with a machine integer.
    pub fn mul_u64(&self, k: u64) -> Self {
        Dyadic::new(&self.mant * k, self.exp)
    }

    /// Largest integer `<= self`.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        }
    }

    /// Smallest integer `>= self`.
    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Directed rounding of an exact rational.
    pub fn from_rational(q: &BigRational, bits: u32, dir: Round) -> Self {
        Dyadic::from_bigint(q.numer().clone()).div_round(&Dyadic::from_bigint(q.denom().clone()), bits, dir)
    }

    /// Nearest-ish `f64`; only for display and heuristics.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let len = self.mant.bits() as i64;
        let (m, e) = if len > 64 {
            (&self.mant >> (len - 64) as u64, self.exp + len - 64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let mf = m.to_f64().unwrap_or(f64::NAN);
        if e > i32::MAX as i64 {
            return mf.signum() * f64::INFINITY;
        }
        if e < i32::MIN as i64 {
            return 0.0;
        }
        // Split the scaling so intermediate powers stay finite.
        let e = e as i32;
        let half = e / 2;
        mf * 2f64.powi(half) * 2f64.powi(e - half)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let mag = match self.top().cmp(&other.top()) {
            Ordering::Equal => {
                let e = self.exp.min(other.exp);
                let a = self.mant.abs() << (self.exp - e) as u64;
                let b = other.mant.abs() << (other.exp - e) as u64;
                a.cmp(&b)
            }
            ord => ord,
        };
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}
