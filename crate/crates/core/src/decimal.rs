//! Decimal rendering of enclosure endpoints and exact decimal parsing.
//!
//! A lower endpoint `lo` at precision `bits` renders as the shortest decimal in
//! `(lo - 2^(top(lo) - bits), lo]`; rounding that decimal up to `bits` bits gives `lo`
//! back, and the printed value never exceeds the true lower endpoint. Upper endpoints
//! are symmetric.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use crate::interval::BoundedReal;

pub fn lower_decimal(lo: &Dyadic, bits: u32) -> String {
    shortest_decimal(lo, bits, Round::Down)
}

pub fn upper_decimal(hi: &Dyadic, bits: u32) -> String {
    shortest_decimal(hi, bits, Round::Up)
}

/// `(lower, upper)` decimal strings of an enclosure.
pub fn render(x: &BoundedReal) -> (String, String) {
    (lower_decimal(x.lo(), x.bits()), upper_decimal(x.hi(), x.bits()))
}

fn shortest_decimal(v: &Dyadic, bits: u32, dir: Round) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let target = v.to_rational();
    let slack = Dyadic::pow2(v.top() - bits as i64).to_rational();
    // Decimal exponent estimate; only affects the search window, not correctness.
    let e10 = (v.top() as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let max_sig = (bits as f64 * std::f64::consts::LOG10_2) as i64 + 4;

    let candidate = |sig: i64| -> (BigInt, i64) {
        let k = e10 - sig + 1;
        let scaled = &target / pow10(k);
        let m = match dir {
            Round::Down => scaled.floor().to_integer(),
            Round::Up => scaled.ceil().to_integer(),
        };
        (m, k)
    };
    let acceptable = |m: &BigInt, k: i64| -> bool {
        let d = BigRational::from_integer(m.clone()) * pow10(k);
        match dir {
            Round::Down => d > &target - &slack,
            Round::Up => d < &target + &slack,
        }
    };

    // More significant digits only move the candidate toward the target, so the
    // acceptable digit counts form a suffix of 1..=max_sig.
    let (mut lo, mut hi) = (1i64, max_sig);
    while lo < hi {
        let mid = (lo + hi) / 2;
        let (m, k) = candidate(mid);
        if acceptable(&m, k) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let (m, k) = candidate(lo);
    format_scaled(&m, k)
}

fn pow10(k: i64) -> BigRational {
    let p = num_traits::pow(BigInt::from(10), k.unsigned_abs() as usize);
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// Render `m * 10^k` without trailing zeros, switching to scientific notation for very
/// large or very small magnitudes.
fn format_scaled(m: &BigInt, k: i64) -> String {
    if m.is_zero() {
        return "0".to_string();
    }
    let mut m = m.clone();
    let mut k = k;
    let ten = BigInt::from(10);
    loop {
        let (q, r) = m.div_rem(&ten);
        if !r.is_zero() {
            break;
        }
        m = q;
        k += 1;
    }
    let neg = m.is_negative();
    let digits = m.abs().to_string();
    let n = digits.len() as i64;
    let sign = if neg { "-" } else { "" };
    let exp10 = n - 1 + k;
    if !(-12..=30).contains(&exp10) {
        let (head, tail) = digits.split_at(1);
        return if tail.is_empty() {
            format!("{sign}{head}e{exp10}")
        } else {
            format!("{sign}{head}.{tail}e{exp10}")
        };
    }
    if k >= 0 {
        format!("{sign}{digits}{}", "0".repeat(k as usize))
    } else if -k < n {
        let (int, frac) = digits.split_at((n + k) as usize);
        format!("{sign}{int}.{frac}")
    } else {
        format!("{sign}0.{}{digits}", "0".repeat((-k - n) as usize))
    }
}

/// Parse `123`, `-1.25`, `6.02e23`, `.5` or `p/q` into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let err = || Error::Parse(s.to_string());
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    if exponent.unsigned_abs() > 100_000 {
        return Err(err());
    }
    let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| err())?;
    let q = BigRational::from_integer(if neg { -digits } else { digits }) * pow10(exponent - frac.len() as i64);
    Ok(q)
}

/// Parse a decimal literal into an enclosure at `bits`.
pub fn parse_bounded(s: &str, bits: u32) -> Result<BoundedReal> {
    parse_decimal(s).map(|q| BoundedReal::from_rational(&q, bits))
}
