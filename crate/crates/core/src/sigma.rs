//! `T_n = e (n!)^(1/n)`, the sequence `sigma_n` (largest `l` with `n + l - 1 <= T_n`)
//! and, for `a > 1`, the least `n_a` with `a^(n_a) <= n_a!`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::atlas::{bracket_lower, bracket_upper_core};
use crate::dyadic::Dyadic;
use crate::elementary::{e, exp, ln};
use crate::error::{Error, Result};
use crate::factorial::{ln_factorial_at, LnFactorialMethod};
use crate::interval::{BoundedReal, Comparison, PrecisionPolicy, DEFAULT_BITS};

/// A certified value of `sigma_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SigmaCertificate {
    pub n: u64,
    pub sigma: u64,
    pub bits_used: u32,
    pub method: LnFactorialMethod,
}

/// `(ln(2n) QL(n), ln(2n) QR(n) + 1)` and the integers that may lie inside.
#[derive(Clone, Debug)]
pub struct CandidateBracket {
    pub n: u64,
    pub lower: BoundedReal,
    pub upper: BoundedReal,
    /// Integers `l` with `lower.lo < l < upper.hi`, ascending.
    pub candidates: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct NaResult {
    pub a: BoundedReal,
    pub n_a: u64,
    /// The `n` with `n/e < a <= (n+1)/e`.
    pub n_env: u64,
    pub sigma_env: u64,
    /// `n_a - n_env + sigma_{n_env}`.
    pub r: i64,
}

/// `e (n!)^(1/n)` as `exp(1 + ln(n!)/n)`.
pub fn t_value_at(n: u64, bits: u32) -> Result<BoundedReal> {
    let (lf, _) = ln_factorial_at(n, bits)?;
    exp(&lf.div(&BoundedReal::from_u64(n, bits))?.add(&BoundedReal::one(bits)))
}

/// `T_n`, escalating until its width is below `2^(8 - initial_bits) * T_n`.
pub fn t_value(n: u64, policy: &PrecisionPolicy) -> Result<BoundedReal> {
    if n == 0 {
        return Err(Error::Domain("T_n needs n >= 1".into()));
    }
    let mut last = None;
    for bits in policy.steps() {
        let t = t_value_at(n, bits)?;
        let allowed = t.hi().shifted(8 - policy.initial_bits() as i64);
        if t.width() <= allowed {
            return Ok(t);
        }
        last = Some(t.width().to_f64());
    }
    Err(Error::PrecisionCap {
        max_bits: policy.max_bits(),
        achieved_width: format!("{:e}", last.unwrap_or(f64::NAN)),
    })
}

/// The two-sided bracket on `sigma_n`, certified at [`DEFAULT_BITS`].
pub fn sigma_bracket(n: u64) -> Result<CandidateBracket> {
    if n < 2 {
        return Err(Error::Domain(format!("sigma bracket needs n >= 2, got {n}")));
    }
    let x = BoundedReal::from_u64(n, DEFAULT_BITS);
    let lower = bracket_lower(&x)?;
    let upper = bracket_upper_core(&x)?.add(&BoundedReal::one(DEFAULT_BITS));
    let first = lower.lo().floor() + 1;
    let last = upper.hi().ceil() - 1;
    let candidates = num_iter_inclusive(&first, &last);
    Ok(CandidateBracket {
        n,
        lower,
        upper,
        candidates,
    })
}

fn num_iter_inclusive(first: &BigInt, last: &BigInt) -> Vec<u64> {
    let (Some(a), Some(b)) = (first.to_i64(), last.to_i64()) else {
        return Vec::new();
    };
    (a.max(1)..=b).map(|v| v as u64).collect()
}

/// Outcome of testing `n + l - 1 <= T_n` at one precision.
enum Step {
    Holds,
    Fails,
    Undecided,
}

struct SigmaProbe {
    n: u64,
    bits: u32,
    /// `1 + ln(n!)/n`, i.e. `ln T_n`.
    ln_t: BoundedReal,
}

impl SigmaProbe {
    fn new(n: u64, bits: u32) -> Result<(Self, LnFactorialMethod)> {
        let (lf, method) = ln_factorial_at(n, bits)?;
        let ln_t = lf.div(&BoundedReal::from_u64(n, bits))?.add(&BoundedReal::one(bits));
        Ok((SigmaProbe { n, bits, ln_t }, method))
    }

    /// `ln(n + l - 1)` against `ln T_n`; equality is never certified.
    fn test(&self, l: u64) -> Result<Step> {
        let lhs = ln(&BoundedReal::from_u64(self.n + l - 1, self.bits))?;
        Ok(match lhs.compare(&self.ln_t) {
            Comparison::Lt => Step::Holds,
            Comparison::Gt => Step::Fails,
            Comparison::Undecided => Step::Undecided,
        })
    }
}

/// Largest `l` with `test(l)` holding, starting the walk at `start`.
/// `Err(Some(l))` marks `l` as the undecided probe.
fn walk(probe: &SigmaProbe, start: u64) -> Result<std::result::Result<u64, u64>> {
    let mut l = start.max(1);
    match probe.test(l)? {
        Step::Undecided => return Ok(Err(l)),
        Step::Fails => loop {
            // Outside the bracket; l = 1 always holds since n <= T_n.
            l -= 1;
            match probe.test(l)? {
                Step::Holds => return Ok(Ok(l)),
                Step::Fails if l > 1 => continue,
                _ => return Ok(Err(l)),
            }
        },
        Step::Holds => loop {
            match probe.test(l + 1)? {
                Step::Holds => l += 1,
                Step::Fails => return Ok(Ok(l)),
                Step::Undecided => return Ok(Err(l + 1)),
            }
        },
    }
}

/// Certified `sigma_n`: the predicate is decided at `sigma` (holds) and `sigma + 1`
/// (fails), escalating precision whenever a comparison is undecided.
pub fn sigma_exact(n: u64, policy: &PrecisionPolicy) -> Result<SigmaCertificate> {
    if n == 0 {
        return Err(Error::Domain("sigma_n needs n >= 1".into()));
    }
    let start = if n == 1 {
        2
    } else {
        sigma_bracket(n)?.candidates.first().copied().unwrap_or(2)
    };
    let mut undecided_at = start;
    let mut last_bits = policy.initial_bits();
    for bits in policy.steps() {
        last_bits = bits;
        let (probe, method) = SigmaProbe::new(n, bits)?;
        match walk(&probe, start)? {
            Ok(sigma) => {
                return Ok(SigmaCertificate {
                    n,
                    sigma,
                    bits_used: bits,
                    method,
                })
            }
            Err(l) => undecided_at = l,
        }
    }
    Err(Error::SigmaUndecided {
        n,
        lower: undecided_at.saturating_sub(1),
        upper: undecided_at,
        bits: last_bits,
    })
}

/// `l ln a <= ln l!`, decided at `bits`.
fn power_below_factorial(ln_a: &BoundedReal, l: u64, bits: u32) -> Result<Option<bool>> {
    let (lf, _) = ln_factorial_at(l, bits)?;
    let lhs = ln_a.mul(&BoundedReal::from_u64(l, bits));
    Ok(match lhs.compare(&lf) {
        Comparison::Lt => Some(true),
        Comparison::Gt => Some(false),
        Comparison::Undecided => None,
    })
}

/// `n` with `n < a e < n + 1`, if the enclosure decides it.
fn envelope_index(a: &BoundedReal, bits: u32) -> Option<u64> {
    let ae = a.mul(&e(bits));
    let k = ae.lo().floor();
    let kd = Dyadic::from_bigint(k.clone());
    let next = kd.add_exact(&Dyadic::one());
    (ae.lo() > &kd && ae.hi() < &next).then(|| k.to_u64())?
}

/// `n_a` for an exact rational base `a > 1`.
pub fn n_a_of_rational(a: &BigRational, policy: &PrecisionPolicy) -> Result<NaResult> {
    n_a_with(|bits| BoundedReal::from_rational(a, bits), policy)
}

/// `n_a` for a base given as an enclosure; `a.lo` must exceed 1.
pub fn n_a_of(a: &BoundedReal, policy: &PrecisionPolicy) -> Result<NaResult> {
    n_a_with(|bits| a.with_bits(bits), policy)
}

fn n_a_with(enclose: impl Fn(u32) -> BoundedReal, policy: &PrecisionPolicy) -> Result<NaResult> {
    let first = enclose(policy.initial_bits());
    if first.lo() <= &Dyadic::one() {
        return Err(Error::Domain(format!("n_a needs a > 1, got {first}")));
    }
    let mut env = None;
    for bits in policy.steps() {
        let a = enclose(bits);
        let ln_a = ln(&a)?;
        let n_env = match env {
            Some(v) => v,
            None => match envelope_index(&a, bits) {
                Some(v) => {
                    env = Some(v);
                    v
                }
                None => continue,
            },
        };
        let sigma = sigma_exact(n_env, policy)?.sigma;
        let holds = |l: u64| power_below_factorial(&ln_a, l, bits);
        let is_least = |l: u64| -> Result<Option<bool>> {
            if l == 0 {
                return Ok(Some(false));
            }
            let here = holds(l)?;
            let before = if l == 1 { Some(false) } else { holds(l - 1)? };
            Ok(match (here, before) {
                (Some(h), Some(b)) => Some(h && !b),
                _ => None,
            })
        };
        let mut found = None;
        let mut undecided = false;
        for r in 1..=3i64 {
            let c = n_env as i64 - sigma as i64 + r;
            if c < 1 {
                continue;
            }
            match is_least(c as u64)? {
                Some(true) => {
                    found = Some(c as u64);
                    break;
                }
                Some(false) => {}
                None => undecided = true,
            }
        }
        if found.is_none() && !undecided {
            // a^l / l! rises then falls, so the first l that holds is the answer.
            let mut l = 1u64;
            loop {
                match holds(l)? {
                    Some(true) => {
                        found = Some(l);
                        break;
                    }
                    Some(false) => l += 1,
                    None => break,
                }
            }
        }
        if let Some(n_a) = found {
            return Ok(NaResult {
                a,
                n_a,
                n_env,
                sigma_env: sigma,
                r: n_a as i64 - n_env as i64 + sigma as i64,
            });
        }
    }
    Err(Error::Undecidable {
        what: format!("n_a for a = {}", enclose(policy.max_bits())),
        bits: policy.max_bits(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decimal::parse_decimal;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn t_small_values() {
        let t1 = t_value(1, &policy()).unwrap();
        assert!(t1.overlaps(&e(128)));
        let t2 = t_value(2, &policy()).unwrap();
        // oracle: e * sqrt(2) to 30 digits
        let q = parse_decimal("3.84423102815911682486367163742").unwrap();
        let eps = parse_decimal("1e-29").unwrap();
        assert!(t2.lo().to_rational() <= &q + &eps && &q - &eps <= t2.hi().to_rational());
    }

    #[test]
    fn bracket_at_four() {
        let b = sigma_bracket(4).unwrap();
        assert_eq!(b.candidates, vec![2, 3]);
        assert!((b.lower.mid_f64() - 1.7608606436794717).abs() < 1e-12);
        assert!((b.upper.mid_f64() - 3.7561194237999589).abs() < 1e-12);
        assert!(sigma_bracket(1).is_err());
    }

    #[test]
    fn sigma_small_table() {
        let p = policy();
        assert_eq!(sigma_exact(1, &p).unwrap().sigma, 2);
        assert_eq!(sigma_exact(3, &p).unwrap().sigma, 2);
        assert_eq!(sigma_exact(4, &p).unwrap().sigma, 3);
        assert_eq!(sigma_exact(54, &p).unwrap().sigma, 3);
        let c = sigma_exact(55, &p).unwrap();
        assert_eq!((c.sigma, c.method, c.bits_used), (4, LnFactorialMethod::ExactSum, 128));
        assert_eq!(sigma_exact(459, &p).unwrap().sigma, 5);
        assert!(sigma_exact(0, &p).is_err());
    }

    fn brute_n_a(p: i64, q: i64) -> u64 {
        // smallest l with p^l <= l! q^l, in exact integers
        let (p, q) = (BigInt::from(p), BigInt::from(q));
        let mut fact = BigInt::from(1);
        let (mut pp, mut qq) = (BigInt::from(1), BigInt::from(1));
        for l in 1u64.. {
            fact *= l;
            pp *= &p;
            qq *= &q;
            if pp <= &fact * &qq {
                return l;
            }
        }
        unreachable!()
    }

    #[test]
    fn n_a_examples() {
        let p = policy();
        let r = n_a_of_rational(&parse_decimal("2").unwrap(), &p).unwrap();
        assert_eq!((r.n_a, r.n_env, r.r), (4, 5, 2));
        assert_eq!(brute_n_a(2, 1), 4);
        let r = n_a_of_rational(&parse_decimal("10").unwrap(), &p).unwrap();
        assert_eq!((r.n_a, r.n_env, r.r), (25, 27, 1));
        assert_eq!(brute_n_a(10, 1), 25);
        let r = n_a_of_rational(&parse_decimal("1.01").unwrap(), &p).unwrap();
        assert_eq!(r.n_a, 2);
        assert_eq!(brute_n_a(101, 100), 2);
        assert!(n_a_of_rational(&parse_decimal("1").unwrap(), &p).is_err());
    }

    #[test]
    fn n_a_from_interval() {
        let a = BoundedReal::from_int(3, 128);
        let r = n_a_of(&a, &policy()).unwrap();
        assert_eq!(r.n_a, brute_n_a(3, 1));
        assert!((1..=3).contains(&r.r));
    }
}
