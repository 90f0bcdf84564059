//! Change points of `sigma`: the indices `n_i` with `sigma_{n_i + 1} = sigma_{n_i} + 1`.
//!
//! `sigma` is nondecreasing with unit steps, so `n_i` is one less than the first `n`
//! with `sigma_n = i + 2`, found by a certified binary search.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::elementary::{e, pi};
use crate::error::{Error, Result};
use crate::interval::{BoundedReal, Comparison, PrecisionPolicy, DEFAULT_BITS};
use crate::sigma::{sigma_exact, SigmaCertificate};

#[derive(Clone, Debug, PartialEq)]
pub struct ChangePointRecord {
    pub index: u64,
    pub n_i: u64,
    /// `sigma_{n_i}`, always `index + 1`.
    pub sigma_at: u64,
    /// `n_{i+1} - n_i`; `None` for the last record of an enumeration.
    pub gap: Option<u64>,
    /// `n_{i+1} / n_i`.
    pub quotient: Option<BoundedReal>,
    pub bits_used: u32,
}

impl ChangePointRecord {
    /// A record without successor data, as read back from a cache.
    pub fn bare(index: u64, n_i: u64, bits_used: u32) -> Self {
        ChangePointRecord {
            index,
            n_i,
            sigma_at: index + 1,
            gap: None,
            quotient: None,
            bits_used,
        }
    }
}

/// One row of [`quotient_report`].
#[derive(Clone, Debug)]
pub struct QuotientRow {
    pub index: u64,
    pub quotient: BoundedReal,
    /// `n_{i+1}/n_i - e^2`.
    pub minus_e2: BoundedReal,
}

/// Binary searches over `sigma` sharing one cache of certified values.
///
/// The cache only ever stores certified facts, so concurrent inserts of the same key
/// are harmless.
#[derive(Debug)]
pub struct ChangePointFinder {
    policy: PrecisionPolicy,
    sigma: RwLock<HashMap<u64, SigmaCertificate>>,
    first: RwLock<HashMap<u64, u64>>,
}

impl ChangePointFinder {
    pub fn new(policy: PrecisionPolicy) -> Self {
        ChangePointFinder {
            policy,
            sigma: RwLock::new(HashMap::new()),
            first: RwLock::new(HashMap::new()),
        }
    }

    pub fn policy(&self) -> &PrecisionPolicy {
        &self.policy
    }

    /// Seeds the search tables from previously certified records.
    pub fn preload(&self, records: &[ChangePointRecord]) -> Result<()> {
        let mut first = self.first.write().unwrap_or_else(|e| e.into_inner());
        for r in records {
            if r.sigma_at != r.index + 1 || r.index == 0 {
                return Err(Error::Inconsistent(format!(
                    "cached change point {} has sigma {}",
                    r.index, r.sigma_at
                )));
            }
            first.insert(r.index + 2, r.n_i + 1);
        }
        Ok(())
    }

    /// Cached [`sigma_exact`].
    pub fn sigma(&self, n: u64) -> Result<SigmaCertificate> {
        if let Some(c) = self.sigma.read().unwrap_or_else(|e| e.into_inner()).get(&n) {
            return Ok(*c);
        }
        let cert = sigma_exact(n, &self.policy)?;
        self.sigma
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(n, cert);
        Ok(cert)
    }

    fn known_first(&self, c: u64) -> Option<u64> {
        self.first.read().unwrap_or_else(|e| e.into_inner()).get(&c).copied()
    }

    /// Least `n` with `sigma_n = c`, for `c >= 3`.
    pub fn first_n_with_sigma(&self, c: u64) -> Result<u64> {
        if c < 3 {
            return Err(Error::Domain(format!("first_n_with_sigma needs c >= 3, got {c}")));
        }
        if let Some(n) = self.known_first(c) {
            return Ok(n);
        }
        // sigma_n sits just above ln(2n)/2 for large n, which puts the step at
        // about e^(2c)/(2 pi).
        let seed = ((2.0 * c as f64).exp() / (2.0 * std::f64::consts::PI)).clamp(2.0, 1e18) as u64;
        let floor = self.known_first(c - 1).unwrap_or(1);
        let mut lo = seed.max(floor);
        while lo > floor && self.sigma(lo)?.sigma >= c {
            lo = (lo / 3).max(floor);
        }
        if self.sigma(lo)?.sigma >= c {
            return Err(Error::Inconsistent(format!("sigma_{lo} already reaches {c}")));
        }
        let mut hi = lo.max(seed);
        while self.sigma(hi)?.sigma < c {
            lo = hi;
            hi = hi
                .checked_mul(3)
                .ok_or_else(|| Error::Domain(format!("step to sigma = {c} is beyond u64")))?;
        }
        // sigma_lo < c <= sigma_hi
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.sigma(mid)?.sigma >= c {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        self.first
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(c, hi);
        Ok(hi)
    }

    /// All change points `n_i <= max_n`, with gaps and quotients between neighbours.
    pub fn enumerate(&self, max_n: u64) -> Result<Vec<ChangePointRecord>> {
        let mut records: Vec<ChangePointRecord> = Vec::new();
        for index in 1u64.. {
            let n_i = self.first_n_with_sigma(index + 2)? - 1;
            if n_i > max_n {
                break;
            }
            let before = self.sigma(n_i)?;
            let after = self.sigma(n_i + 1)?;
            if before.sigma != index + 1 || after.sigma != index + 2 {
                return Err(Error::Inconsistent(format!(
                    "change point {index} at n = {n_i}: sigma {} then {}",
                    before.sigma, after.sigma
                )));
            }
            if let Some(prev) = records.last_mut() {
                link(prev, n_i);
            }
            records.push(ChangePointRecord::bare(
                index,
                n_i,
                before.bits_used.max(after.bits_used),
            ));
        }
        Ok(records)
    }
}

fn link(prev: &mut ChangePointRecord, next_n: u64) {
    prev.gap = Some(next_n - prev.n_i);
    prev.quotient = Some(quotient(prev.n_i, next_n));
}

fn quotient(n: u64, next: u64) -> BoundedReal {
    BoundedReal::from_u64(next, DEFAULT_BITS)
        .div(&BoundedReal::from_u64(n, DEFAULT_BITS))
        .expect("change points are positive")
}

pub fn first_n_with_sigma(c: u64, policy: &PrecisionPolicy) -> Result<u64> {
    ChangePointFinder::new(*policy).first_n_with_sigma(c)
}

pub fn enumerate_changepoints(max_n: u64, policy: &PrecisionPolicy) -> Result<Vec<ChangePointRecord>> {
    ChangePointFinder::new(*policy).enumerate(max_n)
}

/// `3 n_i <= n_{i+1}` for each consecutive pair.
pub fn corollary_gap_check(records: &[ChangePointRecord]) -> Vec<bool> {
    records
        .windows(2)
        .map(|w| w[0].n_i.saturating_mul(3) <= w[1].n_i)
        .collect()
}

pub fn quotient_report(records: &[ChangePointRecord]) -> Vec<QuotientRow> {
    let e2 = e(DEFAULT_BITS).square();
    records
        .windows(2)
        .map(|w| {
            let q = quotient(w[0].n_i, w[1].n_i);
            QuotientRow {
                index: w[0].index,
                minus_e2: q.sub(&e2),
                quotient: q,
            }
        })
        .collect()
}

/// Whether the quotients strictly decrease; `None` if some comparison is undecided.
pub fn quotients_strictly_decreasing(rows: &[QuotientRow]) -> Option<bool> {
    let mut all = true;
    for w in rows.windows(2) {
        match w[1].quotient.compare(&w[0].quotient) {
            Comparison::Lt => {}
            Comparison::Gt => all = false,
            Comparison::Undecided => return None,
        }
    }
    Some(all)
}

/// Window seed for [`ChangePointFinder::first_n_with_sigma`], as an enclosure.
pub fn window_seed(c: u64, bits: u32) -> Result<BoundedReal> {
    let two_c = BoundedReal::from_u64(2 * c, bits);
    crate::elementary::exp(&two_c)?.div(&pi(bits).scale_pow2(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decimal::parse_decimal;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn first_steps() {
        let f = ChangePointFinder::new(policy());
        assert_eq!(f.first_n_with_sigma(3).unwrap(), 4);
        assert_eq!(f.first_n_with_sigma(4).unwrap(), 55);
        assert_eq!(f.first_n_with_sigma(5).unwrap(), 459);
        assert!(f.first_n_with_sigma(2).is_err());
    }

    #[test]
    fn small_enumerations() {
        let p = policy();
        assert!(enumerate_changepoints(2, &p).unwrap().is_empty());
        let one = enumerate_changepoints(3, &p).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!((one[0].n_i, one[0].sigma_at, one[0].gap), (3, 2, None));
        let recs = enumerate_changepoints(4000, &p).unwrap();
        let ns: Vec<u64> = recs.iter().map(|r| r.n_i).collect();
        assert_eq!(ns, vec![3, 54, 458, 3480]);
        assert_eq!(recs[0].gap, Some(51));
        assert!(recs[0].quotient.as_ref().unwrap().contains_rational(&parse_decimal("18").unwrap()));
        assert!(recs[3].gap.is_none());
    }

    #[test]
    fn gap_check_examples() {
        let recs = |ns: &[u64]| -> Vec<ChangePointRecord> {
            ns.iter()
                .enumerate()
                .map(|(i, &n)| ChangePointRecord::bare(i as u64 + 1, n, 128))
                .collect()
        };
        assert_eq!(corollary_gap_check(&recs(&[3, 54])), vec![true]);
        assert_eq!(corollary_gap_check(&recs(&[25867, 191351])), vec![true]);
        assert_eq!(corollary_gap_check(&recs(&[5, 14])), vec![false]);
        assert!(corollary_gap_check(&recs(&[3])).is_empty());
    }

    #[test]
    fn quotients_and_e_squared() {
        let recs: Vec<_> = [3u64, 54, 458, 3480]
            .iter()
            .enumerate()
            .map(|(i, &n)| ChangePointRecord::bare(i as u64 + 1, n, 128))
            .collect();
        let rows = quotient_report(&recs);
        assert_eq!(rows.len(), 3);
        // 7.598... - 7.389... > 0
        assert!(rows[2].minus_e2.lo().signum() > 0);
        assert!((rows[2].minus_e2.mid_f64() - (3480.0 / 458.0 - 7.38905609893065)).abs() < 1e-12);
        assert_eq!(quotients_strictly_decreasing(&rows), Some(true));
    }

    #[test]
    fn preload_skips_search() {
        let f = ChangePointFinder::new(policy());
        f.preload(&[ChangePointRecord::bare(1, 3, 128), ChangePointRecord::bare(2, 54, 128)])
            .unwrap();
        assert_eq!(f.first_n_with_sigma(4).unwrap(), 55);
        let mut bad = ChangePointRecord::bare(1, 3, 128);
        bad.sigma_at = 5;
        assert!(f.preload(&[bad]).is_err());
    }

    #[test]
    fn seed_matches_float_estimate() {
        let s = window_seed(5, 128).unwrap();
        let est = 10f64.exp() / (2.0 * std::f64::consts::PI);
        assert!((s.mid_f64() - est).abs() < 1e-9);
        assert!(s.width().to_f64() < 1e-30);
    }
}
