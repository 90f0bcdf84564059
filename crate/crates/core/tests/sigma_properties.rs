use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use sigma_lab::atlas::{a_transform, eval, FunctionId};
use sigma_lab::{
    n_a_of_rational, sigma_bracket, sigma_exact, t_value, BoundedReal, Comparison, PrecisionPolicy,
};

const TOP: u64 = 5000;

/// `sigma_1 ..= sigma_{TOP + 1}`, index 0 unused.
fn sigmas() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let p = PrecisionPolicy::default();
        let mut v = vec![0];
        v.extend((1..=TOP + 1).map(|n| sigma_exact(n, &p).unwrap().sigma));
        v
    })
}

#[test]
fn sigma_lies_in_its_bracket() {
    let s = sigmas();
    for n in 2..=TOP {
        let b = sigma_bracket(n).unwrap();
        assert!(b.candidates.contains(&s[n as usize]), "n = {n}: {:?}", b.candidates);
        if n >= 4 {
            assert!(b.candidates.len() <= 2, "n = {n}: {:?}", b.candidates);
        }
    }
}

#[test]
fn sigma_steps_by_zero_or_one() {
    let s = sigmas();
    assert_eq!(s[1], 2);
    for n in 1..=TOP as usize {
        let step = s[n + 1] - s[n];
        assert!(step <= 1, "sigma_{} = {}, sigma_{} = {}", n, s[n], n + 1, s[n + 1]);
    }
}

#[test]
fn sandwiches_around_sigma() {
    let s = sigmas();
    for n in 2..=TOP {
        let x = BoundedReal::from_u64(n, 128);
        let sig = BoundedReal::from_u64(s[n as usize], 128);
        let one = BoundedReal::one(128);
        // L(n) P(2n) - 1 < sigma/n < R(n) P(2n) - 1 + 1/n
        let ratio = sig.div(&x).unwrap();
        let lower = eval(FunctionId::ScriptL, &x).unwrap().sub(&one);
        let upper = eval(FunctionId::ScriptR, &x).unwrap().sub(&one).add(&x.recip().unwrap());
        assert_eq!(lower.compare(&ratio), Comparison::Lt, "n = {n}");
        assert_eq!(ratio.compare(&upper), Comparison::Lt, "n = {n}");
        // a_scriptL(n) < sigma < a_scriptR(n) + 1
        let al = a_transform(FunctionId::ScriptL, &x).unwrap();
        let ar = a_transform(FunctionId::ScriptR, &x).unwrap().add(&one);
        assert_eq!(al.compare(&sig), Comparison::Lt, "n = {n}");
        assert_eq!(sig.compare(&ar), Comparison::Lt, "n = {n}");
    }
}

#[test]
fn t_value_between_robbins_bounds() {
    let p = PrecisionPolicy::default();
    for n in 1..=100u64 {
        let t = t_value(n, &p).unwrap();
        let two_n = BoundedReal::from_u64(2 * n, 128);
        let x = BoundedReal::from_u64(n, 128);
        let t2n = eval(FunctionId::T, &two_n).unwrap().scale_pow2(-1);
        let lo = eval(FunctionId::L, &x).unwrap().mul(&t2n);
        let hi = eval(FunctionId::R, &x).unwrap().mul(&t2n);
        assert_eq!(lo.compare(&t), Comparison::Lt, "n = {n}");
        assert_eq!(t.compare(&hi), Comparison::Lt, "n = {n}");
    }
}

#[test]
fn certificate_brackets_t() {
    let p = PrecisionPolicy::default();
    for n in [1u64, 2, 3, 4, 54, 55, 999, 4096, 1_000_000, 1_000_001, 123_456_789_012] {
        let c = sigma_exact(n, &p).unwrap();
        let t = t_value(n, &p).unwrap();
        let low = BoundedReal::from_u64(n + c.sigma - 1, 128);
        let high = BoundedReal::from_u64(n + c.sigma, 128);
        assert_eq!(low.compare(&t), Comparison::Lt, "n = {n}");
        assert_eq!(t.compare(&high), Comparison::Lt, "n = {n}");
    }
}

/// Least `l` with `(p/q)^l <= l!`, in exact integers.
fn brute_n_a(p: u64, q: u64) -> u64 {
    let (p, q) = (BigInt::from(p), BigInt::from(q));
    let (mut pp, mut qq, mut fact) = (BigInt::from(1), BigInt::from(1), BigInt::from(1));
    for l in 1u64.. {
        pp *= &p;
        qq *= &q;
        fact *= l;
        if pp <= &fact * &qq {
            return l;
        }
    }
    unreachable!()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn n_a_matches_brute_force(p in 2u64..5000, q in 1u64..100) {
        prop_assume!(p > q);
        let a = BigRational::new(BigInt::from(p), BigInt::from(q));
        let r = n_a_of_rational(&a, &PrecisionPolicy::default()).unwrap();
        prop_assert_eq!(r.n_a, brute_n_a(p, q));
        prop_assert!((1..=3).contains(&r.r), "r = {}", r.r);
    }
}
