//! Closed-form functions built on `L(x) = pi^(1/(2x)) e^(1/((12x+1)x))`,
//! `R(x) = pi^(1/(2x)) e^(1/(12x^2))` and `P(x) = x^(1/x)`, written once against
//! [`Scalar`] so they evaluate either certified or as plain floats.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctionId {
    /// `pi^(1/(2x)) e^(1/((12x+1)x))`
    L,
    /// `pi^(1/(2x)) e^(1/(12x^2))`
    R,
    /// `x^(1/x)`
    P,
    /// `x P(x)`
    T,
    /// `P(2x)`
    SmallP,
    /// `L(x) P(2x)`
    ScriptL,
    /// `R(x) P(2x)`
    ScriptR,
    /// `alpha/ln(2x) + (1 + alpha/x)/2`
    QL,
    /// `(2/ln(2x) + 1) x/(2x - ln(2x))`
    QR,
    /// `ln(2x) QR(x) - ln(2x) QL(x)`
    D,
    /// `(1 + x) ln(2x)/(2x - ln(2x))`
    F,
    /// `(2y + y e^y) / (2(e^y - y))`
    G,
    /// `alpha (1 + y/e^y) + y/2`
    H,
    /// `e^y - (y^2 + 2y - 2)`
    GN,
    /// `y^2 + (2 + ln pi) y + ln pi (2 + ln pi)`
    B0,
    /// `y (y + ln pi) ln pi`
    C0,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Domain {
    Positive,
    /// `x >= e/2`, checked against the lower endpoint of an enclosure of `e/2`.
    HalfE,
    AboveHalf,
    NonNegative,
}

impl FunctionId {
    pub const ALL: [FunctionId; 16] = [
        FunctionId::L,
        FunctionId::R,
        FunctionId::P,
        FunctionId::T,
        FunctionId::SmallP,
        FunctionId::ScriptL,
        FunctionId::ScriptR,
        FunctionId::QL,
        FunctionId::QR,
        FunctionId::D,
        FunctionId::F,
        FunctionId::G,
        FunctionId::H,
        FunctionId::GN,
        FunctionId::B0,
        FunctionId::C0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionId::L => "L",
            FunctionId::R => "R",
            FunctionId::P => "P",
            FunctionId::T => "T",
            FunctionId::SmallP => "p",
            FunctionId::ScriptL => "scriptL",
            FunctionId::ScriptR => "scriptR",
            FunctionId::QL => "QL",
            FunctionId::QR => "QR",
            FunctionId::D => "D",
            FunctionId::F => "F",
            FunctionId::G => "G",
            FunctionId::H => "H",
            FunctionId::GN => "GN",
            FunctionId::B0 => "B0",
            FunctionId::C0 => "C0",
        }
    }

    fn domain(self) -> Domain {
        use FunctionId::*;
        match self {
            L | R | P | T | SmallP | ScriptL | ScriptR => Domain::Positive,
            QL | QR | D => Domain::HalfE,
            F => Domain::AboveHalf,
            G | H | GN | B0 | C0 => Domain::NonNegative,
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `alpha = ln(pi) / 2`.
pub fn alpha<S: Scalar>(like: &S) -> S {
    like.ln_pi().mul(&like.ratio(1, 2))
}

fn check_domain<S: Scalar>(fun: FunctionId, x: &S) -> Result<()> {
    let ok = match fun.domain() {
        Domain::Positive => x.inf_cmp(&x.int(0)) == Ordering::Greater,
        Domain::HalfE => x.inf_cmp(&x.e().mul(&x.ratio(1, 2))) != Ordering::Less,
        Domain::AboveHalf => x.inf_cmp(&x.ratio(1, 2)) == Ordering::Greater,
        Domain::NonNegative => x.inf_cmp(&x.int(0)) != Ordering::Less,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!("{fun} is not defined at {x:?}")))
    }
}

/// `pi^(1/(2x))`
fn pi_root<S: Scalar>(x: &S) -> Result<S> {
    x.ln_pi().div(&x.mul(&x.int(2)))
}

fn ln_2x<S: Scalar>(x: &S) -> Result<S> {
    x.mul(&x.int(2)).ln()
}

fn p_of<S: Scalar>(x: &S) -> Result<S> {
    x.ln()?.div(x)?.exp()
}

/// Certified (or float) value of one named function.
pub fn eval<S: Scalar>(fun: FunctionId, x: &S) -> Result<S> {
    check_domain(fun, x)?;
    let one = x.int(1);
    let two = x.int(2);
    match fun {
        FunctionId::L => {
            let inner = x.int(12).mul(x).add(&one).mul(x);
            pi_root(x)?.add(&one.div(&inner)?).exp()
        }
        FunctionId::R => {
            let inner = x.int(12).mul(&x.square());
            pi_root(x)?.add(&one.div(&inner)?).exp()
        }
        FunctionId::P => p_of(x),
        FunctionId::T => Ok(x.mul(&p_of(x)?)),
        FunctionId::SmallP => p_of(&x.mul(&two)),
        FunctionId::ScriptL => Ok(eval(FunctionId::L, x)?.mul(&p_of(&x.mul(&two))?)),
        FunctionId::ScriptR => Ok(eval(FunctionId::R, x)?.mul(&p_of(&x.mul(&two))?)),
        FunctionId::QL => {
            let a = alpha(x);
            let first = a.div(&ln_2x(x)?)?;
            let second = one.add(&a.div(x)?).mul(&x.ratio(1, 2));
            Ok(first.add(&second))
        }
        FunctionId::QR => {
            let l = ln_2x(x)?;
            let left = two.div(&l)?.add(&one);
            let right = x.div(&x.mul(&two).sub(&l))?;
            Ok(left.mul(&right))
        }
        FunctionId::D => {
            let l = ln_2x(x)?;
            let qr = eval(FunctionId::QR, x)?;
            let ql = eval(FunctionId::QL, x)?;
            Ok(l.mul(&qr).sub(&l.mul(&ql)))
        }
        FunctionId::F => {
            let l = ln_2x(x)?;
            Ok(one.add(x).mul(&l.div(&x.mul(&two).sub(&l))?))
        }
        FunctionId::G => {
            let ey = x.exp()?;
            let num = x.mul(&two).add(&x.mul(&ey));
            num.div(&ey.sub(x).mul(&two))
        }
        FunctionId::H => {
            let ey = x.exp()?;
            let a = alpha(x);
            Ok(a.mul(&one.add(&x.div(&ey)?)).add(&x.ratio(1, 2).mul(x)))
        }
        FunctionId::GN => {
            let poly = x.square().add(&x.mul(&two)).sub(&two);
            Ok(x.exp()?.sub(&poly))
        }
        FunctionId::B0 => {
            let lp = x.ln_pi();
            let two_lp = two.add(&lp);
            Ok(x.square().add(&two_lp.mul(x)).add(&lp.mul(&two_lp)))
        }
        FunctionId::C0 => {
            let lp = x.ln_pi();
            Ok(x.mul(&x.add(&lp)).mul(&lp))
        }
    }
}

/// `a_F(x) = (F(x) - 1) x`.
pub fn a_transform<S: Scalar>(fun: FunctionId, x: &S) -> Result<S> {
    Ok(eval(fun, x)?.sub(&x.int(1)).mul(x))
}

/// `delta(x) = a_scriptR(x) - a_scriptL(x)`.
pub fn delta<S: Scalar>(x: &S) -> Result<S> {
    Ok(a_transform(FunctionId::ScriptR, x)?.sub(&a_transform(FunctionId::ScriptL, x)?))
}

/// The same quantity as [`delta`], computed as `(a_R(x) - a_L(x)) P(2x)`.
pub fn delta_factored<S: Scalar>(x: &S) -> Result<S> {
    let diff = a_transform(FunctionId::R, x)?.sub(&a_transform(FunctionId::L, x)?);
    Ok(diff.mul(&eval(FunctionId::SmallP, x)?))
}

/// Lower end of the candidate bracket, `ln(2x) QL(x)`.
pub fn bracket_lower<S: Scalar>(x: &S) -> Result<S> {
    Ok(ln_2x(x)?.mul(&eval(FunctionId::QL, x)?))
}

/// `ln(2x) QR(x)`; the bracket's upper end is this plus one.
pub fn bracket_upper_core<S: Scalar>(x: &S) -> Result<S> {
    Ok(ln_2x(x)?.mul(&eval(FunctionId::QR, x)?))
}

/// `alpha + ln(2x)(x + alpha)/(2x)`, an alternative form of `ln(2x) QL(x)`.
pub fn bracket_lower_expanded<S: Scalar>(x: &S) -> Result<S> {
    let a = alpha(x);
    let frac = x.add(&a).div(&x.mul(&x.int(2)))?;
    Ok(a.add(&ln_2x(x)?.mul(&frac)))
}

/// `1 + (1 + x) ln(2x)/(2x - ln(2x))`, an alternative form of `ln(2x) QR(x)`.
pub fn bracket_upper_expanded<S: Scalar>(x: &S) -> Result<S> {
    check_domain(FunctionId::F, x)?;
    Ok(x.int(1).add(&eval(FunctionId::F, x)?))
}

/// `D(x) = (1 - alpha) 2x/(2x - ln 2x) + (x + alpha)/(2x - ln 2x) (ln(2x)/sqrt(2x))^2`.
pub fn d_expanded<S: Scalar>(x: &S) -> Result<S> {
    check_domain(FunctionId::D, x)?;
    let a = alpha(x);
    let l = ln_2x(x)?;
    let two_x = x.mul(&x.int(2));
    let denom = two_x.sub(&l);
    let first = x.int(1).sub(&a).mul(&two_x.div(&denom)?);
    let second = x.add(&a).div(&denom)?.mul(&l.square().div(&two_x)?);
    Ok(first.add(&second))
}

/// `GN'(y) = e^y - 2y - 2`.
pub fn gn_prime<S: Scalar>(y: &S) -> Result<S> {
    Ok(y.exp()?.sub(&y.mul(&y.int(2))).sub(&y.int(2)))
}

/// `G'(y) = e^y GN(y) / (2 (e^y - y)^2)`.
pub fn g_prime<S: Scalar>(y: &S) -> Result<S> {
    let ey = y.exp()?;
    let gn = eval(FunctionId::GN, y)?;
    ey.mul(&gn).div(&ey.sub(y).square().mul(&y.int(2)))
}

/// `H'(y) = 1/2 + alpha (1 - y) e^(-y)`.
pub fn h_prime<S: Scalar>(y: &S) -> Result<S> {
    let ey = y.exp()?;
    let a = alpha(y);
    Ok(y.ratio(1, 2).add(&a.mul(&y.int(1).sub(y)).div(&ey)?))
}

/// `(e^y - y + 1) / (2 e^y)`: `H'` with `ln pi` replaced by 1. Agrees with
/// [`h_prime`] only at `y = 1` and asymptotically.
pub fn h_prime_simplified<S: Scalar>(y: &S) -> Result<S> {
    let ey = y.exp()?;
    ey.sub(y).add(&y.int(1)).div(&ey.mul(&y.int(2)))
}

/// Shift `a >= 0` and `A = e^a` for the comparison of `G(y + a)` with `H(y)`.
#[derive(Clone, Debug)]
pub struct ShiftParams<S> {
    shift: S,
    exp_shift: S,
}

impl<S: Scalar> ShiftParams<S> {
    pub fn new(shift: S) -> Result<Self> {
        if shift.inf_cmp(&shift.int(0)) == Ordering::Less {
            return Err(Error::Domain(format!("shift {shift:?} must be non-negative")));
        }
        let exp_shift = shift.exp()?;
        Ok(ShiftParams { shift, exp_shift })
    }

    /// `a = ln 3`, so `A = 3` exactly.
    pub fn ln3(like: &S) -> Result<Self> {
        let three = like.int(3);
        Ok(ShiftParams {
            shift: three.ln()?,
            exp_shift: three,
        })
    }

    pub fn shift(&self) -> &S {
        &self.shift
    }

    pub fn exp_shift(&self) -> &S {
        &self.exp_shift
    }
}

/// `B(a, y) = y^2 + (2 + a + ln pi (1 - A)) y + a (2 + ln pi)` and
/// `C(a, y) = y (y + a) ln pi`.
pub fn eval_shifted<S: Scalar>(params: &ShiftParams<S>, y: &S) -> Result<(S, S)> {
    check_domain(FunctionId::B0, y)?;
    let a = &params.shift;
    let lp = y.ln_pi();
    let one = y.int(1);
    let two = y.int(2);
    let linear = two.add(a).add(&lp.mul(&one.sub(&params.exp_shift)));
    let b = y.square().add(&linear.mul(y)).add(&a.mul(&two.add(&lp)));
    let c = y.mul(&y.add(a)).mul(&lp);
    Ok((b, c))
}

/// `G(y + a) - H(y)`.
pub fn shift_gap<S: Scalar>(params: &ShiftParams<S>, y: &S) -> Result<S> {
    Ok(eval(FunctionId::G, &y.add(&params.shift))?.sub(&eval(FunctionId::H, y)?))
}

/// `G(y + a) - H(y)` through `B` and `C`:
/// `(A (a - ln pi) e^(2y) + B e^y + C) / (2 (e^(y+a) - (y+a)) e^y)`.
pub fn shift_gap_expanded<S: Scalar>(params: &ShiftParams<S>, y: &S) -> Result<S> {
    let (b, c) = eval_shifted(params, y)?;
    let ey = y.exp()?;
    let z = y.add(&params.shift);
    let lead = params.exp_shift.mul(&params.shift.sub(&y.ln_pi())).mul(&ey.square());
    let num = lead.add(&b.mul(&ey)).add(&c);
    let den = z.exp()?.sub(&z).mul(&ey).mul(&y.int(2));
    num.div(&den)
}

/// Sides of `B0(y)/e^y + C0(y)/e^(2y) < A (ln pi - a)`.
pub fn y_threshold_sides<S: Scalar>(params: &ShiftParams<S>, y: &S) -> Result<(S, S)> {
    let ey = y.exp()?;
    let lhs = eval(FunctionId::B0, y)?
        .div(&ey)?
        .add(&eval(FunctionId::C0, y)?.div(&ey.square())?);
    let rhs = params.exp_shift.mul(&y.ln_pi().sub(&params.shift));
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decimal::parse_decimal;
    use crate::dyadic::Dyadic;
    use crate::interval::{BoundedReal, Comparison};

    const BITS: u32 = 128;

    fn x(v: i64) -> BoundedReal {
        BoundedReal::from_int(v, BITS)
    }

    fn near(v: &BoundedReal, decimal: &str, tol: &str) -> bool {
        let q = parse_decimal(decimal).unwrap();
        let t = parse_decimal(tol).unwrap();
        v.lo().to_rational() <= &q + &t && &q - &t <= v.hi().to_rational()
    }

    #[test]
    fn trivial_values() {
        assert!(eval(FunctionId::P, &x(1)).unwrap().contains(&Dyadic::one()));
        assert!(near(&eval(FunctionId::P, &x(4)).unwrap(), "1.41421356237309504880", "1e-20"));
        assert!(eval(FunctionId::G, &x(0)).unwrap().contains(&Dyadic::zero()));
        assert!(eval(FunctionId::GN, &x(0)).unwrap().contains(&Dyadic::from_int(3)));
        let h0 = eval(FunctionId::H, &x(0)).unwrap();
        assert!(h0.overlaps(&alpha(&x(0))));
        assert!(near(&h0, "0.5723649429247000870717", "1e-21"));
    }

    #[test]
    fn l_and_r_at_one() {
        // oracle: mpmath sqrt(pi)*e^(1/13), sqrt(pi)*e^(1/12)
        assert!(near(&eval(FunctionId::L, &x(1)).unwrap(), "1.914177487356557377503252930521", "1e-29"));
        assert!(near(&eval(FunctionId::R, &x(1)).unwrap(), "1.926487268138701837374893986824", "1e-29"));
        assert!(near(&a_transform(FunctionId::L, &x(1)).unwrap(), "0.914177487356557377503252930521", "1e-29"));
        assert!(a_transform(FunctionId::P, &x(1)).unwrap().contains(&Dyadic::zero()));
    }

    #[test]
    fn ql_qr_at_half_e() {
        let half_e = elementary_half_e();
        assert!(near(&eval(FunctionId::QL, &half_e).unwrap(), "1.282926238273963234811207069471", "1e-28"));
        assert!(near(&eval(FunctionId::QR, &half_e).unwrap(), "2.372965060303989636577503007663", "1e-28"));
    }

    fn elementary_half_e() -> BoundedReal {
        crate::elementary::e(BITS).scale_pow2(-1)
    }

    #[test]
    fn domain_errors() {
        assert!(eval(FunctionId::L, &x(0)).is_err());
        assert!(eval(FunctionId::QL, &x(1)).is_err());
        assert!(eval(FunctionId::F, &BoundedReal::from_ratio(1, 2, BITS)).is_err());
        assert!(eval(FunctionId::G, &x(-1)).is_err());
        assert!(eval(FunctionId::D, &x(2)).is_ok());
        assert!(eval(FunctionId::QL, &1.0f64).is_err());
    }

    #[test]
    fn script_l_minus_p_identity_at_two() {
        let two = x(2);
        let lhs = a_transform(FunctionId::ScriptL, &two).unwrap().sub(&a_transform(FunctionId::SmallP, &two).unwrap());
        let rhs = a_transform(FunctionId::L, &two).unwrap().mul(&eval(FunctionId::SmallP, &two).unwrap());
        assert!(lhs.overlaps(&rhs));
        let lhs = a_transform(FunctionId::ScriptR, &two).unwrap().sub(&a_transform(FunctionId::SmallP, &two).unwrap());
        let rhs = a_transform(FunctionId::R, &two).unwrap().mul(&eval(FunctionId::SmallP, &two).unwrap());
        assert!(lhs.overlaps(&rhs));
    }

    #[test]
    fn delta_two_ways() {
        let one = delta(&x(1)).unwrap();
        assert_eq!(one.compare(&x(0)), Comparison::Gt);
        assert!(delta(&x(7)).unwrap().overlaps(&delta_factored(&x(7)).unwrap()));
        let big = delta(&x(1_000_000)).unwrap();
        assert_eq!(big.compare(&BoundedReal::from_ratio(1, 100, BITS)), Comparison::Lt);
        // oracle: mpmath, 50 digits
        assert!(near(&big, "6.9444982179898996724646653404e-15", "1e-40"));
    }

    #[test]
    fn shifted_quadratics() {
        let zero = ShiftParams::new(x(0)).unwrap();
        let (b, c) = eval_shifted(&zero, &x(0)).unwrap();
        assert!(b.contains(&Dyadic::zero()) && c.contains(&Dyadic::zero()));
        let p = ShiftParams::ln3(&x(0)).unwrap();
        for y in [0i64, 1, 3, 6, 10] {
            let yy = x(y);
            assert!(shift_gap(&p, &yy).unwrap().overlaps(&shift_gap_expanded(&p, &yy).unwrap()), "y={y}");
        }
        assert!(ShiftParams::new(x(-1)).is_err());
    }

    #[test]
    fn derivative_forms_agree_where_expected() {
        let one = x(1);
        assert!(h_prime(&one).unwrap().overlaps(&h_prime_simplified(&one).unwrap()));
        let two = x(2);
        assert!(!h_prime(&two).unwrap().overlaps(&h_prime_simplified(&two).unwrap()));
    }

    #[test]
    fn float_and_certified_agree() {
        for fun in FunctionId::ALL {
            let v = 5.0f64;
            let est = eval(fun, &v).unwrap();
            let cert = eval(fun, &x(5)).unwrap();
            assert!((est - cert.mid_f64()).abs() <= 1e-12 * est.abs().max(1.0), "{fun}");
        }
    }
}
