//! Named numeric checks. Each check is a list of claims, every claim decided by
//! disjoint enclosures with precision escalation, summarised in a [`CheckReport`].

use std::fmt;
use std::str::FromStr;

use crate::atlas::{
    a_transform, alpha, bracket_lower, bracket_lower_expanded, bracket_upper_core,
    bracket_upper_expanded, d_expanded, delta, delta_factored, eval, gn_prime, y_threshold_sides,
    FunctionId, ShiftParams,
};
use crate::changepoints::{corollary_gap_check, quotient_report, quotients_strictly_decreasing, ChangePointRecord};
use crate::decimal::{parse_bounded, render};
use crate::dyadic::Dyadic;
use crate::elementary::{e, exp};
use crate::error::{Error, Result};
use crate::factorial::{ln_factorial_at, LnFactorialScan};
use crate::interval::{BoundedReal, Comparison, PrecisionPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Undecided,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Undecided => "UNDECIDED",
        }
    }

    /// `Fail` dominates `Undecided`, which dominates `Pass`.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Undecided, _) | (_, Verdict::Undecided) => Verdict::Undecided,
            _ => Verdict::Pass,
        }
    }

    pub fn all(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        verdicts.into_iter().fold(Verdict::Pass, Verdict::and)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub label: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub check_id: String,
    pub params: Vec<(String, String)>,
    pub verdict: Verdict,
    /// `(label, rendering)`; enclosures render as `[lo, hi]`.
    pub witnesses: Vec<(String, String)>,
    pub claims: Vec<Claim>,
}

impl CheckReport {
    pub fn claim(&self, label: &str) -> Option<Verdict> {
        self.claims.iter().find(|c| c.label == label).map(|c| c.verdict)
    }

    pub fn witness(&self, label: &str) -> Option<&str> {
        self.witnesses
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v.as_str())
    }
}

pub fn enclosure_string(x: &BoundedReal) -> String {
    let (lo, hi) = render(x);
    format!("[{lo}, {hi}]")
}

/// Result of certifying `lhs < rhs`.
#[derive(Clone, Debug)]
pub struct Decision {
    pub verdict: Verdict,
    pub lhs: BoundedReal,
    pub rhs: BoundedReal,
    pub bits: u32,
}

/// Certifies `lhs < rhs`, re-evaluating at each precision step until the enclosures
/// separate. Equal point enclosures certify the strict claim false.
pub fn decide_less(
    policy: &PrecisionPolicy,
    sides: impl Fn(u32) -> Result<(BoundedReal, BoundedReal)>,
) -> Result<Decision> {
    let mut last = None;
    for bits in policy.steps() {
        let (lhs, rhs) = sides(bits)?;
        let verdict = match lhs.compare(&rhs) {
            Comparison::Lt => Some(Verdict::Pass),
            Comparison::Gt => Some(Verdict::Fail),
            Comparison::Undecided if lhs.is_point() && rhs.is_point() => Some(Verdict::Fail),
            Comparison::Undecided => None,
        };
        if let Some(verdict) = verdict {
            return Ok(Decision {
                verdict,
                lhs,
                rhs,
                bits,
            });
        }
        last = Some((lhs, rhs, bits));
    }
    let (lhs, rhs, bits) = last.expect("policy has at least one step");
    Ok(Decision {
        verdict: Verdict::Undecided,
        lhs,
        rhs,
        bits,
    })
}

fn point(x: &Dyadic, bits: u32) -> BoundedReal {
    BoundedReal::point(x.clone(), bits)
}

fn dec(s: &str, bits: u32) -> BoundedReal {
    parse_bounded(s, bits).expect("literal decimal")
}

fn int(v: i64, bits: u32) -> BoundedReal {
    BoundedReal::from_int(v, bits)
}

fn e_half(bits: u32) -> BoundedReal {
    e(bits).scale_pow2(-1)
}

fn e_sq_half(bits: u32) -> BoundedReal {
    e(bits).square().scale_pow2(-1)
}

/// `[max(a.lo, b.lo), max(a.hi, b.hi)]`.
fn interval_max(a: &BoundedReal, b: &BoundedReal) -> BoundedReal {
    let lo = a.lo().max(b.lo()).clone();
    let hi = a.hi().max(b.hi()).clone();
    BoundedReal::from_bounds(lo, hi, a.bits().min(b.bits()))
}

/// `|x|` as an enclosure.
fn interval_abs(x: &BoundedReal) -> BoundedReal {
    if x.lo().signum() >= 0 {
        x.clone()
    } else if x.hi().signum() <= 0 {
        x.neg()
    } else {
        BoundedReal::from_bounds(Dyadic::zero(), x.mag(), x.bits())
    }
}

/// Points `10^(k/per_decade)` strictly inside `(lo, hi)`, plus both ends.
pub fn geometric_grid(lo: &Dyadic, hi: &Dyadic, per_decade: u32) -> Vec<Dyadic> {
    let mut out = vec![lo.clone()];
    let step = 1.0 / per_decade as f64;
    let mut k = (lo.to_f64().log10() / step).floor() as i64;
    loop {
        let v = 10f64.powf(k as f64 * step);
        k += 1;
        let Some(d) = Dyadic::from_f64(v) else { continue };
        if &d >= hi {
            break;
        }
        if &d > out.last().expect("nonempty") {
            out.push(d);
        }
    }
    if hi > out.last().expect("nonempty") {
        out.push(hi.clone());
    }
    out
}

pub const DEFAULT_PER_DECADE: u32 = 64;

/// `2^20`, the upper end of every monotonicity grid.
pub fn grid_cap() -> Dyadic {
    Dyadic::pow2(20)
}

/// Accumulates claims for one report.
struct Audit<'a> {
    policy: &'a PrecisionPolicy,
    report: CheckReport,
}

impl<'a> Audit<'a> {
    fn new(check_id: &str, policy: &'a PrecisionPolicy) -> Self {
        Audit {
            policy,
            report: CheckReport {
                check_id: check_id.to_string(),
                params: Vec::new(),
                verdict: Verdict::Pass,
                witnesses: Vec::new(),
                claims: Vec::new(),
            },
        }
    }

    fn param(&mut self, key: &str, value: impl ToString) {
        self.report.params.push((key.to_string(), value.to_string()));
    }

    fn witness(&mut self, label: &str, x: &BoundedReal) {
        self.note(label, enclosure_string(x));
    }

    fn note(&mut self, label: &str, text: impl ToString) {
        self.report.witnesses.push((label.to_string(), text.to_string()));
    }

    fn record(&mut self, label: &str, verdict: Verdict) -> Verdict {
        self.report.claims.push(Claim {
            label: label.to_string(),
            verdict,
        });
        verdict
    }

    /// `lhs < rhs`, with both sides kept as witnesses.
    fn less(
        &mut self,
        label: &str,
        sides: impl Fn(u32) -> Result<(BoundedReal, BoundedReal)>,
    ) -> Result<Verdict> {
        let d = decide_less(self.policy, sides)?;
        self.witness(&format!("{label}: lhs"), &d.lhs);
        self.witness(&format!("{label}: rhs"), &d.rhs);
        Ok(self.record(label, d.verdict))
    }

    /// `lhs(x) < rhs(x)` at every grid point; only offending points become witnesses.
    fn less_on_grid(
        &mut self,
        label: &str,
        grid: &[Dyadic],
        sides: impl Fn(&BoundedReal) -> Result<(BoundedReal, BoundedReal)>,
    ) -> Result<Verdict> {
        let mut verdict = Verdict::Pass;
        for x in grid {
            let d = decide_less(self.policy, |bits| sides(&point(x, bits)))?;
            if d.verdict != Verdict::Pass {
                self.note(&format!("{label}: at x"), x.to_f64());
                self.witness(&format!("{label}: lhs"), &d.lhs);
                self.witness(&format!("{label}: rhs"), &d.rhs);
                verdict = verdict.and(d.verdict);
                if d.verdict == Verdict::Fail {
                    break;
                }
            }
        }
        self.note(&format!("{label}: grid points"), grid.len());
        Ok(self.record(label, verdict))
    }

    /// `f(x_{k+1}) < f(x_k)` for consecutive grid points.
    fn decreasing_on_grid(
        &mut self,
        label: &str,
        grid: &[Dyadic],
        f: impl Fn(&BoundedReal) -> Result<BoundedReal>,
    ) -> Result<Verdict> {
        self.monotone_on_grid(label, grid, f, true)
    }

    fn increasing_on_grid(
        &mut self,
        label: &str,
        grid: &[Dyadic],
        f: impl Fn(&BoundedReal) -> Result<BoundedReal>,
    ) -> Result<Verdict> {
        self.monotone_on_grid(label, grid, f, false)
    }

    fn monotone_on_grid(
        &mut self,
        label: &str,
        grid: &[Dyadic],
        f: impl Fn(&BoundedReal) -> Result<BoundedReal>,
        decreasing: bool,
    ) -> Result<Verdict> {
        let bits = self.policy.initial_bits();
        let values = grid
            .iter()
            .map(|x| f(&point(x, bits)))
            .collect::<Result<Vec<_>>>()?;
        let mut verdict = Verdict::Pass;
        for k in 0..grid.len().saturating_sub(1) {
            let (a, b) = if decreasing { (k + 1, k) } else { (k, k + 1) };
            if values[a].compare(&values[b]) == Comparison::Lt {
                continue;
            }
            let d = decide_less(self.policy, |bits| {
                Ok((f(&point(&grid[a], bits))?, f(&point(&grid[b], bits))?))
            })?;
            if d.verdict != Verdict::Pass {
                self.note(&format!("{label}: between"), format!("{} and {}", grid[k].to_f64(), grid[k + 1].to_f64()));
                verdict = verdict.and(d.verdict);
            }
        }
        self.note(&format!("{label}: grid points"), grid.len());
        Ok(self.record(label, verdict))
    }

    /// Two computations of one quantity must overlap on the grid.
    fn agree_on_grid(
        &mut self,
        label: &str,
        grid: &[Dyadic],
        pair: impl Fn(&BoundedReal) -> Result<(BoundedReal, BoundedReal)>,
    ) -> Result<Verdict> {
        let bits = self.policy.initial_bits();
        let mut verdict = Verdict::Pass;
        for x in grid {
            let (a, b) = pair(&point(x, bits))?;
            if !a.overlaps(&b) {
                self.note(&format!("{label}: disjoint at x"), x.to_f64());
                self.witness(&format!("{label}: first"), &a);
                self.witness(&format!("{label}: second"), &b);
                verdict = Verdict::Fail;
                break;
            }
        }
        Ok(self.record(label, verdict))
    }

    fn finish(mut self) -> CheckReport {
        self.report.verdict = Verdict::all(self.report.claims.iter().map(|c| c.verdict));
        self.report
    }
}

struct RobbinsPart {
    first: [BoundedReal; 3],
    lower: Verdict,
    upper: Verdict,
    offenders: Vec<u64>,
}

/// `[scriptL(n), e (n!)^(1/n) / n, scriptR(n)]` from `ln n!`.
fn robbins_sides(n: u64, lf: &BoundedReal) -> Result<[BoundedReal; 3]> {
    let bits = lf.bits();
    let x = BoundedReal::from_u64(n, bits);
    let middle = exp(&lf.div(&x)?.add(&BoundedReal::one(bits)))?.div(&x)?;
    Ok([eval(FunctionId::ScriptL, &x)?, middle, eval(FunctionId::ScriptR, &x)?])
}

fn robbins_range(n_lo: u64, n_hi: u64, policy: &PrecisionPolicy) -> Result<RobbinsPart> {
    let mut part = RobbinsPart {
        first: [BoundedReal::zero(crate::interval::MIN_BITS), BoundedReal::zero(crate::interval::MIN_BITS), BoundedReal::zero(crate::interval::MIN_BITS)],
        lower: Verdict::Pass,
        upper: Verdict::Pass,
        offenders: Vec::new(),
    };
    let scan = LnFactorialScan::new(n_lo, n_hi, policy.initial_bits())?;
    for (n, lf) in scan.take((n_hi - n_lo + 1) as usize) {
        let s = robbins_sides(n, &lf?)?;
        for (k, slot) in [(0usize, &mut part.lower), (1, &mut part.upper)] {
            if s[k].compare(&s[k + 1]) == Comparison::Lt {
                continue;
            }
            let d = decide_less(policy, |bits| {
                let (lf, _) = ln_factorial_at(n, bits)?;
                let s = robbins_sides(n, &lf)?;
                Ok((s[k].clone(), s[k + 1].clone()))
            })?;
            if d.verdict != Verdict::Pass {
                *slot = slot.and(d.verdict);
                part.offenders.push(n);
            }
        }
        if n == n_lo {
            part.first = s;
        }
    }
    Ok(part)
}

/// `L(n) P(2n) < e (n!)^(1/n) / n < R(n) P(2n)` for every `n` in range.
pub fn check_robbins(n_lo: u64, n_hi: u64, policy: &PrecisionPolicy) -> Result<CheckReport> {
    let mut audit = Audit::new("robbins", policy);
    audit.param("n_lo", n_lo);
    audit.param("n_hi", n_hi);
    if n_lo == 0 || n_lo > n_hi {
        return Err(Error::Domain(format!("robbins range [{n_lo}, {n_hi}] is empty or starts at 0")));
    }
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()) as u64;
    let span = n_hi - n_lo + 1;
    let chunk = span.div_ceil(threads).max(256);
    let ranges: Vec<(u64, u64)> = (0..span.div_ceil(chunk))
        .map(|k| (n_lo + k * chunk, (n_lo + (k + 1) * chunk - 1).min(n_hi)))
        .collect();
    let results = std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .iter()
            .map(|&(a, b)| scope.spawn(move || robbins_range(a, b, policy)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Inconsistent("robbins worker panicked".into()))))
            .collect::<Result<Vec<_>>>()
    })?;
    let (mut lower, mut upper) = (Verdict::Pass, Verdict::Pass);
    for (k, part) in results.into_iter().enumerate() {
        if k == 0 {
            let [l, m, r] = &part.first;
            audit.witness("scriptL(n_lo)", l);
            audit.witness("e (n_lo!)^(1/n_lo) / n_lo", m);
            audit.witness("scriptR(n_lo)", r);
        }
        lower = lower.and(part.lower);
        upper = upper.and(part.upper);
        for n in part.offenders {
            audit.note("sandwich not certified at n", n);
        }
    }
    audit.record("scriptL(n) < e (n!)^(1/n) / n", lower);
    audit.record("e (n!)^(1/n) / n < scriptR(n)", upper);
    Ok(audit.finish())
}

/// Lemma grids: the ordering grid `{1/2, 1, 2, ..., 2^20}`, the decrease grid on
/// `[e/2, 2^20]`, and the point used for limits.
#[derive(Clone, Debug)]
pub struct Lemma1Grid {
    pub ordering: Vec<Dyadic>,
    pub decreasing: Vec<Dyadic>,
    pub limit_x: Dyadic,
}

impl Default for Lemma1Grid {
    fn default() -> Self {
        Lemma1Grid {
            ordering: (-1..=20).map(Dyadic::pow2).collect(),
            decreasing: half_e_grid(DEFAULT_PER_DECADE),
            limit_x: Dyadic::pow2(30),
        }
    }
}

/// Geometric grid on `[e/2, 2^20]`, starting at an upper bound of `e/2`.
pub fn half_e_grid(per_decade: u32) -> Vec<Dyadic> {
    geometric_grid(e_half(128).hi(), &grid_cap(), per_decade)
}

fn gap_lp(fun: FunctionId, x: &BoundedReal) -> Result<BoundedReal> {
    Ok(a_transform(fun, x)?.sub(&a_transform(FunctionId::SmallP, x)?))
}

fn tolerance(bits: u32) -> BoundedReal {
    dec("0.001", bits)
}

pub fn check_lemma1(grid: &Lemma1Grid, policy: &PrecisionPolicy) -> Result<CheckReport> {
    let mut audit = Audit::new("lemma1", policy);
    audit.param("ordering points", grid.ordering.len());
    audit.param("decrease points", grid.decreasing.len());
    audit.param("limit x", grid.limit_x.to_f64());

    audit.less_on_grid("0 < a_p", &grid.ordering, |x| {
        Ok((BoundedReal::zero(x.bits()), a_transform(FunctionId::SmallP, x)?))
    })?;
    audit.less_on_grid("a_p < a_scriptL", &grid.ordering, |x| {
        Ok((a_transform(FunctionId::SmallP, x)?, a_transform(FunctionId::ScriptL, x)?))
    })?;
    audit.less_on_grid("a_scriptL < a_scriptR", &grid.ordering, |x| {
        Ok((a_transform(FunctionId::ScriptL, x)?, a_transform(FunctionId::ScriptR, x)?))
    })?;
    audit.decreasing_on_grid("a_scriptL - a_p decreasing", &grid.decreasing, |x| {
        gap_lp(FunctionId::ScriptL, x)
    })?;
    audit.decreasing_on_grid("a_scriptR - a_p decreasing", &grid.decreasing, |x| {
        gap_lp(FunctionId::ScriptR, x)
    })?;
    audit.less_on_grid("ln(2x) QL(x) < a_scriptL(x)", &grid.decreasing, |x| {
        Ok((bracket_lower(x)?, a_transform(FunctionId::ScriptL, x)?))
    })?;
    audit.less_on_grid("a_scriptR(x) < ln(2x) QR(x)", &grid.decreasing, |x| {
        Ok((a_transform(FunctionId::ScriptR, x)?, bracket_upper_core(x)?))
    })?;

    let lx = grid.limit_x.clone();
    audit.less("|a_scriptL - a_p - alpha| < 0.001", |bits| {
        let x = point(&lx, bits);
        let dev = gap_lp(FunctionId::ScriptL, &x)?.sub(&alpha(&x));
        Ok((interval_abs(&dev), tolerance(bits)))
    })?;
    audit.less("|a_scriptR - a_p - alpha| < 0.001", |bits| {
        let x = point(&lx, bits);
        let dev = gap_lp(FunctionId::ScriptR, &x)?.sub(&alpha(&x));
        Ok((interval_abs(&dev), tolerance(bits)))
    })?;
    audit.less("|delta| < 0.001", |bits| {
        Ok((interval_abs(&delta(&point(&lx, bits))?), tolerance(bits)))
    })?;
    Ok(audit.finish())
}

/// Distances to the limits of `QL`, `QR` and `D` at one point, tolerance `10^-3`.
/// `QL` and `QR` approach `1/2` like `1/ln(2x)`, far slower than the tolerance allows
/// at moderate `x`; this check is not part of any suite.
pub fn check_bracket_limits(x: &Dyadic, policy: &PrecisionPolicy) -> Result<CheckReport> {
    let mut audit = Audit::new("bracket-limits", policy);
    audit.param("x", x.to_f64());
    for (label, fun) in [("|QL - 1/2| < 0.001", FunctionId::QL), ("|QR - 1/2| < 0.001", FunctionId::QR)] {
        audit.less(label, |bits| {
            let dev = eval(fun, &point(x, bits))?.sub(&BoundedReal::from_ratio(1, 2, bits));
            Ok((interval_abs(&dev), tolerance(bits)))
        })?;
    }
    audit.less("|D - (1 - alpha)| < 0.001", |bits| {
        let xb = point(x, bits);
        let dev = eval(FunctionId::D, &xb)?.sub(&BoundedReal::one(bits).sub(&alpha(&xb)));
        Ok((interval_abs(&dev), tolerance(bits)))
    })?;
    Ok(audit.finish())
}

/// Thresholds for `D`, the monotonicity behind them and the two closed forms.
pub fn check_cor1_thresholds(policy: &PrecisionPolicy) -> Result<CheckReport> {
    let mut audit = Audit::new("cor1", policy);
    let d_at = |s: &'static str| move |bits: u32| eval(FunctionId::D, &dec(s, bits));

    audit.less("1 < D(3.92465)", |bits| Ok((int(1, bits), d_at("3.92465")(bits)?)))?;
    audit.less("D(3.92466) < 1", |bits| Ok((d_at("3.92466")(bits)?, int(1, bits))))?;
    audit.less("e^2/2 < 3.92466", |bits| Ok((e_sq_half(bits), dec("3.92466", bits))))?;
    audit.note(
        "reading of '3.92466 > e^2/2'",
        "holds: 3.92466 lies where D is decreasing",
    );
    for s in ["4", "10", "100", "1000000"] {
        audit.less(&format!("D({s}) < 1"), |bits| Ok((d_at(s)(bits)?, int(1, bits))))?;
    }

    let cap = grid_cap();
    let qgrid = half_e_grid(DEFAULT_PER_DECADE);
    let dgrid = geometric_grid(e_sq_half(128).hi(), &cap, DEFAULT_PER_DECADE);
    audit.decreasing_on_grid("QL decreasing", &qgrid, |x| eval(FunctionId::QL, x))?;
    audit.decreasing_on_grid("QR decreasing", &qgrid, |x| eval(FunctionId::QR, x))?;
    audit.decreasing_on_grid("D decreasing", &dgrid, |x| eval(FunctionId::D, x))?;
    let below_one = geometric_grid(dec("3.92466", 128).hi(), &cap, DEFAULT_PER_DECADE);
    audit.less_on_grid("D(x) < 1 for x >= 3.92466", &below_one, |x| {
        Ok((eval(FunctionId::D, x)?, int(1, x.bits())))
    })?;

    audit.agree_on_grid("ln(2x) QL(x) closed form", &qgrid, |x| {
        Ok((bracket_lower(x)?, bracket_lower_expanded(x)?))
    })?;
    audit.agree_on_grid("ln(2x) QR(x) = 1 + F(x)", &qgrid, |x| {
        Ok((bracket_upper_core(x)?, bracket_upper_expanded(x)?))
    })?;
    audit.agree_on_grid("D closed form", &qgrid, |x| Ok((eval(FunctionId::D, x)?, d_expanded(x)?)))?;

    audit.less("0.57236 < alpha", |bits| Ok((dec("0.57236", bits), alpha(&int(1, bits)))))?;
    audit.less("alpha < 0.57237", |bits| Ok((alpha(&int(1, bits)), dec("0.57237", bits))))?;
    let bits = policy.initial_bits();
    let one_minus_alpha = int(1, bits).sub(&alpha(&int(1, bits)));
    audit.witness("1 - alpha", &one_minus_alpha);
    let reading = one_minus_alpha.compare(&dec("0.57236", bits)) == Comparison::Gt
        && one_minus_alpha.compare(&dec("0.57237", bits)) == Comparison::Lt;
    audit.note("0.57236 < 1 - alpha < 0.57237", reading);
    audit.witness("limit of D(x) + 1", &int(2, bits).sub(&alpha(&int(1, bits))));

    audit.less("|D(2^30) - (1 - alpha)| < 0.001", |bits| {
        let x = BoundedReal::point(Dyadic::pow2(30), bits);
        let dev = eval(FunctionId::D, &x)?.sub(&int(1, bits).sub(&alpha(&x)));
        Ok((interval_abs(&dev), tolerance(bits)))
    })?;
    Ok(audit.finish())
}

pub fn check_gn_and_f(policy: &PrecisionPolicy) -> Result<CheckReport> {
    let mut audit = Audit::new("gn", policy);
    audit.less("GN'(1.67834) < 0", |bits| Ok((gn_prime(&dec("1.67834", bits))?, int(0, bits))))?;
    audit.less("0 < GN'(1.67845)", |bits| Ok((int(0, bits), gn_prime(&dec("1.67845", bits))?)))?;
    audit.less("0 < GN(1.67845)", |bits| {
        Ok((int(0, bits), eval(FunctionId::GN, &dec("1.67845", bits))?))
    })?;
    audit.less("F(3) < F(4)", |bits| {
        Ok((eval(FunctionId::F, &int(3, bits))?, eval(FunctionId::F, &int(4, bits))?))
    })?;
    let bits = policy.initial_bits();
    audit.witness("e^1.67845 / 2", &exp(&dec("1.67845", bits))?.scale_pow2(-1));
    let start = dec("2.6785", 128);
    let grid = geometric_grid(start.hi(), &grid_cap(), DEFAULT_PER_DECADE);
    audit.increasing_on_grid("F increasing", &grid, |x| eval(FunctionId::F, x))?;
    Ok(audit.finish())
}

pub fn check_y_threshold(policy: &PrecisionPolicy) -> Result<CheckReport> {
    let mut audit = Audit::new("threshold", policy);
    audit.param("a", "ln 3");
    let sides = |s: &'static str| {
        move |bits: u32| {
            let y = dec(s, bits);
            y_threshold_sides(&ShiftParams::ln3(&y)?, &y)
        }
    };
    audit.less("inequality fails at y = 6.06520", |bits| {
        let (l, r) = sides("6.06520")(bits)?;
        Ok((r, l))
    })?;
    audit.less("inequality holds at y = 6.06521", sides("6.06521"))?;
    let half_exp = |bits: u32| Ok::<_, Error>(exp(&dec("6.06521", bits))?.scale_pow2(-1));
    audit.less("215.30654 < e^6.06521 / 2", |bits| Ok((dec("215.30654", bits), half_exp(bits)?)))?;
    audit.less("e^6.06521 / 2 < 215.30655", |bits| Ok((half_exp(bits)?, dec("215.30655", bits))))?;
    Ok(audit.finish())
}

/// `F(3x) < ln(2x) QL(x)` on the grid, and for change points `n_i >= 216` with a
/// successor, `F(3 n_i) < ln(2 n_i) QL(n_i) < F(n_{i+1} + 1)`.
pub fn check_f3x(grid: &[Dyadic], records: &[ChangePointRecord], policy: &PrecisionPolicy) -> Result<CheckReport> {
    let mut audit = Audit::new("f3x", policy);
    audit.param("grid points", grid.len());
    audit.less_on_grid("F(3x) < ln(2x) QL(x)", grid, |x| {
        Ok((eval(FunctionId::F, &x.mul_int(3))?, bracket_lower(x)?))
    })?;
    for w in records.windows(2) {
        let (n, next) = (w[0].n_i, w[1].n_i);
        if n < 216 {
            continue;
        }
        audit.less(&format!("F(3 n_i) < ln(2 n_i) QL(n_i), n_i = {n}"), |bits| {
            let x = BoundedReal::from_u64(n, bits);
            Ok((eval(FunctionId::F, &x.mul_int(3))?, bracket_lower(&x)?))
        })?;
        audit.less(&format!("ln(2 n_i) QL(n_i) < F(n_(i+1) + 1), n_i = {n}"), |bits| {
            let x = BoundedReal::from_u64(n, bits);
            Ok((bracket_lower(&x)?, eval(FunctionId::F, &BoundedReal::from_u64(next + 1, bits))?))
        })?;
    }
    Ok(audit.finish())
}

/// Default `check_f3x` grid: `[215.30655, 2^20]` plus `216` and `10^6`.
pub fn f3x_grid() -> Vec<Dyadic> {
    let start = dec("215.30655", 128);
    let mut g = geometric_grid(start.hi(), &grid_cap(), DEFAULT_PER_DECADE);
    g.push(Dyadic::from_int(216));
    g.push(Dyadic::from_int(1_000_000));
    g.sort();
    g.dedup();
    g
}

/// `1 - d(i) < a_scriptL(n_{i+1}) - a_scriptL(n_i) < 1 + d(i)` per consecutive pair,
/// with the spacing data: `3 n_i <= n_{i+1}` and the quotients `n_{i+1}/n_i`.
pub fn check_eqffff(records: &[ChangePointRecord], policy: &PrecisionPolicy) -> Result<CheckReport> {
    let mut audit = Audit::new("ffff", policy);
    audit.param("records", records.len());
    for w in records.windows(2) {
        let (a, b) = (w[0].n_i, w[1].n_i);
        let parts = |bits: u32| -> Result<(BoundedReal, BoundedReal)> {
            let xa = BoundedReal::from_u64(a, bits);
            let xb = BoundedReal::from_u64(b, bits);
            let diff = a_transform(FunctionId::ScriptL, &xb)?.sub(&a_transform(FunctionId::ScriptL, &xa)?);
            Ok((diff, interval_max(&delta(&xa)?, &delta(&xb)?)))
        };
        let tag = format!("({a}, {b})");
        let (diff, d) = parts(policy.initial_bits())?;
        audit.witness(&format!("a_scriptL difference {tag}"), &diff);
        audit.witness(&format!("d(i) {tag}"), &d);
        let lower = decide_less(policy, |bits| {
            let (diff, d) = parts(bits)?;
            Ok((int(1, bits).sub(&d), diff))
        })?;
        audit.record(&format!("1 - d(i) < difference {tag}"), lower.verdict);
        let upper = decide_less(policy, |bits| {
            let (diff, d) = parts(bits)?;
            Ok((diff, int(1, bits).add(&d)))
        })?;
        audit.record(&format!("difference < 1 + d(i) {tag}"), upper.verdict);
    }
    for (w, ok) in records.windows(2).zip(corollary_gap_check(records)) {
        let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        audit.record(&format!("3 n_i <= n_(i+1) ({}, {})", w[0].n_i, w[1].n_i), verdict);
    }
    let rows = quotient_report(records);
    for row in &rows {
        audit.witness(&format!("n_{}/n_{}", row.index + 1, row.index), &row.quotient);
        audit.witness(&format!("n_{}/n_{} - e^2", row.index + 1, row.index), &row.minus_e2);
    }
    if rows.len() >= 2 {
        let note = match quotients_strictly_decreasing(&rows) {
            Some(true) => "strictly decreasing",
            Some(false) => "not strictly decreasing",
            None => "undecided",
        };
        audit.note("quotients", note);
    }
    Ok(audit.finish())
}

/// Cited inequalities the bracket derivation rests on, on `[e/2, 2^20]`.
pub fn check_external_facts(grid: &[Dyadic], policy: &PrecisionPolicy) -> Result<CheckReport> {
    let mut audit = Audit::new("external", policy);
    audit.param("grid points", grid.len());
    audit.less_on_grid("R(x) < 1 + 1/x", grid, |x| {
        Ok((eval(FunctionId::R, x)?, int(1, x.bits()).add(&x.recip()?)))
    })?;
    audit.less_on_grid("P(2x) < 2x/(2x - ln 2x)", grid, |x| {
        let two_x = x.mul_int(2);
        let bound = two_x.div(&two_x.sub(&crate::elementary::ln(&two_x)?))?;
        Ok((eval(FunctionId::SmallP, x)?, bound))
    })?;
    audit.less_on_grid("1 + ln(2x)/(2x) < P(2x)", grid, |x| {
        let two_x = x.mul_int(2);
        let bound = int(1, x.bits()).add(&crate::elementary::ln(&two_x)?.div(&two_x)?);
        Ok((bound, eval(FunctionId::SmallP, x)?))
    })?;
    audit.less_on_grid("1 + alpha/x < L(x)", grid, |x| {
        Ok((int(1, x.bits()).add(&alpha(x).div(x)?), eval(FunctionId::L, x)?))
    })?;
    let e_start = e(128);
    let pgrid: Vec<Dyadic> = geometric_grid(e_start.hi(), &grid_cap(), DEFAULT_PER_DECADE);
    audit.decreasing_on_grid("P decreasing on [e, 2^20]", &pgrid, |x| eval(FunctionId::P, x))?;
    audit.agree_on_grid("delta two ways", grid, |x| Ok((delta(x)?, delta_factored(x)?)))?;
    Ok(audit.finish())
}

/// `a(n) = (T_{n+1} - T_n - 1) n`, reported as data.
pub fn check_sn(n_lo: u64, n_hi: u64, policy: &PrecisionPolicy) -> Result<CheckReport> {
    let mut audit = Audit::new("sn", policy);
    audit.param("n_lo", n_lo);
    audit.param("n_hi", n_hi);
    if n_lo == 0 || n_lo > n_hi {
        return Ok(audit.finish());
    }
    let bits = policy.initial_bits();
    let t_of = |n: u64, lf: &BoundedReal| -> Result<BoundedReal> {
        let x = BoundedReal::from_u64(n, bits);
        exp(&lf.div(&x)?.add(&BoundedReal::one(bits)))
    };
    let half = BoundedReal::from_ratio(1, 2, bits);
    let (mut held, mut failed, mut undecided) = (0u64, 0u64, 0u64);
    let mut prev: Option<BoundedReal> = None;
    let mut last_a = None;
    for (n, lf) in LnFactorialScan::new(n_lo, n_hi + 1, bits)?.take((n_hi - n_lo + 2) as usize) {
        let t = t_of(n, &lf?)?;
        if let Some(tp) = prev.take() {
            let m = n - 1;
            let a = t.sub(&tp).sub(&BoundedReal::one(bits)).mul(&BoundedReal::from_u64(m, bits));
            match a.compare(&half) {
                Comparison::Lt => held += 1,
                Comparison::Gt => failed += 1,
                Comparison::Undecided => undecided += 1,
            }
            if m == n_lo {
                audit.witness(&format!("a({m})"), &a);
            }
            last_a = Some((m, a));
        }
        prev = Some(t);
    }
    if let Some((m, a)) = last_a {
        audit.witness(&format!("a({m})"), &a);
        audit.witness(&format!("|a({m}) - 1/2|"), &interval_abs(&a.sub(&half)));
    }
    audit.note("S_n < 1 + 1/(2n) held", held);
    audit.note("S_n < 1 + 1/(2n) failed", failed);
    audit.note("S_n < 1 + 1/(2n) undecided", undecided);
    Ok(audit.finish())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    Robbins,
    Lemma1,
    Cor1,
    Gn,
    Threshold,
    F3x,
    Ffff,
    External,
    Sn,
}

impl Suite {
    pub const NAMES: [&'static str; 10] = [
        "all", "robbins", "lemma1", "cor1", "gn", "threshold", "f3x", "ffff", "external", "sn",
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Robbins => "robbins",
            Suite::Lemma1 => "lemma1",
            Suite::Cor1 => "cor1",
            Suite::Gn => "gn",
            Suite::Threshold => "threshold",
            Suite::F3x => "f3x",
            Suite::Ffff => "ffff",
            Suite::External => "external",
            Suite::Sn => "sn",
        }
    }

    /// Whether the suite reads change-point records.
    pub fn needs_records(self) -> bool {
        matches!(self, Suite::All | Suite::F3x | Suite::Ffff)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "robbins" => Suite::Robbins,
            "lemma1" => Suite::Lemma1,
            "cor1" => Suite::Cor1,
            "gn" => Suite::Gn,
            "threshold" => Suite::Threshold,
            "f3x" => Suite::F3x,
            "ffff" => Suite::Ffff,
            "external" => Suite::External,
            "sn" => Suite::Sn,
            other => return Err(Error::Parse(format!("unknown suite {other:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub robbins: (u64, u64),
    pub sn: (u64, u64),
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            robbins: (1, 10_000),
            sn: (1, 10_000),
        }
    }
}

pub fn run_suite(
    suite: Suite,
    records: &[ChangePointRecord],
    config: &SuiteConfig,
    policy: &PrecisionPolicy,
) -> Result<Vec<CheckReport>> {
    let one = |s: Suite| -> Result<CheckReport> {
        match s {
            Suite::Robbins => check_robbins(config.robbins.0, config.robbins.1, policy),
            Suite::Lemma1 => check_lemma1(&Lemma1Grid::default(), policy),
            Suite::Cor1 => check_cor1_thresholds(policy),
            Suite::Gn => check_gn_and_f(policy),
            Suite::Threshold => check_y_threshold(policy),
            Suite::F3x => check_f3x(&f3x_grid(), records, policy),
            Suite::Ffff => check_eqffff(records, policy),
            Suite::External => check_external_facts(&half_e_grid(DEFAULT_PER_DECADE), policy),
            Suite::Sn => check_sn(config.sn.0, config.sn.1, policy),
            Suite::All => unreachable!(),
        }
    };
    if suite == Suite::All {
        let parts = [
            Suite::Robbins,
            Suite::Lemma1,
            Suite::Cor1,
            Suite::Gn,
            Suite::Threshold,
            Suite::F3x,
            Suite::Ffff,
            Suite::External,
            Suite::Sn,
        ];
        // independent and side-effect free
        std::thread::scope(|scope| {
            let handles: Vec<_> = parts.iter().map(|&s| scope.spawn(move || one(s))).collect();
            handles
                .into_iter()
                .map(|h| h.join().unwrap_or_else(|_| Err(Error::Inconsistent("check panicked".into()))))
                .collect()
        })
    } else {
        Ok(vec![one(suite)?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn verdict_algebra() {
        assert_eq!(Verdict::all([]), Verdict::Pass);
        assert_eq!(Verdict::Pass.and(Verdict::Undecided), Verdict::Undecided);
        assert_eq!(Verdict::Undecided.and(Verdict::Fail), Verdict::Fail);
        assert_eq!("cor1".parse::<Suite>().unwrap(), Suite::Cor1);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn equal_points_fail_strict_claims() {
        let d = decide_less(&policy(), |b| Ok((int(2, b), int(2, b)))).unwrap();
        assert_eq!(d.verdict, Verdict::Fail);
        let p = PrecisionPolicy::new(64, 128, 2).unwrap();
        let d = decide_less(&p, |b| {
            let third = BoundedReal::from_ratio(1, 3, b);
            Ok((third.clone(), third))
        })
        .unwrap();
        assert_eq!((d.verdict, d.bits), (Verdict::Undecided, 128));
    }

    #[test]
    fn grid_shape() {
        let g = geometric_grid(&Dyadic::from_int(1), &Dyadic::from_int(100), 64);
        assert_eq!(g.len(), 129);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g[0], Dyadic::from_int(1));
        assert_eq!(g[128], Dyadic::from_int(100));
    }

    #[test]
    fn robbins_small_range() {
        let r = check_robbins(1, 100, &policy()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        assert!(check_robbins(5, 4, &policy()).is_err());
    }

    #[test]
    fn thresholds() {
        let r = check_y_threshold(&policy()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        let g = check_gn_and_f(&policy()).unwrap();
        assert_eq!(g.verdict, Verdict::Pass, "{g:?}");
    }

    #[test]
    fn sn_data() {
        let r = check_sn(1, 50, &policy()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let a1 = r.witness("a(1)").unwrap();
        assert!(a1.starts_with("[0.12594919970007158"), "{a1}");
        assert_eq!(r.witness("S_n < 1 + 1/(2n) held"), Some("50"));
        let empty = check_sn(3, 2, &policy()).unwrap();
        assert!(empty.claims.is_empty() && empty.witnesses.is_empty());
    }

    #[test]
    fn ffff_single_record_is_empty() {
        let r = check_eqffff(&[ChangePointRecord::bare(1, 3, 128)], &policy()).unwrap();
        assert!(r.claims.is_empty());
        assert_eq!(r.verdict, Verdict::Pass);
    }
}
