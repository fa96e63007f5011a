//! Searching for partial denominators with factorial reduction, and the structured families
//! that produce them.

use crate::gcd::{gcd_series, lambda_estimate, FrThresholds, FrVerdict, LambdaEstimate};
use crate::irrationality::{delta_formula, DeltaValue};
use crate::pcf::{alpha, convergents, Pcf, PcfError, PcfKind};
use crate::poly::{equal_degree_split, rational_roots, IntPoly, LcmCounter, PolyError, RatPoly};
use crate::transforms::{integerize, RatFn, RationalCf, TransformError};
use rayon::prelude::*;
use rug::{Integer, Rational};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Fraction of the table used for the λ window.
const LAMBDA_WINDOW: f64 = 1.0 / 3.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FamilyError {
    #[error("m = {0} is not allowed (m = 0 or m^2 = |B|)")]
    InvalidM(Rational),
    #[error("b = {0} does not split into two rational factors of equal degree")]
    NotSplittable(IntPoly),
    #[error("r and s must have equal degree")]
    DegreeMismatch,
    #[error("PCF for k = {k} does not show factorial reduction ({verdict:?})")]
    NotFr { k: i64, verdict: FrVerdict },
    #[error("empty search box")]
    EmptyBox,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Pcf(#[from] PcfError),
    #[error("{0}")]
    Analysis(String),
}

/// Inclusive coefficient ranges per degree slot (constant term first), plus FR-test settings.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SearchBox {
    pub ranges: Vec<(i64, i64)>,
    pub depth: usize,
    pub shallow_depth: usize,
    pub thresholds: FrThresholds,
    pub shallow_thresholds: FrThresholds,
}

impl SearchBox {
    pub fn new(ranges: Vec<(i64, i64)>) -> SearchBox {
        SearchBox {
            ranges,
            depth: 1000,
            shallow_depth: 200,
            thresholds: FrThresholds::default(),
            shallow_thresholds: FrThresholds::shallow(),
        }
    }

    /// Every coefficient of a degree-`deg` polynomial in lo..=hi.
    pub fn uniform(deg: usize, lo: i64, hi: i64) -> SearchBox {
        SearchBox::new(vec![(lo, hi); deg + 1])
    }

    pub fn size(&self) -> u64 {
        self.ranges.iter().map(|&(lo, hi)| (hi - lo + 1).max(0) as u64).product()
    }

    /// All coefficient tuples in lexicographic order, skipping the zero polynomial.
    pub fn candidates(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &(lo, hi) in &self.ranges {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (lo..=hi).map(move |c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        out.retain(|v| v.iter().any(|&c| c != 0));
        out
    }

    /// Parses "lo..hi,lo..hi,…" (constant term first); a bare integer is a one-point range.
    pub fn parse_ranges(s: &str) -> Result<Vec<(i64, i64)>, String> {
        s.split(',')
            .map(|part| {
                let part = part.trim();
                let (lo, hi) = match part.split_once("..") {
                    Some((lo, hi)) => (lo.trim(), hi.trim().trim_start_matches('=')),
                    None => (part, part),
                };
                let lo: i64 = lo.parse().map_err(|_| format!("bad range bound {lo:?} in {part:?}"))?;
                let hi: i64 = hi.parse().map_err(|_| format!("bad range bound {hi:?} in {part:?}"))?;
                if lo > hi {
                    return Err(format!("empty range {part:?}"));
                }
                Ok((lo, hi))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub enum FamilyKind {
    Conjecture13,
    Conjecture14Linear,
    Conjecture14Symmetric,
    PythagoreanLinear,
    AdHoc,
}

/// A family template with its parameters (B, m, k, x1, x2, x, y, z as applicable).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyDescriptor {
    pub kind: FamilyKind,
    pub params: BTreeMap<&'static str, Rational>,
}

impl FamilyDescriptor {
    fn new(kind: FamilyKind, params: &[(&'static str, Rational)]) -> FamilyDescriptor {
        FamilyDescriptor { kind, params: params.iter().cloned().collect() }
    }

    pub fn param(&self, name: &str) -> Option<&Rational> {
        self.params.get(name)
    }

    /// The family's a for shift parameter k. Conjecture13 and AdHoc members carry no free k.
    pub fn member(&self, k: &Rational) -> Option<RatPoly> {
        match self.kind {
            FamilyKind::Conjecture14Linear | FamilyKind::PythagoreanLinear => {
                let lead = self.param("A")?.clone();
                Some(RatPoly::new([k.clone(), lead]))
            }
            FamilyKind::Conjecture14Symmetric => {
                let (x1, x2) = (self.param("x1")?, self.param("x2")?);
                let c0 = Rational::from(1) - x1 - x2;
                Some(RatPoly::new([c0, Rational::from(2)]).scale(k))
            }
            FamilyKind::Conjecture13 | FamilyKind::AdHoc => None,
        }
    }
}

impl fmt::Display for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.kind)?;
        if !self.params.is_empty() {
            let parts: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", parts.join(", "))?;
        }
        Ok(())
    }
}

impl serde::Serialize for FamilyDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let params: BTreeMap<&str, String> = self.params.iter().map(|(k, v)| (*k, v.to_string())).collect();
        let mut st = s.serialize_struct("FamilyDescriptor", 2)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("params", &params)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SearchHit {
    pub a: IntPoly,
    pub lambda: f64,
    pub verdict: FrVerdict,
    pub family: Option<FamilyDescriptor>,
}

/// GCD-based FR detection at one depth. Degenerate or too-short tables count as no FR.
pub fn fr_probe(pcf: &Pcf, depth: usize, thresholds: &FrThresholds) -> Option<LambdaEstimate> {
    let table = convergents(pcf, depth).ok()?;
    let series = gcd_series(&table).ok()?;
    lambda_estimate(&series, pcf.deg_a(), LAMBDA_WINDOW, thresholds).ok()
}

/// Two-stage FR test: a loose shallow pass, then confirmation at full depth.
pub fn has_fr(pcf: &Pcf, sbox: &SearchBox) -> Option<LambdaEstimate> {
    let shallow = fr_probe(pcf, sbox.shallow_depth, &sbox.shallow_thresholds)?;
    if shallow.fr_verdict == FrVerdict::NoFR {
        return None;
    }
    confirm_fr(pcf, sbox.depth, &sbox.thresholds).filter(|e| e.fr_verdict == FrVerdict::FR)
}

/// Inconclusive probes are retried at doubled depth up to this multiple of the first depth.
pub const MAX_ESCALATION: usize = 4;

/// FR probe at `depth`, doubled while inconclusive up to `MAX_ESCALATION`·depth.
pub fn confirm_fr(pcf: &Pcf, depth: usize, thresholds: &FrThresholds) -> Option<LambdaEstimate> {
    let mut d = depth;
    loop {
        let est = fr_probe(pcf, d, thresholds)?;
        if est.fr_verdict != FrVerdict::Inconclusive || 2 * d > MAX_ESCALATION * depth {
            return Some(est);
        }
        d *= 2;
    }
}

/// Exhaustive search for a in the box such that PCF[a, b] has FR, sorted by coefficient tuple.
pub fn search_a_for_fr(b: &IntPoly, sbox: &SearchBox) -> Result<Vec<SearchHit>, FamilyError> {
    if sbox.size() == 0 {
        return Err(FamilyError::EmptyBox);
    }
    let mut hits: Vec<(Vec<i64>, SearchHit)> = sbox
        .candidates()
        .into_par_iter()
        .filter_map(|coeffs| {
            let a = IntPoly::new(coeffs.iter().copied());
            let pcf = Pcf::new(a.clone(), b.clone()).ok()?;
            let est = has_fr(&pcf, sbox)?;
            let family = match_family(&a, b);
            Some((coeffs, SearchHit { a, lambda: est.lambda, verdict: est.fr_verdict, family }))
        })
        .collect();
    hits.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(hits.into_iter().map(|(_, h)| h).collect())
}

fn is_square(x: &Rational) -> Option<Rational> {
    if *x < 0 {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    if !n.is_perfect_square() || !d.is_perfect_square() {
        return None;
    }
    Some(Rational::from((n.clone().sqrt(), d.clone().sqrt())))
}

/// Rational roots x1 ≤ x2 and B of a quadratic b = B(n − x1)(n − x2).
fn quadratic_roots(b: &IntPoly) -> Option<(Rational, Rational, Rational)> {
    if b.degree().finite() != Some(2) {
        return None;
    }
    let roots: Vec<Rational> =
        rational_roots(b).into_iter().flat_map(|(r, m)| std::iter::repeat_n(r, m as usize)).collect();
    match roots.as_slice() {
        [x1, x2] => Some((Rational::from(b.lead()), x1.clone(), x2.clone())),
        _ => None,
    }
}

/// x with b = x²(2n² + n), if b has that shape.
fn pythagorean_base(b: &IntPoly) -> Option<Integer> {
    if b.degree().finite() != Some(2) || b.coeff(0) != 0 {
        return None;
    }
    let x2 = b.coeff(1);
    if x2 <= 0 || b.coeff(2) != Integer::from(&x2 * 2u32) || !x2.is_perfect_square() {
        return None;
    }
    Some(x2.sqrt())
}

/// Known template matching a, checked in the order symmetric, linear, Conjecture 1.3.
pub fn match_family(a: &IntPoly, b: &IntPoly) -> Option<FamilyDescriptor> {
    if let (Some((big_b, x1, x2)), Some(1)) = (quadratic_roots(b), a.degree().finite()) {
        let (a0, a1) = (Rational::from(a.coeff(0)), Rational::from(a.coeff(1)));
        let k = Rational::from(&a1 / 2u32);
        let c0 = Rational::from(1) - &x1 - &x2;
        if Rational::from(&k * &c0) == a0 {
            return Some(FamilyDescriptor::new(
                FamilyKind::Conjecture14Symmetric,
                &[("B", big_b), ("k", k), ("x1", x1), ("x2", x2)],
            ));
        }
        // A = B/m − m  ⇔  m² + A m − B = 0
        let disc = Rational::from(a1.square_ref()) + Rational::from(&big_b * 4u32);
        if let Some(w) = is_square(&disc) {
            for sign in [1, -1] {
                let m = (Rational::from(-&a1) + Rational::from(&w * sign)) / 2u32;
                if valid_m(&m, &big_b) {
                    if let Some(x) = pythagorean_base(b) {
                        // z² + 8x² = (y + 3x)²
                        let y = &w - Rational::from(&x * 3u32);
                        return Some(FamilyDescriptor::new(
                            FamilyKind::PythagoreanLinear,
                            &[("A", a1.clone()), ("k", a0), ("m", m), ("x", x.into()), ("y", y), ("z", a1)],
                        ));
                    }
                    return Some(FamilyDescriptor::new(
                        FamilyKind::Conjecture14Linear,
                        &[("A", a1.clone()), ("B", big_b), ("k", a0), ("m", m)],
                    ));
                }
            }
        }
    }
    match_conjecture13(a, b).or_else(|| {
        Some(FamilyDescriptor::new(FamilyKind::AdHoc, &[]))
    })
}

fn valid_m(m: &Rational, big_b: &Rational) -> bool {
    *m != 0 && Rational::from(m.square_ref()) != Rational::from(big_b.abs_ref())
}

/// a = (B/m)·r(n+1) − m·s(n) for a monic equal-degree split b = B·r·s (either order).
fn match_conjecture13(a: &IntPoly, b: &IntPoly) -> Option<FamilyDescriptor> {
    let split = equal_degree_split(b).ok()??;
    let a_rat = a.to_rat();
    let big_b = split.scale.clone();
    for (r, s) in [(&split.left, &split.right), (&split.right, &split.left)] {
        // leading coefficient: lead(a) = B/m − m
        if a.degree() != r.degree() {
            continue;
        }
        let lead = a_rat.lead();
        let disc = Rational::from(lead.square_ref()) + Rational::from(&big_b * 4u32);
        let Some(w) = is_square(&disc) else { continue };
        for sign in [1, -1] {
            let m = (Rational::from(-&lead) + Rational::from(&w * sign)) / 2u32;
            if !valid_m(&m, &big_b) {
                continue;
            }
            let cand = conjecture13_a(r, s, &big_b, &m);
            if cand == a_rat {
                return Some(FamilyDescriptor::new(FamilyKind::Conjecture13, &[("B", big_b), ("m", m)]));
            }
        }
    }
    None
}

fn conjecture13_a(r: &RatPoly, s: &RatPoly, big_b: &Rational, m: &Rational) -> RatPoly {
    let left = r.shift(1).scale(&Rational::from(big_b / m));
    let right = s.scale(m);
    &left - &right
}

/// b = B·r·s and a = (B/m)·r(n+1) − m·s(n).
pub fn conjecture13_member(r: &RatPoly, s: &RatPoly, big_b: &Rational, m: &Rational) -> Result<RationalCf, FamilyError> {
    if r.degree() != s.degree() {
        return Err(FamilyError::DegreeMismatch);
    }
    if !valid_m(m, big_b) {
        return Err(FamilyError::InvalidM(m.clone()));
    }
    let a = conjecture13_a(r, s, big_b, m);
    let b = (r * s).scale(big_b);
    Ok(RationalCf { a: RatFn::poly(a), b: RatFn::poly(b) })
}

/// The integer PCF of a rational family member, with the inflation polynomial used.
pub fn integerized(cf: &RationalCf) -> Result<(Pcf, RatPoly), FamilyError> {
    Ok(integerize(cf)?)
}

/// Family 1 descriptors (one per distinct integer A = B/m − m, m over the divisors of B)
/// and the family 2 descriptor.
pub fn conjecture14_families(b: &IntPoly) -> Result<Vec<FamilyDescriptor>, FamilyError> {
    let (big_b, x1, x2) = quadratic_roots(b).ok_or_else(|| FamilyError::NotSplittable(b.clone()))?;
    let divisors = crate::numth::divisors(&Integer::from(big_b.numer().abs_ref()))
        .ok_or_else(|| FamilyError::Analysis(format!("cannot factor B = {big_b}")))?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for d in divisors {
        for m in [Rational::from(d.clone()), Rational::from(-d.clone())] {
            if !valid_m(&m, &big_b) {
                continue;
            }
            let lead = Rational::from(&big_b / &m) - &m;
            if seen.insert(lead.clone()) {
                out.push(FamilyDescriptor::new(
                    FamilyKind::Conjecture14Linear,
                    &[("A", lead), ("B", big_b.clone()), ("m", m)],
                ));
            }
        }
    }
    out.push(FamilyDescriptor::new(FamilyKind::Conjecture14Symmetric, &[("B", big_b), ("x1", x1), ("x2", x2)]));
    Ok(out)
}

/// All z ≥ 0 with z² = x² + y² + 6xy for some y in the range.
pub fn pythagorean_z(x: i64, y_range: std::ops::RangeInclusive<i64>) -> BTreeSet<i64> {
    let x = x as i128;
    y_range
        .filter_map(|y| {
            let y = y as i128;
            let rhs = x * x + y * y + 6 * x * y;
            if rhs < 0 {
                return None;
            }
            let z = Integer::from(rhs).sqrt();
            (Integer::from(z.square_ref()) == rhs).then(|| z.to_i64()).flatten()
        })
        .collect()
}

/// The z set for y ≥ 0 and for all y, both over |y| ≤ bound.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct PythagoreanSets {
    pub x: i64,
    pub bound: i64,
    pub nonnegative_y: BTreeSet<i64>,
    pub all_y: BTreeSet<i64>,
}

pub fn pythagorean_sets(x: i64, bound: i64) -> PythagoreanSets {
    PythagoreanSets { x, bound, nonnegative_y: pythagorean_z(x, 0..=bound), all_y: pythagorean_z(x, -bound..=bound) }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TrendRow {
    pub k: i64,
    pub alpha: f64,
    pub lambda: f64,
    pub delta: DeltaValue,
    /// δ with the family floor λ (minimum of the measured λ over the k list)
    pub delta_floor: DeltaValue,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Trend {
    pub base_a: IntPoly,
    pub b: IntPoly,
    pub depth: usize,
    pub lambda_floor: f64,
    pub rows: Vec<TrendRow>,
}

impl Trend {
    fn column(&self, floor: bool) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| {
                let d = if floor { &r.delta_floor } else { &r.delta };
                d.finite().unwrap_or(f64::INFINITY)
            })
            .collect()
    }

    pub fn floor_increasing(&self) -> bool {
        self.column(true).windows(2).all(|w| w[1] > w[0])
    }

    pub fn measured_increasing(&self) -> bool {
        self.column(false).windows(2).all(|w| w[1] > w[0])
    }

    /// δ for multiplier k with the floor λ.
    pub fn extrapolate(&self, k: i64) -> Result<DeltaValue, FamilyError> {
        let a = self.base_a.scale(&Integer::from(k));
        let pcf = Pcf::new(a, self.b.clone())?;
        let al = alpha(&pcf, 128)?.to_f64().abs();
        let b_abs = self.b.lead().abs().to_f64();
        delta_formula(al, b_abs, self.lambda_floor).map_err(|e| FamilyError::Analysis(e.to_string()))
    }
}

/// δ_k for PCF[k·base_a, b] over the k list, each checked for FR at `depth`.
pub fn theorem3_trend(base_a: &IntPoly, b: &IntPoly, k_list: &[i64], depth: usize) -> Result<Trend, FamilyError> {
    let thresholds = FrThresholds::default();
    let measured: Vec<(i64, f64, f64)> = k_list
        .par_iter()
        .map(|&k| {
            let pcf = Pcf::new(base_a.scale(&Integer::from(k)), b.clone())?;
            if pcf.classify().kind != PcfKind::Balanced {
                return Err(FamilyError::Analysis(format!("{pcf} is not balanced")));
            }
            let al = alpha(&pcf, 128)?.to_f64().abs();
            let est = confirm_fr(&pcf, depth, &thresholds)
                .ok_or_else(|| FamilyError::Analysis(format!("GCD analysis failed for k = {k}")))?;
            if est.fr_verdict != FrVerdict::FR {
                return Err(FamilyError::NotFr { k, verdict: est.fr_verdict });
            }
            Ok((k, al, est.lambda))
        })
        .collect::<Result<_, _>>()?;
    let lambda_floor = measured.iter().map(|m| m.2).fold(f64::INFINITY, f64::min);
    let b_abs = b.lead().abs().to_f64();
    let delta = |al: f64, lam: f64| delta_formula(al, b_abs, lam).map_err(|e| FamilyError::Analysis(e.to_string()));
    let rows = measured
        .into_iter()
        .map(|(k, al, lam)| {
            Ok(TrendRow { k, alpha: al, lambda: lam, delta: delta(al, lam)?, delta_floor: delta(al, lambda_floor)? })
        })
        .collect::<Result<_, FamilyError>>()?;
    Ok(Trend { base_a: base_a.clone(), b: b.clone(), depth, lambda_floor, rows })
}

/// a(n) + a(−1−n) ≡ 0, b(n) − b(−n) ≡ 0, b(0) = 0, as polynomial identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Symmetry {
    pub a_antisymmetric: bool,
    pub b_even: bool,
    pub b_vanishes_at_zero: bool,
}

impl Symmetry {
    pub fn holds(&self) -> bool {
        self.a_antisymmetric && self.b_even && self.b_vanishes_at_zero
    }
}

pub fn symmetry(a: &IntPoly, b: &IntPoly) -> Symmetry {
    Symmetry {
        a_antisymmetric: (a + &a.compose_linear(-1, -1)).is_zero(),
        b_even: (b - &b.compose_linear(-1, 0)).is_zero(),
        b_vanishes_at_zero: b.coeff(0) == 0,
    }
}

/// Divisibility of GCD_n by n!/(2^l·LCM[n]).
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Divisibility {
    pub depth: usize,
    pub l_max: u32,
    /// first n where the odd part of n!/LCM[n] does not divide GCD_n
    pub odd_failure: Option<usize>,
    /// max over n ≤ depth of the 2-adic deficit v₂(n!/LCM[n]) − v₂(GCD_n)
    pub max_deficit: u32,
    /// smallest fixed l that works for every n ≤ depth, if within l_max
    pub smallest_l: Option<u32>,
    /// growth of the deficit per unit n over the second half of the range
    pub deficit_rate: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AppendixDVerdict {
    pub a: IntPoly,
    pub b: IntPoly,
    pub symmetry: Symmetry,
    pub divisibility: Option<Divisibility>,
}

impl AppendixDVerdict {
    pub fn passed(&self) -> bool {
        self.symmetry.holds() && self.divisibility.as_ref().is_some_and(|d| d.smallest_l.is_some())
    }
}

/// Default bound on l: 2·deg a + 2.
pub fn default_l_max(a: &IntPoly) -> u32 {
    2 * a.degree().finite().unwrap_or(0) as u32 + 2
}

/// Checks the symmetry condition, and when it holds, the divisibility of GCD_n for n ≤ depth.
pub fn appendix_d_check(a: &IntPoly, b: &IntPoly, depth: usize, l_max: u32) -> Result<AppendixDVerdict, FamilyError> {
    let sym = symmetry(a, b);
    let mut verdict = AppendixDVerdict { a: a.clone(), b: b.clone(), symmetry: sym, divisibility: None };
    if !sym.holds() {
        return Ok(verdict);
    }
    let pcf = Pcf::new(a.clone(), b.clone())?;
    let table = convergents(&pcf, depth)?;
    let series = gcd_series(&table).map_err(|e| FamilyError::Analysis(e.to_string()))?;
    let mut fact = Integer::from(1);
    let mut lcm = LcmCounter::new();
    let mut deficits = vec![0u32; depth + 1];
    let mut odd_failure = None;
    for (n, deficit) in deficits.iter_mut().enumerate().skip(1) {
        fact *= n as u64;
        let l = lcm.advance_to(n as u64);
        let quot = Integer::from(fact.div_exact_ref(l));
        let v2 = quot.find_one(0).unwrap_or(0);
        let odd = Integer::from(&quot >> v2);
        let g = series.gcd(n);
        if odd_failure.is_none() && !g.is_divisible(&odd) {
            odd_failure = Some(n);
        }
        let vg = g.find_one(0).unwrap_or(0);
        *deficit = v2.saturating_sub(vg);
    }
    let max_deficit = deficits.iter().copied().max().unwrap_or(0);
    let half = depth / 2;
    let deficit_rate =
        if depth > half && half > 0 { (deficits[depth] as f64 - deficits[half] as f64) / (depth - half) as f64 } else { 0.0 };
    let smallest_l = (odd_failure.is_none() && max_deficit <= l_max).then_some(max_deficit);
    verdict.divisibility = Some(Divisibility { depth, l_max, odd_failure, max_deficit, smallest_l, deficit_rate });
    Ok(verdict)
}

/// The degree-2 b universe with every coefficient in lo..=hi.
pub fn quadratic_universe(lo: i64, hi: i64) -> Vec<IntPoly> {
    let mut out = Vec::new();
    for c2 in lo..=hi {
        for c1 in lo..=hi {
            for c0 in lo..=hi {
                out.push(IntPoly::new([c0, c1, c2]));
            }
        }
    }
    out
}

/// True when b = B·r·s with rational r, s of equal degree.
pub fn splittable(b: &IntPoly) -> bool {
    matches!(equal_degree_split(b), Ok(Some(_)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::new(c.iter().copied())
    }

    #[test]
    fn box_enumeration() {
        let sbox = SearchBox::uniform(1, 1, 5);
        assert_eq!(sbox.size(), 25);
        let c = sbox.candidates();
        assert_eq!(c.len(), 25);
        assert_eq!(c[0], vec![1, 1]);
        assert_eq!(SearchBox::parse_ranges("0..15, 2, 1..=3").unwrap(), vec![(0, 15), (2, 2), (1, 3)]);
        assert!(SearchBox::parse_ranges("3..1").is_err());
    }

    #[test]
    fn conjecture13_examples() {
        let n = RatPoly::new([0, 1]);
        assert!(matches!(conjecture13_member(&n, &n, &rat(-1, 1), &rat(1, 1)), Err(FamilyError::InvalidM(_))));
        let cf = conjecture13_member(&n, &n, &rat(-1, 1), &rat(-2, 1)).unwrap();
        // a = (n+1)/2 + 2n
        assert_eq!(cf.a.num, RatPoly::new([rat(1, 2), rat(5, 2)]));
        assert_eq!(cf.b.num, RatPoly::new([0, 0, -1]));

        let r = RatPoly::new([rat(1, 2), rat(1, 1)]);
        let s = RatPoly::new([rat(-1, 2), rat(1, 1)]);
        let cf = conjecture13_member(&r, &s, &rat(8, 1), &rat(1, 1)).unwrap();
        assert_eq!(cf.a.num.coeff(1), 7);
        assert_eq!(cf.b.num, RatPoly::new([-2, 0, 8]));
        let (pcf, _) = integerized(&cf).unwrap();
        assert_eq!(Rational::from(pcf.a.lead()) / Rational::from(pcf.b.lead()), rat(7 * 2, 4 * 8));
        assert!(matches!(conjecture13_member(&r, &s, &rat(4, 1), &rat(-2, 1)), Err(FamilyError::InvalidM(_))));
        assert!(matches!(conjecture13_member(&r, &s, &rat(4, 1), &rat(0, 1)), Err(FamilyError::InvalidM(_))));
    }

    #[test]
    fn conjecture14_descriptors() {
        let fams = conjecture14_families(&ip(&[-2, 0, 8])).unwrap();
        let leads: BTreeSet<Rational> = fams.iter().filter_map(|f| f.param("A").cloned()).collect();
        for a in [7, 2, -2, -7] {
            assert!(leads.contains(&Rational::from(a)), "missing A = {a}");
        }
        let sym = fams.iter().find(|f| f.kind == FamilyKind::Conjecture14Symmetric).unwrap();
        assert_eq!(sym.member(&rat(1, 1)).unwrap(), RatPoly::new([1, 2]));
        for f in &fams {
            if let (Some(a), Some(m), Some(b)) = (f.param("A"), f.param("m"), f.param("B")) {
                let lhs = Rational::from(m.square_ref()) + Rational::from(a * m) - b;
                assert_eq!(lhs, 0);
            }
        }

        let fams = conjecture14_families(&ip(&[0, 0, -1])).unwrap();
        let sym = fams.iter().find(|f| f.kind == FamilyKind::Conjecture14Symmetric).unwrap();
        assert_eq!(sym.member(&rat(3, 1)).unwrap(), RatPoly::new([3, 6]));
        assert!(matches!(conjecture14_families(&ip(&[1, 0, 1])), Err(FamilyError::NotSplittable(_))));
    }

    #[test]
    fn family_matching() {
        let b = ip(&[-2, 0, 8]);
        assert_eq!(match_family(&ip(&[3, 7]), &b).unwrap().kind, FamilyKind::Conjecture14Linear);
        assert_eq!(match_family(&ip(&[1, 2]), &b).unwrap().kind, FamilyKind::Conjecture14Symmetric);
        let pyth = match_family(&ip(&[5, 7]), &ip(&[0, 4, 8])).unwrap();
        assert_eq!(pyth.kind, FamilyKind::PythagoreanLinear);
        assert_eq!(pyth.param("z"), Some(&Rational::from(7)));
        // B = −6, r = s = n², m = 2: a = −3(n+1)² − 2n²
        let (a13, b13) = (ip(&[-3, -6, -5]), ip(&[0, 0, 0, 0, -6]));
        let m = match_family(&a13, &b13).unwrap();
        assert_eq!(m.kind, FamilyKind::Conjecture13);
        let est = fr_probe(&Pcf::new(a13, b13).unwrap(), 600, &FrThresholds::default()).unwrap();
        assert_eq!(est.fr_verdict, FrVerdict::FR);
        // A² + 4B = 0 here, so m = −1 is excluded
        assert_eq!(match_family(&ip(&[3, 2, 2]), &ip(&[0, 0, 0, 0, -1])).unwrap().kind, FamilyKind::AdHoc);
    }

    #[test]
    fn pythagorean_small() {
        let s = pythagorean_sets(1, 100);
        assert!(s.nonnegative_y.contains(&1));
        assert!(s.all_y.is_superset(&s.nonnegative_y));
        // z² + 8x² must be a square
        for x in 1..=4i64 {
            for z in pythagorean_z(x, -200..=200) {
                let w = Integer::from(z * z + 8 * x * x);
                assert!(w.is_perfect_square());
            }
        }
        assert!(pythagorean_z(2, -100..=100).is_superset(&[2, 7].into_iter().collect()));
    }

    #[test]
    fn symmetry_examples() {
        let b = ip(&[0, 0, -1]);
        assert!(symmetry(&ip(&[3, 6]), &b).holds());
        assert!(symmetry(&ip(&[2, 4]), &b).holds());
        let s = symmetry(&ip(&[3, 7]), &ip(&[-2, 0, 8]));
        assert!(!s.b_vanishes_at_zero && !s.holds());
    }

    #[test]
    fn appendix_d_odd_and_even_k() {
        let b = ip(&[0, 0, -1]);
        let odd = appendix_d_check(&ip(&[3, 6]), &b, 300, 4).unwrap();
        assert!(odd.passed(), "{odd:?}");
        assert_eq!(odd.divisibility.as_ref().unwrap().smallest_l, Some(0));
        let even = appendix_d_check(&ip(&[2, 4]), &b, 300, 4).unwrap();
        let d = even.divisibility.unwrap();
        assert_eq!(d.odd_failure, None);
        assert!(d.deficit_rate > 0.5, "{d:?}");
        let off = appendix_d_check(&ip(&[3, 7]), &ip(&[-2, 0, 8]), 300, 4).unwrap();
        assert!(off.divisibility.is_none() && !off.passed());
    }

    #[test]
    fn small_search() {
        let hits = search_a_for_fr(&ip(&[1, 2, 1]), &SearchBox::uniform(1, 1, 5)).unwrap();
        assert!(hits.iter().any(|h| h.a == ip(&[3, 2])));
        assert!(hits.iter().all(|h| h.family.as_ref().is_some_and(|f| f.kind != FamilyKind::AdHoc)));
        let none = search_a_for_fr(&ip(&[2, 4, 1]), &SearchBox::uniform(1, 1, 5)).unwrap();
        assert!(none.is_empty(), "{none:?}");
    }
}
