//! Inflation and deflation: a_n → c_n·a_n, b_n → c_n·c_{n−1}·b_n, which multiplies p_n by
//! ∏_{i≤n} c_i and q_n by ∏_{1≤i≤n} c_i. The limit is scaled by c_0.

use crate::numth::factorize;
use crate::pcf::{Pcf, PcfError};
use crate::poly::{factor_over_q, rational_roots, IntPoly, PolyError, RatPoly};
use rug::ops::Pow;
use rug::{Complete, Integer, Rational};
use std::fmt;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransformError {
    #[error("scaling sequence vanishes at n = {0}")]
    ZeroScaler(i64),
    #[error("partial quotient has a pole at n = {0}")]
    Pole(i64),
    #[error("rational function with zero denominator")]
    ZeroDenominator,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Pcf(#[from] PcfError),
}

/// num/den in lowest terms with a monic denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFn {
    pub num: RatPoly,
    pub den: RatPoly,
}

impl RatFn {
    pub fn new(num: RatPoly, den: RatPoly) -> Result<RatFn, TransformError> {
        if den.is_zero() {
            return Err(TransformError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFn { num, den: RatPoly::one() });
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g)?.0;
        let den = den.div_rem(&g)?.0;
        let lead = den.lead();
        let inv = Rational::from(lead.recip_ref());
        Ok(RatFn { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn poly(p: RatPoly) -> RatFn {
        RatFn { num: p, den: RatPoly::one() }
    }

    pub fn is_poly(&self) -> bool {
        self.den.degree().finite() == Some(0)
    }

    pub fn eval_i64(&self, n: i64) -> Result<Rational, TransformError> {
        let d = self.den.eval_i64(n);
        if d == 0 {
            return Err(TransformError::Pole(n));
        }
        Ok(self.num.eval_i64(n) / d)
    }

    fn mul_poly(&self, c: &RatPoly) -> RatFn {
        RatFn::new(&self.num * c, self.den.clone()).expect("nonzero denominator")
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Continued fraction whose partial quotients are rational functions of n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCf {
    pub a: RatFn,
    pub b: RatFn,
}

impl From<&Pcf> for RationalCf {
    fn from(p: &Pcf) -> Self {
        RationalCf { a: RatFn::poly(p.a.to_rat()), b: RatFn::poly(p.b.to_rat()) }
    }
}

impl fmt::Display for RationalCf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CF[{}, {}]", self.a, self.b)
    }
}

impl RationalCf {
    /// The integer PCF, if both partial quotients are integer polynomials.
    pub fn to_pcf(&self) -> Option<Pcf> {
        if !(self.a.is_poly() && self.b.is_poly()) {
            return None;
        }
        Pcf::new(self.a.num.to_int()?, self.b.num.to_int()?).ok()
    }

    /// Exact rational convergents (p_n, q_n) for n = −1..=depth, indexed from 0.
    pub fn convergents(&self, depth: usize) -> Result<(Vec<Rational>, Vec<Rational>), TransformError> {
        let mut p = vec![Rational::from(1), self.a.eval_i64(0)?];
        let mut q = vec![Rational::new(), Rational::from(1)];
        for n in 1..=depth {
            let an = self.a.eval_i64(n as i64)?;
            let bn = self.b.eval_i64(n as i64)?;
            let pn = (&an * &p[n]).complete() + (&bn * &p[n - 1]).complete();
            let qn = (&an * &q[n]).complete() + (&bn * &q[n - 1]).complete();
            p.push(pn);
            q.push(qn);
        }
        Ok((p, q))
    }
}

fn check_scaler(c: &RatPoly) -> Result<(), TransformError> {
    if c.is_zero() {
        return Err(TransformError::ZeroScaler(0));
    }
    if c.degree().finite() == Some(0) {
        return Ok(());
    }
    for (r, _) in rational_roots(&c.primitive_int()) {
        if *r.denom() == 1 && *r.numer() >= 0 {
            return Err(TransformError::ZeroScaler(r.numer().to_i64().unwrap_or(i64::MAX)));
        }
    }
    Ok(())
}

/// a'_n = c_n·a_n, b'_n = c_n·c_{n−1}·b_n. c must not vanish at any n ≥ 0.
pub fn inflate(cf: &RationalCf, c: &RatPoly) -> Result<RationalCf, TransformError> {
    check_scaler(c)?;
    let cc = c * &c.shift(-1);
    Ok(RationalCf { a: cf.a.mul_poly(c), b: cf.b.mul_poly(&cc) })
}

pub fn inflate_pcf(pcf: &Pcf, c: &RatPoly) -> Result<RationalCf, TransformError> {
    inflate(&RationalCf::from(pcf), c)
}

/// A prime p dividing the contents of a and b once but not twice over b: inflating by
/// 1/√p would halve its share of the GCD, which the integer ring cannot express.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SqrtOpportunity {
    pub prime: u64,
    /// expected GCD growth attributable to p, as a display string
    pub gcd_hint: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deflation {
    pub pcf: Pcf,
    /// positive leading coefficient; c(n) ≠ 0 for n ≥ 0
    pub c: IntPoly,
    pub sqrt_report: Vec<SqrtOpportunity>,
}

impl Deflation {
    /// The deflated limit equals the original limit divided by this.
    pub fn limit_scale(&self) -> Integer {
        self.c.eval_i64(0)
    }
}

/// Largest κ > 0 with κ | ca and κ² | cb.
fn content_scale(ca: &Integer, cb: &Integer) -> Integer {
    let g = Integer::from(ca.gcd_ref(cb));
    let fac = factorize(&g, 1_000_000).unwrap_or_default();
    let mut k = Integer::from(1);
    for (p, _) in fac {
        let pu = p.to_u64().expect("small prime");
        let ea = crate::numth::valuation(ca, pu);
        let eb = crate::numth::valuation(cb, pu) / 2;
        k *= Integer::from((&p).pow(ea.min(eb)));
    }
    k
}

fn sqrt_candidates(pcf: &Pcf) -> Vec<SqrtOpportunity> {
    let (ca, cb) = (pcf.a.content(), pcf.b.content());
    let g = Integer::from(ca.gcd_ref(&cb));
    let fac = factorize(&g, 1_000_000).unwrap_or_default();
    fac.into_iter()
        .filter(|(p, _)| !cb.is_divisible(&Integer::from(p.square_ref())))
        .map(|(p, _)| {
            let d = pcf.deg_a();
            let fact = if d == 1 { "n!".to_string() } else { format!("n!^{d}") };
            SqrtOpportunity { prime: p.to_u64().expect("small prime"), gcd_hint: format!("{fact}·√{p}^n") }
        })
        .collect()
}

/// Deflation by the largest c (degree first, then content) with c | a and
/// c(n)·c(n−1) | b in ℤ[n], among divisors of a that do not vanish at n ≥ 0.
pub fn deflate(pcf: &Pcf) -> Result<Deflation, TransformError> {
    let fac = factor_over_q(&pcf.a)?;
    let mut divisors: Vec<IntPoly> = vec![IntPoly::constant(1)];
    for (f, m) in &fac.factors {
        let mut next = Vec::new();
        for d in &divisors {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..*m {
                acc = &acc * f;
                next.push(acc.clone());
            }
        }
        divisors = next;
    }
    divisors.sort_by(|x, y| y.degree().cmp(&x.degree()).then_with(|| x.coeffs().cmp(y.coeffs())));

    let mut best: Option<(IntPoly, Pcf)> = None;
    for d in divisors {
        if best.as_ref().is_some_and(|(c, _)| c.degree() > d.degree()) {
            break;
        }
        if check_scaler(&d.to_rat()).is_err() {
            continue;
        }
        let Some(a1) = pcf.a.div_exact(&d) else { continue };
        let dd = &d * &d.compose_linear(1, -1);
        let Some(b1) = pcf.b.div_exact(&dd) else { continue };
        let k = content_scale(&a1.content(), &b1.content());
        let c = d.scale(&k);
        let a2 = a1.div_exact(&IntPoly::constant(k.clone())).expect("content divides");
        let b2 = b1.div_exact(&IntPoly::constant(Integer::from(k.square_ref()))).expect("content divides");
        let better = match &best {
            None => true,
            Some((bc, _)) => c.content() > bc.content(),
        };
        if better {
            best = Some((c, Pcf::new(a2, b2)?));
        }
    }
    let (c, out) = best.expect("c = 1 always qualifies");
    let sqrt_report = sqrt_candidates(&out);
    Ok(Deflation { pcf: out, c, sqrt_report })
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ScalingCheck {
    pub depth: usize,
    /// p'_n = (∏_{i=0}^n c_i)·p_n and q'_n = (∏_{i=1}^n c_i)·q_n for all n ≤ depth
    pub sequences: bool,
    /// p'_n·q_n = c_0·p_n·q'_n for all n ≤ depth
    pub convergents: bool,
    /// gcd(p'_n, q'_n) = (∏_{i=1}^n c_i)·gcd(c_0·p_n, q_n), when everything is integral
    pub gcd: Option<bool>,
    pub first_failure: Option<usize>,
}

impl ScalingCheck {
    pub fn holds(&self) -> bool {
        self.sequences && self.convergents && self.gcd != Some(false)
    }
}

/// Exact check of the scaling identities between `cf` and its inflation by `c`.
pub fn scaling_check(cf: &RationalCf, c: &RatPoly, depth: usize) -> Result<ScalingCheck, TransformError> {
    let inflated = inflate(cf, c)?;
    let (p, q) = cf.convergents(depth)?;
    let (pi, qi) = inflated.convergents(depth)?;
    let c0 = c.eval_i64(0);
    let integral = |v: &[Rational]| v.iter().all(|x| *x.denom() == 1);
    let check_gcd = integral(&p) && integral(&q) && integral(&pi) && integral(&qi);
    let mut out = ScalingCheck { depth, sequences: true, convergents: true, gcd: check_gcd.then_some(true), first_failure: None };
    // prod_from_one = ∏_{i=1}^n c_i
    let mut prod_from_one = Rational::from(1);
    for idx in 1..p.len() {
        let n = idx as i64 - 1;
        if n >= 1 {
            prod_from_one *= c.eval_i64(n);
        }
        let full = (&prod_from_one * &c0).complete();
        let seq_ok = pi[idx] == (&full * &p[idx]).complete() && qi[idx] == (&prod_from_one * &q[idx]).complete();
        let conv_ok = (&pi[idx] * &q[idx]).complete() == (&c0 * &p[idx]).complete() * &qi[idx];
        let gcd_ok = if check_gcd {
            let g1 = Integer::from(pi[idx].numer().gcd_ref(qi[idx].numer()));
            let c0p = (c0.numer() * p[idx].numer()).complete();
            let g0 = Integer::from(c0p.gcd_ref(q[idx].numer()));
            let scaled = (Rational::from(g0) * &prod_from_one).abs();
            g1 == scaled
        } else {
            true
        };
        if !(seq_ok && conv_ok && gcd_ok) && out.first_failure.is_none() {
            out.first_failure = Some(n as usize);
        }
        out.sequences &= seq_ok;
        out.convergents &= conv_ok;
        if let Some(g) = out.gcd.as_mut() {
            *g &= gcd_ok;
        }
    }
    Ok(out)
}

/// Smallest-degree monic-content divisor pattern clearing the denominators, then the least
/// positive constant making all coefficients integral. Integer input is returned unchanged.
pub fn integerize(cf: &RationalCf) -> Result<(Pcf, RatPoly), TransformError> {
    let d = clearing_poly(&cf.a.den, &cf.b.den)?;
    let a1 = (&cf.a.num * &d).div_rem(&cf.a.den)?.0;
    let dd = &d * &d.shift(-1);
    let b1 = (&cf.b.num * &dd).div_rem(&cf.b.den)?.0;
    let k = constant_scale(&a1.content(), &b1.content());
    let c = d.scale(&k);
    let a2 = a1.scale(&k).to_int().expect("integral after scaling");
    let b2 = b1.scale(&(&k * &k).complete()).to_int().expect("integral after scaling");
    Ok((Pcf::new(a2, b2)?, c))
}

/// Least positive rational κ ≥ 1 with κ·ca and κ²·cb integers.
fn constant_scale(ca: &Rational, cb: &Rational) -> Rational {
    let mut k = Integer::from(1);
    let dens = Integer::from(ca.denom().lcm_ref(cb.denom()));
    for (p, _) in factorize(&dens, 1_000_000).expect("denominator factorization") {
        let pu = p.to_u64().expect("small prime");
        let need_a = crate::numth::valuation(ca.denom(), pu);
        let need_b = crate::numth::valuation(cb.denom(), pu).div_ceil(2);
        k *= Integer::from((&p).pow(need_a.max(need_b)));
    }
    Rational::from(k)
}

/// Primitive polynomial D of least degree with a.den | D and b.den | D(n)·D(n−1).
fn clearing_poly(a_den: &RatPoly, b_den: &RatPoly) -> Result<RatPoly, TransformError> {
    let base = a_den.primitive_int();
    if b_den.degree().finite() == Some(0) {
        return Ok(base.to_rat());
    }
    let divides = |d: &IntPoly| -> bool {
        let dd = (d * &d.compose_linear(1, -1)).to_rat();
        dd.div_rem(b_den).map(|(_, r)| r.is_zero()).unwrap_or(false)
    };
    if divides(&base) {
        return Ok(base.to_rat());
    }
    // each factor f of b.den is covered by f(n) or f(n+1) in D
    let fac = factor_over_q(&b_den.primitive_int())?;
    let mut pool: Vec<IntPoly> = Vec::new();
    for (f, m) in &fac.factors {
        for _ in 0..*m {
            pool.push(f.clone());
        }
    }
    let mut best: Option<IntPoly> = None;
    let choices = 3usize.pow(pool.len() as u32);
    for mask in 0..choices {
        let mut d = base.clone();
        let mut code = mask;
        for f in &pool {
            match code % 3 {
                1 => d = &d * f,
                2 => d = &d * &f.compose_linear(1, 1),
                _ => {}
            }
            code /= 3;
        }
        let d = d.primitive();
        if divides(&d) && best.as_ref().is_none_or(|b| d.degree() < b.degree()) {
            best = Some(d);
        }
    }
    Ok(best.expect("covering every factor by f(n) always works").to_rat())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(c: &[i64]) -> RatPoly {
        RatPoly::new(c.iter().copied())
    }

    fn apery_rational() -> RationalCf {
        let cube = rp(&[1, 3, 3, 1]);
        RationalCf {
            a: RatFn::new(rp(&[5, 27, 51, 34]), cube.clone()).unwrap(),
            b: RatFn::new(rp(&[0, 0, 0, -1]), cube).unwrap(),
        }
    }

    #[test]
    fn golden_inflation() {
        let out = inflate_pcf(&Pcf::from_coeffs(&[1], &[1]), &rp(&[1, 3])).unwrap();
        assert_eq!(out.to_pcf().unwrap(), Pcf::from_coeffs(&[1, 3], &[-2, -3, 9]));
        let same = inflate_pcf(&Pcf::from_coeffs(&[2, 1], &[0, 1]), &RatPoly::one()).unwrap();
        assert_eq!(same.to_pcf().unwrap(), Pcf::from_coeffs(&[2, 1], &[0, 1]));
    }

    #[test]
    fn apery_inflation_and_integerize() {
        let c = rp(&[1, 3, 3, 1]);
        let out = inflate(&apery_rational(), &c).unwrap();
        assert_eq!(out.to_pcf().unwrap(), Pcf::from_coeffs(&[5, 27, 51, 34], &[0, 0, 0, 0, 0, 0, -1]));
        let (pcf, c2) = integerize(&apery_rational()).unwrap();
        assert_eq!(pcf, Pcf::from_coeffs(&[5, 27, 51, 34], &[0, 0, 0, 0, 0, 0, -1]));
        assert_eq!(c2, c);
        let chk = scaling_check(&apery_rational(), &c, 100).unwrap();
        assert!(chk.holds(), "{chk:?}");
    }

    #[test]
    fn integerize_half_integers() {
        let cf = RationalCf { a: RatFn::poly(RatPoly::new([Rational::from((1, 2)), Rational::from((3, 2))])), b: RatFn::poly(rp(&[-1, 0, 1])) };
        let (pcf, c) = integerize(&cf).unwrap();
        assert_eq!(pcf, Pcf::from_coeffs(&[1, 3], &[-4, 0, 4]));
        assert_eq!(c, RatPoly::constant(2));
        let (same, c1) = integerize(&RationalCf::from(&Pcf::from_coeffs(&[2, 2], &[4]))).unwrap();
        assert_eq!(same, Pcf::from_coeffs(&[2, 2], &[4]));
        assert_eq!(c1, RatPoly::one());
    }

    #[test]
    fn zero_scaler_rejected() {
        let e = inflate_pcf(&Pcf::from_coeffs(&[1], &[1]), &rp(&[-2, 1])).unwrap_err();
        assert_eq!(e, TransformError::ZeroScaler(2));
        assert!(inflate_pcf(&Pcf::from_coeffs(&[1], &[1]), &rp(&[3, 1])).is_ok());
    }

    #[test]
    fn golden_deflation() {
        let d = deflate(&Pcf::from_coeffs(&[1, 3], &[-2, -3, 9])).unwrap();
        assert_eq!(d.pcf, Pcf::from_coeffs(&[1], &[1]));
        assert_eq!(d.c, IntPoly::new([1, 3]));
        let d = deflate(&Pcf::from_coeffs(&[1], &[1])).unwrap();
        assert_eq!(d.c, IntPoly::constant(1));
        assert!(d.sqrt_report.is_empty());
    }

    #[test]
    fn sqrt3_report() {
        let d = deflate(&Pcf::from_coeffs(&[6, 3], &[0, 9, 3])).unwrap();
        assert_eq!(d.c, IntPoly::constant(1));
        assert_eq!(d.sqrt_report.len(), 1);
        assert_eq!(d.sqrt_report[0].prime, 3);
        assert_eq!(d.sqrt_report[0].gcd_hint, "n!·√3^n");
    }

    #[test]
    fn constant_content_deflates() {
        let d = deflate(&Pcf::from_coeffs(&[4, 2], &[0, 0, 12])).unwrap();
        assert_eq!(d.pcf, Pcf::from_coeffs(&[2, 1], &[0, 0, 3]));
        assert_eq!(d.c, IntPoly::constant(2));
        assert_eq!(d.limit_scale(), 2);
    }

    #[test]
    fn golden_scaling() {
        let chk = scaling_check(&RationalCf::from(&Pcf::from_coeffs(&[1], &[1])), &rp(&[1, 3]), 200).unwrap();
        assert!(chk.holds() && chk.gcd == Some(true), "{chk:?}");
        let chk = scaling_check(&RationalCf::from(&Pcf::from_coeffs(&[1, 2], &[0, 0, 1])), &rp(&[2, 1]), 60).unwrap();
        assert!(chk.holds(), "{chk:?}");
    }
}
