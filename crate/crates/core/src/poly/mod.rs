//! Exact univariate polynomials over ℤ and ℚ.
//!
//! Coefficients are stored low-to-high with no trailing zeros, so the zero
//! polynomial has an empty coefficient vector and degree [`Degree::NegInf`].

mod factor;
mod parse;
mod special;

pub use factor::{equal_degree_split, factor_over_q, rational_roots, Factorization, Split};
pub use parse::parse_poly;
pub use special::{lcm_upto, multifactorial, LcmCounter};

use rug::{Complete, Integer, Rational};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("polynomial has non-integer coefficients")]
    NotIntegral,
    #[error("factorization undecidable within the search budget")]
    Undecidable,
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Degree of a polynomial; the zero polynomial sits below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Degree {
    NegInf,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl PartialOrd for Degree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Degree {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Degree::NegInf, Degree::NegInf) => Ordering::Equal,
            (Degree::NegInf, _) => Ordering::Less,
            (_, Degree::NegInf) => Ordering::Greater,
            (Degree::Finite(a), Degree::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<Integer>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

fn trim<T: PartialEq + Default>(v: &mut Vec<T>) {
    let zero = T::default();
    while v.last().is_some_and(|c| *c == zero) {
        v.pop();
    }
}

impl IntPoly {
    pub fn new<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        Integer: From<T>,
    {
        let mut coeffs: Vec<Integer> = coeffs.into_iter().map(Integer::from).collect();
        trim(&mut coeffs);
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<Integer>) -> Self {
        IntPoly::new([c.into()])
    }

    /// The polynomial `n`.
    pub fn var() -> Self {
        IntPoly::new([0, 1])
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Integer {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInf,
            l => Degree::Finite(l - 1),
        }
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lead(&self) -> Integer {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, n: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= n;
            acc += c;
        }
        acc
    }

    pub fn eval_i64(&self, n: i64) -> Integer {
        self.eval(&Integer::from(n))
    }

    pub fn eval_rat(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Values at n = 0..=n_max, by Horner at each point with machine integers promoted once.
    pub fn values(&self, n_max: usize) -> Vec<Integer> {
        (0..=n_max).map(|n| self.eval_i64(n as i64)).collect()
    }

    /// p(s·n + t).
    pub fn compose_linear(&self, s: i64, t: i64) -> IntPoly {
        let lin = IntPoly::new([t, s]);
        let mut acc = IntPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &IntPoly::constant(c.clone());
        }
        acc
    }

    /// p(n + k).
    pub fn shift(&self, k: i64) -> IntPoly {
        self.compose_linear(1, k)
    }

    /// gcd of all coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in &self.coeffs {
            g.gcd_mut(c);
        }
        g
    }

    /// p / content, with a positive leading coefficient.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lead() < 0 {
            g = -g;
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| c.div_exact_ref(&g).complete()).collect(),
        }
    }

    pub fn scale(&self, k: &Integer) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| (c * k).complete()))
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(Rational::from))
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| (c * i as u64).complete()))
    }

    /// Exact quotient if `d` divides `self` in ℤ[n].
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.to_rat().div_rem(&d.to_rat()).ok()?;
        if !r.is_zero() {
            return None;
        }
        q.to_int()
    }

    pub fn display_var(&self, var: &str) -> String {
        format_terms(self.coeffs.iter().map(Rational::from).collect::<Vec<_>>().as_slice(), var)
    }

    /// Bracketed coefficient list, low to high: `[5, 27, 51, 34]`.
    pub fn to_list_string(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl RatPoly {
    pub fn new<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        Rational: From<T>,
    {
        let mut coeffs: Vec<Rational> = coeffs.into_iter().map(Rational::from).collect();
        trim(&mut coeffs);
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly::new([1])
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        RatPoly::new([c.into()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInf,
            l => Degree::Finite(l - 1),
        }
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_int(&self, n: &Integer) -> Rational {
        self.eval(&Rational::from(n))
    }

    pub fn eval_i64(&self, n: i64) -> Rational {
        self.eval(&Rational::from(n))
    }

    pub fn compose_linear(&self, s: i64, t: i64) -> RatPoly {
        let lin = RatPoly::new([t, s]);
        let mut acc = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &RatPoly::constant(c.clone());
        }
        acc
    }

    pub fn shift(&self, k: i64) -> RatPoly {
        self.compose_linear(1, k)
    }

    /// Lowest common denominator of the coefficients (1 for the zero polynomial).
    pub fn denominator_lcm(&self) -> Integer {
        let mut l = Integer::from(1);
        for c in &self.coeffs {
            l.lcm_mut(c.denom());
        }
        l
    }

    /// Positive rational `c` with self = c · (primitive integer polynomial), sign kept in the
    /// polynomial. Zero for the zero polynomial.
    pub fn content(&self) -> Rational {
        if self.is_zero() {
            return Rational::new();
        }
        let l = self.denominator_lcm();
        let ints = self.scale(&Rational::from(&l)).to_int().expect("cleared denominators");
        Rational::from((ints.content(), l))
    }

    /// Integer polynomial with coprime coefficients and positive leading coefficient,
    /// proportional to self.
    pub fn primitive_int(&self) -> IntPoly {
        let l = self.denominator_lcm();
        self.scale(&Rational::from(l)).to_int().expect("cleared denominators").primitive()
    }

    pub fn scale(&self, k: &Rational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| (c * k).complete()))
    }

    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = Rational::from(self.lead().recip_ref());
        self.scale(&inv)
    }

    pub fn to_int(&self) -> Option<IntPoly> {
        if self.coeffs.iter().any(|c| *c.denom() != 1) {
            return None;
        }
        Some(IntPoly::new(self.coeffs.iter().map(|c| c.numer().clone())))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| *c.denom() == 1)
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| (c * i as u64).complete()))
    }

    pub fn div_rem(&self, d: &RatPoly) -> Result<(RatPoly, RatPoly), PolyError> {
        let dd = d.degree().finite().ok_or(PolyError::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        let lead = d.lead();
        if rem.len() <= dd {
            return Ok((RatPoly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::new(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = Rational::from(&rem[i + dd] / &lead);
            if c != 0 {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= (&c * dc).complete();
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((RatPoly::new(quot), RatPoly::new(rem)))
    }

    /// Monic gcd over ℚ.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, k: u32) -> RatPoly {
        let mut acc = RatPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn display_var(&self, var: &str) -> String {
        format_terms(&self.coeffs, var)
    }

    pub fn to_list_string(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(", "))
    }
}

impl From<&IntPoly> for RatPoly {
    fn from(p: &IntPoly) -> Self {
        p.to_rat()
    }
}

impl From<IntPoly> for RatPoly {
    fn from(p: IntPoly) -> Self {
        p.to_rat()
    }
}

fn format_terms(coeffs: &[Rational], var: &str) -> String {
    if coeffs.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if *c == 0 {
            continue;
        }
        let neg = *c < 0;
        let mag = Rational::from(c.abs_ref());
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let is_int = *mag.denom() == 1;
        let mag_str = if is_int || i == 0 { mag.to_string() } else { format!("({mag})") };
        match i {
            0 => out.push_str(&mag_str),
            _ => {
                if mag != 1 {
                    out.push_str(&mag_str);
                }
                out.push_str(var);
                if i > 1 {
                    out.push_str(&format!("^{i}"));
                }
            }
        }
    }
    out
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_var("n"))
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_var("n"))
    }
}

macro_rules! ring_ops {
    ($t:ident, $c:ident) => {
        impl Add for &$t {
            type Output = $t;
            fn add(self, rhs: &$t) -> $t {
                let n = self.coeffs.len().max(rhs.coeffs.len());
                $t::new((0..n).map(|i| (self.coeff(i) + rhs.coeff(i))))
            }
        }
        impl Sub for &$t {
            type Output = $t;
            fn sub(self, rhs: &$t) -> $t {
                let n = self.coeffs.len().max(rhs.coeffs.len());
                $t::new((0..n).map(|i| (self.coeff(i) - rhs.coeff(i))))
            }
        }
        impl Mul for &$t {
            type Output = $t;
            fn mul(self, rhs: &$t) -> $t {
                if self.is_zero() || rhs.is_zero() {
                    return $t::zero();
                }
                let mut out = vec![$c::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
                for (i, x) in self.coeffs.iter().enumerate() {
                    for (j, y) in rhs.coeffs.iter().enumerate() {
                        out[i + j] += (x * y).complete();
                    }
                }
                $t::new(out)
            }
        }
        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                $t::new(self.coeffs.iter().map(|c| (-c).complete()))
            }
        }
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

ring_ops!(IntPoly, Integer);
ring_ops!(RatPoly, Rational);

impl serde::Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_list_string())
    }
}

impl<'de> serde::Deserialize<'de> for IntPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_poly(&s)
            .and_then(|p| p.to_int().ok_or(PolyError::NotIntegral))
            .map_err(serde::de::Error::custom)
    }
}

impl serde::Serialize for RatPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_list_string())
    }
}

impl<'de> serde::Deserialize<'de> for RatPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_poly(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::new(c.iter().copied())
    }

    #[test]
    fn eval_examples() {
        let apery_a = ip(&[5, 27, 51, 34]);
        assert_eq!(apery_a.eval_i64(1), 117);
        assert_eq!(IntPoly::zero().eval_i64(7), 0);
        assert_eq!(ip(&[-2, 0, 8]).eval_i64(3), 70);
    }

    #[test]
    fn zero_degree_is_marker() {
        assert_eq!(IntPoly::zero().degree(), Degree::NegInf);
        assert!(Degree::NegInf < Degree::Finite(0));
        assert_eq!(ip(&[0, 0, 0]).degree(), Degree::NegInf);
        assert_eq!(ip(&[3, 0]).degree(), Degree::Finite(0));
    }

    #[test]
    fn display_forms() {
        assert_eq!(ip(&[5, 27, 51, 34]).to_string(), "34n^3+51n^2+27n+5");
        assert_eq!(ip(&[0, 0, 0, 0, 0, 0, -1]).to_string(), "-n^6");
        assert_eq!(ip(&[-15, 20]).to_string(), "20n-15");
        assert_eq!(IntPoly::zero().to_string(), "0");
        assert_eq!(RatPoly::new([Rational::from((1, 2)), Rational::from(1)]).to_string(), "n+1/2");
        assert_eq!(ip(&[5, 27, 51, 34]).to_list_string(), "[5, 27, 51, 34]");
    }

    #[test]
    fn compose_and_shift() {
        let p = ip(&[0, 1, 2]); // 2n²+n
        assert_eq!(p.shift(1), ip(&[3, 5, 2]));
        assert_eq!(p.compose_linear(-1, -1), ip(&[1, 3, 2]));
    }

    #[test]
    fn division() {
        let a = ip(&[-2, 0, 8]);
        let d = ip(&[1, 2]);
        assert_eq!(a.div_exact(&d), Some(ip(&[-2, 4])));
        assert_eq!(a.div_exact(&ip(&[1, 3])), None);
        let (q, r) = ip(&[1, 0, 1]).to_rat().div_rem(&ip(&[1, 1]).to_rat()).unwrap();
        assert_eq!(q, ip(&[-1, 1]).to_rat());
        assert_eq!(r, ip(&[2]).to_rat());
    }

    #[test]
    fn content_and_primitive() {
        let p = ip(&[6, -9, -3]);
        assert_eq!(p.content(), 3);
        assert_eq!(p.primitive(), ip(&[-2, 3, 1]));
        let r = RatPoly::new([Rational::from((1, 2)), Rational::from((3, 4))]);
        assert_eq!(r.content(), Rational::from((1, 4)));
        assert_eq!(r.primitive_int(), ip(&[2, 3]));
    }

    #[test]
    fn gcd_over_q() {
        let a = ip(&[-1, 0, 1]).to_rat();
        let b = ip(&[1, 2, 1]).to_rat();
        assert_eq!(a.gcd(&b), ip(&[1, 1]).to_rat());
    }
}
