//! Closed forms for GCD sequences: a multifactorial power, prime powers with linear or
//! floor exponents, and an optional LCM[f·n] in the denominator.

use crate::numth::prime_power_base;
use crate::poly::{multifactorial, IntPoly, LcmCounter};
use rug::ops::Pow;
use rug::{Integer, Rational};
use std::fmt;

/// ((u·n+v)!^{(u)})^power
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct FactorialPart {
    pub u: u32,
    pub v: i64,
    pub power: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Exponent {
    /// ⌊num·n/den⌋
    Linear { num: u32, den: u32 },
    /// ⌊n/den⌋^power
    FloorPower { den: u32, power: u32 },
}

impl Exponent {
    pub fn at(&self, n: u64) -> u64 {
        match *self {
            Exponent::Linear { num, den } => num as u64 * n / den as u64,
            Exponent::FloorPower { den, power } => (n / den as u64).pow(power),
        }
    }

    /// Asymptotic exponent per unit n (infinite slope reported as f64::INFINITY).
    pub fn rate(&self) -> f64 {
        match *self {
            Exponent::Linear { num, den } => num as f64 / den as f64,
            Exponent::FloorPower { den, power } => {
                if power == 1 {
                    1.0 / den as f64
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    fn normalized(self) -> Exponent {
        match self {
            Exponent::Linear { num, den } => {
                let g = gcd_u32(num, den).max(1);
                Exponent::Linear { num: num / g, den: den / g }
            }
            Exponent::FloorPower { den, power: 1 } => Exponent::Linear { num: 1, den },
            e => e,
        }
    }
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: Exponent,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
pub struct GcdForm {
    pub factorial: Option<FactorialPart>,
    pub numerator_primes: Vec<PrimePower>,
    pub denominator_primes: Vec<PrimePower>,
    /// f in LCM[f·n]
    pub lcm: Option<u32>,
    pub residual: bool,
}

impl GcdForm {
    /// The constant form 1.
    pub fn one() -> GcdForm {
        GcdForm::default()
    }

    pub fn factorial(u: u32, v: i64, power: u32) -> GcdForm {
        GcdForm { factorial: Some(FactorialPart { u, v, power }), ..GcdForm::default() }
    }

    /// Exact values G(0..=n_max).
    pub fn values(&self, n_max: usize) -> Vec<Rational> {
        let mut out = Vec::with_capacity(n_max + 1);
        let mut fact = Integer::from(1);
        let mut lcm = LcmCounter::new();
        for n in 0..=n_max {
            let mut num = Integer::from(1);
            let mut den = Integer::from(1);
            if let Some(fp) = self.factorial {
                let k = fp.u as i64 * n as i64 + fp.v;
                if n == 0 || k < 1 {
                    fact = multifactorial(k, fp.u);
                } else {
                    fact *= k;
                }
                num *= Integer::from((&fact).pow(fp.power));
            }
            for pp in &self.numerator_primes {
                num *= Integer::from(Integer::u_pow_u(pp.prime as u32, pp.exponent.at(n as u64) as u32));
            }
            for pp in &self.denominator_primes {
                den *= Integer::from(Integer::u_pow_u(pp.prime as u32, pp.exponent.at(n as u64) as u32));
            }
            if let Some(f) = self.lcm {
                den *= lcm.advance_to(f as u64 * n as u64);
            }
            out.push(Rational::from((num, den)));
        }
        out
    }

    /// ln G(0..=n_max) in floating point.
    pub fn ln_values(&self, n_max: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n_max + 1);
        let mut ln_fact = 0.0f64;
        let mut psi = 0.0f64;
        let mut lcm_pos = 1u64;
        for n in 0..=n_max {
            let mut v = 0.0;
            if let Some(fp) = self.factorial {
                let k = fp.u as i64 * n as i64 + fp.v;
                if n == 0 || k < 1 {
                    ln_fact = crate::numth::ln_abs(&multifactorial(k, fp.u));
                } else {
                    ln_fact += (k as f64).ln();
                }
                v += fp.power as f64 * ln_fact;
            }
            for pp in &self.numerator_primes {
                v += pp.exponent.at(n as u64) as f64 * (pp.prime as f64).ln();
            }
            for pp in &self.denominator_primes {
                v -= pp.exponent.at(n as u64) as f64 * (pp.prime as f64).ln();
            }
            if let Some(f) = self.lcm {
                let target = f as u64 * n as u64;
                while lcm_pos < target {
                    lcm_pos += 1;
                    if let Some(p) = prime_power_base(lcm_pos) {
                        psi += (p as f64).ln();
                    }
                }
                v -= psi;
            }
            out.push(v);
        }
        out
    }

    /// G(n)/G(n−1) = P(n)/K for n ≥ 2 when the form has no LCM and only integer-rate
    /// prime powers; None otherwise.
    pub fn symbolic_step(&self) -> Option<(IntPoly, Rational)> {
        if self.lcm.is_some() {
            return None;
        }
        let mut k = Rational::from(1);
        for (pp, num_side) in self.numerator_primes.iter().map(|p| (p, true)).chain(self.denominator_primes.iter().map(|p| (p, false))) {
            let step = match pp.exponent.normalized() {
                Exponent::Linear { num, den: 1 } => num,
                _ => return None,
            };
            let f = Integer::from(Integer::u_pow_u(pp.prime as u32, step));
            if num_side {
                k /= f;
            } else {
                k *= f;
            }
        }
        let p = match self.factorial {
            Some(fp) => {
                let lin = IntPoly::new([fp.v, fp.u as i64]);
                let mut acc = IntPoly::constant(1);
                for _ in 0..fp.power {
                    acc = &acc * &lin;
                }
                acc
            }
            None => IntPoly::constant(1),
        };
        Some((p, k))
    }

    pub fn parse(s: &str) -> Result<GcdForm, FormParseError> {
        Parser::new(s).parse()
    }
}

fn factorial_display(fp: &FactorialPart) -> String {
    let lin = IntPoly::new([fp.v, fp.u as i64]);
    let inner = if fp.u == 1 && fp.v == 0 { "n".to_string() } else { format!("({lin})") };
    let bangs = if fp.u <= 3 { "!".repeat(fp.u as usize) } else { format!("!^({})", fp.u) };
    let base = format!("{inner}{bangs}");
    if fp.power == 1 {
        base
    } else {
        format!("({base})^{}", fp.power)
    }
}

fn prime_display(pp: &PrimePower) -> String {
    match pp.exponent.normalized() {
        Exponent::Linear { num, den: 1 } => {
            if num == 1 {
                format!("{}^n", pp.prime)
            } else {
                format!("{}^({num}n)", pp.prime)
            }
        }
        Exponent::Linear { num, den } => {
            if num == 1 {
                format!("{}^⌊n/{den}⌋", pp.prime)
            } else {
                format!("{}^⌊{num}n/{den}⌋", pp.prime)
            }
        }
        Exponent::FloorPower { den, power } => format!("{}^(⌊n/{den}⌋^{power})", pp.prime),
    }
}

impl fmt::Display for GcdForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num: Vec<String> = Vec::new();
        if let Some(fp) = &self.factorial {
            num.push(factorial_display(fp));
        }
        num.extend(self.numerator_primes.iter().map(prime_display));
        let mut den: Vec<String> = self.denominator_primes.iter().map(prime_display).collect();
        if let Some(l) = self.lcm {
            den.push(if l == 1 { "LCM[n]".to_string() } else { format!("LCM[{l}n]") });
        }
        let num_s = if num.is_empty() { "1".to_string() } else { num.join("·") };
        match den.len() {
            0 => write!(f, "{num_s}")?,
            1 => write!(f, "{num_s}/{}", den[0])?,
            _ => write!(f, "{num_s}/({})", den.join("·"))?,
        }
        if self.residual {
            write!(f, " [residual]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse GCD form {input:?} at position {pos}: {reason}")]
pub struct FormParseError {
    pub input: String,
    pub pos: usize,
    pub reason: String,
}

struct Parser {
    input: String,
    chars: Vec<char>,
    pos: usize,
}

enum Factor {
    Fact(FactorialPart),
    Prime(PrimePower),
    Lcm(u32),
    One,
}

impl Parser {
    fn new(s: &str) -> Parser {
        Parser { input: s.to_string(), chars: s.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 }
    }

    fn err(&self, reason: &str) -> FormParseError {
        FormParseError { input: self.input.clone(), pos: self.pos, reason: reason.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        let cs: Vec<char> = s.chars().collect();
        if self.chars[self.pos..].starts_with(&cs) {
            self.pos += cs.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), FormParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {c:?}")))
        }
    }

    fn number(&mut self) -> Option<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().ok()
    }

    /// `k·n` or `n`, returning k.
    fn multiple_of_n(&mut self) -> Result<u32, FormParseError> {
        let k = self.number().unwrap_or(1) as u32;
        if !self.eat('n') {
            return Err(self.err("expected n"));
        }
        Ok(k)
    }

    fn parse(mut self) -> Result<GcdForm, FormParseError> {
        let mut form = GcdForm::default();
        self.product(&mut form, true)?;
        if self.eat('/') {
            if self.eat('(') {
                self.product(&mut form, false)?;
                self.expect(')')?;
            } else {
                let f = self.factor()?;
                Self::place(&mut form, f, false, &self)?;
            }
        }
        if self.pos != self.chars.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(form)
    }

    fn product(&mut self, form: &mut GcdForm, numerator: bool) -> Result<(), FormParseError> {
        loop {
            let f = self.factor()?;
            Self::place(form, f, numerator, self)?;
            if !(self.eat('·') || self.eat('*')) {
                return Ok(());
            }
        }
    }

    fn place(form: &mut GcdForm, f: Factor, numerator: bool, at: &Parser) -> Result<(), FormParseError> {
        match (f, numerator) {
            (Factor::One, _) => {}
            (Factor::Fact(fp), true) => {
                if form.factorial.is_some() {
                    return Err(at.err("only one factorial part is supported"));
                }
                form.factorial = Some(fp);
            }
            (Factor::Prime(pp), true) => form.numerator_primes.push(pp),
            (Factor::Prime(pp), false) => form.denominator_primes.push(pp),
            (Factor::Lcm(f), false) => form.lcm = Some(f),
            (Factor::Fact(_), false) => return Err(at.err("factorials are only supported in the numerator")),
            (Factor::Lcm(_), true) => return Err(at.err("LCM is only supported in the denominator")),
        }
        Ok(())
    }

    fn bangs(&mut self) -> u32 {
        let mut u = 0;
        while self.eat('!') {
            u += 1;
        }
        u
    }

    fn factor(&mut self) -> Result<Factor, FormParseError> {
        if self.eat_str("LCM[") {
            let k = self.multiple_of_n()?;
            self.expect(']')?;
            return Ok(Factor::Lcm(k));
        }
        if self.eat_str("n!") {
            let extra = self.bangs();
            return Ok(Factor::Fact(FactorialPart { u: 1 + extra, v: 0, power: 1 }));
        }
        if self.eat('(') {
            // (n!)^k, ((…)!!)^k or (un+v)!…
            let save = self.pos;
            if self.peek() == Some('(') || self.chars[self.pos..].starts_with(&['n', '!']) {
                let inner = self.factor()?;
                self.expect(')')?;
                let Factor::Fact(mut fp) = inner else {
                    return Err(self.err("expected a factorial inside parentheses"));
                };
                if self.eat('^') {
                    fp.power *= self.number().ok_or_else(|| self.err("expected power"))? as u32;
                }
                return Ok(Factor::Fact(fp));
            }
            self.pos = save;
            let k = self.multiple_of_n()?;
            let mut v: i64 = 0;
            if self.eat('+') {
                v = self.number().ok_or_else(|| self.err("expected offset"))? as i64;
            } else if self.eat('-') || self.eat('−') {
                v = -(self.number().ok_or_else(|| self.err("expected offset"))? as i64);
            }
            self.expect(')')?;
            let u = self.bangs();
            if u == 0 {
                return Err(self.err("expected '!' after linear factor"));
            }
            if u != k {
                return Err(self.err("multifactorial order must equal the coefficient of n"));
            }
            return Ok(Factor::Fact(FactorialPart { u, v, power: 1 }));
        }
        let Some(base) = self.number() else {
            return Err(self.err("expected factor"));
        };
        if base == 1 && self.peek() != Some('^') {
            return Ok(Factor::One);
        }
        if prime_power_base(base) != Some(base) {
            return Err(self.err("prime powers need a prime base"));
        }
        self.expect('^')?;
        let exponent = self.exponent()?;
        Ok(Factor::Prime(PrimePower { prime: base, exponent }))
    }

    fn floor_body(&mut self) -> Result<(u32, u32), FormParseError> {
        let num = self.multiple_of_n()?;
        self.expect('/')?;
        let den = self.number().ok_or_else(|| self.err("expected denominator"))? as u32;
        Ok((num, den))
    }

    fn exponent(&mut self) -> Result<Exponent, FormParseError> {
        if self.peek() == Some('n') || self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let k = self.multiple_of_n()?;
            return Ok(Exponent::Linear { num: k, den: 1 });
        }
        if self.eat('⌊') {
            let (num, den) = self.floor_body()?;
            self.expect('⌋')?;
            return Ok(Exponent::Linear { num, den });
        }
        if self.eat_str("floor(") {
            let (num, den) = self.floor_body()?;
            self.expect(')')?;
            return Ok(Exponent::Linear { num, den });
        }
        if self.eat('(') {
            let e = if self.eat('⌊') {
                let (num, den) = self.floor_body()?;
                self.expect('⌋')?;
                if self.eat('^') {
                    if num != 1 {
                        return Err(self.err("powered floor exponents must be ⌊n/d⌋"));
                    }
                    let power = self.number().ok_or_else(|| self.err("expected power"))? as u32;
                    Exponent::FloorPower { den, power }
                } else {
                    Exponent::Linear { num, den }
                }
            } else {
                let k = self.multiple_of_n()?;
                Exponent::Linear { num: k, den: 1 }
            };
            self.expect(')')?;
            return Ok(e);
        }
        Err(self.err("expected exponent"))
    }
}
