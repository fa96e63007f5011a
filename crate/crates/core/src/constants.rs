//! Reference values of classical constants, generated by independent series and stored
//! as decimal strings, plus a small expression language over them ("4/pi", "6/zeta3").

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer};

/// Number of stored fractional digits per constant.
pub const STORED_DIGITS: usize = 5000;

pub const NAMES: [&str; 8] = ["pi", "e", "zeta2", "zeta3", "catalan", "ln2", "phi", "sqrt2"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstantError {
    #[error("unknown constant `{0}`")]
    Unknown(String),
    #[error("cannot parse expression `{input}` at offset {at}: {reason}")]
    Parse { input: String, at: usize, reason: String },
    #[error("expression `{0}` divides by zero or leaves the reals")]
    Domain(String),
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ReferenceConstant {
    pub name: &'static str,
    /// "3.1415…" with STORED_DIGITS fractional digits, truncated
    pub digits: &'static str,
    pub derivation: &'static str,
}

macro_rules! stored {
    ($f:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/constants/", $f, ".txt"))
    };
}

fn entry(name: &str) -> Option<(&'static str, &'static str, &'static str)> {
    Some(match name {
        "pi" => ("pi", stored!("pi"), "Machin: 16·atan(1/5) − 4·atan(1/239), fixed-point Taylor series"),
        "e" => ("e", stored!("e"), "Σ 1/k!"),
        "zeta2" => ("zeta2", stored!("zeta2"), "3·Σ_{k≥1} 1/(k²·C(2k,k))"),
        "zeta3" => ("zeta3", stored!("zeta3"), "(5/2)·Σ_{k≥1} (−1)^{k+1}/(k³·C(2k,k))"),
        "catalan" => (
            "catalan",
            stored!("catalan"),
            "(π/8)·ln(2+√3) + (3/8)·Σ_{k≥0} 1/((2k+1)²·C(2k,k)), π from Machin, ln and √ in MPFR",
        ),
        "ln2" => ("ln2", stored!("ln2"), "Σ_{k≥1} 1/(k·2^k)"),
        "phi" => ("phi", stored!("phi"), "(1 + isqrt(5·10^{2D}))/2"),
        "sqrt2" => ("sqrt2", stored!("sqrt2"), "isqrt(2·10^{2D})"),
        _ => return None,
    })
}

fn canonical(name: &str) -> Option<&'static str> {
    let n = name.to_ascii_lowercase();
    Some(match n.as_str() {
        "pi" | "π" => "pi",
        "e" => "e",
        "zeta2" | "ζ(2)" | "zeta(2)" => "zeta2",
        "zeta3" | "ζ(3)" | "zeta(3)" => "zeta3",
        "catalan" | "g" => "catalan",
        "ln2" | "log2" => "ln2",
        "phi" | "φ" => "phi",
        "sqrt2" => "sqrt2",
        _ => return None,
    })
}

/// The stored reference constant by name (case-insensitive; a few aliases accepted).
pub fn reference(name: &str) -> Result<ReferenceConstant, ConstantError> {
    let key = canonical(name).ok_or_else(|| ConstantError::Unknown(name.to_string()))?;
    let (name, digits, derivation) = entry(key).expect("canonical names are stored");
    Ok(ReferenceConstant { name, digits, derivation })
}

impl ReferenceConstant {
    /// Bits of precision the stored digits support.
    pub fn precision_bits(&self) -> u32 {
        (STORED_DIGITS as f64 * std::f64::consts::LOG2_10) as u32 - 8
    }

    pub fn to_float(&self, prec: u32) -> Float {
        let p = Float::parse(self.digits.trim_end()).expect("stored digits parse");
        Float::with_val(prec, p)
    }
}

/// Value of a named constant at `prec` bits: stored digits when they suffice, otherwise
/// regenerated from the series.
pub fn constant_float(name: &str, prec: u32) -> Result<Float, ConstantError> {
    let r = reference(name)?;
    if prec <= r.precision_bits() {
        return Ok(r.to_float(prec));
    }
    let digits = (prec as f64 / std::f64::consts::LOG2_10) as usize + 10;
    let s = generate(r.name, digits);
    Ok(Float::with_val(prec, Float::parse(&s).expect("generated digits parse")))
}

fn pow10(d: usize) -> Integer {
    Integer::from(Integer::u_pow_u(10, d as u32))
}

/// Σ (−1)^k / ((2k+1)·x^{2k+1}), scaled by `scale`.
fn atan_inv(x: u32, scale: &Integer) -> Integer {
    let x2 = Integer::from(x) * x;
    let mut power = Integer::from(scale / x);
    let mut sum = Integer::new();
    let mut k = 0u32;
    while power != 0 {
        let term = Integer::from(&power / (2 * k + 1));
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

fn pi_fixed(scale: &Integer) -> Integer {
    atan_inv(5, scale) * 16u32 - atan_inv(239, scale) * 4u32
}

/// Σ_{k≥1} sign(k)/(k^power·C(2k,k)), scaled.
fn central_binomial_series(scale: &Integer, power: u32, alternating: bool) -> Integer {
    let mut binom = Integer::from(1);
    let mut sum = Integer::new();
    let mut k = 1u32;
    loop {
        // C(2k,k) = C(2k−2,k−1)·(2k)(2k−1)/k²
        binom *= 2 * k * (2 * k - 1);
        binom /= k * k;
        let den = Integer::from(Integer::u_pow_u(k, power)) * &binom;
        let term = Integer::from(scale / &den);
        if term == 0 {
            break;
        }
        if alternating && k.is_multiple_of(2) {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

fn format_fixed(v: &Integer, digits: usize) -> String {
    let s = v.to_string();
    let (int, frac) = s.split_at(s.len() - digits);
    format!("{}.{}", if int.is_empty() { "0" } else { int }, frac)
}

/// `digits` truncated fractional digits of the named constant, computed from its series.
/// Panics on unknown names; see [`NAMES`].
pub fn generate(name: &str, digits: usize) -> String {
    let guard = 30;
    let scale = pow10(digits + guard);
    let v = match name {
        "pi" => pi_fixed(&scale),
        "e" => {
            let mut term = scale.clone();
            let mut sum = Integer::new();
            let mut k = 1u32;
            while term != 0 {
                sum += &term;
                term /= k;
                k += 1;
            }
            sum
        }
        "zeta2" => central_binomial_series(&scale, 2, false) * 3u32,
        "zeta3" => central_binomial_series(&scale, 3, true) * 5u32 / 2u32,
        "ln2" => {
            let mut sum = Integer::new();
            let mut pow = Integer::from(2);
            let mut k = 1u32;
            loop {
                let term = &scale / Integer::from(&pow * k);
                if term == 0 {
                    break;
                }
                sum += term;
                pow <<= 1;
                k += 1;
            }
            sum
        }
        "catalan" => {
            // Σ_{k≥0} 1/((2k+1)²·C(2k,k))
            let mut binom = Integer::from(1);
            let mut sum = Integer::from(&scale);
            let mut k = 1u32;
            loop {
                binom *= 2 * k * (2 * k - 1);
                binom /= k * k;
                let den = Integer::from((2 * k + 1) * (2 * k + 1)) * &binom;
                let term = Integer::from(&scale / &den);
                if term == 0 {
                    break;
                }
                sum += term;
                k += 1;
            }
            let prec = ((digits + guard) as f64 * std::f64::consts::LOG2_10) as u32 + 64;
            let pi = Float::with_val(prec, pi_fixed(&scale)) / Float::with_val(prec, &scale);
            let three = Float::with_val(prec, 3);
            let ln = (three.sqrt() + 2u32).ln();
            let first = pi * ln / 8u32 * Float::with_val(prec, &scale);
            let first = first.to_integer_round(Round::Down).expect("finite").0;
            first + sum * 3u32 / 8u32
        }
        "phi" => {
            let root = (pow10(digits + guard).square() * 5u32).sqrt();
            (root + &scale) / 2u32
        }
        "sqrt2" => (pow10(digits + guard).square() * 2u32).sqrt(),
        _ => panic!("unknown constant {name}"),
    };
    let truncated = v / pow10(guard);
    format_fixed(&truncated, digits)
}

/// Evaluates an arithmetic expression over numbers, named constants, + − * / ^ and the
/// functions sqrt, ln, exp.
pub fn eval_expr(expr: &str, prec: u32) -> Result<Float, ConstantError> {
    let mut p = ExprParser { src: expr, chars: expr.char_indices().collect(), pos: 0, prec };
    let v = p.sum()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("trailing input"));
    }
    if !v.is_finite() {
        return Err(ConstantError::Domain(expr.to_string()));
    }
    Ok(v)
}

struct ExprParser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    prec: u32,
}

impl ExprParser<'_> {
    fn err(&self, reason: &str) -> ConstantError {
        let at = self.chars.get(self.pos).map_or(self.src.len(), |c| c.0);
        ConstantError::Parse { input: self.src.to_string(), at, reason: reason.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.1.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn sum(&mut self) -> Result<Float, ConstantError> {
        let mut v = self.product()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    v += self.product()?;
                }
                '-' | '−' => {
                    self.pos += 1;
                    v -= self.product()?;
                }
                _ => break,
            }
        }
        Ok(v)
    }

    fn product(&mut self) -> Result<Float, ConstantError> {
        let mut v = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' | '·' => {
                    self.pos += 1;
                    v *= self.unary()?;
                }
                '/' => {
                    self.pos += 1;
                    let d = self.unary()?;
                    if d.is_zero() {
                        return Err(ConstantError::Domain(self.src.to_string()));
                    }
                    v /= d;
                }
                _ => break,
            }
        }
        Ok(v)
    }

    fn power(&mut self) -> Result<Float, ConstantError> {
        let base = self.primary()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.unary()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Float, ConstantError> {
        match self.peek() {
            Some('-') | Some('−') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn primary(&mut self) -> Result<Float, ConstantError> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.1.is_ascii_digit() || c.1 == '.') {
                    self.pos += 1;
                }
                let text: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                let parsed = Float::parse(&text).map_err(|_| self.err("bad number"))?;
                Ok(Float::with_val(self.prec, parsed))
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.1.is_alphanumeric() || c.1 == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                if matches!(name.as_str(), "sqrt" | "ln" | "exp") {
                    if self.peek() != Some('(') {
                        return Err(self.err("expected `(` after function name"));
                    }
                    let arg = self.primary()?;
                    return Ok(match name.as_str() {
                        "sqrt" => arg.sqrt(),
                        "ln" => arg.ln(),
                        _ => arg.exp(),
                    });
                }
                let key = canonical(&name).ok_or_else(|| {
                    self.pos = start;
                    self.err(&format!("unknown constant `{name}`"))
                })?;
                constant_float(key, self.prec)
            }
            Some(_) => Err(self.err("unexpected character")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    fn agree(a: &Float, b: &Float, bits: i32) -> bool {
        let d = Float::with_val(a.prec(), a - b).abs();
        d.is_zero() || d.get_exp().unwrap() < -bits
    }

    #[test]
    fn stored_digits_regenerate() {
        for name in NAMES {
            let r = reference(name).unwrap();
            assert_eq!(r.digits.trim_end(), generate(name, STORED_DIGITS), "{name}");
        }
    }

    #[test]
    fn series_agree_with_mpfr() {
        let prec = 16000;
        let mpfr = |name: &str| -> Float {
            let f = |v: u32| Float::with_val(prec, v);
            match name {
                "pi" => Float::with_val(prec, Constant::Pi),
                "e" => f(1).exp(),
                "zeta2" => Float::with_val(prec, Float::zeta_u(2)),
                "zeta3" => Float::with_val(prec, Float::zeta_u(3)),
                "catalan" => Float::with_val(prec, Constant::Catalan),
                "ln2" => Float::with_val(prec, Constant::Log2),
                "phi" => (f(5).sqrt() + 1u32) / 2u32,
                _ => f(2).sqrt(),
            }
        };
        for name in NAMES {
            let ours = reference(name).unwrap().to_float(prec);
            assert!(agree(&ours, &mpfr(name), 16000 - 40), "{name}");
        }
    }

    #[test]
    fn expressions() {
        let v = eval_expr("4/pi", 200).unwrap();
        assert!(agree(&v, &(Float::with_val(200, 4) / Float::with_val(200, Constant::Pi)), 190));
        let w = eval_expr("(e+1)/(e-1)", 200).unwrap();
        assert!((w.to_f64() - 2.163953413738653).abs() < 1e-14);
        assert!((eval_expr("6/zeta3", 100).unwrap().to_f64() - 4.991444235484245).abs() < 1e-13);
        assert!((eval_expr("-2^2 + sqrt(4)", 64).unwrap().to_f64() + 2.0).abs() < 1e-15);
        assert!(matches!(eval_expr("4/tau", 64), Err(ConstantError::Parse { .. })));
        assert!(matches!(eval_expr("1/(pi-pi)", 64), Err(ConstantError::Domain(_))));
        assert!(matches!(eval_expr("(1", 64), Err(ConstantError::Parse { .. })));
    }

    #[test]
    fn beyond_stored_precision_regenerates() {
        let v = constant_float("e", 20000).unwrap();
        assert!(agree(&v, &Float::with_val(20000, 1).exp(), 19900));
    }
}
