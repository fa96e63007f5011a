use super::{PolyError, RatPoly};
use rug::Rational;

/// Parses either a coefficient list `[5, 27, 51, 34]` (low to high, entries may be
/// fractions like `-3/2`) or a human form such as `34n^3+51n^2+27n+5`, `(1/2)n-3`,
/// `2*n^2 - n`, `-n^2*(n+2)*(2n-3)`.
pub fn parse_poly(input: &str) -> Result<RatPoly, PolyError> {
    let s = input.trim();
    let err = |reason: &str| PolyError::Parse { input: input.to_string(), reason: reason.to_string() };
    if s.is_empty() {
        return Err(err("empty input"));
    }
    if let Some(inner) = s.strip_prefix('[') {
        let inner = inner.strip_suffix(']').ok_or_else(|| err("missing closing ']'"))?;
        if inner.trim().is_empty() {
            return Ok(RatPoly::zero());
        }
        let coeffs = inner
            .split(',')
            .enumerate()
            .map(|(i, t)| parse_rational(t.trim()).ok_or_else(|| err(&format!("entry {i} ({:?}) is not an integer or fraction", t.trim()))))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(RatPoly::new(coeffs));
    }
    parse_human(s).map_err(|r| err(&r))
}

fn parse_rational(t: &str) -> Option<Rational> {
    if t.is_empty() {
        return None;
    }
    let ok = t.chars().all(|c| c.is_ascii_digit() || c == '-' || c == '+' || c == '/');
    if !ok {
        return None;
    }
    let t = t.strip_prefix('+').unwrap_or(t);
    let r = Rational::parse(t).ok()?;
    Some(Rational::from(r))
}

fn parse_human(s: &str) -> Result<RatPoly, String> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err("empty input".into());
    }
    let mut p = ExprParser { chars, pos: 0 };
    let out = p.expr()?;
    if p.pos < p.chars.len() {
        return Err(format!("unexpected character {:?} at position {}", p.chars[p.pos], p.pos));
    }
    Ok(out)
}

/// Recursive descent over + − * / ^ and parentheses, with implicit multiplication
/// (`3n`, `n(n+1)`, `(n+1)(n+2)`). Division is by nonzero constants only.
struct ExprParser {
    chars: Vec<char>,
    pos: usize,
}

impl ExprParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatPoly, String> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' | '−' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatPoly, String> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') | Some('·') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    if d.degree().finite() != Some(0) {
                        return Err(format!("division by a non-constant or zero at position {at}"));
                    }
                    acc = acc.scale(&(1 / d.coeff(0)));
                }
                Some(c) if c == 'n' || c == '(' || c.is_ascii_digit() => {
                    acc = &acc * &self.power()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatPoly, String> {
        let mut neg = false;
        while let Some(c) = self.peek() {
            match c {
                '+' => {}
                '-' | '−' => neg = !neg,
                _ => break,
            }
            self.pos += 1;
        }
        let v = self.power()?;
        Ok(if neg { v.scale(&Rational::from(-1)) } else { v })
    }

    fn power(&mut self) -> Result<RatPoly, String> {
        let base = self.atom()?;
        let exp = match self.peek() {
            Some('²') => {
                self.pos += 1;
                2
            }
            Some('³') => {
                self.pos += 1;
                3
            }
            Some('^') => {
                self.pos += 1;
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(format!("missing exponent after '^' at position {start}"));
                }
                let lit: String = self.chars[start..self.pos].iter().collect();
                lit.parse::<u32>().map_err(|_| format!("bad exponent {lit}"))?
            }
            _ => return Ok(base),
        };
        Ok(base.pow(exp))
    }

    fn atom(&mut self) -> Result<RatPoly, String> {
        match self.peek() {
            None => Err("unexpected end of input".into()),
            Some('n') => {
                self.pos += 1;
                Ok(RatPoly::new([0, 1]))
            }
            Some('(') => {
                let open = self.pos;
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(format!("unbalanced '(' at position {open}"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let lit: String = self.chars[start..self.pos].iter().collect();
                let v = Rational::parse(&lit).map_err(|_| format!("bad number {lit:?}"))?;
                Ok(RatPoly::constant(Rational::from(v)))
            }
            Some(c) => Err(format!("unexpected character {c:?} at position {}", self.pos)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;

    #[test]
    fn list_and_human_agree() {
        let a = parse_poly("[5, 27, 51, 34]").unwrap();
        let b = parse_poly("34n^3+51n^2+27n+5").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_int().unwrap(), IntPoly::new([5, 27, 51, 34]));
    }

    #[test]
    fn human_variants() {
        assert_eq!(parse_poly("-n^6").unwrap(), IntPoly::new([0, 0, 0, 0, 0, 0, -1]).to_rat());
        assert_eq!(parse_poly("2*n^2 - n").unwrap(), IntPoly::new([0, -1, 2]).to_rat());
        assert_eq!(parse_poly("(1/2)n-3").unwrap(), RatPoly::new([Rational::from(-3), Rational::from((1, 2))]));
        assert_eq!(parse_poly("n+1/2").unwrap(), RatPoly::new([Rational::from((1, 2)), Rational::from(1)]));
        assert_eq!(parse_poly("9n²−3n−2").unwrap(), IntPoly::new([-2, -3, 9]).to_rat());
        assert_eq!(parse_poly("1").unwrap(), IntPoly::new([1]).to_rat());
        assert_eq!(parse_poly("[]").unwrap(), RatPoly::zero());
    }

    #[test]
    fn products_and_powers() {
        assert_eq!(parse_poly("-n^2*(n+2)*(2n-3)").unwrap(), IntPoly::new([0, 0, 6, -1, -2]).to_rat());
        assert_eq!(parse_poly("n(n+1)").unwrap(), IntPoly::new([0, 1, 1]).to_rat());
        assert_eq!(parse_poly("(2n+1)^2").unwrap(), IntPoly::new([1, 4, 4]).to_rat());
        assert_eq!(parse_poly("2(2n+1)(2n-1)").unwrap(), IntPoly::new([-2, 0, 8]).to_rat());
        assert_eq!(parse_poly("(n^2+n)/2").unwrap(), RatPoly::new([Rational::new(), Rational::from((1, 2)), Rational::from((1, 2))]));
        assert_eq!(parse_poly("-(n+1)").unwrap(), IntPoly::new([-1, -1]).to_rat());
    }

    #[test]
    fn errors_are_descriptive() {
        for bad in ["", "[1, x]", "3n^", "n)", "[1,2", "2**n", "+", "(n+1", "n/n", "n/0", "x"] {
            let e = parse_poly(bad).unwrap_err();
            assert!(matches!(e, PolyError::Parse { .. }), "{bad}");
        }
    }

    #[test]
    fn display_roundtrip() {
        for c in [vec![5, 27, 51, 34], vec![0, 0, 0, 0, 0, 0, -1], vec![-15, 20], vec![0, 125, 125], vec![-7]] {
            let p = IntPoly::new(c);
            assert_eq!(parse_poly(&p.to_string()).unwrap(), p.to_rat());
            assert_eq!(parse_poly(&p.to_list_string()).unwrap(), p.to_rat());
        }
    }
}
