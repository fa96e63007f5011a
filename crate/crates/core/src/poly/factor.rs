//! Factorization over ℚ for the small polynomials that occur as partial quotients:
//! square-free decomposition, rational-root peeling, then Kronecker interpolation for
//! the remaining factors under a fixed candidate budget.

use super::{IntPoly, PolyError, RatPoly};
use crate::numth::divisors;
use rug::{Integer, Rational};
use std::cmp::Ordering;

/// Kronecker candidates examined per factor degree before giving up.
const KRONECKER_BUDGET: u64 = 400_000;

/// p = unit · ∏ factor^mult, factors primitive in ℤ[n] with positive leading coefficient,
/// sorted by (degree, coefficients).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rational,
    pub factors: Vec<(IntPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> RatPoly {
        let mut acc = RatPoly::constant(self.unit.clone());
        for (f, m) in &self.factors {
            acc = &acc * &f.to_rat().pow(*m);
        }
        acc
    }
}

/// b = scale · left · right with monic left/right of equal degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub scale: Rational,
    pub left: RatPoly,
    pub right: RatPoly,
}

impl Split {
    pub fn reconstruct(&self) -> RatPoly {
        &(&self.left * &self.right) * &RatPoly::constant(self.scale.clone())
    }
}

/// Rational roots with multiplicity, ascending.
pub fn rational_roots(p: &IntPoly) -> Vec<(Rational, u32)> {
    assert!(!p.is_zero(), "rational_roots of the zero polynomial");
    let mut out = Vec::new();
    let zeros = p.coeffs().iter().take_while(|c| **c == 0).count();
    if zeros > 0 {
        out.push((Rational::new(), zeros as u32));
    }
    let mut q = IntPoly::new(p.coeffs()[zeros..].iter().cloned()).primitive();
    if q.degree().finite().unwrap_or(0) == 0 {
        return out;
    }
    let c0 = q.coeff(0);
    let lead = q.lead();
    let num_divs = divisors(&c0).expect("constant term factorization");
    let den_divs = divisors(&lead).expect("leading coefficient factorization");
    let mut cands: Vec<Rational> = Vec::new();
    for d in &num_divs {
        for e in &den_divs {
            for s in [1i32, -1] {
                let r = Rational::from((Integer::from(d * s), e.clone()));
                if !cands.contains(&r) {
                    cands.push(r);
                }
            }
        }
    }
    cands.sort();
    for x in cands {
        let lin = IntPoly::new([Integer::from(-x.numer()), x.denom().clone()]);
        let mut mult = 0;
        while let Some(next) = q.div_exact(&lin) {
            q = next;
            mult += 1;
        }
        if mult > 0 {
            out.push((x, mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Yun's square-free decomposition of a nonzero polynomial: monic parts with multiplicity.
fn squarefree_parts(f: &RatPoly) -> Vec<(RatPoly, u32)> {
    let f = f.monic();
    let mut out = Vec::new();
    if f.degree().finite().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).unwrap().0;
    let mut c = df.div_rem(&a0).unwrap().0;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().finite().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        if a.degree().finite().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_rem(&a).unwrap().0;
        c = d.div_rem(&a).unwrap().0;
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

fn lagrange(points: &[i64], values: &[Integer]) -> RatPoly {
    // Newton divided differences, then expand.
    let k = points.len();
    let mut coef: Vec<Rational> = values.iter().map(Rational::from).collect();
    for j in 1..k {
        for i in (j..k).rev() {
            let num = Rational::from(&coef[i] - &coef[i - 1]);
            coef[i] = num / (points[i] - points[i - j]);
        }
    }
    let mut acc = RatPoly::constant(coef[k - 1].clone());
    for i in (0..k - 1).rev() {
        acc = &(&acc * &RatPoly::new([-points[i], 1])) + &RatPoly::constant(coef[i].clone());
    }
    acc
}

/// A factor of degree exactly `k` of the primitive, rational-root-free `f`, if any.
fn kronecker_factor(f: &IntPoly, k: usize) -> Result<Option<IntPoly>, PolyError> {
    let mut pts: Vec<(i64, Integer, Vec<Integer>)> = Vec::new();
    for x in -8i64..=8 {
        let v = f.eval_i64(x);
        let divs = divisors(&v).ok_or(PolyError::Undecidable)?;
        pts.push((x, v, divs));
    }
    pts.sort_by_key(|p| p.2.len());
    pts.truncate(k + 1);
    let total: u64 = pts.iter().map(|p| 2 * p.2.len() as u64).product::<u64>() / 2;
    if total > KRONECKER_BUDGET {
        return Err(PolyError::Undecidable);
    }
    let xs: Vec<i64> = pts.iter().map(|p| p.0).collect();
    let choices: Vec<Vec<Integer>> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut c: Vec<Integer> = p.2.clone();
            if i > 0 {
                c.extend(p.2.iter().map(|d| Integer::from(-d)));
            }
            c
        })
        .collect();
    let lead = f.lead();
    let mut idx = vec![0usize; k + 1];
    loop {
        let vals: Vec<Integer> = idx.iter().enumerate().map(|(i, &j)| choices[i][j].clone()).collect();
        let cand = lagrange(&xs, &vals);
        if cand.degree().finite() == Some(k) && cand.is_integral() {
            let ci = cand.to_int().unwrap().primitive();
            if lead.is_divisible(&ci.lead()) && f.div_exact(&ci).is_some() {
                return Ok(Some(ci));
            }
        }
        let mut pos = 0;
        loop {
            if pos > k {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn split_squarefree(f: IntPoly, out: &mut Vec<IntPoly>) -> Result<(), PolyError> {
    let deg = f.degree().finite().unwrap_or(0);
    if deg == 0 {
        return Ok(());
    }
    if deg == 1 {
        out.push(f.primitive());
        return Ok(());
    }
    let roots = rational_roots(&f);
    if !roots.is_empty() {
        let mut rest = f.clone();
        for (x, m) in roots {
            let lin = IntPoly::new([Integer::from(-x.numer()), x.denom().clone()]);
            for _ in 0..m {
                rest = rest.div_exact(&lin).expect("verified root");
                out.push(lin.clone());
            }
        }
        return split_squarefree(rest.primitive(), out);
    }
    if deg <= 3 {
        out.push(f.primitive());
        return Ok(());
    }
    for k in 2..=deg / 2 {
        if let Some(g) = kronecker_factor(&f, k)? {
            let h = f.div_exact(&g).expect("verified factor");
            split_squarefree(g, out)?;
            return split_squarefree(h.primitive(), out);
        }
    }
    out.push(f.primitive());
    Ok(())
}

fn cmp_coeffs<T: Ord>(a: &[T], b: &[T]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter()))
}

/// Complete factorization over ℚ, or `Undecidable` when a factor search exceeds its budget.
pub fn factor_over_q(p: &IntPoly) -> Result<Factorization, PolyError> {
    assert!(!p.is_zero(), "factorization of the zero polynomial");
    let mut factors: Vec<(IntPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_parts(&p.to_rat()) {
        let mut pieces = Vec::new();
        split_squarefree(part.primitive_int(), &mut pieces)?;
        for piece in pieces {
            match factors.iter_mut().find(|(f, _)| *f == piece) {
                Some(entry) => entry.1 += mult,
                None => factors.push((piece, mult)),
            }
        }
    }
    factors.sort_by(|a, b| cmp_coeffs(a.0.coeffs(), b.0.coeffs()));
    let mut prod = RatPoly::one();
    for (f, m) in &factors {
        prod = &prod * &f.to_rat().pow(*m);
    }
    let unit = Rational::from(p.lead()) / prod.lead();
    Ok(Factorization { unit, factors })
}

/// Splits `b` into scale · left · right with monic factors of equal degree, if its
/// factorization over ℚ allows it. Odd or zero degree gives `None`. Among admissible
/// splits, the left factor with the lexicographically smallest coefficient sequence
/// (low to high) is returned.
pub fn equal_degree_split(b: &IntPoly) -> Result<Option<Split>, PolyError> {
    let d = match b.degree().finite() {
        Some(d) if d >= 2 && d % 2 == 0 => d,
        _ => return Ok(None),
    };
    let fac = factor_over_q(b)?;
    let monics: Vec<(RatPoly, usize, u32)> = fac
        .factors
        .iter()
        .map(|(f, m)| (f.to_rat().monic(), f.degree().finite().unwrap(), *m))
        .collect();
    let mut counts = vec![0u32; monics.len()];
    let mut best: Option<RatPoly> = None;
    loop {
        let deg: usize = counts.iter().zip(&monics).map(|(c, f)| *c as usize * f.1).sum();
        if deg == d / 2 {
            let mut left = RatPoly::one();
            for (c, f) in counts.iter().zip(&monics) {
                left = &left * &f.0.pow(*c);
            }
            let better = match &best {
                None => true,
                Some(cur) => left.coeffs().iter().cmp(cur.coeffs().iter()) == Ordering::Less,
            };
            if better {
                best = Some(left);
            }
        }
        let mut pos = 0;
        loop {
            if pos == counts.len() {
                let Some(left) = best else { return Ok(None) };
                let monic_b = b.to_rat().monic();
                let right = monic_b.div_rem(&left)?.0;
                return Ok(Some(Split { scale: Rational::from(b.lead()), left, right }));
            }
            counts[pos] += 1;
            if counts[pos] <= monics[pos].2 {
                break;
            }
            counts[pos] = 0;
            pos += 1;
        }
    }
}
