//! Polynomial continued fractions a(0) + b(1)/(a(1) + b(2)/(a(2) + …)).

mod growth;
mod limit;
mod table;

pub use growth::{q_growth_check, GrowthCheck};
pub use limit::{enclose, limit_estimate, Interval};
pub use table::{convergents, determinant_check, ConvergentTable};

use crate::poly::{Degree, IntPoly, RatPoly};
use rug::float::Round;
use rug::{Float, Integer};
use std::fmt;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PcfError {
    #[error("partial quotient polynomials must be nonzero")]
    ZeroPolynomial,
    #[error("convergent sequence collapsed at depth {0} (q_n = q_(n-1) = 0)")]
    DegenerateAtDepth(usize),
    #[error("x^2 = Ax + B has complex roots (A^2 + 4B < 0)")]
    ComplexRoots,
    #[error("roots of x^2 = Ax + B have equal modulus")]
    EqualModulus,
    #[error("convergence is not established for this PCF ({0:?})")]
    NotConvergent(Convergence),
    #[error("error-term ratio {0:.4} is not below 1; tail estimate unreliable")]
    TailEstimateUnreliable(f64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pcf {
    pub a: IntPoly,
    pub b: IntPoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum PcfKind {
    /// deg b > 2 deg a
    UnbalancedHigh,
    /// deg b = 2 deg a
    Balanced,
    /// deg b < 2 deg a
    UnbalancedLow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Convergence {
    Converges,
    MayDiverge,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct PcfClass {
    pub kind: PcfKind,
    pub verdict: Convergence,
}

impl Pcf {
    pub fn new(a: IntPoly, b: IntPoly) -> Result<Pcf, PcfError> {
        if a.is_zero() || b.is_zero() {
            return Err(PcfError::ZeroPolynomial);
        }
        Ok(Pcf { a, b })
    }

    /// Shorthand for literal coefficient lists (low to high). Panics on zero input.
    pub fn from_coeffs(a: &[i64], b: &[i64]) -> Pcf {
        Pcf::new(IntPoly::new(a.iter().copied()), IntPoly::new(b.iter().copied())).expect("nonzero polynomials")
    }

    /// Leading coefficient of a.
    pub fn lead_a(&self) -> Integer {
        self.a.lead()
    }

    /// Leading coefficient of b.
    pub fn lead_b(&self) -> Integer {
        self.b.lead()
    }

    pub fn deg_a(&self) -> usize {
        self.a.degree().finite().expect("nonzero a")
    }

    pub fn deg_b(&self) -> usize {
        self.b.degree().finite().expect("nonzero b")
    }

    pub fn classify(&self) -> PcfClass {
        classify(self)
    }
}

impl fmt::Display for Pcf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PCF[{}, {}]", self.a, self.b)
    }
}

impl serde::Serialize for Pcf {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Pcf", 2)?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("b", &self.b)?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for Pcf {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            a: IntPoly,
            b: IntPoly,
        }
        let raw = Raw::deserialize(d)?;
        Pcf::new(raw.a, raw.b).map_err(serde::de::Error::custom)
    }
}

/// Type by degree ratio and the convergence verdict known for that type.
pub fn classify(pcf: &Pcf) -> PcfClass {
    let (da, db) = (pcf.a.degree(), pcf.b.degree());
    let (Degree::Finite(da), Degree::Finite(db)) = (da, db) else {
        unreachable!("Pcf invariants guarantee nonzero polynomials")
    };
    let big_a = pcf.lead_a();
    let big_b = pcf.lead_b();
    let (kind, verdict) = if db > 2 * da {
        (PcfKind::UnbalancedHigh, if big_b > 0 { Convergence::Converges } else { Convergence::Unknown })
    } else if db == 2 * da {
        // compare 4B with −A²
        let lhs = Integer::from(4 * &big_b);
        let rhs = -Integer::from(big_a.square_ref());
        let v = match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => Convergence::Converges,
            std::cmp::Ordering::Less => Convergence::MayDiverge,
            std::cmp::Ordering::Equal => Convergence::Unknown,
        };
        (PcfKind::Balanced, v)
    } else {
        (PcfKind::UnbalancedLow, Convergence::Converges)
    };
    PcfClass { kind, verdict }
}

/// The root of x² = A·x + B with the larger modulus, at `prec` bits.
pub fn alpha(pcf: &Pcf, prec: u32) -> Result<Float, PcfError> {
    alpha_from(&pcf.lead_a(), &pcf.lead_b(), prec)
}

pub fn alpha_from(big_a: &Integer, big_b: &Integer, prec: u32) -> Result<Float, PcfError> {
    let disc = Integer::from(big_a.square_ref()) + Integer::from(4 * big_b);
    if disc < 0 {
        return Err(PcfError::ComplexRoots);
    }
    if disc == 0 || *big_a == 0 {
        return Err(PcfError::EqualModulus);
    }
    let root = Float::with_val(prec + 16, &disc).sqrt();
    let half = |x: Float| Float::with_val_round(prec, x / 2u32, Round::Nearest).0;
    if *big_a > 0 {
        Ok(half(root + big_a))
    } else {
        Ok(half(-root + big_a))
    }
}

/// Depth used when none is given: super-exponential growth makes memory binding for
/// UnbalancedHigh.
pub fn default_depth(kind: PcfKind) -> usize {
    match kind {
        PcfKind::UnbalancedHigh => 200,
        PcfKind::Balanced | PcfKind::UnbalancedLow => 1000,
    }
}

/// Rational polynomial pair helper used by transforms and search.
pub fn to_rat_pair(pcf: &Pcf) -> (RatPoly, RatPoly) {
    (pcf.a.to_rat(), pcf.b.to_rat())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        let c = classify(&Pcf::from_coeffs(&[1, 2], &[0, 0, 1]));
        assert_eq!(c, PcfClass { kind: PcfKind::Balanced, verdict: Convergence::Converges });
        let c = classify(&Pcf::from_coeffs(&[2, 4], &[1]));
        assert_eq!(c, PcfClass { kind: PcfKind::UnbalancedLow, verdict: Convergence::Converges });
        let c = classify(&Pcf::from_coeffs(&[2], &[1, -4, 4]));
        assert_eq!(c, PcfClass { kind: PcfKind::UnbalancedHigh, verdict: Convergence::Converges });
        let c = classify(&Pcf::from_coeffs(&[2], &[1, -4, -4]));
        assert_eq!(c.verdict, Convergence::Unknown);
        // B = −A²/4 exactly, and below it
        assert_eq!(classify(&Pcf::from_coeffs(&[0, 2], &[0, 0, -1])).verdict, Convergence::Unknown);
        assert_eq!(classify(&Pcf::from_coeffs(&[0, 2], &[0, 0, -2])).verdict, Convergence::MayDiverge);
        assert_eq!(classify(&Pcf::from_coeffs(&[1], &[1])).kind, PcfKind::Balanced);
    }

    #[test]
    fn alpha_examples() {
        let apery = Pcf::from_coeffs(&[5, 27, 51, 34], &[0, 0, 0, 0, 0, 0, -1]);
        let al = alpha(&apery, 200).unwrap();
        let expect = Float::with_val(200, 2u32).sqrt() * 12u32 + 17u32;
        assert!(Float::with_val(200, &al - &expect).abs() < Float::with_val(200, 1e-55));
        let al = alpha_from(&Integer::from(6), &Integer::from(-1), 100).unwrap();
        assert!((al.to_f64() - 5.828_427_124_746_19).abs() < 1e-14);
        let phi = alpha_from(&Integer::from(1), &Integer::from(1), 100).unwrap();
        assert!((phi.to_f64() - 1.618033988749895).abs() < 1e-15);
        let neg = alpha_from(&Integer::from(-3), &Integer::from(1), 64).unwrap();
        assert!(neg.to_f64() < -3.0);
        assert_eq!(alpha_from(&Integer::from(1), &Integer::from(-1), 64), Err(PcfError::ComplexRoots));
        assert_eq!(alpha_from(&Integer::from(0), &Integer::from(4), 64), Err(PcfError::EqualModulus));
        assert_eq!(alpha_from(&Integer::from(2), &Integer::from(-1), 64), Err(PcfError::EqualModulus));
    }

    #[test]
    fn serde_roundtrip() {
        let p = Pcf::from_coeffs(&[5, 27, 51, 34], &[0, 0, 0, 0, 0, 0, -1]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"a":"[5, 27, 51, 34]","b":"[0, 0, 0, 0, 0, 0, -1]"}"#);
        let back: Pcf = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(Pcf::new(IntPoly::zero(), IntPoly::constant(1)).is_err());
    }
}
