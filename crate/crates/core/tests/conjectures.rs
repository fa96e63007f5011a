//! Sampled grids for the factorial-reduction conjectures. A counterexample fails the test
//! and is appended to `conjecture_counterexamples.jsonl` in the test scratch directory.

use pcfkit::family_search::{confirm_fr, conjecture13_member, integerized, match_family, splittable, FamilyKind};
use pcfkit::gcd::{FrThresholds, FrVerdict};
use pcfkit::pcf::Pcf;
use pcfkit::poly::{IntPoly, RatPoly};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rug::Rational;
use std::io::Write;

const DEPTH: usize = 1000;
const B_VALUES: [i64; 8] = [1, -1, 2, -2, 4, -4, 8, 12];

fn config(cases: u32, seed: u64) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, rng_seed: RngSeed::Fixed(seed), ..ProptestConfig::default() }
}

fn dump(kind: &str, pcf: &Pcf, detail: &str) {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("conjecture_counterexamples.jsonl");
    let line = serde_json::json!({ "conjecture": kind, "pcf": pcf, "detail": detail });
    if let Ok(mut f) = std::fs::OpenOptions::new().create(true).append(true).open(&path) {
        let _ = writeln!(f, "{line}");
    }
    eprintln!("counterexample written to {}", path.display());
}

/// FR verdict with escalation; degenerate tables yield None.
fn verdict(pcf: &Pcf) -> Option<FrVerdict> {
    confirm_fr(pcf, DEPTH, &FrThresholds::default()).map(|e| e.fr_verdict)
}

fn expect_fr(kind: &str, pcf: &Pcf) -> Result<(), TestCaseError> {
    match verdict(pcf) {
        Some(FrVerdict::FR) => Ok(()),
        None => Err(TestCaseError::reject("degenerate table")),
        Some(v) => {
            dump(kind, pcf, &format!("{v:?}"));
            Err(TestCaseError::fail(format!("{kind}: {pcf} is {v:?}")))
        }
    }
}

/// b = B(n − x1)(n − x2) with x1, x2 ≤ 0, so b_n ≠ 0 for n ≥ 1.
fn quadratic_b() -> impl Strategy<Value = (i64, i64, i64)> {
    (prop::sample::select(B_VALUES.to_vec()), -5i64..=0, -5i64..=0)
}

fn b_of(big_b: i64, x1: i64, x2: i64) -> IntPoly {
    IntPoly::new([big_b * x1 * x2, -big_b * (x1 + x2), big_b])
}

/// Monic r with roots in −4..=0, of degree d.
fn monic(d: usize) -> impl Strategy<Value = RatPoly> {
    prop::collection::vec(-4i64..=0, d).prop_map(|roots| {
        roots.iter().fold(RatPoly::one(), |acc, &x| &acc * &RatPoly::new([-x, 1]))
    })
}

proptest! {
    #![proptest_config(config(48, 11))]

    /// a = (B/m − m)·n + k with m | B.
    #[test]
    fn conjecture14_linear_family((big_b, x1, x2) in quadratic_b(), m in -10i64..=10, k in -10i64..=10) {
        prop_assume!(m != 0 && m * m != big_b.abs() && big_b % m == 0);
        let lead = big_b / m - m;
        let pcf = Pcf::new(IntPoly::new([k, lead]), b_of(big_b, x1, x2)).unwrap();
        expect_fr("1.4 linear", &pcf)?;
    }

    /// a = k(2n − x1 − x2 + 1), k ∈ ½ℤ, integerized when k is a half-integer.
    #[test]
    fn conjecture14_symmetric_family((big_b, x1, x2) in quadratic_b(), k2 in -20i64..=20) {
        prop_assume!(k2 != 0);
        let k = Rational::from((k2, 2));
        let a = RatPoly::new([Rational::from(1 - x1 - x2), Rational::from(2)]).scale(&k);
        let cf = pcfkit::transforms::RationalCf {
            a: pcfkit::transforms::RatFn::poly(a),
            b: pcfkit::transforms::RatFn::poly(b_of(big_b, x1, x2).to_rat()),
        };
        let (pcf, _) = integerized(&cf).unwrap();
        expect_fr("1.4 symmetric", &pcf)?;
    }
}

proptest! {
    #![proptest_config(config(32, 13))]

    /// b = B·r·s, a = (B/m)·r(n+1) − m·s(n) for monic r, s of equal degree.
    #[test]
    fn conjecture13_family(
        big_b in prop::sample::select(B_VALUES.to_vec()),
        m in -10i64..=10,
        (r, s) in (1usize..=2).prop_flat_map(|d| (monic(d), monic(d))),
    ) {
        let (big_b, m) = (Rational::from(big_b), Rational::from(m));
        prop_assume!(m != 0 && Rational::from(m.square_ref()) != Rational::from(big_b.abs_ref()));
        let cf = conjecture13_member(&r, &s, &big_b, &m).unwrap();
        let (pcf, _) = integerized(&cf).unwrap();
        prop_assume!(pcf.a.degree().finite() == r.degree().finite());
        expect_fr("1.3", &pcf)?;
    }

    /// Non-splittable b: no a has factorial reduction.
    #[test]
    fn conjecture11_nonsplittable_has_no_fr(
        b in prop::collection::vec(-6i64..=6, 3).prop_map(IntPoly::new),
        a in prop::collection::vec(-10i64..=10, 2).prop_map(IntPoly::new),
    ) {
        prop_assume!(b.degree().finite() == Some(2) && a.degree().finite() == Some(1));
        prop_assume!(!splittable(&b));
        prop_assume!((1..=DEPTH as i64).all(|n| b.eval_i64(n) != 0));
        let pcf = Pcf::new(a, b).unwrap();
        if verdict(&pcf) == Some(FrVerdict::FR) {
            dump("1.1", &pcf, "FR with non-splittable b");
            return Err(TestCaseError::fail(format!("{pcf} has FR")));
        }
    }

    /// Splittable quadratic b: every linear a with FR belongs to one of the two families.
    #[test]
    fn conjecture14_fr_only_in_families(
        (big_b, x1, x2) in quadratic_b(),
        a in prop::collection::vec(-10i64..=10, 2).prop_map(IntPoly::new),
    ) {
        prop_assume!(a.degree().finite() == Some(1));
        let pcf = Pcf::new(a.clone(), b_of(big_b, x1, x2)).unwrap();
        if verdict(&pcf) == Some(FrVerdict::FR) {
            let fam = match_family(&a, &pcf.b).map(|f| f.kind);
            if !matches!(fam, Some(FamilyKind::Conjecture14Linear | FamilyKind::Conjecture14Symmetric | FamilyKind::PythagoreanLinear)) {
                dump("1.4 only-if", &pcf, &format!("{fam:?}"));
                return Err(TestCaseError::fail(format!("{pcf} has FR outside the families")));
            }
        }
    }
}
