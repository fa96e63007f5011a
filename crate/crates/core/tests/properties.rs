use pcfkit::cli::corpus::all_pcfs;
use pcfkit::gcd::gcd_series;
use pcfkit::irrationality::{delta_formula, DeltaValue};
use pcfkit::pcf::{convergents, determinant_check, Pcf};
use pcfkit::poly::{parse_poly, IntPoly, RatPoly};
use pcfkit::transforms::{deflate, inflate, inflate_pcf, scaling_check, RatFn, RationalCf};
use proptest::prelude::*;
use rug::Integer;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn int_poly(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-bound..=bound, 1..=max_deg + 1).prop_map(IntPoly::new)
}

/// PCFs whose b has no root at n ≥ 1, so the fraction never terminates.
fn pcf_strategy() -> impl Strategy<Value = Pcf> {
    (int_poly(2, 6), int_poly(4, 6))
        .prop_filter_map("b vanishes at a positive integer", |(a, b)| {
            let p = Pcf::new(a, b).ok()?;
            (1..=600).all(|n| p.b.eval_i64(n) != 0).then_some(p)
        })
}

fn golden() -> Pcf {
    Pcf::from_coeffs(&[1], &[1])
}

fn apery_rational() -> RationalCf {
    let cube = RatPoly::new([1, 3, 3, 1]);
    RationalCf {
        a: RatFn::new(RatPoly::new([5, 27, 51, 34]), cube.clone()).unwrap(),
        b: RatFn::new(RatPoly::new([0, 0, 0, -1]), cube).unwrap(),
    }
}

#[test]
fn determinant_identity_on_the_corpus() {
    let pcfs = all_pcfs().unwrap();
    assert!(pcfs.len() > 60);
    for (name, p) in pcfs {
        let t = convergents(&p, 500).unwrap();
        assert!(determinant_check(&t), "{name}: {p}");
    }
}

#[test]
fn scaling_identities_for_the_named_inflations() {
    let golden_cf = RationalCf::from(&golden());
    let chk = scaling_check(&golden_cf, &RatPoly::new([1, 3]), 200).unwrap();
    assert!(chk.holds() && chk.gcd == Some(true), "{chk:?}");

    let chk = scaling_check(&apery_rational(), &RatPoly::new([1, 3, 3, 1]), 200).unwrap();
    assert!(chk.holds(), "{chk:?}");
    let integral = inflate(&apery_rational(), &RatPoly::new([1, 3, 3, 1])).unwrap().to_pcf().unwrap();
    assert_eq!(integral, Pcf::from_coeffs(&[5, 27, 51, 34], &[0, 0, 0, 0, 0, 0, -1]));
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn determinant_identity(p in pcf_strategy(), depth in 1usize..=300) {
        let t = convergents(&p, depth).unwrap();
        prop_assert!(determinant_check(&t));
    }

    #[test]
    fn gcd2_chain(p in pcf_strategy(), depth in 2usize..=300) {
        let t = convergents(&p, depth).unwrap();
        let s = gcd_series(&t).unwrap();
        for n in 1..=depth {
            let (g, g_prev, g2, g2_prev) = (s.gcd(n), s.gcd(n - 1), s.gcd2(n), s.gcd2(n - 1));
            prop_assert_eq!(g, &Integer::from(t.p(n as i64).gcd_ref(t.q(n as i64))));
            prop_assert_eq!(g2, &Integer::from(g.gcd_ref(g_prev)));
            prop_assert!(g2.is_divisible(g2_prev), "GCD2_{} ∤ GCD2_{}", n - 1, n);
        }
    }

    #[test]
    fn inflation_scaling(depth in 1usize..=200, u in 1i64..=5, v in 1i64..=7) {
        let c = RatPoly::new([v, u]);
        let chk = scaling_check(&RationalCf::from(&golden()), &c, depth).unwrap();
        prop_assert!(chk.holds(), "{:?}", chk);
        prop_assert_eq!(chk.gcd, Some(true));
        let chk = scaling_check(&apery_rational(), &RatPoly::new([1, 3, 3, 1]), depth).unwrap();
        prop_assert!(chk.holds(), "{:?}", chk);
    }

    #[test]
    fn inflation_preserves_values(p in pcf_strategy(), u in 1i64..=4, v in 1i64..=6) {
        let c = RatPoly::new([v, u]);
        let inflated = inflate_pcf(&p, &c).unwrap().to_pcf().unwrap();
        let chk = scaling_check(&RationalCf::from(&p), &c, 60).unwrap();
        prop_assert!(chk.holds(), "{:?}", chk);
        // p'_n/q'_n = c_0·p_n/q_n
        let (t, ti) = (convergents(&p, 40).unwrap(), convergents(&inflated, 40).unwrap());
        for n in 0..=40i64 {
            let lhs = Integer::from(ti.p(n) * t.q(n));
            let rhs = Integer::from(t.p(n) * ti.q(n)) * v;
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn deflate_undoes_inflate(p in pcf_strategy(), u in 1i64..=4, v in 1i64..=6) {
        prop_assume!(Integer::from(u).gcd(&Integer::from(v)) == 1);
        let base = deflate(&p).unwrap().pcf;
        let c = IntPoly::new([v, u]);
        let inflated = inflate_pcf(&base, &c.to_rat()).unwrap().to_pcf().unwrap();
        let d = deflate(&inflated).unwrap();
        prop_assert_eq!(&d.pcf, &base);
        prop_assert_eq!(&d.c, &c);
        prop_assert_eq!(d.limit_scale(), Integer::from(v));
    }

    #[test]
    fn delta_increases_with_lambda(alpha in 1.5f64..60.0, b_frac in 0.01f64..0.99, t in 0.01f64..0.98) {
        // |B| < α² keeps the zero |B|/α inside (0, α)
        let b_abs = b_frac * alpha * alpha;
        let lambda = t * alpha;
        let h = 1e-4 * alpha;
        let d0 = delta_formula(alpha, b_abs, lambda).unwrap();
        let d1 = delta_formula(alpha, b_abs, lambda + h).unwrap();
        match (d0, d1) {
            (DeltaValue::Finite(x), DeltaValue::Finite(y)) => prop_assert!(y > x, "δ({}) = {} ≥ δ({}) = {}", lambda, x, lambda + h, y),
            (_, DeltaValue::Unbounded) => {}
            other => prop_assert!(false, "{:?}", other),
        }
        let zero = delta_formula(alpha, b_abs, b_abs / alpha).unwrap().finite().unwrap();
        prop_assert!(zero.abs() < 1e-9, "δ(|B|/α) = {}", zero);
    }

    #[test]
    fn parser_roundtrip(p in int_poly(6, 50)) {
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p.to_rat());
        prop_assert_eq!(parse_poly(&p.to_list_string()).unwrap(), p.to_rat());
    }
}
