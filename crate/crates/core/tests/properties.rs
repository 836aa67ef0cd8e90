use proptest::prelude::*;

use wavelab::circle_filters::LaurentPoly;
use wavelab::geometry::{arcsine_moment, branch_average, ChebyshevRule, Poly};
use wavelab::{CylinderFn, IfsSpec, Word, C64};

fn spec_and_values(max_depth: usize) -> impl Strategy<Value = (Vec<f64>, usize, Vec<(f64, f64)>)> {
    (2usize..=3, 0..=max_depth).prop_flat_map(|(n, d)| {
        let cells = n.pow(d as u32);
        (
            prop::collection::vec(0.1f64..1.0, n),
            Just(d),
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), cells),
        )
    })
}

fn build(raw: &[f64], depth: usize, vals: &[(f64, f64)]) -> (IfsSpec, CylinderFn) {
    let total: f64 = raw.iter().sum();
    let spec = IfsSpec::with_weights(raw.iter().map(|w| w / total).collect()).unwrap();
    let values = vals.iter().map(|&(re, im)| C64::new(re, im)).collect();
    let f = CylinderFn::from_values(&spec, depth, values).unwrap();
    (spec, f)
}

proptest! {
    #[test]
    fn word_index_round_trips(n in 2usize..=5, len in 0usize..=6, seed in any::<u64>()) {
        let cells = n.pow(len as u32);
        let index = (seed % cells as u64) as usize;
        let w = Word::from_index(n, len, index);
        prop_assert_eq!(w.len(), len);
        prop_assert!(w.symbols().iter().all(|&s| (1..=n).contains(&s)));
        prop_assert_eq!(w.index(n), index);
    }

    #[test]
    fn adjoint_inverts_composition((raw, d, vals) in spec_and_values(3)) {
        let (_, f) = build(&raw, d, &vals);
        let back = f.compose_sigma().unwrap().adjoint_sigma();
        prop_assert!(back.sup_distance(&f).unwrap() < 1e-13);
    }

    #[test]
    fn lift_preserves_integral((raw, d, vals) in spec_and_values(3), extra in 0usize..=2) {
        let (_, f) = build(&raw, d, &vals);
        let lifted = f.lift(d + extra).unwrap();
        prop_assert!((lifted.integrate() - f.integrate()).norm() < 1e-13);
        prop_assert!(lifted.restrict_mean(d).unwrap().sup_distance(&f).unwrap() < 1e-13);
    }

    #[test]
    fn conditional_expectation_is_a_projection((raw, d, vals) in spec_and_values(4)) {
        let (_, f) = build(&raw, d, &vals);
        let e = f.conditional_expectation().unwrap();
        prop_assert!(e.conditional_expectation().unwrap().sup_distance(&e).unwrap() < 1e-13);
        prop_assert!((e.integrate() - f.integrate()).norm() < 1e-13);
    }

    #[test]
    fn laurent_product_evaluates_pointwise(
        a in prop::collection::vec(-1.0f64..1.0, 1..6),
        b in prop::collection::vec(-1.0f64..1.0, 1..6),
        lo in -3i64..3,
        theta in 0.0f64..std::f64::consts::TAU,
    ) {
        let p = LaurentPoly::from_real(lo, &a);
        let q = LaurentPoly::from_real(-lo, &b);
        let z = C64::from_polar(1.0, theta);
        prop_assert!((p.mul(&q).eval(z) - p.eval(z) * q.eval(z)).norm() < 1e-12);
        prop_assert!((p.conj_reflect().eval(z) - p.eval(z).conj()).norm() < 1e-12);
    }

    #[test]
    fn branch_average_preserves_arcsine_mean(c in prop::collection::vec(-1.0f64..1.0, 1..8)) {
        let f = Poly(c);
        let rule = ChebyshevRule::new(32).unwrap();
        let lhs = rule.integrate(|x| branch_average(&f).eval(x));
        let rhs: f64 = f.0.iter().enumerate().map(|(k, c)| c * arcsine_moment(k)).sum();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }
}
