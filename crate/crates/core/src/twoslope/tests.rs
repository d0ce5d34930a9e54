use proptest::prelude::*;

use super::*;
use crate::config::Config;
use crate::dynamics::orbit_segments;
use crate::map::{Aiet, DEFAULT_PIECE_GUARD as GUARD};
use crate::numbers::Scalar;

fn q(n: i64, d: i64) -> Scalar {
    Scalar::from_ratio(n, d)
}

fn s2() -> Scalar {
    Scalar::sqrt_of(2)
}

fn rot() -> Aiet {
    Aiet::rotation(&(s2() - q(1, 1))).unwrap()
}

fn h0() -> Aiet {
    let spec = JumpSpec { breaks: vec![q(0, 1), q(1, 4)], jumps: vec![q(1, 3), q(3, 1)] };
    pl_from_jumps(&spec, &Normalization::FixZero).unwrap()
}

fn b(l1: (i64, i64), l2: (i64, i64)) -> Aiet {
    Aiet::two_slope_map(&q(l1.0, l1.1), &q(l2.0, l2.1)).unwrap()
}

/// Slope jump from one-sided derivatives, independent of `sigma_at`.
fn jump(f: &Aiet, x: &Scalar) -> Scalar {
    let s = f.eval_sided(x);
    &s.d_plus / &s.d_minus
}

fn ln_rho(l1: &Scalar, l2: &Scalar) -> f64 {
    let (a, b) = (l1.to_f64().ln(), l2.to_f64().ln());
    a / (a - b)
}

#[test]
fn jump_spec_examples() {
    let spec = JumpSpec { breaks: vec![q(0, 1), q(1, 2)], jumps: vec![q(1, 2), q(2, 1)] };
    let h = pl_from_jumps(&spec, &Normalization::FixZero).unwrap();
    assert_eq!(h.slopes(), vec![q(2, 3), q(4, 3)]);
    assert_eq!(h.eval(&q(0, 1)), q(0, 1));
    assert_eq!(jump(&h, &q(0, 1)), q(1, 2));
    assert_eq!(jump(&h, &q(1, 2)), q(2, 1));

    let id = pl_from_jumps(&JumpSpec { breaks: vec![q(0, 1)], jumps: vec![q(1, 1)] }, &Normalization::FixZero);
    assert!(id.unwrap().is_identity());

    let bad = JumpSpec { breaks: vec![q(0, 1), q(1, 3)], jumps: vec![q(1, 1), q(2, 1)] };
    assert_eq!(pl_from_jumps(&bad, &Normalization::FixZero), Err(TwoSlopeError::JumpProduct(q(2, 1))));

    let h = pl_from_jumps(&spec, &Normalization::FixPoint(q(1, 3))).unwrap();
    assert!(h.eval(&q(1, 3)).is_zero());
    assert!(h.is_pl_homeo());
}

#[test]
fn jump_product_examples() {
    let cfg = Config::default();
    assert!(global_jump_product(&rot(), &cfg).unwrap().is_one());
    let f = rot().conjugate(&h0()).unwrap();
    assert!(global_jump_product(&f, &cfg).unwrap().is_one());
    // B(2,1/3): y* ↦ 0, σ_{B²}(y*) = 6 · 1/6 and σ_{B²}(0) = 6
    let two = b((2, 1), (1, 3));
    assert_eq!(global_jump_product(&two, &cfg).unwrap(), q(6, 1));
}

#[test]
fn conjugated_rotation_comes_back() {
    let f = rot().conjugate(&h0()).unwrap();
    assert!(!f.is_iet());
    let m = minakawa_conjugate(&f, &Config::default()).unwrap();
    assert!(m.jump_product.is_one());
    assert_eq!(m.b, rot());
    assert_eq!(f.conjugate(&m.h).unwrap(), m.b);
}

#[test]
fn two_slope_maps_are_fixed() {
    let two = b((2, 1), (1, 3));
    let m = minakawa_conjugate(&two, &Config::default()).unwrap();
    assert!(m.h.is_identity());
    assert_eq!(m.b, two);
    let r = Aiet::rotation(&q(1, 3)).unwrap();
    assert_eq!(minakawa_conjugate(&r, &Config::default()).unwrap().b, r);
}

#[test]
fn conjugated_two_slope_map_is_reduced() {
    let two = b((2, 1), (1, 3));
    let f = two.conjugate(&h0()).unwrap();
    let m = minakawa_conjugate(&f, &Config::default()).unwrap();
    assert!(!m.jump_product.is_one());
    let (l1, l2, a) = two_slope_parameters(&m.b).unwrap();
    assert_ne!(l1, l2);
    for x in m.b.breakpoints().bp1() {
        assert!(x.is_zero() || x == a);
    }
    assert!(m.h.is_rational() && m.b.is_rational());
    assert!(m.extra_break.as_ref().unwrap().is_rational());
    // rotation number is a conjugacy invariant
    assert!((ln_rho(&l1, &l2) - 2f64.ln() / 6f64.ln()).abs() < 1e-12);
}

#[test]
fn jumps_cancel_on_segments() {
    let two = b((3, 1), (1, 2));
    let f = two.conjugate(&h0()).unwrap();
    let cfg = Config::default();
    let m = minakawa_conjugate(&f, &cfg).unwrap();
    let c = m.extra_break.clone().unwrap();
    let fc = f.inverse().eval(&c);
    let data = orbit_segments(&f, cfg.horizon_for(f.bp_count()), GUARD).unwrap();
    for seg in &data.segments {
        for x in seg.points(&f) {
            if x == c || x == fc {
                continue;
            }
            assert!(jump(&m.b, &m.h.eval(&x)).is_one(), "at {x}");
        }
    }
}

#[test]
fn rotation_number_examples() {
    let cfg = Config::default();
    let r = rotation_number(&Aiet::rotation(&q(1, 3)).unwrap(), 3000, &q(0, 1), &cfg).unwrap();
    assert!((r.rho - 1.0 / 3.0).abs() <= 1.0 / 3000.0);
    assert!(r.exact);
    let r = rotation_number(&b((2, 1), (1, 2)), 1000, &q(0, 1), &cfg).unwrap();
    assert_eq!(r.rho, 0.5);
    let r = rotation_number(&b((2, 1), (1, 3)), 100_000, &q(0, 1), &cfg).unwrap();
    assert!((r.rho - 2f64.ln() / 6f64.ln()).abs() < 1e-3, "{}", r.rho);
    assert!(rotation_number(&Aiet::iet_from_lengths(&[2, 3, 1], &[q(1, 3), q(1, 3), q(1, 3)]).unwrap(), 10, &q(0, 1), &cfg).is_ok());
    let three = Aiet::iet_from_lengths(&[3, 2, 1], &[q(1, 3), q(1, 3), q(1, 3)]).unwrap();
    assert!(rotation_number(&three, 10, &q(0, 1), &cfg).is_err());
}

#[test]
fn dyadic_mode_keeps_estimates() {
    let cfg = Config { exact_bits: 512, ..Config::default() };
    let r = rotation_number(&b((2, 1), (1, 3)), 50_000, &q(0, 1), &cfg).unwrap();
    assert!(!r.exact);
    assert!((r.rho - 2f64.ln() / 6f64.ln()).abs() < 2e-3);
}

#[test]
fn boshernitzan_examples() {
    for (l1, l2) in [((2, 1), (1, 3)), ((3, 1), (1, 2)), ((1, 2), (5, 4))] {
        let rep = verify_boshernitzan(&b(l1, l2), 1e-9, 1000).unwrap();
        assert!(rep.max_deviation < 1e-9);
        assert!(rep.rho > 0.0 && rep.rho < 1.0);
    }
    assert!(matches!(verify_boshernitzan(&rot(), 1e-9, 10), Err(TwoSlopeError::Precondition(_))));
}

#[test]
fn visit_examples() {
    let cfg = Config::default();
    let v = birkhoff_visits(&b((2, 1), (1, 2)), &q(0, 1), 10, &cfg).unwrap();
    assert_eq!((v.n1, v.n2), (5, 5));
    let v = birkhoff_visits(&b((2, 1), (1, 2)), &q(0, 1), 0, &cfg).unwrap();
    assert_eq!((v.n1, v.n2), (0, 0));
    let v = birkhoff_visits(&b((2, 1), (1, 3)), &q(0, 1), 100_000, &cfg).unwrap();
    assert!(v.exact);
    assert!((v.n2 as f64 / 1e5 - 2f64.ln() / 6f64.ln()).abs() < 1e-2);
}

#[test]
fn derivative_matches_visit_counts() {
    let two = b((2, 1), (1, 3));
    let cfg = Config::default();
    for n in 1..12u64 {
        let x = q(1, 7);
        let v = birkhoff_visits(&two, &x, n, &cfg).unwrap();
        let direct = two.power(n as i64).unwrap().right_slope_at(&x).clone();
        let predicted = q(2, 1).pow(v.n1 as u32) * q(1, 3).pow(v.n2 as u32);
        assert_eq!(direct, predicted, "n = {n}");
    }
}

#[test]
fn drift_examples() {
    let cfg = Config::default();
    let rho = 2f64.ln() / 6f64.ln();
    let rep = exponent_drift(&b((2, 1), (1, 3)), &[2, 3], &q(0, 1), 100_000, &cfg).unwrap();
    let c2 = rep.coordinates[0].value.clone();
    let c3 = rep.coordinates[1].value.clone();
    assert!((c3.to_f64() + rho).abs() < 1e-2);
    assert!((c2.to_f64() - (1.0 - rho)).abs() < 1e-2);
    assert!((rep.coordinates[1].limit + rho).abs() < 1e-12);

    let rep = exponent_drift(&Aiet::rotation(&q(1, 5)).unwrap(), &[2, 3], &q(0, 1), 100, &cfg).unwrap();
    assert!(rep.coordinates.iter().all(|c| c.value.is_zero()));
}

#[test]
fn analysis_of_two_slope_map() {
    let cfg = Config { rotation_n: 100_000, ..Config::default() };
    let a = analyze_two_slope(&b((2, 1), (1, 3)), &cfg).unwrap();
    assert!(a.rho_gap() < 1e-3);
    assert!((a.omega - 6.0).abs() < 1e-12);
    let a = analyze_two_slope(&rot(), &cfg).unwrap();
    assert!(a.rho_gap() < 1e-3);
}

fn jump_spec_strategy() -> impl Strategy<Value = JumpSpec> {
    (1usize..=4)
        .prop_flat_map(|p| {
            (
                proptest::collection::btree_set(1i64..60, p),
                proptest::collection::vec((1i64..=5, 1i64..=5), p),
            )
        })
        .prop_map(|(cuts, ratios)| {
            let mut breaks = vec![q(0, 1)];
            breaks.extend(cuts.iter().map(|c| q(*c, 60)));
            let mut jumps: Vec<Scalar> = ratios.iter().map(|(a, b)| q(*a, *b)).collect();
            let prod = jumps.iter().fold(q(1, 1), |acc, s| acc * s);
            jumps.insert(0, prod.recip().unwrap());
            JumpSpec { breaks, jumps }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn prescribed_jumps_are_realized(spec in jump_spec_strategy(), c in 0i64..60) {
        let h = pl_from_jumps(&spec, &Normalization::FixPoint(q(c, 60))).unwrap();
        prop_assert!(h.is_pl_homeo());
        prop_assert!(h.eval(&q(c, 60)).is_zero());
        for (x, s) in spec.breaks.iter().zip(&spec.jumps) {
            prop_assert_eq!(&jump(&h, x), s);
        }
    }

    #[test]
    fn trivial_product_iff_rotation(spec in jump_spec_strategy(), slopes in prop_oneof![Just(None), Just(Some(((2, 1), (1, 3)))), Just(Some(((3, 2), (1, 2))))]) {
        let h = pl_from_jumps(&spec, &Normalization::FixZero).unwrap();
        let base = match slopes {
            None => rot(),
            Some((l1, l2)) => b(l1, l2),
        };
        let f = base.conjugate(&h).unwrap();
        let m = minakawa_conjugate(&f, &Config::default()).unwrap();
        prop_assert_eq!(m.jump_product.is_one(), m.b.is_iet());
        prop_assert_eq!(slopes.is_none(), m.b.is_iet());
        prop_assert_eq!(f.conjugate(&m.h).unwrap(), m.b.clone());
    }
}
