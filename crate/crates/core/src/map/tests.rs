use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::sample::{random_aiet, random_point, Family};

fn q(n: i64, d: i64) -> Scalar {
    Scalar::from_ratio(n, d)
}

fn s2() -> Scalar {
    Scalar::sqrt_of(2)
}

fn piece(l: Scalar, s: Scalar, b: Scalar) -> Piece {
    Piece::new(l, s, b)
}

#[test]
fn construction_examples() {
    let id = Aiet::from_pieces(vec![piece(q(0, 1), q(1, 1), q(0, 1))]).unwrap();
    assert!(id.is_identity());

    let r = Aiet::from_pieces(vec![piece(q(0, 1), q(1, 1), q(1, 3)), piece(q(2, 3), q(1, 1), q(-2, 3))]).unwrap();
    assert_eq!(r, Aiet::rotation(&q(1, 3)).unwrap());

    let merged = Aiet::from_pieces(vec![piece(q(0, 1), q(1, 1), q(0, 1)), piece(q(1, 2), q(1, 1), q(0, 1))]).unwrap();
    assert_eq!(merged.piece_count(), 1);
}

#[test]
fn validation_errors() {
    let overlap = Aiet::from_pieces(vec![piece(q(0, 1), q(1, 1), q(0, 1)), piece(q(1, 2), q(1, 1), q(-1, 2))]);
    assert!(matches!(overlap, Err(MapError::ImageOutOfRange(_)) | Err(MapError::NotBijective(_))));
    let neg = Aiet::from_pieces(vec![piece(q(0, 1), q(-1, 1), q(1, 1))]);
    assert!(matches!(neg, Err(MapError::NonPositiveSlope(0))));
    let not_zero = Aiet::from_pieces(vec![piece(q(1, 4), q(1, 1), q(0, 1))]);
    assert!(matches!(not_zero, Err(MapError::FirstLeftNotZero(_))));
    let mixed = Aiet::from_pieces(vec![
        piece(q(0, 1), q(1, 1), s2() / q(2, 1)),
        piece(Scalar::one() - Scalar::sqrt_of(3) / q(2, 1), q(1, 1), q(0, 1)),
    ]);
    assert!(matches!(mixed, Err(MapError::Number(_))));
}

#[test]
fn rotation_examples() {
    let r = Aiet::rotation(&q(1, 3)).unwrap();
    assert_eq!(r.breakpoints().bp0(), vec![q(0, 1), q(2, 3)]);
    assert!(Aiet::rotation(&q(0, 1)).unwrap().is_identity());
    assert!(Aiet::rotation(&q(1, 1)).is_err());

    let alpha = s2() - q(1, 1);
    let r = Aiet::rotation(&alpha).unwrap();
    let expected = Aiet::rotation(&(s2() * q(2, 1) - q(2, 1))).unwrap();
    assert_eq!(r.power(2).unwrap(), expected);
}

#[test]
fn restricted_rotation_examples() {
    assert_eq!(
        Aiet::restricted_rotation(&q(0, 1), &q(1, 1), &q(1, 3)).unwrap(),
        Aiet::rotation(&q(1, 3)).unwrap()
    );
    let delta = s2() / q(4, 1);
    let f = Aiet::restricted_rotation(&q(0, 1), &q(1, 2), &delta).unwrap();
    assert_eq!(f.breakpoints().bp0(), vec![q(0, 1), q(1, 2) - &delta, q(1, 2)]);

    let swap = Aiet::restricted_rotation(&q(1, 4), &q(3, 4), &q(1, 4)).unwrap();
    assert!(!swap.is_identity());
    assert!(swap.power(2).unwrap().is_identity());
    assert!(Aiet::restricted_rotation(&q(1, 4), &q(3, 4), &q(1, 2)).is_err());
}

#[test]
fn iet_examples() {
    let halves = [q(1, 2), q(1, 2)];
    assert!(Aiet::iet_from_lengths(&[1, 2], &halves).unwrap().is_identity());
    assert_eq!(
        Aiet::iet_from_lengths(&[2, 1], &[q(1, 3), q(2, 3)]).unwrap(),
        Aiet::rotation(&q(2, 3)).unwrap()
    );
    let e = Aiet::iet_from_lengths(&[1, 3, 2], &[q(1, 4), q(1, 4), q(1, 2)]).unwrap();
    assert_eq!(e.eval(&q(0, 1)), q(0, 1));
    assert_eq!(e.eval(&q(1, 4)), q(3, 4));
    assert_eq!(e.eval(&q(1, 2)), q(1, 4));
    assert!(Aiet::iet_from_lengths(&[1, 1], &halves).is_err());
    assert!(Aiet::iet_from_lengths(&[1, 2], &[q(1, 2), q(1, 3)]).is_err());
}

#[test]
fn two_slope_examples() {
    let b = Aiet::two_slope_map(&q(2, 1), &q(1, 2)).unwrap();
    assert_eq!(b.pieces()[0], piece(q(0, 1), q(2, 1), q(1, 3)));
    assert_eq!(b.pieces()[1], piece(q(1, 3), q(1, 2), q(-1, 6)));
    assert_eq!(b.sigma_at(&q(1, 3)), q(1, 4));
    assert_eq!(b.sigma_at(&q(0, 1)), q(4, 1));
    assert_eq!(b.breakpoints().bp1(), vec![q(0, 1), q(1, 3)]);
    assert_eq!(b.slopes(), vec![q(1, 2), q(2, 1)]);

    let b = Aiet::two_slope_map(&q(2, 1), &q(1, 3)).unwrap();
    assert_eq!(b.pieces()[0], piece(q(0, 1), q(2, 1), q(1, 5)));
    assert_eq!(b.pieces()[1], piece(q(2, 5), q(1, 3), q(-2, 15)));
    assert!(b.is_pl_homeo());

    assert!(Aiet::two_slope_map(&q(1, 1), &q(1, 1)).unwrap().is_identity());
    assert!(Aiet::two_slope_map(&q(2, 1), &q(3, 1)).is_err());
}

#[test]
fn sided_examples() {
    let r = Aiet::rotation(&q(1, 3)).unwrap();
    let s = r.eval_sided(&q(2, 3));
    assert_eq!((s.f_plus, s.f_minus, s.delta, s.sigma), (q(0, 1), q(1, 1), q(-1, 1), q(1, 1)));
    assert!(r.delta_at(&q(0, 1)).is_zero());
    let id = Aiet::identity();
    for x in [q(0, 1), q(1, 7), q(1, 2)] {
        let s = id.eval_sided(&x);
        assert!(s.delta.is_zero() && s.sigma.is_one());
    }
}

#[test]
fn algebra_examples() {
    let r14 = Aiet::rotation(&q(1, 4)).unwrap();
    let r12 = Aiet::rotation(&q(1, 2)).unwrap();
    assert_eq!(r14.compose(&r12).unwrap(), Aiet::rotation(&q(3, 4)).unwrap());
    assert!(Aiet::rotation(&q(1, 3)).unwrap().power(3).unwrap().is_identity());
    assert_eq!(r14.power(-1).unwrap(), Aiet::rotation(&q(3, 4)).unwrap());

    let guard = r14.compose_guarded(&r12, 1);
    assert!(matches!(guard, Err(MapError::PieceGuard { .. })));
}

#[test]
fn breakpoint_and_support_examples() {
    let r = Aiet::rotation(&q(1, 3)).unwrap();
    let bd = r.breakpoints();
    assert_eq!(bd.bp1(), vec![q(0, 1)]);
    assert_eq!(r.slopes(), vec![q(1, 1)]);
    assert_eq!(r.support(), vec![(q(0, 1), q(1, 1))]);
    let id = Aiet::identity();
    assert_eq!(id.breakpoints().bp0(), vec![q(0, 1)]);
    assert!(id.support().is_empty());
}

#[test]
fn conjugation_examples() {
    let alpha = s2() - q(1, 1);
    let r = Aiet::rotation(&alpha).unwrap();
    assert_eq!(r.conjugate(&Aiet::identity()).unwrap(), r);
    let beta = q(2, 7);
    assert_eq!(r.conjugate(&Aiet::rotation(&beta).unwrap()).unwrap(), r);
    let e3 = Aiet::iet_from_lengths(&[1, 3, 2], &[q(1, 4), q(1, 4), q(1, 2)]).unwrap();
    assert!(r.conjugate(&e3).unwrap().bp0_count() >= 3);
}

#[test]
fn shape_examples() {
    let r = Aiet::rotation(&q(1, 3)).unwrap();
    let shapes = r.classify_shape();
    assert!(shapes.contains(&Shape::PlHomeo));
    assert!(shapes.contains(&Shape::RestrictedRotation { a: q(0, 1), b: q(1, 1), delta: q(1, 3) }));

    let delta = s2() / q(4, 1);
    let f = Aiet::restricted_rotation(&q(0, 1), &q(1, 2), &delta).unwrap();
    assert!(f
        .classify_shape()
        .contains(&Shape::RestrictedRotation { a: q(0, 1), b: q(1, 2), delta: delta.clone() }));
    assert!(!f.is_pl_homeo());

    let e = Aiet::iet_from_lengths(&[1, 3, 2], &[q(1, 4), q(1, 4), q(1, 2)]).unwrap();
    let shapes = e.classify_shape();
    assert!(shapes.contains(&Shape::Iet));
    assert!(!shapes.contains(&Shape::PlHomeo));
}

#[test]
fn restrict_and_embed_round_trip() {
    let r = Aiet::rotation(&q(2, 5)).unwrap();
    let e = r.embed(&q(1, 4), &q(3, 4)).unwrap();
    assert_eq!(e, Aiet::restricted_rotation(&q(1, 4), &q(3, 4), &q(1, 5)).unwrap());
    assert_eq!(e.restrict(&q(1, 4), &q(3, 4)).unwrap(), r);
    assert!(Aiet::rotation(&q(1, 3)).unwrap().restrict(&q(0, 1), &q(1, 2)).is_err());
}

#[test]
fn text_round_trip() {
    let b = Aiet::two_slope_map(&q(2, 1), &q(1, 3)).unwrap();
    assert_eq!(Aiet::from_text(&b.to_string()).unwrap(), b);
    let err = Aiet::from_text("0 | 1 | 0\n1/2 | 1/0 | 0").unwrap_err();
    assert!(matches!(err, MapError::Parse { line: 2, .. }), "{err:?}");
    let json = serde_json::to_string(&b).unwrap();
    assert_eq!(serde_json::from_str::<Aiet>(&json).unwrap(), b);
}

/// Probe points: every break point, its images, nearby rationals and random
/// samples.
fn probes(f: &Aiet, g: &Aiet, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    let mut pts: Vec<Scalar> = f.lefts().chain(g.lefts()).cloned().collect();
    pts.extend(g.inverse().pieces().iter().map(|p| p.left.clone()));
    let eps = q(1, 1_000_003);
    for p in pts.clone() {
        let up = &p + &eps;
        if up < Scalar::one() {
            pts.push(up);
        }
    }
    for _ in 0..20 {
        pts.push(random_point(rng, 997));
    }
    pts
}

fn subset(a: &[Scalar], b: &[Scalar]) -> bool {
    a.iter().all(|x| b.contains(x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_is_pointwise(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_aiet(&mut rng, 6, 30, Family::General);
        let g = random_aiet(&mut rng, 6, 30, Family::General);
        let fg = f.compose(&g).unwrap();
        for x in probes(&f, &g, &mut rng) {
            prop_assert_eq!(fg.eval(&x), f.eval(&g.eval(&x)));
        }
        prop_assert!(f.compose(&f.inverse()).unwrap().is_identity());
        prop_assert!(f.inverse().compose(&f).unwrap().is_identity());
    }

    #[test]
    fn breakpoint_laws(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_aiet(&mut rng, 6, 30, Family::General);
        let g = random_aiet(&mut rng, 6, 30, Family::General);
        // BP(f⁻¹) = f(BP(f))
        let mut image: Vec<Scalar> = f.lefts().map(|x| f.eval(x)).collect();
        image.sort();
        let inv_bp = f.inverse().breakpoints().bp();
        prop_assert_eq!(inv_bp, image);
        // BP(f∘g) ⊆ BP(g) ∪ g⁻¹(BP(f)), also for BP₀
        let ginv = g.inverse();
        let fg = f.compose(&g).unwrap();
        let mut allowed: Vec<Scalar> = g.breakpoints().bp();
        allowed.extend(f.lefts().map(|y| ginv.eval(y)));
        prop_assert!(subset(&fg.breakpoints().bp(), &allowed));
        let mut allowed0 = g.breakpoints().bp0();
        allowed0.extend(f.breakpoints().bp0().iter().map(|y| ginv.eval(y)));
        prop_assert!(subset(&fg.breakpoints().bp0(), &allowed0));
    }

    #[test]
    fn four_factor_jump_law(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_aiet(&mut rng, 6, 30, Family::General);
        let g = random_aiet(&mut rng, 6, 30, Family::General);
        let fg = f.compose(&g).unwrap();
        for x in probes(&f, &g, &mut rng) {
            let sg = g.eval_sided(&x);
            let num = f.right_slope_at(&sg.f_plus) * &sg.d_plus;
            let den = f.left_slope_at(&sg.f_minus) * &sg.d_minus;
            prop_assert_eq!(fg.sigma_at(&x), num / den);
        }
    }

    #[test]
    fn restricted_rotation_powers_stay_inside(n in 1i64..12, a in 0i64..8, w in 1i64..8) {
        let (a, b) = (q(a, 16), q(a + w, 16).min(q(1, 1)));
        let delta = (&b - &a) * (s2() - q(1, 1)) / q(2, 1);
        let f = Aiet::restricted_rotation(&a, &b, &delta).unwrap();
        let fnn = f.power(n).unwrap();
        prop_assert_eq!(fnn.slopes(), vec![q(1, 1)]);
        for (lo, hi) in fnn.support() {
            prop_assert!(lo >= a && hi <= b);
        }
    }
}
