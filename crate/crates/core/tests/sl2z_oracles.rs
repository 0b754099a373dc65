use std::collections::BTreeSet;

use hypleaf_core::sl2z::{classify, decompose_st, periodic_points, word_product, TorusPoint};
use hypleaf_core::{IntMatrix2, Token, TraceClass};
use num_rational::Ratio;
use proptest::prelude::*;

/// Every point with `A^n x = x` on the torus has denominator dividing `det(A^n - I)`.
fn brute_force_periodic(m: &IntMatrix2, n: u32) -> BTreeSet<TorusPoint> {
    let p = m.pow(n).unwrap();
    let det = ((p.a - 1) * (p.d - 1) - p.b * p.c).abs();
    assert!(det > 0);
    let mut out = BTreeSet::new();
    for i in 0..det {
        for j in 0..det {
            let x = (p.a * i + p.b * j - i).rem_euclid(det);
            let y = (p.c * i + p.d * j - j).rem_euclid(det);
            if x == 0 && y == 0 {
                out.insert(TorusPoint::new(
                    Ratio::new(i as i128, det as i128),
                    Ratio::new(j as i128, det as i128),
                ));
            }
        }
    }
    out
}

fn token() -> impl Strategy<Value = Token> {
    prop::sample::select(Token::ALL.to_vec())
}

/// Hyperbolic SL(2,Z) matrices with small entries.
fn hyperbolic() -> impl Strategy<Value = IntMatrix2> {
    (-6i64..=6, -6i64..=6, -6i64..=6).prop_filter_map(
        "not in SL(2,Z) or not hyperbolic",
        |(a, b, c)| {
            if a == 0 || (1 + b * c) % a != 0 {
                return None;
            }
            let m = IntMatrix2::new(a, b, c, (1 + b * c) / a);
            (m.trace().abs() > 2).then_some(m)
        },
    )
}

#[test]
fn cat_map_points_of_period_two() {
    let pts = periodic_points(&IntMatrix2::CAT, 2).unwrap();
    assert_eq!(pts.count, 5);
    let got: BTreeSet<_> = pts.points.into_iter().collect();
    assert_eq!(got, brute_force_periodic(&IntMatrix2::CAT, 2));
}

#[test]
fn small_hyperbolic_matrices_match_brute_force() {
    for m in [
        IntMatrix2::CAT,
        IntMatrix2::new(3, 2, 1, 1),
        IntMatrix2::new(1, 1, 1, 2),
        IntMatrix2::new(-3, 1, -1, 0),
        IntMatrix2::new(4, 1, 3, 1),
    ] {
        for n in 1..=3 {
            let p = m.pow(n).unwrap();
            if ((p.a - 1) * (p.d - 1) - p.b * p.c).abs() > 300 {
                continue;
            }
            let pts = periodic_points(&m, n).unwrap();
            let got: BTreeSet<_> = pts.points.iter().cloned().collect();
            assert_eq!(got, brute_force_periodic(&m, n), "{m} n={n}");
            assert_eq!(pts.count as usize, got.len());
        }
    }
}

#[test]
fn elliptic_orders() {
    for (m, order) in [
        (IntMatrix2::new(0, -1, 1, 0), 4),
        (IntMatrix2::new(0, -1, 1, 1), 6),
        (IntMatrix2::new(-1, -1, 1, 0), 3),
        (IntMatrix2::NEG_IDENTITY, 2),
        (IntMatrix2::IDENTITY, 1),
    ] {
        assert_eq!(classify(&m).unwrap(), TraceClass::Periodic { order });
    }
}

proptest! {
    #[test]
    fn classification_is_consistent(word in prop::collection::vec(token(), 0..12)) {
        let m = word_product(&word);
        match classify(&m).unwrap() {
            TraceClass::Periodic { order } => {
                prop_assert_eq!(m.pow(order).unwrap(), IntMatrix2::IDENTITY);
                for k in 1..order {
                    prop_assert_ne!(m.pow(k).unwrap(), IntMatrix2::IDENTITY);
                }
            }
            TraceClass::Parabolic { shear, sign, conjugator } => {
                prop_assert_eq!(m.trace().abs(), 2);
                prop_assert_eq!(conjugator.det(), 1);
                let s = if sign < 0 { m.neg() } else { m };
                let rhs = conjugator
                    .checked_mul(&IntMatrix2::new(1, shear, 0, 1)).unwrap()
                    .checked_mul(&conjugator.sl2_inverse()).unwrap();
                prop_assert_eq!(s, rhs);
            }
            TraceClass::Anosov(data) => {
                let t = m.trace().abs() as f64;
                let l = data.lambda.to_f64();
                prop_assert!(l > 1.0);
                prop_assert!((l * l - t * l + 1.0).abs() < 1e-6 * l * l);
            }
        }
    }

    #[test]
    fn periodic_point_count_is_lefschetz(m in hyperbolic(), n in 1u32..3) {
        let p = m.pow(n).unwrap();
        let det = ((p.a - 1) * (p.d - 1) - p.b * p.c).abs();
        prop_assume!(det <= 200);
        let pts = periodic_points(&m, n).unwrap();
        prop_assert_eq!(pts.count as i64, det);
        let got: BTreeSet<_> = pts.points.into_iter().collect();
        prop_assert_eq!(got, brute_force_periodic(&m, n));
    }

    #[test]
    fn decomposition_round_trips(word in prop::collection::vec(token(), 0..16)) {
        let m = word_product(&word);
        prop_assert_eq!(word_product(&decompose_st(&m).unwrap()), m);
    }
}
