use hypleaf_core::holonomy::{
    circular_distance, max_circular_gap, orbit_density, orbit_points, rotation_number,
    stabilizer_search, verify_commutator_product, AffineMap, CircleGen, Mobius,
    StabilizerStructure,
};
use proptest::prelude::*;

/// Sorted-orbit three-gap oracle: for an irrational rotation the gaps take at
/// most three values, the largest of which is below `3 / n` for the golden-like
/// angle used here.
#[test]
fn irrational_rotation_obeys_three_gap_bound() {
    let alpha = 2f64.sqrt() - 1.0;
    let n = 10_000;
    let pts = orbit_points(&[CircleGen::rotation(alpha)], 0.0, n, 7).unwrap();
    let mut sorted = pts.clone();
    sorted.sort_by(f64::total_cmp);
    let mut gaps: Vec<f64> = sorted.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(sorted[0] + 1.0 - sorted[n - 1]);
    let mut distinct: Vec<f64> = Vec::new();
    for g in gaps {
        if !distinct.iter().any(|&x| (x - g).abs() < 1e-9) {
            distinct.push(g);
        }
    }
    assert!(distinct.len() <= 3);
    let max = distinct.iter().cloned().fold(0.0, f64::max);
    assert!(max < 3.0 / n as f64);
    assert_eq!(max, max_circular_gap(&pts));
}

#[test]
fn max_gap_never_increases_along_an_orbit() {
    let gens = [CircleGen::Doubling, CircleGen::rotation(2f64.sqrt() - 1.0)];
    let pts = orbit_points(&gens, 0.123, 20_000, 3).unwrap();
    let mut prev = 1.0;
    for n in (100..=20_000).step_by(997) {
        let g = max_circular_gap(&pts[..n]);
        assert!(g <= prev);
        prev = g;
    }
}

#[test]
fn orbits_are_reproducible() {
    let gens = [CircleGen::Doubling, CircleGen::rotation(0.3819660112501051)];
    let a = orbit_density(&gens, 0.2, 5000, 0.01, 99).unwrap();
    let b = orbit_density(&gens, 0.2, 5000, 0.01, 99).unwrap();
    assert_eq!(a, b);
    assert!(orbit_density(&[], 0.0, 10, 0.1, 0).is_err());
    assert!(orbit_density(&gens, 0.0, 10, 1.5, 0).is_err());
}

#[test]
fn deliberately_wrong_commutator_is_rejected() {
    let f = Mobius::new(2.0, 0.0, 0.0, 0.5).unwrap();
    let h = Mobius::rotation(0.1);
    let c = verify_commutator_product(&[(f, h)], 0.2);
    assert!(!c.ok);
    // The same pair against its own product passes.
    let p = f.commutator(&h);
    let grid_dev = (0..1024)
        .map(|i| {
            let x = i as f64 / 1024.0;
            circular_distance(
                p.apply(x),
                f.apply(h.apply(f.inverse().apply(h.inverse().apply(x)))),
            )
        })
        .fold(0.0, f64::max);
    assert!(grid_dev < 1e-9);
}

#[test]
fn stabilizer_search_to_length_eight() {
    let gens = [AffineMap { k: 1, b: 0.0 }, AffineMap { k: 0, b: 1.0 }];
    let r = stabilizer_search(&gens, -1.0, 8).unwrap();
    let StabilizerStructure::CyclicEvidence {
        generator,
        fixed_point,
    } = r.structure
    else {
        panic!("expected cyclic evidence");
    };
    assert_eq!(generator.map, AffineMap { k: 1, b: 1.0 });
    assert_eq!(fixed_point, -1.0);
    for w in &r.witnesses {
        assert_eq!(w.word.map.k % generator.map.k, 0);
        assert!(w.residual < 1e-9);
    }
}

fn word_strategy() -> impl Strategy<Value = Vec<AffineMap>> {
    prop::collection::vec(
        (-3i32..=3, -4i32..=4).prop_map(|(k, b)| AffineMap {
            k,
            b: f64::from(b) / 4.0,
        }),
        1..12,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn affine_words_have_power_of_two_linear_part(word in word_strategy()) {
        let composed = word.iter().fold(AffineMap::IDENTITY, |acc, g| g.compose(&acc));
        prop_assert_eq!(composed.k, word.iter().map(|g| g.k).sum::<i32>());
        let x = 0.375;
        let direct = word.iter().fold(x, |y, g| g.apply(y));
        prop_assert!((composed.apply(x) - direct).abs() < 1e-9 * (1.0 + direct.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rotation_number_is_a_conjugacy_invariant(
        angles in prop::collection::vec(0.0f64..1.0, 1..3),
        (a, b, c) in (0.5f64..3.0, -2.0f64..2.0, -2.0f64..2.0),
    ) {
        let n = 2000;
        let p = Mobius::new(a, b, c, (1.0 + b * c) / a).unwrap();
        let word: Vec<CircleGen> = angles.iter().map(|&t| CircleGen::Mobius(Mobius::rotation(t))).collect();
        let conj: Vec<CircleGen> = angles.iter().map(|&t| CircleGen::Mobius(Mobius::rotation(t).conjugate_by(&p))).collect();
        let r1 = rotation_number(&word, n).unwrap();
        let r2 = rotation_number(&conj, n).unwrap();
        prop_assert!(circular_distance(r1.value, r2.value) <= 2.0 / n as f64);
    }
}
