use hypleaf_core::origami::{
    all_transitive, find_relabeling, find_relabeling_exhaustive, lift_automorphism, LiftOutcome,
};
use hypleaf_core::sl2z::word_product;
use hypleaf_core::{IntMatrix2, Origami, Perm, Token};
use proptest::prelude::*;

fn perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

fn origami(max_d: usize) -> impl Strategy<Value = Origami> {
    (1..=max_d)
        .prop_flat_map(|d| (perm(d), perm(d)))
        .prop_filter_map("disconnected", |(h, v)| Origami::new(h, v).ok())
}

fn token() -> impl Strategy<Value = Token> {
    prop::sample::select(Token::ALL.to_vec())
}

#[test]
fn sl2z_relations_hold_up_to_relabeling() {
    use Token::{S, T};
    let s4 = [S; 4];
    let st6: Vec<Token> = std::iter::repeat_n([S, T], 6).flatten().collect();
    for d in 1..=5 {
        for o in all_transitive(d) {
            assert_eq!(o.act_word(&s4), o);
            let image = o.act_word(&st6);
            assert_eq!(image.canonical_form(), o.canonical_form());
        }
    }
}

#[test]
fn cat_map_absent_on_a_non_invariant_surface() {
    // Generic three-square surfaces are not fixed by the cat map.
    let mut absent = 0;
    for o in all_transitive(3) {
        match lift_automorphism(&IntMatrix2::CAT, &o).unwrap() {
            LiftOutcome::Absent { exhaustive, word } => {
                assert!(exhaustive);
                let image = o.act_word(&word);
                assert!(find_relabeling_exhaustive(&image, &o).is_none());
                absent += 1;
            }
            LiftOutcome::Witness(w) => assert!(w.verify(&o)),
        }
    }
    assert!(absent > 0);
}

#[test]
fn lifts_replay_exactly() {
    let matrices = [
        IntMatrix2::CAT,
        IntMatrix2::new(1, 1, 1, 2),
        IntMatrix2::new(3, 2, 1, 1),
        IntMatrix2::new(-2, -1, -1, -1),
    ];
    for d in 1..=4 {
        for o in all_transitive(d) {
            for m in &matrices {
                if let LiftOutcome::Witness(w) = lift_automorphism(m, &o).unwrap() {
                    assert_eq!(word_product(&w.word), *m);
                    assert_eq!(o.act_word(&w.word).relabel(&w.relabeling), o);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn genus_and_stratum_are_invariant(o in origami(8), word in prop::collection::vec(token(), 0..=6)) {
        let image = o.act_word(&word);
        prop_assert_eq!(image.genus(), o.genus());
        prop_assert_eq!(image.stratum(), o.stratum());
    }

    #[test]
    fn relabeling_search_finds_conjugates(o in origami(7), seed in any::<u64>()) {
        let d = o.degree();
        let mut images: Vec<usize> = (0..d).collect();
        // Cheap deterministic shuffle.
        let mut s = seed;
        for i in (1..d).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            images.swap(i, (s >> 33) as usize % (i + 1));
        }
        let r = Perm::from_images(images).unwrap();
        let p = o.relabel(&r);
        let found = find_relabeling(&o, &p).unwrap();
        prop_assert_eq!(o.relabel(&found), p.clone());
        prop_assert_eq!(o.canonical_form(), p.canonical_form());
    }

    #[test]
    fn fast_and_exhaustive_searches_agree(a in origami(5), b in origami(5)) {
        prop_assume!(a.degree() == b.degree());
        prop_assert_eq!(find_relabeling(&a, &b).is_some(), find_relabeling_exhaustive(&a, &b).is_some());
        prop_assert_eq!(
            find_relabeling(&a, &b).is_some(),
            a.canonical_form() == b.canonical_form()
        );
    }

    #[test]
    fn genus_is_half_integer_free(o in origami(8)) {
        prop_assert_eq!((o.degree() - o.vertex_count()) % 2, 0);
        prop_assert_eq!(o.stratum().iter().sum::<u32>() as usize, o.degree());
    }
}
