use hypleaf_core::homology::{
    homology_basis, induced_action_in, respects_boundaries, smith_rank, torelli_order,
};
use hypleaf_core::linalg::IntMatrix;
use hypleaf_core::origami::{all_transitive, lift_automorphism};
use hypleaf_core::{IntMatrix2, Origami, Perm, Token};
use proptest::prelude::*;

/// A unimodular matrix and its inverse, built from elementary row operations.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> (IntMatrix, IntMatrix) {
    let mut p = IntMatrix::identity(n);
    let mut q = IntMatrix::identity(n);
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        // P <- E P, Q <- Q E^-1 with E = I + c e_ij.
        for col in 0..n {
            p[(i, col)] += c * p[(j, col)];
        }
        for row in 0..n {
            q[(row, j)] -= c * q[(row, i)];
        }
    }
    assert_eq!(p.checked_mul(&q).unwrap(), IntMatrix::identity(n));
    (p, q)
}

fn standard_j(g: usize) -> IntMatrix {
    let mut j = IntMatrix::zeros(2 * g, 2 * g);
    for i in 0..g {
        j[(2 * i, 2 * i + 1)] = 1;
        j[(2 * i + 1, 2 * i)] = -1;
    }
    j
}

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

#[test]
fn rank_matches_genus_and_smith_form() {
    for d in 1..=4 {
        for o in all_transitive(d) {
            let b = homology_basis(&o).unwrap();
            let (rank, torsion) = smith_rank(&o);
            assert_eq!(b.rank, 2 * o.genus() as usize);
            assert_eq!(rank, b.rank);
            assert!(torsion.is_empty());
            for t in Token::ALL {
                assert_eq!(homology_basis(&o.act(t)).unwrap().rank, b.rank);
            }
        }
    }
}

#[test]
fn lifted_actions_are_symplectic_and_fix_only_projection_kernel() {
    let matrices = [
        IntMatrix2::CAT,
        IntMatrix2::new(1, 1, 1, 2),
        IntMatrix2::new(3, 2, 1, 1),
    ];
    let mut lifts = 0;
    for d in 1..=4 {
        for o in all_transitive(d) {
            let basis = homology_basis(&o).unwrap();
            for m in &matrices {
                let Some(w) = lift_automorphism(m, &o).unwrap().into_witness() else {
                    continue;
                };
                lifts += 1;
                let a = induced_action_in(&w, &basis).unwrap();
                assert!(a.symplectic);
                assert!(respects_boundaries(&w, &basis).unwrap());
                assert!(a.fixed_in_projection_kernel);
                assert!(a.k <= basis.rank - 2);
                assert_eq!(a.b1, a.k + 1);
            }
        }
    }
    assert!(lifts > 50);
}

#[test]
fn torelli_order_is_basis_independent() {
    let o = Origami::wollmilchsau();
    let basis = homology_basis(&o).unwrap();
    let w = lift_automorphism(&IntMatrix2::CAT, &o)
        .unwrap()
        .into_witness()
        .unwrap();
    let a = induced_action_in(&w, &basis).unwrap();
    let cases = [
        (a.matrix.clone(), basis.intersection_form.clone()),
        (IntMatrix::identity(6), standard_j(3)),
        (
            IntMatrix::from_rows(vec![vec![2, 1], vec![1, 1]]).unwrap(),
            standard_j(1),
        ),
    ];
    let mut state = 12345u64;
    for (m, j) in cases {
        let k = torelli_order(&m, &j).unwrap().k;
        for _ in 0..20 {
            let ops: Vec<(usize, usize, i64)> = (0..8)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                    let x = state >> 20;
                    (
                        (x % 7) as usize,
                        ((x >> 8) % 7) as usize,
                        ((x >> 16) % 5) as i64 - 2,
                    )
                })
                .collect();
            let (p, q) = unimodular(m.nrows(), &ops);
            let m2 = q.checked_mul(&m).unwrap().checked_mul(&p).unwrap();
            let j2 = p
                .transpose()
                .checked_mul(&j)
                .unwrap()
                .checked_mul(&p)
                .unwrap();
            let t = torelli_order(&m2, &j2).unwrap();
            assert_eq!(t.k, k);
            assert!(t.symplectic);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coordinates_invert_chain_of(o in origami(7), seed in prop::collection::vec(-3i64..=3, 16), faces in prop::collection::vec(-2i64..=2, 8)) {
        let b = homology_basis(&o).unwrap();
        let coords: Vec<i64> = seed.iter().take(b.rank).cloned().chain(std::iter::repeat(0)).take(b.rank).collect();
        let mut chain = b.chain_of(&coords);
        for (i, c) in faces.iter().take(o.degree()).enumerate() {
            for (x, f) in chain.iter_mut().zip(o.face_boundary(i)) {
                *x += c * f;
            }
        }
        prop_assert_eq!(b.coordinates(&chain).unwrap(), coords);
    }

    #[test]
    fn intersection_vanishes_on_boundaries(o in origami(7)) {
        let b = homology_basis(&o).unwrap();
        for z in &b.cycles {
            for i in 0..o.degree() {
                let f = o.face_boundary(i);
                prop_assert_eq!(b.intersection(z, &f), 0);
                prop_assert_eq!(b.intersection(&f, z), 0);
            }
        }
    }

    #[test]
    fn lifts_on_larger_surfaces(o in origami(8)) {
        let basis = homology_basis(&o).unwrap();
        for m in [IntMatrix2::CAT, IntMatrix2::new(1, 1, 1, 2)] {
            if let Some(w) = lift_automorphism(&m, &o).unwrap().into_witness() {
                let a = induced_action_in(&w, &basis).unwrap();
                prop_assert!(a.symplectic);
                prop_assert!(a.fixed_in_projection_kernel);
                prop_assert!(a.k + 2 <= basis.rank);
            }
        }
    }
}
