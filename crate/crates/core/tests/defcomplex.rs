mod common;

use std::sync::Arc;

use common::{f3, group_tuple_count, sign_model};
use graydeform::defcomplex::{assemble_complex, cohomology, is_modification, ComplexSelection, DefComplex, SummandKind};
use graydeform::exactlinalg::{rank, Field, SparseVec};
use graydeform::examples::trivial_model;
use graydeform::pfcomplex::CochainSpace;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sign(field: Field) -> DefComplex {
    DefComplex::new(sign_model(field))
}

fn random_in(sp: &CochainSpace, rng: &mut ChaCha8Rng) -> SparseVec {
    let elems = sp.field().elements().unwrap();
    let coords = SparseVec::from_pairs(sp.dim(), (0..sp.dim()).map(|i| (i, elems[rng.gen_range(0..elems.len())].clone())));
    sp.embed(&coords).unwrap()
}

#[test]
fn special_tensorator_space_matches_the_identity_slot_count() {
    let dc = sign(f3());
    assert_eq!(dc.bicomplex_space(1, 1, true).unwrap().dim(), group_tuple_count(2, 2, 2, 2, true));
    assert_eq!(dc.bicomplex_space(1, 1, false).unwrap().dim(), group_tuple_count(2, 2, 2, 2, false));
    assert_eq!(dc.bicomplex_space(0, 2, true).unwrap().dim(), group_tuple_count(2, 2, 3, 1, true));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn horizontal_and_vertical_differentials_square_to_zero_and_commute(seed in any::<u64>(), m in 0usize..=1, n in 1usize..=2, special in any::<bool>()) {
        prop_assume!(m + n <= 2);
        let dc = sign(f3());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_in(&dc.bicomplex_space(m, n, special).unwrap(), &mut rng);
        let h = dc.delta_h(m, n, special).unwrap().mul_vec(&v).unwrap();
        let vv = dc.delta_v(m, n, special).unwrap().mul_vec(&v).unwrap();
        prop_assert!(dc.delta_h(m + 1, n, special).unwrap().mul_vec(&h).unwrap().is_zero());
        prop_assert!(dc.delta_v(m, n + 1, special).unwrap().mul_vec(&vv).unwrap().is_zero());
        let hv = dc.delta_h(m, n + 1, special).unwrap().mul_vec(&vv).unwrap();
        let vh = dc.delta_v(m + 1, n, special).unwrap().mul_vec(&h).unwrap();
        prop_assert_eq!(hv, vh);
    }
}

fn vanishes_on_identity_slots(sp: &CochainSpace, v: &SparseVec) -> bool {
    (0..sp.n_tuples()).filter(|&i| sp.is_excluded(i)).all(|i| sp.range(i).all(|j| v.get(j).is_none()))
}

#[test]
fn special_cochains_stay_special() {
    let dc = sign(f3());
    for (m, n) in [(0, 1), (1, 1), (0, 2), (2, 1), (1, 2)] {
        let from = dc.bicomplex_space(m, n, true).unwrap();
        let (th, tv) = (dc.bicomplex_space(m + 1, n, true).unwrap(), dc.bicomplex_space(m, n + 1, true).unwrap());
        for col in from.basis().columns() {
            assert!(vanishes_on_identity_slots(&th, &dc.delta_h(m, n, true).unwrap().mul_vec(&col).unwrap()), "δ_h at ({m},{n})");
            assert!(vanishes_on_identity_slots(&tv, &dc.delta_v(m, n, true).unwrap().mul_vec(&col).unwrap()), "δ_v at ({m},{n})");
        }
    }
}

#[test]
fn one_object_pentagonator_differential_alternates() {
    let dc = DefComplex::new(Arc::new(trivial_model(Field::Rational)));
    for k in 0..=4 {
        let d = dc.delta_pent(k).unwrap();
        assert_eq!((d.rows, d.cols), (1, 1));
        let expected = if k % 2 == 0 { Field::Rational.one() } else { Field::Rational.zero() };
        assert_eq!(d.get(0, 0), expected, "degree {k}");
    }
}

#[test]
fn pentagonator_differential_squares_to_zero_over_the_rationals() {
    let dc = sign(Field::Rational);
    for k in 0..=3 {
        let prod = dc.delta_pent(k + 1).unwrap().mul(&dc.delta_pent(k).unwrap()).unwrap();
        assert!(prod.is_zero(), "degree {k}");
    }
}

#[test]
fn phi_is_a_chain_map_killed_by_the_horizontal_differential() {
    let dc = sign(f3());
    for k in 1..=3 {
        let lhs = dc.phi(k + 1).unwrap().mul(&dc.delta_pent(k).unwrap()).unwrap();
        let rhs = dc.delta_v(0, k, false).unwrap().mul(&dc.phi(k).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "degree {k}");
        assert!(dc.delta_h(0, k, false).unwrap().mul(&dc.phi(k).unwrap()).unwrap().is_zero());
    }
}

#[test]
fn restricted_pentagonator_cochains_are_exactly_the_modifications() {
    let dc = sign(f3());
    let k = 1;
    let t = dc.tensor(k + 1).unwrap();
    let space = dc.pent_space(k).unwrap();
    let cx = assemble_complex(&dc, ComplexSelection::PentRestricted, k..=k).unwrap();
    let basis = cx.layer(k).unwrap().basis.clone().unwrap();
    for col in basis.columns() {
        assert!(is_modification(&t, &space, &col).unwrap());
    }
    let field = f3();
    let elems = field.elements().unwrap();
    let n = space.free_dim();
    let mut count = 0;
    for mut i in 0..3usize.pow(n as u32) {
        let v = SparseVec::from_pairs(
            n,
            (0..n).map(|j| {
                let x = elems[i % 3].clone();
                i /= 3;
                (j, x)
            }),
        );
        if is_modification(&t, &space, &v).unwrap() {
            count += 1;
        }
    }
    assert_eq!(count, 3usize.pow(basis.cols as u32));
}

#[test]
fn the_unit_layout_follows_the_modified_first_column() {
    let dc = sign(f3());
    let cx = assemble_complex(&dc, ComplexSelection::Unit, 1..=2).unwrap();
    let kinds = |q: usize| cx.layer(q).unwrap().summands.iter().map(|s| s.kind).collect::<Vec<_>>();
    use SummandKind::*;
    assert_eq!(kinds(1), vec![Bicomplex { m: 0, n: 1 }, Pent { k: 2 }]);
    assert_eq!(kinds(3), vec![Bicomplex { m: 0, n: 3 }, Pent { k: 4 }, Bicomplex { m: 1, n: 2 }, Bicomplex { m: 2, n: 1 }]);
    let prod = cx.delta_free(2).unwrap().mul(&cx.coboundary(1).unwrap()).unwrap();
    assert!(prod.is_zero());
}

#[test]
fn the_one_object_unit_complex_is_its_pentagonator_part() {
    let dc = DefComplex::new(Arc::new(trivial_model(Field::Rational)));
    let cx = assemble_complex(&dc, ComplexSelection::Unit, 1..=3).unwrap();
    // Degree q holds X̃^{q+1}_pent (dimension one) plus special bicomplex
    // summands that vanish because every tuple contains an identity.
    for q in 1..=3 {
        assert_eq!(cx.layer(q).unwrap().dim(), 1, "degree {q}");
    }
    // D_q restricted to the pent line multiplies by ∓[q+1 even].
    let ranks: Vec<usize> = (1..=3).map(|q| rank(&cx.coboundary(q).unwrap())).collect();
    assert_eq!(ranks, vec![1, 0, 1]);
    for q in 1..=3 {
        let expected = 1 - ranks[q - 1] - if q > 1 { ranks[q - 2] } else { 0 };
        assert_eq!(cohomology(&dc, ComplexSelection::Unit, q, false).unwrap().betti, expected, "degree {q}");
    }
}
