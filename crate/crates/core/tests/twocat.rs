mod common;

use std::sync::Arc;

use common::{f3, f5, sign_model};
use graydeform::exactlinalg::Field;
use graydeform::examples::{group_model_unchecked, GroupModelSpec};
use graydeform::gray::{tensor_power, validate_gray};
use graydeform::twocat::{product, validate_pseudofunctor, validate_two_category, Tensor3, TablePseudofunctor, TwoCategory, TwoCategoryBuilder};

fn scalar(field: Field, x: i64) -> Tensor3 {
    let mut t = Tensor3::zeros(field, 1, 1, 1);
    t.set(0, 0, 0, field.from_i64(x));
    t
}

/// The underlying 2-category of the group model on `G = H = ℤ/2`, typed in
/// literally: objects `g0, g1`, four loops per object, composition adding
/// the `H`-labels, and a one-dimensional endomorphism space per loop.
fn hand_table(field: Field, vcomp_unit: i64) -> TwoCategory {
    let mut b = TwoCategoryBuilder::new(field);
    b.add_object("g0");
    b.add_object("g1");
    b.add_cell("h0@g0", 0, 0);
    b.add_cell("h1@g0", 0, 0);
    b.add_cell("h0@g1", 1, 1);
    b.add_cell("h1@g1", 1, 1);
    b.set_identity(0, 0);
    b.set_identity(1, 2);
    for (g, f, h) in [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0), (2, 2, 2), (2, 3, 3), (3, 2, 3), (3, 3, 2)] {
        b.set_compose(g, f, h);
    }
    for f in 0..4 {
        b.set_hom_dim(f, f, 1);
        b.set_unit2(f, vec![field.one()]);
        b.set_vcomp(f, f, f, scalar(field, vcomp_unit));
    }
    for (g, f) in [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3)] {
        b.set_hcomp(g, g, f, f, scalar(field, 1));
    }
    b.build().unwrap()
}

#[test]
fn the_group_model_base_matches_a_hand_specified_table() {
    let field = f3();
    let hand = hand_table(field, 1);
    assert!(validate_two_category(&hand).is_valid());
    let g = sign_model(field);
    let c = g.base();
    assert!(validate_two_category(c).is_valid());
    assert_eq!((c.n_objects(), c.n_cells()), (hand.n_objects(), hand.n_cells()));
    let one = [field.one()];
    for f in 0..4 {
        assert_eq!(c.cell_name(f), hand.cell_name(f));
        assert_eq!((c.cell_src(f), c.cell_dst(f)), (hand.cell_src(f), hand.cell_dst(f)));
        for f1 in 0..4 {
            assert_eq!(c.compose(f, f1), hand.compose(f, f1));
            assert_eq!(c.dim2(f, f1), hand.dim2(f, f1));
        }
        assert_eq!(c.vcomp_coeffs(f, f, f, &one, &one), hand.vcomp_coeffs(f, f, f, &one, &one));
        for f1 in 0..4 {
            if hand.compose(f, f1).is_some() {
                assert_eq!(c.hcomp_coeffs(f, f, f1, f1, &one, &one), hand.hcomp_coeffs(f, f, f1, f1, &one, &one));
            }
        }
    }
}

#[test]
fn a_broken_unit_constant_is_reported() {
    let hand = hand_table(f3(), 2);
    let report = validate_two_category(&hand);
    assert!(!report.is_valid());
    assert!(report.violations.iter().all(|v| !v.witness.is_empty()));
}

#[test]
fn the_tensor_on_the_product_is_a_valid_pseudofunctor() {
    let g = sign_model(f3());
    assert!(validate_gray(&g).unwrap().is_valid());
    let t = tensor_power(&g, 2).unwrap();
    let base = g.base().clone();
    let prod = Arc::new(product(&base, &base).unwrap());
    // The product is materialized with the same indexing as the lazy square.
    for f in 0..prod.n_cells() {
        assert_eq!(prod.cell_src(f), t.source_arc().cell_src(f));
        for f1 in 0..prod.n_cells() {
            assert_eq!(prod.compose(f, f1), t.source_arc().compose(f, f1));
            assert_eq!(prod.dim2(f, f1), t.source_arc().dim2(f, f1));
        }
    }
    let table = TablePseudofunctor::from_pseudofunctor(&t, prod, base);
    assert!(validate_pseudofunctor(&table).unwrap().is_valid());
}

#[test]
fn pseudofunctor_and_gray_validation_agree_on_a_broken_tensorator() {
    // c(1,1) = 2 on ℤ/3 over 𝔽₅ is not multiplicative: 2·2 ≠ c(2,1) = 1.
    let field = f5();
    let spec = GroupModelSpec::cyclic(field, 1, 3, |a, b| if a == 1 && b == 1 { field.from_i64(2) } else { field.one() });
    let g = Arc::new(group_model_unchecked(&spec).unwrap());
    assert!(!validate_gray(&g).unwrap().is_valid());
    let t = tensor_power(&g, 2).unwrap();
    let report = validate_pseudofunctor(&t).unwrap();
    assert!(report.has("hexagonal axiom"), "{:?}", report.failed_axioms());
}

#[test]
fn scalar_loops_compose_in_the_field() {
    let field = Field::Rational;
    let hand = hand_table(field, 1);
    let x = [field.from_i64(3)];
    let y = [field.from_i64(-2)];
    assert_eq!(hand.vcomp_coeffs(1, 1, 1, &x, &y), vec![field.from_i64(-6)]);
    assert_eq!(hand.hcomp_coeffs(1, 1, 1, 1, &x, &y), vec![field.from_i64(-6)]);
}
