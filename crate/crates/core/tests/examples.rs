mod common;

use std::sync::Arc;

use common::{f3, f5, yetter_dim};
use graydeform::exactlinalg::Field;
use graydeform::examples::{deloop, group_model, GroupModelSpec, MonoidalCategoryData};
use graydeform::gray::validate_gray;
use graydeform::pfcomplex::pf_cochain_basis;
use graydeform::twocat::{validate_pseudofunctor, TablePseudofunctor};

fn identity_on(m: &MonoidalCategoryData) -> TablePseudofunctor {
    TablePseudofunctor::identity(Arc::new(deloop(m).unwrap()))
}

#[test]
fn delooped_cochains_match_the_monoidal_naturality_count() {
    let cases = [
        MonoidalCategoryData::meet_chain(f3(), 2),
        MonoidalCategoryData::meet_chain(Field::Rational, 1),
        MonoidalCategoryData::graded_dual_numbers(f3()),
        MonoidalCategoryData::graded_dual_numbers(Field::Rational),
        MonoidalCategoryData::trivial(f5()),
    ];
    for m in &cases {
        let id = identity_on(m);
        assert!(validate_pseudofunctor(&id).unwrap().is_valid());
        for n in 0..=3 {
            assert_eq!(pf_cochain_basis(&id, n).unwrap().dim(), yetter_dim(m, n), "{:?} degree {n}", m.object_names);
        }
    }
}

#[test]
fn the_naturality_count_is_not_just_the_endomorphism_count() {
    // On the meet chain 0 < 1 < 2 naturality ties the components together:
    // each End is one-dimensional but the families are constrained.
    let m = MonoidalCategoryData::meet_chain(f3(), 2);
    assert!(yetter_dim(&m, 1) < m.n_objects());
    // The graded dual numbers keep the nilpotent direction in degree one.
    assert_eq!(yetter_dim(&MonoidalCategoryData::graded_dual_numbers(f3()), 1), 4);
}

#[test]
fn a_non_strict_table_is_not_delooped() {
    let mut m = MonoidalCategoryData::meet_chain(f3(), 2);
    m.tensor[0][1] = 2;
    m.tensor[1][0] = 2;
    assert!(deloop(&m).is_err());
    let mut m = MonoidalCategoryData::trivial(f3());
    m.identities[0] = vec![f3().from_i64(2)];
    assert!(deloop(&m).is_err());
}

#[test]
fn group_models_have_the_expected_shape_and_validate() {
    for (g_order, h_order) in [(1, 1), (1, 3), (2, 2), (3, 2)] {
        let g = group_model(&GroupModelSpec::untwisted(f3(), g_order, h_order)).unwrap();
        let c = g.base();
        assert_eq!((c.n_objects(), c.n_cells()), (g_order, g_order * h_order));
        assert!(validate_gray(&g).unwrap().is_valid());
    }
    for field in [f3(), f5(), Field::Rational] {
        assert!(validate_gray(&group_model(&GroupModelSpec::sign(field, 2)).unwrap()).unwrap().is_valid());
    }
}

#[test]
fn a_non_bicharacter_is_rejected_by_the_checked_constructor() {
    let field = f5();
    let spec = GroupModelSpec::cyclic(field, 1, 2, |a, b| if a == 1 && b == 1 { field.from_i64(2) } else { field.one() });
    assert!(spec.validate().is_err());
    assert!(group_model(&spec).is_err());
}
