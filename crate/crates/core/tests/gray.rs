mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::{f3, f5, hand_expand, power_table, random_chain, sign_model};
use graydeform::exactlinalg::{Field, Scalar};
use graydeform::examples::{group_model, group_model_unchecked, GroupModelSpec};
use graydeform::gray::{coarsest, compare_nestings, finest, pad, pad_with, tensor_power, validate_gray, GraySemigroup, PaddedCell};
use graydeform::twocat::Pseudofunctor;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn h_label(name: &str) -> usize {
    name.trim_start_matches('h').split('@').next().unwrap().parse().unwrap()
}

fn reported(g: &GraySemigroup, axiom: &str, slots: [usize; 4]) -> BTreeSet<[usize; 4]> {
    validate_gray(g)
        .unwrap()
        .violations
        .iter()
        .filter(|v| v.axiom == axiom)
        .map(|v| slots.map(|i| h_label(&v.witness[i])))
        .collect()
}

fn spec_on_h(field: Field, c: Vec<Vec<Scalar>>) -> GroupModelSpec {
    let n = c.len();
    GroupModelSpec::cyclic(field, 1, n, move |a, b| c[a][b].clone())
}

#[test]
fn bicharacter_models_pass_the_hand_expansion_and_the_validator() {
    let cases = [
        (f3(), power_table(f3(), 2, -1)),
        (f5(), power_table(f5(), 4, 2)),
        (Field::Rational, power_table(Field::Rational, 2, -1)),
        (f5(), power_table(f5(), 3, 1)),
    ];
    for (field, c) in cases {
        let oracle = hand_expand(&c);
        assert!(oracle.composition_failures.is_empty() && oracle.gray_failures.is_empty());
        let g = group_model(&spec_on_h(field, c)).unwrap();
        let report = validate_gray(&g).unwrap();
        assert!(report.is_valid(), "{field}: {:?}", report.failed_axioms());
    }
    let g = group_model(&GroupModelSpec::sign(f3(), 2)).unwrap();
    assert!(validate_gray(&g).unwrap().is_valid());
}

#[test]
fn a_non_bicharacter_fails_exactly_where_the_hand_expansion_fails() {
    let field = f5();
    let mut c = power_table(field, 3, 1);
    c[1][1] = field.from_i64(2);
    let spec = spec_on_h(field, c.clone());
    assert!(group_model(&spec).is_err());
    let oracle = hand_expand(&c);
    assert!(!oracle.composition_failures.is_empty());
    let g = group_model_unchecked(&spec).unwrap();
    // Witness slots (f″, g″, f′, g′, f, h) ↦ (g″, g′, f′, f).
    assert_eq!(reported(&g, "A⊗̂2 composition", [1, 3, 2, 4]), oracle.composition_failures);
    // Witness slots (f′, g′, k′, f, h, k) ↦ (g′, k′, f, h).
    assert_eq!(reported(&g, "Gray equation", [1, 2, 3, 4]), oracle.gray_failures);
    let w = validate_gray(&g).unwrap().violations.into_iter().find(|v| v.axiom == "A⊗̂2 composition").unwrap();
    assert_eq!(w.witness.len(), 6);
}

#[test]
fn the_sign_model_is_cubical() {
    let field = f3();
    let g = sign_model(field);
    assert!(validate_gray(&g).unwrap().is_valid());
    let c = g.base();
    for (f1, g1, f, h) in g.composable_pairs() {
        let t = g.tensorator(f1, g1, f, h);
        let (a, b) = (h_label(&c.cell_name(g1)), h_label(&c.cell_name(f)));
        let expected = if a * b == 1 { -field.one() } else { field.one() };
        assert_eq!(t.coeffs, vec![expected.clone()]);
        if c.is_identity(g1) || c.is_identity(f) {
            assert_eq!(expected, field.one());
            assert_eq!(t, c.id2(t.src));
        }
    }
}

#[test]
fn nested_tensor_powers_agree() {
    for g in [sign_model(f3()), sign_model(Field::Rational), Arc::new(group_model(&GroupModelSpec::untwisted(f3(), 2, 3)).unwrap())] {
        for n in 1..=3 {
            assert!(compare_nestings(&g, n).unwrap() > 0);
        }
        let t3 = tensor_power(&g, 3).unwrap();
        assert_eq!(t3.arity(), 3);
    }
}

#[test]
fn padding_a_whiskered_structure_cell_appends_the_outer_one() {
    let g = sign_model(f3());
    let t = tensor_power(&g, 2).unwrap();
    let (c, d) = (t.source(), t.target());
    let mut checked = 0;
    for tup in c.composable_tuples(3) {
        let (h, gg, f) = (tup[0], tup[1], tup[2]);
        let tau = d.whisker_left(t.map_cell(h), &t.fhat(gg, f)).unwrap();
        let chain = [PaddedCell { tuple: tup.clone(), src: finest(3), dst: vec![1, 2], cell: tau.clone() }];
        let expected = d.vcomp(&t.fhat(h, c.compose(gg, f).unwrap()), &tau).unwrap();
        assert_eq!(pad(&t, &chain).unwrap(), expected);
        checked += 1;
    }
    assert_eq!(checked, c.composable_tuples(3).len());
}

#[test]
fn gaps_in_a_chain_are_rejected() {
    let g = sign_model(f3());
    let t = tensor_power(&g, 2).unwrap();
    let tup = t.source().composable_tuples(2)[5].clone();
    let wrong = t.target().id2(t.map_cell(tup[0]));
    let chain = [PaddedCell { tuple: tup, src: finest(2), dst: coarsest(2), cell: wrong }];
    assert!(pad(&t, &chain).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn padding_recipes_agree(seed in any::<u64>(), n in 1usize..=4, links in 1usize..=3, arity in 2usize..=3) {
        let g = sign_model(f5());
        let t = tensor_power(&g, arity).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chain = random_chain(&t, &mut rng, n, links);
        let mut r1 = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let mut r2 = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let a = pad_with(&t, &chain, &mut |k| r1.gen_range(0..k.max(1))).unwrap();
        let b = pad_with(&t, &chain, &mut |k| r2.gen_range(0..k.max(1))).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a, pad(&t, &chain).unwrap());
    }
}
