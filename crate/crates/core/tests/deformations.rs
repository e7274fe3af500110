mod common;

use common::{f2, f3, model};
use graydeform::cli::{classify_representatives, linear_algebra_betti};
use graydeform::deformations::{
    apply_witness, brute_force_classes, check_equivalence, check_structural, extend, extend_and_deform, find_equivalence,
    validate_extended, ClassifyMode, DeformationSpaces, EquivalenceWitness, FirstOrderDeformation,
};
use graydeform::defcomplex::DefComplex;
use graydeform::exactlinalg::{Field, SparseVec};
use graydeform::examples::GroupModelSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn setup(spec: &GroupModelSpec) -> (DefComplex, DeformationSpaces) {
    let dc = DefComplex::new(model(spec));
    let sp = DeformationSpaces::new(&dc).unwrap();
    (dc, sp)
}

/// The `i`-th vector of `𝔽₂^n` in binary.
fn f2_vector(n: usize, i: u64) -> SparseVec {
    let field = f2();
    SparseVec::from_pairs(n, (0..n).filter(|&j| i >> j & 1 == 1).map(|j| (j, field.one())))
}

fn random_vector(field: Field, n: usize, rng: &mut ChaCha8Rng) -> SparseVec {
    let elems = field.elements().unwrap();
    SparseVec::from_pairs(n, (0..n).map(|j| (j, elems[rng.gen_range(0..elems.len())].clone())))
}

#[test]
fn no_witness_connects_a_nontrivial_class_to_the_null_deformation() {
    let (dc, sp) = setup(&GroupModelSpec::untwisted(f2(), 1, 2));
    for mode in [ClassifyMode::Unit, ClassifyMode::Tens] {
        let (betti, reps) = classify_representatives(&dc, &sp, mode).unwrap();
        assert_eq!(betti, 1, "{mode}");
        let zero = sp.zero_deformation();
        let (np, no) = (sp.psi.dim(), sp.omega.free_dim());
        assert!(np + no <= 20);
        for i in 0..1u64 << (np + no) {
            let psi1 = sp.psi.embed(&f2_vector(np, i & ((1 << np) - 1))).unwrap();
            let w = EquivalenceWitness { psi1, omega1: f2_vector(no, i >> np) };
            assert!(!check_equivalence(&sp, &zero, &reps[0], &w).unwrap().is_valid(), "{mode}: witness {i} connects");
        }
        assert!(find_equivalence(&dc, &sp, &zero, &reps[0]).unwrap().is_none());
    }
}

#[test]
fn applied_witnesses_are_found_again() {
    let (dc, sp) = setup(&GroupModelSpec::untwisted(f3(), 1, 3));
    let (_, reps) = classify_representatives(&dc, &sp, ClassifyMode::Unit).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in std::iter::once(sp.zero_deformation()).chain(reps.iter().cloned()) {
        for _ in 0..4 {
            let w = EquivalenceWitness {
                psi1: sp.psi.embed(&random_vector(f3(), sp.psi.dim(), &mut rng)).unwrap(),
                omega1: random_vector(f3(), sp.omega.free_dim(), &mut rng),
            };
            let moved = apply_witness(&sp, &d, &w).unwrap();
            assert!(check_structural(&sp, &moved).unwrap().is_valid());
            assert!(check_equivalence(&sp, &d, &moved, &w).unwrap().is_valid());
            let found = find_equivalence(&dc, &sp, &d, &moved).unwrap().expect("equivalent");
            assert!(check_equivalence(&sp, &d, &moved, &found).unwrap().is_valid());
        }
    }
    let zero = sp.zero_deformation();
    for r in &reps {
        assert!(find_equivalence(&dc, &sp, &zero, r).unwrap().is_none());
    }
}

#[test]
fn exhaustive_classification_matches_the_betti_number_on_small_models() {
    for spec in [GroupModelSpec::untwisted(f2(), 1, 2), GroupModelSpec::trivial(f2())] {
        let (dc, sp) = setup(&spec);
        for mode in [ClassifyMode::Tens, ClassifyMode::Ass, ClassifyMode::Pent] {
            let report = brute_force_classes(&sp, mode, 1 << 16, None).unwrap();
            let betti = linear_algebra_betti(&dc, mode, false).unwrap();
            assert_eq!(report.classes, 1 << betti, "{mode}");
            for d in &report.representatives {
                assert!(check_structural(&sp, d).unwrap().is_valid());
            }
        }
    }
}

#[test]
fn the_enumeration_cap_is_enforced() {
    let (_, sp) = setup(&GroupModelSpec::untwisted(f2(), 1, 2));
    assert!(brute_force_classes(&sp, ClassifyMode::Unit, 16, None).is_err());
}

#[test]
fn class_representatives_extend_to_the_dual_numbers() {
    for spec in [GroupModelSpec::untwisted(f3(), 1, 3), GroupModelSpec::untwisted(f3(), 3, 1)] {
        let (dc, sp) = setup(&spec);
        let mut nonzero = 0;
        for mode in ClassifyMode::ALL {
            let (_, reps) = classify_representatives(&dc, &sp, mode).unwrap();
            for d in &reps {
                let ext = extend_and_deform(&sp, d).unwrap();
                assert!(ext.reduces_to_base());
                assert!(validate_extended(&ext).unwrap().is_valid());
                nonzero += 1;
            }
        }
        assert!(nonzero > 0);
    }
}

#[test]
fn a_non_deformation_fails_over_the_dual_numbers() {
    let (_, sp) = setup(&GroupModelSpec::untwisted(f3(), 1, 3));
    let bad = sp
        .tensorator
        .basis()
        .columns()
        .into_iter()
        .map(|v| FirstOrderDeformation { tensorator1: v, ..sp.zero_deformation() })
        .find(|d| !check_structural(&sp, d).unwrap().is_valid())
        .expect("some tensorator perturbation breaks the structure");
    assert!(extend_and_deform(&sp, &bad).is_err());
    assert!(!validate_extended(&extend(&sp, &bad).unwrap()).unwrap().is_valid());
}
