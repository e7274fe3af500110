//! Acceptance run: ten exact criteria, one PASS/FAIL line each, nonzero exit
//! if any fails. All comparisons are exact (no numeric tolerance); each
//! criterion also has a wall-clock budget pinned below.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{f2, f3, model, random_chain, sign_model, yetter_dim};
use graydeform::cli::classify_representatives;
use graydeform::defcomplex::{assemble_complex, cohomology, ComplexSelection, DefComplex};
use graydeform::deformations::{brute_force_classes, extend_and_deform, validate_extended, ClassifyMode, DeformationSpaces};
use graydeform::exactlinalg::{Field, ImageSolver, SparseMatrix};
use graydeform::examples::{deloop, GroupModelSpec, MonoidalCategoryData};
use graydeform::gray::{compare_nestings, pad, pad_with, tensor_power, GraySemigroup};
use graydeform::pfcomplex::{enumerate_deformations, pf_cochain_basis, PfComplex};
use graydeform::twocat::TablePseudofunctor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exact arithmetic throughout: every comparison is equality.
const TOLERANCE: Option<f64> = None;
const ENUMERATION_BOUND: u64 = 1 << 20;
const PAD_CHAINS: usize = 1000;
const MAX_TOTAL_DEGREE: usize = 3;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// `ℤ/2 × ℤ/2` models: the sign bicharacter and the untwisted one.
fn square_models(field: Field) -> Vec<(String, Arc<GraySemigroup>)> {
    vec![
        (format!("sign/{field}"), sign_model(field)),
        (format!("untwisted(2,2)/{field}"), model(&GroupModelSpec::untwisted(field, 2, 2))),
    ]
}

fn all_square_models() -> Vec<(String, Arc<GraySemigroup>)> {
    let mut out = square_models(f3());
    out.extend(square_models(Field::Rational));
    out
}

fn is_zero_product(a: &SparseMatrix, b: &SparseMatrix) -> Result<bool, String> {
    Ok(a.mul(b).map_err(e2s)?.is_zero())
}

fn differential_identities() -> Outcome {
    let mut checks = 0;
    for field in [f3(), Field::Rational] {
        let (name, g) = (format!("sign/{field}"), sign_model(field));
        let dc = DefComplex::with_max_degree(g, MAX_TOTAL_DEGREE + 2);
        for sel in ComplexSelection::ALL {
            let cx = assemble_complex(&dc, sel, sel.min_degree()..=MAX_TOTAL_DEGREE).map_err(e2s)?;
            cx.check_squares().map_err(|e| format!("{name}: {e}"))?;
            checks += MAX_TOTAL_DEGREE - sel.min_degree();
        }
        for special in [false, true] {
            for m in 0..=MAX_TOTAL_DEGREE {
                for n in 1..=MAX_TOTAL_DEGREE - m {
                    let basis = dc.bicomplex_space(m, n, special).map_err(e2s)?.basis().clone();
                    let h = dc.delta_h(m, n, special).map_err(e2s)?.mul(&basis).map_err(e2s)?;
                    let v = dc.delta_v(m, n, special).map_err(e2s)?.mul(&basis).map_err(e2s)?;
                    ensure(is_zero_product(&*dc.delta_h(m + 1, n, special).map_err(e2s)?, &h)?, || format!("{name}: δ_h² ≠ 0 at ({m},{n})"))?;
                    ensure(is_zero_product(&*dc.delta_v(m, n + 1, special).map_err(e2s)?, &v)?, || format!("{name}: δ_v² ≠ 0 at ({m},{n})"))?;
                    let hv = dc.delta_h(m, n + 1, special).map_err(e2s)?.mul(&v).map_err(e2s)?;
                    let vh = dc.delta_v(m + 1, n, special).map_err(e2s)?.mul(&h).map_err(e2s)?;
                    ensure(hv == vh, || format!("{name}: δ_hδ_v ≠ δ_vδ_h at ({m},{n})"))?;
                    checks += 3;
                }
            }
        }
    }
    Ok(format!("{checks} exact identities on 2 models"))
}

fn chain_map_and_cone() -> Outcome {
    let mut checks = 0;
    for (name, g) in all_square_models() {
        let dc = DefComplex::with_max_degree(g, MAX_TOTAL_DEGREE + 1);
        for k in 1..=MAX_TOTAL_DEGREE {
            let phi = dc.phi(k).map_err(e2s)?;
            let lhs = dc.phi(k + 1).map_err(e2s)?.mul(&*dc.delta_pent(k).map_err(e2s)?).map_err(e2s)?;
            let rhs = dc.delta_v(0, k, false).map_err(e2s)?.mul(&phi).map_err(e2s)?;
            ensure(lhs == rhs, || format!("{name}: φδ_pent ≠ δ_vφ in degree {k}"))?;
            ensure(is_zero_product(&*dc.delta_h(0, k, false).map_err(e2s)?, &phi)?, || format!("{name}: δ_hφ ≠ 0 in degree {k}"))?;
            checks += 2;
        }
        let cone = assemble_complex(&dc, ComplexSelection::Unit, 1..=MAX_TOTAL_DEGREE).map_err(e2s)?;
        cone.check_squares().map_err(|e| format!("{name}: {e}"))?;
        checks += 1;
    }
    Ok(format!("{checks} exact identities on 4 models"))
}

fn special_closure() -> Outcome {
    let mut columns = 0;
    for (name, g) in all_square_models() {
        let dc = DefComplex::with_max_degree(g, MAX_TOTAL_DEGREE + 1);
        for m in 0..=MAX_TOTAL_DEGREE {
            for n in 1..=MAX_TOTAL_DEGREE - m {
                let from = dc.bicomplex_space(m, n, true).map_err(e2s)?;
                for (dm, dn, d) in [(1, 0, dc.delta_h(m, n, true).map_err(e2s)?), (0, 1, dc.delta_v(m, n, true).map_err(e2s)?)] {
                    let to = dc.bicomplex_space(m + dm, n + dn, true).map_err(e2s)?;
                    let image = d.mul(from.basis()).map_err(e2s)?;
                    for col in image.columns() {
                        let leaks = (0..to.n_tuples()).filter(|&i| to.is_excluded(i)).any(|i| to.range(i).any(|j| col.get(j).is_some()));
                        ensure(!leaks, || format!("{name}: image of X_s^{{{m},{n}}} leaves the special subspace"))?;
                        columns += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{columns} image columns vanish on identity slots"))
}

/// Exhaustive enumeration of first-order deformations of `⊗(2)` against
/// the cocycles and coboundary differences of its complex.
fn pseudofunctor_bijection() -> Outcome {
    let mut summary = Vec::new();
    for (g_order, h_order) in [(2, 1), (1, 2)] {
        let g = model(&GroupModelSpec::untwisted(f2(), g_order, h_order));
        let t = tensor_power(&g, 2).map_err(e2s)?;
        let cx = PfComplex::new(&t).map_err(e2s)?;
        let e = enumerate_deformations(&cx, ENUMERATION_BOUND).map_err(e2s)?;
        let d2 = cx.delta_free(2).map_err(e2s)?;
        let mut cocycles = Vec::new();
        for (i, c) in e.cochains.iter().enumerate() {
            if d2.mul_vec(c).map_err(e2s)?.is_zero() {
                cocycles.push(i);
            }
        }
        ensure(e.deformations == cocycles, || format!("({g_order},{h_order}): hexagon solutions ≠ ker δ₂"))?;
        let image = ImageSolver::new(&cx.coboundary(1).map_err(e2s)?);
        let expected: BTreeSet<(usize, usize)> = cocycles
            .iter()
            .flat_map(|&i| cocycles.iter().map(move |&j| (i, j)))
            .filter(|&(i, j)| image.contains(&e.cochains[j].sub(&e.cochains[i])))
            .collect();
        let found: BTreeSet<(usize, usize)> = e.equivalent_pairs.iter().copied().collect();
        ensure(found == expected, || format!("({g_order},{h_order}): equivalent pairs ≠ coboundary differences"))?;
        let betti = cx.cohomology(2, false).map_err(e2s)?.betti;
        ensure(e.classes == 1 << betti, || format!("({g_order},{h_order}): {} classes vs 2^{betti}", e.classes))?;
        summary.push(format!("G=ℤ/{g_order},H=ℤ/{h_order}: {} cochains, {} classes = 2^{betti}", e.cochains.len(), e.classes));
    }
    Ok(summary.join("; "))
}

fn brute_force_matches(modes: &[ClassifyMode]) -> Outcome {
    let mut summary = Vec::new();
    for (g_order, h_order) in [(1, 2), (2, 1)] {
        let dc = DefComplex::new(model(&GroupModelSpec::untwisted(f2(), g_order, h_order)));
        let sp = DeformationSpaces::new(&dc).map_err(e2s)?;
        for &mode in modes {
            let report = brute_force_classes(&sp, mode, ENUMERATION_BOUND, None).map_err(e2s)?;
            let betti = cohomology(&dc, mode.selection(), mode.degree(), false).map_err(e2s)?.betti;
            ensure(report.classes == 1 << betti, || format!("({g_order},{h_order}) {mode}: {} classes vs 2^{betti}", report.classes))?;
            summary.push(format!("({g_order},{h_order}) {mode} {}=2^{betti}", report.classes));
        }
    }
    Ok(summary.join(", "))
}

fn end_to_end_oracle() -> Outcome {
    let mut validated = 0;
    let specs = [
        GroupModelSpec::untwisted(f3(), 1, 3),
        GroupModelSpec::untwisted(f3(), 3, 1),
        GroupModelSpec::sign(f3(), 2),
    ];
    for spec in &specs {
        let dc = DefComplex::new(model(spec));
        let sp = DeformationSpaces::new(&dc).map_err(e2s)?;
        for mode in ClassifyMode::ALL {
            let (_, reps) = classify_representatives(&dc, &sp, mode).map_err(e2s)?;
            for (i, d) in reps.iter().enumerate() {
                let ext = extend_and_deform(&sp, d).map_err(|e| format!("{mode} representative {i}: {e}"))?;
                let report = validate_extended(&ext).map_err(e2s)?;
                ensure(report.is_valid(), || format!("{mode} representative {i} fails {:?}", report.failed_axioms()))?;
                validated += 1;
            }
        }
    }
    ensure(validated > 0, || "no nonzero representatives to check".into())?;
    Ok(format!("{validated} representatives valid over 𝔽₃[ε]/(ε²)"))
}

fn one_object_reduction() -> Outcome {
    let cases = [
        MonoidalCategoryData::meet_chain(f3(), 2),
        MonoidalCategoryData::meet_chain(Field::Rational, 2),
        MonoidalCategoryData::graded_dual_numbers(f3()),
        MonoidalCategoryData::trivial(Field::Rational),
    ];
    let mut dims = Vec::new();
    for m in &cases {
        let id = TablePseudofunctor::identity(Arc::new(deloop(m).map_err(e2s)?));
        for n in 0..=3 {
            let (ours, theirs) = (pf_cochain_basis(&id, n).map_err(e2s)?.dim(), yetter_dim(m, n));
            ensure(ours == theirs, || format!("{:?} degree {n}: {ours} vs {theirs}", m.object_names))?;
            dims.push(ours.to_string());
        }
    }
    Ok(format!("dimensions {}", dims.join(",")))
}

fn nesting_agreement() -> Outcome {
    let mut compared = 0;
    for g in [sign_model(f3()), model(&GroupModelSpec::untwisted(f3(), 3, 2))] {
        for n in 1..=4 {
            compared += compare_nestings(&g, n).map_err(e2s)?;
        }
    }
    Ok(format!("{compared} composable pairs agree"))
}

fn padding_coherence() -> Outcome {
    let g = sign_model(Field::prime(5).map_err(e2s)?);
    let towers = [tensor_power(&g, 2).map_err(e2s)?, tensor_power(&g, 3).map_err(e2s)?];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..PAD_CHAINS {
        let t = &towers[i % 2];
        let (n, links) = (rng.gen_range(1..=4), rng.gen_range(1..=3));
        let chain = random_chain(t, &mut rng, n, links);
        let mut r1 = ChaCha8Rng::seed_from_u64(rng.gen());
        let mut r2 = ChaCha8Rng::seed_from_u64(rng.gen());
        let a = pad_with(t, &chain, &mut |k| r1.gen_range(0..k.max(1))).map_err(e2s)?;
        let b = pad_with(t, &chain, &mut |k| r2.gen_range(0..k.max(1))).map_err(e2s)?;
        ensure(a == b, || format!("chain {i}: insertion recipes disagree"))?;
        ensure(a == pad(t, &chain).map_err(e2s)?, || format!("chain {i}: differs from the canonical recipe"))?;
    }
    Ok(format!("{PAD_CHAINS} chains, recipe pairs agree"))
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    assert!(TOLERANCE.is_none());
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { name: "differential identities", budget: secs(60), run: differential_identities },
        Criterion { name: "chain map and cone", budget: secs(10), run: chain_map_and_cone },
        Criterion { name: "special closure", budget: secs(10), run: special_closure },
        Criterion { name: "pseudofunctor deformations biject with H²", budget: secs(300), run: pseudofunctor_bijection },
        Criterion { name: "unitary deformations biject with H²_unit", budget: secs(600), run: || brute_force_matches(&[ClassifyMode::Unit]) },
        Criterion {
            name: "restricted deformations biject with their cohomology",
            budget: secs(600),
            run: || brute_force_matches(&[ClassifyMode::Pent, ClassifyMode::Ass, ClassifyMode::Tens, ClassifyMode::TensAss]),
        },
        Criterion { name: "classified representatives deform over dual numbers", budget: secs(60), run: end_to_end_oracle },
        Criterion { name: "one-object reduction to the monoidal complex", budget: secs(10), run: one_object_reduction },
        Criterion { name: "left and right nestings of ⊗̂(n) agree", budget: secs(10), run: nesting_agreement },
        Criterion { name: "padding coherence", budget: secs(30), run: padding_coherence },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.budget => Err(format!("{detail}; over budget {:?}", c.budget)),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {} [{:.2}s ≤ {}s] {detail}", i + 1, c.name, elapsed.as_secs_f64(), c.budget.as_secs()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {} [{:.2}s] {why}", i + 1, c.name, elapsed.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
