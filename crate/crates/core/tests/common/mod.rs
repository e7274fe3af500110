//! Independent oracles and fixtures shared by the integration tests.
//!
//! Nothing here calls the cochain-space or differential code under test;
//! counts are derived from group arithmetic or from the raw tables of a
//! monoidal category, and only generic linear algebra (rank) is reused.
//! The random padding chains are built from basis 2-cells and bracketings
//! only; filling them in is left to the code under test.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use graydeform::exactlinalg::{rank, Field, Scalar, SparseMatrix, SparseVec};
use graydeform::examples::{group_model, GroupModelSpec, MonoidalCategoryData};
use graydeform::gray::{eval_partition, GraySemigroup, IteratedTensor, PaddedCell};
use graydeform::twocat::{Pseudofunctor, TwoMorphism};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn f2() -> Field {
    Field::prime(2).unwrap()
}

pub fn f3() -> Field {
    Field::prime(3).unwrap()
}

pub fn f5() -> Field {
    Field::prime(5).unwrap()
}

pub fn model(spec: &GroupModelSpec) -> Arc<GraySemigroup> {
    Arc::new(group_model(spec).expect("valid group model"))
}

/// `c(h, k) = (−1)^{hk}` on `ℤ/2`.
pub fn sign_model(field: Field) -> Arc<GraySemigroup> {
    model(&GroupModelSpec::sign(field, 2))
}

/// A bicharacter table on `ℤ/n` given by `c(a, b) = q^{ab}`.
pub fn power_table(field: Field, n: usize, q: i64) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|a| (0..n).map(|b| (0..a * b).fold(field.one(), |acc, _| &acc * &field.from_i64(q))).collect())
        .collect()
}

/// Hand expansion of the tensorator equations of a skeletal group model
/// with tensorator scalar `⊗̂((f′,g′),(f,g)) = c(g′, f)` (elements of `ℤ/n`
/// written additively). Composition of the pairs `(f,g)`, `(f′,g′)`,
/// `(f″,g″)` multiplies the scalars along the two pastings:
///
/// * composition: `c(g″, f′+f)·c(g′, f) = c(g″+g′, f)·c(g″, f′)`;
/// * Gray equation: `c(g′, f)·c(k′, f+g) = c(k′, g)·c(g′+k′, f)`.
///
/// Returns the failing `(g″, g′, f′, f)` of the first family and the failing
/// `(g′, k′, f, g)` of the second.
pub struct HandExpansion {
    pub composition_failures: BTreeSet<[usize; 4]>,
    pub gray_failures: BTreeSet<[usize; 4]>,
}

pub fn hand_expand(c: &[Vec<Scalar>]) -> HandExpansion {
    let n = c.len();
    let add = |a: usize, b: usize| (a + b) % n;
    let mut composition_failures = BTreeSet::new();
    let mut gray_failures = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            for x in 0..n {
                for y in 0..n {
                    if &c[a][add(x, y)] * &c[b][y] != &c[add(a, b)][y] * &c[a][x] {
                        composition_failures.insert([a, b, x, y]);
                    }
                    // (g′, k′, f, g) = (a, b, x, y)
                    if &c[a][x] * &c[b][add(x, y)] != &c[b][y] * &c[add(a, b)][x] {
                        gray_failures.insert([a, b, x, y]);
                    }
                }
            }
        }
    }
    HandExpansion { composition_failures, gray_failures }
}

/// Number of composable `len`-tuples of 1-cells of `Cᵏ` for the group model
/// on `G`, `H`: all cells live on single objects, so a tuple is a choice of
/// one object of `Cᵏ` and `len` cells on it. With `skip_identities`, tuples
/// with an identity entry (all components trivial in `H`) are dropped.
/// Every cell has a one-dimensional endomorphism space spanned by the
/// identity, so naturality only imposes `λφ = φλ` and every tuple contributes
/// exactly one free scalar.
pub fn group_tuple_count(g_order: usize, h_order: usize, k: usize, len: usize, skip_identities: bool) -> usize {
    let objects = g_order.pow(k as u32);
    let cells_per_object = h_order.pow(k as u32);
    let mut count = 0;
    for _ in 0..objects {
        let mut tuples = 1;
        for _ in 0..len {
            tuples *= if skip_identities { cells_per_object - 1 } else { cells_per_object };
        }
        count += tuples;
    }
    count
}

fn hom_basis(m: &MonoidalCategoryData, a: usize, b: usize) -> Vec<Vec<Scalar>> {
    let d = m.dim(a, b);
    (0..d).map(|i| (0..d).map(|j| if i == j { m.field.one() } else { m.field.zero() }).collect()).collect()
}

fn compose(m: &MonoidalCategoryData, a: usize, b: usize, c: usize, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    match m.compose.get(&(a, b, c)) {
        Some(t) => t.apply(m.field, x, y),
        None => vec![m.field.zero(); m.dim(a, c)],
    }
}

fn tensor_mor(m: &MonoidalCategoryData, a: usize, a1: usize, b: usize, b1: usize, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    match m.tensor_mor.get(&(a, a1, b, b1)) {
        Some(t) => t.apply(m.field, x, y),
        None => vec![m.field.zero(); m.dim(m.tensor[a][b], m.tensor[a1][b1])],
    }
}

/// `x₁ ⊗ … ⊗ x_n` for `xᵢ: aᵢ → bᵢ`, nested from the left.
fn tensor_all(m: &MonoidalCategoryData, a: &[usize], b: &[usize], xs: &[Vec<Scalar>]) -> (usize, usize, Vec<Scalar>) {
    let (mut sa, mut sb, mut acc) = (a[0], b[0], xs[0].clone());
    for i in 1..a.len() {
        acc = tensor_mor(m, sa, sb, a[i], b[i], &acc, &xs[i]);
        sa = m.tensor[sa][a[i]];
        sb = m.tensor[sb][b[i]];
    }
    (sa, sb, acc)
}

fn tuples(n_objects: usize, len: usize) -> Vec<Vec<usize>> {
    (0..n_objects.pow(len as u32))
        .map(|mut i| {
            let mut t = vec![0; len];
            for slot in (0..len).rev() {
                t[slot] = i % n_objects;
                i /= n_objects;
            }
            t
        })
        .collect()
}

/// Dimension of the degree-`n` Yetter-style cochain space of the identity
/// monoidal functor of a strict monoidal category: families
/// `φ_A ∈ End(a₁⊗…⊗a_n)` natural for all tuples of morphisms at once,
/// `φ_B·(x₁⊗…⊗x_n) = (x₁⊗…⊗x_n)·φ_A`. Degree 0 is the zero space.
pub fn yetter_dim(m: &MonoidalCategoryData, n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let field = m.field;
    let ts = tuples(m.n_objects(), n);
    let tensor_of = |t: &[usize]| t[1..].iter().fold(t[0], |acc, &x| m.tensor[acc][x]);
    let mut offsets = Vec::with_capacity(ts.len());
    let mut total = 0;
    for t in &ts {
        offsets.push(total);
        let a = tensor_of(t);
        total += m.dim(a, a);
    }
    let mut rows: Vec<SparseVec> = Vec::new();
    for (ia, ta) in ts.iter().enumerate() {
        for (ib, tb) in ts.iter().enumerate() {
            let bases: Vec<Vec<Vec<Scalar>>> = (0..n).map(|i| hom_basis(m, ta[i], tb[i])).collect();
            if bases.iter().any(|b| b.is_empty()) {
                continue;
            }
            let (sa, sb) = (tensor_of(ta), tensor_of(tb));
            let combos: usize = bases.iter().map(|b| b.len()).product();
            for mut idx in 0..combos {
                let mut xs = vec![Vec::new(); n];
                for slot in (0..n).rev() {
                    xs[slot] = bases[slot][idx % bases[slot].len()].clone();
                    idx /= bases[slot].len();
                }
                let (_, _, x) = tensor_all(m, ta, tb, &xs);
                // Hom(sa, sb) coordinates of φ_B·x − x·φ_A.
                let mut block: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); m.dim(sa, sb)];
                for (k, e) in hom_basis(m, sb, sb).iter().enumerate() {
                    for (r, v) in compose(m, sa, sb, sb, e, &x).into_iter().enumerate() {
                        if !v.is_zero() {
                            block[r].push((offsets[ib] + k, v));
                        }
                    }
                }
                for (k, e) in hom_basis(m, sa, sa).iter().enumerate() {
                    for (r, v) in compose(m, sa, sa, sb, &x, e).into_iter().enumerate() {
                        if !v.is_zero() {
                            block[r].push((offsets[ia] + k, -v));
                        }
                    }
                }
                rows.extend(block.into_iter().map(|e| SparseVec::from_pairs(total, e)).filter(|r| !r.is_zero()));
            }
        }
    }
    if rows.is_empty() {
        return total;
    }
    total - rank(&SparseMatrix::from_rows(field, total, rows))
}

fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut left = n;
    while left > 0 {
        let b = rng.gen_range(1..=left);
        out.push(b);
        left -= b;
    }
    out
}

/// A chain of `links` scalar multiples of basis 2-cells between random
/// bracketings of one random composable `n`-tuple, with gaps between links
/// (the shape `pad` must fill).
pub fn random_chain(t: &IteratedTensor, rng: &mut ChaCha8Rng, n: usize, links: usize) -> Vec<PaddedCell> {
    let (c, d) = (t.source(), t.target());
    let tuples = c.composable_tuples(n);
    let tuple = tuples[rng.gen_range(0..tuples.len())].clone();
    let elems = d.field().elements().unwrap();
    let mut chain = Vec::new();
    let mut src = random_partition(rng, n);
    for _ in 0..links {
        let dst = random_partition(rng, n);
        let (s, e) = (
            eval_partition(t, &tuple, &src).unwrap(),
            eval_partition(t, &tuple, &dst).unwrap(),
        );
        let x = elems[rng.gen_range(1..elems.len())].clone();
        let cell: TwoMorphism = d.scale2(&d.basis2(s, e, 0), &x);
        chain.push(PaddedCell { tuple: tuple.clone(), src: src.clone(), dst: dst.clone(), cell });
        src = random_partition(rng, n);
    }
    chain
}
