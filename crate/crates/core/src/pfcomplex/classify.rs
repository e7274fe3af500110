//! Purely pseudofunctorial first-order deformations: cocycles, the
//! unitarity lemma, literal checks over the dual numbers and equivalence.

use crate::deformations::Dual;
use crate::error::{Error, Result};
use crate::exactlinalg::SparseVec;
use crate::twocat::{Pseudofunctor, TwoMorphism, ValidationReport, Violation};

use super::space::CochainSpace;
use super::PfComplex;

/// `F̂_ε = F̂ + ε F̂⁽¹⁾`, `(F₀)_ε = 1 + ε F₀⁽¹⁾`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfDeformation {
    /// `F̂⁽¹⁾` in free coordinates of `X²(F)`.
    pub fhat1: SparseVec,
    /// `F₀⁽¹⁾(X)` per object.
    pub f0_1: Vec<TwoMorphism>,
}

fn tuple_value(sp: &CochainSpace, v: &SparseVec, t: &[usize]) -> Result<TwoMorphism> {
    let i = sp.tuple_index(t).ok_or_else(|| Error::Precondition(format!("tuple {t:?} is not composable")))?;
    Ok(sp.value(v, i))
}

fn names(f: &dyn Pseudofunctor, t: &[usize]) -> Vec<String> {
    t.iter().map(|&x| f.source().cell_name(x)).collect()
}

/// The deformation determined by a 2-cochain, with `F₀⁽¹⁾(X) = F̂⁽¹⁾(id_X, id_X)`.
pub fn deformation_of(cx: &PfComplex, c: &SparseVec) -> Result<PfDeformation> {
    let f = cx.functor();
    let src = f.source();
    let x2 = cx.space(2)?;
    let f0_1 = (0..src.n_objects())
        .map(|x| {
            let id = src.identity(x);
            tuple_value(&x2, c, &[id, id])
        })
        .collect::<Result<_>>()?;
    Ok(PfDeformation { fhat1: c.clone(), f0_1 })
}

/// Wraps a 2-cocycle as a deformation; a non-cocycle is rejected with the
/// first violated hexagon instance.
pub fn cocycle_to_deformation(cx: &PfComplex, c: &SparseVec) -> Result<PfDeformation> {
    let x2 = cx.space(2)?;
    if !x2.contains(c) {
        return Err(Error::Precondition("cochain is not natural".into()));
    }
    let dc = cx.delta_free(2)?.mul_vec(c)?;
    if let Some((coord, _)) = dc.entries.first() {
        let x3 = cx.space(3)?;
        let (i, _) = x3.locate(*coord);
        return Err(Error::Precondition(format!(
            "not a cocycle: hexagon fails at {:?}",
            names(cx.functor(), &x3.tuples()[i])
        )));
    }
    deformation_of(cx, c)
}

/// Lemma checks: (i) `F̂(id_X, id_X) = 1` for every object; (ii) given a
/// candidate, `F₀⁽¹⁾(X) = F̂⁽¹⁾(id_X, id_X)`.
pub fn check_unitary_lemma(cx: &PfComplex, candidate: Option<&PfDeformation>) -> Result<ValidationReport> {
    let f = cx.functor();
    let (c, d) = (f.source(), f.target());
    let mut rep = ValidationReport::default();
    for x in 0..c.n_objects() {
        let id = c.identity(x);
        if f.fhat(id, id) != d.id2(d.identity(f.map_object(x))) {
            rep.push(Violation::new("F̂(id,id) is the identity", vec![c.object_name(x)]));
        }
    }
    if let Some(def) = candidate {
        let x2 = cx.space(2)?;
        if def.f0_1.len() != c.n_objects() {
            return Err(Error::Structural("F₀⁽¹⁾ needs one component per object".into()));
        }
        for x in 0..c.n_objects() {
            let id = c.identity(x);
            if def.f0_1[x] != tuple_value(&x2, &def.fhat1, &[id, id])? {
                rep.push(Violation::new("F₀⁽¹⁾(X) = F̂⁽¹⁾(id_X,id_X)", vec![c.object_name(x)]));
            }
        }
    }
    Ok(rep)
}

fn fhat_eps(f: &dyn Pseudofunctor, x2: &CochainSpace, c: &SparseVec, g: usize, h: usize) -> Result<Dual> {
    Dual::new(f.fhat(g, h), tuple_value(&x2, c, &[g, h])?)
}

/// Substitutes `F̂_ε = F̂ + εc`, `(F₀)_ε = 1 + ε c(id, id)` into the
/// hexagonal and triangular axioms and naturality, over `K[ε]/(ε²)`.
pub fn check_deformed_pseudofunctor(cx: &PfComplex, c: &SparseVec) -> Result<ValidationReport> {
    let f = cx.functor();
    let (src, d) = (f.source(), f.target());
    let x2 = cx.space(2)?;
    let mut rep = ValidationReport::default();
    if !x2.contains(c) {
        rep.push(Violation::new("F̂⁽¹⁾ natural", vec![]));
    }
    for t in src.composable_tuples(3) {
        let (h, g, ff) = (t[0], t[1], t[2]);
        let gf = src.compose(g, ff).expect("composable");
        let hg = src.compose(h, g).expect("composable");
        let lhs = Dual::vcomp(d, &fhat_eps(f, &x2, c, h, gf)?, &Dual::whisker_left(d, f.map_cell(h), &fhat_eps(f, &x2, c, g, ff)?)?)?;
        let rhs = Dual::vcomp(d, &fhat_eps(f, &x2, c, hg, ff)?, &Dual::whisker_right(d, &fhat_eps(f, &x2, c, h, g)?, f.map_cell(ff))?)?;
        if lhs != rhs {
            rep.push(Violation::new("hexagon", names(f, &t)));
        }
    }
    for x in 0..src.n_objects() {
        let id = src.identity(x);
        let f0 = fhat_eps(f, &x2, c, id, id)?;
        for ff in 0..src.n_cells() {
            if src.cell_src(ff) == x {
                let lhs = fhat_eps(f, &x2, c, ff, id)?;
                if lhs != Dual::whisker_left(d, f.map_cell(ff), &f0)? {
                    rep.push(Violation::new("right triangle", names(f, &[ff])));
                }
            }
            if src.cell_dst(ff) == x {
                let lhs = fhat_eps(f, &x2, c, id, ff)?;
                if lhs != Dual::whisker_right(d, &f0, f.map_cell(ff))? {
                    rep.push(Violation::new("left triangle", names(f, &[ff])));
                }
            }
        }
    }
    Ok(rep)
}

/// Whether `ξ_ε = 1 + εξ` (identity 1-cell components) is a pseudonatural
/// isomorphism from the deformation by `c1` to the deformation by `c2`,
/// checked by substitution over `K[ε]/(ε²)`.
pub fn check_deformed_equivalence(cx: &PfComplex, c1: &SparseVec, c2: &SparseVec, xi: &SparseVec) -> Result<ValidationReport> {
    let f = cx.functor();
    let (src, d) = (f.source(), f.target());
    let (x1, x2) = (cx.space(1)?, cx.space(2)?);
    let mut rep = ValidationReport::default();
    if !x1.contains(xi) {
        rep.push(Violation::new("ξ̂⁽¹⁾ natural", vec![]));
    }
    let xi_eps = |h: usize| -> Result<Dual> { Dual::new(d.id2(f.map_cell(h)), tuple_value(&x1, xi, &[h])?) };
    for t in src.composable_tuples(2) {
        let (g, ff) = (t[0], t[1]);
        let gf = src.compose(g, ff).expect("composable");
        let step1 = Dual::whisker_left(d, f.map_cell(g), &xi_eps(ff)?)?;
        let step2 = Dual::whisker_right(d, &xi_eps(g)?, f.map_cell(ff))?;
        let lhs = Dual::vcomp_all(d, &[fhat_eps(f, &x2, c1, g, ff)?, step2, step1])?;
        let rhs = Dual::vcomp(d, &xi_eps(gf)?, &fhat_eps(f, &x2, c2, g, ff)?)?;
        if lhs != rhs {
            rep.push(Violation::new("transformation composition coherence", names(f, &t)));
        }
    }
    for x in 0..src.n_objects() {
        let id = src.identity(x);
        let lhs = Dual::vcomp(d, &fhat_eps(f, &x2, c1, id, id)?, &xi_eps(id)?)?;
        if lhs != fhat_eps(f, &x2, c2, id, id)? {
            rep.push(Violation::new("transformation unit coherence", vec![src.object_name(x)]));
        }
    }
    Ok(rep)
}

/// A 1-cochain `ξ` (free coordinates) with `c2 − c1 = δξ`, or `None` when
/// the cocycles lie in different classes.
pub fn equivalence_witness(cx: &PfComplex, c1: &SparseVec, c2: &SparseVec) -> Result<Option<SparseVec>> {
    for c in [c1, c2] {
        if !cx.delta_free(2)?.mul_vec(c)?.is_zero() {
            return Err(Error::Precondition("equivalence is only tested between cocycles".into()));
        }
    }
    let a1 = cx.coboundary(1)?;
    let diff = c2.sub(c1);
    match crate::exactlinalg::solve_in_image(&a1, &diff)? {
        Some(x) => Ok(Some(cx.space(1)?.embed(&x)?)),
        None => Ok(None),
    }
}

/// Outcome of [`enumerate_deformations`]: every natural 2-cochain over a
/// prime field, the literal verdicts, and the literally witnessed
/// equivalences, with no use of the coboundary matrices.
#[derive(Clone, Debug)]
pub struct PfEnumeration {
    /// All natural 2-cochains in free coordinates, in lexicographic order
    /// of their coefficients on the natural basis.
    pub cochains: Vec<SparseVec>,
    /// Indices (into `cochains`) passing [`check_deformed_pseudofunctor`].
    pub deformations: Vec<usize>,
    /// Pairs `(i, j)` of deformations related by some `ξ` passing
    /// [`check_deformed_equivalence`]; sorted.
    pub equivalent_pairs: Vec<(usize, usize)>,
    /// Number of equivalence classes among `deformations`.
    pub classes: usize,
}

fn all_combinations(basis: &crate::exactlinalg::SparseMatrix, bound: u64, what: &str) -> Result<Vec<SparseVec>> {
    let field = basis.field;
    let p = field.order().ok_or_else(|| Error::Precondition("exhaustive enumeration needs a finite field".into()))?;
    let cols = basis.columns();
    let n = match p.checked_pow(cols.len() as u32) {
        Some(n) if n <= bound => n,
        _ => {
            return Err(Error::ResourceCap(format!(
                "{what} space has {p}^{} elements, above the enumeration bound {bound}",
                cols.len()
            )))
        }
    };
    Ok((0..n)
        .map(|mut i| {
            let mut digits = vec![0u64; cols.len()];
            for slot in (0..cols.len()).rev() {
                digits[slot] = i % p;
                i /= p;
            }
            cols.iter().zip(digits).fold(SparseVec::zero(basis.rows), |acc, (c, k)| acc.axpy(&field.from_i64(k as i64), c))
        })
        .collect())
}

/// Exhaustively enumerates natural 2-cochains and 1-cochains over a prime
/// field, testing the deformed pseudofunctor axioms and the deformed
/// transformation axioms literally over `K[ε]/(ε²)`.
pub fn enumerate_deformations(cx: &PfComplex, bound: u64) -> Result<PfEnumeration> {
    use rayon::prelude::*;

    let cochains = all_combinations(cx.space(2)?.basis(), bound, "2-cochain")?;
    let witnesses = all_combinations(cx.space(1)?.basis(), bound, "1-cochain")?;
    let verdicts = cochains.par_iter().map(|c| Ok(check_deformed_pseudofunctor(cx, c)?.is_valid())).collect::<Result<Vec<bool>>>()?;
    let deformations: Vec<usize> = (0..cochains.len()).filter(|&i| verdicts[i]).collect();
    let work = (deformations.len() as u64).saturating_mul(deformations.len() as u64).saturating_mul(witnesses.len() as u64);
    if work > bound.saturating_mul(64) {
        return Err(Error::ResourceCap(format!("{work} equivalence checks exceed the enumeration budget")));
    }
    let mut equivalent_pairs = deformations
        .par_iter()
        .map(|&i| -> Result<Vec<(usize, usize)>> {
            let mut out = Vec::new();
            for &j in &deformations {
                for xi in &witnesses {
                    if check_deformed_equivalence(cx, &cochains[i], &cochains[j], xi)?.is_valid() {
                        out.push((i, j));
                        break;
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .concat();
    equivalent_pairs.sort_unstable();
    let mut parent: Vec<usize> = (0..cochains.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for &(i, j) in &equivalent_pairs {
        let (a, b) = (root(&mut parent, i), root(&mut parent, j));
        parent[a.max(b)] = a.min(b);
    }
    let classes = deformations.iter().filter(|&&i| root(&mut parent, i) == i).count();
    Ok(PfEnumeration { cochains, deformations, equivalent_pairs, classes })
}
