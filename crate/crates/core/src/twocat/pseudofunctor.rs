//! Pseudofunctors between finite strict 2-categories.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlinalg::Scalar;

use super::category::{unit_vec, TwoCategory, TwoMorphism};
use super::report::{ValidationReport, Violation};

/// Read access to the data of a pseudofunctor `F: C → D`.
pub trait Pseudofunctor: Send + Sync {
    fn source(&self) -> &TwoCategory;
    fn target(&self) -> &TwoCategory;
    fn map_object(&self, x: usize) -> usize;
    fn map_cell(&self, f: usize) -> usize;
    /// Image of `x ∈ Hom₂(f, f′)` in `Hom₂(F f, F f′)`.
    fn map_two(&self, f: usize, f1: usize, x: &[Scalar]) -> Vec<Scalar>;
    /// `F̂(g, f): F(g)∘F(f) ⇒ F(g∘f)`.
    fn fhat(&self, g: usize, f: usize) -> TwoMorphism;
    /// `F₀(X): F(id_X) ⇒ id_{F X}`.
    fn f0(&self, x: usize) -> TwoMorphism;

    fn map_morphism(&self, t: &TwoMorphism) -> TwoMorphism {
        TwoMorphism { src: self.map_cell(t.src), dst: self.map_cell(t.dst), coeffs: self.map_two(t.src, t.dst, &t.coeffs) }
    }

    /// All `F₀(X)` are identities.
    fn is_unitary(&self) -> bool {
        let (c, d) = (self.source(), self.target());
        (0..c.n_objects()).all(|x| {
            let fx = self.map_object(x);
            self.map_cell(c.identity(x)) == d.identity(fx) && self.f0(x) == d.id2(d.identity(fx))
        })
    }
}

/// A pseudofunctor stored as explicit tables.
#[derive(Clone, Debug)]
pub struct TablePseudofunctor {
    pub source: Arc<TwoCategory>,
    pub target: Arc<TwoCategory>,
    pub objects: Vec<usize>,
    pub cells: Vec<usize>,
    /// `(f, f′)` → matrix (rows: target basis, cols: source basis).
    pub two: HashMap<(usize, usize), Vec<Vec<Scalar>>>,
    pub fhat: HashMap<(usize, usize), TwoMorphism>,
    pub f0: Vec<TwoMorphism>,
}

impl TablePseudofunctor {
    /// The identity 2-functor of `c`.
    pub fn identity(c: Arc<TwoCategory>) -> Self {
        let field = c.field();
        let mut two = HashMap::new();
        for f in 0..c.n_cells() {
            for f1 in c.parallel_cells(f) {
                let d = c.dim2(f, f1);
                two.insert((f, f1), (0..d).map(|i| unit_vec(field, d, i)).collect());
            }
        }
        let mut fhat = HashMap::new();
        for t in c.composable_tuples(2) {
            fhat.insert((t[0], t[1]), c.id2(c.compose(t[0], t[1]).unwrap()));
        }
        let f0 = (0..c.n_objects()).map(|x| c.id2(c.identity(x))).collect();
        TablePseudofunctor {
            objects: (0..c.n_objects()).collect(),
            cells: (0..c.n_cells()).collect(),
            source: c.clone(),
            target: c,
            two,
            fhat,
            f0,
        }
    }

    /// Materializes any pseudofunctor into tables.
    pub fn from_pseudofunctor(p: &dyn Pseudofunctor, source: Arc<TwoCategory>, target: Arc<TwoCategory>) -> Self {
        let c = &*source;
        let field = c.field();
        let mut two = HashMap::new();
        for f in 0..c.n_cells() {
            for f1 in c.parallel_cells(f) {
                let d = c.dim2(f, f1);
                let cols: Vec<Vec<Scalar>> = (0..d).map(|i| p.map_two(f, f1, &unit_vec(field, d, i))).collect();
                let rows = target.dim2(p.map_cell(f), p.map_cell(f1));
                let m = (0..rows).map(|r| cols.iter().map(|col| col[r].clone()).collect()).collect();
                two.insert((f, f1), m);
            }
        }
        let mut fhat = HashMap::new();
        for t in c.composable_tuples(2) {
            fhat.insert((t[0], t[1]), p.fhat(t[0], t[1]));
        }
        TablePseudofunctor {
            objects: (0..c.n_objects()).map(|x| p.map_object(x)).collect(),
            cells: (0..c.n_cells()).map(|f| p.map_cell(f)).collect(),
            f0: (0..c.n_objects()).map(|x| p.f0(x)).collect(),
            source,
            target,
            two,
            fhat,
        }
    }
}

impl Pseudofunctor for TablePseudofunctor {
    fn source(&self) -> &TwoCategory {
        &self.source
    }
    fn target(&self) -> &TwoCategory {
        &self.target
    }
    fn map_object(&self, x: usize) -> usize {
        self.objects[x]
    }
    fn map_cell(&self, f: usize) -> usize {
        self.cells[f]
    }
    fn map_two(&self, f: usize, f1: usize, x: &[Scalar]) -> Vec<Scalar> {
        let field = self.target.field();
        match self.two.get(&(f, f1)) {
            Some(m) => m
                .iter()
                .map(|row| row.iter().zip(x).fold(field.zero(), |acc, (a, b)| if b.is_zero() { acc } else { &acc + &(a * b) }))
                .collect(),
            None => vec![field.zero(); self.target.dim2(self.cells[f], self.cells[f1])],
        }
    }
    fn fhat(&self, g: usize, f: usize) -> TwoMorphism {
        self.fhat[&(g, f)].clone()
    }
    fn f0(&self, x: usize) -> TwoMorphism {
        self.f0[x].clone()
    }
}

/// Iterated structure cell `F̂⁽ⁿ⁾(f₀,…,f_{n−1}): F f₀∘…∘F f_{n−1} ⇒ F(f₀∘…∘f_{n−1})`
/// for a composable tuple, nested to the right:
/// `F̂(f₀, f₁∘…∘f_{n−1})·(1_{F f₀}∘F̂⁽ⁿ⁻¹⁾(f₁,…))`. The identity for `n = 1`.
pub fn fhat_iterated(p: &dyn Pseudofunctor, cells: &[usize]) -> Result<TwoMorphism> {
    let (c, d) = (p.source(), p.target());
    match cells {
        [] => Err(Error::Precondition("empty tuple has no structure cell".into())),
        [f] => Ok(d.id2(p.map_cell(*f))),
        [f0, rest @ ..] => {
            let inner = fhat_iterated(p, rest)?;
            let tail = c.compose_all(rest).ok_or_else(|| Error::NotComposable("tuple is not composable".into()))?;
            d.vcomp(&p.fhat(*f0, tail), &d.whisker_left(p.map_cell(*f0), &inner)?)
        }
    }
}

/// Structural (non-axiom) checks: endpoints and shapes of the data.
pub fn check_pseudofunctor_shapes(p: &dyn Pseudofunctor) -> Result<()> {
    let (c, d) = (p.source(), p.target());
    for f in 0..c.n_cells() {
        let ff = p.map_cell(f);
        if d.cell_src(ff) != p.map_object(c.cell_src(f)) || d.cell_dst(ff) != p.map_object(c.cell_dst(f)) {
            return Err(Error::Structural(format!("image of 1-cell {} has wrong endpoints", c.cell_name(f))));
        }
    }
    for t in c.composable_tuples(2) {
        let (g, f) = (t[0], t[1]);
        let h = p.fhat(g, f);
        let src = d.compose(p.map_cell(g), p.map_cell(f));
        if Some(h.src) != src || h.dst != p.map_cell(c.compose(g, f).unwrap()) || h.coeffs.len() != d.dim2(h.src, h.dst) {
            return Err(Error::Structural(format!("F̂({}, {}) has wrong shape", c.cell_name(g), c.cell_name(f))));
        }
    }
    for x in 0..c.n_objects() {
        let z = p.f0(x);
        let fx = p.map_object(x);
        if z.src != p.map_cell(c.identity(x)) || z.dst != d.identity(fx) || z.coeffs.len() != d.dim2(z.src, z.dst) {
            return Err(Error::Structural(format!("F₀({}) has wrong shape", c.object_name(x))));
        }
    }
    Ok(())
}

/// Checks functoriality of the hom-maps, naturality and invertibility of
/// `F̂`, invertibility of `F₀`, and the hexagonal and triangular axioms.
pub fn validate_pseudofunctor(p: &dyn Pseudofunctor) -> Result<ValidationReport> {
    check_pseudofunctor_shapes(p)?;
    let (c, d) = (p.source(), p.target());
    let field = c.field();
    let mut rep = ValidationReport::default();
    let name = |f: usize| c.cell_name(f);
    for f in 0..c.n_cells() {
        let ff = p.map_cell(f);
        if p.map_two(f, f, &c.unit2_coeffs(f)) != d.unit2_coeffs(ff) {
            rep.push(Violation::new("preserves identity 2-cells", vec![name(f)]));
        }
        for f1 in c.parallel_cells(f) {
            for f2 in c.parallel_cells(f) {
                let (a, b) = (c.dim2(f, f1), c.dim2(f1, f2));
                for i in 0..a {
                    for j in 0..b {
                        let (x, y) = (unit_vec(field, a, i), unit_vec(field, b, j));
                        let lhs = p.map_two(f, f2, &c.vcomp_coeffs(f, f1, f2, &y, &x));
                        let rhs = d.vcomp_coeffs(ff, p.map_cell(f1), p.map_cell(f2), &p.map_two(f1, f2, &y), &p.map_two(f, f1, &x));
                        if lhs != rhs {
                            rep.push(Violation::new("preserves vertical composition", vec![name(f), name(f1), name(f2), format!("{i},{j}")]));
                        }
                    }
                }
            }
        }
    }
    for t in c.composable_tuples(2) {
        let (g, f) = (t[0], t[1]);
        let h = p.fhat(g, f);
        if d.inverse2(&h).is_err() {
            rep.push(Violation::new("F̂ invertible", vec![name(g), name(f)]));
        }
        for g1 in c.parallel_cells(g) {
            for f1 in c.parallel_cells(f) {
                let h1 = p.fhat(g1, f1);
                for i in 0..c.dim2(g, g1) {
                    for j in 0..c.dim2(f, f1) {
                        let eta = c.basis2(g, g1, i);
                        let tau = c.basis2(f, f1, j);
                        let lhs = d.vcomp(&h1, &d.hcomp(&p.map_morphism(&eta), &p.map_morphism(&tau))?)?;
                        let rhs = d.vcomp(&p.map_morphism(&c.hcomp(&eta, &tau)?), &h)?;
                        if lhs != rhs {
                            rep.push(Violation::new("F̂ natural", vec![name(g), name(g1), name(f), name(f1), format!("{i},{j}")]));
                        }
                    }
                }
            }
        }
    }
    for x in 0..c.n_objects() {
        if d.inverse2(&p.f0(x)).is_err() {
            rep.push(Violation::new("F₀ invertible", vec![c.object_name(x)]));
        }
    }
    for t in c.composable_tuples(3) {
        let (h, g, f) = (t[0], t[1], t[2]);
        let (fh, fg, ff) = (p.map_cell(h), p.map_cell(g), p.map_cell(f));
        let gf = c.compose(g, f).unwrap();
        let hg = c.compose(h, g).unwrap();
        let lhs = d.vcomp(&p.fhat(h, gf), &d.whisker_left(fh, &p.fhat(g, f))?)?;
        let rhs = d.vcomp(&p.fhat(hg, f), &d.whisker_right(&p.fhat(h, g), ff)?)?;
        if lhs != rhs {
            rep.push(Violation::new("hexagonal axiom", vec![name(h), name(g), name(f)]));
        }
        let _ = fg;
    }
    for f in 0..c.n_cells() {
        let (x, y) = (c.cell_src(f), c.cell_dst(f));
        let ff = p.map_cell(f);
        if d.whisker_left(ff, &p.f0(x))? != p.fhat(f, c.identity(x)) {
            rep.push(Violation::new("right triangular axiom", vec![name(f)]));
        }
        if d.whisker_right(&p.f0(y), ff)? != p.fhat(c.identity(y), f) {
            rep.push(Violation::new("left triangular axiom", vec![name(f)]));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::Field;

    #[test]
    fn identity_functor_is_valid_and_unitary() {
        let c = Arc::new(TwoCategory::terminal(Field::Rational));
        let id = TablePseudofunctor::identity(c);
        assert!(validate_pseudofunctor(&id).unwrap().is_valid());
        assert!(id.is_unitary());
    }
}
