//! Pseudonatural transformations and (pseudo)modifications.

use crate::error::{Error, Result};

use super::category::TwoMorphism;
use super::pseudofunctor::Pseudofunctor;
use super::report::{ValidationReport, Violation};

/// `ξ: F ⇒ G` with components `ξ_X: F X → G X` and
/// `ξ̂(f): G(f)∘ξ_X ⇒ ξ_Y∘F(f)`.
#[derive(Clone, Debug)]
pub struct PseudonaturalTransformation {
    pub xi: Vec<usize>,
    pub xihat: Vec<TwoMorphism>,
}

/// Family `𝔫_X: ξ_X ⇒ ζ_X`.
#[derive(Clone, Debug)]
pub struct Modification {
    pub n: Vec<TwoMorphism>,
}

/// Outcome of [`validate_modification`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModificationKind {
    /// Every naturality square commutes.
    Modification,
    /// Components have the right shapes but some square fails.
    Pseudomodification(ValidationReport),
}

fn check_xi_shapes(f: &dyn Pseudofunctor, g: &dyn Pseudofunctor, xi: &PseudonaturalTransformation) -> Result<()> {
    let (c, d) = (f.source(), f.target());
    if xi.xi.len() != c.n_objects() || xi.xihat.len() != c.n_cells() {
        return Err(Error::Structural("transformation tables have wrong length".into()));
    }
    for x in 0..c.n_objects() {
        let cell = xi.xi[x];
        if d.cell_src(cell) != f.map_object(x) || d.cell_dst(cell) != g.map_object(x) {
            return Err(Error::Structural(format!("ξ_{} has wrong endpoints", c.object_name(x))));
        }
    }
    for h in 0..c.n_cells() {
        let (x, y) = (c.cell_src(h), c.cell_dst(h));
        let s = d.compose(g.map_cell(h), xi.xi[x]);
        let t = d.compose(xi.xi[y], f.map_cell(h));
        let m = &xi.xihat[h];
        if Some(m.src) != s || Some(m.dst) != t || m.coeffs.len() != d.dim2(m.src, m.dst) {
            return Err(Error::Structural(format!("ξ̂({}) has wrong shape", c.cell_name(h))));
        }
    }
    Ok(())
}

/// Checks naturality and invertibility of `ξ̂` and both coherence diagrams.
pub fn validate_transformation(
    f: &dyn Pseudofunctor,
    g: &dyn Pseudofunctor,
    xi: &PseudonaturalTransformation,
) -> Result<ValidationReport> {
    check_xi_shapes(f, g, xi)?;
    let (c, d) = (f.source(), f.target());
    let mut rep = ValidationReport::default();
    for h in 0..c.n_cells() {
        let x = c.cell_src(h);
        let y = c.cell_dst(h);
        if d.inverse2(&xi.xihat[h]).is_err() {
            rep.push(Violation::new("ξ̂ invertible", vec![c.cell_name(h)]));
        }
        for h1 in c.parallel_cells(h) {
            for i in 0..c.dim2(h, h1) {
                let tau = c.basis2(h, h1, i);
                let lhs = d.vcomp(&xi.xihat[h1], &d.whisker_right(&g.map_morphism(&tau), xi.xi[x])?)?;
                let rhs = d.vcomp(&d.whisker_left(xi.xi[y], &f.map_morphism(&tau))?, &xi.xihat[h])?;
                if lhs != rhs {
                    rep.push(Violation::new("ξ̂ natural", vec![c.cell_name(h), c.cell_name(h1), i.to_string()]));
                }
            }
        }
    }
    for t in c.composable_tuples(2) {
        let (gg, ff) = (t[0], t[1]);
        let (x, z) = (c.cell_src(ff), c.cell_dst(gg));
        let step1 = d.whisker_left(g.map_cell(gg), &xi.xihat[ff])?;
        let step2 = d.whisker_right(&xi.xihat[gg], f.map_cell(ff))?;
        let step3 = d.whisker_left(xi.xi[z], &f.fhat(gg, ff))?;
        let lhs = d.vcomp(&step3, &d.vcomp(&step2, &step1)?)?;
        let gf = c.compose(gg, ff).unwrap();
        let rhs = d.vcomp(&xi.xihat[gf], &d.whisker_right(&g.fhat(gg, ff), xi.xi[x])?)?;
        if lhs != rhs {
            rep.push(Violation::new("transformation composition coherence", vec![c.cell_name(gg), c.cell_name(ff)]));
        }
    }
    for x in 0..c.n_objects() {
        let lhs = d.vcomp(&d.whisker_left(xi.xi[x], &f.f0(x))?, &xi.xihat[c.identity(x)])?;
        let rhs = d.whisker_right(&g.f0(x), xi.xi[x])?;
        if lhs != rhs {
            rep.push(Violation::new("transformation unit coherence", vec![c.object_name(x)]));
        }
    }
    Ok(rep)
}

/// Distinguishes modifications from mere pseudomodifications:
/// `ζ̂(f)·(1_{G f}∘𝔫_X) = (𝔫_Y∘1_{F f})·ξ̂(f)` for all `f`.
pub fn validate_modification(
    f: &dyn Pseudofunctor,
    g: &dyn Pseudofunctor,
    xi: &PseudonaturalTransformation,
    zeta: &PseudonaturalTransformation,
    m: &Modification,
) -> Result<ModificationKind> {
    check_xi_shapes(f, g, xi)?;
    check_xi_shapes(f, g, zeta)?;
    let (c, d) = (f.source(), f.target());
    if m.n.len() != c.n_objects() {
        return Err(Error::Structural("modification has wrong number of components".into()));
    }
    for x in 0..c.n_objects() {
        let n = &m.n[x];
        if n.src != xi.xi[x] || n.dst != zeta.xi[x] || n.coeffs.len() != d.dim2(n.src, n.dst) {
            return Err(Error::Structural(format!("𝔫_{} has wrong shape", c.object_name(x))));
        }
    }
    let mut rep = ValidationReport::default();
    for h in 0..c.n_cells() {
        let (x, y) = (c.cell_src(h), c.cell_dst(h));
        let lhs = d.vcomp(&zeta.xihat[h], &d.whisker_left(g.map_cell(h), &m.n[x])?)?;
        let rhs = d.vcomp(&d.whisker_right(&m.n[y], f.map_cell(h))?, &xi.xihat[h])?;
        if lhs != rhs {
            rep.push(Violation::new("modification naturality", vec![c.cell_name(h)]));
        }
    }
    Ok(if rep.is_valid() { ModificationKind::Modification } else { ModificationKind::Pseudomodification(rep) })
}

/// The identity transformation of a pseudofunctor.
pub fn identity_transformation(f: &dyn Pseudofunctor) -> PseudonaturalTransformation {
    let (c, d) = (f.source(), f.target());
    let xi: Vec<usize> = (0..c.n_objects()).map(|x| d.identity(f.map_object(x))).collect();
    let xihat = (0..c.n_cells()).map(|h| d.id2(f.map_cell(h))).collect();
    PseudonaturalTransformation { xi, xihat }
}
