//! The `K[ε]/(ε²)`-linear extension of a Gray semigroup carrying a
//! first-order deformation, and a validator of the full (non-linearized)
//! structural equations over the extension ring.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gray::GraySemigroup;
use crate::twocat::{TwoCategory, ValidationReport, Violation};

use super::dual::Dual;
use super::structural::{check_structural, Ctx};
use super::{DeformationSpaces, FirstOrderDeformation};

/// A semigroupal structure on the `K[ε]/(ε²)`-linear extension of a Gray
/// semigroup: the base tables are unchanged, `a` and `⊗₀` stay identities,
/// and the structural 2-isomorphisms take values `x₀ + εx₁`.
#[derive(Clone, Debug)]
pub struct ExtendedStructure {
    gray: Arc<GraySemigroup>,
    tensorator: HashMap<(usize, usize, usize, usize), Dual>,
    associator: HashMap<(usize, usize, usize), Dual>,
    pentagonator: HashMap<[usize; 4], Dual>,
}

impl ExtendedStructure {
    pub fn gray(&self) -> &Arc<GraySemigroup> {
        &self.gray
    }

    /// `⊗̂_ε((f′,g′),(f,g))`.
    pub fn tensorator(&self, f1: usize, g1: usize, f: usize, g: usize) -> &Dual {
        &self.tensorator[&(f1, g1, f, g)]
    }

    /// `â_ε(f,g,h)`.
    pub fn associator(&self, f: usize, g: usize, h: usize) -> &Dual {
        &self.associator[&(f, g, h)]
    }

    /// `π_ε` at four objects.
    pub fn pentagonator(&self, objs: [usize; 4]) -> &Dual {
        &self.pentagonator[&objs]
    }

    /// Whether every structural 2-cell reduces mod ε to the undeformed one.
    pub fn reduces_to_base(&self) -> bool {
        let c = self.gray.base();
        self.tensorator.iter().all(|(&(f1, g1, f, g), d)| d.re == self.gray.tensorator(f1, g1, f, g))
            && self.associator.values().all(|d| d.re == c.id2(d.src()))
            && self.pentagonator.values().all(|d| d.re == c.id2(d.src()))
    }
}

/// Builds the extension carrying `d` (no checks).
pub fn extend(sp: &DeformationSpaces, d: &FirstOrderDeformation) -> Result<ExtendedStructure> {
    sp.check_shape(d)?;
    let x = Ctx::new(sp);
    let mut tensorator = HashMap::new();
    for (f1, g1, f, g) in x.g.composable_pairs() {
        tensorator.insert((f1, g1, f, g), Dual::new(x.t0(f1, g1, f, g), sp.tensorator_at(&d.tensorator1, f1, g1, f, g)?)?);
    }
    let mut associator = HashMap::new();
    for f in x.cells() {
        for g in x.cells() {
            for h in x.cells() {
                let eps = sp.associator_at(&d.associator1, f, g, h)?;
                associator.insert((f, g, h), Dual::new(x.id2(eps.src), eps)?);
            }
        }
    }
    let mut pentagonator = HashMap::new();
    for t in sp.pentagonator.tuples() {
        let o = [t[0], t[1], t[2], t[3]];
        let eps = sp.pentagonator_at(&d.pentagonator1, o)?;
        pentagonator.insert(o, Dual::new(x.id2(eps.src), eps)?);
    }
    Ok(ExtendedStructure { gray: sp.gray().clone(), tensorator, associator, pentagonator })
}

/// Builds the extension for a deformation satisfying the first-order
/// structural conditions, then validates the full structural equations
/// over `K[ε]/(ε²)`; a failure there is an internal invariant violation.
pub fn extend_and_deform(sp: &DeformationSpaces, d: &FirstOrderDeformation) -> Result<ExtendedStructure> {
    let pre = check_structural(sp, d)?;
    if !pre.is_valid() {
        return Err(Error::Precondition(format!("not a first-order deformation: fails {}", pre.failed_axioms().join(", "))));
    }
    let ext = extend(sp, d)?;
    if !ext.reduces_to_base() {
        return Err(Error::Invariant("extension does not reduce to the base structure".into()));
    }
    let report = validate_extended(&ext)?;
    if !report.is_valid() {
        return Err(Error::Invariant(format!("extended structure violates {}", report.failed_axioms().join(", "))));
    }
    Ok(ext)
}

/// All basis 2-cells out of `f`.
fn all_out(c: &TwoCategory, f: usize) -> Vec<(usize, Dual)> {
    let mut out = Vec::new();
    for f1 in c.parallel_cells(f) {
        for i in 0..c.dim2(f, f1) {
            out.push((f1, Dual::lift(&c.basis2(f, f1, i))));
        }
    }
    out
}

/// Checks every structural equation of a semigroupal 2-category (with
/// `a = id`, `⊗₀ = id`) over the extension ring, comparing both the
/// ε⁰ and ε¹ parts, on all index tuples and all basis 2-cells.
pub fn validate_extended(e: &ExtendedStructure) -> Result<ValidationReport> {
    let g = &*e.gray;
    let c = &**g.base();
    let mut report = ValidationReport::default();
    let name = |f: usize| c.cell_name(f);
    let obj = |x: usize| c.object_name(x);
    let v = |b: &Dual, a: &Dual| Dual::vcomp(c, b, a);
    let vs = |parts: &[Dual]| Dual::vcomp_all(c, parts);
    let t = |a: &Dual, b: &Dual| Dual::tensor(g, a, b);
    let id = |f: usize| Dual::id(c, f);
    let comp = |a: usize, b: usize| c.compose(a, b).expect("composable cells");
    let tc = |a: usize, b: usize| g.tensor_cells(a, b);
    let tc3 = |a: usize, b: usize, h: usize| g.tensor_cells_all(&[a, b, h]);
    let idt = |objs: &[usize]| c.identity(g.tensor_objects_all(objs));
    let inv = |a: &Dual| Dual::inverse(c, a);
    let cells = 0..c.n_cells();
    let pairs = g.composable_pairs();
    let composable: Vec<(usize, usize)> =
        cells.clone().flat_map(|f| cells.clone().filter_map(move |f1| c.compose(f1, f).map(|_| (f1, f)))).collect();
    let te = |f1, g1, f, gg| e.tensorator(f1, g1, f, gg);
    let ae = |f, gg, h| e.associator(f, gg, h);

    // (A⊗̂1)
    for &(f1, g1, f, gg) in &pairs {
        for (tf1, tau1) in all_out(c, f1) {
            for (tg1, sig1) in all_out(c, g1) {
                for (tf, tau) in all_out(c, f) {
                    for (tgg, sig) in all_out(c, gg) {
                        let lhs = v(&t(&Dual::hcomp(c, &tau1, &tau)?, &Dual::hcomp(c, &sig1, &sig)?)?, te(f1, g1, f, gg))?;
                        let rhs = v(te(tf1, tg1, tf, tgg), &Dual::hcomp(c, &t(&tau1, &sig1)?, &t(&tau, &sig)?)?)?;
                        if lhs != rhs {
                            report.push(Violation::new("A⊗̂1", vec![name(f1), name(g1), name(f), name(gg)]));
                        }
                    }
                }
            }
        }
    }
    // (A⊗̂2)
    for &(f1, g1, f, gg) in &pairs {
        for &(f2, _) in composable.iter().filter(|p| p.1 == f1) {
            for &(g2, _) in composable.iter().filter(|p| p.1 == g1) {
                let lhs = v(te(f2, g2, comp(f1, f), comp(g1, gg)), &Dual::whisker_left(c, tc(f2, g2), te(f1, g1, f, gg))?)?;
                let rhs = v(te(comp(f2, f1), comp(g2, g1), f, gg), &Dual::whisker_right(c, te(f2, g2, f1, g1), tc(f, gg))?)?;
                if lhs != rhs {
                    report.push(Violation::new("A⊗̂2", [f2, g2, f1, g1, f, gg].iter().map(|&x| name(x)).collect()));
                }
            }
        }
    }
    // (A⊗̂3)
    for f in cells.clone() {
        for gg in cells.clone() {
            let (i1, j1) = (c.identity(c.cell_dst(f)), c.identity(c.cell_dst(gg)));
            let (i0, j0) = (c.identity(c.cell_src(f)), c.identity(c.cell_src(gg)));
            if *te(i1, j1, f, gg) != id(tc(f, gg)) || *te(f, gg, i0, j0) != id(tc(f, gg)) {
                report.push(Violation::new("A⊗̂3", vec![name(f), name(gg)]));
            }
        }
    }
    // (Aâ1)
    for f in cells.clone() {
        for gg in cells.clone() {
            for h in cells.clone() {
                for (tf, tau) in all_out(c, f) {
                    for (tgg, sig) in all_out(c, gg) {
                        for (th, eta) in all_out(c, h) {
                            let lhs = v(&t(&tau, &t(&sig, &eta)?)?, ae(f, gg, h))?;
                            let rhs = v(ae(tf, tgg, th), &t(&t(&tau, &sig)?, &eta)?)?;
                            if lhs != rhs {
                                report.push(Violation::new("Aâ1", vec![name(f), name(gg), name(h)]));
                            }
                        }
                    }
                }
            }
        }
    }
    // (Aâ2)
    for &(f1, f) in &composable {
        for &(g1, gg) in &composable {
            for &(h1, h) in &composable {
                let (ff, ggg, hh) = (comp(f1, f), comp(g1, gg), comp(h1, h));
                let lhs = vs(&[ae(ff, ggg, hh).clone(), t(te(f1, g1, f, gg), &id(hh))?, te(tc(f1, g1), h1, tc(f, gg), h).clone()])?;
                let rhs = vs(&[
                    t(&id(ff), te(g1, h1, gg, h))?,
                    te(f1, tc(g1, h1), f, tc(gg, h)).clone(),
                    Dual::whisker_right(c, ae(f1, g1, h1), tc3(f, gg, h))?,
                    Dual::whisker_left(c, tc3(f1, g1, h1), ae(f, gg, h))?,
                ])?;
                if lhs != rhs {
                    report.push(Violation::new("Aâ2", [f1, g1, h1, f, gg, h].iter().map(|&x| name(x)).collect()));
                }
            }
        }
    }
    // (Aâ3)
    let no = c.n_objects();
    for i in 0..no.pow(3) {
        let o = [i / (no * no) % no, i / no % no, i % no];
        let (a, b, cc) = (c.identity(o[0]), c.identity(o[1]), c.identity(o[2]));
        if *ae(a, b, cc) != id(tc3(a, b, cc)) {
            report.push(Violation::new("Aâ3", o.iter().map(|&x| obj(x)).collect()));
        }
    }
    // (Aπ1)
    for f in cells.clone() {
        for gg in cells.clone() {
            for h in cells.clone() {
                for k in cells.clone() {
                    let s = [f, gg, h, k].map(|x| c.cell_src(x));
                    let d = [f, gg, h, k].map(|x| c.cell_dst(x));
                    let fghk = g.tensor_cells_all(&[f, gg, h, k]);
                    let (ghk, fgh) = (tc3(gg, h, k), tc3(f, gg, h));
                    let lhs = vs(&[
                        ae(f, gg, tc(h, k)).clone(),
                        ae(tc(f, gg), h, k).clone(),
                        Dual::whisker_left(c, fghk, e.pentagonator(s))?,
                    ])?;
                    let rhs = vs(&[
                        Dual::whisker_right(c, e.pentagonator(d), fghk)?,
                        inv(te(c.identity(d[0]), idt(&d[1..]), f, ghk))?,
                        t(&id(f), ae(gg, h, k))?,
                        te(f, ghk, c.identity(s[0]), idt(&s[1..])).clone(),
                        ae(f, tc(gg, h), k).clone(),
                        inv(te(idt(&d[..3]), c.identity(d[3]), fgh, k))?,
                        t(ae(f, gg, h), &id(k))?,
                        te(fgh, k, idt(&s[..3]), c.identity(s[3])).clone(),
                    ])?;
                    if lhs != rhs {
                        report.push(Violation::new("Aπ1", vec![name(f), name(gg), name(h), name(k)]));
                    }
                }
            }
        }
    }
    // (Aπ2), with the pasted tensors 1⊗̃π and π⊗̃1.
    for i in 0..no.pow(5) {
        let o: Vec<usize> = (0..5).rev().map(|p| i / no.pow(p) % no).collect();
        let (x, y, z, tt, u) = (o[0], o[1], o[2], o[3], o[4]);
        let ob = |a: &[usize]| g.tensor_objects_all(a);
        let (ixyzt, iyztu) = (idt(&[x, y, z, tt]), idt(&[y, z, tt, u]));
        let right_pasted = {
            let s = te(ixyzt, c.identity(u), ixyzt, c.identity(u));
            vs(&[inv(s)?, t(e.pentagonator([x, y, z, tt]), &id(c.identity(u)))?, s.clone(), s.clone()])?
        };
        let left_pasted = {
            let s = te(c.identity(x), iyztu, c.identity(x), iyztu);
            vs(&[inv(s)?, t(&id(c.identity(x)), e.pentagonator([y, z, tt, u]))?, s.clone(), s.clone()])?
        };
        let lhs = vs(&[
            e.pentagonator([ob(&[x, y]), z, tt, u]).clone(),
            inv(ae(c.identity(x), c.identity(y), idt(&[z, tt, u])))?,
            e.pentagonator([x, y, ob(&[z, tt]), u]).clone(),
            right_pasted,
        ])?;
        let rhs = vs(&[
            e.pentagonator([x, y, z, ob(&[tt, u])]).clone(),
            ae(idt(&[x, y, z]), c.identity(tt), c.identity(u)).clone(),
            e.pentagonator([x, ob(&[y, z]), tt, u]).clone(),
            left_pasted,
            ae(c.identity(x), idt(&[y, z, tt]), c.identity(u)).clone(),
        ])?;
        if lhs != rhs {
            report.push(Violation::new("Aπ2", o.iter().map(|&a| obj(a)).collect()));
        }
    }
    Ok(report)
}
