//! The first-order structural equations of a deformed Gray semigroup and
//! the first-order equivalence equations, evaluated directly on the
//! families (not through the coboundary matrices).

use crate::error::Result;
use crate::gray::GraySemigroup;
use crate::twocat::{TwoCategory, TwoMorphism, ValidationReport, Violation};

use super::{DeformationSpaces, EquivalenceWitness, FirstOrderDeformation};

/// Names of the first-order structural conditions, in checking order.
pub const STRUCTURAL_CONDITIONS: [&str; 8] = ["A⊗̂1", "A⊗̂2", "A⊗̂3", "Aâ1", "Aâ2", "Aâ3", "Aπ1", "Aπ2"];

/// Names of the first-order equivalence conditions, in checking order.
pub const EQUIVALENCE_CONDITIONS: [&str; 5] = ["Eψ̂1", "Eψ̂2", "Eψ̂3", "Eω1", "Eω2"];

pub(super) struct Ctx<'a> {
    pub g: &'a GraySemigroup,
    pub c: &'a TwoCategory,
    pub sp: &'a DeformationSpaces,
}

impl<'a> Ctx<'a> {
    pub fn new(sp: &'a DeformationSpaces) -> Self {
        Ctx { g: sp.gray(), c: sp.gray().base(), sp }
    }

    pub fn cells(&self) -> std::ops::Range<usize> {
        0..self.c.n_cells()
    }

    pub fn objects(&self) -> std::ops::Range<usize> {
        0..self.c.n_objects()
    }

    /// Composable `(later, earlier)` pairs of base 1-cells.
    pub fn composable(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for f in self.cells() {
            for f1 in self.cells() {
                if self.c.compose(f1, f).is_some() {
                    out.push((f1, f));
                }
            }
        }
        out
    }

    pub fn comp(&self, g: usize, f: usize) -> usize {
        self.c.compose(g, f).expect("composable cells")
    }

    pub fn tc(&self, f: usize, g: usize) -> usize {
        self.g.tensor_cells(f, g)
    }

    pub fn tc3(&self, f: usize, g: usize, h: usize) -> usize {
        self.g.tensor_cells_all(&[f, g, h])
    }

    /// Identity 1-cell of `X₀⊗…⊗X_k`.
    pub fn idt(&self, objs: &[usize]) -> usize {
        self.c.identity(self.g.tensor_objects_all(objs))
    }

    pub fn src_obj(&self, f: usize) -> usize {
        self.c.cell_src(f)
    }

    pub fn dst_obj(&self, f: usize) -> usize {
        self.c.cell_dst(f)
    }

    pub fn id2(&self, f: usize) -> TwoMorphism {
        self.c.id2(f)
    }

    pub fn t0(&self, f1: usize, g1: usize, f: usize, g: usize) -> TwoMorphism {
        self.g.tensorator(f1, g1, f, g)
    }

    pub fn v(&self, b: &TwoMorphism, a: &TwoMorphism) -> Result<TwoMorphism> {
        self.c.vcomp(b, a)
    }

    /// `1_x ∘ α`.
    pub fn wl(&self, x: usize, a: &TwoMorphism) -> Result<TwoMorphism> {
        self.c.whisker_left(x, a)
    }

    /// `β ∘ 1_y`.
    pub fn wr(&self, b: &TwoMorphism, y: usize) -> Result<TwoMorphism> {
        self.c.whisker_right(b, y)
    }

    pub fn t(&self, a: &TwoMorphism, b: &TwoMorphism) -> Result<TwoMorphism> {
        self.g.tensor2(a, b)
    }

    pub fn neg(&self, a: &TwoMorphism) -> TwoMorphism {
        self.c.scale2(a, &-self.c.field().one())
    }

    pub fn sum(&self, parts: &[TwoMorphism]) -> Result<TwoMorphism> {
        let (first, rest) = parts.split_first().expect("non-empty sum");
        rest.iter().try_fold(first.clone(), |acc, x| self.c.add2(&acc, x))
    }

    pub fn is_zero(&self, a: &TwoMorphism) -> bool {
        a.coeffs.iter().all(|x| x.is_zero())
    }

    pub fn name(&self, f: usize) -> String {
        self.c.cell_name(f)
    }

    pub fn obj(&self, x: usize) -> String {
        self.c.object_name(x)
    }

    /// Basis 2-cells out of `f` into every parallel 1-cell.
    pub fn generators(&self, f: usize) -> Vec<(usize, TwoMorphism)> {
        let mut out = Vec::new();
        for f1 in self.c.parallel_cells(f) {
            for i in 0..self.c.dim2(f, f1) {
                out.push((f1, self.c.basis2(f, f1, i)));
            }
        }
        out
    }

    /// Every way of replacing one slot of `cells` by a basis 2-cell out of
    /// it (identities elsewhere): `(target cells, 2-cells)`.
    pub fn slot_variations(&self, cells: &[usize]) -> Vec<(Vec<usize>, Vec<TwoMorphism>)> {
        let mut out = Vec::new();
        for (k, &f) in cells.iter().enumerate() {
            for (f1, tau) in self.generators(f) {
                let mut targets = cells.to_vec();
                targets[k] = f1;
                let cellsv: Vec<TwoMorphism> =
                    cells.iter().enumerate().map(|(j, &x)| if j == k { tau.clone() } else { self.id2(x) }).collect();
                out.push((targets, cellsv));
            }
        }
        out
    }
}

/// Collects violations, optionally stopping at the first one.
struct Sink {
    report: ValidationReport,
    stop_early: bool,
}

impl Sink {
    fn check(&mut self, ok: bool, axiom: &str, witness: impl FnOnce() -> Vec<String>) -> bool {
        if !ok {
            self.report.push(Violation::new(axiom, witness()));
            return !self.stop_early;
        }
        true
    }
}

macro_rules! check {
    ($sink:expr, $ok:expr, $axiom:expr, $witness:expr) => {
        if !$sink.check($ok, $axiom, || $witness) {
            return Ok(());
        }
    };
}

fn structural_into(sp: &DeformationSpaces, d: &FirstOrderDeformation, sink: &mut Sink) -> Result<()> {
    let x = Ctx::new(sp);
    let t1 = |f1, g1, f, g| sp.tensorator_at(&d.tensorator1, f1, g1, f, g);
    let a1 = |f, g, h| sp.associator_at(&d.associator1, f, g, h);
    let p1 = |o: [usize; 4]| sp.pentagonator_at(&d.pentagonator1, o);
    let pairs = x.g.composable_pairs();
    let composable = x.composable();

    // (A⊗̂1) naturality of ⊗̂⁽¹⁾, one slot at a time.
    for &(f1, g1, f, g) in &pairs {
        for (tg, cells) in x.slot_variations(&[f1, g1, f, g]) {
            let [tau1, sig1, tau, sig] = [&cells[0], &cells[1], &cells[2], &cells[3]];
            let lhs = x.v(&x.t(&x.c.hcomp(tau1, tau)?, &x.c.hcomp(sig1, sig)?)?, &t1(f1, g1, f, g)?)?;
            let rhs = x.v(&t1(tg[0], tg[1], tg[2], tg[3])?, &x.c.hcomp(&x.t(tau1, sig1)?, &x.t(tau, sig)?)?)?;
            check!(sink, lhs == rhs, "A⊗̂1", vec![x.name(f1), x.name(g1), x.name(f), x.name(g)]);
        }
    }

    // (A⊗̂2) first-order composition coherence.
    for &(f1, g1, f, g) in &pairs {
        for &(f2, f1b) in &composable {
            if f1b != f1 {
                continue;
            }
            for &(g2, g1b) in &composable {
                if g1b != g1 {
                    continue;
                }
                let (f1f, g1g, f2f1, g2g1) = (x.comp(f1, f), x.comp(g1, g), x.comp(f2, f1), x.comp(g2, g1));
                let lhs = x.sum(&[
                    x.v(&t1(f2, g2, f1f, g1g)?, &x.wl(x.tc(f2, g2), &x.t0(f1, g1, f, g))?)?,
                    x.v(&x.t0(f2, g2, f1f, g1g), &x.wl(x.tc(f2, g2), &t1(f1, g1, f, g)?)?)?,
                ])?;
                let rhs = x.sum(&[
                    x.v(&t1(f2f1, g2g1, f, g)?, &x.wr(&x.t0(f2, g2, f1, g1), x.tc(f, g))?)?,
                    x.v(&x.t0(f2f1, g2g1, f, g), &x.wr(&t1(f2, g2, f1, g1)?, x.tc(f, g))?)?,
                ])?;
                check!(sink, lhs == rhs, "A⊗̂2", [f2, g2, f1, g1, f, g].iter().map(|&c| x.name(c)).collect());
            }
        }
    }

    // (A⊗̂3) with ⊗₀⁽¹⁾ = 0: ⊗̂⁽¹⁾ vanishes when either pair is (id, id).
    for f in x.cells() {
        for g in x.cells() {
            let (i1, j1) = (x.c.identity(x.dst_obj(f)), x.c.identity(x.dst_obj(g)));
            let (i0, j0) = (x.c.identity(x.src_obj(f)), x.c.identity(x.src_obj(g)));
            check!(sink, x.is_zero(&t1(i1, j1, f, g)?), "A⊗̂3", vec!["(id,id)".into(), x.name(f), x.name(g)]);
            check!(sink, x.is_zero(&t1(f, g, i0, j0)?), "A⊗̂3", vec![x.name(f), x.name(g), "(id,id)".into()]);
        }
    }

    // (Aâ1) naturality of â⁽¹⁾.
    for f in x.cells() {
        for g in x.cells() {
            for h in x.cells() {
                for (tg, cells) in x.slot_variations(&[f, g, h]) {
                    let lhs = x.v(&x.t(&cells[0], &x.t(&cells[1], &cells[2])?)?, &a1(f, g, h)?)?;
                    let rhs = x.v(&a1(tg[0], tg[1], tg[2])?, &x.t(&x.t(&cells[0], &cells[1])?, &cells[2])?)?;
                    check!(sink, lhs == rhs, "Aâ1", vec![x.name(f), x.name(g), x.name(h)]);
                }
            }
        }
    }

    // (Aâ2) first-order compatibility of â with ⊗̂.
    for &(f1, f) in &composable {
        for &(g1, g) in &composable {
            for &(h1, h) in &composable {
                let (ff, gg, hh) = (x.comp(f1, f), x.comp(g1, g), x.comp(h1, h));
                let (fg1, fg) = (x.tc(f1, g1), x.tc(f, g));
                let (gh1, gh) = (x.tc(g1, h1), x.tc(g, h));
                let l0a = x.t(&x.t0(f1, g1, f, g), &x.id2(hh))?;
                let l0b = x.t0(fg1, h1, fg, h);
                let r0a = x.t(&x.id2(ff), &x.t0(g1, h1, g, h))?;
                let r0b = x.t0(f1, gh1, f, gh);
                let r0 = x.v(&r0a, &r0b)?;
                let lhs = x.sum(&[
                    x.v(&a1(ff, gg, hh)?, &x.v(&l0a, &l0b)?)?,
                    x.v(&x.t(&t1(f1, g1, f, g)?, &x.id2(hh))?, &l0b)?,
                    x.v(&l0a, &t1(fg1, h1, fg, h)?)?,
                ])?;
                let rhs = x.sum(&[
                    x.v(&x.t(&x.id2(ff), &t1(g1, h1, g, h)?)?, &r0b)?,
                    x.v(&r0a, &t1(f1, gh1, f, gh)?)?,
                    x.v(&r0, &x.wr(&a1(f1, g1, h1)?, x.tc3(f, g, h))?)?,
                    x.v(&r0, &x.wl(x.tc3(f1, g1, h1), &a1(f, g, h)?)?)?,
                ])?;
                check!(sink, lhs == rhs, "Aâ2", [f1, g1, h1, f, g, h].iter().map(|&c| x.name(c)).collect());
            }
        }
    }

    // (Aâ3) with ⊗₀⁽¹⁾ = 0.
    for a in x.objects() {
        for b in x.objects() {
            for c in x.objects() {
                let v = a1(x.c.identity(a), x.c.identity(b), x.c.identity(c))?;
                check!(sink, x.is_zero(&v), "Aâ3", vec![x.obj(a), x.obj(b), x.obj(c)]);
            }
        }
    }

    // (Aπ1) first-order compatibility of π with â and ⊗̂.
    for f in x.cells() {
        for g in x.cells() {
            for h in x.cells() {
                for k in x.cells() {
                    let s = [f, g, h, k].map(|c| x.src_obj(c));
                    let e = [f, g, h, k].map(|c| x.dst_obj(c));
                    let fghk = x.g.tensor_cells_all(&[f, g, h, k]);
                    let (ghk, fgh) = (x.tc3(g, h, k), x.tc3(f, g, h));
                    let lhs = x.sum(&[a1(f, g, x.tc(h, k))?, a1(x.tc(f, g), h, k)?, x.wl(fghk, &p1(s)?)?])?;
                    let rhs = x.sum(&[
                        x.wr(&p1(e)?, fghk)?,
                        x.neg(&t1(x.c.identity(e[0]), x.idt(&e[1..]), f, ghk)?),
                        x.t(&x.id2(f), &a1(g, h, k)?)?,
                        t1(f, ghk, x.c.identity(s[0]), x.idt(&s[1..]))?,
                        a1(f, x.tc(g, h), k)?,
                        x.neg(&t1(x.idt(&e[..3]), x.c.identity(e[3]), fgh, k)?),
                        x.t(&a1(f, g, h)?, &x.id2(k))?,
                        t1(fgh, k, x.idt(&s[..3]), x.c.identity(s[3]))?,
                    ])?;
                    check!(sink, lhs == rhs, "Aπ1", vec![x.name(f), x.name(g), x.name(h), x.name(k)]);
                }
            }
        }
    }

    // (Aπ2) first-order pentagonator coherence; the pasted terms π⊗̃1 and
    // 1⊗̃π contribute their tensorator factors (one inverse, two direct).
    let no = x.c.n_objects();
    for idx in 0..no.pow(5) {
        let o: Vec<usize> = (0..5).rev().map(|p| idx / no.pow(p) % no).collect();
        let (xx, y, z, t, u) = (o[0], o[1], o[2], o[3], o[4]);
        let tens = |a: &[usize]| x.g.tensor_objects_all(a);
        let id = |a: usize| x.c.identity(a);
        let (ixyzt, iyztu) = (x.idt(&[xx, y, z, t]), x.idt(&[y, z, t, u]));
        let lhs = x.sum(&[
            p1([tens(&[xx, y]), z, t, u])?,
            x.neg(&a1(id(xx), id(y), x.idt(&[z, t, u]))?),
            p1([xx, y, tens(&[z, t]), u])?,
            x.t(&p1([xx, y, z, t])?, &x.id2(id(u)))?,
            t1(ixyzt, id(u), ixyzt, id(u))?,
        ])?;
        let rhs = x.sum(&[
            p1([xx, y, z, tens(&[t, u])])?,
            a1(x.idt(&[xx, y, z]), id(t), id(u))?,
            p1([xx, tens(&[y, z]), t, u])?,
            x.t(&x.id2(id(xx)), &p1([y, z, t, u])?)?,
            t1(id(xx), iyztu, id(xx), iyztu)?,
            a1(id(xx), x.idt(&[y, z, t]), id(u))?,
        ])?;
        check!(sink, lhs == rhs, "Aπ2", o.iter().map(|&a| x.obj(a)).collect());
    }
    Ok(())
}

/// Checks the eight first-order structural conditions (A⊗̂1)–(Aπ2) on a
/// candidate deformation; the report names every violated condition with
/// the offending arguments.
pub fn check_structural(sp: &DeformationSpaces, d: &FirstOrderDeformation) -> Result<ValidationReport> {
    sp.check_shape(d)?;
    let mut sink = Sink { report: ValidationReport::default(), stop_early: false };
    structural_into(sp, d, &mut sink)?;
    Ok(sink.report)
}

/// Whether `d` satisfies all structural conditions (stops at the first failure).
pub fn is_structural(sp: &DeformationSpaces, d: &FirstOrderDeformation) -> Result<bool> {
    sp.check_shape(d)?;
    let mut sink = Sink { report: ValidationReport::default(), stop_early: true };
    structural_into(sp, d, &mut sink)?;
    Ok(sink.report.is_valid())
}

/// The two sides of (Eψ̂2), (Eω1) and (Eω2), computed once so that
/// [`check_equivalence`] and [`apply_witness`] share a single transcription.
/// Each side is returned as `(primed term, remainder)` where the equation
/// reads `primed + remainder_lhs = remainder_rhs`.
struct Sides<'a> {
    x: Ctx<'a>,
    d: &'a FirstOrderDeformation,
    w: &'a EquivalenceWitness,
}

impl<'a> Sides<'a> {
    fn psi(&self, f: usize, g: usize) -> Result<TwoMorphism> {
        self.x.sp.psi_at(&self.w.psi1, f, g)
    }

    fn omega(&self, o: [usize; 3]) -> Result<TwoMorphism> {
        self.x.sp.omega_at(&self.w.omega1, o)
    }

    /// (Eψ̂2) at a composable pair: `⊗̂⁽¹⁾′ = ψ̂(f′f,g′g)·⊗̂ + ⊗̂⁽¹⁾ − ⊗̂·(ψ̂(f′,g′)∘1) − ⊗̂·(1∘ψ̂(f,g))`.
    fn tensorator_prime(&self, f1: usize, g1: usize, f: usize, g: usize) -> Result<TwoMorphism> {
        let x = &self.x;
        let t0 = x.t0(f1, g1, f, g);
        x.sum(&[
            x.v(&self.psi(x.comp(f1, f), x.comp(g1, g))?, &t0)?,
            x.sp.tensorator_at(&self.d.tensorator1, f1, g1, f, g)?,
            x.neg(&x.v(&t0, &x.wr(&self.psi(f1, g1)?, x.tc(f, g))?)?),
            x.neg(&x.v(&t0, &x.wl(x.tc(f1, g1), &self.psi(f, g)?)?)?),
        ])
    }

    /// (Eω1) with the primed associator isolated; `tp` evaluates `⊗̂⁽¹⁾′`.
    fn associator_prime(&self, f: usize, g: usize, h: usize, tp: &dyn Fn(usize, usize, usize, usize) -> Result<TwoMorphism>) -> Result<TwoMorphism> {
        let x = &self.x;
        let (s, e) = ([f, g, h].map(|c| x.src_obj(c)), [f, g, h].map(|c| x.dst_obj(c)));
        let fgh = x.tc3(f, g, h);
        let (fg, gh) = (x.tc(f, g), x.tc(g, h));
        let rhs = x.sum(&[
            x.wr(&self.omega(e)?, fgh)?,
            x.neg(&tp(x.c.identity(e[0]), x.idt(&e[1..]), f, gh)?),
            x.t(&x.id2(f), &self.psi(g, h)?)?,
            tp(f, gh, x.c.identity(s[0]), x.idt(&s[1..]))?,
            self.psi(f, gh)?,
            x.sp.associator_at(&self.d.associator1, f, g, h)?,
        ])?;
        let lhs_rest = x.sum(&[
            x.neg(&tp(x.idt(&e[..2]), x.c.identity(e[2]), fg, h)?),
            x.t(&self.psi(f, g)?, &x.id2(h))?,
            tp(fg, h, x.idt(&s[..2]), x.c.identity(s[2]))?,
            self.psi(fg, h)?,
            x.wl(fgh, &self.omega(s)?)?,
        ])?;
        x.c.sub2(&rhs, &lhs_rest)
    }

    /// (Eω2) with the primed pentagonator isolated; `tp`, `ap` evaluate the
    /// primed tensorator and associator.
    fn pentagonator_prime(
        &self,
        o: [usize; 4],
        tp: &dyn Fn(usize, usize, usize, usize) -> Result<TwoMorphism>,
        ap: &dyn Fn(usize, usize, usize) -> Result<TwoMorphism>,
    ) -> Result<TwoMorphism> {
        let x = &self.x;
        let [xx, y, z, t] = o;
        let id = |a: usize| x.c.identity(a);
        let tens = |a: &[usize]| x.g.tensor_objects_all(a);
        let (ixy, izt) = (x.idt(&[xx, y]), x.idt(&[z, t]));
        let rhs = x.sum(&[
            x.neg(&x.sp.associator_at(&self.d.associator1, ixy, id(z), id(t))?),
            self.omega([tens(&[xx, y]), z, t])?,
            x.neg(&x.sp.tensorator_at(&self.d.tensorator1, ixy, izt, ixy, izt)?),
            x.neg(&x.t(&self.psi(id(xx), id(y))?, &x.id2(izt))?),
            x.t(&x.id2(ixy), &self.psi(id(z), id(t))?)?,
            tp(ixy, izt, ixy, izt)?,
            x.neg(&ap(id(xx), id(y), izt)?),
            self.omega([xx, y, tens(&[z, t])])?,
            x.sp.pentagonator_at(&self.d.pentagonator1, o)?,
        ])?;
        let lhs_rest = x.sum(&[
            x.t(&self.omega([xx, y, z])?, &x.id2(id(t)))?,
            self.psi(x.idt(&[xx, y, z]), id(t))?,
            x.neg(&ap(id(xx), x.idt(&[y, z]), id(t))?),
            self.omega([xx, tens(&[y, z]), t])?,
            x.t(&x.id2(id(xx)), &self.omega([y, z, t])?)?,
            self.psi(id(xx), x.idt(&[y, z, t]))?,
        ])?;
        x.c.sub2(&rhs, &lhs_rest)
    }
}

fn objects4(no: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..no.pow(4)).map(move |i| [i / (no * no * no) % no, i / (no * no) % no, i / no % no, i % no])
}

/// Checks the five first-order equivalence conditions (Eψ̂1)–(Eω2) for
/// deformations `d1`, `d2` and witness `w`.
pub fn check_equivalence(
    sp: &DeformationSpaces,
    d1: &FirstOrderDeformation,
    d2: &FirstOrderDeformation,
    w: &EquivalenceWitness,
) -> Result<ValidationReport> {
    sp.check_shape(d1)?;
    sp.check_shape(d2)?;
    sp.check_witness_shape(w)?;
    let sides = Sides { x: Ctx::new(sp), d: d1, w };
    let x = &sides.x;
    let mut report = ValidationReport::default();
    let tp = |f1, g1, f, g| sp.tensorator_at(&d2.tensorator1, f1, g1, f, g);
    let ap = |f, g, h| sp.associator_at(&d2.associator1, f, g, h);

    // (Eψ̂1) naturality of ψ̂⁽¹⁾.
    for f in x.cells() {
        for g in x.cells() {
            for (tg, cells) in x.slot_variations(&[f, g]) {
                let tau = x.t(&cells[0], &cells[1])?;
                let lhs = x.v(&tau, &sides.psi(f, g)?)?;
                let rhs = x.v(&sides.psi(tg[0], tg[1])?, &tau)?;
                if lhs != rhs {
                    report.push(Violation::new("Eψ̂1", vec![x.name(f), x.name(g)]));
                }
            }
        }
    }
    // (Eψ̂2).
    for (f1, g1, f, g) in x.g.composable_pairs() {
        if tp(f1, g1, f, g)? != sides.tensorator_prime(f1, g1, f, g)? {
            report.push(Violation::new("Eψ̂2", [f1, g1, f, g].iter().map(|&c| x.name(c)).collect()));
        }
    }
    // (Eψ̂3) with ⊗₀⁽¹⁾ = (⊗₀⁽¹⁾)′ = 0.
    for a in x.objects() {
        for b in x.objects() {
            if !x.is_zero(&sides.psi(x.c.identity(a), x.c.identity(b))?) {
                report.push(Violation::new("Eψ̂3", vec![x.obj(a), x.obj(b)]));
            }
        }
    }
    // (Eω1).
    for f in x.cells() {
        for g in x.cells() {
            for h in x.cells() {
                if ap(f, g, h)? != sides.associator_prime(f, g, h, &tp)? {
                    report.push(Violation::new("Eω1", vec![x.name(f), x.name(g), x.name(h)]));
                }
            }
        }
    }
    // (Eω2).
    for o in objects4(x.c.n_objects()) {
        if sp.pentagonator_at(&d2.pentagonator1, o)? != sides.pentagonator_prime(o, &tp, &ap)? {
            report.push(Violation::new("Eω2", o.iter().map(|&a| x.obj(a)).collect()));
        }
    }
    Ok(report)
}

/// The deformation `d′` that the equivalence equations force for a given
/// `d` and witness `w` (solving (Eψ̂2), (Eω1), (Eω2) for the primed data).
/// `check_equivalence(d, apply_witness(d, w), w)` passes exactly when `w`
/// itself satisfies (Eψ̂1) and (Eψ̂3).
pub fn apply_witness(sp: &DeformationSpaces, d: &FirstOrderDeformation, w: &EquivalenceWitness) -> Result<FirstOrderDeformation> {
    sp.check_shape(d)?;
    sp.check_witness_shape(w)?;
    let sides = Sides { x: Ctx::new(sp), d, w };
    let p2 = sp.t2.source_arc();
    let p3 = sp.t3.source_arc();

    let mut tvals = Vec::with_capacity(sp.tensorator.n_tuples());
    for (i, tuple) in sp.tensorator.tuples().iter().enumerate() {
        let (a, b) = (p2.decode_cells(tuple[0]), p2.decode_cells(tuple[1]));
        tvals.push((i, sides.tensorator_prime(a[0], a[1], b[0], b[1])?));
    }
    let tensorator1 = sp.tensorator.from_values(tvals)?;
    let tp = |f1, g1, f, g| sp.tensorator_at(&tensorator1, f1, g1, f, g);

    let mut avals = Vec::with_capacity(sp.associator.n_tuples());
    for (i, tuple) in sp.associator.tuples().iter().enumerate() {
        let a = p3.decode_cells(tuple[0]);
        avals.push((i, sides.associator_prime(a[0], a[1], a[2], &tp)?));
    }
    let associator1 = sp.associator.from_values(avals)?;
    let ap = |f, g, h| sp.associator_at(&associator1, f, g, h);

    let mut pvals = Vec::with_capacity(sp.pentagonator.tuples().len());
    for (i, tuple) in sp.pentagonator.tuples().iter().enumerate() {
        let o = [tuple[0], tuple[1], tuple[2], tuple[3]];
        pvals.push((i, sides.pentagonator_prime(o, &tp, &ap)?));
    }
    let pentagonator1 = sp.pentagonator.from_values(pvals)?;
    Ok(FirstOrderDeformation { tensorator1, associator1, pentagonator1 })
}
