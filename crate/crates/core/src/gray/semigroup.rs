//! Gray semigroups: strict 2-categories with a cubical tensor product.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlinalg::{Field, Scalar};
use crate::twocat::{validate_two_category, Tensor3, TwoCategory, TwoMorphism, ValidationReport, Violation};

/// Raw tables of a Gray semigroup, as read from a file or produced by a
/// generator. [`GraySemigroup::new`] checks their shapes.
#[derive(Clone, Debug)]
pub struct GrayTables {
    pub base: Arc<TwoCategory>,
    /// `tensor_objects[x * n_objects + y] = x ⊗ y`.
    pub tensor_objects: Vec<usize>,
    /// `tensor_cells[f * n_cells + g] = f ⊗ g`.
    pub tensor_cells: Vec<usize>,
    /// `(f, f′, g, g′)` ↦ constants of `Hom₂(f,f′) × Hom₂(g,g′) → Hom₂(f⊗g, f′⊗g′)`.
    pub tensor2: HashMap<(usize, usize, usize, usize), Tensor3>,
    /// `(f′, g′, f, g)` ↦ `⊗̂((f′,g′),(f,g)): (f′⊗g′)∘(f⊗g) ⇒ (f′∘f)⊗(g′∘g)`.
    pub tensorator: HashMap<(usize, usize, usize, usize), TwoMorphism>,
}

/// A finite K-linear Gray semigroup: associator and pentagonator are
/// identities and the tensor product is a cubical pseudofunctor.
#[derive(Clone, Debug)]
pub struct GraySemigroup {
    base: Arc<TwoCategory>,
    tensor_objects: Vec<usize>,
    tensor_cells: Vec<usize>,
    tensor2: HashMap<(usize, usize, usize, usize), Tensor3>,
    tensorator: HashMap<(usize, usize, usize, usize), TwoMorphism>,
}

impl GraySemigroup {
    /// Checks totality and shapes of the tables (not the axioms).
    pub fn new(t: GrayTables) -> Result<Self> {
        let c = &*t.base;
        let (no, nc) = (c.n_objects(), c.n_cells());
        if t.tensor_objects.len() != no * no || t.tensor_cells.len() != nc * nc {
            return Err(Error::Structural("tensor tables have the wrong size".into()));
        }
        if let Some(&x) = t.tensor_objects.iter().find(|&&x| x >= no) {
            return Err(Error::Structural(format!("tensor of objects refers to unknown object {x}")));
        }
        for f in 0..nc {
            for g in 0..nc {
                let fg = t.tensor_cells[f * nc + g];
                if fg >= nc {
                    return Err(Error::Structural(format!("tensor of 1-cells refers to unknown cell {fg}")));
                }
                let src = t.tensor_objects[c.cell_src(f) * no + c.cell_src(g)];
                let dst = t.tensor_objects[c.cell_dst(f) * no + c.cell_dst(g)];
                if c.cell_src(fg) != src || c.cell_dst(fg) != dst {
                    return Err(Error::Structural(format!(
                        "{} ⊗ {} has wrong endpoints",
                        c.cell_name(f),
                        c.cell_name(g)
                    )));
                }
                for f1 in c.parallel_cells(f) {
                    for g1 in c.parallel_cells(g) {
                        let (a, b) = (c.dim2(f, f1), c.dim2(g, g1));
                        let out = c.dim2(fg, t.tensor_cells[f1 * nc + g1]);
                        match t.tensor2.get(&(f, f1, g, g1)) {
                            Some(ten) if ten.dims == (a, b, out) => {}
                            Some(_) => {
                                return Err(Error::Structural(format!(
                                    "tensor of 2-cells on ({}, {}, {}, {}) has wrong shape",
                                    c.cell_name(f),
                                    c.cell_name(f1),
                                    c.cell_name(g),
                                    c.cell_name(g1)
                                )))
                            }
                            None if a * b == 0 => {}
                            None => {
                                return Err(Error::Structural(format!(
                                    "missing tensor of 2-cells on ({}, {}, {}, {})",
                                    c.cell_name(f),
                                    c.cell_name(f1),
                                    c.cell_name(g),
                                    c.cell_name(g1)
                                )))
                            }
                        }
                    }
                }
            }
        }
        let gray = GraySemigroup {
            base: t.base.clone(),
            tensor_objects: t.tensor_objects,
            tensor_cells: t.tensor_cells,
            tensor2: t.tensor2,
            tensorator: t.tensorator,
        };
        for (f1, g1, f, g) in gray.composable_pairs() {
            let key = (f1, g1, f, g);
            let Some(m) = gray.tensorator.get(&key) else {
                return Err(Error::Structural(format!(
                    "missing tensorator on (({}, {}), ({}, {}))",
                    c.cell_name(f1),
                    c.cell_name(g1),
                    c.cell_name(f),
                    c.cell_name(g)
                )));
            };
            let src = c.compose(gray.tensor_cells(f1, g1), gray.tensor_cells(f, g));
            let dst = gray.tensor_cells(c.compose(f1, f).unwrap(), c.compose(g1, g).unwrap());
            if Some(m.src) != src || m.dst != dst || m.coeffs.len() != c.dim2(m.src, m.dst) {
                return Err(Error::Structural(format!(
                    "tensorator on (({}, {}), ({}, {})) has wrong shape",
                    c.cell_name(f1),
                    c.cell_name(g1),
                    c.cell_name(f),
                    c.cell_name(g)
                )));
            }
        }
        Ok(gray)
    }

    pub fn base(&self) -> &Arc<TwoCategory> {
        &self.base
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }

    pub fn tensor_objects(&self, x: usize, y: usize) -> usize {
        self.tensor_objects[x * self.base.n_objects() + y]
    }

    pub fn tensor_cells(&self, f: usize, g: usize) -> usize {
        self.tensor_cells[f * self.base.n_cells() + g]
    }

    /// `x₀ ⊗ … ⊗ x_{k−1}` (strictly associative, so bracketing is irrelevant).
    pub fn tensor_objects_all(&self, xs: &[usize]) -> usize {
        let (&first, rest) = xs.split_first().expect("nonempty object tuple");
        rest.iter().fold(first, |acc, &x| self.tensor_objects(acc, x))
    }

    pub fn tensor_cells_all(&self, fs: &[usize]) -> usize {
        let (&first, rest) = fs.split_first().expect("nonempty cell tuple");
        rest.iter().fold(first, |acc, &f| self.tensor_cells(acc, f))
    }

    /// Structure constants of `⊗` on `Hom₂(f,f′) × Hom₂(g,g′)`.
    pub fn tensor2_constants(&self, f: usize, f1: usize, g: usize, g1: usize) -> Option<&Tensor3> {
        self.tensor2.get(&(f, f1, g, g1))
    }

    /// `a ⊗ b` for 2-morphisms `a: f ⇒ f′`, `b: g ⇒ g′`.
    pub fn tensor2(&self, a: &TwoMorphism, b: &TwoMorphism) -> Result<TwoMorphism> {
        let c = &*self.base;
        if a.coeffs.len() != c.dim2(a.src, a.dst) || b.coeffs.len() != c.dim2(b.src, b.dst) {
            return Err(Error::Dimension("tensor of 2-morphisms with wrong coefficient count".into()));
        }
        let src = self.tensor_cells(a.src, b.src);
        let dst = self.tensor_cells(a.dst, b.dst);
        let coeffs = match self.tensor2.get(&(a.src, a.dst, b.src, b.dst)) {
            Some(t) => t.apply(self.field(), &a.coeffs, &b.coeffs),
            None => vec![self.field().zero(); c.dim2(src, dst)],
        };
        Ok(TwoMorphism { src, dst, coeffs })
    }

    /// `a₀ ⊗ … ⊗ a_{k−1}`.
    pub fn tensor2_all(&self, parts: &[TwoMorphism]) -> Result<TwoMorphism> {
        let (first, rest) = parts.split_first().ok_or_else(|| Error::Precondition("empty tensor".into()))?;
        rest.iter().try_fold(first.clone(), |acc, x| self.tensor2(&acc, x))
    }

    /// `⊗̂((f′,g′),(f,g))`; `f′∘f` and `g′∘g` must be defined.
    pub fn tensorator(&self, f1: usize, g1: usize, f: usize, g: usize) -> TwoMorphism {
        self.tensorator[&(f1, g1, f, g)].clone()
    }

    /// Kapranov–Voevodsky 2-cell `⊗_{f,g}: (f⊗1)∘(1⊗g) ⇒ (1⊗g)∘(f⊗1)` for
    /// `f: X → X′`, `g: Y → Y′`, derived from the tensorator.
    pub fn interchanger(&self, f: usize, g: usize) -> Result<TwoMorphism> {
        let c = &*self.base;
        let (idx, idx1) = (c.identity(c.cell_src(f)), c.identity(c.cell_dst(f)));
        let (idy, idy1) = (c.identity(c.cell_src(g)), c.identity(c.cell_dst(g)));
        let to_fg = self.tensorator(f, idy1, idx, g);
        let from_fg = c.inverse2(&self.tensorator(idx1, g, f, idy))?;
        c.vcomp(&from_fg, &to_fg)
    }

    /// All `(f′, g′, f, g)` with `f′∘f` and `g′∘g` defined.
    pub fn composable_pairs(&self) -> Vec<(usize, usize, usize, usize)> {
        let c = &*self.base;
        let mut out = Vec::new();
        for f in 0..c.n_cells() {
            for g in 0..c.n_cells() {
                for f1 in cells_from(c, c.cell_dst(f)) {
                    for g1 in cells_from(c, c.cell_dst(g)) {
                        out.push((f1, g1, f, g));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// All cells with source `y`.
pub(crate) fn cells_from(c: &TwoCategory, y: usize) -> Vec<usize> {
    (0..c.n_objects()).flat_map(|z| c.cells_between(y, z)).collect()
}

/// Checks every Gray-semigroup axiom on all index tuples: the base
/// 2-category axioms, strict associativity of `⊗` on objects, 1-cells and
/// 2-cells, unitarity, functoriality of `⊗` on 2-cells, invertibility and
/// cubical triviality of `⊗̂`, naturality (A⊗̂1), composition (A⊗̂2), and
/// the Gray equation.
pub fn validate_gray(g: &GraySemigroup) -> Result<ValidationReport> {
    let c = &*g.base;
    let mut rep = validate_two_category(c);
    let (no, nc) = (c.n_objects(), c.n_cells());
    let on = |x: usize| c.object_name(x);
    let cn = |f: usize| c.cell_name(f);

    for x in 0..no {
        for y in 0..no {
            for z in 0..no {
                if g.tensor_objects(g.tensor_objects(x, y), z) != g.tensor_objects(x, g.tensor_objects(y, z)) {
                    rep.push(Violation::new("tensor associative on objects", vec![on(x), on(y), on(z)]));
                }
            }
            if g.tensor_cells(c.identity(x), c.identity(y)) != c.identity(g.tensor_objects(x, y)) {
                rep.push(Violation::new("unitary", vec![on(x), on(y)]));
            }
        }
    }
    for f in 0..nc {
        for h in 0..nc {
            for k in 0..nc {
                if g.tensor_cells(g.tensor_cells(f, h), k) != g.tensor_cells(f, g.tensor_cells(h, k)) {
                    rep.push(Violation::new("tensor associative on 1-cells", vec![cn(f), cn(h), cn(k)]));
                }
            }
        }
    }

    // Functoriality of ⊗ on 2-cells and strict associativity.
    for f in 0..nc {
        for h in 0..nc {
            let fh = g.tensor_cells(f, h);
            let unit = g.tensor2(&c.id2(f), &c.id2(h))?;
            if unit != c.id2(fh) {
                rep.push(Violation::new("tensor preserves identity 2-cells", vec![cn(f), cn(h)]));
            }
            for f1 in c.parallel_cells(f) {
                for h1 in c.parallel_cells(h) {
                    for f2 in c.parallel_cells(f) {
                        for h2 in c.parallel_cells(h) {
                            for (a, b) in basis_pairs(c, f, f1, f2) {
                                for (p, q) in basis_pairs(c, h, h1, h2) {
                                    let lhs = g.tensor2(&c.vcomp(&b, &a)?, &c.vcomp(&q, &p)?)?;
                                    let rhs = c.vcomp(&g.tensor2(&b, &q)?, &g.tensor2(&a, &p)?)?;
                                    if lhs != rhs {
                                        rep.push(Violation::new(
                                            "tensor preserves vertical composition",
                                            vec![cn(f), cn(f1), cn(f2), cn(h), cn(h1), cn(h2)],
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for f in 0..nc {
        for h in 0..nc {
            for k in 0..nc {
                for f1 in c.parallel_cells(f) {
                    for h1 in c.parallel_cells(h) {
                        for k1 in c.parallel_cells(k) {
                            for a in basis(c, f, f1) {
                                for b in basis(c, h, h1) {
                                    for d in basis(c, k, k1) {
                                        let lhs = g.tensor2(&g.tensor2(&a, &b)?, &d)?;
                                        let rhs = g.tensor2(&a, &g.tensor2(&b, &d)?)?;
                                        if lhs != rhs {
                                            rep.push(Violation::new(
                                                "tensor associative on 2-cells",
                                                vec![cn(f), cn(f1), cn(h), cn(h1), cn(k), cn(k1)],
                                            ));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // Tensorator: invertibility, cubical triviality, naturality.
    for (f1, g1, f, h) in g.composable_pairs() {
        let t = g.tensorator(f1, g1, f, h);
        let w = vec![cn(f1), cn(g1), cn(f), cn(h)];
        if !c.is_invertible(&t) {
            rep.push(Violation::new("tensorator invertible", w.clone()));
        }
        if (c.is_identity(g1) || c.is_identity(f)) && t != c.id2(t.src) {
            rep.push(Violation::new("cubical triviality", w.clone()));
        }
        for f1t in c.parallel_cells(f1) {
            for g1t in c.parallel_cells(g1) {
                for ft in c.parallel_cells(f) {
                    for ht in c.parallel_cells(h) {
                        let tt = g.tensorator(f1t, g1t, ft, ht);
                        for tau1 in basis(c, f1, f1t) {
                            for sig1 in basis(c, g1, g1t) {
                                for tau in basis(c, f, ft) {
                                    for sig in basis(c, h, ht) {
                                        let lhs = c.vcomp(&g.tensor2(&c.hcomp(&tau1, &tau)?, &c.hcomp(&sig1, &sig)?)?, &t)?;
                                        let rhs = c.vcomp(&tt, &c.hcomp(&g.tensor2(&tau1, &sig1)?, &g.tensor2(&tau, &sig)?)?)?;
                                        if lhs != rhs {
                                            rep.push(Violation::new(
                                                "A⊗̂1 naturality",
                                                vec![cn(f1), cn(f1t), cn(g1), cn(g1t), cn(f), cn(ft), cn(h), cn(ht)],
                                            ));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // A⊗̂2 and the Gray equation over composable triples of pairs.
    let pairs = g.composable_pairs();
    let mut by_src: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    for &(f1, g1, f, h) in &pairs {
        by_src.entry((f, h)).or_default().push((f1, g1));
    }
    for &(f1, g1, f, h) in &pairs {
        let (f1f, g1h) = (c.compose(f1, f).unwrap(), c.compose(g1, h).unwrap());
        for &(f2, g2) in by_src.get(&(f1, g1)).map(|v| v.as_slice()).unwrap_or(&[]) {
            let lhs = c.vcomp(
                &g.tensorator(f2, g2, f1f, g1h),
                &c.whisker_left(g.tensor_cells(f2, g2), &g.tensorator(f1, g1, f, h))?,
            )?;
            let rhs = c.vcomp(
                &g.tensorator(c.compose(f2, f1).unwrap(), c.compose(g2, g1).unwrap(), f, h),
                &c.whisker_right(&g.tensorator(f2, g2, f1, g1), g.tensor_cells(f, h))?,
            )?;
            if lhs != rhs {
                rep.push(Violation::new("A⊗̂2 composition", vec![cn(f2), cn(g2), cn(f1), cn(g1), cn(f), cn(h)]));
            }
        }
    }
    for &(f1, g1, f, h) in &pairs {
        for k in 0..nc {
            for k1 in cells_from(c, c.cell_dst(k)) {
                let k1k = c.compose(k1, k).unwrap();
                let lhs = c.vcomp(
                    &g.tensor2(&g.tensorator(f1, g1, f, h), &c.id2(k1k))?,
                    &g.tensorator(g.tensor_cells(f1, g1), k1, g.tensor_cells(f, h), k),
                )?;
                let f1f = c.compose(f1, f).unwrap();
                let rhs = c.vcomp(
                    &g.tensor2(&c.id2(f1f), &g.tensorator(g1, k1, h, k))?,
                    &g.tensorator(f1, g.tensor_cells(g1, k1), f, g.tensor_cells(h, k)),
                )?;
                if lhs != rhs {
                    rep.push(Violation::new("Gray equation", vec![cn(f1), cn(g1), cn(k1), cn(f), cn(h), cn(k)]));
                }
            }
        }
    }
    Ok(rep)
}

fn basis(c: &TwoCategory, f: usize, f1: usize) -> Vec<TwoMorphism> {
    (0..c.dim2(f, f1)).map(|i| c.basis2(f, f1, i)).collect()
}

fn basis_pairs(c: &TwoCategory, f: usize, f1: usize, f2: usize) -> Vec<(TwoMorphism, TwoMorphism)> {
    let mut out = Vec::new();
    for a in basis(c, f, f1) {
        for b in basis(c, f1, f2) {
            out.push((a.clone(), b));
        }
    }
    out
}

/// Unit scalar helper used by generators.
pub(crate) fn scalar_tensor(field: Field, x: &Scalar) -> Tensor3 {
    let mut t = Tensor3::zeros(field, 1, 1, 1);
    t.set(0, 0, 0, x.clone());
    t
}
