//! Finite strict K-linear 2-categories given by tables.
//!
//! Objects and 1-cells are dense indices. Every hom-space `Hom₂(f, f′)`
//! between parallel 1-cells has a finite basis; vertical and horizontal
//! composition are bilinear maps stored as structure-constant tensors.
//! Cartesian powers `Cᵏ` are represented lazily and computed
//! componentwise, so large powers never get materialized.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlinalg::{Field, Scalar, SparseMatrix, SparseVec};

use super::report::{ValidationReport, Violation};

/// Dense bilinear structure constants `T[i][j] ∈ K^c`:
/// `apply(x, y)_k = Σ x_i y_j T[i][j][k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor3 {
    pub dims: (usize, usize, usize),
    data: Vec<Scalar>,
}

impl Tensor3 {
    pub fn zeros(field: Field, a: usize, b: usize, c: usize) -> Self {
        Tensor3 { dims: (a, b, c), data: vec![field.zero(); a * b * c] }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        let (_, b, c) = self.dims;
        &self.data[(i * b + j) * c + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, x: Scalar) {
        let (_, b, c) = self.dims;
        self.data[(i * b + j) * c + k] = x;
    }

    /// Nonzero entries `(i, j, k, value)` in index order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Scalar)> {
        let (_, b, c) = self.dims;
        self.data.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(move |(n, x)| (n / (b * c), (n / c) % b, n % c, x))
    }

    pub fn apply(&self, field: Field, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let (a, b, c) = self.dims;
        debug_assert_eq!((x.len(), y.len()), (a, b));
        let mut out = vec![field.zero(); c];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let w = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let t = self.get(i, j, k);
                    if !t.is_zero() {
                        *o += &(&w * t);
                    }
                }
            }
        }
        out
    }
}

/// A 2-morphism `τ: src ⇒ dst` expressed in the basis of `Hom₂(src, dst)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoMorphism {
    pub src: usize,
    pub dst: usize,
    pub coeffs: Vec<Scalar>,
}

impl TwoMorphism {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|x| x.is_zero())
    }
}

/// Materialized tables of a finite 2-category.
#[derive(Clone, Debug)]
pub(crate) struct Tables {
    object_names: Vec<String>,
    cell_names: Vec<String>,
    cell_src: Vec<usize>,
    cell_dst: Vec<usize>,
    identities: Vec<usize>,
    /// `compose[g * n + f]` = `g∘f`, `usize::MAX` when not composable.
    compose: Vec<usize>,
    /// `hom_dims[f * n + f′]`; zero for non-parallel pairs.
    hom_dims: Vec<usize>,
    unit2: Vec<Vec<Scalar>>,
    vcomp: HashMap<(usize, usize, usize), Tensor3>,
    hcomp: HashMap<(usize, usize, usize, usize), Tensor3>,
    /// Cells grouped by (src, dst), sorted.
    by_ends: HashMap<(usize, usize), Vec<usize>>,
    by_dst: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
enum Repr {
    Table(Arc<Tables>),
    Power { base: Arc<TwoCategory>, k: usize },
}

/// A finite strict K-linear 2-category.
#[derive(Clone, Debug)]
pub struct TwoCategory {
    field: Field,
    repr: Repr,
}

const NONE: usize = usize::MAX;

impl TwoCategory {
    pub fn field(&self) -> Field {
        self.field
    }

    /// `Some((base, k))` when this is the lazy power `baseᵏ`.
    pub fn as_power(&self) -> Option<(&Arc<TwoCategory>, usize)> {
        match &self.repr {
            Repr::Power { base, k } => Some((base, *k)),
            Repr::Table(_) => None,
        }
    }

    pub fn n_objects(&self) -> usize {
        match &self.repr {
            Repr::Table(t) => t.object_names.len(),
            Repr::Power { base, k } => base.n_objects().pow(*k as u32),
        }
    }

    pub fn n_cells(&self) -> usize {
        match &self.repr {
            Repr::Table(t) => t.cell_names.len(),
            Repr::Power { base, k } => base.n_cells().pow(*k as u32),
        }
    }

    pub fn object_name(&self, x: usize) -> String {
        match &self.repr {
            Repr::Table(t) => t.object_names[x].clone(),
            Repr::Power { base, k } => {
                let parts: Vec<String> = digits(x, base.n_objects(), *k).iter().map(|&c| base.object_name(c)).collect();
                format!("({})", parts.join(","))
            }
        }
    }

    pub fn cell_name(&self, f: usize) -> String {
        match &self.repr {
            Repr::Table(t) => t.cell_names[f].clone(),
            Repr::Power { base, k } => {
                let parts: Vec<String> = digits(f, base.n_cells(), *k).iter().map(|&c| base.cell_name(c)).collect();
                format!("({})", parts.join(","))
            }
        }
    }

    pub fn cell_src(&self, f: usize) -> usize {
        match &self.repr {
            Repr::Table(t) => t.cell_src[f],
            Repr::Power { base, k } => {
                let d = digits(f, base.n_cells(), *k);
                undigits(d.iter().map(|&c| base.cell_src(c)), base.n_objects())
            }
        }
    }

    pub fn cell_dst(&self, f: usize) -> usize {
        match &self.repr {
            Repr::Table(t) => t.cell_dst[f],
            Repr::Power { base, k } => {
                let d = digits(f, base.n_cells(), *k);
                undigits(d.iter().map(|&c| base.cell_dst(c)), base.n_objects())
            }
        }
    }

    pub fn identity(&self, x: usize) -> usize {
        match &self.repr {
            Repr::Table(t) => t.identities[x],
            Repr::Power { base, k } => {
                let d = digits(x, base.n_objects(), *k);
                undigits(d.iter().map(|&c| base.identity(c)), base.n_cells())
            }
        }
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.cell_src(f) == self.cell_dst(f) && self.identity(self.cell_src(f)) == f
    }

    /// `g∘f` (first `f`, then `g`), or `None` when `dst f ≠ src g`.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        match &self.repr {
            Repr::Table(t) => {
                let h = t.compose[g * t.cell_names.len() + f];
                (h != NONE).then_some(h)
            }
            Repr::Power { base, k } => {
                let n = base.n_cells();
                let (dg, df) = (digits(g, n, *k), digits(f, n, *k));
                let mut out = Vec::with_capacity(*k);
                for (a, b) in dg.iter().zip(&df) {
                    out.push(base.compose(*a, *b)?);
                }
                Some(undigits(out.into_iter(), n))
            }
        }
    }

    /// Composite `f₀∘f₁∘…∘f_{n−1}` of a nonempty composable tuple.
    pub fn compose_all(&self, cells: &[usize]) -> Option<usize> {
        let (&last, rest) = cells.split_last()?;
        rest.iter().rev().try_fold(last, |acc, &g| self.compose(g, acc))
    }

    pub fn parallel(&self, f: usize, f2: usize) -> bool {
        self.cell_src(f) == self.cell_src(f2) && self.cell_dst(f) == self.cell_dst(f2)
    }

    /// `dim Hom₂(f, f′)`; zero for non-parallel cells.
    pub fn dim2(&self, f: usize, f2: usize) -> usize {
        match &self.repr {
            Repr::Table(t) => t.hom_dims[f * t.cell_names.len() + f2],
            Repr::Power { base, k } => {
                let n = base.n_cells();
                digits(f, n, *k).iter().zip(digits(f2, n, *k)).map(|(a, b)| base.dim2(*a, b)).product()
            }
        }
    }

    /// Coefficients of `1_f` in `Hom₂(f, f)`.
    pub fn unit2_coeffs(&self, f: usize) -> Vec<Scalar> {
        match &self.repr {
            Repr::Table(t) => t.unit2[f].clone(),
            Repr::Power { base, k } => {
                let parts: Vec<Vec<Scalar>> = digits(f, base.n_cells(), *k).iter().map(|&c| base.unit2_coeffs(c)).collect();
                kron_all(self.field, &parts)
            }
        }
    }

    pub fn id2(&self, f: usize) -> TwoMorphism {
        TwoMorphism { src: f, dst: f, coeffs: self.unit2_coeffs(f) }
    }

    pub fn zero2(&self, f: usize, f2: usize) -> TwoMorphism {
        TwoMorphism { src: f, dst: f2, coeffs: vec![self.field.zero(); self.dim2(f, f2)] }
    }

    pub fn basis2(&self, f: usize, f2: usize, i: usize) -> TwoMorphism {
        let mut m = self.zero2(f, f2);
        m.coeffs[i] = self.field.one();
        m
    }

    pub fn scalar2(&self, f: usize, c: &Scalar) -> TwoMorphism {
        self.scale2(&self.id2(f), c)
    }

    fn check_shape(&self, t: &TwoMorphism) -> Result<()> {
        if !self.parallel(t.src, t.dst) || t.coeffs.len() != self.dim2(t.src, t.dst) {
            return Err(Error::Dimension(format!(
                "2-morphism {} ⇒ {} has {} coefficients, expected {}",
                self.cell_name(t.src),
                self.cell_name(t.dst),
                t.coeffs.len(),
                self.dim2(t.src, t.dst)
            )));
        }
        Ok(())
    }

    /// Vertical composite `b·a` for `a: f ⇒ f′`, `b: f′ ⇒ f″`.
    pub fn vcomp(&self, b: &TwoMorphism, a: &TwoMorphism) -> Result<TwoMorphism> {
        self.check_shape(a)?;
        self.check_shape(b)?;
        if a.dst != b.src {
            return Err(Error::NotComposable(format!(
                "vertical: {} ⇒ {} then {} ⇒ {}",
                self.cell_name(a.src),
                self.cell_name(a.dst),
                self.cell_name(b.src),
                self.cell_name(b.dst)
            )));
        }
        let coeffs = self.vcomp_coeffs(a.src, a.dst, b.dst, &b.coeffs, &a.coeffs);
        Ok(TwoMorphism { src: a.src, dst: b.dst, coeffs })
    }

    /// Horizontal composite `η∘τ` for `τ: f ⇒ f′` (X→Y), `η: g ⇒ g′` (Y→Z).
    pub fn hcomp(&self, eta: &TwoMorphism, tau: &TwoMorphism) -> Result<TwoMorphism> {
        self.check_shape(eta)?;
        self.check_shape(tau)?;
        let (Some(s), Some(d)) = (self.compose(eta.src, tau.src), self.compose(eta.dst, tau.dst)) else {
            return Err(Error::NotComposable(format!(
                "horizontal: {} after {}",
                self.cell_name(eta.src),
                self.cell_name(tau.src)
            )));
        };
        let coeffs = self.hcomp_coeffs(eta.src, eta.dst, tau.src, tau.dst, &eta.coeffs, &tau.coeffs);
        Ok(TwoMorphism { src: s, dst: d, coeffs })
    }

    /// `x ∈ Hom₂(f′,f″)`, `y ∈ Hom₂(f,f′)` ↦ `x·y ∈ Hom₂(f,f″)`.
    pub fn vcomp_coeffs(&self, f: usize, f1: usize, f2: usize, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        match &self.repr {
            Repr::Table(t) => match t.vcomp.get(&(f, f1, f2)) {
                Some(ten) => ten.apply(self.field, x, y),
                None => vec![self.field.zero(); self.dim2(f, f2)],
            },
            Repr::Power { base, k } => {
                let n = base.n_cells();
                let (d0, d1, d2) = (digits(f, n, *k), digits(f1, n, *k), digits(f2, n, *k));
                let xd: Vec<usize> = (0..*k).map(|c| base.dim2(d1[c], d2[c])).collect();
                let yd: Vec<usize> = (0..*k).map(|c| base.dim2(d0[c], d1[c])).collect();
                let mut out = vec![self.field.zero(); self.dim2(f, f2)];
                for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                    let xi_d = digits_mixed(i, &xd);
                    for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                        let yj_d = digits_mixed(j, &yd);
                        let parts: Vec<Vec<Scalar>> = (0..*k)
                            .map(|c| {
                                let ex = unit_vec(self.field, xd[c], xi_d[c]);
                                let ey = unit_vec(self.field, yd[c], yj_d[c]);
                                base.vcomp_coeffs(d0[c], d1[c], d2[c], &ex, &ey)
                            })
                            .collect();
                        let w = xi * yj;
                        for (o, v) in out.iter_mut().zip(kron_all(self.field, &parts)) {
                            if !v.is_zero() {
                                *o += &(&w * &v);
                            }
                        }
                    }
                }
                out
            }
        }
    }

    /// `x ∈ Hom₂(g,g′)`, `y ∈ Hom₂(f,f′)` ↦ `x∘y ∈ Hom₂(g∘f, g′∘f′)`.
    pub fn hcomp_coeffs(&self, g: usize, g1: usize, f: usize, f1: usize, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        match &self.repr {
            Repr::Table(t) => match t.hcomp.get(&(g, g1, f, f1)) {
                Some(ten) => ten.apply(self.field, x, y),
                None => {
                    let (s, d) = (self.compose(g, f).unwrap_or(NONE), self.compose(g1, f1).unwrap_or(NONE));
                    if s == NONE || d == NONE {
                        Vec::new()
                    } else {
                        vec![self.field.zero(); self.dim2(s, d)]
                    }
                }
            },
            Repr::Power { base, k } => {
                let n = base.n_cells();
                let (dg, dg1, df, df1) = (digits(g, n, *k), digits(g1, n, *k), digits(f, n, *k), digits(f1, n, *k));
                let xd: Vec<usize> = (0..*k).map(|c| base.dim2(dg[c], dg1[c])).collect();
                let yd: Vec<usize> = (0..*k).map(|c| base.dim2(df[c], df1[c])).collect();
                let s = self.compose(g, f).expect("composable");
                let d = self.compose(g1, f1).expect("composable");
                let mut out = vec![self.field.zero(); self.dim2(s, d)];
                for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                    let xi_d = digits_mixed(i, &xd);
                    for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                        let yj_d = digits_mixed(j, &yd);
                        let parts: Vec<Vec<Scalar>> = (0..*k)
                            .map(|c| {
                                let ex = unit_vec(self.field, xd[c], xi_d[c]);
                                let ey = unit_vec(self.field, yd[c], yj_d[c]);
                                base.hcomp_coeffs(dg[c], dg1[c], df[c], df1[c], &ex, &ey)
                            })
                            .collect();
                        let w = xi * yj;
                        for (o, v) in out.iter_mut().zip(kron_all(self.field, &parts)) {
                            if !v.is_zero() {
                                *o += &(&w * &v);
                            }
                        }
                    }
                }
                out
            }
        }
    }

    pub fn add2(&self, a: &TwoMorphism, b: &TwoMorphism) -> Result<TwoMorphism> {
        if (a.src, a.dst) != (b.src, b.dst) {
            return Err(Error::Dimension("adding 2-morphisms with different endpoints".into()));
        }
        Ok(TwoMorphism { src: a.src, dst: a.dst, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() })
    }

    pub fn sub2(&self, a: &TwoMorphism, b: &TwoMorphism) -> Result<TwoMorphism> {
        self.add2(a, &self.scale2(b, &-self.field.one()))
    }

    pub fn scale2(&self, a: &TwoMorphism, c: &Scalar) -> TwoMorphism {
        TwoMorphism { src: a.src, dst: a.dst, coeffs: a.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Whiskering `1_g ∘ τ`.
    pub fn whisker_left(&self, g: usize, tau: &TwoMorphism) -> Result<TwoMorphism> {
        self.hcomp(&self.id2(g), tau)
    }

    /// Whiskering `η ∘ 1_f`.
    pub fn whisker_right(&self, eta: &TwoMorphism, f: usize) -> Result<TwoMorphism> {
        self.hcomp(eta, &self.id2(f))
    }

    /// Two-sided inverse of `τ: f ⇒ f′`, found by a linear solve.
    pub fn inverse2(&self, tau: &TwoMorphism) -> Result<TwoMorphism> {
        self.check_shape(tau)?;
        let (f, f1) = (tau.src, tau.dst);
        let d = self.dim2(f1, f);
        let n = self.dim2(f, f);
        // columns: σ = e_j ↦ (e_j · τ) ∈ Hom₂(f, f)
        let cols: Vec<SparseVec> = (0..d)
            .map(|j| SparseVec::from_dense(&self.vcomp_coeffs(f, f1, f, &unit_vec(self.field, d, j), &tau.coeffs)))
            .collect();
        let m = SparseMatrix::from_columns(self.field, n, &cols);
        let target = SparseVec::from_dense(&self.unit2_coeffs(f));
        let not_inv = || Error::NotInvertible(format!("{} ⇒ {}", self.cell_name(f), self.cell_name(f1)));
        let sol = crate::exactlinalg::solve_in_image(&m, &target)?.ok_or_else(not_inv)?;
        let sigma = TwoMorphism { src: f1, dst: f, coeffs: sol.to_dense(self.field) };
        if self.vcomp(tau, &sigma)? != self.id2(f1) {
            return Err(not_inv());
        }
        Ok(sigma)
    }

    pub fn is_invertible(&self, tau: &TwoMorphism) -> bool {
        self.inverse2(tau).is_ok()
    }

    /// All cells `X → Y`, sorted.
    pub fn cells_between(&self, x: usize, y: usize) -> Vec<usize> {
        match &self.repr {
            Repr::Table(t) => t.by_ends.get(&(x, y)).cloned().unwrap_or_default(),
            Repr::Power { base, k } => {
                let no = base.n_objects();
                let (dx, dy) = (digits(x, no, *k), digits(y, no, *k));
                let lists: Vec<Vec<usize>> = (0..*k).map(|c| base.cells_between(dx[c], dy[c])).collect();
                product_indices(&lists, base.n_cells())
            }
        }
    }

    /// All cells with the given target, sorted.
    pub fn cells_into(&self, y: usize) -> Vec<usize> {
        match &self.repr {
            Repr::Table(t) => t.by_dst[y].clone(),
            Repr::Power { base, k } => {
                let dy = digits(y, base.n_objects(), *k);
                let lists: Vec<Vec<usize>> = dy.iter().map(|&c| base.cells_into(c)).collect();
                product_indices(&lists, base.n_cells())
            }
        }
    }

    /// Composable tuples `(f₀,…,f_{n−1})` (`src f_i = dst f_{i+1}`) in
    /// lexicographic order.
    pub fn composable_tuples(&self, n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let into: Vec<Vec<usize>> = (0..self.n_objects()).map(|y| self.cells_into(y)).collect();
        fn rec(c: &TwoCategory, into: &[Vec<usize>], n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            let cands: Vec<usize> = match cur.last() {
                None => (0..c.n_cells()).collect(),
                Some(&prev) => into[c.cell_src(prev)].clone(),
            };
            for f in cands {
                cur.push(f);
                rec(c, into, n, cur, out);
                cur.pop();
            }
        }
        rec(self, &into, n, &mut cur, &mut out);
        out
    }

    /// Cells parallel to `f` (including `f`), sorted.
    pub fn parallel_cells(&self, f: usize) -> Vec<usize> {
        self.cells_between(self.cell_src(f), self.cell_dst(f))
    }

    /// Lazy cartesian power `Cᵏ` (k ≥ 1). Indices are lexicographic in
    /// component tuples with the first component most significant; the
    /// 2-cell basis of a tuple is the Kronecker product of the component
    /// bases.
    pub fn power(base: &Arc<TwoCategory>, k: usize) -> Result<TwoCategory> {
        if k == 0 {
            return Err(Error::Precondition("power exponent must be at least 1".into()));
        }
        if k == 1 {
            return Ok((**base).clone());
        }
        if base.as_power().is_some() {
            return Err(Error::Precondition("nested lazy powers are not supported".into()));
        }
        Ok(TwoCategory { field: base.field, repr: Repr::Power { base: base.clone(), k } })
    }

    /// Encodes component indices of a power into a single index.
    pub fn encode_cells(&self, parts: &[usize]) -> usize {
        match &self.repr {
            Repr::Power { base, k } => {
                debug_assert_eq!(parts.len(), *k);
                undigits(parts.iter().copied(), base.n_cells())
            }
            Repr::Table(_) => {
                debug_assert_eq!(parts.len(), 1);
                parts[0]
            }
        }
    }

    pub fn decode_cells(&self, f: usize) -> Vec<usize> {
        match &self.repr {
            Repr::Power { base, k } => digits(f, base.n_cells(), *k),
            Repr::Table(_) => vec![f],
        }
    }

    pub fn encode_objects(&self, parts: &[usize]) -> usize {
        match &self.repr {
            Repr::Power { base, .. } => undigits(parts.iter().copied(), base.n_objects()),
            Repr::Table(_) => parts[0],
        }
    }

    pub fn decode_objects(&self, x: usize) -> Vec<usize> {
        match &self.repr {
            Repr::Power { base, k } => digits(x, base.n_objects(), *k),
            Repr::Table(_) => vec![x],
        }
    }

    /// The terminal 2-category: one object, one 1-cell, `Hom₂ = K`.
    pub fn terminal(field: Field) -> TwoCategory {
        let mut b = TwoCategoryBuilder::new(field);
        let x = b.add_object("*");
        let id = b.add_cell("id", x, x);
        b.set_identity(x, id);
        b.set_compose(id, id, id);
        b.set_hom_dim(id, id, 1);
        b.set_unit2(id, vec![field.one()]);
        let mut t = Tensor3::zeros(field, 1, 1, 1);
        t.set(0, 0, 0, field.one());
        b.set_vcomp(id, id, id, t.clone());
        b.set_hcomp(id, id, id, id, t);
        b.build().expect("terminal 2-category is well formed")
    }

    /// Exports the full tables (materializing powers).
    pub fn to_builder(&self) -> TwoCategoryBuilder {
        let mut b = TwoCategoryBuilder::new(self.field);
        for x in 0..self.n_objects() {
            b.add_object(&self.object_name(x));
        }
        for f in 0..self.n_cells() {
            b.add_cell(&self.cell_name(f), self.cell_src(f), self.cell_dst(f));
        }
        for x in 0..self.n_objects() {
            b.set_identity(x, self.identity(x));
        }
        for g in 0..self.n_cells() {
            for f in self.cells_into(self.cell_src(g)) {
                b.set_compose(g, f, self.compose(g, f).expect("composable"));
            }
        }
        for f in 0..self.n_cells() {
            b.set_unit2(f, self.unit2_coeffs(f));
            for f1 in self.parallel_cells(f) {
                b.set_hom_dim(f, f1, self.dim2(f, f1));
            }
        }
        for f in 0..self.n_cells() {
            for f1 in self.parallel_cells(f) {
                for f2 in self.parallel_cells(f) {
                    let t = self.vcomp_tensor(f, f1, f2);
                    if t.entries().next().is_some() {
                        b.set_vcomp(f, f1, f2, t);
                    }
                }
            }
        }
        for g in 0..self.n_cells() {
            for g1 in self.parallel_cells(g) {
                for f in self.cells_into(self.cell_src(g)) {
                    for f1 in self.parallel_cells(f) {
                        let t = self.hcomp_tensor(g, g1, f, f1);
                        if t.entries().next().is_some() {
                            b.set_hcomp(g, g1, f, f1, t);
                        }
                    }
                }
            }
        }
        b
    }

    /// Structure constants of vertical composition on `(f, f′, f″)`.
    pub fn vcomp_tensor(&self, f: usize, f1: usize, f2: usize) -> Tensor3 {
        let (a, b, c) = (self.dim2(f1, f2), self.dim2(f, f1), self.dim2(f, f2));
        let mut t = Tensor3::zeros(self.field, a, b, c);
        for i in 0..a {
            for j in 0..b {
                let v = self.vcomp_coeffs(f, f1, f2, &unit_vec(self.field, a, i), &unit_vec(self.field, b, j));
                for (k, x) in v.into_iter().enumerate() {
                    t.set(i, j, k, x);
                }
            }
        }
        t
    }

    /// Structure constants of horizontal composition on `(g, g′, f, f′)`.
    pub fn hcomp_tensor(&self, g: usize, g1: usize, f: usize, f1: usize) -> Tensor3 {
        let s = self.compose(g, f).expect("composable");
        let d = self.compose(g1, f1).expect("composable");
        let (a, b, c) = (self.dim2(g, g1), self.dim2(f, f1), self.dim2(s, d));
        let mut t = Tensor3::zeros(self.field, a, b, c);
        for i in 0..a {
            for j in 0..b {
                let v = self.hcomp_coeffs(g, g1, f, f1, &unit_vec(self.field, a, i), &unit_vec(self.field, b, j));
                for (k, x) in v.into_iter().enumerate() {
                    t.set(i, j, k, x);
                }
            }
        }
        t
    }
}

/// Incremental constructor for [`TwoCategory`] tables. `build` performs
/// the structural checks (totality, endpoint consistency, shapes); the
/// axioms are checked separately by [`validate_two_category`].
#[derive(Clone, Debug)]
pub struct TwoCategoryBuilder {
    pub field: Field,
    pub object_names: Vec<String>,
    pub cell_names: Vec<String>,
    pub cell_src: Vec<usize>,
    pub cell_dst: Vec<usize>,
    pub identities: Vec<Option<usize>>,
    pub compose: HashMap<(usize, usize), usize>,
    pub hom_dims: HashMap<(usize, usize), usize>,
    pub unit2: HashMap<usize, Vec<Scalar>>,
    pub vcomp: HashMap<(usize, usize, usize), Tensor3>,
    pub hcomp: HashMap<(usize, usize, usize, usize), Tensor3>,
}

impl TwoCategoryBuilder {
    pub fn new(field: Field) -> Self {
        TwoCategoryBuilder {
            field,
            object_names: Vec::new(),
            cell_names: Vec::new(),
            cell_src: Vec::new(),
            cell_dst: Vec::new(),
            identities: Vec::new(),
            compose: HashMap::new(),
            hom_dims: HashMap::new(),
            unit2: HashMap::new(),
            vcomp: HashMap::new(),
            hcomp: HashMap::new(),
        }
    }

    pub fn add_object(&mut self, name: &str) -> usize {
        self.object_names.push(name.to_string());
        self.identities.push(None);
        self.object_names.len() - 1
    }

    pub fn add_cell(&mut self, name: &str, src: usize, dst: usize) -> usize {
        self.cell_names.push(name.to_string());
        self.cell_src.push(src);
        self.cell_dst.push(dst);
        self.cell_names.len() - 1
    }

    pub fn set_identity(&mut self, x: usize, f: usize) {
        self.identities[x] = Some(f);
    }

    pub fn set_compose(&mut self, g: usize, f: usize, h: usize) {
        self.compose.insert((g, f), h);
    }

    pub fn set_hom_dim(&mut self, f: usize, f2: usize, d: usize) {
        self.hom_dims.insert((f, f2), d);
    }

    pub fn set_unit2(&mut self, f: usize, coeffs: Vec<Scalar>) {
        self.unit2.insert(f, coeffs);
    }

    pub fn set_vcomp(&mut self, f: usize, f1: usize, f2: usize, t: Tensor3) {
        self.vcomp.insert((f, f1, f2), t);
    }

    pub fn set_hcomp(&mut self, g: usize, g1: usize, f: usize, f1: usize, t: Tensor3) {
        self.hcomp.insert((g, g1, f, f1), t);
    }

    pub fn build(self) -> Result<TwoCategory> {
        let no = self.object_names.len();
        let nc = self.cell_names.len();
        let err = |s: String| Err(Error::Structural(s));
        for f in 0..nc {
            if self.cell_src[f] >= no || self.cell_dst[f] >= no {
                return err(format!("1-cell {} has endpoints out of range", self.cell_names[f]));
            }
        }
        let mut identities = Vec::with_capacity(no);
        for x in 0..no {
            match self.identities[x] {
                Some(f) if f < nc && self.cell_src[f] == x && self.cell_dst[f] == x => identities.push(f),
                Some(_) => return err(format!("identity of {} is not an endomorphism of it", self.object_names[x])),
                None => return err(format!("object {} has no identity 1-cell", self.object_names[x])),
            }
        }
        let mut compose = vec![NONE; nc * nc];
        for g in 0..nc {
            for f in 0..nc {
                if self.cell_dst[f] != self.cell_src[g] {
                    if self.compose.contains_key(&(g, f)) {
                        return err(format!("composition {}∘{} given for non-composable cells", self.cell_names[g], self.cell_names[f]));
                    }
                    continue;
                }
                match self.compose.get(&(g, f)) {
                    Some(&h) if h < nc && self.cell_src[h] == self.cell_src[f] && self.cell_dst[h] == self.cell_dst[g] => {
                        compose[g * nc + f] = h
                    }
                    Some(_) => return err(format!("composite {}∘{} has wrong endpoints", self.cell_names[g], self.cell_names[f])),
                    None => return err(format!("missing composition entry {}∘{}", self.cell_names[g], self.cell_names[f])),
                }
            }
        }
        let mut hom_dims = vec![0usize; nc * nc];
        for (&(f, f2), &d) in &self.hom_dims {
            if f >= nc || f2 >= nc {
                return err("hom-space entry out of range".into());
            }
            if d > 0 && (self.cell_src[f] != self.cell_src[f2] || self.cell_dst[f] != self.cell_dst[f2]) {
                return err(format!("nonzero hom-space between non-parallel {} and {}", self.cell_names[f], self.cell_names[f2]));
            }
            hom_dims[f * nc + f2] = d;
        }
        let mut unit2 = Vec::with_capacity(nc);
        for f in 0..nc {
            let d = hom_dims[f * nc + f];
            match self.unit2.get(&f) {
                Some(u) if u.len() == d && d > 0 => unit2.push(u.clone()),
                _ => return err(format!("identity 2-cell of {} missing or of wrong length", self.cell_names[f])),
            }
        }
        let dim = |a: usize, b: usize| hom_dims[a * nc + b];
        for (&(f, f1, f2), t) in &self.vcomp {
            if f.max(f1).max(f2) >= nc || t.dims != (dim(f1, f2), dim(f, f1), dim(f, f2)) {
                return err("vertical structure constants have wrong shape".into());
            }
        }
        for (&(g, g1, f, f1), t) in &self.hcomp {
            if g.max(g1).max(f).max(f1) >= nc {
                return err("horizontal structure constants out of range".into());
            }
            let (s, d) = (compose[g * nc + f], compose[g1 * nc + f1]);
            if s == NONE || d == NONE || t.dims != (dim(g, g1), dim(f, f1), dim(s, d)) {
                return err("horizontal structure constants have wrong shape".into());
            }
        }
        let mut by_ends: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut by_dst = vec![Vec::new(); no];
        for f in 0..nc {
            by_ends.entry((self.cell_src[f], self.cell_dst[f])).or_default().push(f);
            by_dst[self.cell_dst[f]].push(f);
        }
        let tables = Tables {
            object_names: self.object_names,
            cell_names: self.cell_names,
            cell_src: self.cell_src,
            cell_dst: self.cell_dst,
            identities,
            compose,
            hom_dims,
            unit2,
            vcomp: self.vcomp,
            hcomp: self.hcomp,
            by_ends,
            by_dst,
        };
        Ok(TwoCategory { field: self.field, repr: Repr::Table(Arc::new(tables)) })
    }
}

pub(crate) fn unit_vec(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

/// Kronecker product of vectors, first factor most significant.
pub(crate) fn kron_all(field: Field, parts: &[Vec<Scalar>]) -> Vec<Scalar> {
    let mut acc = vec![field.one()];
    for p in parts {
        let mut next = Vec::with_capacity(acc.len() * p.len());
        for a in &acc {
            for b in p {
                next.push(a * b);
            }
        }
        acc = next;
    }
    acc
}

fn digits(mut x: usize, base: usize, k: usize) -> Vec<usize> {
    let mut d = vec![0; k];
    for i in (0..k).rev() {
        d[i] = x % base;
        x /= base;
    }
    d
}

pub(crate) fn digits_mixed(mut x: usize, radices: &[usize]) -> Vec<usize> {
    let mut d = vec![0; radices.len()];
    for i in (0..radices.len()).rev() {
        d[i] = x % radices[i];
        x /= radices[i];
    }
    d
}

fn undigits(d: impl Iterator<Item = usize>, base: usize) -> usize {
    d.fold(0, |acc, x| acc * base + x)
}

fn product_indices(lists: &[Vec<usize>], base: usize) -> Vec<usize> {
    let mut acc = vec![0usize];
    for l in lists {
        let mut next = Vec::with_capacity(acc.len() * l.len());
        for a in &acc {
            for &x in l {
                next.push(a * base + x);
            }
        }
        acc = next;
    }
    acc
}

/// Cartesian product `C × D`, materialized. Objects and 1-cells are pairs
/// (first factor most significant); `Hom₂` is the tensor product.
pub fn product(c: &TwoCategory, d: &TwoCategory) -> Result<TwoCategory> {
    if c.field() != d.field() {
        return Err(Error::FieldMismatch(c.field().to_string(), d.field().to_string()));
    }
    let field = c.field();
    let mut b = TwoCategoryBuilder::new(field);
    let (no_d, nc_d) = (d.n_objects(), d.n_cells());
    let obj = |x: usize, y: usize| x * no_d + y;
    let cell = |f: usize, g: usize| f * nc_d + g;
    for x in 0..c.n_objects() {
        for y in 0..no_d {
            b.add_object(&format!("({},{})", c.object_name(x), d.object_name(y)));
        }
    }
    for f in 0..c.n_cells() {
        for g in 0..nc_d {
            b.add_cell(
                &format!("({},{})", c.cell_name(f), d.cell_name(g)),
                obj(c.cell_src(f), d.cell_src(g)),
                obj(c.cell_dst(f), d.cell_dst(g)),
            );
        }
    }
    for x in 0..c.n_objects() {
        for y in 0..no_d {
            b.set_identity(obj(x, y), cell(c.identity(x), d.identity(y)));
        }
    }
    let kron_t = |s: &Tensor3, t: &Tensor3| {
        let (a1, b1, c1) = s.dims;
        let (a2, b2, c2) = t.dims;
        let mut out = Tensor3::zeros(field, a1 * a2, b1 * b2, c1 * c2);
        for (i1, j1, k1, x) in s.entries() {
            for (i2, j2, k2, y) in t.entries() {
                out.set(i1 * a2 + i2, j1 * b2 + j2, k1 * c2 + k2, x * y);
            }
        }
        out
    };
    for f in 0..c.n_cells() {
        for g in 0..nc_d {
            let p = cell(f, g);
            b.set_unit2(p, kron_all(field, &[c.unit2_coeffs(f), d.unit2_coeffs(g)]));
            for f1 in c.parallel_cells(f) {
                for g1 in d.parallel_cells(g) {
                    b.set_hom_dim(p, cell(f1, g1), c.dim2(f, f1) * d.dim2(g, g1));
                }
            }
            for f2 in c.cells_into(c.cell_src(f)) {
                for g2 in d.cells_into(d.cell_src(g)) {
                    let h = cell(c.compose(f, f2).expect("composable"), d.compose(g, g2).expect("composable"));
                    b.set_compose(p, cell(f2, g2), h);
                }
            }
        }
    }
    for f in 0..c.n_cells() {
        for g in 0..nc_d {
            for f1 in c.parallel_cells(f) {
                for f2 in c.parallel_cells(f) {
                    let tc = c.vcomp_tensor(f, f1, f2);
                    for g1 in d.parallel_cells(g) {
                        for g2 in d.parallel_cells(g) {
                            let t = kron_t(&tc, &d.vcomp_tensor(g, g1, g2));
                            if t.entries().next().is_some() {
                                b.set_vcomp(cell(f, g), cell(f1, g1), cell(f2, g2), t);
                            }
                        }
                    }
                }
            }
        }
    }
    for fa in 0..c.n_cells() {
        for fa1 in c.parallel_cells(fa) {
            for fb in c.cells_into(c.cell_src(fa)) {
                for fb1 in c.parallel_cells(fb) {
                    let tc = c.hcomp_tensor(fa, fa1, fb, fb1);
                    for ga in 0..nc_d {
                        for ga1 in d.parallel_cells(ga) {
                            for gb in d.cells_into(d.cell_src(ga)) {
                                for gb1 in d.parallel_cells(gb) {
                                    let t = kron_t(&tc, &d.hcomp_tensor(ga, ga1, gb, gb1));
                                    if t.entries().next().is_some() {
                                        b.set_hcomp(cell(fa, ga), cell(fa1, ga1), cell(fb, gb), cell(fb1, gb1), t);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    b.build()
}

/// Checks every 2-category axiom on every basis tuple and returns the
/// complete list of violations.
pub fn validate_two_category(c: &TwoCategory) -> ValidationReport {
    let mut report = ValidationReport::default();
    let field = c.field();
    let n = c.n_cells();
    let name = |f: usize| c.cell_name(f);
    // 1-cells: associativity and units
    for x in 0..c.n_objects() {
        let id = c.identity(x);
        for f in c.cells_into(x) {
            if c.compose(id, f) != Some(f) {
                report.push(Violation::new("left unit (1-cells)", vec![name(f)]));
            }
        }
        for f in 0..n {
            if c.cell_src(f) == x && c.compose(f, id) != Some(f) {
                report.push(Violation::new("right unit (1-cells)", vec![name(f)]));
            }
        }
    }
    for t in c.composable_tuples(3) {
        let (h, g, f) = (t[0], t[1], t[2]);
        let a = c.compose(h, c.compose(g, f).unwrap());
        let b = c.compose(c.compose(h, g).unwrap(), f);
        if a != b {
            report.push(Violation::new("associativity (1-cells)", vec![name(h), name(g), name(f)]));
        }
    }
    let basis = |f: usize, f1: usize| -> Vec<Vec<Scalar>> { (0..c.dim2(f, f1)).map(|i| unit_vec(field, c.dim2(f, f1), i)).collect() };
    // vertical units and associativity
    for f in 0..n {
        let u = c.unit2_coeffs(f);
        for f1 in c.parallel_cells(f) {
            for (i, e) in basis(f, f1).iter().enumerate() {
                if c.vcomp_coeffs(f, f1, f1, &c.unit2_coeffs(f1), e) != *e {
                    report.push(Violation::new("vertical left unit", vec![name(f), name(f1), i.to_string()]));
                }
                if c.vcomp_coeffs(f, f, f1, e, &u) != *e {
                    report.push(Violation::new("vertical right unit", vec![name(f), name(f1), i.to_string()]));
                }
            }
            for f2 in c.parallel_cells(f) {
                for f3 in c.parallel_cells(f) {
                    for (i, a) in basis(f, f1).iter().enumerate() {
                        for (j, b) in basis(f1, f2).iter().enumerate() {
                            let ba = c.vcomp_coeffs(f, f1, f2, b, a);
                            for (k, cc) in basis(f2, f3).iter().enumerate() {
                                let lhs = c.vcomp_coeffs(f, f2, f3, cc, &ba);
                                let rhs = c.vcomp_coeffs(f, f1, f3, &c.vcomp_coeffs(f1, f2, f3, cc, b), a);
                                if lhs != rhs {
                                    report.push(Violation::new(
                                        "vertical associativity",
                                        vec![name(f), name(f1), name(f2), name(f3), i.to_string(), j.to_string(), k.to_string()],
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    // horizontal units, identity preservation, associativity, interchange
    for x in 0..c.n_objects() {
        let id = c.identity(x);
        let uid = c.unit2_coeffs(id);
        for f in c.cells_into(x) {
            for f1 in c.parallel_cells(f) {
                for (i, e) in basis(f, f1).iter().enumerate() {
                    if c.hcomp_coeffs(id, id, f, f1, &uid, e) != *e {
                        report.push(Violation::new("horizontal left unit", vec![name(f), name(f1), i.to_string()]));
                    }
                }
            }
        }
        for f in (0..n).filter(|&f| c.cell_src(f) == x) {
            for f1 in c.parallel_cells(f) {
                for (i, e) in basis(f, f1).iter().enumerate() {
                    if c.hcomp_coeffs(f, f1, id, id, e, &uid) != *e {
                        report.push(Violation::new("horizontal right unit", vec![name(f), name(f1), i.to_string()]));
                    }
                }
            }
        }
    }
    for t in c.composable_tuples(2) {
        let (g, f) = (t[0], t[1]);
        let gf = c.compose(g, f).unwrap();
        if c.hcomp_coeffs(g, g, f, f, &c.unit2_coeffs(g), &c.unit2_coeffs(f)) != c.unit2_coeffs(gf) {
            report.push(Violation::new("horizontal composition preserves identities", vec![name(g), name(f)]));
        }
        for g1 in c.parallel_cells(g) {
            for g2 in c.parallel_cells(g) {
                for f1 in c.parallel_cells(f) {
                    for f2 in c.parallel_cells(f) {
                        for (i, eta) in basis(g, g1).iter().enumerate() {
                            for (j, eta2) in basis(g1, g2).iter().enumerate() {
                                for (k, tau) in basis(f, f1).iter().enumerate() {
                                    for (l, tau2) in basis(f1, f2).iter().enumerate() {
                                        let lhs = c.hcomp_coeffs(
                                            g,
                                            g2,
                                            f,
                                            f2,
                                            &c.vcomp_coeffs(g, g1, g2, eta2, eta),
                                            &c.vcomp_coeffs(f, f1, f2, tau2, tau),
                                        );
                                        let (s, m, d) =
                                            (gf, c.compose(g1, f1).unwrap(), c.compose(g2, f2).unwrap());
                                        let rhs = c.vcomp_coeffs(
                                            s,
                                            m,
                                            d,
                                            &c.hcomp_coeffs(g1, g2, f1, f2, eta2, tau2),
                                            &c.hcomp_coeffs(g, g1, f, f1, eta, tau),
                                        );
                                        if lhs != rhs {
                                            report.push(Violation::new(
                                                "interchange",
                                                vec![
                                                    name(g),
                                                    name(g1),
                                                    name(g2),
                                                    name(f),
                                                    name(f1),
                                                    name(f2),
                                                    format!("{i},{j},{k},{l}"),
                                                ],
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
    for t in c.composable_tuples(3) {
        let (h, g, f) = (t[0], t[1], t[2]);
        for h1 in c.parallel_cells(h) {
            for g1 in c.parallel_cells(g) {
                for f1 in c.parallel_cells(f) {
                    for (i, a) in basis(h, h1).iter().enumerate() {
                        for (j, b) in basis(g, g1).iter().enumerate() {
                            for (k, cc) in basis(f, f1).iter().enumerate() {
                                let gf = (c.compose(g, f).unwrap(), c.compose(g1, f1).unwrap());
                                let hg = (c.compose(h, g).unwrap(), c.compose(h1, g1).unwrap());
                                let lhs = c.hcomp_coeffs(h, h1, gf.0, gf.1, a, &c.hcomp_coeffs(g, g1, f, f1, b, cc));
                                let rhs = c.hcomp_coeffs(hg.0, hg.1, f, f1, &c.hcomp_coeffs(h, h1, g, g1, a, b), cc);
                                if lhs != rhs {
                                    report.push(Violation::new(
                                        "horizontal associativity",
                                        vec![name(h), name(g), name(f), name(h1), name(g1), name(f1), format!("{i},{j},{k}")],
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_loop(field: Field) -> TwoCategory {
        // one object, 1-cells {id, s} with s∘s = id, all Hom₂ one-dimensional
        let mut b = TwoCategoryBuilder::new(field);
        let x = b.add_object("x");
        let id = b.add_cell("id", x, x);
        let s = b.add_cell("s", x, x);
        b.set_identity(x, id);
        for (g, f, h) in [(id, id, id), (id, s, s), (s, id, s), (s, s, id)] {
            b.set_compose(g, f, h);
        }
        let mut one = Tensor3::zeros(field, 1, 1, 1);
        one.set(0, 0, 0, field.one());
        for f in [id, s] {
            b.set_hom_dim(f, f, 1);
            b.set_unit2(f, vec![field.one()]);
            b.set_vcomp(f, f, f, one.clone());
            for g in [id, s] {
                b.set_hcomp(g, g, f, f, one.clone());
            }
        }
        b.build().unwrap()
    }

    #[test]
    fn terminal_is_valid() {
        let t = TwoCategory::terminal(Field::Rational);
        assert!(validate_two_category(&t).is_valid());
        assert_eq!(t.n_objects(), 1);
    }

    #[test]
    fn perturbed_hcomp_breaks_interchange_or_units() {
        let c = scalar_loop(Field::Rational);
        assert!(validate_two_category(&c).is_valid());
        let mut b = c.to_builder();
        let mut two = Tensor3::zeros(Field::Rational, 1, 1, 1);
        two.set(0, 0, 0, Field::Rational.from_i64(2));
        b.set_hcomp(1, 1, 1, 1, two);
        let bad = b.build().unwrap();
        let rep = validate_two_category(&bad);
        assert!(!rep.is_valid());
        assert!(rep.violations.iter().any(|v| v.axiom == "horizontal composition preserves identities"));
    }

    #[test]
    fn vcomp_and_hcomp_units() {
        let f = Field::prime(5).unwrap();
        let c = scalar_loop(f);
        let tau = c.scalar2(1, &f.from_i64(3));
        assert_eq!(c.vcomp(&c.id2(1), &tau).unwrap(), tau);
        assert_eq!(c.hcomp(&c.id2(0), &tau).unwrap(), tau);
        let sig = c.scalar2(1, &f.from_i64(4));
        assert_eq!(c.vcomp(&sig, &tau).unwrap(), c.scalar2(1, &f.from_i64(2)));
        assert_eq!(c.inverse2(&tau).unwrap(), c.scalar2(1, &f.from_i64(2)));
        assert!(c.inverse2(&c.zero2(1, 1)).is_err());
    }

    #[test]
    fn products_and_powers_agree() {
        let f = Field::Rational;
        let c = Arc::new(scalar_loop(f));
        let p = product(&c, &c).unwrap();
        let q = TwoCategory::power(&c, 2).unwrap();
        assert!(validate_two_category(&p).is_valid());
        assert!(validate_two_category(&q).is_valid());
        assert_eq!(p.n_cells(), q.n_cells());
        for g in 0..p.n_cells() {
            for h in 0..p.n_cells() {
                assert_eq!(p.compose(g, h), q.compose(g, h));
                assert_eq!(p.dim2(g, h), q.dim2(g, h));
            }
        }
        let t = product(&c, &TwoCategory::terminal(f)).unwrap();
        assert_eq!(t.n_cells(), c.n_cells());
        assert!(product(&c, &TwoCategory::terminal(Field::Prime(3))).is_err());
    }
}
