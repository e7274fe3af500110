//! Cochain spaces `Xⁿ(F)` cut out of the free coefficient space by
//! naturality (and optionally by vanishing on tuples containing identities).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactlinalg::{kernel_basis, Field, Scalar, SparseMatrix, SparseVec};
use crate::twocat::{kron_all, unit_vec, Pseudofunctor, TwoCategory, TwoMorphism};

/// A cochain space of a unitary pseudofunctor `F: C → D` in degree `n`.
///
/// Free coordinates are indexed by pairs (composable `n`-tuple, basis
/// element of `Hom₂(F f₀∘…∘F f_{n−1}, F(f₀∘…∘f_{n−1}))`), tuples in
/// lexicographic order. The cochain space itself is the column span of
/// [`CochainSpace::basis`].
#[derive(Clone, Debug)]
pub struct CochainSpace {
    field: Field,
    degree: usize,
    tuples: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    ends: Vec<(usize, usize)>,
    index: HashMap<Vec<usize>, usize>,
    excluded: Vec<bool>,
    basis: SparseMatrix,
}

impl CochainSpace {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn n_tuples(&self) -> usize {
        self.tuples.len()
    }

    /// Number of free coordinates.
    pub fn free_dim(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// Dimension of the cochain space.
    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    /// Basis vectors as columns over free coordinates.
    pub fn basis(&self) -> &SparseMatrix {
        &self.basis
    }

    pub fn tuple_index(&self, t: &[usize]) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Free coordinate range of a tuple.
    pub fn range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    /// `(F f₀∘…∘F f_{n−1}, F(f₀∘…∘f_{n−1}))` for tuple `i`.
    pub fn ends(&self, i: usize) -> (usize, usize) {
        self.ends[i]
    }

    /// Whether tuple `i` was forced to vanish.
    pub fn is_excluded(&self, i: usize) -> bool {
        self.excluded[i]
    }

    /// Tuple and basis position of a free coordinate.
    pub fn locate(&self, coord: usize) -> (usize, usize) {
        let i = self.offsets.partition_point(|&o| o <= coord) - 1;
        (i, coord - self.offsets[i])
    }

    /// The component of a free-coordinate vector at tuple `i`.
    pub fn value(&self, v: &SparseVec, i: usize) -> TwoMorphism {
        let (s, d) = self.ends[i];
        let r = self.range(i);
        let mut coeffs = vec![self.field.zero(); r.len()];
        for (j, x) in &v.entries {
            if r.contains(j) {
                coeffs[j - r.start] = x.clone();
            }
        }
        TwoMorphism { src: s, dst: d, coeffs }
    }

    /// Assembles a free-coordinate vector from per-tuple values.
    pub fn from_values(&self, values: impl IntoIterator<Item = (usize, TwoMorphism)>) -> Result<SparseVec> {
        let mut pairs = Vec::new();
        for (i, m) in values {
            if (m.src, m.dst) != self.ends[i] || m.coeffs.len() != self.range(i).len() {
                return Err(Error::Dimension(format!("value at tuple {:?} has the wrong shape", self.tuples[i])));
            }
            let o = self.offsets[i];
            pairs.extend(m.coeffs.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (o + k, x)));
        }
        Ok(SparseVec::from_pairs(self.free_dim(), pairs))
    }

    /// Free coordinates of a combination of basis vectors.
    pub fn embed(&self, coords: &SparseVec) -> Result<SparseVec> {
        self.basis.mul_vec(coords)
    }

    /// Whether a free-coordinate vector lies in the cochain space.
    pub fn contains(&self, v: &SparseVec) -> bool {
        crate::exactlinalg::ImageSolver::new(&self.basis).contains(v)
    }
}

/// Per-slot, per-component basis 2-cells `τ: f ⇒ f′` used to impose
/// naturality. For a power `Cᵏ` only cells differing in one component are
/// used (the products of these generate all basis cells by interchange).
fn slot_generators(c: &TwoCategory, f: usize) -> Vec<TwoMorphism> {
    let field = c.field();
    let mut out = Vec::new();
    match c.as_power() {
        Some((base, _)) => {
            let parts = c.decode_cells(f);
            for (k, &fk) in parts.iter().enumerate() {
                for fk1 in base.parallel_cells(fk) {
                    let dim = base.dim2(fk, fk1);
                    if fk1 == fk && dim == 1 {
                        continue;
                    }
                    let mut target = parts.clone();
                    target[k] = fk1;
                    let f1 = c.encode_cells(&target);
                    for i in 0..dim {
                        let vecs: Vec<Vec<Scalar>> = parts
                            .iter()
                            .enumerate()
                            .map(|(j, &pj)| if j == k { unit_vec(field, dim, i) } else { base.unit2_coeffs(pj) })
                            .collect();
                        out.push(TwoMorphism { src: f, dst: f1, coeffs: kron_all(field, &vecs) });
                    }
                }
            }
        }
        None => {
            for f1 in c.parallel_cells(f) {
                let dim = c.dim2(f, f1);
                if f1 == f && dim == 1 {
                    continue;
                }
                out.extend((0..dim).map(|i| c.basis2(f, f1, i)));
            }
        }
    }
    out
}

fn hcomp_all(c: &TwoCategory, parts: &[TwoMorphism]) -> Result<TwoMorphism> {
    let (last, rest) = parts.split_last().ok_or_else(|| Error::Precondition("empty composite".into()))?;
    rest.iter().rev().try_fold(last.clone(), |acc, x| c.hcomp(x, &acc))
}

/// `Xⁿ(F)`: families over composable `n`-tuples, natural in every slot.
/// With `vanish_on_identities`, families must also vanish on every tuple
/// containing an identity 1-cell. `n = 0` gives the zero space.
pub fn cochain_space(f: &dyn Pseudofunctor, n: usize, vanish_on_identities: bool) -> Result<CochainSpace> {
    let (c, d) = (f.source(), f.target());
    let field = d.field();
    let tuples = if n == 0 { Vec::new() } else { c.composable_tuples(n) };
    let mut offsets = Vec::with_capacity(tuples.len() + 1);
    let mut ends = Vec::with_capacity(tuples.len());
    let mut excluded = Vec::with_capacity(tuples.len());
    let mut index = HashMap::with_capacity(tuples.len());
    let mut acc = 0;
    for (i, t) in tuples.iter().enumerate() {
        let images: Vec<usize> = t.iter().map(|&x| f.map_cell(x)).collect();
        let s = d.compose_all(&images).ok_or_else(|| Error::NotComposable("images of a composable tuple".into()))?;
        let e = f.map_cell(c.compose_all(t).expect("composable tuple"));
        offsets.push(acc);
        acc += d.dim2(s, e);
        ends.push((s, e));
        excluded.push(vanish_on_identities && t.iter().any(|&x| c.is_identity(x)));
        index.insert(t.clone(), i);
    }
    offsets.push(acc);
    let mut sp = CochainSpace {
        field,
        degree: n,
        tuples,
        offsets,
        ends,
        index,
        excluded,
        basis: SparseMatrix::zero(field, acc, 0),
    };
    let rows = naturality_rows(f, &sp)?;
    let kept: Vec<usize> =
        (0..sp.tuples.len()).filter(|&i| !sp.excluded[i]).flat_map(|i| sp.range(i)).collect();
    let columns: Vec<SparseVec> = if rows.is_empty() {
        kept.iter().map(|&j| SparseVec::unit(acc, j, field)).collect()
    } else {
        let mut pos = vec![usize::MAX; acc];
        for (k, &j) in kept.iter().enumerate() {
            pos[j] = k;
        }
        let restricted: Vec<SparseVec> = rows
            .iter()
            .map(|r| SparseVec::from_pairs(kept.len(), r.entries.iter().filter(|(j, _)| pos[*j] != usize::MAX).map(|(j, x)| (pos[*j], x.clone()))))
            .collect();
        let m = SparseMatrix::from_rows(field, kept.len(), restricted);
        kernel_basis(&m)
            .into_iter()
            .map(|v| SparseVec::from_pairs(acc, v.entries.into_iter().map(|(k, x)| (kept[k], x))))
            .collect()
    };
    sp.basis = SparseMatrix::from_columns(field, acc, &columns);
    Ok(sp)
}

/// The naturality equations `φ(…f′ᵢ…)·(1∘…∘F τ∘…∘1) = F(1∘…∘τ∘…∘1)·φ(…fᵢ…)`
/// as rows over free coordinates.
pub fn naturality_rows(f: &dyn Pseudofunctor, sp: &CochainSpace) -> Result<Vec<SparseVec>> {
    let (c, d) = (f.source(), f.target());
    let mut rows = Vec::new();
    let generators: HashMap<usize, Vec<TwoMorphism>> = {
        let mut g = HashMap::new();
        for t in &sp.tuples {
            for &x in t {
                g.entry(x).or_insert_with(|| slot_generators(c, x));
            }
        }
        g
    };
    for (ti, t) in sp.tuples.iter().enumerate() {
        for (slot, &x) in t.iter().enumerate() {
            for tau in &generators[&x] {
                let mut t1 = t.clone();
                t1[slot] = tau.dst;
                let ti1 = sp.index[&t1];
                let left_parts: Vec<TwoMorphism> = t
                    .iter()
                    .enumerate()
                    .map(|(k, &y)| if k == slot { f.map_morphism(tau) } else { d.id2(f.map_cell(y)) })
                    .collect();
                let left = hcomp_all(d, &left_parts)?;
                let right_parts: Vec<TwoMorphism> =
                    t.iter().enumerate().map(|(k, &y)| if k == slot { tau.clone() } else { c.id2(y) }).collect();
                let right = f.map_morphism(&hcomp_all(c, &right_parts)?);
                let (s, _) = sp.ends[ti];
                let (_, e1) = sp.ends[ti1];
                let n_rows = d.dim2(s, e1);
                let mut block: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n_rows];
                let (e, s1) = (sp.ends[ti].1, sp.ends[ti1].0);
                for (k, col) in sp.range(ti1).enumerate() {
                    let img = d.vcomp(&d.basis2(s1, e1, k), &left)?;
                    for (r, v) in img.coeffs.into_iter().enumerate() {
                        if !v.is_zero() {
                            block[r].push((col, v));
                        }
                    }
                }
                for (k, col) in sp.range(ti).enumerate() {
                    let img = d.vcomp(&right, &d.basis2(s, e, k))?;
                    for (r, v) in img.coeffs.into_iter().enumerate() {
                        if !v.is_zero() {
                            block[r].push((col, -v));
                        }
                    }
                }
                for entries in block {
                    let row = SparseVec::from_pairs(sp.free_dim(), entries);
                    if !row.is_zero() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    Ok(rows)
}
