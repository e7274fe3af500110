//! Pentagonator cochains: families `𝔫_{X₀,…,X_k}: id ⇒ id` of
//! endomorphisms of identity 1-cells, indexed by tuples of objects.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactlinalg::{Field, Scalar, SparseMatrix, SparseVec};
use crate::gray::{GraySemigroup, IteratedTensor};
use crate::pfcomplex::CochainSpace;
use crate::twocat::{identity_transformation, validate_modification, Modification, ModificationKind, Pseudofunctor, TwoMorphism};

/// The free space `X̃ᵏ`: one block `End₂(id_{X₀⊗…⊗X_k})` per `(k+1)`-tuple
/// of objects, tuples in lexicographic order.
#[derive(Clone, Debug)]
pub struct PentSpace {
    field: Field,
    degree: usize,
    tuples: Vec<Vec<usize>>,
    cells: Vec<usize>,
    offsets: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
}

impl PentSpace {
    pub fn new(g: &GraySemigroup, degree: usize) -> PentSpace {
        let c = g.base();
        let no = c.n_objects();
        let len = degree + 1;
        let count = no.pow(len as u32);
        let mut tuples = Vec::with_capacity(count);
        let mut cells = Vec::with_capacity(count);
        let mut offsets = Vec::with_capacity(count + 1);
        let mut index = HashMap::with_capacity(count);
        let mut acc = 0;
        for i in 0..count {
            let mut t = vec![0; len];
            let mut r = i;
            for slot in (0..len).rev() {
                t[slot] = r % no;
                r /= no;
            }
            let id = c.identity(g.tensor_objects_all(&t));
            offsets.push(acc);
            acc += c.dim2(id, id);
            cells.push(id);
            index.insert(t.clone(), i);
            tuples.push(t);
        }
        offsets.push(acc);
        PentSpace { field: g.field(), degree, tuples, cells, offsets, index }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn free_dim(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn tuple_index(&self, t: &[usize]) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    /// The identity 1-cell `id_{X₀⊗…⊗X_k}` carrying tuple `i`.
    pub fn cell(&self, i: usize) -> usize {
        self.cells[i]
    }

    /// The component of a free-coordinate vector at tuple `i`.
    pub fn value(&self, v: &SparseVec, i: usize) -> TwoMorphism {
        let r = self.range(i);
        let mut coeffs = vec![self.field.zero(); r.len()];
        for (j, x) in &v.entries {
            if r.contains(j) {
                coeffs[j - r.start] = x.clone();
            }
        }
        TwoMorphism { src: self.cells[i], dst: self.cells[i], coeffs }
    }

    /// Assembles a free-coordinate vector from per-tuple values.
    pub fn from_values(&self, values: impl IntoIterator<Item = (usize, TwoMorphism)>) -> Result<SparseVec> {
        let mut pairs = Vec::new();
        for (i, m) in values {
            if m.src != self.cells[i] || m.dst != self.cells[i] || m.coeffs.len() != self.range(i).len() {
                return Err(Error::Dimension(format!("pentagonator value at {:?} has the wrong shape", self.tuples[i])));
            }
            let o = self.offsets[i];
            pairs.extend(m.coeffs.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (o + k, x)));
        }
        Ok(SparseVec::from_pairs(self.free_dim(), pairs))
    }
}

fn push_coeffs(out: &mut Vec<(usize, usize, Scalar)>, row0: usize, col: usize, m: &TwoMorphism, negative: bool) {
    for (r, x) in m.coeffs.iter().enumerate() {
        if !x.is_zero() {
            out.push((row0 + r, col, if negative { -x.clone() } else { x.clone() }));
        }
    }
}

/// `δ_pent: X̃ᵏ → X̃ᵏ⁺¹`, `(δ𝔫)_{X₀…X_n} = 1_{id_{X₀}}⊗𝔫_{X₁…X_n}
/// + Σᵢ(−1)ⁱ 𝔫_{…,X_{i−1}⊗X_i,…} + (−1)ⁿ⁺¹ 𝔫_{X₀…X_{n−1}}⊗1_{id_{X_n}}`.
pub fn delta_pent(g: &GraySemigroup, from: &PentSpace, to: &PentSpace) -> Result<SparseMatrix> {
    if to.degree != from.degree + 1 {
        return Err(Error::Dimension(format!("δ_pent from degree {} to degree {}", from.degree, to.degree)));
    }
    let c = g.base();
    let blocks: Vec<Vec<(usize, usize, Scalar)>> = (0..to.tuples.len())
        .into_par_iter()
        .map(|ti| -> Result<Vec<(usize, usize, Scalar)>> {
            let t = &to.tuples[ti];
            let n = t.len() - 1;
            let row0 = to.offsets[ti];
            let mut out = Vec::new();
            let first = from.index[&t[1..]];
            let id0 = c.id2(c.identity(t[0]));
            for (k, col) in from.range(first).enumerate() {
                let m = g.tensor2(&id0, &c.basis2(from.cells[first], from.cells[first], k))?;
                push_coeffs(&mut out, row0, col, &m, false);
            }
            for i in 1..=n {
                let mut u = t[..i - 1].to_vec();
                u.push(g.tensor_objects(t[i - 1], t[i]));
                u.extend_from_slice(&t[i + 1..]);
                let ui = from.index[&u];
                for (k, col) in from.range(ui).enumerate() {
                    let m = c.basis2(from.cells[ui], from.cells[ui], k);
                    push_coeffs(&mut out, row0, col, &m, i % 2 == 1);
                }
            }
            let last = from.index[&t[..n]];
            let idn = c.id2(c.identity(t[n]));
            for (k, col) in from.range(last).enumerate() {
                let m = g.tensor2(&c.basis2(from.cells[last], from.cells[last], k), &idn)?;
                push_coeffs(&mut out, row0, col, &m, (n + 1) % 2 == 1);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(SparseMatrix::from_triplets(g.field(), to.free_dim(), from.free_dim(), blocks.into_iter().flatten()))
}

/// `φ: X̃ᵏ → X^{0,k}`, `(φ𝔫)(f₀,…,f_k) = 𝔫_{X′}∘1_{f₀⊗…⊗f_k} − 1_{f₀⊗…⊗f_k}∘𝔫_X`,
/// into the free coordinates of `to` (a degree-1 cochain space of `⊗(k+1)`).
pub fn phi_map(t: &IteratedTensor, from: &PentSpace, to: &CochainSpace) -> Result<SparseMatrix> {
    if to.degree() != 1 || t.arity() != from.degree + 1 {
        return Err(Error::Dimension("φ maps X̃ᵏ into the first column at X^{0,k}".into()));
    }
    let (src, c) = (t.source(), t.target());
    let blocks: Vec<Vec<(usize, usize, Scalar)>> = (0..to.n_tuples())
        .into_par_iter()
        .map(|ti| -> Result<Vec<(usize, usize, Scalar)>> {
            let f = to.tuples()[ti][0];
            let fc = t.map_cell(f);
            let x = src.decode_objects(src.cell_src(f));
            let x1 = src.decode_objects(src.cell_dst(f));
            let row0 = to.range(ti).start;
            let mut out = Vec::new();
            let after = from.index[&x1];
            for (k, col) in from.range(after).enumerate() {
                let m = c.whisker_right(&c.basis2(from.cells[after], from.cells[after], k), fc)?;
                push_coeffs(&mut out, row0, col, &m, false);
            }
            let before = from.index[&x];
            for (k, col) in from.range(before).enumerate() {
                let m = c.whisker_left(fc, &c.basis2(from.cells[before], from.cells[before], k))?;
                push_coeffs(&mut out, row0, col, &m, true);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(SparseMatrix::from_triplets(t.target().field(), to.free_dim(), from.free_dim(), blocks.into_iter().flatten()))
}

/// Whether a pentagonator cochain is a modification `1 ⇛ 1` of the
/// identity transformation of `⊗(k+1)`, checked with the general
/// modification validator (independently of `φ`).
pub fn is_modification(t: &IteratedTensor, space: &PentSpace, v: &SparseVec) -> Result<bool> {
    let src = t.source();
    if src.n_objects() != space.tuples.len() {
        return Err(Error::Dimension("pentagonator space does not match the tensor power".into()));
    }
    let id = identity_transformation(t);
    let n = (0..src.n_objects())
        .map(|x| {
            let i = space.index[&src.decode_objects(x)];
            space.value(v, i)
        })
        .collect();
    Ok(matches!(validate_modification(t, t, &id, &id, &Modification { n })?, ModificationKind::Modification))
}
