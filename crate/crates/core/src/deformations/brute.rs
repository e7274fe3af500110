//! Exhaustive classification of first-order deformations over a prime
//! field, independent of the coboundary matrices: every candidate is
//! tested against the structural equations and classes are formed by
//! trying every witness against the equivalence equations.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defcomplex::{assemble_complex, ComplexSelection, DefComplex};
use crate::error::{Error, Result};
use crate::exactlinalg::{solve_in_image, Field, SparseVec};

use super::structural::{apply_witness, check_equivalence, is_structural};
use super::{DeformationSpaces, EquivalenceWitness, FirstOrderDeformation};

/// Default cap on the number of enumerated candidates (`p^dim`).
pub const DEFAULT_ENUMERATION_BOUND: u64 = 1 << 20;

/// Which deformation data vary; the others are fixed to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifyMode {
    /// `(⊗̂⁽¹⁾, â⁽¹⁾, π⁽¹⁾)` up to `(ψ̂⁽¹⁾, ω⁽¹⁾)`.
    Unit,
    /// `(⊗̂⁽¹⁾, â⁽¹⁾, 0)` up to ψ-equivalence.
    TensAss,
    /// `(0, â⁽¹⁾, 0)` up to ψ-equivalence.
    Ass,
    /// `(⊗̂⁽¹⁾, 0, 0)` up to ψ-equivalence.
    Tens,
    /// `(0, 0, π⁽¹⁾)` up to ω-equivalence.
    Pent,
}

impl ClassifyMode {
    pub const ALL: [ClassifyMode; 5] = [ClassifyMode::Unit, ClassifyMode::TensAss, ClassifyMode::Ass, ClassifyMode::Tens, ClassifyMode::Pent];

    pub fn key(self) -> &'static str {
        match self {
            ClassifyMode::Unit => "unit",
            ClassifyMode::TensAss => "tens_ass",
            ClassifyMode::Ass => "ass",
            ClassifyMode::Tens => "tens",
            ClassifyMode::Pent => "pent",
        }
    }

    /// The complex whose cohomology classifies this mode.
    pub fn selection(self) -> ComplexSelection {
        match self {
            ClassifyMode::Unit => ComplexSelection::Unit,
            ClassifyMode::TensAss => ComplexSelection::TensAss,
            ClassifyMode::Ass => ComplexSelection::Ass,
            ClassifyMode::Tens => ComplexSelection::Tens,
            ClassifyMode::Pent => ComplexSelection::PentRestricted,
        }
    }

    /// The classifying cohomological degree.
    pub fn degree(self) -> usize {
        match self {
            ClassifyMode::Pent => 3,
            _ => 2,
        }
    }

    fn varies(self) -> (bool, bool, bool) {
        match self {
            ClassifyMode::Unit => (true, true, true),
            ClassifyMode::TensAss => (true, true, false),
            ClassifyMode::Ass => (false, true, false),
            ClassifyMode::Tens => (true, false, false),
            ClassifyMode::Pent => (false, false, true),
        }
    }

    fn witness_varies(self) -> (bool, bool) {
        match self {
            ClassifyMode::Unit => (true, true),
            ClassifyMode::Pent => (false, true),
            _ => (true, false),
        }
    }
}

impl fmt::Display for ClassifyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for ClassifyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassifyMode::ALL
            .into_iter()
            .find(|m| m.key() == s)
            .ok_or_else(|| Error::Parse(format!("unknown mode '{s}' (expected one of unit, tens_ass, ass, tens, pent)")))
    }
}

/// Outcome of an exhaustive classification.
#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub mode: ClassifyMode,
    pub field: Field,
    /// Dimension of the enumerated candidate space.
    pub candidate_dim: usize,
    /// Dimension of the enumerated witness space.
    pub witness_dim: usize,
    pub candidates: u64,
    /// Candidates passing every structural condition.
    pub structural: usize,
    pub classes: usize,
    /// The lexicographically first member of each class.
    pub representatives: Vec<FirstOrderDeformation>,
    /// Number of `(d, d′, w)` triples confirmed by the equivalence check.
    pub equivalences_checked: usize,
}

fn columns(m: &crate::exactlinalg::SparseMatrix) -> Vec<SparseVec> {
    m.columns()
}

fn candidate_generators(sp: &DeformationSpaces, mode: ClassifyMode) -> Vec<FirstOrderDeformation> {
    let (vt, va, vp) = mode.varies();
    let field = sp.gray().field();
    let zero = sp.zero_deformation();
    let mut out = Vec::new();
    if va {
        out.extend(columns(sp.associator.basis()).into_iter().map(|v| FirstOrderDeformation { associator1: v, ..zero.clone() }));
    }
    if vp {
        out.extend((0..sp.pentagonator.free_dim()).map(|i| FirstOrderDeformation {
            pentagonator1: SparseVec::unit(sp.pentagonator.free_dim(), i, field),
            ..zero.clone()
        }));
    }
    if vt {
        out.extend(columns(sp.tensorator.basis()).into_iter().map(|v| FirstOrderDeformation { tensorator1: v, ..zero.clone() }));
    }
    out
}

fn witness_generators(sp: &DeformationSpaces, mode: ClassifyMode) -> Vec<EquivalenceWitness> {
    let (vpsi, vomega) = mode.witness_varies();
    let field = sp.gray().field();
    let zero = sp.zero_witness();
    let mut out = Vec::new();
    if vpsi {
        out.extend(columns(sp.psi.basis()).into_iter().map(|v| EquivalenceWitness { psi1: v, ..zero.clone() }));
    }
    if vomega {
        out.extend(
            (0..sp.omega.free_dim())
                .map(|i| EquivalenceWitness { omega1: SparseVec::unit(sp.omega.free_dim(), i, field), ..zero.clone() }),
        );
    }
    out
}

fn count(p: u64, dim: usize, bound: u64, what: &str) -> Result<u64> {
    match p.checked_pow(dim as u32) {
        Some(n) if n <= bound => Ok(n),
        _ => Err(Error::ResourceCap(format!(
            "{what} space has {p}^{dim} elements, above the enumeration bound {bound}; use a smaller model or field"
        ))),
    }
}

/// Digits of `i` in base `p`, most significant first (lexicographic order).
fn digits(mut i: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for slot in (0..len).rev() {
        out[slot] = i % p;
        i /= p;
    }
    out
}

fn combine_deformations(field: Field, gens: &[FirstOrderDeformation], coeffs: &[u64], zero: &FirstOrderDeformation) -> FirstOrderDeformation {
    let mut d = zero.clone();
    for (g, &k) in gens.iter().zip(coeffs) {
        if k != 0 {
            let c = field.from_i64(k as i64);
            d = FirstOrderDeformation {
                tensorator1: d.tensorator1.axpy(&c, &g.tensorator1),
                associator1: d.associator1.axpy(&c, &g.associator1),
                pentagonator1: d.pentagonator1.axpy(&c, &g.pentagonator1),
            };
        }
    }
    d
}

fn combine_witnesses(field: Field, gens: &[EquivalenceWitness], coeffs: &[u64], zero: &EquivalenceWitness) -> EquivalenceWitness {
    let mut w = zero.clone();
    for (g, &k) in gens.iter().zip(coeffs) {
        if k != 0 {
            let c = field.from_i64(k as i64);
            w = EquivalenceWitness { psi1: w.psi1.axpy(&c, &g.psi1), omega1: w.omega1.axpy(&c, &g.omega1) };
        }
    }
    w
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Enumerates every candidate of `mode` over a prime field, keeps those
/// passing the structural conditions, and merges `d` with `d′` whenever
/// some witness `w` satisfies the equivalence conditions for `(d, d′, w)`.
/// Classes are reported with their lexicographically first member.
pub fn brute_force_classes(sp: &DeformationSpaces, mode: ClassifyMode, bound: u64, workers: Option<usize>) -> Result<ClassificationReport> {
    let field = sp.gray().field();
    let p = field.order().ok_or_else(|| Error::Precondition("exhaustive enumeration needs a finite field".into()))?;
    let gens = candidate_generators(sp, mode);
    let wgens = witness_generators(sp, mode);
    let n = count(p, gens.len(), bound, "candidate")?;
    let nw = count(p, wgens.len(), bound, "witness")?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::Precondition(format!("worker pool: {e}")))?;
    let zero = sp.zero_deformation();
    let wzero = sp.zero_witness();

    let structural: Vec<FirstOrderDeformation> = pool.install(|| {
        (0..n)
            .into_par_iter()
            .map(|i| -> Result<Option<FirstOrderDeformation>> {
                let d = combine_deformations(field, &gens, &digits(i, p, gens.len()), &zero);
                Ok(if is_structural(sp, &d)? { Some(d) } else { None })
            })
            .collect::<Result<Vec<_>>>()
    })?
    .into_iter()
    .flatten()
    .collect();
    let index: HashMap<&FirstOrderDeformation, usize> = structural.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let witnesses: Vec<EquivalenceWitness> = (1..nw).map(|i| combine_witnesses(field, &wgens, &digits(i, p, wgens.len()), &wzero)).collect();

    let edges: Vec<Vec<usize>> = pool.install(|| {
        structural
            .par_iter()
            .map(|d| -> Result<Vec<usize>> {
                let mut out = Vec::new();
                for w in &witnesses {
                    let d1 = apply_witness(sp, d, w)?;
                    let Some(&j) = index.get(&d1) else {
                        if mode == ClassifyMode::Unit {
                            return Err(Error::Invariant("an equivalent deformation fails the structural conditions".into()));
                        }
                        continue;
                    };
                    let report = check_equivalence(sp, d, &d1, w)?;
                    if !report.is_valid() {
                        return Err(Error::Invariant(format!("witness rejected by {}", report.failed_axioms().join(", "))));
                    }
                    out.push(j);
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut parent: Vec<usize> = (0..structural.len()).collect();
    let mut checked = 0;
    for (i, js) in edges.iter().enumerate() {
        checked += js.len();
        for &j in js {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut representatives = Vec::new();
    for i in 0..structural.len() {
        if find(&mut parent, i) == i {
            representatives.push(structural[i].clone());
        }
    }
    Ok(ClassificationReport {
        mode,
        field,
        candidate_dim: gens.len(),
        witness_dim: wgens.len(),
        candidates: n,
        structural: structural.len(),
        classes: representatives.len(),
        representatives,
        equivalences_checked: checked,
    })
}

/// A witness of the equivalence of two deformations satisfying the
/// structural conditions, found by solving in the image of the degree-1
/// differential of the unitary deformation complex; `None` when they are
/// not equivalent. Returned witnesses are re-verified by [`check_equivalence`].
pub fn find_equivalence(
    dc: &DefComplex,
    sp: &DeformationSpaces,
    d1: &FirstOrderDeformation,
    d2: &FirstOrderDeformation,
) -> Result<Option<EquivalenceWitness>> {
    for (name, d) in [("first", d1), ("second", d2)] {
        if !is_structural(sp, d)? {
            return Err(Error::Precondition(format!("the {name} deformation fails the structural conditions")));
        }
    }
    let cx = assemble_complex(dc, ComplexSelection::Unit, 1..=1)?;
    let (l1, l2) = (cx.layer(1)?, cx.layer(2)?);
    let rhs = d2.to_layer(l2)?.sub(&d1.to_layer(l2)?);
    let Some(x) = solve_in_image(&cx.coboundary(1)?, &rhs)? else {
        return Ok(None);
    };
    let basis = l1.basis.as_ref().ok_or_else(|| Error::Invariant("degree-1 basis missing".into()))?;
    let w = EquivalenceWitness::from_layer(l1, &basis.mul_vec(&x)?)?;
    let report = check_equivalence(sp, d1, d2, &w)?;
    if !report.is_valid() {
        return Err(Error::Invariant(format!("solved witness rejected by {}", report.failed_axioms().join(", "))));
    }
    Ok(Some(w))
}
