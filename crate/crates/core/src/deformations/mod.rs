//! First-order deformations of a Gray semigroup: the deformation data
//! `(⊗̂⁽¹⁾, â⁽¹⁾, π⁽¹⁾)` (with `⊗₀⁽¹⁾ = 0`), equivalence witnesses
//! `(ψ̂⁽¹⁾, ω⁽¹⁾)`, direct checks of the first-order structural and
//! equivalence equations, the extension to `K[ε]/(ε²)` with a full
//! validator, and the exhaustive classifier used as an oracle for the
//! cohomology computations.
//!
//! In a Gray semigroup the associator 1-cells, the undeformed `â`, `π` and
//! `⊗₀` are identities, so every equation below is the general one with
//! those factors removed.

mod brute;
mod dual;
mod extend;
mod structural;

use std::sync::Arc;

use serde_json::{json, Value};

pub use brute::{brute_force_classes, find_equivalence, ClassifyMode, ClassificationReport, DEFAULT_ENUMERATION_BOUND};
pub use dual::Dual;
pub use extend::{extend, extend_and_deform, validate_extended, ExtendedStructure};
pub use structural::{apply_witness, check_equivalence, check_structural, is_structural, EQUIVALENCE_CONDITIONS, STRUCTURAL_CONDITIONS};

use crate::defcomplex::{DefComplex, Layer, PentSpace, SummandKind};
use crate::error::{Error, Result};
use crate::exactlinalg::SparseVec;
use crate::gray::{GraySemigroup, IteratedTensor};
use crate::pfcomplex::CochainSpace;
use crate::twocat::TwoMorphism;

/// `(⊗̂⁽¹⁾, â⁽¹⁾, π⁽¹⁾)` in free coordinates of `X^{1,1}`, `X^{0,2}` and `X̃³`.
/// No cocycle condition is imposed; see [`check_structural`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FirstOrderDeformation {
    pub tensorator1: SparseVec,
    pub associator1: SparseVec,
    pub pentagonator1: SparseVec,
}

/// `(ψ̂⁽¹⁾, ω⁽¹⁾)` in free coordinates of `X^{0,1}` and `X̃²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquivalenceWitness {
    pub psi1: SparseVec,
    pub omega1: SparseVec,
}

/// The cochain spaces housing deformations and witnesses of one Gray
/// semigroup (special, i.e. unitary, where that applies).
pub struct DeformationSpaces {
    gray: Arc<GraySemigroup>,
    t2: Arc<IteratedTensor>,
    t3: Arc<IteratedTensor>,
    pub tensorator: Arc<CochainSpace>,
    pub associator: Arc<CochainSpace>,
    pub pentagonator: Arc<PentSpace>,
    pub psi: Arc<CochainSpace>,
    pub omega: Arc<PentSpace>,
}

impl DeformationSpaces {
    pub fn new(dc: &DefComplex) -> Result<Self> {
        Ok(DeformationSpaces {
            gray: dc.gray().clone(),
            t2: dc.tensor(2)?,
            t3: dc.tensor(3)?,
            tensorator: dc.bicomplex_space(1, 1, true)?,
            associator: dc.bicomplex_space(0, 2, true)?,
            pentagonator: dc.pent_space(3)?,
            psi: dc.bicomplex_space(0, 1, true)?,
            omega: dc.pent_space(2)?,
        })
    }

    pub fn gray(&self) -> &Arc<GraySemigroup> {
        &self.gray
    }

    fn pair(&self, f: usize, g: usize) -> usize {
        self.t2.source_arc().encode_cells(&[f, g])
    }

    fn triple(&self, f: usize, g: usize, h: usize) -> usize {
        self.t3.source_arc().encode_cells(&[f, g, h])
    }

    fn tuple(space: &CochainSpace, t: &[usize]) -> Result<usize> {
        space.tuple_index(t).ok_or_else(|| Error::Invariant(format!("argument tuple {t:?} not in the cochain space")))
    }

    fn pent_tuple(space: &PentSpace, t: &[usize]) -> Result<usize> {
        space.tuple_index(t).ok_or_else(|| Error::Invariant(format!("object tuple {t:?} not in the pentagonator space")))
    }

    /// `⊗̂⁽¹⁾((f′,g′),(f,g))`.
    pub fn tensorator_at(&self, v: &SparseVec, f1: usize, g1: usize, f: usize, g: usize) -> Result<TwoMorphism> {
        let i = Self::tuple(&self.tensorator, &[self.pair(f1, g1), self.pair(f, g)])?;
        Ok(self.tensorator.value(v, i))
    }

    /// `â⁽¹⁾(f,g,h)`.
    pub fn associator_at(&self, v: &SparseVec, f: usize, g: usize, h: usize) -> Result<TwoMorphism> {
        let i = Self::tuple(&self.associator, &[self.triple(f, g, h)])?;
        Ok(self.associator.value(v, i))
    }

    /// `π⁽¹⁾_{X,Y,Z,T}`.
    pub fn pentagonator_at(&self, v: &SparseVec, objs: [usize; 4]) -> Result<TwoMorphism> {
        Ok(self.pentagonator.value(v, Self::pent_tuple(&self.pentagonator, &objs)?))
    }

    /// `ψ̂⁽¹⁾(f,g)`.
    pub fn psi_at(&self, v: &SparseVec, f: usize, g: usize) -> Result<TwoMorphism> {
        let i = Self::tuple(&self.psi, &[self.pair(f, g)])?;
        Ok(self.psi.value(v, i))
    }

    /// `ω⁽¹⁾_{X,Y,Z}`.
    pub fn omega_at(&self, v: &SparseVec, objs: [usize; 3]) -> Result<TwoMorphism> {
        Ok(self.omega.value(v, Self::pent_tuple(&self.omega, &objs)?))
    }

    pub fn zero_deformation(&self) -> FirstOrderDeformation {
        FirstOrderDeformation {
            tensorator1: SparseVec::zero(self.tensorator.free_dim()),
            associator1: SparseVec::zero(self.associator.free_dim()),
            pentagonator1: SparseVec::zero(self.pentagonator.free_dim()),
        }
    }

    pub fn zero_witness(&self) -> EquivalenceWitness {
        EquivalenceWitness { psi1: SparseVec::zero(self.psi.free_dim()), omega1: SparseVec::zero(self.omega.free_dim()) }
    }

    pub(crate) fn check_shape(&self, d: &FirstOrderDeformation) -> Result<()> {
        let ok = d.tensorator1.len == self.tensorator.free_dim()
            && d.associator1.len == self.associator.free_dim()
            && d.pentagonator1.len == self.pentagonator.free_dim();
        if !ok {
            return Err(Error::Structural(format!(
                "deformation shape ({}, {}, {}) does not match ({}, {}, {})",
                d.tensorator1.len,
                d.associator1.len,
                d.pentagonator1.len,
                self.tensorator.free_dim(),
                self.associator.free_dim(),
                self.pentagonator.free_dim()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_witness_shape(&self, w: &EquivalenceWitness) -> Result<()> {
        if w.psi1.len != self.psi.free_dim() || w.omega1.len != self.omega.free_dim() {
            return Err(Error::Structural(format!(
                "witness shape ({}, {}) does not match ({}, {})",
                w.psi1.len,
                w.omega1.len,
                self.psi.free_dim(),
                self.omega.free_dim()
            )));
        }
        Ok(())
    }

    fn cell_names(&self, space: &CochainSpace, v: &SparseVec, tuple_cells: impl Fn(&[usize]) -> Vec<usize>) -> Vec<Value> {
        let c = self.gray.base();
        let mut out = Vec::new();
        for (i, t) in space.tuples().iter().enumerate() {
            let m = space.value(v, i);
            if m.coeffs.iter().all(|x| x.is_zero()) {
                continue;
            }
            let names: Vec<String> = tuple_cells(t).into_iter().map(|f| c.cell_name(f)).collect();
            out.push(json!({"index": names, "coeffs": m.coeffs.iter().map(|x| x.to_text()).collect::<Vec<_>>()}));
        }
        out
    }

    fn pent_names(&self, space: &PentSpace, v: &SparseVec) -> Vec<Value> {
        let c = self.gray.base();
        let mut out = Vec::new();
        for (i, t) in space.tuples().iter().enumerate() {
            let m = space.value(v, i);
            if m.coeffs.iter().all(|x| x.is_zero()) {
                continue;
            }
            let names: Vec<String> = t.iter().map(|&x| c.object_name(x)).collect();
            out.push(json!({"index": names, "coeffs": m.coeffs.iter().map(|x| x.to_text()).collect::<Vec<_>>()}));
        }
        out
    }

    /// Sparse JSON keyed by family and index tuple.
    pub fn deformation_json(&self, d: &FirstOrderDeformation) -> Value {
        let p2 = self.t2.source_arc().clone();
        let p3 = self.t3.source_arc().clone();
        json!({
            "tensorator1": self.cell_names(&self.tensorator, &d.tensorator1, |t| t.iter().flat_map(|&x| p2.decode_cells(x)).collect()),
            "associator1": self.cell_names(&self.associator, &d.associator1, |t| p3.decode_cells(t[0])),
            "pentagonator1": self.pent_names(&self.pentagonator, &d.pentagonator1),
        })
    }

    /// Sparse JSON keyed by family and index tuple.
    pub fn witness_json(&self, w: &EquivalenceWitness) -> Value {
        let p2 = self.t2.source_arc().clone();
        json!({
            "psi1": self.cell_names(&self.psi, &w.psi1, |t| p2.decode_cells(t[0])),
            "omega1": self.pent_names(&self.omega, &w.omega1),
        })
    }
}

impl FirstOrderDeformation {
    /// The deformation as a vector of the degree-2 layer of the unitary
    /// deformation complex.
    pub fn to_layer(&self, layer: &Layer) -> Result<SparseVec> {
        layer.join(&[
            (SummandKind::Bicomplex { m: 0, n: 2 }, self.associator1.clone()),
            (SummandKind::Pent { k: 3 }, self.pentagonator1.clone()),
            (SummandKind::Bicomplex { m: 1, n: 1 }, self.tensorator1.clone()),
        ])
    }

    /// Inverse of [`FirstOrderDeformation::to_layer`].
    pub fn from_layer(layer: &Layer, v: &SparseVec) -> Result<Self> {
        let part = |kind| layer.restrict(v, kind).ok_or_else(|| Error::Dimension(format!("{kind} missing from degree {}", layer.degree)));
        Ok(FirstOrderDeformation {
            associator1: part(SummandKind::Bicomplex { m: 0, n: 2 })?,
            pentagonator1: part(SummandKind::Pent { k: 3 })?,
            tensorator1: part(SummandKind::Bicomplex { m: 1, n: 1 })?,
        })
    }

    /// Reads the families present in `layer` (of any deformation complex
    /// in the degree classifying `(⊗̂⁽¹⁾, â⁽¹⁾, π⁽¹⁾)`); absent ones are zero.
    pub fn from_partial_layer(sp: &DeformationSpaces, layer: &Layer, v: &SparseVec) -> Self {
        let zero = sp.zero_deformation();
        let part = |kind, default: SparseVec| layer.restrict(v, kind).unwrap_or(default);
        FirstOrderDeformation {
            associator1: part(SummandKind::Bicomplex { m: 0, n: 2 }, zero.associator1.clone()),
            pentagonator1: part(SummandKind::Pent { k: 3 }, zero.pentagonator1.clone()),
            tensorator1: part(SummandKind::Bicomplex { m: 1, n: 1 }, zero.tensorator1.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.tensorator1.is_zero() && self.associator1.is_zero() && self.pentagonator1.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        FirstOrderDeformation {
            tensorator1: self.tensorator1.add(&other.tensorator1),
            associator1: self.associator1.add(&other.associator1),
            pentagonator1: self.pentagonator1.add(&other.pentagonator1),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        FirstOrderDeformation {
            tensorator1: self.tensorator1.sub(&other.tensorator1),
            associator1: self.associator1.sub(&other.associator1),
            pentagonator1: self.pentagonator1.sub(&other.pentagonator1),
        }
    }
}

impl EquivalenceWitness {
    /// The witness as a vector of the degree-1 layer of the unitary
    /// deformation complex.
    pub fn to_layer(&self, layer: &Layer) -> Result<SparseVec> {
        layer.join(&[(SummandKind::Bicomplex { m: 0, n: 1 }, self.psi1.clone()), (SummandKind::Pent { k: 2 }, self.omega1.clone())])
    }

    pub fn from_layer(layer: &Layer, v: &SparseVec) -> Result<Self> {
        let part = |kind| layer.restrict(v, kind).ok_or_else(|| Error::Dimension(format!("{kind} missing from degree {}", layer.degree)));
        Ok(EquivalenceWitness { psi1: part(SummandKind::Bicomplex { m: 0, n: 1 })?, omega1: part(SummandKind::Pent { k: 2 })? })
    }

    pub fn is_zero(&self) -> bool {
        self.psi1.is_zero() && self.omega1.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::defcomplex::{assemble_complex, AssembledComplex, ComplexSelection};
    use crate::exactlinalg::{Field, SparseMatrix};
    use crate::examples::{group_model, trivial_model, GroupModelSpec};

    fn setup(spec: &GroupModelSpec) -> (DefComplex, DeformationSpaces, AssembledComplex) {
        let dc = DefComplex::new(Arc::new(group_model(spec).unwrap()));
        let sp = DeformationSpaces::new(&dc).unwrap();
        let cx = assemble_complex(&dc, ComplexSelection::Unit, 1..=2).unwrap();
        (dc, sp, cx)
    }

    fn random_in(field: Field, basis: &SparseMatrix, rng: &mut ChaCha8Rng) -> SparseVec {
        let cols = basis.columns();
        let p = field.order().unwrap() as i64;
        cols.iter().fold(SparseVec::zero(basis.rows), |acc, c| acc.axpy(&field.from_i64(rng.gen_range(0..p)), c))
    }

    fn random_deformation(sp: &DeformationSpaces, rng: &mut ChaCha8Rng) -> FirstOrderDeformation {
        let field = sp.gray().field();
        let pent = SparseMatrix::identity(field, sp.pentagonator.free_dim());
        FirstOrderDeformation {
            tensorator1: random_in(field, sp.tensorator.basis(), rng),
            associator1: random_in(field, sp.associator.basis(), rng),
            pentagonator1: random_in(field, &pent, rng),
        }
    }

    fn random_witness(sp: &DeformationSpaces, rng: &mut ChaCha8Rng) -> EquivalenceWitness {
        let field = sp.gray().field();
        let omega = SparseMatrix::identity(field, sp.omega.free_dim());
        EquivalenceWitness { psi1: random_in(field, sp.psi.basis(), rng), omega1: random_in(field, &omega, rng) }
    }

    fn coboundary(cx: &AssembledComplex, w: &EquivalenceWitness) -> FirstOrderDeformation {
        let v = cx.delta_free(1).unwrap().mul_vec(&w.to_layer(cx.layer(1).unwrap()).unwrap()).unwrap();
        FirstOrderDeformation::from_layer(cx.layer(2).unwrap(), &v).unwrap()
    }

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn the_zero_deformation_is_structural() {
        let (_, sp, _) = setup(&GroupModelSpec::sign(f3(), 2));
        assert!(check_structural(&sp, &sp.zero_deformation()).unwrap().is_valid());
    }

    #[test]
    fn applying_a_witness_adds_its_coboundary() {
        let (_, sp, cx) = setup(&GroupModelSpec::sign(f3(), 2));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..4 {
            let w = random_witness(&sp, &mut rng);
            let db = coboundary(&cx, &w);
            assert_eq!(apply_witness(&sp, &sp.zero_deformation(), &w).unwrap(), db);
            assert!(check_structural(&sp, &db).unwrap().is_valid());
            assert!(check_equivalence(&sp, &sp.zero_deformation(), &db, &w).unwrap().is_valid());
            let d = random_deformation(&sp, &mut rng);
            assert_eq!(apply_witness(&sp, &d, &w).unwrap(), d.add(&db));
        }
    }

    #[test]
    fn structural_failures_match_the_nonzero_components_of_the_differential() {
        let (_, sp, cx) = setup(&GroupModelSpec::sign(f3(), 2));
        let (l2, l3) = (cx.layer(2).unwrap(), cx.layer(3).unwrap());
        let pairs = [
            ("A⊗̂2", SummandKind::Bicomplex { m: 2, n: 1 }),
            ("Aâ2", SummandKind::Bicomplex { m: 1, n: 2 }),
            ("Aπ1", SummandKind::Bicomplex { m: 0, n: 3 }),
            ("Aπ2", SummandKind::Pent { k: 4 }),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..6 {
            let d = random_deformation(&sp, &mut rng);
            let image = cx.delta_free(2).unwrap().mul_vec(&d.to_layer(l2).unwrap()).unwrap();
            let report = check_structural(&sp, &d).unwrap();
            let mut expected: Vec<&str> =
                pairs.iter().filter(|(_, kind)| !l3.restrict(&image, *kind).unwrap().is_zero()).map(|(name, _)| *name).collect();
            let mut failed: Vec<String> = report.failed_axioms();
            expected.sort();
            failed.sort();
            assert_eq!(failed, expected);
        }
    }

    #[test]
    fn coboundaries_are_found_equivalent_to_zero() {
        let (dc, sp, cx) = setup(&GroupModelSpec::sign(f3(), 2));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w = random_witness(&sp, &mut rng);
        let db = coboundary(&cx, &w);
        assert!(find_equivalence(&dc, &sp, &sp.zero_deformation(), &db).unwrap().is_some());
    }

    #[test]
    fn the_trivial_model_has_one_class_in_every_mode() {
        let dc = DefComplex::new(Arc::new(trivial_model(Field::prime(2).unwrap())));
        let sp = DeformationSpaces::new(&dc).unwrap();
        for mode in ClassifyMode::ALL {
            let r = brute_force_classes(&sp, mode, DEFAULT_ENUMERATION_BOUND, None).unwrap();
            assert_eq!(r.classes, 1, "{mode}");
        }
    }

    #[test]
    fn exhaustive_enumeration_refuses_the_rationals_and_oversized_spaces() {
        let (_, sp, _) = setup(&GroupModelSpec::sign(Field::Rational, 2));
        assert!(matches!(brute_force_classes(&sp, ClassifyMode::Unit, 1 << 20, None), Err(Error::Precondition(_))));
        let (_, sp, _) = setup(&GroupModelSpec::sign(f3(), 2));
        assert!(matches!(brute_force_classes(&sp, ClassifyMode::Unit, 16, None), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn modes_round_trip_through_their_keys() {
        for mode in ClassifyMode::ALL {
            assert_eq!(mode.key().parse::<ClassifyMode>().unwrap(), mode);
        }
    }

    #[test]
    fn structural_deformations_extend_to_valid_dual_structures() {
        let (_, sp, cx) = setup(&GroupModelSpec::sign(f3(), 2));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = coboundary(&cx, &random_witness(&sp, &mut rng));
        let ext = extend_and_deform(&sp, &d).unwrap();
        assert!(ext.reduces_to_base());
        let bad = random_deformation(&sp, &mut rng);
        if !is_structural(&sp, &bad).unwrap() {
            assert!(!validate_extended(&extend(&sp, &bad).unwrap()).unwrap().is_valid());
        }
    }
}
