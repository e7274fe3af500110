//! The deformation complex `X•(F)` of a K-linear unitary pseudofunctor,
//! its cohomology, and the classification of purely pseudofunctorial
//! first-order deformations.

mod classify;
mod cohomology;
mod delta;
mod space;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

pub use classify::{
    check_deformed_equivalence, check_deformed_pseudofunctor, check_unitary_lemma, cocycle_to_deformation, deformation_of,
    enumerate_deformations, equivalence_witness, PfDeformation, PfEnumeration,
};
pub use cohomology::{cohomology_at, Cohomology};
pub use delta::{delta_free, delta_pf, padded_term};
pub use space::{cochain_space, naturality_rows, CochainSpace};

use crate::error::{Error, Result};
use crate::exactlinalg::SparseMatrix;
use crate::twocat::Pseudofunctor;

/// Default cap on the degrees a [`PfComplex`] will build.
pub const DEFAULT_MAX_DEGREE: usize = 4;

/// `Xⁿ(F)` for `n ≥ 1` (natural families); the zero space for `n = 0`.
pub fn pf_cochain_basis(f: &dyn Pseudofunctor, n: usize) -> Result<CochainSpace> {
    cochain_space(f, n, false)
}

/// Lazily built spaces and coboundaries of `X•(F)`.
pub struct PfComplex<'a> {
    f: &'a dyn Pseudofunctor,
    max_degree: usize,
    spaces: Mutex<HashMap<usize, Arc<CochainSpace>>>,
    deltas: Mutex<HashMap<usize, Arc<SparseMatrix>>>,
}

impl<'a> PfComplex<'a> {
    /// Requires `F` unitary.
    pub fn new(f: &'a dyn Pseudofunctor) -> Result<Self> {
        Self::with_max_degree(f, DEFAULT_MAX_DEGREE)
    }

    pub fn with_max_degree(f: &'a dyn Pseudofunctor, max_degree: usize) -> Result<Self> {
        if !f.is_unitary() {
            return Err(Error::Precondition("the complex is defined for unitary pseudofunctors".into()));
        }
        Ok(PfComplex { f, max_degree, spaces: Mutex::new(HashMap::new()), deltas: Mutex::new(HashMap::new()) })
    }

    pub fn functor(&self) -> &'a dyn Pseudofunctor {
        self.f
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `Xⁿ(F)`; degrees above the cap plus one are refused.
    pub fn space(&self, n: usize) -> Result<Arc<CochainSpace>> {
        if n > self.max_degree + 1 {
            return Err(Error::ResourceCap(format!("degree {n} exceeds the cap {}", self.max_degree)));
        }
        if let Some(s) = self.spaces.lock().expect("lock").get(&n) {
            return Ok(s.clone());
        }
        let s = Arc::new(pf_cochain_basis(self.f, n)?);
        Ok(self.spaces.lock().expect("lock").entry(n).or_insert(s).clone())
    }

    /// `δ: Xⁿ → Xⁿ⁺¹` over free coordinates.
    pub fn delta_free(&self, n: usize) -> Result<Arc<SparseMatrix>> {
        if let Some(m) = self.deltas.lock().expect("lock").get(&n) {
            return Ok(m.clone());
        }
        let (from, to) = (self.space(n)?, self.space(n + 1)?);
        let m = Arc::new(delta_free(self.f, &from, &to)?);
        Ok(self.deltas.lock().expect("lock").entry(n).or_insert(m).clone())
    }

    /// `δ` restricted to `Xⁿ`: free coordinates of degree `n + 1` × basis of degree `n`.
    pub fn coboundary(&self, n: usize) -> Result<SparseMatrix> {
        self.delta_free(n)?.mul(self.space(n)?.basis())
    }

    /// `Hⁿ(F)` with representatives.
    pub fn cohomology(&self, n: usize, with_representatives: bool) -> Result<Cohomology> {
        if n > self.max_degree {
            return Err(Error::ResourceCap(format!("degree {n} exceeds the cap {}", self.max_degree)));
        }
        let incoming = if n == 0 { None } else { Some(self.coboundary(n - 1)?) };
        cohomology_at(n, self.space(n)?.basis(), incoming.as_ref(), &self.coboundary(n)?, with_representatives)
    }
}

/// `Hⁿ(F)`.
pub fn pf_cohomology(f: &dyn Pseudofunctor, n: usize) -> Result<Cohomology> {
    PfComplex::new(f)?.cohomology(n, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{group_model, GroupModelSpec};
    use crate::exactlinalg::{Field, SparseVec};
    use crate::gray::tensor_power;

    fn sign_square(field: Field) -> crate::gray::IteratedTensor {
        let g = Arc::new(group_model(&GroupModelSpec::sign(field, 2)).unwrap());
        tensor_power(&g, 2).unwrap()
    }

    #[test]
    fn delta_squares_to_zero_on_bases() {
        let t = sign_square(Field::prime(5).unwrap());
        let cx = PfComplex::new(&t).unwrap();
        for n in 1..=2 {
            let prod = cx.delta_free(n + 1).unwrap().mul(&cx.coboundary(n).unwrap()).unwrap();
            assert!(prod.is_zero(), "δ² ≠ 0 from degree {n}");
        }
    }

    #[test]
    fn degree_zero_is_the_zero_space() {
        let t = sign_square(Field::Rational);
        let cx = PfComplex::new(&t).unwrap();
        assert_eq!(cx.space(0).unwrap().dim(), 0);
        assert_eq!(cx.cohomology(0, false).unwrap().betti, 0);
    }

    #[test]
    fn coboundaries_are_equivalent_to_zero() {
        let t = sign_square(Field::prime(3).unwrap());
        let cx = PfComplex::new(&t).unwrap();
        let x1 = cx.space(1).unwrap();
        let xi = x1.embed(&SparseVec::unit(x1.dim(), 1, x1.field())).unwrap();
        let c = cx.delta_free(1).unwrap().mul_vec(&xi).unwrap();
        let zero = SparseVec::zero(c.len);
        let w = equivalence_witness(&cx, &zero, &c).unwrap().expect("coboundary");
        assert!(check_deformed_equivalence(&cx, &zero, &c, &w).unwrap().is_valid());
        assert!(check_deformed_pseudofunctor(&cx, &c).unwrap().is_valid());
    }

    #[test]
    fn degree_cap_is_enforced() {
        let t = sign_square(Field::Rational);
        let cx = PfComplex::with_max_degree(&t, 2).unwrap();
        assert!(matches!(cx.cohomology(3, false), Err(Error::ResourceCap(_))));
    }
}
