//! Deformation complexes of a Gray semigroup: the extended double complex
//! `X^{m,n} = X^{m+1}(⊗(n+1))` with `δ_h`, `δ_v`, its special subcomplex,
//! the pentagonator complexes, the chain map `φ`, and the total complexes
//! built from them.

mod assemble;
mod pent;
mod vertical;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

pub use assemble::{assemble_complex, cohomology, AssembledComplex, ComplexSelection, Layer, Summand, SummandKind};
pub use pent::{delta_pent, is_modification, phi_map, PentSpace};
pub use vertical::{delta_v, delta_v_free};

use crate::error::{Error, Result};
use crate::exactlinalg::SparseMatrix;
use crate::gray::{GraySemigroup, IteratedTensor, TensorPowers};
use crate::pfcomplex::{cochain_space, delta_free, CochainSpace};

/// Default cap on total degrees of assembled complexes.
pub const DEFAULT_MAX_DEGREE: usize = 3;

type Key = (usize, usize, bool);

/// Memoized spaces and coboundary matrices (over free coordinates) of the
/// double complex and the pentagonator complex of one Gray semigroup.
pub struct DefComplex {
    powers: TensorPowers,
    max_degree: usize,
    spaces: Mutex<HashMap<Key, Arc<CochainSpace>>>,
    dh: Mutex<HashMap<Key, Arc<SparseMatrix>>>,
    dv: Mutex<HashMap<Key, Arc<SparseMatrix>>>,
    pent: Mutex<HashMap<usize, Arc<PentSpace>>>,
    dpent: Mutex<HashMap<usize, Arc<SparseMatrix>>>,
    phi: Mutex<HashMap<usize, Arc<SparseMatrix>>>,
}

fn memo<K: std::hash::Hash + Eq + Copy, V>(
    cache: &Mutex<HashMap<K, Arc<V>>>,
    key: K,
    build: impl FnOnce() -> Result<V>,
) -> Result<Arc<V>> {
    if let Some(v) = cache.lock().expect("memo lock").get(&key) {
        return Ok(v.clone());
    }
    let v = Arc::new(build()?);
    Ok(cache.lock().expect("memo lock").entry(key).or_insert(v).clone())
}

impl DefComplex {
    pub fn new(gray: Arc<GraySemigroup>) -> Self {
        Self::with_max_degree(gray, DEFAULT_MAX_DEGREE)
    }

    pub fn with_max_degree(gray: Arc<GraySemigroup>, max_degree: usize) -> Self {
        DefComplex {
            powers: TensorPowers::new(gray),
            max_degree,
            spaces: Mutex::default(),
            dh: Mutex::default(),
            dv: Mutex::default(),
            pent: Mutex::default(),
            dpent: Mutex::default(),
            phi: Mutex::default(),
        }
    }

    pub fn gray(&self) -> &Arc<GraySemigroup> {
        self.powers.gray()
    }

    pub fn powers(&self) -> &TensorPowers {
        &self.powers
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `⊗(k)`.
    pub fn tensor(&self, k: usize) -> Result<Arc<IteratedTensor>> {
        self.powers.get(k)
    }

    fn check_total(&self, total: usize) -> Result<()> {
        // Spaces one degree above the cap are needed for the last differential.
        if total > self.max_degree + 2 {
            return Err(Error::ResourceCap(format!("total degree {total} exceeds the cap {}", self.max_degree)));
        }
        Ok(())
    }

    /// `X^{m,n}` (or its special subspace `X_s^{m,n}`).
    pub fn bicomplex_space(&self, m: usize, n: usize, special: bool) -> Result<Arc<CochainSpace>> {
        self.check_total(m + n)?;
        memo(&self.spaces, (m, n, special), || cochain_space(&*self.tensor(n + 1)?, m + 1, special))
    }

    /// `δ_h: X^{m,n} → X^{m+1,n}` over free coordinates.
    pub fn delta_h(&self, m: usize, n: usize, special: bool) -> Result<Arc<SparseMatrix>> {
        memo(&self.dh, (m, n, special), || {
            let from = self.bicomplex_space(m, n, special)?;
            let to = self.bicomplex_space(m + 1, n, special)?;
            delta_free(&*self.tensor(n + 1)?, &from, &to)
        })
    }

    /// `δ_v: X^{m,n} → X^{m,n+1}` over free coordinates.
    pub fn delta_v(&self, m: usize, n: usize, special: bool) -> Result<Arc<SparseMatrix>> {
        memo(&self.dv, (m, n, special), || {
            let from = self.bicomplex_space(m, n, special)?;
            let to = self.bicomplex_space(m, n + 1, special)?;
            delta_v_free(&self.powers, n, &from, &to)
        })
    }

    /// `X̃ᵏ_pent` (families over `k+1` objects).
    pub fn pent_space(&self, k: usize) -> Result<Arc<PentSpace>> {
        if k > self.max_degree + 2 {
            return Err(Error::ResourceCap(format!("pentagonator degree {k} exceeds the cap {}", self.max_degree)));
        }
        memo(&self.pent, k, || Ok(PentSpace::new(self.gray(), k)))
    }

    /// `δ_pent: X̃ᵏ → X̃ᵏ⁺¹`.
    pub fn delta_pent(&self, k: usize) -> Result<Arc<SparseMatrix>> {
        memo(&self.dpent, k, || delta_pent(self.gray(), &*self.pent_space(k)?, &*self.pent_space(k + 1)?))
    }

    /// `φ: X̃ᵏ → X^{0,k}` into free coordinates (shared by `X^{0,k}` and `X_s^{0,k}`).
    pub fn phi(&self, k: usize) -> Result<Arc<SparseMatrix>> {
        memo(&self.phi, k, || {
            let to = self.bicomplex_space(0, k, false)?;
            phi_map(&*self.tensor(k + 1)?, &*self.pent_space(k)?, &to)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{group_model, trivial_model, GroupModelSpec};
    use crate::exactlinalg::Field;

    fn sign_model(field: Field) -> DefComplex {
        DefComplex::new(Arc::new(group_model(&GroupModelSpec::sign(field, 2)).unwrap()))
    }

    #[test]
    fn special_spaces_vanish_for_the_trivial_model() {
        let d = DefComplex::new(Arc::new(trivial_model(Field::prime(2).unwrap())));
        for (m, n) in [(0, 0), (0, 1), (1, 1), (0, 2)] {
            assert_eq!(d.bicomplex_space(m, n, true).unwrap().dim(), 0);
            assert_eq!(d.bicomplex_space(m, n, false).unwrap().dim(), 1);
        }
    }

    #[test]
    fn trivial_model_pent_multipliers_alternate() {
        let d = DefComplex::new(Arc::new(trivial_model(Field::Rational)));
        for k in 0..4 {
            let m = d.delta_pent(k).unwrap();
            let expected = if k % 2 == 0 { 1 } else { 0 };
            assert_eq!(m.get(0, 0), Field::Rational.from_i64(expected), "degree {k}");
        }
    }

    #[test]
    fn vertical_and_horizontal_square_to_zero_and_commute() {
        let d = sign_model(Field::prime(3).unwrap());
        for (m, n) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let b = d.bicomplex_space(m, n, false).unwrap();
            let vv = d.delta_v(m, n + 1, false).unwrap().mul(&d.delta_v(m, n, false).unwrap().mul(b.basis()).unwrap()).unwrap();
            assert!(vv.is_zero(), "δ_v² at ({m},{n})");
            let hh = d.delta_h(m + 1, n, false).unwrap().mul(&d.delta_h(m, n, false).unwrap().mul(b.basis()).unwrap()).unwrap();
            assert!(hh.is_zero(), "δ_h² at ({m},{n})");
            let hv = d.delta_h(m, n + 1, false).unwrap().mul(&d.delta_v(m, n, false).unwrap()).unwrap();
            let vh = d.delta_v(m + 1, n, false).unwrap().mul(&d.delta_h(m, n, false).unwrap()).unwrap();
            assert_eq!(hv.mul(b.basis()).unwrap(), vh.mul(b.basis()).unwrap(), "commutation at ({m},{n})");
        }
    }

    #[test]
    fn phi_is_a_chain_map() {
        let d = sign_model(Field::Rational);
        for k in 0..3 {
            let lhs = d.phi(k + 1).unwrap().mul(&d.delta_pent(k).unwrap()).unwrap();
            let rhs = d.delta_v(0, k, false).unwrap().mul(&d.phi(k).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "degree {k}");
            assert!(d.delta_h(0, k, false).unwrap().mul(&d.phi(k).unwrap()).unwrap().is_zero());
        }
    }
}
