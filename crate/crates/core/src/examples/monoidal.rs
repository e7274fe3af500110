//! Strict monoidal categories given by tables, and their delooping to
//! one-object 2-categories.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactlinalg::{Field, Scalar};
use crate::twocat::{validate_two_category, Tensor3, TwoCategory, TwoCategoryBuilder};

/// A finite K-linear strict monoidal category.
#[derive(Clone, Debug)]
pub struct MonoidalCategoryData {
    pub field: Field,
    pub object_names: Vec<String>,
    pub unit: usize,
    /// `tensor[a][b] = a ⊗ b`.
    pub tensor: Vec<Vec<usize>>,
    /// `dim Hom(a, b)`; absent pairs are zero.
    pub hom_dims: HashMap<(usize, usize), usize>,
    /// Coefficients of `1_a` in `End(a)`.
    pub identities: Vec<Vec<Scalar>>,
    /// `(a, b, c)` ↦ constants of `Hom(b,c) × Hom(a,b) → Hom(a,c)`.
    pub compose: HashMap<(usize, usize, usize), Tensor3>,
    /// `(a, a′, b, b′)` ↦ constants of `Hom(a,a′) × Hom(b,b′) → Hom(a⊗b, a′⊗b′)`.
    pub tensor_mor: HashMap<(usize, usize, usize, usize), Tensor3>,
}

impl MonoidalCategoryData {
    pub fn n_objects(&self) -> usize {
        self.object_names.len()
    }

    pub fn dim(&self, a: usize, b: usize) -> usize {
        self.hom_dims.get(&(a, b)).copied().unwrap_or(0)
    }

    /// Strictness of the tensor on objects: associativity and unit.
    pub fn check_strict(&self) -> Result<()> {
        let n = self.n_objects();
        if self.unit >= n || self.tensor.len() != n || self.tensor.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Structural("tensor table must be total on objects".into()));
        }
        let name = |a: usize| &self.object_names[a];
        for a in 0..n {
            if self.tensor[self.unit][a] != a || self.tensor[a][self.unit] != a {
                return Err(Error::Precondition(format!("unit is not strict on {}", name(a))));
            }
            for b in 0..n {
                for c in 0..n {
                    if self.tensor[self.tensor[a][b]][c] != self.tensor[a][self.tensor[b][c]] {
                        return Err(Error::Precondition(format!(
                            "tensor not strictly associative on ({}, {}, {})",
                            name(a),
                            name(b),
                            name(c)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Objects `0 < 1 < … < k` of a chain, a morphism `a → b` iff `a ≤ b`,
    /// tensor = minimum, unit = top element.
    pub fn meet_chain(field: Field, k: usize) -> Self {
        let n = k + 1;
        let one = scalar(field, field.one());
        let mut hom_dims = HashMap::new();
        let mut compose = HashMap::new();
        let mut tensor_mor = HashMap::new();
        for a in 0..n {
            for b in a..n {
                hom_dims.insert((a, b), 1);
                for c in b..n {
                    compose.insert((a, b, c), one.clone());
                }
            }
        }
        for a in 0..n {
            for a1 in a..n {
                for b in 0..n {
                    for b1 in b..n {
                        tensor_mor.insert((a, a1, b, b1), one.clone());
                    }
                }
            }
        }
        MonoidalCategoryData {
            field,
            object_names: (0..n).map(|i| i.to_string()).collect(),
            unit: k,
            tensor: (0..n).map(|a| (0..n).map(|b| a.min(b)).collect()).collect(),
            hom_dims,
            identities: vec![vec![field.one()]; n],
            compose,
            tensor_mor,
        }
    }

    /// `ℤ/2`-graded dual numbers: objects `0, 1` with `a ⊗ b = a + b`,
    /// `End(a) = K[t]/(t²)` (basis `1, t`), no morphisms `0 ↔ 1`, and
    /// `t ⊗ 1 = 1 ⊗ t = t`, `t ⊗ t = 0`.
    pub fn graded_dual_numbers(field: Field) -> Self {
        let mut mult = Tensor3::zeros(field, 2, 2, 2);
        mult.set(0, 0, 0, field.one());
        mult.set(0, 1, 1, field.one());
        mult.set(1, 0, 1, field.one());
        let mut hom_dims = HashMap::new();
        let mut compose = HashMap::new();
        let mut tensor_mor = HashMap::new();
        for a in 0..2 {
            hom_dims.insert((a, a), 2);
            compose.insert((a, a, a), mult.clone());
            for b in 0..2 {
                tensor_mor.insert((a, a, b, b), mult.clone());
            }
        }
        MonoidalCategoryData {
            field,
            object_names: vec!["0".into(), "1".into()],
            unit: 0,
            tensor: vec![vec![0, 1], vec![1, 0]],
            hom_dims,
            identities: vec![vec![field.one(), field.zero()]; 2],
            compose,
            tensor_mor,
        }
    }

    /// One object, `End = K`.
    pub fn trivial(field: Field) -> Self {
        let one = scalar(field, field.one());
        MonoidalCategoryData {
            field,
            object_names: vec!["I".into()],
            unit: 0,
            tensor: vec![vec![0]],
            hom_dims: HashMap::from([((0, 0), 1)]),
            identities: vec![vec![field.one()]],
            compose: HashMap::from([((0, 0, 0), one.clone())]),
            tensor_mor: HashMap::from([((0, 0, 0, 0), one)]),
        }
    }
}

fn scalar(field: Field, x: Scalar) -> Tensor3 {
    let mut t = Tensor3::zeros(field, 1, 1, 1);
    t.set(0, 0, 0, x);
    t
}

/// The one-object 2-category whose 1-cells are the objects of `m`, with
/// `g∘f = g ⊗ f`, vertical composition the composition of `m` and
/// horizontal composition its tensor product. The result is validated.
pub fn deloop(m: &MonoidalCategoryData) -> Result<TwoCategory> {
    m.check_strict()?;
    let n = m.n_objects();
    let mut b = TwoCategoryBuilder::new(m.field);
    let x = b.add_object("*");
    for name in &m.object_names {
        b.add_cell(name, x, x);
    }
    b.set_identity(x, m.unit);
    for g in 0..n {
        for f in 0..n {
            b.set_compose(g, f, m.tensor[g][f]);
        }
    }
    for (&(a, a1), &d) in &m.hom_dims {
        b.set_hom_dim(a, a1, d);
    }
    for (a, u) in m.identities.iter().enumerate() {
        b.set_unit2(a, u.clone());
    }
    for (&(a, a1, a2), t) in &m.compose {
        b.set_vcomp(a, a1, a2, t.clone());
    }
    for (&(g, g1, f, f1), t) in &m.tensor_mor {
        b.set_hcomp(g, g1, f, f1, t.clone());
    }
    let c = b.build()?;
    let rep = validate_two_category(&c);
    if !rep.is_valid() {
        return Err(Error::Precondition(format!("not a strict monoidal category: {:?}", rep.failed_axioms())));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_deloops_to_terminal_shape() {
        let c = deloop(&MonoidalCategoryData::trivial(Field::Rational)).unwrap();
        assert_eq!((c.n_objects(), c.n_cells(), c.dim2(0, 0)), (1, 1, 1));
    }

    #[test]
    fn generators_are_strict_and_deloop() {
        for m in [MonoidalCategoryData::meet_chain(Field::Rational, 2), MonoidalCategoryData::graded_dual_numbers(Field::Rational)] {
            let c = deloop(&m).unwrap();
            assert_eq!(c.n_cells(), m.n_objects());
            for a in 0..m.n_objects() {
                for b in 0..m.n_objects() {
                    assert_eq!(c.dim2(a, b), m.dim(a, b));
                }
            }
        }
    }

    #[test]
    fn non_associative_tensor_is_rejected() {
        let mut m = MonoidalCategoryData::meet_chain(Field::Rational, 2);
        m.tensor[0][1] = 1;
        m.tensor[1][0] = 1;
        assert!(deloop(&m).is_err());
    }
}
