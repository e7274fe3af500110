//! Skeletal Gray semigroups built from a finite group `G`, a finite abelian
//! group `H` and a bicharacter `c: H × H → K*`.
//!
//! Objects are the elements of `G`; every object carries the 1-cells `H`
//! (no 1-cells between distinct objects); every 1-cell has a
//! one-dimensional endomorphism space and no other 2-cells. The tensor is
//! the product in `G` and `H`, and the tensorator is the scalar
//! `⊗̂((h′₁,h′₂),(h₁,h₂)) = c(h′₂, h₁)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlinalg::{Field, Scalar};
use crate::gray::{scalar_tensor, GraySemigroup, GrayTables};
use crate::twocat::{TwoCategory, TwoCategoryBuilder, TwoMorphism};

/// Multiplication table of a finite group with identity at index 0.
pub type GroupTable = Vec<Vec<usize>>;

/// The cyclic group `ℤ/n` (`n ≥ 1`).
pub fn cyclic(n: usize) -> GroupTable {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

/// Input of [`group_model`].
#[derive(Clone, Debug)]
pub struct GroupModelSpec {
    pub field: Field,
    pub g: GroupTable,
    pub h: GroupTable,
    /// `c[h][k]`.
    pub c: Vec<Vec<Scalar>>,
}

impl GroupModelSpec {
    /// `G = ℤ/g_order`, `H = ℤ/h_order`, `c(h, k) = c(h, k)` from a closure.
    pub fn cyclic(field: Field, g_order: usize, h_order: usize, c: impl Fn(usize, usize) -> Scalar) -> Self {
        let cc = (0..h_order).map(|a| (0..h_order).map(|b| c(a, b)).collect()).collect();
        GroupModelSpec { field, g: cyclic(g_order), h: cyclic(h_order), c: cc }
    }

    /// `G = ℤ/g_order`, `H = ℤ/h_order`, `c ≡ 1`.
    pub fn untwisted(field: Field, g_order: usize, h_order: usize) -> Self {
        Self::cyclic(field, g_order, h_order, |_, _| field.one())
    }

    /// `G = ℤ/g_order`, `H = ℤ/2`, `c(h, k) = (−1)^{hk}`.
    pub fn sign(field: Field, g_order: usize) -> Self {
        Self::cyclic(field, g_order, 2, |a, b| if a * b == 1 { -field.one() } else { field.one() })
    }

    /// `G = H = {e}`: one object, one 1-cell.
    pub fn trivial(field: Field) -> Self {
        Self::untwisted(field, 1, 1)
    }

    /// Checks the group tables and the bicharacter identities; the error
    /// names the first violated identity.
    pub fn validate(&self) -> Result<()> {
        check_group(&self.g, "G", false)?;
        check_group(&self.h, "H", true)?;
        let n = self.h.len();
        if self.c.len() != n || self.c.iter().any(|r| r.len() != n) {
            return Err(Error::Structural("bicharacter table must be |H| × |H|".into()));
        }
        for a in 0..n {
            for b in 0..n {
                let x = &self.c[a][b];
                if x.field() != self.field {
                    return Err(Error::FieldMismatch(x.field().to_string(), self.field.to_string()));
                }
                if x.is_zero() {
                    return Err(Error::Precondition(format!("c({a},{b}) = 0 is not a unit")));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    if self.c[self.h[a][b]][k] != &self.c[a][k] * &self.c[b][k] {
                        return Err(Error::Precondition(format!("c({a}·{b},{k}) ≠ c({a},{k})·c({b},{k})")));
                    }
                    if self.c[k][self.h[a][b]] != &self.c[k][a] * &self.c[k][b] {
                        return Err(Error::Precondition(format!("c({k},{a}·{b}) ≠ c({k},{a})·c({k},{b})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Index of the 1-cell `h` on object `g`.
    pub fn cell(&self, g: usize, h: usize) -> usize {
        g * self.h.len() + h
    }
}

fn check_group(t: &GroupTable, name: &str, abelian: bool) -> Result<()> {
    let n = t.len();
    if n == 0 || t.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
        return Err(Error::Structural(format!("{name} is not an n × n table")));
    }
    for a in 0..n {
        if t[0][a] != a || t[a][0] != a {
            return Err(Error::Precondition(format!("{name}: index 0 is not a unit ({a})")));
        }
        if !(0..n).any(|b| t[a][b] == 0) {
            return Err(Error::Precondition(format!("{name}: {a} has no inverse")));
        }
        for b in 0..n {
            if abelian && t[a][b] != t[b][a] {
                return Err(Error::Precondition(format!("{name}: {a}·{b} ≠ {b}·{a}")));
            }
            for c in 0..n {
                if t[t[a][b]][c] != t[a][t[b][c]] {
                    return Err(Error::Precondition(format!("{name}: ({a}·{b})·{c} ≠ {a}·({b}·{c})")));
                }
            }
        }
    }
    Ok(())
}

fn base_category(spec: &GroupModelSpec) -> Result<TwoCategory> {
    let field = spec.field;
    let (ng, nh) = (spec.g.len(), spec.h.len());
    let one = scalar_tensor(field, &field.one());
    let mut b = TwoCategoryBuilder::new(field);
    for g in 0..ng {
        b.add_object(&format!("g{g}"));
    }
    for g in 0..ng {
        for h in 0..nh {
            b.add_cell(&format!("h{h}@g{g}"), g, g);
        }
        b.set_identity(g, spec.cell(g, 0));
    }
    for g in 0..ng {
        for h in 0..nh {
            let f = spec.cell(g, h);
            b.set_hom_dim(f, f, 1);
            b.set_unit2(f, vec![field.one()]);
            b.set_vcomp(f, f, f, one.clone());
            for h1 in 0..nh {
                let f1 = spec.cell(g, h1);
                b.set_compose(f1, f, spec.cell(g, spec.h[h1][h]));
                b.set_hcomp(f1, f1, f, f, one.clone());
            }
        }
    }
    b.build()
}

/// Builds the model without checking the bicharacter identities (the group
/// tables are still checked). Useful for constructing invalid inputs.
pub fn group_model_unchecked(spec: &GroupModelSpec) -> Result<GraySemigroup> {
    check_group(&spec.g, "G", false)?;
    check_group(&spec.h, "H", true)?;
    let field = spec.field;
    let base = Arc::new(base_category(spec)?);
    let (ng, nh) = (spec.g.len(), spec.h.len());
    let nc = ng * nh;
    let tensor_objects: Vec<usize> = (0..ng * ng).map(|i| spec.g[i / ng][i % ng]).collect();
    let mut tensor_cells = vec![0; nc * nc];
    let mut tensor2 = HashMap::new();
    let one = scalar_tensor(field, &field.one());
    for f in 0..nc {
        for g in 0..nc {
            let (gf, hf) = (f / nh, f % nh);
            let (gg, hg) = (g / nh, g % nh);
            tensor_cells[f * nc + g] = spec.cell(spec.g[gf][gg], spec.h[hf][hg]);
            tensor2.insert((f, f, g, g), one.clone());
        }
    }
    let mut tensorator = HashMap::new();
    for f in 0..nc {
        for g in 0..nc {
            let (gf, hf) = (f / nh, f % nh);
            let gg = g / nh;
            for hf1 in 0..nh {
                for hg1 in 0..nh {
                    let (f1, g1) = (spec.cell(gf, hf1), spec.cell(gg, hg1));
                    let src = tensor_cells[f1 * nc + g1];
                    let src = base.compose(src, tensor_cells[f * nc + g]).expect("endomorphisms compose");
                    let dst = tensor_cells[base.compose(f1, f).unwrap() * nc + base.compose(g1, g).unwrap()];
                    debug_assert_eq!(src, dst);
                    tensorator.insert((f1, g1, f, g), TwoMorphism { src, dst, coeffs: vec![spec.c[hg1][hf].clone()] });
                }
            }
        }
    }
    GraySemigroup::new(GrayTables { base, tensor_objects, tensor_cells, tensor2, tensorator })
}

/// The Gray semigroup of a validated spec.
pub fn group_model(spec: &GroupModelSpec) -> Result<GraySemigroup> {
    spec.validate()?;
    group_model_unchecked(spec)
}

/// The one-object, one-1-cell model over `field`.
pub fn trivial_model(field: Field) -> GraySemigroup {
    group_model(&GroupModelSpec::trivial(field)).expect("trivial model is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gray::validate_gray;

    #[test]
    fn sign_model_is_valid_over_f3() {
        let f3 = Field::prime(3).unwrap();
        let g = group_model(&GroupModelSpec::sign(f3, 2)).unwrap();
        assert_eq!(g.base().n_objects(), 2);
        assert_eq!(g.base().n_cells(), 4);
        let rep = validate_gray(&g).unwrap();
        assert!(rep.is_valid(), "{rep:?}");
    }

    #[test]
    fn non_multiplicative_table_is_rejected() {
        let q = Field::Rational;
        let spec = GroupModelSpec::cyclic(q, 1, 2, |a, b| if (a, b) == (1, 1) { q.from_i64(2) } else { q.one() });
        let err = spec.validate().unwrap_err();
        assert!(err.to_string().contains("c(1·1,1)"), "{err}");
    }

    #[test]
    fn trivial_model_has_one_cell() {
        let g = trivial_model(Field::Rational);
        assert_eq!((g.base().n_objects(), g.base().n_cells()), (1, 1));
    }
}
