//! 2-cells over the dual numbers `K[ε]/(ε²)`.
//!
//! An `R`-linear extension of a finite 2-category keeps the 1-cell tables
//! and replaces every `Hom₂(f, f′)` by `Hom₂(f, f′) ⊗ R`; elements are pairs
//! `a₀ + ε a₁` and every bilinear operation expands as
//! `(a₀ + εa₁)(b₀ + εb₁) = a₀b₀ + ε(a₀b₁ + a₁b₀)`.

use crate::error::{Error, Result};
use crate::exactlinalg::Scalar;
use crate::gray::GraySemigroup;
use crate::twocat::{TwoCategory, TwoMorphism};

/// `re + ε·eps`, both components in `Hom₂(src, dst)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dual {
    pub re: TwoMorphism,
    pub eps: TwoMorphism,
}

impl Dual {
    /// `a + ε·0`.
    pub fn lift(a: &TwoMorphism) -> Dual {
        let zero = TwoMorphism { src: a.src, dst: a.dst, coeffs: a.coeffs.iter().map(|x| x.field().zero()).collect() };
        Dual { re: a.clone(), eps: zero }
    }

    /// `a + ε·b`.
    pub fn new(a: TwoMorphism, b: TwoMorphism) -> Result<Dual> {
        if a.src != b.src || a.dst != b.dst || a.coeffs.len() != b.coeffs.len() {
            return Err(Error::Dimension("dual components have different shapes".into()));
        }
        Ok(Dual { re: a, eps: b })
    }

    pub fn src(&self) -> usize {
        self.re.src
    }

    pub fn dst(&self) -> usize {
        self.re.dst
    }

    /// The reduction mod ε.
    pub fn reduce(&self) -> &TwoMorphism {
        &self.re
    }

    pub fn id(c: &TwoCategory, f: usize) -> Dual {
        Dual::lift(&c.id2(f))
    }

    pub fn vcomp(c: &TwoCategory, b: &Dual, a: &Dual) -> Result<Dual> {
        let re = c.vcomp(&b.re, &a.re)?;
        let eps = c.add2(&c.vcomp(&b.re, &a.eps)?, &c.vcomp(&b.eps, &a.re)?)?;
        Ok(Dual { re, eps })
    }

    /// Vertical composite of a list, the first element applied last.
    pub fn vcomp_all(c: &TwoCategory, parts: &[Dual]) -> Result<Dual> {
        let (last, rest) = parts.split_last().ok_or_else(|| Error::Precondition("empty composite".into()))?;
        rest.iter().rev().try_fold(last.clone(), |acc, x| Dual::vcomp(c, x, &acc))
    }

    pub fn hcomp(c: &TwoCategory, eta: &Dual, tau: &Dual) -> Result<Dual> {
        let re = c.hcomp(&eta.re, &tau.re)?;
        let eps = c.add2(&c.hcomp(&eta.re, &tau.eps)?, &c.hcomp(&eta.eps, &tau.re)?)?;
        Ok(Dual { re, eps })
    }

    pub fn tensor(g: &GraySemigroup, a: &Dual, b: &Dual) -> Result<Dual> {
        let c = g.base();
        let re = g.tensor2(&a.re, &b.re)?;
        let eps = c.add2(&g.tensor2(&a.re, &b.eps)?, &g.tensor2(&a.eps, &b.re)?)?;
        Ok(Dual { re, eps })
    }

    pub fn add(c: &TwoCategory, a: &Dual, b: &Dual) -> Result<Dual> {
        Ok(Dual { re: c.add2(&a.re, &b.re)?, eps: c.add2(&a.eps, &b.eps)? })
    }

    pub fn scale(c: &TwoCategory, a: &Dual, x: &Scalar) -> Dual {
        Dual { re: c.scale2(&a.re, x), eps: c.scale2(&a.eps, x) }
    }

    /// `(a₀ + εa₁)⁻¹ = a₀⁻¹ − ε a₀⁻¹ a₁ a₀⁻¹`.
    pub fn inverse(c: &TwoCategory, a: &Dual) -> Result<Dual> {
        let inv = c.inverse2(&a.re)?;
        let eps = c.vcomp(&inv, &c.vcomp(&a.eps, &inv)?)?;
        let minus_one = -c.field().one();
        Ok(Dual { re: inv, eps: c.scale2(&eps, &minus_one) })
    }

    pub fn whisker_left(c: &TwoCategory, g: usize, tau: &Dual) -> Result<Dual> {
        Dual::hcomp(c, &Dual::id(c, g), tau)
    }

    pub fn whisker_right(c: &TwoCategory, eta: &Dual, f: usize) -> Result<Dual> {
        Dual::hcomp(c, eta, &Dual::id(c, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::Field;

    #[test]
    fn inverse_is_two_sided() {
        let f5 = Field::prime(5).unwrap();
        let c = TwoCategory::terminal(f5);
        let a = Dual::new(c.scalar2(0, &f5.from_i64(2)), c.scalar2(0, &f5.from_i64(3))).unwrap();
        let inv = Dual::inverse(&c, &a).unwrap();
        assert_eq!(Dual::vcomp(&c, &a, &inv).unwrap(), Dual::id(&c, 0));
        assert_eq!(Dual::vcomp(&c, &inv, &a).unwrap(), Dual::id(&c, 0));
    }
}
