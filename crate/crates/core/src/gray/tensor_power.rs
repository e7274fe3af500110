//! Iterated tensor products `⊗(n): Cⁿ → C` of a Gray semigroup.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use crate::error::{Error, Result};
use crate::exactlinalg::Scalar;
use crate::twocat::{digits_mixed, Pseudofunctor, TwoCategory, TwoMorphism};

use super::semigroup::GraySemigroup;

/// Arities up to this bound are built with both nested recursions and the
/// two tables are compared entry by entry.
pub const NESTING_CHECK_BOUND: usize = 4;

/// The unitary pseudofunctor `⊗(n)` on the lazy power `Cⁿ`, with its
/// structure table `F̂ = ⊗̂⁽ⁿ⁾` precomputed on all composable pairs.
#[derive(Debug)]
pub struct IteratedTensor {
    gray: Arc<GraySemigroup>,
    arity: usize,
    source: Arc<TwoCategory>,
    fhat: HashMap<(usize, usize), TwoMorphism>,
    two_cache: RwLock<HashMap<(usize, usize), Arc<Vec<Vec<Scalar>>>>>,
}

impl IteratedTensor {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn gray(&self) -> &Arc<GraySemigroup> {
        &self.gray
    }

    pub fn source_arc(&self) -> &Arc<TwoCategory> {
        &self.source
    }

    /// The whole `⊗̂⁽ⁿ⁾` table keyed by `(g, f)` (cells of `Cⁿ`).
    pub fn fhat_table(&self) -> &HashMap<(usize, usize), TwoMorphism> {
        &self.fhat
    }

    /// Images of the basis of `Hom₂(f, f′)` in `Cⁿ` (one column per basis element).
    fn two_matrix(&self, f: usize, f1: usize) -> Arc<Vec<Vec<Scalar>>> {
        if let Some(m) = self.two_cache.read().expect("cache lock").get(&(f, f1)) {
            return m.clone();
        }
        let g = &*self.gray;
        let c = &*g.base().clone();
        let (pf, pf1) = (self.source.decode_cells(f), self.source.decode_cells(f1));
        let radices: Vec<usize> = pf.iter().zip(&pf1).map(|(a, b)| c.dim2(*a, *b)).collect();
        let total: usize = radices.iter().product();
        let cols: Vec<Vec<Scalar>> = (0..total)
            .map(|i| {
                let idx = digits_mixed(i, &radices);
                let parts: Vec<TwoMorphism> = idx.iter().enumerate().map(|(k, &j)| c.basis2(pf[k], pf1[k], j)).collect();
                g.tensor2_all(&parts).expect("tensor of basis 2-cells").coeffs
            })
            .collect();
        let m = Arc::new(cols);
        self.two_cache.write().expect("cache lock").insert((f, f1), m.clone());
        m
    }
}

impl Pseudofunctor for IteratedTensor {
    fn source(&self) -> &TwoCategory {
        &self.source
    }

    fn target(&self) -> &TwoCategory {
        self.gray.base()
    }

    fn map_object(&self, x: usize) -> usize {
        self.gray.tensor_objects_all(&self.source.decode_objects(x))
    }

    fn map_cell(&self, f: usize) -> usize {
        self.gray.tensor_cells_all(&self.source.decode_cells(f))
    }

    fn map_two(&self, f: usize, f1: usize, x: &[Scalar]) -> Vec<Scalar> {
        let field = self.gray.field();
        let c = self.gray.base();
        let mut out = vec![field.zero(); c.dim2(self.map_cell(f), self.map_cell(f1))];
        if x.iter().all(|v| v.is_zero()) {
            return out;
        }
        let m = self.two_matrix(f, f1);
        for (xi, col) in x.iter().zip(m.iter()) {
            if xi.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(col) {
                if !v.is_zero() {
                    *o += &(xi * v);
                }
            }
        }
        out
    }

    fn fhat(&self, g: usize, f: usize) -> TwoMorphism {
        self.fhat[&(g, f)].clone()
    }

    fn f0(&self, x: usize) -> TwoMorphism {
        let c = self.gray.base();
        c.id2(c.identity(self.map_object(x)))
    }
}

/// `⊗̂⁽ⁿ⁾(g, f)` by the right-nested recursion `⊗(n) = ⊗∘(1×⊗(n−1))`:
/// `(1_{g₁f₁} ⊗ ⊗̂⁽ⁿ⁻¹⁾(g_rest, f_rest))·⊗̂((g₁, ⊗g_rest), (f₁, ⊗f_rest))`.
pub fn right_nested(g: &GraySemigroup, gs: &[usize], fs: &[usize]) -> Result<TwoMorphism> {
    let c = &**g.base();
    let n = gs.len();
    if n == 1 {
        return Ok(c.id2(compose_or_err(c, gs[0], fs[0])?));
    }
    if n == 2 {
        return Ok(g.tensorator(gs[0], gs[1], fs[0], fs[1]));
    }
    let head = g.tensorator(gs[0], g.tensor_cells_all(&gs[1..]), fs[0], g.tensor_cells_all(&fs[1..]));
    let inner = right_nested(g, &gs[1..], &fs[1..])?;
    let left = g.tensor2(&c.id2(compose_or_err(c, gs[0], fs[0])?), &inner)?;
    c.vcomp(&left, &head)
}

/// `⊗̂⁽ⁿ⁾(g, f)` by the left-nested recursion `⊗(n) = ⊗(n−1)∘(⊗×1ⁿ⁻²)`:
/// `(⊗̂((g₁,g₂),(f₁,f₂)) ⊗ 1)·⊗̂⁽ⁿ⁻¹⁾((g₁⊗g₂, g₃, …), (f₁⊗f₂, f₃, …))`.
pub fn left_nested(g: &GraySemigroup, gs: &[usize], fs: &[usize]) -> Result<TwoMorphism> {
    let c = &**g.base();
    let n = gs.len();
    if n <= 2 {
        return right_nested(g, gs, fs);
    }
    let mut g2 = vec![g.tensor_cells(gs[0], gs[1])];
    g2.extend_from_slice(&gs[2..]);
    let mut f2 = vec![g.tensor_cells(fs[0], fs[1])];
    f2.extend_from_slice(&fs[2..]);
    let inner = left_nested(g, &g2, &f2)?;
    let rest: Vec<usize> = (2..n).map(|i| compose_or_err(c, gs[i], fs[i])).collect::<Result<_>>()?;
    let outer = g.tensor2(&g.tensorator(gs[0], gs[1], fs[0], fs[1]), &c.id2(g.tensor_cells_all(&rest)))?;
    c.vcomp(&outer, &inner)
}

fn compose_or_err(c: &TwoCategory, g: usize, f: usize) -> Result<usize> {
    c.compose(g, f).ok_or_else(|| Error::NotComposable(format!("{} after {}", c.cell_name(g), c.cell_name(f))))
}

/// Builds `⊗(n)` with the right-nested recursion; for `n ≤`
/// [`NESTING_CHECK_BOUND`] the left-nested table is computed too and any
/// disagreement is reported as an invariant failure.
pub fn tensor_power(g: &Arc<GraySemigroup>, n: usize) -> Result<IteratedTensor> {
    tensor_power_checked(g, n, n <= NESTING_CHECK_BOUND)
}

/// As [`tensor_power`], with explicit control over the nesting comparison.
pub fn tensor_power_checked(g: &Arc<GraySemigroup>, n: usize, compare_nestings: bool) -> Result<IteratedTensor> {
    if n == 0 {
        return Err(Error::Precondition("tensor power arity must be at least 1".into()));
    }
    let source = Arc::new(TwoCategory::power(g.base(), n)?);
    let mut fhat = HashMap::new();
    for t in source.composable_tuples(2) {
        let (gg, ff) = (t[0], t[1]);
        let (gs, fs) = (source.decode_cells(gg), source.decode_cells(ff));
        let r = right_nested(g, &gs, &fs)?;
        if compare_nestings && n >= 3 {
            let l = left_nested(g, &gs, &fs)?;
            if l != r {
                return Err(Error::Invariant(format!(
                    "left- and right-nested ⊗̂({n}) differ on ({}, {})",
                    source.cell_name(gg),
                    source.cell_name(ff)
                )));
            }
        }
        fhat.insert((gg, ff), r);
    }
    Ok(IteratedTensor { gray: g.clone(), arity: n, source, fhat, two_cache: RwLock::new(HashMap::new()) })
}

/// Compares the left- and right-nested `⊗̂⁽ⁿ⁾` on every composable pair and
/// returns the number of entries compared.
pub fn compare_nestings(g: &GraySemigroup, n: usize) -> Result<usize> {
    let base = g.base().clone();
    let source = TwoCategory::power(&base, n)?;
    let mut count = 0;
    for t in source.composable_tuples(2) {
        let (gs, fs) = (source.decode_cells(t[0]), source.decode_cells(t[1]));
        if right_nested(g, &gs, &fs)? != left_nested(g, &gs, &fs)? {
            return Err(Error::Invariant(format!(
                "left- and right-nested ⊗̂({n}) differ on ({}, {})",
                source.cell_name(t[0]),
                source.cell_name(t[1])
            )));
        }
        count += 1;
    }
    Ok(count)
}

/// Synchronized memo of `⊗(n)` per arity for one Gray semigroup.
#[derive(Debug)]
pub struct TensorPowers {
    gray: Arc<GraySemigroup>,
    cache: Mutex<HashMap<usize, Arc<IteratedTensor>>>,
}

impl TensorPowers {
    pub fn new(gray: Arc<GraySemigroup>) -> Self {
        TensorPowers { gray, cache: Mutex::new(HashMap::new()) }
    }

    pub fn gray(&self) -> &Arc<GraySemigroup> {
        &self.gray
    }

    pub fn get(&self, n: usize) -> Result<Arc<IteratedTensor>> {
        if let Some(t) = self.cache.lock().expect("memo lock").get(&n) {
            return Ok(t.clone());
        }
        let t = Arc::new(tensor_power(&self.gray, n)?);
        Ok(self.cache.lock().expect("memo lock").entry(n).or_insert(t).clone())
    }
}
