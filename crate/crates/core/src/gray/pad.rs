//! Padding of 2-cell chains by canonical 2-isomorphisms of a unitary
//! pseudofunctor.
//!
//! Endpoints are formal expressions over a fixed composable tuple
//! `(f₀,…,f_{n−1})` of 1-cells of the source: an interval partition of the
//! tuple into blocks, evaluated as `F(block₀)∘F(block₁)∘…` in the target. The
//! finest partition (all singletons) is the reference source
//! `F f₀∘…∘F f_{n−1}`, the single block the reference target
//! `F(f₀∘…∘f_{n−1})`. Canonical 2-isomorphisms between expressions are
//! composites of whiskered `F̂` instances and their inverses; which instances
//! are used and in which order is a *recipe*, selected by a chooser callback.

use crate::error::{Error, Result};
use crate::twocat::{Pseudofunctor, TwoMorphism};

/// Block sizes of an interval partition of `0..n` (every block nonempty).
pub type Partition = Vec<usize>;

/// Decision callback for recipe choices: receives the number of admissible
/// options and returns the chosen index (taken modulo the count).
pub type Chooser<'a> = &'a mut dyn FnMut(usize) -> usize;

/// A 2-cell together with the formal expressions of its endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaddedCell {
    pub tuple: Vec<usize>,
    pub src: Partition,
    pub dst: Partition,
    pub cell: TwoMorphism,
}

/// The partition of `n` into singletons.
pub fn finest(n: usize) -> Partition {
    vec![1; n]
}

/// The partition of `n` into one block.
pub fn coarsest(n: usize) -> Partition {
    vec![n]
}

fn cuts(p: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(p.len().saturating_sub(1));
    let mut acc = 0;
    for &b in &p[..p.len().saturating_sub(1)] {
        acc += b;
        out.push(acc);
    }
    out
}

fn from_cuts(n: usize, cuts: &[usize]) -> Partition {
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut prev = 0;
    for &c in cuts.iter().chain(std::iter::once(&n)) {
        out.push(c - prev);
        prev = c;
    }
    out
}

/// `p` refines `q` (every cut of `q` is a cut of `p`).
pub fn refines(p: &[usize], q: &[usize]) -> bool {
    let cp = cuts(p);
    cuts(q).iter().all(|c| cp.contains(c))
}

fn check_partition(n: usize, p: &[usize]) -> Result<()> {
    if p.is_empty() || p.contains(&0) || p.iter().sum::<usize>() != n {
        return Err(Error::Padding(format!("{p:?} is not an interval partition of a {n}-tuple")));
    }
    Ok(())
}

/// Source composites of the blocks of `p`.
fn block_cells(f: &dyn Pseudofunctor, tuple: &[usize], p: &[usize]) -> Result<Vec<usize>> {
    let c = f.source();
    let mut out = Vec::with_capacity(p.len());
    let mut start = 0;
    for &b in p {
        let cell = c
            .compose_all(&tuple[start..start + b])
            .ok_or_else(|| Error::Padding(format!("block {start}..{} is not composable", start + b)))?;
        out.push(cell);
        start += b;
    }
    Ok(out)
}

/// The target 1-cell `F(block₀)∘F(block₁)∘…` of an expression.
pub fn eval_partition(f: &dyn Pseudofunctor, tuple: &[usize], p: &[usize]) -> Result<usize> {
    check_partition(tuple.len(), p)?;
    let images: Vec<usize> = block_cells(f, tuple, p)?.into_iter().map(|x| f.map_cell(x)).collect();
    f.target().compose_all(&images).ok_or_else(|| Error::Padding("block images are not composable".into()))
}

/// Canonical 2-isomorphism from a finer expression to a coarser one,
/// merging adjacent blocks one at a time by whiskered `F̂` instances.
fn coarsen(f: &dyn Pseudofunctor, tuple: &[usize], from: &[usize], to: &[usize], choose: Chooser) -> Result<TwoMorphism> {
    let d = f.target();
    let target_cuts = cuts(to);
    let mut cur: Partition = from.to_vec();
    let mut acc = d.id2(eval_partition(f, tuple, &cur)?);
    while cur.len() > to.len() {
        let cur_cuts = cuts(&cur);
        let candidates: Vec<usize> = (0..cur_cuts.len()).filter(|&k| !target_cuts.contains(&cur_cuts[k])).collect();
        let k = candidates[choose(candidates.len()) % candidates.len()];
        let blocks = block_cells(f, tuple, &cur)?;
        let images: Vec<usize> = blocks.iter().map(|&x| f.map_cell(x)).collect();
        let mut step = f.fhat(blocks[k], blocks[k + 1]);
        if k + 2 < images.len() {
            let right = d.compose_all(&images[k + 2..]).expect("composable images");
            step = d.whisker_right(&step, right)?;
        }
        if k > 0 {
            let left = d.compose_all(&images[..k]).expect("composable images");
            step = d.whisker_left(left, &step)?;
        }
        acc = d.vcomp(&step, &acc)?;
        cur[k] += cur[k + 1];
        cur.remove(k + 1);
    }
    Ok(acc)
}

/// The canonical 2-isomorphism `eval(from) ⇒ eval(to)` produced by the
/// recipe the chooser selects. Incomparable expressions are connected either
/// through their common coarsening or through their common refinement.
pub fn canonical(f: &dyn Pseudofunctor, tuple: &[usize], from: &[usize], to: &[usize], choose: Chooser) -> Result<TwoMorphism> {
    let n = tuple.len();
    check_partition(n, from)?;
    check_partition(n, to)?;
    let d = f.target();
    if from == to {
        return Ok(d.id2(eval_partition(f, tuple, from)?));
    }
    if refines(from, to) {
        return coarsen(f, tuple, from, to, choose);
    }
    if refines(to, from) {
        return d.inverse2(&coarsen(f, tuple, to, from, choose)?);
    }
    let (cf, ct) = (cuts(from), cuts(to));
    if choose(2) % 2 == 0 {
        let join: Vec<usize> = cf.iter().copied().filter(|c| ct.contains(c)).collect();
        let join = from_cuts(n, &join);
        let up = coarsen(f, tuple, from, &join, choose)?;
        let down = d.inverse2(&coarsen(f, tuple, to, &join, choose)?)?;
        d.vcomp(&down, &up)
    } else {
        let mut meet: Vec<usize> = cf.iter().chain(ct.iter()).copied().collect();
        meet.sort_unstable();
        meet.dedup();
        let meet = from_cuts(n, &meet);
        let down = d.inverse2(&coarsen(f, tuple, &meet, from, choose)?)?;
        let up = coarsen(f, tuple, &meet, to, choose)?;
        d.vcomp(&up, &down)
    }
}

fn check_chain(f: &dyn Pseudofunctor, chain: &[PaddedCell]) -> Result<()> {
    let first = chain.first().ok_or_else(|| Error::Padding("empty chain".into()))?;
    let tuple = &first.tuple;
    if tuple.is_empty() {
        return Err(Error::Padding("chain over the empty tuple".into()));
    }
    for (i, link) in chain.iter().enumerate() {
        if &link.tuple != tuple {
            return Err(Error::Padding(format!("link {i} is expressed over a different tuple")));
        }
        let s = eval_partition(f, tuple, &link.src)?;
        let t = eval_partition(f, tuple, &link.dst)?;
        if link.cell.src != s || link.cell.dst != t {
            return Err(Error::Padding(format!(
                "link {i} does not run from {:?} to {:?} (gap before or after link {i})",
                link.src, link.dst
            )));
        }
    }
    Ok(())
}

/// `⌈τ_k·…·τ₁⌉ = β_k·τ_k·β_{k−1}·…·τ₁·β₀` with the default recipe.
pub fn pad(f: &dyn Pseudofunctor, chain: &[PaddedCell]) -> Result<TwoMorphism> {
    pad_with(f, chain, &mut |_| 0)
}

/// [`pad`] with recipe choices delegated to `choose`.
pub fn pad_with(f: &dyn Pseudofunctor, chain: &[PaddedCell], choose: Chooser) -> Result<TwoMorphism> {
    check_chain(f, chain)?;
    let d = f.target();
    let tuple = &chain[0].tuple;
    let n = tuple.len();
    let mut acc = canonical(f, tuple, &finest(n), &chain[0].src, choose)?;
    for (i, link) in chain.iter().enumerate() {
        acc = d.vcomp(&link.cell, &acc)?;
        let next: Partition = chain.get(i + 1).map(|l| l.src.clone()).unwrap_or_else(|| coarsest(n));
        let beta = canonical(f, tuple, &link.dst, &next, choose)?;
        acc = d.vcomp(&beta, &acc)?;
    }
    Ok(acc)
}

/// The two canonical factors surrounding a single padded cell with endpoint
/// expressions `src`, `dst`: `(β₀, β₁)` so that `⌈τ⌉ = β₁·τ·β₀`.
pub fn pad_frame(f: &dyn Pseudofunctor, tuple: &[usize], src: &[usize], dst: &[usize]) -> Result<(TwoMorphism, TwoMorphism)> {
    let n = tuple.len();
    let mut choose = |_: usize| 0;
    let pre = canonical(f, tuple, &finest(n), src, &mut choose)?;
    let post = canonical(f, tuple, dst, &coarsest(n), &mut choose)?;
    Ok((pre, post))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cut_round_trip() {
        let p = vec![2, 1, 3];
        assert_eq!(cuts(&p), vec![2, 3]);
        assert_eq!(from_cuts(6, &cuts(&p)), p);
        assert!(refines(&[1, 1, 1, 1, 1, 1], &p));
        assert!(!refines(&[3, 3], &p));
    }
}
