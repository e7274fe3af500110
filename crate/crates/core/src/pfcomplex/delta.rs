//! The coboundary `δ: Xⁿ(F) → Xⁿ⁺¹(F)` as padded alternating sums.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactlinalg::{Scalar, SparseMatrix, SparseVec};
use crate::gray::{finest, pad_frame, Partition};
use crate::twocat::{Pseudofunctor, TwoMorphism};

use super::space::CochainSpace;

/// How the `j`-th term of `(δφ)(f₀,…,f_{L−1})` reads `φ`: the argument
/// tuple, the endpoint expressions of the unpadded 2-cell, and whether
/// `φ(u)` is whiskered by `1_{F f₀}` on the left or `1_{F f_{L−1}}` on the
/// right.
struct Term {
    input: Vec<usize>,
    src: Partition,
    dst: Partition,
    whisker: Whisker,
    sign_negative: bool,
}

enum Whisker {
    Left(usize),
    None,
    Right(usize),
}

fn terms(f: &dyn Pseudofunctor, t: &[usize]) -> Vec<Term> {
    let c = f.source();
    let l = t.len();
    let mut out = Vec::with_capacity(l + 1);
    out.push(Term {
        input: t[1..].to_vec(),
        src: finest(l),
        dst: vec![1, l - 1],
        whisker: Whisker::Left(f.map_cell(t[0])),
        sign_negative: false,
    });
    for j in 1..l {
        let mut input = t[..j - 1].to_vec();
        input.push(c.compose(t[j - 1], t[j]).expect("composable tuple"));
        input.extend_from_slice(&t[j + 1..]);
        let mut src = vec![1; l - 1];
        src[j - 1] = 2;
        out.push(Term { input, src, dst: vec![l], whisker: Whisker::None, sign_negative: j % 2 == 1 });
    }
    out.push(Term {
        input: t[..l - 1].to_vec(),
        src: finest(l),
        dst: vec![l - 1, 1],
        whisker: Whisker::Right(f.map_cell(t[l - 1])),
        sign_negative: l % 2 == 1,
    });
    out
}

/// Matrix of `δ` from the free coordinates of `from` (degree `n`) to those
/// of `to` (degree `n + 1`). Tuples of `from` that are forced to vanish
/// contribute nothing.
pub fn delta_free(f: &dyn Pseudofunctor, from: &CochainSpace, to: &CochainSpace) -> Result<SparseMatrix> {
    if to.degree() != from.degree() + 1 {
        return Err(Error::Dimension(format!("δ from degree {} to degree {}", from.degree(), to.degree())));
    }
    let field = to.field();
    if from.degree() == 0 {
        return Ok(SparseMatrix::zero(field, to.free_dim(), from.free_dim()));
    }
    let d = f.target();
    let blocks: Vec<Vec<(usize, usize, Scalar)>> = (0..to.n_tuples())
        .into_par_iter()
        .map(|ti| -> Result<Vec<(usize, usize, Scalar)>> {
            let t = &to.tuples()[ti];
            let row0 = to.range(ti).start;
            let mut out = Vec::new();
            for term in terms(f, t) {
                let Some(ui) = from.tuple_index(&term.input) else { continue };
                if from.is_excluded(ui) || from.range(ui).is_empty() {
                    continue;
                }
                let (pre, post) = pad_frame(f, t, &term.src, &term.dst)?;
                let (s, e) = from.ends(ui);
                for (k, col) in from.range(ui).enumerate() {
                    let phi = d.basis2(s, e, k);
                    let tau = match term.whisker {
                        Whisker::Left(g) => d.whisker_left(g, &phi)?,
                        Whisker::None => phi,
                        Whisker::Right(h) => d.whisker_right(&phi, h)?,
                    };
                    let img = d.vcomp(&post, &d.vcomp(&tau, &pre)?)?;
                    for (r, x) in img.coeffs.into_iter().enumerate() {
                        if !x.is_zero() {
                            out.push((row0 + r, col, if term.sign_negative { -x } else { x }));
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(SparseMatrix::from_triplets(field, to.free_dim(), from.free_dim(), blocks.into_iter().flatten()))
}

/// `δφ` for a single cochain given in free coordinates.
pub fn delta_pf(f: &dyn Pseudofunctor, from: &CochainSpace, to: &CochainSpace, phi: &SparseVec) -> Result<SparseVec> {
    delta_free(f, from, to)?.mul_vec(phi)
}

/// `⌈τ⌉` for one output tuple and term, exposed for checks: the padded
/// value of the `j`-th term of `(δφ)(t)` without its sign.
pub fn padded_term(f: &dyn Pseudofunctor, from: &CochainSpace, phi: &SparseVec, t: &[usize], j: usize) -> Result<TwoMorphism> {
    let d = f.target();
    let ts = terms(f, t);
    let term = ts.get(j).ok_or_else(|| Error::Precondition(format!("term {j} out of range")))?;
    let ui = from.tuple_index(&term.input).ok_or_else(|| Error::Precondition("argument tuple not in the space".into()))?;
    let value = from.value(phi, ui);
    let tau = match term.whisker {
        Whisker::Left(g) => d.whisker_left(g, &value)?,
        Whisker::None => value,
        Whisker::Right(h) => d.whisker_right(&value, h)?,
    };
    let (pre, post) = pad_frame(f, t, &term.src, &term.dst)?;
    d.vcomp(&post, &d.vcomp(&tau, &pre)?)
}
