//! The vertical coboundary `δ_v: X^{m,n} → X^{m,n+1}`, merging adjacent
//! tensor slots, with paddings supplied by grid canonical 2-isomorphisms.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactlinalg::{Scalar, SparseMatrix, SparseVec};
use crate::gray::{Grid, GridExpr, TensorPowers};
use crate::pfcomplex::CochainSpace;
use crate::twocat::TwoMorphism;

/// One term of `(δ_v φ)` on a grid with `m+1` rows and `L = n+2` columns.
enum Slot {
    /// `1_{column 0} ⊗ φ(columns 1..L)`.
    First,
    /// `φ` on the grid with columns `i−1` and `i` tensored together.
    Merge(usize),
    /// `φ(columns 0..L−1) ⊗ 1_{column L−1}`.
    Last,
}

struct VTerm {
    slot: Slot,
    /// Rows of the argument, each an `(n+1)`-tuple of base 1-cells.
    input: Vec<Vec<usize>>,
    negative: bool,
}

fn vterms(grid: &[Vec<usize>], tensor_cells: impl Fn(usize, usize) -> usize) -> Vec<VTerm> {
    let l = grid[0].len();
    let mut out = Vec::with_capacity(l + 1);
    out.push(VTerm { slot: Slot::First, input: grid.iter().map(|r| r[1..].to_vec()).collect(), negative: false });
    for i in 1..l {
        let input = grid
            .iter()
            .map(|r| {
                let mut row = r[..i - 1].to_vec();
                row.push(tensor_cells(r[i - 1], r[i]));
                row.extend_from_slice(&r[i + 1..]);
                row
            })
            .collect();
        out.push(VTerm { slot: Slot::Merge(i), input, negative: i % 2 == 1 });
    }
    out.push(VTerm { slot: Slot::Last, input: grid.iter().map(|r| r[..l - 1].to_vec()).collect(), negative: l % 2 == 1 });
    out
}

fn column(rows: usize, c: usize) -> GridExpr {
    GridExpr::Comp((0..rows).map(|r| GridExpr::Leaf(r, c)).collect())
}

/// `(pre, post)` such that the padded term is `post · τ · pre`, where `τ` is
/// the whiskered value of the argument.
fn frame(grid: &Grid, rows: usize, cols: usize, slot: &Slot) -> Result<(Option<TwoMorphism>, Option<TwoMorphism>)> {
    match slot {
        Slot::First => {
            let src = GridExpr::Tens(vec![column(rows, 0), GridExpr::rows_of_tensors(0..rows, 1..cols)]);
            Ok((Some(grid.cocan(&src)?), None))
        }
        Slot::Last => {
            let src = GridExpr::Tens(vec![GridExpr::rows_of_tensors(0..rows, 0..cols - 1), column(rows, cols - 1)]);
            Ok((Some(grid.cocan(&src)?), None))
        }
        Slot::Merge(i) => {
            let mut parts: Vec<GridExpr> = (0..i - 1).map(|c| column(rows, c)).collect();
            parts.push(GridExpr::Comp(
                (0..rows).map(|r| GridExpr::Tens(vec![GridExpr::Leaf(r, i - 1), GridExpr::Leaf(r, *i)])).collect(),
            ));
            parts.extend((i + 1..cols).map(|c| column(rows, c)));
            Ok((None, Some(grid.can(&GridExpr::Tens(parts))?)))
        }
    }
}

/// Matrix of `δ_v` from the free coordinates of `from` (`X^{m,n}`, a
/// degree-`m+1` space of `⊗(n+1)`) to those of `to` (`X^{m,n+1}`, a
/// degree-`m+1` space of `⊗(n+2)`). Tuples of `from` forced to vanish
/// contribute nothing.
pub fn delta_v_free(powers: &TensorPowers, n: usize, from: &CochainSpace, to: &CochainSpace) -> Result<SparseMatrix> {
    if from.degree() != to.degree() || from.degree() == 0 {
        return Err(Error::Dimension("δ_v keeps the row index".into()));
    }
    let gray = powers.gray();
    let c = gray.base();
    let field = gray.field();
    let to_power = powers.get(n + 2)?;
    let from_power = powers.get(n + 1)?;
    let rows = to.degree();
    let blocks: Vec<Vec<(usize, usize, Scalar)>> = (0..to.n_tuples())
        .into_par_iter()
        .map(|ti| -> Result<Vec<(usize, usize, Scalar)>> {
            let cells: Vec<Vec<usize>> = to.tuples()[ti].iter().map(|&x| to_power.source_arc().decode_cells(x)).collect();
            let cols = cells[0].len();
            let grid = Grid::new(powers, cells.clone())?;
            let row0 = to.range(ti).start;
            let mut out = Vec::new();
            for term in vterms(&cells, |a, b| gray.tensor_cells(a, b)) {
                let input: Vec<usize> = term.input.iter().map(|r| from_power.source_arc().encode_cells(r)).collect();
                let Some(ui) = from.tuple_index(&input) else {
                    return Err(Error::Invariant(format!("δ_v argument {input:?} missing from the source space")));
                };
                if from.is_excluded(ui) || from.range(ui).is_empty() {
                    continue;
                }
                let (pre, post) = frame(&grid, rows, cols, &term.slot)?;
                let (s, e) = from.ends(ui);
                for (k, col) in from.range(ui).enumerate() {
                    let phi = c.basis2(s, e, k);
                    let tau = match term.slot {
                        Slot::First => {
                            let col0: Vec<usize> = cells.iter().map(|r| r[0]).collect();
                            gray.tensor2(&c.id2(c.compose_all(&col0).expect("grid column")), &phi)?
                        }
                        Slot::Merge(_) => phi,
                        Slot::Last => {
                            let last: Vec<usize> = cells.iter().map(|r| r[cols - 1]).collect();
                            gray.tensor2(&phi, &c.id2(c.compose_all(&last).expect("grid column")))?
                        }
                    };
                    let mut img = tau;
                    if let Some(p) = &pre {
                        img = c.vcomp(&img, p)?;
                    }
                    if let Some(p) = &post {
                        img = c.vcomp(p, &img)?;
                    }
                    for (r, x) in img.coeffs.into_iter().enumerate() {
                        if !x.is_zero() {
                            out.push((row0 + r, col, if term.negative { -x } else { x }));
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(SparseMatrix::from_triplets(field, to.free_dim(), from.free_dim(), blocks.into_iter().flatten()))
}

/// `δ_v φ` for a single cochain given in free coordinates.
pub fn delta_v(powers: &TensorPowers, n: usize, from: &CochainSpace, to: &CochainSpace, phi: &SparseVec) -> Result<SparseVec> {
    delta_v_free(powers, n, from, to)?.mul_vec(phi)
}
