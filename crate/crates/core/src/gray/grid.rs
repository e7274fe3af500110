//! Canonical 2-isomorphisms between mixed composition/tensor expressions
//! over a rectangular grid of 1-cells.
//!
//! A grid `f[r][c]` (rows composable top to bottom, columns tensored left to
//! right) has two reference forms: the composite of row tensors
//! `S = ∘_r ⊗_c f[r][c]` and the tensor of column composites
//! `T = ⊗_c ∘_r f[r][c]`. Every well-formed expression `E` evaluates to a
//! 1-cell between them, and the iterated tensorators `⊗̂⁽ᵏ⁾` supply canonical
//! 2-isomorphisms `cocan(E): S ⇒ eval(E)` and `can(E): eval(E) ⇒ T`.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::twocat::{fhat_iterated, TwoMorphism};

use super::tensor_power::TensorPowers;

/// A composition/tensor expression over grid positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GridExpr {
    Leaf(usize, usize),
    /// Vertical stacking of row blocks (outermost first).
    Comp(Vec<GridExpr>),
    /// Horizontal juxtaposition of column blocks (leftmost first).
    Tens(Vec<GridExpr>),
}

impl GridExpr {
    /// Row and column ranges covered, or an error if the children do not tile
    /// a rectangle.
    pub fn extent(&self) -> Result<(Range<usize>, Range<usize>)> {
        match self {
            GridExpr::Leaf(r, c) => Ok((*r..r + 1, *c..c + 1)),
            GridExpr::Comp(ch) | GridExpr::Tens(ch) => {
                let vertical = matches!(self, GridExpr::Comp(_));
                let first = ch.first().ok_or_else(|| Error::Structural("empty grid expression".into()))?.extent()?;
                let (mut rows, mut cols) = first;
                for e in &ch[1..] {
                    let (r, c) = e.extent()?;
                    let ok = if vertical { c == cols && r.start == rows.end } else { r == rows && c.start == cols.end };
                    if !ok {
                        return Err(Error::Structural("grid expression children do not tile a rectangle".into()));
                    }
                    if vertical {
                        rows.end = r.end;
                    } else {
                        cols.end = c.end;
                    }
                }
                Ok((rows, cols))
            }
        }
    }

    /// Row-major composite of row tensors over a rectangle.
    pub fn rows_of_tensors(rows: Range<usize>, cols: Range<usize>) -> GridExpr {
        GridExpr::Comp(rows.map(|r| GridExpr::Tens(cols.clone().map(|c| GridExpr::Leaf(r, c)).collect())).collect())
    }

    /// Tensor of column composites over a rectangle.
    pub fn tensor_of_columns(rows: Range<usize>, cols: Range<usize>) -> GridExpr {
        GridExpr::Tens(cols.map(|c| GridExpr::Comp(rows.clone().map(|r| GridExpr::Leaf(r, c)).collect())).collect())
    }
}

/// A grid of 1-cells of the base of a Gray semigroup.
pub struct Grid<'a> {
    powers: &'a TensorPowers,
    cells: Vec<Vec<usize>>,
}

impl<'a> Grid<'a> {
    pub fn new(powers: &'a TensorPowers, cells: Vec<Vec<usize>>) -> Result<Self> {
        let width = cells.first().map(|r| r.len()).unwrap_or(0);
        if width == 0 || cells.iter().any(|r| r.len() != width) {
            return Err(Error::Structural("grid must be a nonempty rectangle".into()));
        }
        let c = powers.gray().base();
        for col in 0..width {
            let column: Vec<usize> = cells.iter().map(|r| r[col]).collect();
            if c.compose_all(&column).is_none() {
                return Err(Error::NotComposable(format!("grid column {col}")));
            }
        }
        Ok(Grid { powers, cells })
    }

    fn column_composite(&self, rows: Range<usize>, col: usize) -> usize {
        let column: Vec<usize> = rows.map(|r| self.cells[r][col]).collect();
        self.powers.gray().base().compose_all(&column).expect("columns checked composable")
    }

    /// The 1-cell an expression denotes.
    pub fn eval(&self, e: &GridExpr) -> Result<usize> {
        let g = self.powers.gray();
        match e {
            GridExpr::Leaf(r, c) => {
                self.cells.get(*r).and_then(|row| row.get(*c)).copied().ok_or_else(|| Error::Structural("grid position out of range".into()))
            }
            GridExpr::Comp(ch) => {
                let parts: Vec<usize> = ch.iter().map(|x| self.eval(x)).collect::<Result<_>>()?;
                g.base().compose_all(&parts).ok_or_else(|| Error::NotComposable("grid rows".into()))
            }
            GridExpr::Tens(ch) => {
                let parts: Vec<usize> = ch.iter().map(|x| self.eval(x)).collect::<Result<_>>()?;
                Ok(g.tensor_cells_all(&parts))
            }
        }
    }

    fn hcomp_all(&self, parts: &[TwoMorphism]) -> Result<TwoMorphism> {
        let c = self.powers.gray().base();
        let mut acc = parts.last().expect("nonempty").clone();
        for p in parts[..parts.len() - 1].iter().rev() {
            acc = c.hcomp(p, &acc)?;
        }
        Ok(acc)
    }

    /// `⊗̂⁽ᵏ⁾` applied to a stack of rows, each a `k`-tuple of 1-cells:
    /// `∘_r ⊗_j h[r][j] ⇒ ⊗_j ∘_r h[r][j]`.
    fn stacked_tensorator(&self, rows: &[Vec<usize>]) -> Result<Option<TwoMorphism>> {
        let k = rows[0].len();
        if k == 1 || rows.len() == 1 {
            return Ok(None);
        }
        let tp = self.powers.get(k)?;
        let src = tp.source_arc();
        let encoded: Vec<usize> = rows.iter().map(|r| src.encode_cells(r)).collect();
        Ok(Some(fhat_iterated(&*tp, &encoded)?))
    }

    /// `can(E): eval(E) ⇒ T(E)`.
    pub fn can(&self, e: &GridExpr) -> Result<TwoMorphism> {
        let g = self.powers.gray();
        let c = g.base();
        match e {
            GridExpr::Leaf(..) => Ok(c.id2(self.eval(e)?)),
            GridExpr::Tens(ch) => {
                let parts: Vec<TwoMorphism> = ch.iter().map(|x| self.can(x)).collect::<Result<_>>()?;
                g.tensor2_all(&parts)
            }
            GridExpr::Comp(ch) => {
                let parts: Vec<TwoMorphism> = ch.iter().map(|x| self.can(x)).collect::<Result<_>>()?;
                let mut acc = self.hcomp_all(&parts)?;
                let (_, cols) = e.extent()?;
                let mut rows = Vec::with_capacity(ch.len());
                for x in ch {
                    let (rr, _) = x.extent()?;
                    rows.push(cols.clone().map(|col| self.column_composite(rr.clone(), col)).collect::<Vec<_>>());
                }
                if let Some(t) = self.stacked_tensorator(&rows)? {
                    acc = c.vcomp(&t, &acc)?;
                }
                Ok(acc)
            }
        }
    }

    /// `cocan(E): S(E) ⇒ eval(E)`.
    pub fn cocan(&self, e: &GridExpr) -> Result<TwoMorphism> {
        let g = self.powers.gray();
        let c = g.base();
        match e {
            GridExpr::Leaf(..) => Ok(c.id2(self.eval(e)?)),
            GridExpr::Comp(ch) => {
                let parts: Vec<TwoMorphism> = ch.iter().map(|x| self.cocan(x)).collect::<Result<_>>()?;
                self.hcomp_all(&parts)
            }
            GridExpr::Tens(ch) => {
                let parts: Vec<TwoMorphism> = ch.iter().map(|x| self.cocan(x)).collect::<Result<_>>()?;
                let mut acc = g.tensor2_all(&parts)?;
                let (rows, _) = e.extent()?;
                let mut stack = Vec::with_capacity(rows.len());
                let col_blocks: Vec<Range<usize>> = ch.iter().map(|x| x.extent().map(|(_, cc)| cc)).collect::<Result<_>>()?;
                for r in rows {
                    stack.push(
                        col_blocks
                            .iter()
                            .map(|cc| g.tensor_cells_all(&self.cells[r][cc.clone()]))
                            .collect::<Vec<_>>(),
                    );
                }
                if let Some(t) = self.stacked_tensorator(&stack)? {
                    acc = c.vcomp(&acc, &t)?;
                }
                Ok(acc)
            }
        }
    }
}
