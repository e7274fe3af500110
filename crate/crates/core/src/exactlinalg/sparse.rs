//! Sparse vectors and matrices over an exact [`Field`], with deterministic
//! Gaussian elimination.

use std::collections::BTreeMap;

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseVec {
    pub len: usize,
    pub entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn zero(len: usize) -> Self {
        SparseVec { len, entries: Vec::new() }
    }

    pub fn unit(len: usize, i: usize, field: Field) -> Self {
        SparseVec { len, entries: vec![(i, field.one())] }
    }

    /// Builds from unsorted pairs, summing repeats and dropping zeros.
    pub fn from_pairs(len: usize, pairs: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, x) in pairs {
            assert!(i < len, "index {i} out of range {len}");
            match acc.get_mut(&i) {
                Some(y) => *y += &x,
                None => {
                    acc.insert(i, x);
                }
            }
        }
        SparseVec { len, entries: acc.into_iter().filter(|(_, x)| !x.is_zero()).collect() }
    }

    pub fn from_dense(dense: &[Scalar]) -> Self {
        SparseVec {
            len: dense.len(),
            entries: dense.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect(),
        }
    }

    pub fn to_dense(&self, field: Field) -> Vec<Scalar> {
        let mut out = vec![field.zero(); self.len];
        for (i, x) in &self.entries {
            out[*i] = x.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries.binary_search_by_key(&i, |(j, _)| *j).ok().map(|k| &self.entries[k].1)
    }

    pub fn leading(&self) -> Option<&(usize, Scalar)> {
        self.entries.first()
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::zero(self.len);
        }
        SparseVec { len: self.len, entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    /// `self + c·other`, merged in one pass.
    pub fn axpy(&self, c: &Scalar, other: &SparseVec) -> SparseVec {
        debug_assert_eq!(self.len, other.len);
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y * c));
                        b.next();
                    } else {
                        let s = x + &(y * c);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y * c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { len: self.len, entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        match other.entries.first() {
            None => self.clone(),
            Some((_, x)) => self.axpy(&x.field().one(), other),
        }
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        match other.entries.first() {
            None => self.clone(),
            Some((_, x)) => self.axpy(&-x.field().one(), other),
        }
    }

    pub fn dot(&self, other: &SparseVec) -> Option<Scalar> {
        let mut acc: Option<Scalar> = None;
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        while let (Some((i, x)), Some((j, y))) = (a.peek(), b.peek()) {
            if i < j {
                a.next();
            } else if j < i {
                b.next();
            } else {
                let p = x * y;
                acc = Some(match acc {
                    Some(s) => &s + &p,
                    None => p,
                });
                a.next();
                b.next();
            }
        }
        acc
    }

    /// Rescales so the first nonzero coefficient is 1.
    pub fn normalized(&self) -> SparseVec {
        match self.leading() {
            Some((_, x)) => self.scale(&x.inv().expect("leading entry is nonzero")),
            None => self.clone(),
        }
    }
}

/// Sparse matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    row_data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        SparseMatrix { field, rows, cols, row_data: vec![SparseVec::zero(cols); rows] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        SparseMatrix { field, rows: n, cols: n, row_data: (0..n).map(|i| SparseVec::unit(n, i, field)).collect() }
    }

    pub fn from_triplets(field: Field, rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, Scalar)>) -> Self {
        let mut buckets: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); rows];
        for (r, c, x) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            buckets[r].push((c, x));
        }
        SparseMatrix { field, rows, cols, row_data: buckets.into_iter().map(|b| SparseVec::from_pairs(cols, b)).collect() }
    }

    pub fn from_rows(field: Field, cols: usize, rows: Vec<SparseVec>) -> Self {
        assert!(rows.iter().all(|r| r.len == cols));
        SparseMatrix { field, rows: rows.len(), cols, row_data: rows }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[SparseVec]) -> Self {
        let trip = columns.iter().enumerate().flat_map(|(c, v)| {
            assert_eq!(v.len, rows);
            v.entries.iter().map(move |(r, x)| (*r, c, x.clone()))
        });
        SparseMatrix::from_triplets(field, rows, columns.len(), trip)
    }

    pub fn from_dense(field: Field, dense: &[Vec<Scalar>]) -> Self {
        let cols = dense.first().map_or(0, |r| r.len());
        SparseMatrix::from_rows(field, cols, dense.iter().map(|r| SparseVec::from_dense(r)).collect())
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.row_data[r]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &SparseVec> {
        self.row_data.iter()
    }

    pub fn nnz(&self) -> usize {
        self.row_data.iter().map(|r| r.entries.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.row_data.iter().all(|r| r.is_zero())
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.row_data[r].get(c).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn transpose(&self) -> SparseMatrix {
        let trip = self.row_data.iter().enumerate().flat_map(|(r, row)| row.entries.iter().map(move |(c, x)| (*c, r, x.clone())));
        SparseMatrix::from_triplets(self.field, self.cols, self.rows, trip)
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        self.transpose().row_data
    }

    pub fn mul_vec(&self, v: &SparseVec) -> Result<SparseVec> {
        if v.len != self.cols {
            return Err(Error::Dimension(format!("{}x{} matrix times vector of length {}", self.rows, self.cols, v.len)));
        }
        let pairs = self.row_data.iter().enumerate().filter_map(|(r, row)| row.dot(v).map(|x| (r, x)));
        Ok(SparseVec::from_pairs(self.rows, pairs))
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let rows = self
            .row_data
            .iter()
            .map(|row| {
                let mut acc = SparseVec::zero(other.cols);
                for (k, x) in &row.entries {
                    acc = acc.axpy(x, &other.row_data[*k]);
                }
                acc
            })
            .collect();
        Ok(SparseMatrix { field: self.field, rows: self.rows, cols: other.cols, row_data: rows })
    }

    pub fn scale(&self, c: &Scalar) -> SparseMatrix {
        SparseMatrix { field: self.field, rows: self.rows, cols: self.cols, row_data: self.row_data.iter().map(|r| r.scale(c)).collect() }
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension(format!("{}x{} plus {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let rows = self.row_data.iter().zip(&other.row_data).map(|(a, b)| a.add(b)).collect();
        Ok(SparseMatrix { field: self.field, rows: self.rows, cols: self.cols, row_data: rows })
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.add(&other.scale(&-self.field.one()))
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!("vstack of widths {} and {}", self.cols, other.cols)));
        }
        let mut rows = self.row_data.clone();
        rows.extend(other.row_data.iter().cloned());
        Ok(SparseMatrix { field: self.field, rows: rows.len(), cols: self.cols, row_data: rows })
    }

    /// Places `blocks[i][j]` (if present) at the given block offsets.
    pub fn from_blocks(field: Field, row_sizes: &[usize], col_sizes: &[usize], blocks: &[(usize, usize, SparseMatrix)]) -> SparseMatrix {
        let roff: Vec<usize> = prefix(row_sizes);
        let coff: Vec<usize> = prefix(col_sizes);
        let rows: usize = row_sizes.iter().sum();
        let cols: usize = col_sizes.iter().sum();
        let mut trip = Vec::new();
        for (bi, bj, m) in blocks {
            assert_eq!((m.rows, m.cols), (row_sizes[*bi], col_sizes[*bj]), "block ({bi},{bj}) has wrong shape");
            for (r, row) in m.row_data.iter().enumerate() {
                for (c, x) in &row.entries {
                    trip.push((roff[*bi] + r, coff[*bj] + *c, x.clone()));
                }
            }
        }
        SparseMatrix::from_triplets(field, rows, cols, trip)
    }

    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseMatrix {
        let trip = self.row_data.iter().enumerate().flat_map(|(r, row)| row.entries.iter().map(move |(c, x)| (row_perm[r], col_perm[*c], x.clone())));
        SparseMatrix::from_triplets(self.field, self.rows, self.cols, trip)
    }
}

fn prefix(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len());
    let mut s = 0;
    for x in sizes {
        out.push(s);
        s += x;
    }
    out
}

/// Incremental row-echelon basis. Every stored vector is monic at its
/// pivot and no two share a pivot; optional tags record each stored
/// vector as a combination of the inserted inputs.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    len: usize,
    pivots: BTreeMap<usize, (SparseVec, Option<SparseVec>)>,
}

impl Echelon {
    pub fn new(field: Field, len: usize) -> Self {
        Echelon { field, len, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Reduces `v` (and its tag) by leading-term elimination.
    pub fn reduce(&self, v: &SparseVec, tag: Option<SparseVec>) -> (SparseVec, Option<SparseVec>) {
        let mut v = v.clone();
        let mut tag = tag;
        let mut floor = 0usize;
        loop {
            // first entry at or beyond `floor` that has a pivot
            let hit = v.entries.iter().find(|(i, _)| *i >= floor && self.pivots.contains_key(i)).map(|(i, x)| (*i, x.clone()));
            let Some((col, coef)) = hit else { break };
            let (pv, ptag) = &self.pivots[&col];
            let c = -coef;
            v = v.axpy(&c, pv);
            if let (Some(t), Some(pt)) = (tag.as_mut(), ptag.as_ref()) {
                *t = t.axpy(&c, pt);
            }
            floor = col + 1;
        }
        (v, tag)
    }

    /// Inserts `v`; returns the new pivot column if `v` was independent.
    pub fn insert(&mut self, v: &SparseVec, tag: Option<SparseVec>) -> Option<usize> {
        assert_eq!(v.len, self.len);
        let (r, t) = self.reduce(v, tag);
        let (col, lead) = r.leading()?.clone();
        let inv = lead.inv().expect("nonzero");
        let r = r.scale(&inv);
        let t = t.map(|t| t.scale(&inv));
        self.pivots.insert(col, (r, t));
        Some(col)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v, None).0.is_zero()
    }

    /// Fully reduced rows (RREF), ordered by pivot column.
    pub fn reduced_rows(&self) -> Vec<(usize, SparseVec)> {
        let mut rows: BTreeMap<usize, SparseVec> = self.pivots.iter().map(|(c, (v, _))| (*c, v.clone())).collect();
        let cols: Vec<usize> = rows.keys().rev().copied().collect();
        for &pc in &cols {
            let prow = rows[&pc].clone();
            for (_, row) in rows.range_mut(..pc) {
                if let Some(x) = row.get(pc).cloned() {
                    *row = row.axpy(&-x, &prow);
                }
            }
        }
        rows.into_iter().collect()
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

/// Exact rank over the matrix's field.
pub fn rank(m: &SparseMatrix) -> usize {
    let mut e = Echelon::new(m.field, m.cols);
    for row in m.rows_iter() {
        e.insert(row, None);
    }
    e.rank()
}

/// A basis of `{v : M v = 0}` with `cols − rank` vectors, one per free
/// column in increasing order.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    let mut e = Echelon::new(m.field, m.cols);
    for row in m.rows_iter() {
        e.insert(row, None);
    }
    let rref = e.reduced_rows();
    let pivot_set: std::collections::BTreeSet<usize> = rref.iter().map(|(c, _)| *c).collect();
    // column j -> list of (pivot col, coefficient of j in that pivot row)
    let mut by_col: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
    for (pc, row) in &rref {
        for (j, x) in &row.entries {
            if *j != *pc {
                by_col.entry(*j).or_default().push((*pc, x.clone()));
            }
        }
    }
    (0..m.cols)
        .filter(|j| !pivot_set.contains(j))
        .map(|j| {
            let mut pairs = vec![(j, m.field.one())];
            if let Some(list) = by_col.get(&j) {
                pairs.extend(list.iter().map(|(pc, x)| (*pc, -x)));
            }
            SparseVec::from_pairs(m.cols, pairs)
        })
        .collect()
}

/// Some `x` with `M x = b`, or `None` when `b` is outside the image.
pub fn solve_in_image(m: &SparseMatrix, b: &SparseVec) -> Result<Option<SparseVec>> {
    if b.len != m.rows {
        return Err(Error::Dimension(format!("right-hand side of length {} for {} rows", b.len, m.rows)));
    }
    let solver = ImageSolver::new(m);
    Ok(solver.solve(b))
}

/// Column-space echelon of a fixed matrix, reusable across many
/// right-hand sides.
#[derive(Clone, Debug)]
pub struct ImageSolver {
    cols: usize,
    echelon: Echelon,
}

impl ImageSolver {
    pub fn new(m: &SparseMatrix) -> Self {
        let mut echelon = Echelon::new(m.field, m.rows);
        for (j, col) in m.columns().iter().enumerate() {
            echelon.insert(col, Some(SparseVec::unit(m.cols, j, m.field)));
        }
        ImageSolver { cols: m.cols, echelon }
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn contains(&self, b: &SparseVec) -> bool {
        self.echelon.contains(b)
    }

    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        let (r, t) = self.echelon.reduce(b, Some(SparseVec::zero(self.cols)));
        if r.is_zero() {
            // b − Σ c_j col_j = 0 with t = −Σ c_j e_j
            t.map(|t| t.scale(&-self.echelon.field().one()))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> SparseMatrix {
        let f = Field::Rational;
        SparseMatrix::from_dense(f, &rows.iter().map(|r| r.iter().map(|x| f.from_i64(*x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::identity(Field::Rational, 3)), 3);
        assert_eq!(rank(&SparseMatrix::zero(Field::Rational, 4, 7)), 0);
        assert_eq!(rank(&q(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(Field::Rational, 2)).is_empty());
        let k = kernel_basis(&q(&[&[1, -1]]));
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].get(0), k[0].get(1));
        assert_eq!(kernel_basis(&SparseMatrix::zero(Field::Rational, 2, 3)).len(), 3);
    }

    #[test]
    fn solve_examples() {
        let f = Field::Rational;
        let b = SparseVec::from_dense(&[f.from_i64(3), f.from_i64(-5)]);
        let id = SparseMatrix::identity(f, 2);
        assert_eq!(solve_in_image(&id, &b).unwrap(), Some(b.clone()));
        assert_eq!(solve_in_image(&SparseMatrix::zero(f, 2, 2), &b).unwrap(), None);
        let m = q(&[&[1, 2], &[2, 4]]);
        let rhs = SparseVec::from_dense(&[f.from_i64(1), f.from_i64(2)]);
        let x = solve_in_image(&m, &rhs).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), rhs);
        assert!(solve_in_image(&m, &SparseVec::zero(3)).is_err());
    }
}
