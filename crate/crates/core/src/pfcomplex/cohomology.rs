//! Cohomology of a cochain complex given by consecutive coboundary
//! matrices over fixed bases.

use serde::Serialize;

use crate::exactlinalg::{kernel_basis, rank, Echelon, SparseMatrix, SparseVec};
use crate::error::{Error, Result};

/// Cohomology in one degree. `representatives` are in free coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cohomology {
    pub degree: usize,
    pub dim_space: usize,
    pub dim_kernel: usize,
    pub rank_prev: usize,
    pub betti: usize,
    #[serde(skip)]
    pub representatives: Vec<SparseVec>,
}

/// Cohomology at a space with basis `basis` (free × dim), given
/// `incoming` = the previous coboundary as a map *into free coordinates*
/// of this space (free × dim_prev) and `outgoing` = the coboundary out of
/// this space in basis coordinates (free_next × dim).
///
/// Representatives are kernel vectors reduced against the image of
/// `incoming`, scaled so the first nonzero coefficient is 1.
pub fn cohomology_at(
    degree: usize,
    basis: &SparseMatrix,
    incoming: Option<&SparseMatrix>,
    outgoing: &SparseMatrix,
    with_representatives: bool,
) -> Result<Cohomology> {
    if outgoing.cols != basis.cols || incoming.is_some_and(|m| m.rows != basis.rows) {
        return Err(Error::Dimension("coboundary matrices do not match the space".into()));
    }
    let dim_space = basis.cols;
    let dim_kernel = dim_space - rank(outgoing);
    let (rank_prev, image) = match incoming {
        Some(m) => {
            let mut e = Echelon::new(basis.field, basis.rows);
            for col in m.columns() {
                e.insert(&col, None);
            }
            (e.rank(), Some(e))
        }
        None => (0, None),
    };
    if rank_prev > dim_kernel {
        return Err(Error::Invariant(format!("image of rank {rank_prev} exceeds kernel of dimension {dim_kernel} in degree {degree}")));
    }
    let betti = dim_kernel - rank_prev;
    let mut representatives = Vec::new();
    if with_representatives && betti > 0 {
        let image = image.unwrap_or_else(|| Echelon::new(basis.field, basis.rows));
        let mut span = image.clone();
        for k in kernel_basis(outgoing) {
            let v = basis.mul_vec(&k)?;
            let (r, _) = image.reduce(&v, None);
            if span.insert(&r, None).is_some() {
                representatives.push(r.normalized());
                if representatives.len() == betti {
                    break;
                }
            }
        }
    }
    Ok(Cohomology { degree, dim_space, dim_kernel, rank_prev, betti, representatives })
}
