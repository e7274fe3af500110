//! Total complexes assembled from the double complex and the
//! pentagonator complex, as explicit sparse matrices over fixed bases.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::{kernel_basis, Field, SparseMatrix, SparseVec};
use crate::pfcomplex::{cohomology_at, Cohomology};

use super::DefComplex;

/// Which deformation complex to assemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexSelection {
    /// `⊕_{m+n=q, n≥1} X_s^{m,n}` with `(−1)ⁿδ_h + δ_v`.
    TensAss,
    /// `ker(δ_h) ⊂ X_s^{0,q}` with `δ_v`.
    Ass,
    /// `ker(δ_v: X_s^{q−1,1} → X_s^{q−1,2})` with `δ_h`.
    Tens,
    /// Modifications inside `X̃^q_pent` (`ker φ`) with `δ_pent`.
    PentRestricted,
    /// All of `X̃^q_pent` with `δ_pent`.
    PentGeneral,
    /// The total complex of the modified special double complex.
    Unit,
}

impl ComplexSelection {
    pub const ALL: [ComplexSelection; 6] = [
        ComplexSelection::TensAss,
        ComplexSelection::Ass,
        ComplexSelection::Tens,
        ComplexSelection::PentRestricted,
        ComplexSelection::PentGeneral,
        ComplexSelection::Unit,
    ];

    /// Short identifier used on the command line and in reports.
    pub fn key(self) -> &'static str {
        match self {
            ComplexSelection::TensAss => "tens_ass",
            ComplexSelection::Ass => "ass",
            ComplexSelection::Tens => "tens",
            ComplexSelection::PentRestricted => "pent_restricted",
            ComplexSelection::PentGeneral => "pent_general",
            ComplexSelection::Unit => "unit",
        }
    }

    /// Descriptive name of the complex.
    pub fn title(self) -> &'static str {
        match self {
            ComplexSelection::TensAss => "unitary (tensorator,associator)-deformation complex",
            ComplexSelection::Ass => "associator-deformation complex",
            ComplexSelection::Tens => "unitary tensorator-deformation complex",
            ComplexSelection::PentRestricted => "pentagonator-deformation complex",
            ComplexSelection::PentGeneral => "general pentagonator-deformation complex",
            ComplexSelection::Unit => "unitary deformation complex",
        }
    }

    /// Lowest degree in which the complex is defined.
    pub fn min_degree(self) -> usize {
        match self {
            ComplexSelection::PentRestricted | ComplexSelection::PentGeneral => 0,
            _ => 1,
        }
    }

    fn special(self) -> bool {
        !matches!(self, ComplexSelection::PentRestricted | ComplexSelection::PentGeneral)
    }

    /// Summands of degree `q`, ordered by row index ascending (the
    /// pentagonator part of the first column right after its bicomplex part).
    fn layout(self, q: usize) -> Vec<SummandKind> {
        use SummandKind::*;
        match self {
            ComplexSelection::TensAss => (0..q).map(|m| Bicomplex { m, n: q - m }).collect(),
            ComplexSelection::Unit => {
                let mut v = Vec::new();
                for m in 0..q {
                    v.push(Bicomplex { m, n: q - m });
                    if m == 0 {
                        v.push(Pent { k: q + 1 });
                    }
                }
                v
            }
            ComplexSelection::Ass => {
                if q >= 1 {
                    vec![Bicomplex { m: 0, n: q }]
                } else {
                    vec![]
                }
            }
            ComplexSelection::Tens => {
                if q >= 1 {
                    vec![Bicomplex { m: q - 1, n: 1 }]
                } else {
                    vec![]
                }
            }
            ComplexSelection::PentRestricted | ComplexSelection::PentGeneral => vec![Pent { k: q }],
        }
    }
}

impl fmt::Display for ComplexSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for ComplexSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ComplexSelection::ALL
            .into_iter()
            .find(|c| c.key() == s)
            .ok_or_else(|| Error::Parse(format!("unknown complex '{s}' (expected one of tens_ass, ass, tens, pent_restricted, pent_general, unit)")))
    }
}

/// A direct summand of one degree of a total complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SummandKind {
    /// `X^{m,n}` (special where the selection requires it).
    Bicomplex { m: usize, n: usize },
    /// `X̃ᵏ_pent`.
    Pent { k: usize },
}

impl fmt::Display for SummandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SummandKind::Bicomplex { m, n } => write!(f, "X^{{{m},{n}}}"),
            SummandKind::Pent { k } => write!(f, "X~^{{{k}}}_pent"),
        }
    }
}

/// Placement of a summand inside the free coordinates of its degree.
#[derive(Clone, Debug, Serialize)]
pub struct Summand {
    pub kind: SummandKind,
    pub offset: usize,
    pub free_dim: usize,
}

/// One degree of an assembled complex.
#[derive(Clone, Debug)]
pub struct Layer {
    pub degree: usize,
    pub summands: Vec<Summand>,
    pub free_dim: usize,
    /// Basis of the degree-`q` space as columns over free coordinates;
    /// absent for the auxiliary top layer, which only serves as a target.
    pub basis: Option<SparseMatrix>,
}

impl Layer {
    pub fn dim(&self) -> usize {
        self.basis.as_ref().map(|b| b.cols).unwrap_or(0)
    }

    pub fn summand(&self, kind: SummandKind) -> Option<&Summand> {
        self.summands.iter().find(|s| s.kind == kind)
    }

    /// The coordinates of `v` belonging to one summand.
    pub fn restrict(&self, v: &SparseVec, kind: SummandKind) -> Option<SparseVec> {
        let s = self.summand(kind)?;
        let r = s.offset..s.offset + s.free_dim;
        Some(SparseVec::from_pairs(s.free_dim, v.entries.iter().filter(|(i, _)| r.contains(i)).map(|(i, x)| (i - s.offset, x.clone()))))
    }

    /// Concatenates per-summand vectors (missing summands are zero).
    pub fn join(&self, parts: &[(SummandKind, SparseVec)]) -> Result<SparseVec> {
        let mut pairs = Vec::new();
        for (kind, v) in parts {
            let s = self.summand(*kind).ok_or_else(|| Error::Dimension(format!("{kind} is not a summand in degree {}", self.degree)))?;
            if v.len != s.free_dim {
                return Err(Error::Dimension(format!("{kind} has {} free coordinates, got {}", s.free_dim, v.len)));
            }
            pairs.extend(v.entries.iter().map(|(i, x)| (i + s.offset, x.clone())));
        }
        Ok(SparseVec::from_pairs(self.free_dim, pairs))
    }
}

/// Consecutive differentials of a total complex over fixed bases.
#[derive(Clone, Debug)]
pub struct AssembledComplex {
    pub selection: ComplexSelection,
    pub field: Field,
    pub lo: usize,
    pub hi: usize,
    /// Degrees `lo..=hi+1`.
    pub layers: Vec<Layer>,
    /// `D_q` over free coordinates (`free_{q+1} × free_q`) for `q` in `lo..=hi`.
    pub deltas: Vec<SparseMatrix>,
}

impl AssembledComplex {
    pub fn layer(&self, q: usize) -> Result<&Layer> {
        if q < self.lo || q > self.hi + 1 {
            return Err(Error::Precondition(format!("degree {q} outside the assembled range {}..={}", self.lo, self.hi)));
        }
        Ok(&self.layers[q - self.lo])
    }

    /// `D_q` over free coordinates.
    pub fn delta_free(&self, q: usize) -> Result<&SparseMatrix> {
        if q < self.lo || q > self.hi {
            return Err(Error::Precondition(format!("no differential assembled in degree {q}")));
        }
        Ok(&self.deltas[q - self.lo])
    }

    /// `D_q` restricted to the degree-`q` space (`free_{q+1} × dim_q`).
    pub fn coboundary(&self, q: usize) -> Result<SparseMatrix> {
        let b = self.layer(q)?.basis.as_ref().ok_or_else(|| Error::Precondition(format!("no basis in degree {q}")))?;
        self.delta_free(q)?.mul(b)
    }

    /// `H^q` with representatives in free coordinates.
    pub fn cohomology(&self, q: usize, with_representatives: bool) -> Result<Cohomology> {
        let layer = self.layer(q)?;
        let basis = layer.basis.as_ref().ok_or_else(|| Error::Precondition(format!("no basis in degree {q}")))?;
        let incoming = if q > self.lo { Some(self.coboundary(q - 1)?) } else { None };
        cohomology_at(q, basis, incoming.as_ref(), &self.coboundary(q)?, with_representatives)
    }

    /// `D_{q+1}·D_q` on the basis of degree `q`, for all assembled `q < hi`.
    pub fn check_squares(&self) -> Result<()> {
        for q in self.lo..self.hi {
            let prod = self.delta_free(q + 1)?.mul(&self.coboundary(q)?)?;
            if !prod.is_zero() {
                return Err(Error::Invariant(format!("{}: D² ≠ 0 from degree {q}", self.selection)));
            }
        }
        Ok(())
    }
}

fn block_diagonal(field: Field, blocks: &[SparseMatrix]) -> SparseMatrix {
    let rows: Vec<usize> = blocks.iter().map(|b| b.rows).collect();
    let cols: Vec<usize> = blocks.iter().map(|b| b.cols).collect();
    let placed: Vec<(usize, usize, SparseMatrix)> = blocks.iter().cloned().enumerate().map(|(i, b)| (i, i, b)).collect();
    SparseMatrix::from_blocks(field, &rows, &cols, &placed)
}

fn restrict_to_kernel(field: Field, basis: SparseMatrix, constraint: &SparseMatrix) -> Result<SparseMatrix> {
    let k = kernel_basis(&constraint.mul(&basis)?);
    let cols: Vec<SparseVec> = k.iter().map(|v| basis.mul_vec(v)).collect::<Result<_>>()?;
    Ok(SparseMatrix::from_columns(field, basis.rows, &cols))
}

fn layer(dc: &DefComplex, sel: ComplexSelection, q: usize, with_basis: bool) -> Result<Layer> {
    let field = dc.gray().field();
    let special = sel.special();
    let mut summands = Vec::new();
    let mut bases = Vec::new();
    let mut offset = 0;
    for kind in sel.layout(q) {
        let (free_dim, basis) = match kind {
            SummandKind::Bicomplex { m, n } => {
                let sp = dc.bicomplex_space(m, n, special)?;
                (sp.free_dim(), with_basis.then(|| sp.basis().clone()))
            }
            SummandKind::Pent { k } => {
                let sp = dc.pent_space(k)?;
                (sp.free_dim(), with_basis.then(|| SparseMatrix::identity(field, sp.free_dim())))
            }
        };
        summands.push(Summand { kind, offset, free_dim });
        offset += free_dim;
        if let Some(b) = basis {
            bases.push(b);
        }
    }
    let basis = if with_basis {
        let b = block_diagonal(field, &bases);
        Some(match sel {
            ComplexSelection::Ass if q >= 1 => restrict_to_kernel(field, b, &*dc.delta_h(0, q, true)?)?,
            ComplexSelection::Tens if q >= 1 => restrict_to_kernel(field, b, &*dc.delta_v(q - 1, 1, true)?)?,
            ComplexSelection::PentRestricted => restrict_to_kernel(field, b, &*dc.phi(q)?)?,
            _ => b,
        })
    } else {
        None
    };
    Ok(Layer { degree: q, summands, free_dim: offset, basis })
}

fn block(dc: &DefComplex, sel: ComplexSelection, src: SummandKind, dst: SummandKind) -> Result<Option<SparseMatrix>> {
    use SummandKind::*;
    let special = sel.special();
    let neg = |m: &SparseMatrix| m.scale(&-dc.gray().field().one());
    Ok(match (src, dst) {
        (Bicomplex { m, n }, Bicomplex { m: m1, n: n1 }) if m1 == m && n1 == n + 1 => Some((*dc.delta_v(m, n, special)?).clone()),
        (Bicomplex { m, n }, Bicomplex { m: m1, n: n1 }) if m1 == m + 1 && n1 == n => {
            let d = dc.delta_h(m, n, special)?;
            let signed = matches!(sel, ComplexSelection::TensAss | ComplexSelection::Unit) && n % 2 == 1;
            Some(if signed { neg(&d) } else { (*d).clone() })
        }
        (Pent { k }, Bicomplex { m: 0, n }) if n == k && sel == ComplexSelection::Unit => Some((*dc.phi(k)?).clone()),
        (Pent { k }, Pent { k: k1 }) if k1 == k + 1 => {
            let d = dc.delta_pent(k)?;
            Some(if sel == ComplexSelection::Unit { neg(&d) } else { (*d).clone() })
        }
        _ => None,
    })
}

/// Assembles the selected complex in degrees `degrees` (clamped below at
/// the complex's first degree) and asserts that consecutive differentials
/// compose to zero.
pub fn assemble_complex(dc: &DefComplex, sel: ComplexSelection, degrees: RangeInclusive<usize>) -> Result<AssembledComplex> {
    let lo = (*degrees.start()).max(sel.min_degree());
    let hi = *degrees.end();
    if hi > dc.max_degree() {
        return Err(Error::ResourceCap(format!("degree {hi} exceeds the cap {}", dc.max_degree())));
    }
    if hi < lo {
        return Err(Error::Precondition(format!("empty degree range {lo}..={hi} for {sel}")));
    }
    let field = dc.gray().field();
    let layers: Vec<Layer> = (lo..=hi + 1).map(|q| layer(dc, sel, q, q <= hi)).collect::<Result<_>>()?;
    let mut deltas = Vec::with_capacity(hi - lo + 1);
    for q in lo..=hi {
        let (from, to) = (&layers[q - lo], &layers[q + 1 - lo]);
        let mut placed = Vec::new();
        for (j, s) in from.summands.iter().enumerate() {
            for (i, t) in to.summands.iter().enumerate() {
                if let Some(m) = block(dc, sel, s.kind, t.kind)? {
                    placed.push((i, j, m));
                }
            }
        }
        let rows: Vec<usize> = to.summands.iter().map(|s| s.free_dim).collect();
        let cols: Vec<usize> = from.summands.iter().map(|s| s.free_dim).collect();
        deltas.push(SparseMatrix::from_blocks(field, &rows, &cols, &placed));
    }
    let cx = AssembledComplex { selection: sel, field, lo, hi, layers, deltas };
    cx.check_squares()?;
    Ok(cx)
}

/// `H^q` of the selected complex.
pub fn cohomology(dc: &DefComplex, sel: ComplexSelection, q: usize, with_representatives: bool) -> Result<Cohomology> {
    let lo = q.saturating_sub(1).max(sel.min_degree());
    if q < sel.min_degree() {
        return Err(Error::Precondition(format!("{sel} starts in degree {}", sel.min_degree())));
    }
    assemble_complex(dc, sel, lo..=q)?.cohomology(q, with_representatives)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::examples::{group_model, trivial_model, GroupModelSpec};

    fn sign(field: Field) -> DefComplex {
        DefComplex::new(Arc::new(group_model(&GroupModelSpec::sign(field, 2)).unwrap()))
    }

    #[test]
    fn selections_round_trip_through_their_keys() {
        for sel in ComplexSelection::ALL {
            assert_eq!(sel.key().parse::<ComplexSelection>().unwrap(), sel);
        }
        assert!("bogus".parse::<ComplexSelection>().is_err());
    }

    #[test]
    fn unit_layout_places_pent_after_the_first_column() {
        let d = sign(Field::prime(3).unwrap());
        let cx = assemble_complex(&d, ComplexSelection::Unit, 1..=1).unwrap();
        let kinds: Vec<SummandKind> = cx.layer(2).unwrap().summands.iter().map(|s| s.kind).collect();
        assert_eq!(
            kinds,
            vec![SummandKind::Bicomplex { m: 0, n: 2 }, SummandKind::Pent { k: 3 }, SummandKind::Bicomplex { m: 1, n: 1 }]
        );
    }

    #[test]
    fn all_selections_square_to_zero_in_low_degrees() {
        let d = sign(Field::prime(3).unwrap());
        for sel in ComplexSelection::ALL {
            assemble_complex(&d, sel, 0..=2).unwrap_or_else(|e| panic!("{sel}: {e}"));
        }
    }

    #[test]
    fn trivial_model_pent_general_cohomology_vanishes() {
        // δ_pent alternates between the identity and zero on a single object.
        let d = DefComplex::new(Arc::new(trivial_model(Field::Rational)));
        for q in 0..=3 {
            assert_eq!(cohomology(&d, ComplexSelection::PentGeneral, q, false).unwrap().betti, 0, "degree {q}");
        }
    }

    #[test]
    fn degrees_above_the_cap_are_refused() {
        let d = sign(Field::Rational);
        assert!(matches!(assemble_complex(&d, ComplexSelection::Unit, 1..=4), Err(Error::ResourceCap(_))));
    }
}
