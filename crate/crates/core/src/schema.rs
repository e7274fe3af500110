//! The on-disk JSON schema (`"schema": "graydeform/v1"`) shared by the
//! generators, hand-written fixtures, the command-line tool and the C ABI.
//!
//! ```json
//! {
//!   "schema": "graydeform/v1",
//!   "field": "rational" | {"prime": 3},
//!   "objects": ["X", ...],
//!   "oneCells": [{"name": "f", "src": 0, "dst": 1, "id": false}, ...],
//!   "compose1": [[g, f, g∘f], ...],
//!   "hom2": [[f, f′, dim], ...],
//!   "unit2": [{"cell": f, "coeffs": ["1", ...]}, ...],
//!   "vcomp": [{"cells": [f, f′, f″], "shape": [a, b, c], "entries": [[i, j, k, "c"], ...]}, ...],
//!   "hcomp": [{"cells": [g, g′, f, f′], "shape": [a, b, c], "entries": [...]}, ...],
//!   "gray": {
//!     "tensorObjects": [x⊗y, ...],
//!     "tensor1": [f⊗g, ...],
//!     "tensor2": [{"cells": [f, f′, g, g′], "shape": [a, b, c], "entries": [...]}, ...],
//!     "tensorator": [{"cells": [f′, g′, f, g], "entries": [[i, "c"], ...]}, ...]
//!   }
//! }
//! ```
//!
//! Scalars are decimal strings `"a"` or `"a/b"`. Indices refer to the
//! `objects` and `oneCells` arrays. `vcomp` constants on `(f, f′, f″)` map
//! `Hom₂(f′,f″) × Hom₂(f,f′) → Hom₂(f,f″)`; `hcomp` constants on
//! `(g, g′, f, f′)` map `Hom₂(g,g′) × Hom₂(f,f′) → Hom₂(g∘f, g′∘f′)`;
//! omitted constant blocks are zero. `tensorObjects` and `tensor1` are
//! row-major square tables. The `gray` section is absent for a bare
//! 2-category. Reading a document over another field reinterprets its
//! literals there; this is meaningful for reducing rational data mod p
//! (prime-field documents store residues).

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::{Field, Scalar};
use crate::gray::{GraySemigroup, GrayTables};
use crate::twocat::{Tensor3, TwoCategory, TwoCategoryBuilder, TwoMorphism};

pub const SCHEMA_VERSION: &str = "graydeform/v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Document {
    pub schema: String,
    pub field: Field,
    pub objects: Vec<String>,
    pub one_cells: Vec<OneCellDoc>,
    pub compose1: Vec<[usize; 3]>,
    pub hom2: Vec<[usize; 3]>,
    pub unit2: Vec<UnitDoc>,
    #[serde(default)]
    pub vcomp: Vec<ConstantsDoc>,
    #[serde(default)]
    pub hcomp: Vec<ConstantsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gray: Option<GrayDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneCellDoc {
    pub name: String,
    pub src: usize,
    pub dst: usize,
    #[serde(default)]
    pub id: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitDoc {
    pub cell: usize,
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsDoc {
    pub cells: Vec<usize>,
    pub shape: [usize; 3],
    pub entries: Vec<(usize, usize, usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffsDoc {
    pub cells: [usize; 4],
    pub entries: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GrayDoc {
    pub tensor_objects: Vec<usize>,
    pub tensor1: Vec<usize>,
    #[serde(default)]
    pub tensor2: Vec<ConstantsDoc>,
    pub tensorator: Vec<CoeffsDoc>,
}

/// A loaded structure: a bare 2-category or a Gray semigroup.
#[derive(Clone, Debug)]
pub enum Structure {
    TwoCategory(Arc<TwoCategory>),
    Gray(Arc<GraySemigroup>),
}

impl Structure {
    pub fn field(&self) -> Field {
        match self {
            Structure::TwoCategory(c) => c.field(),
            Structure::Gray(g) => g.field(),
        }
    }

    pub fn base(&self) -> &Arc<TwoCategory> {
        match self {
            Structure::TwoCategory(c) => c,
            Structure::Gray(g) => g.base(),
        }
    }

    pub fn gray(&self) -> Option<&Arc<GraySemigroup>> {
        match self {
            Structure::Gray(g) => Some(g),
            Structure::TwoCategory(_) => None,
        }
    }
}

/// Parses JSON text into a [`Document`]; syntax errors carry line and column.
pub fn parse_document(text: &str) -> Result<Document> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.schema != SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema '{}' (expected '{SCHEMA_VERSION}')", doc.schema)));
    }
    Ok(doc)
}

/// Parses and builds in one step; `field` overrides the document's field,
/// reinterpreting every scalar literal in it.
pub fn load_structure(text: &str, field: Option<Field>) -> Result<Structure> {
    let doc = parse_document(text)?;
    doc.build(field)
}

fn scalar(field: Field, s: &str) -> Result<Scalar> {
    field.parse(s)
}

fn constants(field: Field, d: &ConstantsDoc) -> Result<Tensor3> {
    let [a, b, c] = d.shape;
    let mut t = Tensor3::zeros(field, a, b, c);
    for (i, j, k, x) in &d.entries {
        if *i >= a || *j >= b || *k >= c {
            return Err(Error::Structural(format!("constant entry ({i},{j},{k}) outside shape {:?} at cells {:?}", d.shape, d.cells)));
        }
        t.set(*i, *j, *k, scalar(field, x)?);
    }
    Ok(t)
}

fn constants_doc(cells: Vec<usize>, t: &Tensor3) -> ConstantsDoc {
    let (a, b, c) = t.dims;
    ConstantsDoc { cells, shape: [a, b, c], entries: t.entries().map(|(i, j, k, x)| (i, j, k, x.to_text())).collect() }
}

fn cells<const N: usize>(d: &ConstantsDoc, nc: usize) -> Result<[usize; N]> {
    let arr: [usize; N] =
        d.cells.as_slice().try_into().map_err(|_| Error::Structural(format!("expected {N} cells in a constants block, got {:?}", d.cells)))?;
    if arr.iter().any(|&f| f >= nc) {
        return Err(Error::Structural(format!("constants block refers to unknown cells {:?}", d.cells)));
    }
    Ok(arr)
}

impl Document {
    /// Builds the structure, checking table shapes (not the axioms).
    pub fn build(&self, field: Option<Field>) -> Result<Structure> {
        let field = field.unwrap_or(self.field);
        let mut b = TwoCategoryBuilder::new(field);
        for o in &self.objects {
            b.add_object(o);
        }
        let no = self.objects.len();
        for c in &self.one_cells {
            if c.src >= no || c.dst >= no {
                return Err(Error::Structural(format!("1-cell {} has endpoints out of range", c.name)));
            }
            let f = b.add_cell(&c.name, c.src, c.dst);
            if c.id {
                if c.src != c.dst {
                    return Err(Error::Structural(format!("identity 1-cell {} is not an endomorphism", c.name)));
                }
                b.set_identity(c.src, f);
            }
        }
        let nc = self.one_cells.len();
        for &[g, f, h] in &self.compose1 {
            if g.max(f).max(h) >= nc {
                return Err(Error::Structural(format!("composition entry [{g},{f},{h}] out of range")));
            }
            b.set_compose(g, f, h);
        }
        for &[f, f1, d] in &self.hom2 {
            b.set_hom_dim(f, f1, d);
        }
        for u in &self.unit2 {
            let coeffs = u.coeffs.iter().map(|s| scalar(field, s)).collect::<Result<_>>()?;
            b.set_unit2(u.cell, coeffs);
        }
        for d in &self.vcomp {
            let [f, f1, f2] = cells::<3>(d, nc)?;
            b.set_vcomp(f, f1, f2, constants(field, d)?);
        }
        for d in &self.hcomp {
            let [g, g1, f, f1] = cells::<4>(d, nc)?;
            b.set_hcomp(g, g1, f, f1, constants(field, d)?);
        }
        let base = Arc::new(b.build()?);
        let Some(gd) = &self.gray else {
            return Ok(Structure::TwoCategory(base));
        };
        let mut tensor2 = HashMap::new();
        for d in &gd.tensor2 {
            let [f, f1, g, g1] = cells::<4>(d, nc)?;
            tensor2.insert((f, f1, g, g1), constants(field, d)?);
        }
        if gd.tensor1.len() != nc * nc || gd.tensor1.iter().any(|&h| h >= nc) {
            return Err(Error::Structural("tensor1 table has the wrong size or unknown cells".into()));
        }
        let mut tensorator = HashMap::new();
        for e in &gd.tensorator {
            let [f1, g1, f, g] = e.cells;
            if f1.max(g1).max(f).max(g) >= nc {
                return Err(Error::Structural(format!("tensorator entry refers to unknown cells {:?}", e.cells)));
            }
            let (Some(ff), Some(gg)) = (base.compose(f1, f), base.compose(g1, g)) else {
                return Err(Error::Structural(format!("tensorator entry {:?} on non-composable cells", e.cells)));
            };
            let src = base.compose(gd.tensor1[f1 * nc + g1], gd.tensor1[f * nc + g]).ok_or_else(|| {
                Error::Structural(format!("tensorator entry {:?}: (f′⊗g′)∘(f⊗g) is not composable", e.cells))
            })?;
            let dst = gd.tensor1[ff * nc + gg];
            let dim = base.dim2(src, dst);
            let mut coeffs = vec![field.zero(); dim];
            for (i, x) in &e.entries {
                if *i >= dim {
                    return Err(Error::Structural(format!("tensorator entry {:?} has coefficient index {i} ≥ {dim}", e.cells)));
                }
                coeffs[*i] = scalar(field, x)?;
            }
            tensorator.insert((f1, g1, f, g), TwoMorphism { src, dst, coeffs });
        }
        let gray = GraySemigroup::new(GrayTables {
            base,
            tensor_objects: gd.tensor_objects.clone(),
            tensor_cells: gd.tensor1.clone(),
            tensor2,
            tensorator,
        })?;
        Ok(Structure::Gray(Arc::new(gray)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

/// The document of a table-backed 2-category.
pub fn two_category_document(c: &TwoCategory) -> Document {
    let b = c.to_builder();
    let nc = b.cell_names.len();
    let mut is_id = vec![false; nc];
    for f in b.identities.iter().flatten() {
        is_id[*f] = true;
    }
    let one_cells = (0..nc)
        .map(|f| OneCellDoc { name: b.cell_names[f].clone(), src: b.cell_src[f], dst: b.cell_dst[f], id: is_id[f] })
        .collect();
    let mut compose1: Vec<[usize; 3]> = b.compose.iter().map(|(&(g, f), &h)| [g, f, h]).collect();
    compose1.sort_unstable();
    let mut hom2: Vec<[usize; 3]> = b.hom_dims.iter().filter(|(_, &d)| d > 0).map(|(&(f, f1), &d)| [f, f1, d]).collect();
    hom2.sort_unstable();
    let mut unit2: Vec<UnitDoc> =
        b.unit2.iter().map(|(&f, u)| UnitDoc { cell: f, coeffs: u.iter().map(Scalar::to_text).collect() }).collect();
    unit2.sort_by_key(|u| u.cell);
    let mut vcomp: Vec<ConstantsDoc> = b.vcomp.iter().map(|(&(f, f1, f2), t)| constants_doc(vec![f, f1, f2], t)).collect();
    vcomp.sort_by(|x, y| x.cells.cmp(&y.cells));
    let mut hcomp: Vec<ConstantsDoc> = b.hcomp.iter().map(|(&(g, g1, f, f1), t)| constants_doc(vec![g, g1, f, f1], t)).collect();
    hcomp.sort_by(|x, y| x.cells.cmp(&y.cells));
    Document {
        schema: SCHEMA_VERSION.to_string(),
        field: c.field(),
        objects: b.object_names.clone(),
        one_cells,
        compose1,
        hom2,
        unit2,
        vcomp,
        hcomp,
        gray: None,
    }
}

/// The document of a Gray semigroup (with its underlying 2-category).
pub fn gray_document(g: &GraySemigroup) -> Document {
    let c = &**g.base();
    let mut doc = two_category_document(c);
    let (no, nc) = (c.n_objects(), c.n_cells());
    let tensor_objects = (0..no * no).map(|i| g.tensor_objects(i / no, i % no)).collect();
    let tensor1 = (0..nc * nc).map(|i| g.tensor_cells(i / nc, i % nc)).collect();
    let mut tensor2 = Vec::new();
    for f in 0..nc {
        for f1 in c.parallel_cells(f) {
            for h in 0..nc {
                for h1 in c.parallel_cells(h) {
                    if let Some(t) = g.tensor2_constants(f, f1, h, h1) {
                        if t.entries().next().is_some() {
                            tensor2.push(constants_doc(vec![f, f1, h, h1], t));
                        }
                    }
                }
            }
        }
    }
    let mut pairs = g.composable_pairs();
    pairs.sort_unstable();
    let tensorator = pairs
        .into_iter()
        .map(|(f1, g1, f, h)| {
            let t = g.tensorator(f1, g1, f, h);
            CoeffsDoc {
                cells: [f1, g1, f, h],
                entries: t.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.to_text())).collect(),
            }
        })
        .collect();
    doc.gray = Some(GrayDoc { tensor_objects, tensor1, tensor2, tensorator });
    doc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{group_model, GroupModelSpec};
    use crate::gray::validate_gray;

    fn sign_doc() -> Document {
        gray_document(&group_model(&GroupModelSpec::sign(Field::prime(3).unwrap(), 2)).unwrap())
    }

    #[test]
    fn gray_documents_round_trip() {
        let doc = sign_doc();
        let text = doc.to_json();
        let back = parse_document(&text).unwrap();
        assert_eq!(back, doc);
        let Structure::Gray(g) = back.build(None).unwrap() else { panic!("expected a Gray semigroup") };
        assert!(validate_gray(&g).unwrap().is_valid());
        assert_eq!(gray_document(&g), doc);
    }

    #[test]
    fn syntax_errors_report_positions() {
        let err = parse_document("{\n  \"schema\": ").unwrap_err();
        assert!(matches!(&err, Error::Parse(m) if m.contains("line 2")), "{err}");
    }

    #[test]
    fn foreign_schema_versions_are_rejected() {
        let mut doc = sign_doc();
        doc.schema = "graydeform/v0".into();
        assert!(matches!(parse_document(&doc.to_json()), Err(Error::Parse(_))));
    }

    #[test]
    fn out_of_range_entries_are_structural_errors() {
        let mut doc = sign_doc();
        doc.gray.as_mut().unwrap().tensorator[0].entries.push((7, "1".into()));
        assert!(matches!(doc.build(None), Err(Error::Structural(_))));
    }

    #[test]
    fn rational_documents_reduce_to_prime_fields() {
        let doc = gray_document(&group_model(&GroupModelSpec::sign(Field::Rational, 2)).unwrap());
        let s = doc.build(Some(Field::prime(3).unwrap())).unwrap();
        assert_eq!(s.field(), Field::prime(3).unwrap());
        assert!(validate_gray(s.gray().unwrap()).unwrap().is_valid());
    }
}
