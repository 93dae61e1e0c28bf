//! Gluing across a partition: the vanishing-on-`B` construction and its
//! inductive use for finite unions.

use std::sync::Arc;

use serde::Serialize;

use super::{ExtendedFunction, Node};
use crate::error::{Error, Result};
use crate::geometry::{dist_to_cells, Cell1D};
use crate::lipschitz::{require_one_lipschitz, FiniteFunction};
use crate::valued_field::{CutValue, FieldElement, Point};

/// A set given by finitely many points or a union of line cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "members", rename_all = "kebab-case")]
pub enum Region {
    Points(Vec<Point>),
    Cells(Vec<Cell1D>),
}

impl Region {
    pub fn is_empty(&self) -> bool {
        match self {
            Region::Points(p) => p.is_empty(),
            Region::Cells(c) => c.is_empty(),
        }
    }

    /// `inf |x − a|` as a cut, `None` for the empty set.
    pub fn dist_cut(&self, x: &Point) -> Option<CutValue> {
        match self {
            Region::Points(p) => p.iter().map(|a| a.dist(x)).min().map(CutValue::attained),
            Region::Cells(c) if c.is_empty() => None,
            Region::Cells(c) => Some(dist_to_cells(x.coord(0), c).expect("same backend")),
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        match self {
            Region::Points(p) => p.contains(x),
            Region::Cells(c) => c.iter().any(|c| c.contains(x.coord(0))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GlueConditions {
    /// every `b` has an `a` strictly closer to `x`
    pub one: bool,
    /// every `a` has a `b` strictly closer to `x`
    pub two: bool,
    pub three: bool,
}

/// `∀ p ∈ P ∃ q ∈ Q: |x − q| < |x − p|`, from the two infimum cuts.
fn beaten(q: Option<CutValue>, p: Option<CutValue>) -> bool {
    match (q, p) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(q), Some(p)) => q.norm < p.norm || (q.norm == p.norm && !p.attained),
    }
}

/// The three conditions, evaluated through distance cuts.
pub fn glue_conditions(a: &Region, b: &Region, x: &Point) -> GlueConditions {
    let (da, db) = (a.dist_cut(x), b.dist_cut(x));
    let one = beaten(da, db);
    let two = beaten(db, da);
    GlueConditions {
        one,
        two,
        three: !(one || two),
    }
}

/// The same conditions by literal quantification over finite sets.
pub fn glue_conditions_pointwise(a: &[Point], b: &[Point], x: &Point) -> GlueConditions {
    let one = b.iter().all(|q| a.iter().any(|p| p.dist(x) < q.dist(x)));
    let two = a.iter().all(|p| b.iter().any(|q| q.dist(x) < p.dist(x)));
    GlueConditions {
        one,
        two,
        three: !(one || two),
    }
}

/// `G = F` where (1) holds and (2) fails, `G = 0` elsewhere.
pub fn glue_vanishing(a: Region, b: Region, f: ExtendedFunction) -> ExtendedFunction {
    let (dim, field) = (f.dim, f.field);
    ExtendedFunction::new(
        dim,
        field,
        "glued to vanish on B",
        Node::Glue {
            a,
            b,
            inner: Arc::new(f),
        },
    )
}

/// Checked finite form: `fa` on `A`, zero on `b`, `F = extender(fa)`.
pub fn glue_vanishing_finite(
    fa: &FiniteFunction,
    b: &[Point],
    extender: &dyn Fn(&FiniteFunction) -> Result<ExtendedFunction>,
) -> Result<ExtendedFunction> {
    let field = fa
        .field()
        .or_else(|| b.first().map(Point::field))
        .ok_or(Error::EmptyInput("glue data"))?;
    let zero = FieldElement::zero(field);
    let mut all: Vec<(Point, FieldElement)> = fa.entries().to_vec();
    for p in b {
        match fa.get(p) {
            Some(v) if !v.is_zero() => {
                return Err(Error::Precondition(format!("f does not vanish at {p} in B (value {v})")))
            }
            Some(_) => {}
            None => all.push((p.clone(), zero.clone())),
        }
    }
    require_one_lipschitz(&FiniteFunction::new(fa.dim(), all)?)?;
    if fa.is_empty() {
        return Ok(ExtendedFunction::zero(fa.dim(), field));
    }
    let big_f = extender(fa)?;
    Ok(glue_vanishing(
        Region::Points(fa.points().cloned().collect()),
        Region::Points(b.to_vec()),
        big_f,
    ))
}

/// Union of the parts as one finite function; shared points must agree.
fn union(parts: &[FiniteFunction]) -> Result<FiniteFunction> {
    let n = parts[0].dim();
    let mut entries: Vec<(Point, FieldElement)> = Vec::new();
    for part in parts {
        for (x, v) in part.entries() {
            match entries.iter().find(|(y, _)| y == x) {
                Some((_, w)) if w != v => return Err(Error::DuplicatePoint(x.to_string())),
                Some(_) => {}
                None => entries.push((x.clone(), v.clone())),
            }
        }
    }
    FiniteFunction::new(n, entries)
}

/// Extends `f|A₂ ∪ … ∪ A_s` recursively to `F₂`, glues `f − F₂` (which
/// vanishes on the rest) from `A₁`, and returns `F₁ + F₂`.
pub fn glue_union(
    parts: &[FiniteFunction],
    extender: &dyn Fn(&FiniteFunction) -> Result<ExtendedFunction>,
) -> Result<ExtendedFunction> {
    if parts.is_empty() {
        return Err(Error::EmptyInput("partition"));
    }
    let all = union(parts)?;
    require_one_lipschitz(&all)?;
    if parts.len() == 1 {
        return extender(&parts[0]);
    }
    let f2 = glue_union(&parts[1..], extender)?;
    let rest = union(&parts[1..])?;
    let g1 = parts[0].map_values(|x, v| v - &f2.eval(x));
    let rest_points: Vec<Point> = rest.points().cloned().collect();
    let f1 = glue_vanishing_finite(&g1, &rest_points, extender)?;
    let mut out = ExtendedFunction::sum(f1, f2)?;
    out.provenance = format!("partition gluing of {} parts", parts.len());
    Ok(out)
}
