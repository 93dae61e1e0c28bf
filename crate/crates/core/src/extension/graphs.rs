//! Finite families of graphs over line cells in the plane: origins, the
//! reduction to values vanishing at the origins, and the fiberwise formula
//! `F(x) = ω(f_{x₁})(x₂)` over the base cells, `0` off them.

use std::sync::Arc;

use serde::Serialize;

use super::{average, nearest, ExtendedFunction, Node};
use crate::error::{Error, Result};
use crate::geometry::Cell1D;
use crate::lipschitz::{require_one_lipschitz, FiniteFunction};
use crate::skeleton::{build_skeleton, check_disjoint, Skeleton};
use crate::valued_field::{integer_average, FieldDescriptor, FieldElement, NormValue, Point};

/// `(u, v) ↦ slope·u + intercept − correction(u, v)`.
#[derive(Clone, Debug, Serialize)]
pub struct ValueMap {
    pub slope: FieldElement,
    pub intercept: FieldElement,
    pub correction: Option<Arc<ExtendedFunction>>,
}

impl ValueMap {
    pub fn affine(slope: FieldElement, intercept: FieldElement) -> Self {
        ValueMap {
            slope,
            intercept,
            correction: None,
        }
    }

    fn eval(&self, u: &FieldElement, v: &FieldElement, warn: &mut bool) -> FieldElement {
        let base = &(&self.slope * u) + &self.intercept;
        match &self.correction {
            None => base,
            Some(g) => {
                let p = Point::new(vec![u.clone(), v.clone()]).expect("plane point");
                &base - &g.eval_inner(&p, warn)
            }
        }
    }
}

/// The graph of `φ(u) = slope·u + intercept` over one base cell, with values.
#[derive(Clone, Debug, Serialize)]
pub struct Branch {
    pub slope: FieldElement,
    pub intercept: FieldElement,
    pub value: ValueMap,
}

impl Branch {
    pub fn phi(&self, u: &FieldElement) -> FieldElement {
        &(&self.slope * u) + &self.intercept
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphFamily {
    pub base_cells: Vec<Cell1D>,
    pub branches: Vec<Vec<Branch>>,
}

impl GraphFamily {
    /// Checks disjoint base cells, 1-Lipschitz branches, and that distinct
    /// branches over a cell never meet.
    pub fn new(base_cells: Vec<Cell1D>, branches: Vec<Vec<Branch>>) -> Result<Self> {
        if base_cells.is_empty() {
            return Err(Error::EmptyInput("graph family"));
        }
        if base_cells.len() != branches.len() {
            return Err(Error::DimensionMismatch {
                expected: base_cells.len(),
                found: branches.len(),
            });
        }
        check_disjoint(&base_cells)?;
        for (xi, (cell, bs)) in base_cells.iter().zip(&branches).enumerate() {
            if bs.is_empty() {
                return Err(Error::Precondition(format!("base cell {xi} has no branch")));
            }
            for (j, b) in bs.iter().enumerate() {
                if b.slope.norm() > NormValue::ONE {
                    return Err(Error::Precondition(format!(
                        "branch {j} over cell {xi} has slope {} of norm > 1",
                        b.slope
                    )));
                }
                for c in &bs[j + 1..] {
                    let ds = &b.slope - &c.slope;
                    let di = &c.intercept - &b.intercept;
                    let meets = if ds.is_zero() {
                        di.is_zero()
                    } else {
                        cell.contains(&(&di / &ds))
                    };
                    if meets {
                        return Err(Error::Precondition(format!("two branches over cell {xi} intersect")));
                    }
                }
            }
        }
        Ok(GraphFamily { base_cells, branches })
    }

    pub fn field(&self) -> FieldDescriptor {
        self.base_cells[0].field()
    }

    pub fn cell_of(&self, u: &FieldElement) -> Option<usize> {
        self.base_cells.iter().position(|c| c.contains(u))
    }

    /// The graph points above `u` with their values.
    pub fn fiber(&self, u: &FieldElement, warn: &mut bool) -> Option<Vec<(FieldElement, FieldElement)>> {
        let xi = self.cell_of(u)?;
        Some(
            self.branches[xi]
                .iter()
                .map(|b| {
                    let v = b.phi(u);
                    let val = b.value.eval(u, &v, warn);
                    (v, val)
                })
                .collect(),
        )
    }

    /// `f(x)` when `x` lies on one of the graphs.
    pub fn value_at(&self, x: &Point) -> Option<FieldElement> {
        let (u, v) = (x.coord(0), x.coord(1));
        self.fiber(u, &mut false)?
            .into_iter()
            .find(|(w, _)| w == v)
            .map(|(_, val)| val)
    }

    fn with_correction(&self, g: &Arc<ExtendedFunction>) -> GraphFamily {
        let branches = self
            .branches
            .iter()
            .map(|bs| {
                bs.iter()
                    .map(|b| Branch {
                        value: ValueMap {
                            correction: Some(g.clone()),
                            ..b.value.clone()
                        },
                        ..b.clone()
                    })
                    .collect()
            })
            .collect();
        GraphFamily {
            base_cells: self.base_cells.clone(),
            branches,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Origins {
    pub skeleton: Skeleton,
    pub points: Vec<Point>,
    /// The value `f̃` assigns to each origin: the image-cell center, averaged
    /// over the graphs through that origin.
    pub centers: Vec<FieldElement>,
    /// Per origin, the value each graph through it proposes.
    #[serde(skip)]
    pub proposals: Vec<Vec<FieldElement>>,
}

/// `O(C) = {(S, φ_j(S))}` for each base cell's skeleton point `S`.
pub fn origins(family: &GraphFamily) -> Result<Origins> {
    let skeleton = build_skeleton(&family.base_cells)?;
    let mut points: Vec<Point> = Vec::new();
    let mut proposals: Vec<Vec<FieldElement>> = Vec::new();
    let mut warn = false;
    for (xi, bs) in family.branches.iter().enumerate() {
        let s = &skeleton.attachments[xi].point;
        for b in bs {
            let v = b.phi(s);
            let val = b.value.eval(s, &v, &mut warn);
            let o = Point::new(vec![s.clone(), v])?;
            match points.iter().position(|p| *p == o) {
                Some(k) => proposals[k].push(val),
                None => {
                    points.push(o);
                    proposals.push(vec![val]);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].canonical_cmp(&points[b]));
    let points: Vec<Point> = order.iter().map(|&k| points[k].clone()).collect();
    let mut proposals: Vec<Vec<FieldElement>> = order.iter().map(|&k| proposals[k].clone()).collect();
    for p in &mut proposals {
        p.sort_by(FieldElement::canonical_cmp);
    }
    let centers = proposals
        .iter()
        .map(|p| integer_average(p.iter()).map(|a| a.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(Origins {
        skeleton,
        points,
        centers,
        proposals,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphExtension {
    pub family: GraphFamily,
}

impl GraphExtension {
    pub(crate) fn eval(&self, x: &Point, warn: &mut bool) -> FieldElement {
        let (u, v) = (x.coord(0), x.coord(1));
        match self.family.fiber(u, warn) {
            None => FieldElement::zero(u.field()),
            Some(fb) => {
                let idx = nearest(fb.iter().map(|(w, _)| w), |w| w.dist(v));
                average(idx.iter().map(|&k| &fb[k].1), warn)
            }
        }
    }
}

/// The fiberwise formula; every graph must vanish at its origin.
pub fn extend_graph_family(family: &GraphFamily) -> Result<ExtendedFunction> {
    let o = origins(family)?;
    for (p, vals) in o.points.iter().zip(&o.proposals) {
        if let Some(v) = vals.iter().find(|v| !v.is_zero()) {
            return Err(Error::NonVanishingAtOrigin {
                point: p.to_string(),
                value: v.to_string(),
            });
        }
    }
    Ok(ExtendedFunction::new(
        2,
        family.field(),
        "fiberwise nearest-point average over graphs",
        Node::Graphs(Arc::new(GraphExtension { family: family.clone() })),
    ))
}

/// Full pipeline: extend the origin values by the ladder to `g`, subtract
/// `g` from every graph value, apply the fiberwise formula, add `g` back.
pub fn extend_graph_family_reduced(family: &GraphFamily) -> Result<ExtendedFunction> {
    let o = origins(family)?;
    let data = FiniteFunction::new(2, o.points.iter().cloned().zip(o.centers.iter().cloned()).collect())?;
    require_one_lipschitz(&data)?;
    let g = Arc::new(super::extend_finite_nd(&data)?);
    let reduced = family.with_correction(&g);
    let f_red = extend_graph_family(&reduced)?;
    let mut out = ExtendedFunction::sum(f_red, (*g).clone())?;
    out.provenance = "graph family: origin ladder plus fiberwise average".into();
    Ok(out)
}
