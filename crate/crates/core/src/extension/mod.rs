//! Extension operators. Every construction returns an [`ExtendedFunction`]: a
//! tree of stored data evaluated by membership tests, nearest-set queries and
//! averages, so `F(x)` is exact and total on `K^n`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lipschitz::FiniteFunction;
use crate::valued_field::{integer_average, FieldDescriptor, FieldElement, NormValue, Point};

mod cells;
mod finite;
mod glue;
mod graphs;

pub use cells::{extend_cell_risometry_line, CellRisometryExtension};
pub use finite::{extend_finite_line, extend_finite_nd, extend_finite_plane_ladder};
pub use glue::{glue_union, glue_vanishing, glue_vanishing_finite, glue_conditions, glue_conditions_pointwise, GlueConditions, Region};
pub use graphs::{extend_graph_family, extend_graph_family_reduced, origins, Branch, GraphFamily, Origins, ValueMap};

/// Value of an extension at a point, with the averaging-hypothesis flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: FieldElement,
    /// Some average divided by an integer of norm > 1 (only possible in
    /// mixed characteristic).
    pub hypothesis_warning: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtendedFunction {
    pub dim: usize,
    pub field: FieldDescriptor,
    pub provenance: String,
    /// A construction-time average already divided by a large integer.
    pub construction_warning: bool,
    pub node: Node,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Node {
    Zero,
    /// Average of the values at the nearest stored points (max norm).
    NearestAverage { points: Vec<Point>, values: Vec<FieldElement> },
    /// `F(u, v)` = average over the nearest `u_i` of `fibers[i](v)`.
    Ladder {
        firsts: Vec<FieldElement>,
        fibers: Vec<ExtendedFunction>,
    },
    /// Plane ladder with line fibers stored as nearest-point data.
    PlaneLadder {
        firsts: Vec<FieldElement>,
        fibers: Vec<Vec<(FieldElement, FieldElement)>>,
    },
    /// `F` where condition (1) holds and (2) fails, `0` otherwise.
    Glue { a: Region, b: Region, inner: Arc<ExtendedFunction> },
    Sum { left: Arc<ExtendedFunction>, right: Arc<ExtendedFunction> },
    CellRisometry(Arc<CellRisometryExtension>),
    Graphs(Arc<graphs::GraphExtension>),
    /// `ε·(G(x) − Σ x_i)`, undoing the risometry reduction.
    Restored {
        inner: Arc<ExtendedFunction>,
        eps: FieldElement,
        axes: Vec<usize>,
    },
    /// `G(εx)/ε`, undoing a dilatation.
    Rescaled { inner: Arc<ExtendedFunction>, eps: FieldElement },
}

/// Indices of the nearest points (max norm) and the common distance.
pub(crate) fn nearest<'a, T: 'a>(
    items: impl IntoIterator<Item = &'a T>,
    dist: impl Fn(&T) -> NormValue,
) -> Vec<usize> {
    let mut best: Option<NormValue> = None;
    let mut out = Vec::new();
    for (k, it) in items.into_iter().enumerate() {
        let d = dist(it);
        match best {
            Some(b) if d > b => {}
            Some(b) if d == b => out.push(k),
            _ => {
                best = Some(d);
                out.clear();
                out.push(k);
            }
        }
    }
    out
}

/// Average with the hypothesis flag folded into `warn`.
pub(crate) fn average<'a>(values: impl IntoIterator<Item = &'a FieldElement>, warn: &mut bool) -> FieldElement {
    let a = integer_average(values).expect("nonempty average");
    *warn |= a.hypothesis_warning;
    a.value
}

impl ExtendedFunction {
    pub(crate) fn new(dim: usize, field: FieldDescriptor, provenance: impl Into<String>, node: Node) -> Self {
        ExtendedFunction {
            dim,
            field,
            provenance: provenance.into(),
            construction_warning: false,
            node,
        }
    }

    pub(crate) fn with_warning(mut self, warn: bool) -> Self {
        self.construction_warning |= warn;
        self
    }

    pub fn zero(dim: usize, field: FieldDescriptor) -> Self {
        ExtendedFunction::new(dim, field, "zero", Node::Zero)
    }

    /// Nearest-point averaging on a finite set in `K^n`.
    pub fn nearest_average(f: &FiniteFunction) -> Result<Self> {
        let field = f.field().ok_or(Error::EmptyInput("finite function"))?;
        let (points, values) = f.entries().iter().cloned().unzip();
        Ok(ExtendedFunction::new(
            f.dim(),
            field,
            "nearest-point average",
            Node::NearestAverage { points, values },
        ))
    }

    pub fn eval(&self, x: &Point) -> FieldElement {
        self.eval_checked(x).expect("evaluation point of the right shape").value
    }

    pub fn eval_checked(&self, x: &Point) -> Result<Evaluation> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        if x.field() != self.field {
            return Err(Error::BackendMismatch {
                left: self.field.to_string(),
                right: x.field().to_string(),
            });
        }
        let mut warn = self.construction_warning;
        let value = self.eval_inner(x, &mut warn);
        Ok(Evaluation {
            value,
            hypothesis_warning: warn,
        })
    }

    pub(crate) fn eval_inner(&self, x: &Point, warn: &mut bool) -> FieldElement {
        *warn |= self.construction_warning;
        match &self.node {
            Node::Zero => FieldElement::zero(self.field),
            Node::NearestAverage { points, values } => {
                let idx = nearest(points, |p| p.dist(x));
                average(idx.iter().map(|&k| &values[k]), warn)
            }
            Node::Ladder { firsts, fibers } => {
                let u = x.coord(0);
                let tail = x.tail();
                let idx = nearest(firsts, |a| a.dist(u));
                let vals: Vec<FieldElement> = idx.iter().map(|&k| fibers[k].eval_inner(&tail, warn)).collect();
                average(&vals, warn)
            }
            Node::PlaneLadder { firsts, fibers } => {
                let (u, v) = (x.coord(0), x.coord(1));
                let idx = nearest(firsts, |a| a.dist(u));
                let vals: Vec<FieldElement> = idx
                    .iter()
                    .map(|&k| finite::omega_line(&fibers[k], v, warn))
                    .collect();
                average(&vals, warn)
            }
            Node::Glue { a, b, inner } => {
                let c = glue::glue_conditions(a, b, x);
                if c.one && !c.two {
                    inner.eval_inner(x, warn)
                } else {
                    FieldElement::zero(self.field)
                }
            }
            Node::Sum { left, right } => &left.eval_inner(x, warn) + &right.eval_inner(x, warn),
            Node::CellRisometry(c) => c.eval_direct(x.coord(0), warn),
            Node::Graphs(g) => g.eval(x, warn),
            Node::Restored { inner, eps, axes } => {
                let g = inner.eval_inner(x, warn);
                crate::lipschitz::restore_value(x, &g, eps, axes)
            }
            Node::Rescaled { inner, eps } => {
                let g = inner.eval_inner(&x.scale(eps), warn);
                &g / eps
            }
        }
    }

    pub fn sum(left: ExtendedFunction, right: ExtendedFunction) -> Result<Self> {
        if left.dim != right.dim {
            return Err(Error::DimensionMismatch {
                expected: left.dim,
                found: right.dim,
            });
        }
        let (dim, field) = (left.dim, left.field);
        Ok(ExtendedFunction::new(
            dim,
            field,
            "sum",
            Node::Sum {
                left: Arc::new(left),
                right: Arc::new(right),
            },
        ))
    }

    /// Wraps an extension of the reduced function `Σ x_i + f/ε`.
    pub fn restored(inner: ExtendedFunction, eps: FieldElement, axes: Vec<usize>) -> Self {
        let (dim, field) = (inner.dim, inner.field);
        ExtendedFunction::new(
            dim,
            field,
            "restored from risometry reduction",
            Node::Restored {
                inner: Arc::new(inner),
                eps,
                axes,
            },
        )
    }

    /// Wraps an extension of the dilated function `εx ↦ εf(x)`.
    pub fn rescaled(inner: ExtendedFunction, eps: FieldElement) -> Result<Self> {
        if eps.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (dim, field) = (inner.dim, inner.field);
        Ok(ExtendedFunction::new(
            dim,
            field,
            "rescaled",
            Node::Rescaled {
                inner: Arc::new(inner),
                eps,
            },
        ))
    }

    /// The extension tabulated on a finite set of points.
    pub fn tabulate(&self, points: &[Point]) -> Result<FiniteFunction> {
        use rayon::prelude::*;
        let entries: Vec<(Point, FieldElement)> = points
            .par_iter()
            .map(|p| (p.clone(), self.eval(p)))
            .collect();
        FiniteFunction::from_samples(self.dim, entries)
    }

    /// Whether `F(x) = f(x)` on every domain point; returns the first miss.
    pub fn first_disagreement(&self, f: &FiniteFunction) -> Option<(Point, FieldElement, FieldElement)> {
        f.entries().iter().find_map(|(x, v)| {
            let y = self.eval(x);
            (y != *v).then(|| (x.clone(), v.clone(), y))
        })
    }
}

/// Reduce by `ε` (with `|ε| > 1`) on the given axes, extend the reduced
/// 1-Lipschitz data with `extender`, and restore: the result extends `f` and
/// is `|ε|`-Lipschitz.
pub fn extend_via_reduction(
    f: &FiniteFunction,
    eps_elt: &FieldElement,
    axes: &[usize],
    extender: &dyn Fn(&FiniteFunction) -> Result<ExtendedFunction>,
) -> Result<ExtendedFunction> {
    let g = crate::lipschitz::reduce_to_risometry(f, eps_elt.norm(), eps_elt, axes)?;
    let big_g = extender(&g)?;
    let mut out = ExtendedFunction::restored(big_g, eps_elt.clone(), axes.to_vec());
    out.provenance = format!("reduce by {eps_elt}, extend, restore");
    Ok(out)
}
