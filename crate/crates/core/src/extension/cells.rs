//! Extension of a risometric piecewise-affine map on finitely many line
//! cells: the pieces on `C`, the transported skeleton map on `S(C)`, and the
//! average over the nearest skeleton points elsewhere.

use std::sync::Arc;

use serde::Serialize;

use super::{average, nearest, ExtendedFunction, Node};
use crate::error::{Error, Result};
use crate::lipschitz::{AffinePiece, PiecewiseAffineMap1D};
use crate::skeleton::{transport_skeleton, Skeleton, Transport};
use crate::valued_field::{FieldElement, Point};

#[derive(Clone, Debug, Serialize)]
pub struct CellRisometryExtension {
    pub pieces: Vec<AffinePiece>,
    /// `f_s`: source skeleton point ↦ image skeleton point.
    pub skeleton_map: Vec<(FieldElement, FieldElement)>,
    #[serde(skip)]
    pub transport: Transport,
}

impl CellRisometryExtension {
    pub fn skeleton(&self) -> &Skeleton {
        &self.transport.source
    }

    fn on_cells(&self, x: &FieldElement) -> Option<FieldElement> {
        self.pieces.iter().find(|p| p.cell.contains(x)).map(|p| p.eval(x))
    }

    fn on_skeleton(&self, x: &FieldElement) -> Option<&FieldElement> {
        self.skeleton_map.iter().find(|(s, _)| s == x).map(|(_, v)| v)
    }

    /// `f̃` on `C ∪ S(C)`.
    pub fn f_tilde(&self, x: &FieldElement) -> Option<FieldElement> {
        self.on_cells(x).or_else(|| self.on_skeleton(x).cloned())
    }

    /// `g(x)`: average of `f_s` over the skeleton points nearest to `x`.
    pub fn skeleton_average(&self, x: &FieldElement, warn: &mut bool) -> FieldElement {
        let idx = nearest(self.skeleton_map.iter().map(|(s, _)| s), |s| s.dist(x));
        average(idx.iter().map(|&k| &self.skeleton_map[k].1), warn)
    }

    /// `f̃` on `C ∪ S(C)`, the skeleton average elsewhere.
    pub fn eval_direct(&self, x: &FieldElement, warn: &mut bool) -> FieldElement {
        match self.f_tilde(x) {
            Some(v) => v,
            None => self.skeleton_average(x, warn),
        }
    }

    /// `g + h`, where `h` is `f̃ − g` on `C ∪ S(C)` extended by zero.
    pub fn eval_split(&self, x: &FieldElement, warn: &mut bool) -> FieldElement {
        let g = self.skeleton_average(x, warn);
        let h = match self.f_tilde(x) {
            Some(v) => &v - &g,
            None => FieldElement::zero(x.field()),
        };
        &g + &h
    }
}

/// Requires risometric pieces on pairwise disjoint cells (the latter is
/// enforced by [`PiecewiseAffineMap1D::new`]).
pub fn extend_cell_risometry_line(map: &PiecewiseAffineMap1D) -> Result<ExtendedFunction> {
    if map.pieces.is_empty() {
        return Err(Error::EmptyInput("piecewise map"));
    }
    if let Err(k) = map.risometry_check() {
        return Err(Error::NotRisometry(format!(
            "piece {k} has slope {} outside 1 + M",
            map.pieces[k].slope
        )));
    }
    crate::skeleton::check_disjoint(&map.pieces.iter().map(|p| p.cell.clone()).collect::<Vec<_>>())?;
    let cells: Vec<_> = map.pieces.iter().map(|p| p.cell.clone()).collect();
    let maps: Vec<_> = map.pieces.iter().map(|p| (p.slope.clone(), p.intercept.clone())).collect();
    let transport = transport_skeleton(&cells, &maps)?;
    let field = cells[0].field();
    let data = CellRisometryExtension {
        pieces: map.pieces.clone(),
        skeleton_map: transport.point_map.clone(),
        transport,
    };
    Ok(ExtendedFunction::new(
        1,
        field,
        "nearest-skeleton average around risometric pieces",
        Node::CellRisometry(Arc::new(data)),
    ))
}

impl ExtendedFunction {
    /// The split evaluation path of a cell-risometry extension, if this is one.
    pub fn eval_split(&self, x: &Point) -> Option<FieldElement> {
        match &self.node {
            Node::CellRisometry(c) => Some(c.eval_split(x.coord(0), &mut false)),
            _ => None,
        }
    }

    pub fn cell_risometry(&self) -> Option<&CellRisometryExtension> {
        match &self.node {
            Node::CellRisometry(c) => Some(c),
            _ => None,
        }
    }
}
