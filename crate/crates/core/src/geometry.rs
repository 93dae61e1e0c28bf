//! Balls, RV boxes, cells, distance cuts, and the coordinate helpers used by
//! the higher-dimensional constructions.

use std::cmp::Ordering;

use num_rational::{BigRational, Rational64};

use crate::error::{Error, Result};
use crate::valued_field::{CutValue, FieldDescriptor, FieldElement, NormValue, Point, RvValue};

/// In a discrete value group an open bound can be closed up:
/// `|y| > Theta(e)` is `|y| >= Theta(e-1)`.
pub fn normalize_lower(field: FieldDescriptor, cut: CutValue) -> CutValue {
    match cut {
        CutValue {
            norm: NormValue::Theta(e),
            attained: false,
        } if field.is_discrete() => CutValue::attained(NormValue::Theta(e - 1)),
        CutValue {
            norm: NormValue::Zero,
            ..
        } => CutValue::approached(NormValue::Zero),
        c => c,
    }
}

/// Upper endpoint version: `|y| < Theta(e)` is `|y| <= Theta(e+1)`.
pub fn normalize_upper(field: FieldDescriptor, cut: CutValue) -> CutValue {
    match cut {
        CutValue {
            norm: NormValue::Theta(e),
            attained: false,
        } if field.is_discrete() => CutValue::attained(NormValue::Theta(e + 1)),
        c => c,
    }
}

/// A subset of RV: a single value, or all nonzero values whose norm lies
/// between two endpoints (`attained` = endpoint included), optionally with a
/// fixed leading unit. `upper == None` means unbounded above.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RvBox {
    Exact(RvValue),
    Annulus {
        lower: CutValue,
        upper: Option<CutValue>,
        unit: Option<BigRational>,
    },
}

impl RvBox {
    pub fn exact_of(x: &FieldElement) -> RvBox {
        RvBox::Exact(x.rv())
    }

    /// `{ y : |y| = r }`
    pub fn sphere(r: NormValue) -> RvBox {
        RvBox::Annulus {
            lower: CutValue::attained(r),
            upper: Some(CutValue::attained(r)),
            unit: None,
        }
    }

    /// Norm interval membership, ignoring units.
    fn norm_allowed(&self, n: NormValue) -> bool {
        match self {
            RvBox::Exact(rv) => rv.norm() == n,
            RvBox::Annulus { lower, upper, .. } => {
                if n.is_zero() {
                    return false;
                }
                let lo_ok = if lower.attained { n >= lower.norm } else { n > lower.norm };
                let hi_ok = match upper {
                    None => true,
                    Some(u) if u.attained => n <= u.norm,
                    Some(u) => n < u.norm,
                };
                lo_ok && hi_ok
            }
        }
    }

    /// Does the (already centered) element `y` lie in the box?
    pub fn contains(&self, y: &FieldElement) -> bool {
        match self {
            RvBox::Exact(rv) => &y.rv() == rv,
            RvBox::Annulus { unit, .. } => {
                if !self.norm_allowed(y.norm()) {
                    return false;
                }
                match unit {
                    None => true,
                    Some(u) => y.rv().unit() == Some(u),
                }
            }
        }
    }

    /// Closed-up endpoints `(lower, upper)` for the given backend.
    pub fn norm_interval(&self, field: FieldDescriptor) -> (CutValue, Option<CutValue>) {
        match self {
            RvBox::Exact(rv) => (CutValue::attained(rv.norm()), Some(CutValue::attained(rv.norm()))),
            RvBox::Annulus { lower, upper, .. } => (
                normalize_lower(field, *lower),
                upper.map(|u| normalize_upper(field, u)),
            ),
        }
    }

    pub fn is_empty(&self, field: FieldDescriptor) -> bool {
        match self {
            RvBox::Exact(_) => false,
            RvBox::Annulus { .. } => {
                let (lo, hi) = self.norm_interval(field);
                !interval_nonempty(lo, hi)
            }
        }
    }

    /// Infimum of `|y|` over the box, as a cut.
    pub fn rho(&self, field: FieldDescriptor) -> CutValue {
        match self {
            RvBox::Exact(rv) => CutValue::attained(rv.norm()),
            RvBox::Annulus { lower, .. } => normalize_lower(field, *lower),
        }
    }

    /// Largest norm in the box, if bounded and attained.
    pub fn max_norm(&self, field: FieldDescriptor) -> Option<NormValue> {
        match self.norm_interval(field).1 {
            Some(c) if c.attained => Some(c.norm),
            _ => None,
        }
    }

    pub fn unit(&self) -> Option<&BigRational> {
        match self {
            RvBox::Exact(rv) => rv.unit(),
            RvBox::Annulus { unit, .. } => unit.as_ref(),
        }
    }

    /// Validates and puts units into canonical residue form.
    pub fn normalized(&self, field: FieldDescriptor) -> Result<RvBox> {
        let b = match self {
            RvBox::Exact(RvValue::Zero) => self.clone(),
            RvBox::Exact(RvValue::Unit { exponent, unit }) => {
                if !field.exponent_in_group(*exponent) {
                    return Err(Error::ExponentNotInGroup {
                        exponent: exponent.to_string(),
                        field: field.to_string(),
                    });
                }
                RvBox::Exact(RvValue::new(*exponent, field.normalize_unit(unit)?))
            }
            RvBox::Annulus { lower, upper, unit } => {
                if let Some(u) = upper {
                    if u.norm.is_zero() {
                        return Err(Error::Precondition("annulus upper bound is zero".into()));
                    }
                }
                let unit = unit.as_ref().map(|u| field.normalize_unit(u)).transpose()?;
                RvBox::Annulus {
                    lower: *lower,
                    upper: *upper,
                    unit,
                }
            }
        };
        if b.is_empty(field) {
            return Err(Error::Precondition(format!("empty box {b:?}")));
        }
        Ok(b)
    }

    /// The intersection as a box, or `None` when disjoint.
    pub fn intersect(&self, other: &RvBox, field: FieldDescriptor) -> Option<RvBox> {
        match (self, other) {
            (RvBox::Exact(a), RvBox::Exact(b)) => (a == b).then(|| self.clone()),
            (RvBox::Exact(rv), ann @ RvBox::Annulus { .. })
            | (ann @ RvBox::Annulus { .. }, RvBox::Exact(rv)) => {
                let rep = field.rv_representative(rv).ok()?;
                ann.contains(&rep).then(|| RvBox::Exact(rv.clone()))
            }
            (RvBox::Annulus { unit: u1, .. }, RvBox::Annulus { unit: u2, .. }) => {
                let unit = match (u1, u2) {
                    (Some(a), Some(b)) if a != b => return None,
                    (Some(a), _) | (_, Some(a)) => Some(a.clone()),
                    (None, None) => None,
                };
                let (l1, h1) = self.norm_interval(field);
                let (l2, h2) = other.norm_interval(field);
                let lower = max_lower(l1, l2);
                let upper = match (h1, h2) {
                    (None, h) | (h, None) => h,
                    (Some(a), Some(b)) => Some(min_upper(a, b)),
                };
                interval_nonempty(lower, upper).then_some(RvBox::Annulus { lower, upper, unit })
            }
        }
    }

    /// Restriction to norms `> d` (`above`) or `< d` (`!above`).
    pub fn restrict_norm(&self, d: NormValue, above: bool, field: FieldDescriptor) -> Option<RvBox> {
        if above {
            let a = RvBox::Annulus {
                lower: CutValue::approached(d),
                upper: None,
                unit: None,
            };
            self.intersect(&a, field)
        } else {
            match self {
                RvBox::Exact(rv) => (rv.norm() < d).then(|| self.clone()),
                RvBox::Annulus { .. } => {
                    if d.is_zero() {
                        return None;
                    }
                    let a = RvBox::Annulus {
                        lower: CutValue::approached(NormValue::Zero),
                        upper: Some(CutValue::approached(d)),
                        unit: None,
                    };
                    self.intersect(&a, field)
                }
            }
        }
    }

    /// Some element whose rv lies in the box.
    pub fn some_member(&self, field: FieldDescriptor) -> FieldElement {
        match self {
            RvBox::Exact(rv) => field.rv_representative(rv).expect("validated box"),
            RvBox::Annulus { unit, .. } => {
                let (lo, hi) = self.norm_interval(field);
                let one = Rational64::from_integer(1);
                let e = match (lo.norm, lo.attained, hi) {
                    (NormValue::Theta(e), true, _) => e,
                    (_, _, Some(h)) if h.attained => h.norm.exponent().unwrap(),
                    (NormValue::Theta(e), false, Some(h)) => (e + h.norm.exponent().unwrap()) / 2,
                    (NormValue::Theta(e), false, None) => e - one,
                    (NormValue::Zero, _, Some(h)) => h.norm.exponent().unwrap() + one,
                    (NormValue::Zero, _, None) => Rational64::from_integer(0),
                };
                let u = unit.clone().unwrap_or_else(|| BigRational::from_integer(1.into()));
                FieldElement::monomial(field, u, e).expect("exponent in group")
            }
        }
    }

    /// Whether two boxes share an RV value.
    pub fn intersects(&self, other: &RvBox, field: FieldDescriptor) -> bool {
        match (self, other) {
            (RvBox::Exact(a), RvBox::Exact(b)) => a == b,
            (RvBox::Exact(rv), ann @ RvBox::Annulus { .. })
            | (ann @ RvBox::Annulus { .. }, RvBox::Exact(rv)) => match field.rv_representative(rv) {
                Ok(rep) => ann.contains(&rep),
                Err(_) => false,
            },
            (RvBox::Annulus { unit: u1, .. }, RvBox::Annulus { unit: u2, .. }) => {
                if let (Some(a), Some(b)) = (u1, u2) {
                    if a != b {
                        return false;
                    }
                }
                let (l1, h1) = self.norm_interval(field);
                let (l2, h2) = other.norm_interval(field);
                let lo = max_lower(l1, l2);
                let hi = match (h1, h2) {
                    (None, h) | (h, None) => h,
                    (Some(a), Some(b)) => Some(min_upper(a, b)),
                };
                interval_nonempty(lo, hi)
            }
        }
    }
}

fn max_lower(a: CutValue, b: CutValue) -> CutValue {
    // as lower bounds, a strict endpoint is tighter than an inclusive one
    a.max(b)
}

fn min_upper(a: CutValue, b: CutValue) -> CutValue {
    match a.norm.cmp(&b.norm) {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => CutValue {
            norm: a.norm,
            attained: a.attained && b.attained,
        },
    }
}

fn interval_nonempty(lo: CutValue, hi: Option<CutValue>) -> bool {
    match hi {
        None => true,
        Some(h) => {
            if h.norm.is_zero() {
                return false;
            }
            lo.norm < h.norm || (lo.norm == h.norm && lo.attained && h.attained)
        }
    }
}

/// `{ x : rv(x − center) ∈ ⋃ boxes }`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell1D {
    pub center: FieldElement,
    pub boxes: Vec<RvBox>,
}

impl Cell1D {
    pub fn new(center: FieldElement, boxes: Vec<RvBox>) -> Result<Self> {
        if boxes.is_empty() {
            return Err(Error::EmptyInput("cell boxes"));
        }
        let field = center.field();
        let boxes = boxes
            .iter()
            .map(|b| b.normalized(field))
            .collect::<Result<Vec<_>>>()?;
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                if boxes[i].intersects(&boxes[j], field) {
                    return Err(Error::Precondition(format!(
                        "boxes {i} and {j} of a cell overlap"
                    )));
                }
            }
        }
        Ok(Cell1D { center, boxes })
    }

    pub fn field(&self) -> FieldDescriptor {
        self.center.field()
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        let y = x - &self.center;
        self.boxes.iter().any(|b| b.contains(&y))
    }

    pub fn contains_point(&self, x: &Point) -> Result<bool> {
        if x.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: x.dim(),
            });
        }
        Ok(self.contains(x.coord(0)))
    }

    pub fn rho(&self) -> CutValue {
        let f = self.field();
        self.boxes.iter().map(|b| b.rho(f)).min().expect("nonempty")
    }

    /// Infimum of `|x − y|` over members `y`, as a cut.
    pub fn dist_cut(&self, x: &FieldElement) -> CutValue {
        let w = x - &self.center;
        let f = self.field();
        let nw = w.norm();
        let mut best: Option<CutValue> = None;
        for b in &self.boxes {
            if b.contains(&w) {
                return CutValue::attained(NormValue::Zero);
            }
            let c = match b {
                RvBox::Exact(RvValue::Zero) => CutValue::attained(nw),
                RvBox::Exact(rv) => {
                    let rep = f.rv_representative(rv).expect("validated box");
                    CutValue::attained(w.dist(&rep))
                }
                RvBox::Annulus { .. } => {
                    let (lo, _) = b.norm_interval(f);
                    let some_below = if lo.attained { lo.norm <= nw } else { lo.norm < nw };
                    if some_below && !nw.is_zero() {
                        CutValue::attained(nw)
                    } else {
                        lo
                    }
                }
            };
            best = Some(best.map_or(c, |x| x.min(c)));
        }
        best.expect("nonempty")
    }

    /// Same member set, described relative to a different center `s`.
    ///
    /// Boxes whose norms all exceed `|c − s|` are unchanged; an rv slice at
    /// norm exactly `|c − s|` is re-expressed through `rv(y + (c − s))`.
    /// Fails when that slice would need more than a single-unit description.
    pub fn recentered(&self, s: &FieldElement) -> std::result::Result<Cell1D, String> {
        let f = self.field();
        let delta = &self.center - s;
        let d = delta.norm();
        if d.is_zero() {
            return Ok(self.clone());
        }
        let mut out = Vec::new();
        for b in &self.boxes {
            let (lo, _) = b.norm_interval(f);
            let strictly_above = if lo.attained { lo.norm > d } else { lo.norm >= d };
            if strictly_above {
                out.push(b.clone());
                continue;
            }
            if lo.norm < d {
                return Err("cell reaches below the displacement".into());
            }
            // the box meets the sphere |y| = d
            let (unit, rest) = match b {
                RvBox::Exact(rv) => (rv.unit().cloned().expect("nonzero rv"), None),
                RvBox::Annulus { upper, unit, .. } => {
                    let u = unit.clone().ok_or_else(|| {
                        "slice at the displacement norm has no unit constraint".to_string()
                    })?;
                    let rest = RvBox::Annulus {
                        lower: CutValue::approached(d),
                        upper: *upper,
                        unit: Some(u.clone()),
                    };
                    (u, (!rest.is_empty(f)).then_some(rest))
                }
            };
            let rep = FieldElement::monomial(f, unit, d.exponent().expect("nonzero"))
                .map_err(|e| e.to_string())?;
            let moved = &rep + &delta;
            if moved.norm() < d {
                return Err("an rv slice collapses onto the new center".into());
            }
            out.push(RvBox::Exact(moved.rv()));
            out.extend(rest);
        }
        Cell1D::new(s.clone(), out).map_err(|e| e.to_string())
    }
}

/// `c(x_{<i}) = Σ a_j x_j + b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineCenter {
    pub coefficients: Vec<FieldElement>,
    pub constant: FieldElement,
}

impl AffineCenter {
    /// Rejects coefficients of norm > 1.
    pub fn new(coefficients: Vec<FieldElement>, constant: FieldElement) -> Result<Self> {
        for (j, a) in coefficients.iter().enumerate() {
            if a.field() != constant.field() {
                return Err(Error::BackendMismatch {
                    left: a.field().to_string(),
                    right: constant.field().to_string(),
                });
            }
            if a.norm() > NormValue::ONE {
                return Err(Error::Precondition(format!(
                    "center coefficient {j} = {a} is not 1-Lipschitz"
                )));
            }
        }
        Ok(AffineCenter {
            coefficients,
            constant,
        })
    }

    pub fn constant(c: FieldElement) -> Self {
        AffineCenter {
            coefficients: Vec::new(),
            constant: c,
        }
    }

    pub fn eval(&self, prefix: &[FieldElement]) -> FieldElement {
        let mut acc = self.constant.clone();
        for (a, x) in self.coefficients.iter().zip(prefix) {
            acc = &acc + &(a * x);
        }
        acc
    }
}

/// `{ x ∈ K^n : (rv(x_i − c_i(x_{<i})))_i ∈ ⋃ boxes }`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellND {
    pub centers: Vec<AffineCenter>,
    pub boxes: Vec<Vec<RvBox>>,
}

impl CellND {
    pub fn new(centers: Vec<AffineCenter>, boxes: Vec<Vec<RvBox>>) -> Result<Self> {
        let n = centers.len();
        if n == 0 {
            return Err(Error::EmptyInput("cell centers"));
        }
        let field = centers[0].constant.field();
        for (i, c) in centers.iter().enumerate() {
            if c.coefficients.len() > i {
                return Err(Error::Precondition(format!(
                    "center {i} depends on later coordinates"
                )));
            }
            if c.constant.field() != field {
                return Err(Error::BackendMismatch {
                    left: field.to_string(),
                    right: c.constant.field().to_string(),
                });
            }
        }
        let mut norm_boxes = Vec::with_capacity(boxes.len());
        for tuple in &boxes {
            if tuple.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: tuple.len(),
                });
            }
            norm_boxes.push(
                tuple
                    .iter()
                    .map(|b| b.normalized(field))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Ok(CellND {
            centers,
            boxes: norm_boxes,
        })
    }

    pub fn dim(&self) -> usize {
        self.centers.len()
    }

    pub fn contains(&self, x: &Point) -> Result<bool> {
        let y = straighten(self, x)?;
        Ok(self
            .boxes
            .iter()
            .any(|tuple| tuple.iter().zip(y.coords()).all(|(b, yi)| b.contains(yi))))
    }
}

/// `B(c, <r)` or `B(c, ≤r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ball {
    pub center: FieldElement,
    pub radius: NormValue,
    pub closed: bool,
}

impl Ball {
    pub fn open(center: FieldElement, radius: NormValue) -> Result<Self> {
        if radius.is_zero() {
            return Err(Error::Precondition("open ball of radius zero is empty".into()));
        }
        Ok(Ball {
            center,
            radius,
            closed: false,
        })
    }

    pub fn closed(center: FieldElement, radius: NormValue) -> Self {
        Ball {
            center,
            radius,
            closed: true,
        }
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        let d = x.dist(&self.center);
        if self.closed {
            d <= self.radius
        } else {
            d < self.radius
        }
    }

    /// The radius as a cut: largest distance from the center to a member.
    pub fn radius_cut(&self) -> CutValue {
        CutValue {
            norm: self.radius,
            attained: self.closed,
        }
    }
}

/// Infimum of `|x − y|` over a finite set.
pub fn dist_to_points(x: &FieldElement, points: &[FieldElement]) -> Result<CutValue> {
    points
        .iter()
        .map(|p| CutValue::attained(x.dist(p)))
        .min()
        .ok_or(Error::EmptyInput("dist_to_set over an empty set"))
}

/// Infimum of `|x − y|` over a union of cells.
pub fn dist_to_cells(x: &FieldElement, cells: &[Cell1D]) -> Result<CutValue> {
    for c in cells {
        if c.field() != x.field() {
            return Err(Error::BackendMismatch {
                left: x.field().to_string(),
                right: c.field().to_string(),
            });
        }
    }
    cells
        .iter()
        .map(|c| c.dist_cut(x))
        .min()
        .ok_or(Error::EmptyInput("dist_to_set over an empty set"))
}

/// Max-norm infimum over a finite set of points.
pub fn dist_to_point_set(x: &Point, points: &[Point]) -> Result<CutValue> {
    points
        .iter()
        .map(|p| CutValue::attained(x.dist(p)))
        .min()
        .ok_or(Error::EmptyInput("dist_to_set over an empty set"))
}

/// The `i` (1-based) with `|x_i| <= |x_j|` for `j < i` and `|x_i| < |x_j|` for
/// `j > i`: the last coordinate of minimal norm.
pub fn delta_partition_index(x: &Point) -> usize {
    let norms: Vec<NormValue> = x.coords().iter().map(FieldElement::norm).collect();
    let min = *norms.iter().min().unwrap();
    norms.iter().rposition(|n| *n == min).unwrap() + 1
}

/// `x ↦ (x_1 − c_1, x_2 − c_2(x_1), …)`.
pub fn straighten(cell: &CellND, x: &Point) -> Result<Point> {
    if x.dim() != cell.dim() {
        return Err(Error::DimensionMismatch {
            expected: cell.dim(),
            found: x.dim(),
        });
    }
    let xs = x.coords();
    Point::new(
        cell.centers
            .iter()
            .enumerate()
            .map(|(i, c)| &xs[i] - &c.eval(&xs[..i]))
            .collect(),
    )
}

/// Inverse of [`straighten`].
pub fn unstraighten(cell: &CellND, y: &Point) -> Result<Point> {
    if y.dim() != cell.dim() {
        return Err(Error::DimensionMismatch {
            expected: cell.dim(),
            found: y.dim(),
        });
    }
    let mut xs: Vec<FieldElement> = Vec::with_capacity(y.dim());
    for (i, c) in cell.centers.iter().enumerate() {
        let xi = y.coord(i) + &c.eval(&xs[..i]);
        xs.push(xi);
    }
    Point::new(xs)
}

/// The common fiber of the projection onto the `x_i`-axis (1-based `i`) of
/// the twisted box `{ rv(x_j − c_j) = λ_j }`, when `|λ_i|` is minimal.
pub fn fiber_box(lambdas: &[RvBox], centers: &[FieldElement], i: usize) -> Result<CellND> {
    let n = lambdas.len();
    if centers.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: centers.len(),
        });
    }
    if n < 2 || i == 0 || i > n {
        return Err(Error::Precondition(format!(
            "fiber index {i} out of range for dimension {n}"
        )));
    }
    let rvs = lambdas
        .iter()
        .map(|b| match b {
            RvBox::Exact(rv) => Ok(rv.clone()),
            _ => Err(Error::Precondition("fiber_box needs exact boxes".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    let li = rvs[i - 1].norm();
    if let Some(j) = rvs.iter().position(|r| li > r.norm()) {
        return Err(Error::Precondition(format!(
            "|λ_{i}| = {li} is not minimal: |λ_{}| = {}",
            j + 1,
            rvs[j].norm()
        )));
    }
    let keep: Vec<usize> = (0..n).filter(|&j| j != i - 1).collect();
    CellND::new(
        keep.iter()
            .map(|&j| AffineCenter::constant(centers[j].clone()))
            .collect(),
        vec![keep.iter().map(|&j| RvBox::Exact(rvs[j].clone())).collect()],
    )
}

/// Helper: an rv value with integer exponent.
pub fn rv_int(exponent: i64, unit: BigRational) -> RvValue {
    RvValue::new(Rational64::from_integer(exponent), unit)
}

#[cfg(test)]
mod tests;

mod json {
    use serde::ser::Error as _;
    use serde::{Serialize, Serializer};
    use serde_json::{json, Value};

    use super::{Cell1D, RvBox};
    use crate::valued_field::{NormValue, RvValue};

    impl RvBox {
        pub fn to_json(&self) -> serde_json::Result<Value> {
            Ok(match self {
                RvBox::Exact(RvValue::Zero) => json!({"exact": {"ord": null}}),
                RvBox::Exact(RvValue::Unit { exponent, unit }) => {
                    let mut v = serde_json::to_value(NormValue::Theta(*exponent))?;
                    v["unit"] = Value::String(unit.to_string());
                    json!({ "exact": v })
                }
                RvBox::Annulus { lower, upper, unit } => json!({"annulus": {
                    "lower": serde_json::to_value(lower)?,
                    "upper": serde_json::to_value(upper)?,
                    "unit": unit.as_ref().map(|u| u.to_string()),
                }}),
            })
        }
    }

    impl Serialize for RvBox {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            self.to_json().map_err(S::Error::custom)?.serialize(s)
        }
    }

    impl Serialize for Cell1D {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            #[derive(Serialize)]
            struct Raw<'a> {
                center: &'a crate::valued_field::FieldElement,
                boxes: &'a [RvBox],
            }
            Raw {
                center: &self.center,
                boxes: &self.boxes,
            }
            .serialize(s)
        }
    }
}
