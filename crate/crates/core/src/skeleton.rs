//! Skeletons of finite families of one-dimensional cells.
//!
//! Cells are grouped by their infimum radius `ρ` (a cut); levels are processed
//! in ascending order. At each positive level, centers close to an existing
//! skeleton point are re-attached to it; the rest are merged in classes of
//! mutual distance `≤ r` and replaced by one point per class.

use std::cmp::Ordering;

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Ball, Cell1D, RvBox};
use crate::valued_field::{integer_average, CutValue, FieldDescriptor, FieldElement, NormValue, RvValue};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkeletonLevel {
    pub radius: CutValue,
    pub points: Vec<FieldElement>,
}

/// A cell re-expressed around the skeleton point it is attached to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attachment {
    pub cell: usize,
    pub point: FieldElement,
    pub level: usize,
    pub recentered: Cell1D,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Skeleton {
    pub levels: Vec<SkeletonLevel>,
    /// One entry per input cell, in input order.
    #[serde(serialize_with = "attachments_json")]
    pub attachments: Vec<Attachment>,
}

impl Skeleton {
    pub fn points(&self) -> impl Iterator<Item = &FieldElement> {
        self.levels.iter().flat_map(|l| l.points.iter())
    }

    pub fn point_set(&self) -> Vec<FieldElement> {
        self.points().cloned().collect()
    }

    pub fn level_of(&self, p: &FieldElement) -> Option<usize> {
        self.levels.iter().position(|l| l.points.contains(p))
    }
}

fn attachments_json<S: serde::Serializer>(a: &[Attachment], s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        cell: usize,
        point: &'a FieldElement,
    }
    s.collect_seq(a.iter().map(|a| Entry {
        cell: a.cell,
        point: &a.point,
    }))
}

fn mismatch(a: &FieldElement, b: &FieldElement) -> Error {
    Error::BackendMismatch {
        left: a.field().to_string(),
        right: b.field().to_string(),
    }
}

fn validate_family(cells: &[Cell1D]) -> Result<FieldDescriptor> {
    let first = cells.first().ok_or(Error::EmptyInput("cell family"))?;
    let field = first.field();
    for (k, c) in cells.iter().enumerate() {
        if c.field() != field {
            return Err(mismatch(&first.center, &c.center));
        }
        if c.contains(&c.center) {
            return Err(Error::CenterInCell(k));
        }
    }
    Ok(field)
}

/// Small residue representatives used when probing a sphere.
fn probe_units(field: FieldDescriptor) -> Vec<num_rational::BigRational> {
    let n: Vec<i64> = match field.prime() {
        Some(p) => (1..p.min(5) as i64).collect(),
        None => vec![1, 2, -1],
    };
    n.into_iter().map(crate::valued_field::big).collect()
}

/// Some point in both cells, if they meet.
pub fn cells_overlap(a: &Cell1D, b: &Cell1D) -> Option<FieldElement> {
    let field = a.field();
    let delta = &b.center - &a.center;
    let d = delta.norm();
    let both = |x: &FieldElement| a.contains(x) && b.contains(x);
    for b1 in &a.boxes {
        for b2 in &b.boxes {
            if d.is_zero() {
                if let Some(i) = b1.intersect(b2, field) {
                    return Some(&a.center + &i.some_member(field));
                }
                continue;
            }
            // |x − c1| > d: both offsets share their rv
            if let (Some(u1), Some(u2)) = (b1.restrict_norm(d, true, field), b2.restrict_norm(d, true, field)) {
                if let Some(i) = u1.intersect(&u2, field) {
                    return Some(&a.center + &i.some_member(field));
                }
            }
            // |x − c1| < d: then rv(x − c2) = rv(−δ)
            if let Some(low) = b1.restrict_norm(d, false, field) {
                if b2.contains(&-&delta) {
                    return Some(&a.center + &low.some_member(field));
                }
            }
            if let Some(low) = b2.restrict_norm(d, false, field) {
                if b1.contains(&delta) {
                    return Some(&b.center + &low.some_member(field));
                }
            }
            // |x − c1| = |x − c2| = d: probe finitely many residues from each side
            let sphere = RvBox::sphere(d);
            for (bx, center) in [(b1, &a.center), (b2, &b.center)] {
                if let Some(slice) = bx.intersect(&sphere, field) {
                    let units = match slice.unit() {
                        Some(u) => vec![u.clone()],
                        None => probe_units(field),
                    };
                    for u in units {
                        let rv = RvValue::new(d.exponent().unwrap(), u);
                        let x = center + &field.rv_representative(&rv).expect("in group");
                        if both(&x) {
                            return Some(x);
                        }
                    }
                }
            }
        }
    }
    None
}

/// Errors with a common point of the first overlapping pair.
pub fn check_disjoint(cells: &[Cell1D]) -> Result<()> {
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            if let Some(x) = cells_overlap(&cells[i], &cells[j]) {
                return Err(Error::OverlappingCells {
                    first: i,
                    second: j,
                    witness: x.to_string(),
                });
            }
        }
    }
    Ok(())
}

fn within(r: CutValue, a: &FieldElement, b: &FieldElement) -> bool {
    r.admits_le(a.dist(b))
}

/// Whether some member of `cell` lies within `≤ r` of `x`.
fn ball_meets_cell(x: &FieldElement, r: CutValue, cell: &Cell1D) -> bool {
    let d = cell.dist_cut(x);
    if d.attained {
        d.norm <= r.norm
    } else {
        d.norm < r.norm
    }
}

struct Builder<'a> {
    cells: &'a [Cell1D],
    field: FieldDescriptor,
}

impl Builder<'_> {
    /// A candidate is admissible when it is in no cell and every class cell
    /// re-centers around it with unchanged `ρ`.
    fn admissible(&self, s: &FieldElement, class: &[usize], r: CutValue) -> bool {
        if self.cells.iter().any(|c| c.contains(s)) {
            return false;
        }
        class.iter().all(|&j| {
            matches!(self.cells[j].recentered(s), Ok(c) if c.rho() == r)
        })
    }

    fn representative(&self, class: &[usize], r: CutValue) -> Result<FieldElement> {
        let mut centers: Vec<FieldElement> = class.iter().map(|&j| self.cells[j].center.clone()).collect();
        centers.sort_by(FieldElement::canonical_cmp);
        centers.dedup();
        let avg = integer_average(centers.iter())?.value;
        let mut candidates = vec![avg.clone()];
        let near: Vec<usize> = class
            .iter()
            .copied()
            .filter(|&j| ball_meets_cell(&avg, r, &self.cells[j]))
            .collect();
        if near.len() == 1 {
            candidates.push(self.cells[near[0]].center.clone());
        }
        candidates.extend(centers.iter().cloned());
        let e = r.norm.exponent().expect("positive level");
        let w = FieldElement::uniformizer_pow(self.field, e)?;
        let w_small = FieldElement::uniformizer_pow(self.field, e + 1)?;
        for step in [&w_small, &w] {
            for base in centers.iter().chain(std::iter::once(&avg)) {
                for m in 1..=64 {
                    candidates.push(base + &step.scale(&crate::valued_field::big(m)));
                }
            }
        }
        candidates
            .into_iter()
            .find(|s| self.admissible(s, class, r))
            .ok_or_else(|| Error::NotRecenterable {
                cell: class[0],
                point: avg.to_string(),
                reason: if self.field.is_mixed_characteristic() {
                    "no admissible skeleton point: the cells cover every candidate (finite residue field)".into()
                } else {
                    "no admissible skeleton point for the class".into()
                },
            })
    }
}

/// The skeleton of a finite family of pairwise disjoint cells.
pub fn build_skeleton(cells: &[Cell1D]) -> Result<Skeleton> {
    let field = validate_family(cells)?;
    let rhos: Vec<CutValue> = cells.iter().map(Cell1D::rho).collect();
    let mut radii = rhos.clone();
    radii.sort();
    radii.dedup();

    let builder = Builder { cells, field };
    let mut levels: Vec<SkeletonLevel> = Vec::new();
    let mut attached: Vec<Option<(FieldElement, usize)>> = vec![None; cells.len()];

    for (li, &r) in radii.iter().enumerate() {
        let mut idx: Vec<usize> = (0..cells.len()).filter(|&j| rhos[j] == r).collect();
        idx.sort_by(|&a, &b| cells[a].center.canonical_cmp(&cells[b].center).then(a.cmp(&b)));
        let mut points: Vec<FieldElement> = Vec::new();

        if r.norm.is_zero() {
            for &j in &idx {
                let c = cells[j].center.clone();
                if !points.contains(&c) {
                    points.push(c.clone());
                }
                attached[j] = Some((c, li));
            }
            levels.push(SkeletonLevel { radius: r, points });
            continue;
        }

        let mut remaining = Vec::new();
        for &j in &idx {
            let c = &cells[j].center;
            let nearest = levels
                .iter()
                .enumerate()
                .flat_map(|(lv, l)| l.points.iter().map(move |p| (lv, p)))
                .filter(|(_, p)| within(r, c, p))
                .min_by(|(_, p), (_, q)| c.dist(p).cmp(&c.dist(q)).then_with(|| p.canonical_cmp(q)));
            match nearest {
                Some((lv, p)) => attached[j] = Some((p.clone(), lv)),
                None => remaining.push(j),
            }
        }

        let mut classes: Vec<Vec<usize>> = Vec::new();
        for j in remaining {
            let c = &cells[j].center;
            match classes.iter_mut().find(|k| within(r, c, &cells[k[0]].center)) {
                Some(k) => k.push(j),
                None => classes.push(vec![j]),
            }
        }
        for k in &classes {
            for &a in k {
                for &b in k {
                    assert!(
                        within(r, &cells[a].center, &cells[b].center),
                        "class relation failed to be transitive"
                    );
                }
            }
        }

        for class in &classes {
            let s = builder.representative(class, r)?;
            for &j in class {
                attached[j] = Some((s.clone(), li));
            }
            points.push(s);
        }
        points.sort_by(FieldElement::canonical_cmp);
        levels.push(SkeletonLevel { radius: r, points });
    }

    let attachments = attached
        .into_iter()
        .enumerate()
        .map(|(j, a)| {
            let (point, level) = a.expect("every cell is attached");
            let recentered = cells[j].recentered(&point).map_err(|reason| Error::NotRecenterable {
                cell: j,
                point: point.to_string(),
                reason,
            })?;
            Ok(Attachment {
                cell: j,
                point,
                level,
                recentered,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Skeleton { levels, attachments })
}

/// The skeleton condition: `|s − s'| > r_p` for `s` at level `i ≤ p` and
/// `s'` at level `p`, `s ≠ s'`. Returns the first offending pair.
pub fn skeleton_condition_violation(sk: &Skeleton) -> Option<(FieldElement, FieldElement)> {
    for (i, li) in sk.levels.iter().enumerate() {
        for lp in &sk.levels[i..] {
            for a in &li.points {
                for b in &lp.points {
                    if a != b && !lp.radius.below(a.dist(b)) {
                        return Some((a.clone(), b.clone()));
                    }
                }
            }
        }
    }
    None
}

/// Three-way comparison as a small integer, for serialization.
fn sign(o: Ordering) -> i8 {
    match o {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Comparison data of a tuple of (center, ρ) pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Configuration {
    /// `rho_order[a][b]` compares `ρ_a` with `ρ_b`.
    pub rho_order: Vec<Vec<i8>>,
    /// `dist_vs_rho[a][b][k]` compares `|c_a − c_b|` (a < b) with the cut `ρ_k`.
    pub dist_vs_rho: Vec<Vec<Vec<i8>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairPattern {
    Trivial,
    /// `|c₁ − c₂| ≤ ρ₁ = ρ₂`
    Mergeable,
    /// `|c₁ − c₂| > max(ρ₁, ρ₂)`
    Separated,
    Other,
}

impl Configuration {
    pub fn pattern(&self) -> PairPattern {
        match self.rho_order.len() {
            0 | 1 => PairPattern::Trivial,
            2 => {
                let cmp = &self.dist_vs_rho[0][1];
                if self.rho_order[0][1] == 0 && cmp[0] <= 0 {
                    PairPattern::Mergeable
                } else if cmp[0] > 0 && cmp[1] > 0 {
                    PairPattern::Separated
                } else {
                    PairPattern::Other
                }
            }
            _ => PairPattern::Other,
        }
    }
}

pub fn configuration_of(pairs: &[(FieldElement, CutValue)]) -> Configuration {
    let n = pairs.len();
    let rho_order = (0..n)
        .map(|a| (0..n).map(|b| sign(pairs[a].1.cmp(&pairs[b].1))).collect())
        .collect();
    let dist_vs_rho = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    if b <= a {
                        return Vec::new();
                    }
                    let d = pairs[a].0.dist(&pairs[b].0);
                    // value-vs-cut, negated so that "d below the cut" is -1
                    pairs.iter().map(|(_, r)| sign(r.compare_value(d))).collect()
                })
                .collect()
        })
        .collect();
    Configuration {
        rho_order,
        dist_vs_rho,
    }
}

pub fn cell_configuration(cells: &[Cell1D]) -> Configuration {
    configuration_of(&cells.iter().map(|c| (c.center.clone(), c.rho())).collect::<Vec<_>>())
}

/// Open balls only; closed balls of a discrete field are rewritten as open.
fn as_open(b: &Ball) -> Result<(FieldElement, NormValue)> {
    if !b.closed {
        if b.radius.is_zero() {
            return Err(Error::Precondition("open ball of radius zero".into()));
        }
        return Ok((b.center.clone(), b.radius));
    }
    let f = b.center.field();
    match b.radius {
        NormValue::Theta(e) if f.is_discrete() => Ok((b.center.clone(), NormValue::Theta(e - 1))),
        _ => Err(Error::Precondition(format!(
            "closed ball of radius {} is not a union of rv fibers in the {f} field",
            b.radius
        ))),
    }
}

/// A single cell whose members are exactly the union of the balls.
pub fn one_cell(balls: &[Ball]) -> Result<Cell1D> {
    let first = balls.first().ok_or(Error::EmptyInput("ball family"))?;
    let field = first.center.field();
    let open = balls.iter().map(as_open).collect::<Result<Vec<_>>>()?;
    for (c, _) in &open {
        if c.field() != field {
            return Err(mismatch(&first.center, c));
        }
    }
    for a in 0..open.len() {
        for b in a + 1..open.len() {
            let (ca, ra) = &open[a];
            let (cb, rb) = &open[b];
            let d = ca.dist(cb);
            let m = (*ra).max(*rb);
            if d < m {
                return Err(Error::Precondition(format!("balls {a} and {b} overlap")));
            }
            // for disjoint open balls all cross distances equal |ca − cb|
            if d != m {
                return Err(Error::HypothesisViolation {
                    a: ca.to_string(),
                    b: cb.to_string(),
                    reason: format!("distance {d} differs from the larger radius {m}"),
                });
            }
        }
    }
    let valid = |z: &FieldElement| open.iter().all(|(c, r)| c.dist(z) == *r);
    let mut candidates = vec![FieldElement::zero(field)];
    let rmin = open.iter().map(|(_, r)| *r).min().unwrap();
    let mut small: Vec<&FieldElement> = open.iter().filter(|(_, r)| *r == rmin).map(|(c, _)| c).collect();
    small.sort_by(|a, b| a.canonical_cmp(b));
    candidates.push(integer_average(small.iter().copied())?.value);
    let w = FieldElement::of_norm(field, rmin)?;
    for m in 1..=(open.len() as i64 + 2) {
        candidates.push(small[0] - &w.scale(&crate::valued_field::big(m)));
    }
    let z = candidates
        .into_iter()
        .find(valid)
        .expect("a center at the minimal radius always exists");
    Cell1D::new(z.clone(), open.iter().map(|(c, _)| RvBox::Exact((c - &z).rv())).collect())
}

/// Image of a cell under `x ↦ a·x + b` with `a ∈ 1 + M`.
pub fn risometry_image_cell(cell: &Cell1D, slope: &FieldElement, intercept: &FieldElement) -> Result<Cell1D> {
    if slope.dist(&FieldElement::one(slope.field())) >= NormValue::ONE {
        return Err(Error::NotRisometry(format!("slope {slope} is not in 1 + M")));
    }
    Ok(Cell1D {
        center: &(slope * &cell.center) + intercept,
        boxes: cell.boxes.clone(),
    })
}

/// Source and image skeletons with the induced point map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transport {
    pub image_cells: Vec<Cell1D>,
    pub source: Skeleton,
    pub image: Skeleton,
    pub point_map: Vec<(FieldElement, FieldElement)>,
}

impl Transport {
    pub fn map_point(&self, s: &FieldElement) -> Option<&FieldElement> {
        self.point_map.iter().find(|(a, _)| a == s).map(|(_, b)| b)
    }
}

pub fn transport_skeleton(cells: &[Cell1D], pieces: &[(FieldElement, FieldElement)]) -> Result<Transport> {
    if cells.len() != pieces.len() {
        return Err(Error::DimensionMismatch {
            expected: cells.len(),
            found: pieces.len(),
        });
    }
    let image_cells = cells
        .iter()
        .zip(pieces)
        .map(|(c, (a, b))| risometry_image_cell(c, a, b))
        .collect::<Result<Vec<_>>>()?;
    let source = build_skeleton(cells)?;
    let image = build_skeleton(&image_cells)?;
    let (cs, ci) = (cell_configuration(cells), cell_configuration(&image_cells));
    if cs != ci {
        return Err(Error::ConfigurationMismatch(
            "source and image cell configurations differ".into(),
        ));
    }
    let mut point_map: Vec<(FieldElement, FieldElement)> = Vec::new();
    for (a, b) in source.attachments.iter().zip(&image.attachments) {
        if a.level != b.level {
            return Err(Error::ConfigurationMismatch(format!(
                "cell {} sits at level {} in the source but {} in the image",
                a.cell, a.level, b.level
            )));
        }
        match point_map.iter().find(|(s, _)| *s == a.point) {
            Some((_, t)) if *t != b.point => {
                return Err(Error::ConfigurationMismatch(format!(
                    "skeleton point {} maps to both {t} and {}",
                    a.point, b.point
                )))
            }
            Some(_) => {}
            None => {
                if let Some((s, _)) = point_map.iter().find(|(_, t)| *t == b.point) {
                    return Err(Error::ConfigurationMismatch(format!(
                        "image point {} has two preimages {s} and {}",
                        b.point, a.point
                    )));
                }
                point_map.push((a.point.clone(), b.point.clone()));
            }
        }
    }
    Ok(Transport {
        image_cells,
        source,
        image,
        point_map,
    })
}

/// Uniformizer power used by generators and tests to build radii.
pub fn radius_element(field: FieldDescriptor, e: Rational64) -> Result<FieldElement> {
    FieldElement::uniformizer_pow(field, e)
}
