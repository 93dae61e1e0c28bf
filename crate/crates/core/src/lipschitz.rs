//! Lipschitz constants, risometry checks, and the ε-reduction transforms.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Cell1D;
use crate::valued_field::{FieldDescriptor, FieldElement, NormValue, Point};

/// A function on a finite set of distinct points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteFunction {
    n: usize,
    entries: Vec<(Point, FieldElement)>,
    index: HashMap<Point, usize>,
}

impl FiniteFunction {
    pub fn new(n: usize, entries: Vec<(Point, FieldElement)>) -> Result<Self> {
        let mut index = HashMap::with_capacity(entries.len());
        let field = entries.first().map(|(p, _)| p.field());
        for (k, (p, v)) in entries.iter().enumerate() {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.dim(),
                });
            }
            let f = field.unwrap();
            if p.field() != f || v.field() != f {
                return Err(Error::BackendMismatch {
                    left: f.to_string(),
                    right: if p.field() != f { p.field() } else { v.field() }.to_string(),
                });
            }
            if index.insert(p.clone(), k).is_some() {
                return Err(Error::DuplicatePoint(p.to_string()));
            }
        }
        Ok(FiniteFunction { n, entries, index })
    }

    /// One-dimensional convenience constructor.
    pub fn on_line(pairs: Vec<(FieldElement, FieldElement)>) -> Result<Self> {
        Self::new(
            1,
            pairs.into_iter().map(|(x, y)| (Point::scalar(x), y)).collect(),
        )
    }

    /// Keeps the first value for repeated points.
    pub fn from_samples(n: usize, samples: Vec<(Point, FieldElement)>) -> Result<Self> {
        let mut seen = HashMap::new();
        let mut kept = Vec::new();
        for (p, v) in samples {
            if seen.insert(p.clone(), ()).is_none() {
                kept.push((p, v));
            }
        }
        Self::new(n, kept)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn field(&self) -> Option<FieldDescriptor> {
        self.entries.first().map(|(p, _)| p.field())
    }

    pub fn entries(&self) -> &[(Point, FieldElement)] {
        &self.entries
    }

    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.entries.iter().map(|(p, _)| p)
    }

    pub fn get(&self, x: &Point) -> Option<&FieldElement> {
        self.index.get(x).map(|&k| &self.entries[k].1)
    }

    pub fn map_values(&self, mut g: impl FnMut(&Point, &FieldElement) -> FieldElement) -> FiniteFunction {
        let entries = self.entries.iter().map(|(p, v)| (p.clone(), g(p, v))).collect();
        FiniteFunction::new(self.n, entries).expect("same points")
    }

    /// Restriction to the entries selected by `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&Point) -> bool) -> FiniteFunction {
        let entries = self.entries.iter().filter(|(p, _)| keep(p)).cloned().collect();
        FiniteFunction::new(self.n, entries).expect("subset of valid entries")
    }
}

/// Ratio `|f(x) − f(y)| / |x − y|` of one pair.
pub fn pair_ratio(x: &Point, fx: &FieldElement, y: &Point, fy: &FieldElement) -> NormValue {
    fx.dist(fy).ratio(x.dist(y))
}

/// Result of a pairwise scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LipschitzReport {
    /// Supremum of pair ratios; `Zero` for constant maps and singletons.
    pub constant: NormValue,
    pub witness: Option<(Point, Point)>,
    /// Pairs whose ratio exceeds the target, if one was given.
    pub violations: Vec<(Point, Point)>,
    pub target: Option<NormValue>,
}

impl LipschitzReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Best (largest ratio, earliest pair) over all pairs, plus violations of `eps`.
fn scan(entries: &[(Point, FieldElement)], eps: Option<NormValue>) -> LipschitzReport {
    let m = entries.len();
    let per_row: Vec<(Option<(NormValue, usize, usize)>, Vec<(usize, usize)>)> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut best: Option<(NormValue, usize, usize)> = None;
            let mut bad = Vec::new();
            let (x, fx) = &entries[i];
            for (j, (y, fy)) in entries.iter().enumerate().skip(i + 1) {
                let r = pair_ratio(x, fx, y, fy);
                if best.as_ref().is_none_or(|b| r > b.0) {
                    best = Some((r, i, j));
                }
                if eps.is_some_and(|e| r > e) {
                    bad.push((i, j));
                }
            }
            (best, bad)
        })
        .collect();
    let mut best: Option<(NormValue, usize, usize)> = None;
    let mut violations = Vec::new();
    for (b, bad) in per_row {
        if let Some(b) = b {
            if best.as_ref().is_none_or(|cur| b.0 > cur.0) {
                best = Some(b);
            }
        }
        violations.extend(bad);
    }
    let (constant, witness) = match best {
        Some((r, i, j)) if !r.is_zero() => (r, Some((entries[i].0.clone(), entries[j].0.clone()))),
        _ => (NormValue::Zero, None),
    };
    LipschitzReport {
        constant,
        witness,
        violations: violations
            .into_iter()
            .map(|(i, j)| (entries[i].0.clone(), entries[j].0.clone()))
            .collect(),
        target: eps,
    }
}

/// Exact supremum of pair ratios with a realizing pair.
pub fn lipschitz_constant(f: &FiniteFunction) -> Result<LipschitzReport> {
    if f.is_empty() {
        return Err(Error::EmptyInput("lipschitz_constant"));
    }
    Ok(scan(f.entries(), None))
}

/// Whether every pair ratio is `≤ eps`, listing all violating pairs.
pub fn is_lipschitz(f: &FiniteFunction, eps: NormValue) -> Result<LipschitzReport> {
    if eps.is_zero() {
        return Err(Error::Precondition("target constant must be positive".into()));
    }
    Ok(scan(f.entries(), Some(eps)))
}

/// Errors with the first violating pair unless `f` is 1-Lipschitz.
pub fn require_one_lipschitz(f: &FiniteFunction) -> Result<()> {
    let rep = is_lipschitz(f, NormValue::ONE)?;
    match rep.violations.first() {
        None => Ok(()),
        Some((x, y)) => {
            let (fx, fy) = (f.get(x).unwrap(), f.get(y).unwrap());
            Err(Error::NotLipschitz {
                x: x.to_string(),
                y: y.to_string(),
                lhs: fx.dist(fy).to_string(),
                rhs: x.dist(y).to_string(),
            })
        }
    }
}

/// Outcome of a risometry check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RisometryReport {
    pub ok: bool,
    pub counterexample: Option<(Point, Point)>,
}

/// `rv(f(x + y·e_i) − f(x)) = rv(y)` for every pair differing only in one
/// coordinate `i ∈ axes` (0-based).
pub fn risometry_check(f: &FiniteFunction, axes: &[usize]) -> Result<RisometryReport> {
    for &i in axes {
        if i >= f.dim() {
            return Err(Error::DimensionMismatch {
                expected: f.dim(),
                found: i + 1,
            });
        }
    }
    let e = f.entries();
    let bad = (0..e.len())
        .into_par_iter()
        .filter_map(|a| {
            for b in a + 1..e.len() {
                let (x, fx) = &e[a];
                let (y, fy) = &e[b];
                let differing: Vec<usize> = (0..f.dim()).filter(|&k| x.coord(k) != y.coord(k)).collect();
                if let [k] = differing.as_slice() {
                    if axes.contains(k) && (fy - fx).rv() != (y.coord(*k) - x.coord(*k)).rv() {
                        return Some((a, b));
                    }
                }
            }
            None
        })
        .min();
    Ok(RisometryReport {
        ok: bad.is_none(),
        counterexample: bad.map(|(a, b)| (e[a].0.clone(), e[b].0.clone())),
    })
}

/// `x ↦ slope·x + intercept` on a cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffinePiece {
    pub cell: Cell1D,
    pub slope: FieldElement,
    pub intercept: FieldElement,
}

impl AffinePiece {
    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        &(&self.slope * x) + &self.intercept
    }

    /// `slope ∈ 1 + M`.
    pub fn is_risometric(&self) -> bool {
        self.slope.dist(&FieldElement::one(self.slope.field())) < NormValue::ONE
    }
}

/// A map defined piecewise by affine maps on pairwise disjoint cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiecewiseAffineMap1D {
    pub pieces: Vec<AffinePiece>,
}

impl PiecewiseAffineMap1D {
    pub fn new(pieces: Vec<AffinePiece>) -> Result<Self> {
        crate::skeleton::check_disjoint(&pieces.iter().map(|p| p.cell.clone()).collect::<Vec<_>>())?;
        Ok(PiecewiseAffineMap1D { pieces })
    }

    pub fn eval(&self, x: &FieldElement) -> Option<FieldElement> {
        self.pieces.iter().find(|p| p.cell.contains(x)).map(|p| p.eval(x))
    }

    /// Every slope lies in `1 + M`; returns the first offending piece otherwise.
    pub fn risometry_check(&self) -> std::result::Result<(), usize> {
        match self.pieces.iter().position(|p| !p.is_risometric()) {
            None => Ok(()),
            Some(k) => Err(k),
        }
    }
}

fn axis_sum(x: &Point, axes: &[usize]) -> FieldElement {
    axes.iter().fold(FieldElement::zero(x.field()), |acc, &i| &acc + x.coord(i))
}

fn check_eps(eps: NormValue, eps_elt: &FieldElement) -> Result<()> {
    if eps <= NormValue::ONE {
        return Err(Error::Precondition(format!("ε = {eps} must exceed 1")));
    }
    if eps_elt.norm() != eps {
        return Err(Error::Precondition(format!(
            "|{eps_elt}| = {} does not match ε = {eps}",
            eps_elt.norm()
        )));
    }
    Ok(())
}

/// `g(x) = Σ_{i∈I} x_i + f(x)/ε` for 1-Lipschitz `f` and `|ε| > 1`.
pub fn reduce_value(x: &Point, fx: &FieldElement, eps_elt: &FieldElement, axes: &[usize]) -> FieldElement {
    &axis_sum(x, axes) + &(fx / eps_elt)
}

/// `F(x) = ε (G(x) − Σ_{i∈I} x_i)`.
pub fn restore_value(x: &Point, gx: &FieldElement, eps_elt: &FieldElement, axes: &[usize]) -> FieldElement {
    eps_elt * &(gx - &axis_sum(x, axes))
}

pub fn reduce_to_risometry(
    f: &FiniteFunction,
    eps: NormValue,
    eps_elt: &FieldElement,
    axes: &[usize],
) -> Result<FiniteFunction> {
    check_eps(eps, eps_elt)?;
    require_one_lipschitz(f)?;
    if let Some(&i) = axes.iter().find(|&&i| i >= f.dim()) {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: i + 1,
        });
    }
    Ok(f.map_values(|x, v| reduce_value(x, v, eps_elt, axes)))
}

pub fn restore_from_risometry(g: &FiniteFunction, eps_elt: &FieldElement, axes: &[usize]) -> FiniteFunction {
    g.map_values(|x, v| restore_value(x, v, eps_elt, axes))
}

/// `f₁(x) = ε f(x/ε)`, i.e. entries `(εa, εf(a))`.
pub fn rescale(f: &FiniteFunction, eps_elt: &FieldElement) -> Result<FiniteFunction> {
    if eps_elt.is_zero() {
        return Err(Error::DivisionByZero);
    }
    FiniteFunction::new(
        f.dim(),
        f.entries()
            .iter()
            .map(|(p, v)| (p.scale(eps_elt), eps_elt * v))
            .collect(),
    )
}

#[cfg(test)]
mod tests;
