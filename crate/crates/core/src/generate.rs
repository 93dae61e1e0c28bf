//! Seeded random instances for every construction.
//!
//! Finite data is made 1-Lipschitz by hierarchical assignment: points are
//! visited in order and each takes the value of its nearest earlier point
//! plus a perturbation of norm at most that distance. Callers still check
//! the result with the independent Lipschitz checker.

use num_rational::Rational64;
use rand::Rng;

use crate::extension::{Branch, GraphFamily, ValueMap};
use crate::geometry::{Ball, Cell1D};
use crate::io::{FiniteMethod, Instance, Task};
use crate::lipschitz::{AffinePiece, FiniteFunction, PiecewiseAffineMap1D};
use crate::sampling::{self, random_disjoint_cells, random_element, random_point, Window};
use crate::valued_field::{FieldDescriptor, FieldElement, NormValue, Point};

/// An element of norm `≤ d` (zero when `d` is zero, sometimes otherwise).
pub fn random_within<R: Rng>(rng: &mut R, field: FieldDescriptor, d: NormValue) -> FieldElement {
    match d {
        NormValue::Zero => FieldElement::zero(field),
        NormValue::Theta(e) => {
            if rng.gen_bool(0.15) {
                return FieldElement::zero(field);
            }
            let lo = if field.is_discrete() { e.ceil() } else { e };
            let x = sampling::random_exponent(rng, field, lo, lo + 3);
            let rv = crate::valued_field::RvValue::new(x, sampling::random_unit(rng, field));
            sampling::random_with_rv(rng, field, &rv)
        }
    }
}

/// Values for the given distinct points, 1-Lipschitz by construction.
pub fn lipschitz_values<R: Rng>(rng: &mut R, field: FieldDescriptor, points: &[Point], w: Window) -> Vec<FieldElement> {
    hierarchical(rng, field, points, 0, w)
}

/// As [`lipschitz_values`], but the first `zeros` points get the value 0.
pub fn vanishing_values<R: Rng>(
    rng: &mut R,
    field: FieldDescriptor,
    points: &[Point],
    zeros: usize,
    w: Window,
) -> Vec<FieldElement> {
    hierarchical(rng, field, points, zeros, w)
}

// |f(p) − f(r)| ≤ max(|p − q|, |q − r|) = |p − r| for the nearest earlier q,
// so each step keeps the data 1-Lipschitz.
fn hierarchical<R: Rng>(rng: &mut R, field: FieldDescriptor, points: &[Point], zeros: usize, w: Window) -> Vec<FieldElement> {
    let mut values: Vec<FieldElement> = Vec::with_capacity(points.len());
    for (k, p) in points.iter().enumerate() {
        let v = if k < zeros {
            FieldElement::zero(field)
        } else {
            match (0..k).min_by(|&a, &b| points[a].dist(p).cmp(&points[b].dist(p))) {
                None => random_element(rng, field, w),
                Some(j) => &values[j] + &random_within(rng, field, points[j].dist(p)),
            }
        };
        values.push(v);
    }
    values
}

/// Up to `k` distinct random points in `K^n`.
pub fn random_domain<R: Rng>(rng: &mut R, field: FieldDescriptor, n: usize, k: usize, w: Window) -> Vec<Point> {
    let mut pts: Vec<Point> = Vec::new();
    for _ in 0..3 * k {
        if pts.len() == k {
            break;
        }
        // reuse coordinates now and then so fibers and ties actually occur
        let p = if !pts.is_empty() && rng.gen_bool(0.3) {
            let base = pts[rng.gen_range(0..pts.len())].clone();
            let i = rng.gen_range(0..n);
            let mut c = base.coords().to_vec();
            c[i] = random_element(rng, field, w);
            Point::new(c).expect("same field")
        } else {
            random_point(rng, field, n, w)
        };
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

pub fn random_finite_function<R: Rng>(
    rng: &mut R,
    field: FieldDescriptor,
    n: usize,
    k: usize,
    w: Window,
) -> FiniteFunction {
    let pts = random_domain(rng, field, n, k.max(1), w);
    let vals = lipschitz_values(rng, field, &pts, w);
    FiniteFunction::new(n, pts.into_iter().zip(vals).collect()).expect("distinct points")
}

/// An element of the maximal ideal (norm < 1).
pub fn random_small<R: Rng>(rng: &mut R, field: FieldDescriptor) -> FieldElement {
    let d = if field.is_discrete() {
        NormValue::theta(1)
    } else {
        NormValue::Theta(Rational64::new(1, 2))
    };
    random_within(rng, field, d)
}

/// Disjoint cells with risometric pieces whose image centers are a common
/// dilation `(1 + m)·c_j` of the source centers.
pub fn random_risometric_map<R: Rng>(rng: &mut R, field: FieldDescriptor, k: usize, w: Window) -> PiecewiseAffineMap1D {
    let cells = random_disjoint_cells(rng, field, k, w);
    let m = random_small(rng, field);
    let pieces = cells
        .into_iter()
        .map(|cell| {
            let mj = random_small(rng, field);
            let slope = &FieldElement::one(field) + &mj;
            let intercept = &(&m - &mj) * &cell.center;
            AffinePiece { cell, slope, intercept }
        })
        .collect();
    PiecewiseAffineMap1D::new(pieces).expect("generated cells are disjoint")
}

/// Balls satisfying the one-cell hypothesis: equal-radius children of a
/// common parent ball, in distinct residue classes.
pub fn random_one_cell_balls<R: Rng>(rng: &mut R, field: FieldDescriptor, k: usize, w: Window) -> Vec<Ball> {
    let e = sampling::random_exponent(rng, field, Rational64::from_integer(w.lo), Rational64::from_integer(w.hi));
    let r = NormValue::Theta(e);
    let base = random_element(rng, field, w);
    let mut units: Vec<num_rational::BigRational> = Vec::new();
    for _ in 0..4 * k {
        if units.len() == k {
            break;
        }
        let u = field.normalize_unit(&sampling::random_unit(rng, field)).expect("unit");
        if !units.contains(&u) {
            units.push(u);
        }
    }
    units
        .into_iter()
        .map(|u| {
            let off = FieldElement::monomial(field, u, e).expect("exponent in group");
            // children of radius |t|·r would nest; radius r keeps them disjoint
            let c = &(&base + &off) + &random_within(rng, field, NormValue::Theta(e + 1));
            Ball::open(c, r).expect("positive radius")
        })
        .collect()
}

/// Balls violating the hypothesis: pairwise disjoint, but some pair sits at
/// a distance larger than both radii.
pub fn random_non_one_cell_balls<R: Rng>(rng: &mut R, field: FieldDescriptor, k: usize, w: Window) -> Vec<Ball> {
    let mut balls = random_one_cell_balls(rng, field, k.max(1), w);
    let r = balls[0].radius;
    let far = FieldElement::of_norm(field, match r {
        NormValue::Theta(e) => NormValue::Theta(e - 2),
        NormValue::Zero => NormValue::ONE,
    })
    .expect("in group");
    let c = &balls[0].center + &far;
    balls.push(Ball::open(c, r).expect("positive radius"));
    balls
}

/// A graph family whose values are the restriction of one global affine
/// 1-Lipschitz map `a·u + b·v + c`.
pub fn random_graph_family<R: Rng>(rng: &mut R, field: FieldDescriptor, k: usize, d: usize, w: Window) -> GraphFamily {
    loop {
        let cells: Vec<Cell1D> = random_disjoint_cells(rng, field, k, w);
        let a = random_within(rng, field, NormValue::ONE);
        let b = random_within(rng, field, NormValue::ONE);
        let c = random_element(rng, field, w);
        let branches: Vec<Vec<Branch>> = cells
            .iter()
            .map(|_| {
                (0..d)
                    .map(|_| {
                        let s = random_within(rng, field, NormValue::ONE);
                        let i = random_element(rng, field, w);
                        let value = ValueMap::affine(&a + &(&b * &s), &(&b * &i) + &c);
                        Branch { slope: s, intercept: i, value }
                    })
                    .collect()
            })
            .collect();
        if let Ok(g) = GraphFamily::new(cells, branches) {
            return g;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    FiniteLine,
    FinitePlane,
    FiniteNd,
    CellsLine,
    Graphs,
}

impl Profile {
    pub const ALL: [Profile; 5] = [
        Profile::FiniteLine,
        Profile::FinitePlane,
        Profile::FiniteNd,
        Profile::CellsLine,
        Profile::Graphs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Profile::FiniteLine => "finite-line",
            Profile::FinitePlane => "finite-plane",
            Profile::FiniteNd => "finite-nd",
            Profile::CellsLine => "cells-line",
            Profile::Graphs => "graphs",
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        Profile::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| crate::Error::Schema(format!("unknown profile `{s}`")))
    }
}

/// A random valid instance. `size` counts points for finite profiles and
/// cells otherwise; finite-nd lives in `K^3`.
pub fn generate_instance(seed: u64, profile: Profile, size: usize, field: FieldDescriptor, w: Window) -> Instance {
    let mut rng = sampling::rng(seed);
    let size = size.max(1);
    let task = match profile {
        Profile::FiniteLine | Profile::FinitePlane | Profile::FiniteNd => {
            let n = match profile {
                Profile::FiniteLine => 1,
                Profile::FinitePlane => 2,
                _ => 3,
            };
            Task::ExtendFinite {
                function: random_finite_function(&mut rng, field, n, size, w),
                method: FiniteMethod::Auto,
            }
        }
        Profile::CellsLine => Task::ExtendCell {
            map: random_risometric_map(&mut rng, field, size, w),
        },
        Profile::Graphs => Task::ExtendGraphs {
            family: random_graph_family(&mut rng, field, size, 2, w),
        },
    };
    Instance { field, task }
}
