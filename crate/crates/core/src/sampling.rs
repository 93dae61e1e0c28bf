//! Seeded random elements, box members, and verification sample sets.

use num_rational::{BigRational, Rational64};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Cell1D, RvBox};
use crate::valued_field::{big, CutValue, FieldDescriptor, FieldElement, NormValue, Point, RvValue};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Inclusive window of norm exponents used for random data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub const DEFAULT: Window = Window { lo: -6, hi: 6 };

    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "empty exponent window");
        Window { lo, hi }
    }
}

impl Default for Window {
    fn default() -> Self {
        Window::DEFAULT
    }
}

/// An exponent in `[lo, hi]`; Puiseux backends also get halves and thirds.
pub fn random_exponent<R: Rng>(rng: &mut R, field: FieldDescriptor, lo: Rational64, hi: Rational64) -> Rational64 {
    let q: i64 = if field.is_discrete() {
        1
    } else {
        *[1, 1, 2, 3].choose(rng).unwrap()
    };
    let a = (lo * q).ceil().to_integer();
    let b = (hi * q).floor().to_integer();
    if a > b {
        // no grid point of this denominator; fall back to the midpoint
        return (lo + hi) / 2;
    }
    Rational64::new(rng.gen_range(a..=b), q)
}

/// A nonzero residue representative.
pub fn random_unit<R: Rng>(rng: &mut R, field: FieldDescriptor) -> BigRational {
    match field.prime() {
        Some(p) => big(rng.gen_range(1..p as i64)),
        None => {
            let mut n = rng.gen_range(-4i64..=4);
            if n == 0 {
                n = 1;
            }
            if rng.gen_bool(0.2) {
                BigRational::new(n.into(), rng.gen_range(2i64..=3).into())
            } else {
                big(n)
            }
        }
    }
}

/// `unit · t^e` plus up to two higher-order terms (same rv).
pub fn random_with_rv<R: Rng>(rng: &mut R, field: FieldDescriptor, rv: &RvValue) -> FieldElement {
    let base = field.rv_representative(rv).expect("representable rv");
    let e = match rv {
        RvValue::Zero => return base,
        RvValue::Unit { exponent, .. } => *exponent,
    };
    let mut x = base;
    for _ in 0..rng.gen_range(0..=2) {
        let de = random_exponent(rng, field, Rational64::new(1, 2), Rational64::from_integer(3));
        let de = if de <= Rational64::from_integer(0) { Rational64::from_integer(1) } else { de };
        let u = random_unit(rng, field);
        x = &x + &FieldElement::monomial(field, u, e + de).expect("exponent in group");
    }
    x
}

/// A random element with norm exponent in the window (or zero, rarely).
pub fn random_element<R: Rng>(rng: &mut R, field: FieldDescriptor, w: Window) -> FieldElement {
    if rng.gen_bool(0.05) {
        return FieldElement::zero(field);
    }
    let e = random_exponent(rng, field, Rational64::from_integer(w.lo), Rational64::from_integer(w.hi));
    let rv = RvValue::new(e, random_unit(rng, field));
    random_with_rv(rng, field, &rv)
}

pub fn random_point<R: Rng>(rng: &mut R, field: FieldDescriptor, n: usize, w: Window) -> Point {
    Point::new((0..n).map(|_| random_element(rng, field, w)).collect()).unwrap()
}

/// A member of `center + box`, norms clipped to the window when unbounded.
pub fn sample_box_member<R: Rng>(rng: &mut R, field: FieldDescriptor, b: &RvBox, w: Window) -> FieldElement {
    let rv = match b {
        RvBox::Exact(rv) => rv.clone(),
        RvBox::Annulus { unit, .. } => {
            let (lo, hi) = b.norm_interval(field);
            let e = pick_exponent_in(rng, field, lo, hi, w);
            let u = unit.clone().unwrap_or_else(|| random_unit(rng, field));
            RvValue::new(e, u)
        }
    };
    random_with_rv(rng, field, &rv)
}

fn pick_exponent_in<R: Rng>(
    rng: &mut R,
    field: FieldDescriptor,
    lo: CutValue,
    hi: Option<CutValue>,
    w: Window,
) -> Rational64 {
    // exponents are reversed: a large norm is a small exponent
    let e_max = match lo.norm {
        NormValue::Zero => Rational64::from_integer(w.hi.max(w.lo) + 4),
        NormValue::Theta(e) => e,
    };
    let e_min = match hi {
        None => e_max.min(Rational64::from_integer(w.lo)) - 2,
        Some(c) => c.norm.exponent().expect("nonzero upper"),
    };
    let strict_top = !lo.attained && !lo.norm.is_zero();
    let strict_bottom = hi.is_some_and(|c| !c.attained);
    for _ in 0..32 {
        let e = random_exponent(rng, field, e_min, e_max);
        if (strict_top && e == e_max) || (strict_bottom && e == e_min) {
            continue;
        }
        return e;
    }
    // dense group with open endpoints: the midpoint always works
    (e_min + e_max) / 2
}

pub fn sample_cell_member<R: Rng>(rng: &mut R, cell: &Cell1D, w: Window) -> FieldElement {
    let b = cell.boxes.choose(rng).unwrap();
    &cell.center + &sample_box_member(rng, cell.field(), b, w)
}

/// A random box around zero: an exact fiber, a sphere, an annulus with or
/// without a fixed residue, or a punctured ball.
pub fn random_box<R: Rng>(rng: &mut R, field: FieldDescriptor, w: Window) -> RvBox {
    let e = |rng: &mut R| random_exponent(rng, field, Rational64::from_integer(w.lo), Rational64::from_integer(w.hi));
    match rng.gen_range(0..5) {
        0 => RvBox::Exact(RvValue::new(e(rng), random_unit(rng, field))),
        1 => RvBox::sphere(NormValue::Theta(e(rng))),
        k => {
            let (a, b) = (e(rng), e(rng));
            let (hi, lo) = (a.min(b), a.max(b));
            let lower = if k == 4 {
                CutValue::approached(NormValue::Zero)
            } else {
                CutValue { norm: NormValue::Theta(lo), attained: rng.gen_bool(0.5) }
            };
            let upper = if rng.gen_bool(0.15) {
                None
            } else {
                Some(CutValue { norm: NormValue::Theta(hi), attained: rng.gen_bool(0.5) })
            };
            let unit = if k == 2 { Some(random_unit(rng, field)) } else { None };
            RvBox::Annulus { lower, upper, unit }
        }
    }
}

/// A random nonempty cell with up to three boxes.
pub fn random_cell<R: Rng>(rng: &mut R, field: FieldDescriptor, w: Window) -> Cell1D {
    loop {
        let center = random_element(rng, field, w);
        let boxes: Vec<RvBox> = (0..rng.gen_range(1..=3))
            .filter_map(|_| random_box(rng, field, w).normalized(field).ok())
            .filter(|b| !b.is_empty(field))
            .collect();
        if boxes.is_empty() {
            continue;
        }
        if let Ok(c) = Cell1D::new(center, boxes) {
            if !c.contains(&c.center) {
                return c;
            }
        }
    }
}

/// Up to `k` pairwise disjoint random cells, none holding another's center
/// (offending draws are dropped).
pub fn random_disjoint_cells<R: Rng>(rng: &mut R, field: FieldDescriptor, k: usize, w: Window) -> Vec<Cell1D> {
    let mut out: Vec<Cell1D> = Vec::new();
    for _ in 0..4 * k {
        if out.len() == k {
            break;
        }
        let c = random_cell(rng, field, w);
        // no cell may hold another's center: a sphere plus the open ball
        // through its center would tile a closed ball and leave no skeleton
        if out
            .iter()
            .all(|d| crate::skeleton::cells_overlap(d, &c).is_none() && !d.contains(&c.center) && !c.contains(&d.center))
        {
            out.push(c);
        }
    }
    out
}

/// Verification sample set: every domain point, `n` perturbations of domain
/// points, and `n` far points from the window (the latter two split evenly).
pub fn sample_points<R: Rng>(
    rng: &mut R,
    field: FieldDescriptor,
    dim: usize,
    domain: &[Point],
    n: usize,
    w: Window,
) -> Vec<Point> {
    let mut out: Vec<Point> = domain.to_vec();
    for k in 0..n {
        if !domain.is_empty() && k % 2 == 0 {
            let base = domain.choose(rng).unwrap();
            let delta = random_point(rng, field, dim, Window::new(w.lo.max(-2), w.hi + 3));
            out.push(base.add(&delta));
        } else {
            out.push(random_point(rng, field, dim, w));
        }
    }
    out
}

/// `anchors` plus, for every integer scale `e` in the window, `per_scale`
/// points `a + δ` with `a` an anchor (or the origin) and `|δ| = Θ(e)`.
pub fn scale_samples<R: Rng>(
    rng: &mut R,
    field: FieldDescriptor,
    dim: usize,
    anchors: &[Point],
    per_scale: usize,
    w: Window,
) -> Vec<Point> {
    let zero = Point::new(vec![FieldElement::zero(field); dim]).unwrap();
    let mut out: Vec<Point> = anchors.to_vec();
    for e in w.lo..=w.hi {
        for _ in 0..per_scale {
            let base = anchors.choose(rng).unwrap_or(&zero);
            let lead = rng.gen_range(0..dim);
            let coords = (0..dim)
                .map(|i| {
                    let ei = if i == lead { e } else { e + rng.gen_range(0..=2) };
                    let rv = RvValue::new(Rational64::from_integer(ei), random_unit(rng, field));
                    random_with_rv(rng, field, &rv)
                })
                .collect();
            out.push(base.add(&Point::new(coords).unwrap()));
        }
    }
    out
}
