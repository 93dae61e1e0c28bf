use num_rational::Rational64;
use proptest::prelude::*;
use rand::Rng;

use super::*;
use crate::sampling::{self, Window};
use crate::valued_field::big;

const T: FieldDescriptor = FieldDescriptor::TAdic;
const PU: FieldDescriptor = FieldDescriptor::Puiseux;

fn el(s: &str) -> FieldElement {
    FieldElement::parse(T, s).unwrap()
}

fn pt(xs: &[&str]) -> Point {
    Point::new(xs.iter().map(|s| el(s)).collect()).unwrap()
}

fn annulus(lo: CutValue, hi: Option<CutValue>) -> RvBox {
    RvBox::Annulus {
        lower: lo,
        upper: hi,
        unit: None,
    }
}

#[test]
fn contains_examples() {
    let unit_sphere = Cell1D::new(el("0"), vec![RvBox::sphere(NormValue::ONE)]).unwrap();
    assert!(unit_sphere.contains(&el("1 + t")));
    assert!(!unit_sphere.contains(&el("t")));

    let cell = CellND::new(
        vec![
            AffineCenter::constant(el("0")),
            AffineCenter::new(vec![el("1")], el("0")).unwrap(),
        ],
        vec![vec![RvBox::exact_of(&el("1")), RvBox::exact_of(&el("t"))]],
    )
    .unwrap();
    assert!(cell.contains(&pt(&["1", "1 + t"])).unwrap());
    assert!(!cell.contains(&pt(&["1", "1 + t^2"])).unwrap());
    assert!(cell.contains(&pt(&["1"])).is_err());
}

#[test]
fn rho_examples() {
    let a = Cell1D::new(
        FieldElement::zero(PU),
        vec![annulus(
            CutValue::attained(NormValue::theta(2)),
            Some(CutValue::attained(NormValue::theta(1))),
        )],
    )
    .unwrap();
    assert_eq!(a.rho(), CutValue::attained(NormValue::theta(2)));

    let b = Cell1D::new(
        FieldElement::zero(PU),
        vec![annulus(
            CutValue::approached(NormValue::theta(2)),
            Some(CutValue::attained(NormValue::theta(1))),
        )],
    )
    .unwrap();
    assert_eq!(b.rho(), CutValue::approached(NormValue::theta(2)));

    let c = Cell1D::new(
        FieldElement::zero(PU),
        vec![annulus(
            CutValue::approached(NormValue::Zero),
            Some(CutValue::approached(NormValue::theta(1))),
        )],
    )
    .unwrap();
    assert_eq!(c.rho(), CutValue::approached(NormValue::Zero));
}

#[test]
fn rho_closes_open_endpoints_in_discrete_groups() {
    let b = Cell1D::new(
        el("0"),
        vec![annulus(
            CutValue::approached(NormValue::theta(2)),
            Some(CutValue::attained(NormValue::theta(0))),
        )],
    )
    .unwrap();
    assert_eq!(b.rho(), CutValue::attained(NormValue::theta(1)));
    // (Theta(2), Theta(1)) open at both ends has no t-adic member
    assert!(Cell1D::new(
        el("0"),
        vec![annulus(
            CutValue::approached(NormValue::theta(2)),
            Some(CutValue::approached(NormValue::theta(1))),
        )],
    )
    .is_err());
}

#[test]
fn dist_to_set_examples() {
    // |t^3 - 0| = Theta(3) is below |t^3 - t^2| = Theta(2)
    assert_eq!(
        dist_to_points(&el("t^3"), &[el("0"), el("t^2")]).unwrap(),
        CutValue::attained(NormValue::theta(3))
    );
    assert_eq!(
        dist_to_points(&el("t^3"), &[el("t^2")]).unwrap(),
        CutValue::attained(NormValue::theta(2))
    );
    let ann = Cell1D::new(
        el("5"),
        vec![annulus(CutValue::attained(NormValue::theta(1)), None)],
    )
    .unwrap();
    assert_eq!(ann.rho(), CutValue::attained(NormValue::theta(1)));
    assert_eq!(
        dist_to_cells(&el("5"), &[ann.clone()]).unwrap(),
        CutValue::attained(NormValue::theta(1))
    );
    assert_eq!(
        dist_to_cells(&el("5 + t^4"), &[ann]).unwrap(),
        CutValue::attained(NormValue::theta(1))
    );
    assert_eq!(
        dist_to_points(&el("t"), &[el("t")]).unwrap(),
        CutValue::attained(NormValue::Zero)
    );
    assert!(dist_to_points(&el("t"), &[]).is_err());
}

#[test]
fn dist_to_punctured_ball_is_approached() {
    let c = Cell1D::new(
        el("0"),
        vec![annulus(
            CutValue::approached(NormValue::Zero),
            Some(CutValue::attained(NormValue::theta(1))),
        )],
    )
    .unwrap();
    assert_eq!(c.dist_cut(&el("0")), CutValue::approached(NormValue::Zero));
    assert_eq!(c.dist_cut(&el("t^5")), CutValue::attained(NormValue::Zero));
    assert_eq!(c.dist_cut(&el("1")), CutValue::attained(NormValue::ONE));
}

#[test]
fn delta_partition_examples() {
    assert_eq!(delta_partition_index(&pt(&["t", "1"])), 1);
    assert_eq!(delta_partition_index(&pt(&["1", "t"])), 2);
    assert_eq!(delta_partition_index(&pt(&["1", "1"])), 2);
    assert_eq!(delta_partition_index(&pt(&["t", "t^2", "t^2"])), 3);
}

#[test]
fn straighten_examples() {
    let cell = CellND::new(
        vec![
            AffineCenter::constant(el("0")),
            AffineCenter::new(vec![el("1")], el("0")).unwrap(),
        ],
        vec![],
    )
    .unwrap();
    assert_eq!(straighten(&cell, &pt(&["t", "t"])).unwrap(), pt(&["t", "0"]));
    let flat = CellND::new(
        vec![AffineCenter::constant(el("0")), AffineCenter::constant(el("0"))],
        vec![],
    )
    .unwrap();
    let x = pt(&["1 + t", "t^-2"]);
    assert_eq!(straighten(&flat, &x).unwrap(), x);
}

#[test]
fn fiber_box_examples() {
    let r = |s: &str| RvBox::exact_of(&el(s));
    let zeros2 = [el("0"), el("0")];
    let f = fiber_box(&[r("1"), r("t")], &zeros2, 2).unwrap();
    assert_eq!(f.dim(), 1);
    assert_eq!(f.boxes, vec![vec![r("1")]]);
    assert!(fiber_box(&[r("t"), r("1")], &zeros2, 2).is_err());
    let zeros3 = [el("0"), el("0"), el("0")];
    let g = fiber_box(&[r("1"), r("1"), r("t")], &zeros3, 3).unwrap();
    assert_eq!(g.boxes, vec![vec![r("1"), r("1")]]);
}

#[test]
fn recentering_keeps_member_set() {
    // |x| = 1 around 0, moved to t: unchanged boxes since |t| < 1
    let c = Cell1D::new(el("0"), vec![RvBox::sphere(NormValue::ONE)]).unwrap();
    let moved = c.recentered(&el("t")).unwrap();
    assert_eq!(moved.boxes, c.boxes);
    // exact slice at the displacement norm is re-expressed
    let d = Cell1D::new(el("0"), vec![RvBox::exact_of(&el("2"))]).unwrap();
    let m = d.recentered(&el("1")).unwrap();
    assert_eq!(m.boxes, vec![RvBox::exact_of(&el("1"))]);
    // a full sphere at the displacement norm cannot be described
    assert!(c.recentered(&el("1")).is_err());
}

#[test]
fn overlapping_boxes_rejected() {
    assert!(Cell1D::new(
        el("0"),
        vec![RvBox::sphere(NormValue::ONE), RvBox::exact_of(&el("3 + t"))]
    )
    .is_err());
}

fn arb_field() -> impl Strategy<Value = FieldDescriptor> {
    prop_oneof![Just(T), Just(PU), Just(FieldDescriptor::p_adic(3).unwrap())]
}

fn arb_box(field: FieldDescriptor) -> impl Strategy<Value = RvBox> {
    let unit = if field.prime().is_some() { 1i64..3 } else { -3i64..4 };
    prop_oneof![
        (-3i64..4, unit.clone()).prop_filter_map("nonzero unit", move |(e, u)| {
            (u != 0).then(|| RvBox::Exact(rv_int(e, big(u))))
        }),
        (-3i64..4, 0i64..4, any::<bool>(), any::<bool>(), prop::option::of(unit)).prop_filter_map(
            "nonempty annulus",
            move |(hi, span, lo_att, hi_att, u)| {
                let b = RvBox::Annulus {
                    lower: CutValue {
                        norm: NormValue::theta(hi + span),
                        attained: lo_att,
                    },
                    upper: Some(CutValue {
                        norm: NormValue::theta(hi),
                        attained: hi_att,
                    }),
                    unit: u.filter(|x| *x != 0).map(big),
                };
                b.normalized(field).ok()
            }
        ),
    ]
}

fn arb_cell() -> impl Strategy<Value = Cell1D> {
    arb_field().prop_flat_map(|f| {
        (arb_box(f), any::<u64>()).prop_map(move |(b, seed)| {
            let mut r = sampling::rng(seed);
            let c = sampling::random_element(&mut r, f, Window::new(-2, 2));
            Cell1D::new(c, vec![b]).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn members_respect_rho(cell in arb_cell(), seed in any::<u64>()) {
        let mut r = sampling::rng(seed);
        let rho = cell.rho();
        for _ in 0..10 {
            let x = sampling::sample_cell_member(&mut r, &cell, Window::DEFAULT);
            prop_assert!(cell.contains(&x));
            prop_assert!(!rho.admits_lt(x.dist(&cell.center)));
        }
    }

    #[test]
    fn dist_cut_is_sound(cell in arb_cell(), seed in any::<u64>()) {
        let mut r = sampling::rng(seed);
        let f = cell.field();
        let x = sampling::random_element(&mut r, f, Window::new(-3, 4));
        let cut = cell.dist_cut(&x);
        for _ in 0..20 {
            let y = sampling::sample_cell_member(&mut r, &cell, Window::DEFAULT);
            // no member is strictly closer than the infimum
            prop_assert!(!cut.admits_lt(x.dist(&y)));
        }
        if cut.attained && !cell.contains(&x) {
            prop_assert!(!cut.norm.is_zero());
        }
    }

    #[test]
    fn straighten_round_trip(seed in any::<u64>(), n in 1usize..4) {
        let mut r = sampling::rng(seed);
        let f = T;
        let w = Window::new(-2, 3);
        let centers: Vec<AffineCenter> = (0..n)
            .map(|i| {
                let coeffs = (0..i)
                    .map(|_| sampling::random_element(&mut r, f, Window::new(0, 3)))
                    .collect();
                AffineCenter::new(coeffs, sampling::random_element(&mut r, f, w)).unwrap()
            })
            .collect();
        let cell = CellND::new(centers, vec![]).unwrap();
        let x = sampling::random_point(&mut r, f, n, w);
        let y = sampling::random_point(&mut r, f, n, w);
        let sx = straighten(&cell, &x).unwrap();
        let sy = straighten(&cell, &y).unwrap();
        prop_assert_eq!(unstraighten(&cell, &sx).unwrap(), x.clone());
        prop_assert_eq!(sx.dist(&sy), x.dist(&y));
    }

    #[test]
    fn delta_partition_tiles(seed in any::<u64>(), n in 1usize..5) {
        let mut r = sampling::rng(seed);
        let x = sampling::random_point(&mut r, T, n, Window::new(-1, 1));
        let norms: Vec<NormValue> = x.coords().iter().map(FieldElement::norm).collect();
        let members: Vec<usize> = (0..n)
            .filter(|&i| (0..i).all(|j| norms[i] <= norms[j]) && (i + 1..n).all(|j| norms[i] < norms[j]))
            .map(|i| i + 1)
            .collect();
        prop_assert_eq!(members, vec![delta_partition_index(&x)]);
    }

    #[test]
    fn fiber_is_independent_of_representative(seed in any::<u64>()) {
        let mut r = sampling::rng(seed);
        let w = Window::new(-2, 2);
        let centers: Vec<FieldElement> = (0..3).map(|_| sampling::random_element(&mut r, T, w)).collect();
        let mut lambdas: Vec<RvBox> = (0..3)
            .map(|_| RvBox::Exact(rv_int(r.gen_range(-2..=2), sampling::random_unit(&mut r, T))))
            .collect();
        let i = 2usize;
        lambdas[i - 1] = RvBox::Exact(rv_int(3, big(1)));
        let fiber = fiber_box(&lambdas, &centers, i).unwrap();
        let full = CellND::new(centers.iter().cloned().map(AffineCenter::constant).collect(), vec![lambdas.clone()]).unwrap();
        let xi_a = &centers[i - 1] + &sampling::sample_box_member(&mut r, T, &lambdas[i - 1], w);
        let xi_b = &centers[i - 1] + &sampling::sample_box_member(&mut r, T, &lambdas[i - 1], w);
        for _ in 0..5 {
            let rest: Vec<FieldElement> = [0usize, 2]
                .iter()
                .map(|&j| &centers[j] + &sampling::sample_box_member(&mut r, T, &lambdas[j], w))
                .collect();
            let p = Point::new(rest.clone()).unwrap();
            prop_assert!(fiber.contains(&p).unwrap());
            for xi in [&xi_a, &xi_b] {
                let full_pt = Point::new(vec![rest[0].clone(), xi.clone(), rest[1].clone()]).unwrap();
                prop_assert!(full.contains(&full_pt).unwrap());
            }
        }
    }
}

#[test]
fn puiseux_exponent_helper() {
    let x = FieldElement::uniformizer_pow(PU, Rational64::new(1, 3)).unwrap();
    assert!(RvBox::sphere(x.norm()).contains(&x));
}
