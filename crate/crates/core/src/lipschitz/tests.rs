use num_rational::Rational64;
use proptest::prelude::*;

use super::*;
use crate::geometry::RvBox;
use crate::sampling::{self, Window};

const T: FieldDescriptor = FieldDescriptor::TAdic;

fn el(s: &str) -> FieldElement {
    FieldElement::parse(T, s).unwrap()
}

fn line(pairs: &[(&str, &str)]) -> FiniteFunction {
    FiniteFunction::on_line(pairs.iter().map(|(x, y)| (el(x), el(y))).collect()).unwrap()
}

#[test]
fn constant_examples() {
    let r = lipschitz_constant(&line(&[("0", "0"), ("t", "t")])).unwrap();
    assert_eq!(r.constant, NormValue::ONE);

    let f = line(&[("0", "0"), ("t^2", "t")]);
    let r = lipschitz_constant(&f).unwrap();
    assert_eq!(r.constant, NormValue::theta(-1));
    assert_eq!(r.witness, Some((Point::scalar(el("0")), Point::scalar(el("t^2")))));

    let c = lipschitz_constant(&line(&[("0", "5"), ("t", "5"), ("1", "5")])).unwrap();
    assert_eq!(c.constant, NormValue::Zero);
    assert_eq!(c.witness, None);
}

#[test]
fn is_lipschitz_examples() {
    assert!(is_lipschitz(&line(&[("0", "0"), ("t", "t")]), NormValue::ONE).unwrap().passes());
    let r = is_lipschitz(&line(&[("0", "0"), ("t^2", "t")]), NormValue::ONE).unwrap();
    assert!(!r.passes());
    assert_eq!(r.violations, vec![(Point::scalar(el("0")), Point::scalar(el("t^2")))]);
    assert!(is_lipschitz(&line(&[("1", "t^-9")]), NormValue::theta(5)).unwrap().passes());
}

#[test]
fn duplicate_points_rejected() {
    let e = FiniteFunction::on_line(vec![(el("t"), el("0")), (el("t"), el("1"))]).unwrap_err();
    assert_eq!(e, Error::DuplicatePoint("(t)".into()));
}

#[test]
fn risometry_examples() {
    let sphere = Cell1D::new(el("0"), vec![RvBox::sphere(NormValue::ONE)]).unwrap();
    let piece = |slope: &str| AffinePiece {
        cell: sphere.clone(),
        slope: el(slope),
        intercept: el("0"),
    };
    assert!(piece("1 + t").is_risometric());
    assert!(!piece("2").is_risometric());
    let map = PiecewiseAffineMap1D::new(vec![piece("2")]).unwrap();
    assert_eq!(map.risometry_check(), Err(0));

    let f = line(&[("0", "0"), ("t", "t + t^2")]);
    assert!(risometry_check(&f, &[0]).unwrap().ok);
    let g = line(&[("0", "0"), ("t", "2*t")]);
    assert!(!risometry_check(&g, &[0]).unwrap().ok);
}

#[test]
fn reduce_examples() {
    let t_inv = el("t^-1");
    let f = line(&[("1", "1"), ("t", "t"), ("1 + t^2", "1 + t^2")]);
    let g = reduce_to_risometry(&f, NormValue::theta(-1), &t_inv, &[0]).unwrap();
    for (x, gx) in g.entries() {
        assert_eq!(gx, &(&el("1 + t") * x.coord(0)));
    }
    assert!(risometry_check(&g, &[0]).unwrap().ok);

    let zero = line(&[("1", "0"), ("t", "0")]);
    let g0 = reduce_to_risometry(&zero, NormValue::theta(-1), &t_inv, &[0]).unwrap();
    for (x, gx) in g0.entries() {
        assert_eq!(gx, x.coord(0));
    }

    let square = line(&[("t^-1", "t^-2"), ("t^-1 + 1", "t^-2 + 2*t^-1 + 1")]);
    assert!(matches!(
        reduce_to_risometry(&square, NormValue::theta(-1), &t_inv, &[0]),
        Err(Error::NotLipschitz { .. })
    ));
    assert!(reduce_to_risometry(&f, NormValue::ONE, &el("1"), &[0]).is_err());
    assert!(reduce_to_risometry(&f, NormValue::theta(-2), &t_inv, &[0]).is_err());
}

#[test]
fn restore_examples() {
    let t_inv = el("t^-1");
    let f = line(&[("0", "0"), ("t", "t")]);
    let g = reduce_to_risometry(&f, NormValue::theta(-1), &t_inv, &[0]).unwrap();
    assert_eq!(restore_from_risometry(&g, &t_inv, &[0]), f);

    let big_g = line(&[("0", "0"), ("t", "0"), ("1", "t")]);
    let back = restore_from_risometry(&big_g, &t_inv, &[0]);
    assert!(lipschitz_constant(&back).unwrap().constant <= NormValue::theta(-1));

    let id = line(&[("0", "0"), ("t", "t"), ("5", "5")]);
    for (_, v) in restore_from_risometry(&id, &t_inv, &[0]).entries() {
        assert!(v.is_zero());
    }
}

#[test]
fn rescale_examples() {
    let t_inv = el("t^-1");
    let id = line(&[("0", "0"), ("t", "t"), ("1", "1")]);
    let r = rescale(&id, &t_inv).unwrap();
    for (x, v) in r.entries() {
        assert_eq!(x.coord(0), v);
    }
    let lin = line(&[("1", "t"), ("t^2", "t^3")]);
    let r = rescale(&lin, &t_inv).unwrap();
    for (x, v) in r.entries() {
        assert_eq!(&(&el("t") * x.coord(0)), v);
    }
    assert!(rescale(&lin, &el("0")).is_err());
}

fn arb_finite(n: usize) -> impl Strategy<Value = FiniteFunction> {
    (any::<u64>(), 1usize..8).prop_map(move |(seed, k)| {
        let mut r = sampling::rng(seed);
        let w = Window::new(-3, 3);
        let pts: Vec<(Point, FieldElement)> = (0..k)
            .map(|_| (sampling::random_point(&mut r, T, n, w), sampling::random_element(&mut r, T, w)))
            .collect();
        FiniteFunction::from_samples(n, pts).unwrap()
    })
}

proptest! {
    #[test]
    fn witness_realizes_constant(f in arb_finite(2)) {
        let r = lipschitz_constant(&f).unwrap();
        match &r.witness {
            None => prop_assert!(r.constant.is_zero()),
            Some((x, y)) => {
                prop_assert_eq!(pair_ratio(x, f.get(x).unwrap(), y, f.get(y).unwrap()), r.constant);
            }
        }
        if let NormValue::Theta(e) = r.constant {
            prop_assert!(is_lipschitz(&f, r.constant).unwrap().passes());
            let smaller = NormValue::Theta(e + 1);
            prop_assert!(!is_lipschitz(&f, smaller).unwrap().passes());
        }
    }

    #[test]
    fn rescale_preserves_constant(f in arb_finite(1), e in -3i64..4) {
        prop_assume!(e != 0);
        let eps = FieldElement::uniformizer_pow(T, Rational64::from_integer(e)).unwrap();
        let g = rescale(&f, &eps).unwrap();
        prop_assert_eq!(lipschitz_constant(&g).unwrap().constant, lipschitz_constant(&f).unwrap().constant);
    }

    #[test]
    fn reduce_then_restore_is_identity(f in arb_finite(2), k in 1i64..4) {
        // make f 1-Lipschitz by scaling values down far enough
        let c = lipschitz_constant(&f).unwrap().constant;
        let shrink = match c {
            NormValue::Zero => FieldElement::one(T),
            NormValue::Theta(e) => FieldElement::uniformizer_pow(T, -e).unwrap(),
        };
        let f1 = f.map_values(|_, v| v * &shrink);
        prop_assert!(is_lipschitz(&f1, NormValue::ONE).unwrap().passes());
        let eps = FieldElement::uniformizer_pow(T, Rational64::from_integer(-k)).unwrap();
        let axes = [0usize, 1];
        let g = reduce_to_risometry(&f1, eps.norm(), &eps, &axes).unwrap();
        prop_assert!(risometry_check(&g, &axes).unwrap().ok);
        prop_assert!(is_lipschitz(&g, NormValue::ONE).unwrap().passes());
        prop_assert_eq!(restore_from_risometry(&g, &eps, &axes), f1);
    }

    #[test]
    fn risometric_pieces_preserve_ball_diameters(seed in any::<u64>()) {
        let mut r = sampling::rng(seed);
        let w = Window::new(-2, 2);
        let m = sampling::random_element(&mut r, T, Window::new(1, 3));
        let slope = &FieldElement::one(T) + &m;
        let b = sampling::random_element(&mut r, T, w);
        let piece = AffinePiece { cell: Cell1D::new(FieldElement::zero(T), vec![RvBox::sphere(NormValue::ONE)]).unwrap(), slope, intercept: b };
        prop_assert!(piece.is_risometric());
        for _ in 0..10 {
            let x = sampling::sample_cell_member(&mut r, &piece.cell, w);
            let y = sampling::sample_cell_member(&mut r, &piece.cell, w);
            prop_assert_eq!(piece.eval(&x).dist(&piece.eval(&y)), x.dist(&y));
            prop_assert_eq!((&piece.eval(&x) - &piece.eval(&y)).rv(), (&x - &y).rv());
        }
    }
}
