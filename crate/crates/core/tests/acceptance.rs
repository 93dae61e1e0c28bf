//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons
//! only. Every instance is seeded, so a failure line is reproducible from
//! the seed it prints.

use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use ultralip::extension::{
    extend_cell_risometry_line, extend_finite_line, extend_finite_nd, extend_finite_plane_ladder, extend_via_reduction,
    glue_conditions, glue_conditions_pointwise, glue_union, glue_vanishing_finite, ExtendedFunction, Region,
};
use ultralip::generate::{
    random_domain, random_finite_function, random_non_one_cell_balls, random_one_cell_balls, random_risometric_map,
    random_within, vanishing_values,
};
use ultralip::lipschitz::{
    is_lipschitz, lipschitz_constant, reduce_to_risometry, risometry_check, FiniteFunction, LipschitzReport,
};
use ultralip::sampling::{self, random_disjoint_cells, sample_cell_member, sample_points, SampleRng, Window};
use ultralip::skeleton::{
    build_skeleton, cell_configuration, configuration_of, one_cell, risometry_image_cell, skeleton_condition_violation,
    transport_skeleton, Skeleton,
};
use ultralip::{Cell1D, Error, FieldDescriptor, FieldElement, NormValue, Point};

const T: FieldDescriptor = FieldDescriptor::TAdic;
const P: FieldDescriptor = FieldDescriptor::Puiseux;

type Check = Result<String, String>;

fn el(field: FieldDescriptor, s: &str) -> FieldElement {
    FieldElement::parse(field, s).unwrap()
}

/// Runs `f` over the seeds in parallel; the first failure (by seed) wins.
fn over_seeds<S: Send>(base: u64, count: u64, f: impl Fn(u64) -> Result<S, String> + Sync) -> Result<Vec<S>, String> {
    let results: Vec<Result<S, String>> = (0..count).into_par_iter().map(|i| f(base + i)).collect();
    results.into_iter().collect()
}

fn tabulate(f: &ExtendedFunction, pts: &[Point]) -> FiniteFunction {
    f.tabulate(pts).expect("same dimension and field")
}

fn describe_violation(tab: &FiniteFunction, rep: &LipschitzReport) -> String {
    let (x, y) = &rep.violations[0];
    format!(
        "|F({x}) − F({y})| = {} > |x − y| = {} (F values {} and {})",
        tab.get(x).unwrap().dist(tab.get(y).unwrap()),
        x.dist(y),
        tab.get(x).unwrap(),
        tab.get(y).unwrap()
    )
}

fn lipschitz_on(f: &ExtendedFunction, pts: &[Point], eps: NormValue) -> Result<usize, String> {
    let tab = tabulate(f, pts);
    let rep = is_lipschitz(&tab, eps).unwrap();
    if rep.passes() {
        Ok(tab.len() * (tab.len() - 1) / 2)
    } else {
        Err(describe_violation(&tab, &rep))
    }
}

fn extends(f: &ExtendedFunction, data: &FiniteFunction) -> Result<(), String> {
    match f.first_disagreement(data) {
        None => Ok(()),
        Some((x, want, got)) => Err(format!("F({x}) = {got} but f({x}) = {want}")),
    }
}

fn generator_sound(f: &FiniteFunction) -> Result<(), String> {
    match is_lipschitz(f, NormValue::ONE).unwrap().passes() {
        true => Ok(()),
        false => Err("generator produced non-1-Lipschitz data".into()),
    }
}

fn domain(f: &FiniteFunction) -> Vec<Point> {
    f.points().cloned().collect()
}

// ---------------------------------------------------------------- 1

fn criterion_1() -> Check {
    let w = Window::new(-6, 6);
    let start = Instant::now();
    let pairs = over_seeds(1_000, 500, |seed| {
        let mut r = sampling::rng(seed);
        let k = r.gen_range(1..=12);
        let f = random_finite_function(&mut r, T, 1, k, w);
        generator_sound(&f).map_err(|e| format!("seed {seed}: {e}"))?;
        let big_f = extend_finite_line(&f).map_err(|e| format!("seed {seed}: {e}"))?;
        extends(&big_f, &f).map_err(|e| format!("seed {seed}: {e}"))?;
        let pts = sample_points(&mut r, T, 1, &domain(&f), 200, w);
        lipschitz_on(&big_f, &pts, NormValue::ONE).map_err(|e| format!("seed {seed}: {e}"))
    })?;
    let took = start.elapsed();
    if took > Duration::from_secs(30) {
        return Err(format!("correct, but took {took:.1?} (budget 30 s)"));
    }
    Ok(format!("500 instances, {} pairs, {took:.1?}", pairs.iter().sum::<usize>()))
}

// ---------------------------------------------------------------- 2

fn criterion_2() -> Check {
    let w = Window::new(-5, 5);
    let pairs = over_seeds(2_000, 300, |seed| {
        let fail = |e: String| format!("seed {seed}: {e}");
        let mut r = sampling::rng(seed);
        let k = r.gen_range(2..=10);
        let pts = random_domain(&mut r, T, 1, k, w);
        let nb = r.gen_range(0..pts.len());
        let vals = vanishing_values(&mut r, T, &pts, nb, w);
        let b: Vec<Point> = pts[..nb].to_vec();
        // A: every non-B point, plus (sometimes) B points carrying their zero
        let a_entries: Vec<(Point, FieldElement)> = pts
            .iter()
            .cloned()
            .zip(vals.iter().cloned())
            .enumerate()
            .filter(|(i, _)| *i >= nb || r.gen_bool(0.3))
            .map(|(_, e)| e)
            .collect();
        let fa = FiniteFunction::new(1, a_entries).unwrap();
        let all = FiniteFunction::new(1, pts.iter().cloned().zip(vals.iter().cloned()).collect()).unwrap();
        generator_sound(&all).map_err(fail)?;
        let g = glue_vanishing_finite(&fa, &b, &extend_finite_line).map_err(|e| fail(e.to_string()))?;

        // value table on the finite data
        let a_pts = domain(&fa);
        for (x, v) in fa.entries() {
            let want = if b.contains(x) { FieldElement::zero(T) } else { v.clone() };
            if g.eval(x) != want {
                return Err(fail(format!("G({x}) = {}, table says {want}", g.eval(x))));
            }
        }
        for x in &b {
            if !g.eval(x).is_zero() {
                return Err(fail(format!("G({x}) = {} on B", g.eval(x))));
            }
        }
        // and off the data: G = F where (1) and not (2), else 0
        let samples = sample_points(&mut r, T, 1, &domain(&all), 100, w);
        if !fa.is_empty() {
            let big_f = extend_finite_line(&fa).unwrap();
            for x in &samples {
                let c = glue_conditions_pointwise(&a_pts, &b, x);
                if c != glue_conditions(&Region::Points(a_pts.clone()), &Region::Points(b.clone()), x) {
                    return Err(fail(format!("cut and pointwise conditions differ at {x}")));
                }
                let want = if c.one && !c.two { big_f.eval(x) } else { FieldElement::zero(T) };
                if g.eval(x) != want {
                    return Err(fail(format!("G({x}) = {}, expected {want}", g.eval(x))));
                }
            }
        }
        lipschitz_on(&g, &samples, NormValue::ONE).map_err(fail)
    })?;
    Ok(format!("300 instances, value table exact, {} pairs 1-Lipschitz", pairs.iter().sum::<usize>()))
}

// ---------------------------------------------------------------- 3

struct UnionStats {
    pairs: usize,
    mismatches: usize,
    example: Option<String>,
}

fn criterion_3() -> Check {
    let w = Window::new(-5, 5);
    let stats = over_seeds(3_000, 200, |seed| {
        let fail = |e: String| format!("seed {seed}: {e}");
        let mut r = sampling::rng(seed);
        let k = r.gen_range(2..=10);
        let f = random_finite_function(&mut r, T, 1, k, w);
        generator_sound(&f).map_err(fail)?;
        let s = r.gen_range(2..=4).min(f.len());
        let mut entries = f.entries().to_vec();
        entries.shuffle(&mut r);
        let mut parts: Vec<Vec<(Point, FieldElement)>> = vec![Vec::new(); s];
        for (i, e) in entries.into_iter().enumerate() {
            parts[if i < s { i } else { r.gen_range(0..s) }].push(e);
        }
        let parts: Vec<FiniteFunction> = parts.into_iter().map(|p| FiniteFunction::new(1, p).unwrap()).collect();
        let g = glue_union(&parts, &extend_finite_line).map_err(|e| fail(e.to_string()))?;
        extends(&g, &f).map_err(fail)?;
        let samples = sample_points(&mut r, T, 1, &[], 100, w);
        let all: Vec<Point> = domain(&f).into_iter().chain(samples.iter().cloned()).collect();
        let pairs = lipschitz_on(&g, &all, NormValue::ONE).map_err(fail)?;
        let direct = extend_finite_line(&f).unwrap();
        let mut mismatches = 0;
        let mut example = None;
        for x in &samples {
            let (a, b) = (g.eval(x), direct.eval(x));
            if a != b {
                mismatches += 1;
                example.get_or_insert_with(|| format!("seed {seed}: at x = {x} glue_union gives {a}, nearest average {b}"));
            }
        }
        Ok(UnionStats { pairs, mismatches, example })
    })?;
    let pairs: usize = stats.iter().map(|s| s.pairs).sum();
    let bad: Vec<&UnionStats> = stats.iter().filter(|s| s.mismatches > 0).collect();
    if bad.is_empty() {
        return Ok(format!("200 instances extend f, {pairs} pairs 1-Lipschitz, oracle equal on 20000 points"));
    }
    Err(format!(
        "extension and 1-Lipschitz hold on all 200 instances ({pairs} pairs), but oracle equivalence fails on {} instances / {} of 20000 points; first: {}",
        bad.len(),
        bad.iter().map(|s| s.mismatches).sum::<usize>(),
        bad[0].example.as_ref().unwrap()
    ))
}

// ---------------------------------------------------------------- 4

fn same_members(rng: &mut SampleRng, a: &Cell1D, b: &Cell1D, anchor: &FieldElement, w: Window) -> Option<FieldElement> {
    for _ in 0..12 {
        let x = sample_cell_member(rng, a, w);
        let y = sample_cell_member(rng, b, w);
        let z = anchor + &random_within(rng, a.field(), NormValue::theta(w.lo));
        for p in [x, y, z] {
            if a.contains(&p) != b.contains(&p) {
                return Some(p);
            }
        }
    }
    None
}

fn attached_points(sk: &Skeleton) -> Vec<FieldElement> {
    sk.attachments.iter().map(|a| a.point.clone()).collect()
}

fn criterion_4() -> Check {
    let w = Window::new(-4, 4);
    let points = over_seeds(4_000, 300, |seed| {
        let fail = |e: String| format!("seed {seed}: {e}");
        let mut r = sampling::rng(seed);
        let k = r.gen_range(1..=6);
        let cells = random_disjoint_cells(&mut r, T, k, w);
        let sk = build_skeleton(&cells).map_err(|e| fail(e.to_string()))?;
        if let Some((a, b)) = skeleton_condition_violation(&sk) {
            return Err(fail(format!("skeleton points {a} and {b} violate the distance condition")));
        }
        for s in sk.points() {
            if let Some(i) = cells.iter().position(|c| c.contains(s)) {
                return Err(fail(format!("skeleton point {s} lies in cell {i}")));
            }
        }
        for a in &sk.attachments {
            let c = &cells[a.cell];
            if a.recentered.rho() != c.rho() {
                return Err(fail(format!("cell {} changes radius when re-attached", a.cell)));
            }
            if let Some(x) = same_members(&mut r, c, &a.recentered, &a.point, w) {
                return Err(fail(format!("cell {} and its re-attachment differ at {x}", a.cell)));
            }
        }
        let mut order: Vec<usize> = (0..cells.len()).collect();
        order.shuffle(&mut r);
        let shuffled: Vec<Cell1D> = order.iter().map(|&i| cells[i].clone()).collect();
        let sk2 = build_skeleton(&shuffled).map_err(|e| fail(e.to_string()))?;
        let mut p1 = sk.point_set();
        let mut p2 = sk2.point_set();
        p1.sort_by(FieldElement::canonical_cmp);
        p2.sort_by(FieldElement::canonical_cmp);
        let att1 = attached_points(&sk);
        let att2 = attached_points(&sk2);
        if p1 != p2 || order.iter().enumerate().any(|(j, &i)| att1[i] != att2[j]) {
            return Err(fail(format!("permuting the cells changes the skeleton ({p1:?} vs {p2:?})")));
        }
        Ok(p1.len())
    })?;
    Ok(format!("300 families, {} skeleton points, all checks exact", points.iter().sum::<usize>()))
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Check {
    let w = Window::new(-4, 4);
    let good = over_seeds(5_000, 200, |seed| {
        let fail = |e: String| format!("seed {seed}: {e}");
        let mut r = sampling::rng(seed);
        let k = r.gen_range(1..=5);
        let balls = random_one_cell_balls(&mut r, T, k, w);
        let cell = one_cell(&balls).map_err(|e| fail(e.to_string()))?;
        let e = balls[0].radius.exponent().unwrap();
        for _ in 0..500 {
            let c = &balls[r.gen_range(0..balls.len())].center;
            let x = match r.gen_range(0..3) {
                0 => c + &random_within(&mut r, T, NormValue::Theta(e + 1)),
                1 => {
                    let d = sampling::random_exponent(&mut r, T, e - 2, e + 2);
                    let rv = ultralip::RvValue::new(d, sampling::random_unit(&mut r, T));
                    c + &sampling::random_with_rv(&mut r, T, &rv)
                }
                _ => sampling::random_element(&mut r, T, w),
            };
            if cell.contains(&x) != balls.iter().any(|b| b.contains(&x)) {
                return Err(fail(format!("membership differs at {x}")));
            }
        }
        Ok(())
    })?;
    let _ = good;
    over_seeds(5_500, 200, |seed| {
        let fail = |e: String| format!("seed {seed}: {e}");
        let mut r = sampling::rng(seed);
        let k = r.gen_range(1..=4);
        let balls = random_non_one_cell_balls(&mut r, T, k, w);
        match one_cell(&balls) {
            Err(Error::HypothesisViolation { a, b, .. }) => {
                let (a, b) = (el(T, &a), el(T, &b));
                let ra = balls.iter().find(|x| x.center == a).map(|x| x.radius);
                let rb = balls.iter().find(|x| x.center == b).map(|x| x.radius);
                match (ra, rb) {
                    (Some(ra), Some(rb)) if a.dist(&b) != ra.max(rb) => Ok(()),
                    _ => Err(fail(format!("witness ({a}, {b}) does not violate the hypothesis"))),
                }
            }
            Ok(_) => Err(fail("violating family accepted".into())),
            Err(e) => Err(fail(format!("unexpected error {e}"))),
        }
    })?;
    Ok("200 families agree with the ball union on 500 points each; 200 violating families return exact witness pairs".into())
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Check {
    let w = Window::new(-4, 4);
    let pairs = over_seeds(6_000, 200, |seed| {
        let fail = |e: String| format!("seed {seed}: {e}");
        let mut r = sampling::rng(seed);
        let k = r.gen_range(1..=4);
        let map = random_risometric_map(&mut r, T, k, w);
        let cells: Vec<Cell1D> = map.pieces.iter().map(|p| p.cell.clone()).collect();
        let mut images = Vec::new();
        for (j, p) in map.pieces.iter().enumerate() {
            let img = risometry_image_cell(&p.cell, &p.slope, &p.intercept).map_err(|e| fail(e.to_string()))?;
            let same = img.boxes.len() == p.cell.boxes.len() && img.boxes.iter().all(|b| p.cell.boxes.contains(b));
            if !same {
                return Err(fail(format!("piece {j}: image box set differs")));
            }
            images.push(img);
        }
        if cell_configuration(&cells) != cell_configuration(&images) {
            return Err(fail("cell configurations differ".into()));
        }
        let maps: Vec<_> = map.pieces.iter().map(|p| (p.slope.clone(), p.intercept.clone())).collect();
        let tr = transport_skeleton(&cells, &maps).map_err(|e| fail(e.to_string()))?;
        let src: Vec<(FieldElement, ultralip::CutValue)> = tr
            .source
            .levels
            .iter()
            .flat_map(|l| l.points.iter().map(move |s| (s.clone(), l.radius)))
            .collect();
        let img: Vec<(FieldElement, ultralip::CutValue)> = src
            .iter()
            .map(|(s, _)| {
                let t = tr.map_point(s).expect("transported").clone();
                let lvl = tr.image.level_of(&t).expect("image point");
                (t, tr.image.levels[lvl].radius)
            })
            .collect();
        if configuration_of(&src) != configuration_of(&img) {
            return Err(fail("transported skeleton configuration differs".into()));
        }

        let mut members = Vec::new();
        for c in &cells {
            for _ in 0..10 {
                members.push(Point::scalar(sample_cell_member(&mut r, c, w)));
            }
        }
        let on_c = FiniteFunction::from_samples(1, members.iter().map(|x| (x.clone(), map.eval(x.coord(0)).unwrap())).collect()).unwrap();
        let ris = risometry_check(&on_c, &[0]).unwrap();
        if let Some((x, y)) = ris.counterexample {
            return Err(fail(format!("combined map is not a risometry on ({x}, {y})")));
        }
        let f = extend_cell_risometry_line(&map).map_err(|e| fail(e.to_string()))?;
        extends(&f, &on_c).map_err(fail)?;
        let mut anchors: Vec<Point> = members.clone();
        anchors.extend(tr.source.points().cloned().map(Point::scalar));
        let samples = sample_points(&mut r, T, 1, &anchors, 200, w);
        for x in &samples[anchors.len()..] {
            if f.eval_split(x) != Some(f.eval(x)) {
                return Err(fail(format!("direct and split paths differ at {x}")));
            }
        }
        lipschitz_on(&f, &samples, NormValue::ONE).map_err(fail)
    })?;
    Ok(format!("200 risometries: box sets, configurations, risometry, split paths exact; {} pairs 1-Lipschitz", pairs.iter().sum::<usize>()))
}

// ---------------------------------------------------------------- 7

fn ladder_instance(seed: u64, n: usize, max_points: usize, w: Window) -> Result<usize, String> {
    let fail = |e: String| format!("seed {seed} (n = {n}): {e}");
    let mut r = sampling::rng(seed);
    let k = r.gen_range(1..=max_points);
    let f = random_finite_function(&mut r, T, n, k, w);
    generator_sound(&f).map_err(fail)?;
    let nd = extend_finite_nd(&f).map_err(|e| fail(e.to_string()))?;
    extends(&nd, &f).map_err(fail)?;
    let pts = sample_points(&mut r, T, n, &domain(&f), 300, w);
    if n == 2 {
        let plane = extend_finite_plane_ladder(&f).map_err(|e| fail(e.to_string()))?;
        extends(&plane, &f).map_err(fail)?;
        for x in &pts {
            if plane.eval(x) != nd.eval(x) {
                return Err(fail(format!("plane ladder and n-dimensional ladder differ at {x}")));
            }
        }
        lipschitz_on(&plane, &pts, NormValue::ONE).map_err(fail)
    } else {
        lipschitz_on(&nd, &pts, NormValue::ONE).map_err(fail)
    }
}

fn criterion_7() -> Check {
    let w = Window::new(-4, 4);
    let start = Instant::now();
    let plane = over_seeds(7_000, 200, |seed| ladder_instance(seed, 2, 10, w))?;
    let three = over_seeds(7_500, 200, |seed| ladder_instance(seed, 3, 6, w))?;
    let took = start.elapsed();
    if took > Duration::from_secs(60) {
        return Err(format!("correct, but took {took:.1?} (budget 60 s)"));
    }
    Ok(format!(
        "200 plane + 200 three-dimensional instances, {} pairs 1-Lipschitz, ladders agree, {took:.1?}",
        plane.iter().chain(&three).sum::<usize>()
    ))
}

// ---------------------------------------------------------------- 8

fn pipeline_instance(seed: u64, field: FieldDescriptor, q: Rational64) -> Result<NormValue, String> {
    let fail = |e: String| format!("seed {seed} ({field}, q = {q}): {e}");
    let mut r = sampling::rng(seed);
    let n = r.gen_range(1..=2);
    let w = Window::new(-3, 3);
    let k = r.gen_range(1..=8);
    let f = random_finite_function(&mut r, field, n, k, w);
    generator_sound(&f).map_err(fail)?;
    let eps_norm = NormValue::Theta(-q);
    let eps = FieldElement::of_norm(field, eps_norm).map_err(|e| fail(e.to_string()))?;
    let axes: Vec<usize> = (0..n).collect();
    let g = reduce_to_risometry(&f, eps_norm, &eps, &axes).map_err(|e| fail(e.to_string()))?;
    if !risometry_check(&g, &axes).unwrap().ok {
        return Err(fail("reduced data is not a risometry on the chosen axes".into()));
    }
    if !is_lipschitz(&g, NormValue::ONE).unwrap().passes() {
        return Err(fail("reduced data is not 1-Lipschitz".into()));
    }
    let ext: fn(&FiniteFunction) -> ultralip::Result<ExtendedFunction> =
        if n == 1 { extend_finite_line } else { extend_finite_plane_ladder };
    let big_f = extend_via_reduction(&f, &eps, &axes, &ext).map_err(|e| fail(e.to_string()))?;
    extends(&big_f, &f).map_err(fail)?;
    let pts = sample_points(&mut r, field, n, &domain(&f), 120, w);
    let tab = tabulate(&big_f, &pts);
    let c = lipschitz_constant(&tab).unwrap().constant;
    if c > eps_norm {
        return Err(fail(format!("measured constant {c} exceeds {eps_norm}")));
    }
    Ok(c)
}

fn criterion_8() -> Check {
    let qs = [
        Rational64::new(1, 2),
        Rational64::new(1, 3),
        Rational64::new(1, 10),
        Rational64::new(1, 97),
        Rational64::new(1, 1000),
    ];
    let dense = over_seeds(8_000, 100, |seed| pipeline_instance(seed, P, qs[(seed % 5) as usize]))?;
    let discrete = over_seeds(8_500, 100, |seed| pipeline_instance(seed, T, Rational64::from_integer(1)))?;
    let dmax = dense.iter().max().unwrap();
    let tmax = discrete.iter().max().unwrap();
    Ok(format!(
        "puiseux: 100 instances within Θ(−q) for q down to 1/1000 (largest measured {dmax}); t-adic: 100 instances within Θ(−1) (largest {tmax})"
    ))
}

// ---------------------------------------------------------------- 9

fn curated(field: FieldDescriptor) -> (NormValue, bool) {
    let f = FiniteFunction::on_line(vec![
        (el(field, "1"), el(field, "0")),
        (el(field, "4"), el(field, "0")),
        (el(field, "2"), el(field, "1")),
    ])
    .unwrap();
    let big_f = extend_finite_line(&f).unwrap();
    let mut pts = domain(&f);
    pts.push(Point::scalar(el(field, "0")));
    let mut r = sampling::rng(9);
    pts.extend(sample_points(&mut r, field, 1, &[], 40, Window::new(-2, 2)));
    let warn = pts.iter().any(|p| big_f.eval_checked(p).unwrap().hypothesis_warning);
    let c = lipschitz_constant(&tabulate(&big_f, &pts)).unwrap().constant;
    (c, warn)
}

fn criterion_9() -> Check {
    let (cp, wp) = curated(FieldDescriptor::p_adic(3).unwrap());
    let (ct, wt) = curated(T);
    if wp && cp > NormValue::ONE && !wt && ct <= NormValue::ONE {
        Ok(format!(
            "3-adic: warning raised, constant {cp} > 1 (F(0) = 1/3 averages three equidistant points); t-adic: no warning, constant {ct}"
        ))
    } else {
        Err(format!("3-adic: warning {wp}, constant {cp}; t-adic: warning {wt}, constant {ct}"))
    }
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("finite-line extension", criterion_1),
        ("partition gluing", criterion_2),
        ("partition lemma (glue_union)", criterion_3),
        ("skeleton", criterion_4),
        ("one-cell detection", criterion_5),
        ("risometry machinery", criterion_6),
        ("delta-ladder", criterion_7),
        ("constant dichotomy", criterion_8),
        ("equicharacteristic-zero boundary", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {} ({name}): PASS [{took:.1?}] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{took:.1?}] {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
