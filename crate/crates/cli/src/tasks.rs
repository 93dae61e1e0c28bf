//! Construction plus the verification suite for each task.

use serde_json::{json, Value};
use ultralip::extension::{
    extend_cell_risometry_line, extend_finite_line, extend_finite_nd, extend_finite_plane_ladder,
    extend_graph_family_reduced, extend_via_reduction, glue_conditions, glue_conditions_pointwise, glue_union,
    glue_vanishing_finite, origins, ExtendedFunction, GraphFamily, Region,
};
use ultralip::io::{FiniteMethod, GlueTask, Instance, Task};
use ultralip::lipschitz::{is_lipschitz, risometry_check, FiniteFunction, LipschitzReport, PiecewiseAffineMap1D};
use ultralip::sampling::{self, SampleRng};
use ultralip::skeleton::{build_skeleton, risometry_image_cell, skeleton_condition_violation, Skeleton};
use ultralip::{Cell1D, Error, FieldDescriptor, FieldElement, NormValue, Point, Result};

use crate::Options;

#[derive(Clone, Debug)]
pub struct Verdict {
    pub check: &'static str,
    pub pass: bool,
    pub detail: String,
    pub witness: Option<Value>,
}

impl Verdict {
    pub fn ok(check: &'static str, detail: impl Into<String>) -> Self {
        Verdict {
            check,
            pass: true,
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn fail(check: &'static str, detail: impl Into<String>, witness: Value) -> Self {
        Verdict {
            check,
            pass: false,
            detail: detail.into(),
            witness: Some(witness),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({"check": self.check, "pass": self.pass, "detail": self.detail});
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        v
    }
}

/// What a task produced.
#[derive(Default)]
pub struct Outcome {
    pub extension: Option<ExtendedFunction>,
    pub skeleton: Option<Skeleton>,
    pub verdicts: Vec<Verdict>,
    pub lipschitz: Option<LipschitzReport>,
    pub samples: Option<FiniteFunction>,
    pub hypothesis_warning: bool,
}

pub fn target(opts: &Options, field: FieldDescriptor) -> Result<(NormValue, Option<FieldElement>)> {
    match opts.epsilon {
        None => Ok((NormValue::ONE, None)),
        Some(q) => {
            let eps = NormValue::Theta(-q);
            if eps <= NormValue::ONE {
                return Err(Error::Precondition(format!("--epsilon {q} must be positive (|ε| > 1)")));
            }
            Ok((eps, Some(FieldElement::of_norm(field, eps)?)))
        }
    }
}

fn finite_extender(method: FiniteMethod, n: usize) -> Result<fn(&FiniteFunction) -> Result<ExtendedFunction>> {
    let m = match method {
        FiniteMethod::Auto => match n {
            1 => FiniteMethod::Line,
            2 => FiniteMethod::Plane,
            _ => FiniteMethod::Nd,
        },
        m => m,
    };
    let (want, f): (Option<usize>, fn(&FiniteFunction) -> Result<ExtendedFunction>) = match m {
        FiniteMethod::Line => (Some(1), extend_finite_line),
        FiniteMethod::Plane => (Some(2), extend_finite_plane_ladder),
        _ => (None, extend_finite_nd),
    };
    match want {
        Some(w) if w != n => Err(Error::DimensionMismatch { expected: w, found: n }),
        _ => Ok(f),
    }
}

/// Builds the extension (or skeleton) only.
pub fn construct(inst: &Instance, opts: &Options) -> Result<(Option<ExtendedFunction>, Option<Skeleton>)> {
    let (_, eps) = target(opts, inst.field)?;
    if eps.is_some() && !matches!(inst.task, Task::ExtendFinite { .. }) {
        return Err(Error::Precondition("--epsilon applies to extend-finite only".into()));
    }
    Ok(match &inst.task {
        Task::ExtendFinite { function, method } => {
            let ext = finite_extender(*method, function.dim())?;
            let f = match eps {
                None => ext(function)?,
                Some(e) => {
                    let axes: Vec<usize> = (0..function.dim()).collect();
                    extend_via_reduction(function, &e, &axes, &ext)?
                }
            };
            (Some(f), None)
        }
        Task::ExtendCell { map } => (Some(extend_cell_risometry_line(map)?), None),
        Task::ExtendGraphs { family } => (Some(extend_graph_family_reduced(family)?), None),
        Task::Glue(GlueTask::Vanishing { a, b }) => (Some(glue_vanishing_finite(a, b, &extend_finite_line_or_nd)?), None),
        Task::Glue(GlueTask::Union { parts }) => (Some(glue_union(parts, &extend_finite_line_or_nd)?), None),
        Task::Skeleton { cells } => (None, Some(build_skeleton(cells)?)),
    })
}

fn extend_finite_line_or_nd(f: &FiniteFunction) -> Result<ExtendedFunction> {
    if f.dim() == 1 {
        extend_finite_line(f)
    } else {
        extend_finite_nd(f)
    }
}

fn pair_json(f: &FiniteFunction, x: &Point, y: &Point) -> Value {
    let (fx, fy) = (f.get(x).unwrap(), f.get(y).unwrap());
    json!({
        "x": x, "y": y, "fx": fx, "fy": fy,
        "value_distance": fx.dist(fy), "point_distance": x.dist(y),
    })
}

/// Tabulates `f` on `pts` and checks the target constant exactly.
pub fn lipschitz_verdict(
    f: &ExtendedFunction,
    pts: &[Point],
    eps: NormValue,
) -> Result<(Verdict, LipschitzReport, FiniteFunction, bool)> {
    let mut warn = false;
    let mut entries = Vec::with_capacity(pts.len());
    for p in pts {
        let e = f.eval_checked(p)?;
        warn |= e.hypothesis_warning;
        entries.push((p.clone(), e.value));
    }
    let tab = FiniteFunction::from_samples(f.dim, entries)?;
    let (v, rep) = stored_lipschitz(&tab, eps)?;
    Ok((v, rep, tab, warn))
}

pub fn stored_lipschitz(tab: &FiniteFunction, eps: NormValue) -> Result<(Verdict, LipschitzReport)> {
    let rep = is_lipschitz(tab, eps)?;
    let v = match rep.violations.first() {
        None => Verdict::ok("lipschitz", format!("constant {} ≤ {eps} over {} points", rep.constant, tab.len())),
        Some((x, y)) => Verdict::fail(
            "lipschitz",
            format!("{} pairs exceed {eps}; constant {}", rep.violations.len(), rep.constant),
            pair_json(tab, x, y),
        ),
    };
    Ok((v, rep))
}

/// `F(x) = expected` at every listed point.
pub fn agreement(
    check: &'static str,
    f: &ExtendedFunction,
    expected: impl IntoIterator<Item = (Point, FieldElement)>,
) -> Verdict {
    let mut count = 0;
    for (x, want) in expected {
        let got = f.eval(&x);
        if got != want {
            return Verdict::fail(
                check,
                format!("F({x}) = {got}, expected {want}"),
                json!({"x": x, "expected": want, "found": got}),
            );
        }
        count += 1;
    }
    Verdict::ok(check, format!("{count} points agree"))
}

fn cell_members(rng: &mut SampleRng, cells: &[Cell1D], per_cell: usize, opts: &Options) -> Vec<FieldElement> {
    let mut out = Vec::new();
    for c in cells {
        for _ in 0..per_cell {
            out.push(sampling::sample_cell_member(rng, c, opts.window));
        }
    }
    out
}

fn finish(mut out: Outcome, f: ExtendedFunction, anchors: &[Point], eps: NormValue, opts: &Options, rng: &mut SampleRng) -> Result<Outcome> {
    let pts = sampling::scale_samples(rng, f.field, f.dim, anchors, opts.samples, opts.window);
    let (v, rep, tab, warn) = lipschitz_verdict(&f, &pts, eps)?;
    out.verdicts.push(v);
    out.lipschitz = Some(rep);
    out.samples = Some(tab);
    out.hypothesis_warning |= warn;
    out.extension = Some(f);
    Ok(out)
}

fn finite_task(function: &FiniteFunction, f: ExtendedFunction, opts: &Options, rng: &mut SampleRng) -> Result<Outcome> {
    let (eps, _) = target(opts, f.field)?;
    let mut out = Outcome::default();
    out.verdicts.push(agreement("extends", &f, function.entries().iter().cloned()));
    let anchors: Vec<Point> = function.points().cloned().collect();
    let mut out = finish(out, f, &anchors, eps, opts, rng)?;
    if function.dim() == 2 && opts.epsilon.is_none() {
        let nd = extend_finite_nd(function)?;
        let plane = extend_finite_plane_ladder(function)?;
        let pts: Vec<Point> = out.samples.as_ref().unwrap().points().cloned().collect();
        out.verdicts.push(agreement("ladder-oracle", &nd, pts.into_iter().map(|p| {
            let v = plane.eval(&p);
            (p, v)
        })));
    }
    Ok(out)
}

fn cell_task(map: &PiecewiseAffineMap1D, f: ExtendedFunction, opts: &Options, rng: &mut SampleRng) -> Result<Outcome> {
    let mut out = Outcome::default();
    let cells: Vec<Cell1D> = map.pieces.iter().map(|p| p.cell.clone()).collect();
    let members = cell_members(rng, &cells, opts.samples.max(4), opts);

    let image_ok = map.pieces.iter().enumerate().find_map(|(k, p)| {
        let img = risometry_image_cell(&p.cell, &p.slope, &p.intercept).ok()?;
        let same = img.boxes.len() == p.cell.boxes.len() && img.boxes.iter().all(|b| p.cell.boxes.contains(b));
        (!same).then_some(k)
    });
    out.verdicts.push(match image_ok {
        None => Verdict::ok("image-cells", "every image cell has the source box set"),
        Some(k) => Verdict::fail("image-cells", format!("piece {k} changes its box set"), json!({"piece": k})),
    });

    let on_c = FiniteFunction::from_samples(1, members.iter().map(|x| (Point::scalar(x.clone()), map.eval(x).unwrap())).collect())?;
    let ris = risometry_check(&on_c, &[0])?;
    out.verdicts.push(match &ris.counterexample {
        None => Verdict::ok("risometry", format!("rv of differences preserved on {} members", on_c.len())),
        Some((x, y)) => Verdict::fail("risometry", "rv(f(x) − f(y)) ≠ rv(x − y)", pair_json(&on_c, x, y)),
    });
    out.verdicts.push(agreement("extends", &f, on_c.entries().iter().cloned()));

    let ext = f.cell_risometry().expect("cell extension");
    out.verdicts.push(match skeleton_condition_violation(ext.skeleton()) {
        None => Verdict::ok("skeleton-condition", format!("{} skeleton points", ext.skeleton().point_set().len())),
        Some((a, b)) => Verdict::fail("skeleton-condition", "skeleton points too close", json!({"a": a, "b": b})),
    });
    out.verdicts.push(Verdict::ok("configurations", "source and transported skeletons share one configuration"));

    let mut anchors: Vec<Point> = members.iter().cloned().map(Point::scalar).collect();
    anchors.extend(ext.skeleton().points().cloned().map(Point::scalar));
    let mut out = finish(out, f, &anchors, NormValue::ONE, opts, rng)?;
    let f = out.extension.as_ref().unwrap();
    let split = out
        .samples
        .as_ref()
        .unwrap()
        .entries()
        .iter()
        .find(|(x, v)| f.eval_split(x).as_ref() != Some(v))
        .cloned();
    out.verdicts.push(match split {
        None => Verdict::ok("split-path", "direct and split evaluations agree on all samples"),
        Some((x, v)) => Verdict::fail(
            "split-path",
            "direct and split evaluations differ",
            json!({"x": x, "direct": v, "split": f.eval_split(&x)}),
        ),
    });
    Ok(out)
}

fn graph_points(family: &GraphFamily, rng: &mut SampleRng, opts: &Options) -> Vec<(Point, FieldElement)> {
    let mut out = Vec::new();
    for (xi, cell) in family.base_cells.iter().enumerate() {
        for u in cell_members(rng, std::slice::from_ref(cell), opts.samples.max(3), opts) {
            for b in &family.branches[xi] {
                let x = Point::new(vec![u.clone(), b.phi(&u)]).unwrap();
                let v = family.value_at(&x).expect("point on a graph");
                out.push((x, v));
            }
        }
    }
    out
}

fn graphs_task(family: &GraphFamily, f: ExtendedFunction, opts: &Options, rng: &mut SampleRng) -> Result<Outcome> {
    let mut out = Outcome::default();
    let on_graphs = graph_points(family, rng, opts);
    let o = origins(family)?;
    out.verdicts.push(agreement("extends", &f, on_graphs.iter().cloned()));
    out.verdicts.push(agreement(
        "origins",
        &f,
        o.points.iter().cloned().zip(o.centers.iter().cloned()),
    ));
    let mut anchors: Vec<Point> = on_graphs.into_iter().map(|(x, _)| x).collect();
    anchors.extend(o.points.iter().cloned());
    finish(out, f, &anchors, NormValue::ONE, opts, rng)
}

fn glue_task(task: &GlueTask, f: ExtendedFunction, opts: &Options, rng: &mut SampleRng) -> Result<Outcome> {
    let mut out = Outcome::default();
    match task {
        GlueTask::Vanishing { a, b } => {
            let zero = FieldElement::zero(f.field);
            out.verdicts.push(agreement("extends", &f, a.entries().iter().filter(|(x, _)| !b.contains(x)).cloned()));
            out.verdicts.push(agreement("vanishes-on-b", &f, b.iter().map(|x| (x.clone(), zero.clone()))));
            let a_pts: Vec<Point> = a.points().cloned().collect();
            let anchors: Vec<Point> = a_pts.iter().chain(b).cloned().collect();
            let mut out = finish(out, f, &anchors, NormValue::ONE, opts, rng)?;
            let pts: Vec<Point> = out.samples.as_ref().unwrap().points().cloned().collect();
            let (ra, rb) = (Region::Points(a_pts.clone()), Region::Points(b.clone()));
            let bad = pts
                .iter()
                .find(|x| glue_conditions(&ra, &rb, x) != glue_conditions_pointwise(&a_pts, b, x));
            out.verdicts.push(match bad {
                None => Verdict::ok("conditions", "cut and pointwise conditions agree on all samples"),
                Some(x) => Verdict::fail("conditions", "cut and pointwise conditions differ", json!({"x": x})),
            });
            Ok(out)
        }
        GlueTask::Union { parts } => {
            let all: Vec<(Point, FieldElement)> = parts.iter().flat_map(|p| p.entries().iter().cloned()).collect();
            out.verdicts.push(agreement("extends", &f, all.iter().cloned()));
            let anchors: Vec<Point> = all.into_iter().map(|(x, _)| x).collect();
            finish(out, f, &anchors, NormValue::ONE, opts, rng)
        }
    }
}

fn skeleton_task(cells: &[Cell1D], sk: Skeleton, opts: &Options, rng: &mut SampleRng) -> Result<Outcome> {
    let mut out = Outcome::default();
    out.verdicts.push(match skeleton_condition_violation(&sk) {
        None => Verdict::ok("skeleton-condition", format!("{} points on {} levels", sk.point_set().len(), sk.levels.len())),
        Some((a, b)) => Verdict::fail("skeleton-condition", "skeleton points too close", json!({"a": a, "b": b})),
    });
    let inside = sk
        .points()
        .find_map(|s| cells.iter().position(|c| c.contains(s)).map(|k| (s.clone(), k)));
    out.verdicts.push(match inside {
        None => Verdict::ok("outside-cells", "no skeleton point lies in a cell"),
        Some((s, k)) => Verdict::fail("outside-cells", format!("{s} lies in cell {k}"), json!({"point": s, "cell": k})),
    });

    let mut bad: Option<Value> = None;
    'cells: for a in &sk.attachments {
        let c = &cells[a.cell];
        if a.recentered.rho() != c.rho() {
            bad = Some(json!({"cell": a.cell, "reason": "radius changed"}));
            break;
        }
        for _ in 0..opts.samples.max(4) {
            let x = sampling::sample_cell_member(rng, c, opts.window);
            let y = sampling::sample_cell_member(rng, &a.recentered, opts.window);
            for z in [x, y] {
                if c.contains(&z) != a.recentered.contains(&z) {
                    bad = Some(json!({"cell": a.cell, "x": z}));
                    break 'cells;
                }
            }
        }
    }
    out.verdicts.push(match bad {
        None => Verdict::ok("re-attachment", "every cell keeps its members around its skeleton point"),
        Some(w) => Verdict::fail("re-attachment", "member sets differ", w),
    });

    let mut rev: Vec<Cell1D> = cells.to_vec();
    rev.reverse();
    let mut a = sk.point_set();
    let mut b = build_skeleton(&rev)?.point_set();
    a.sort_by(FieldElement::canonical_cmp);
    b.sort_by(FieldElement::canonical_cmp);
    out.verdicts.push(if a == b {
        Verdict::ok("permutation-invariance", "reversed input gives the same skeleton")
    } else {
        Verdict::fail("permutation-invariance", "reversed input changes the skeleton", json!({"forward": a, "reversed": b}))
    });
    out.skeleton = Some(sk);
    Ok(out)
}

pub fn run_task(inst: &Instance, opts: &Options) -> Result<Outcome> {
    let mut rng = sampling::rng(opts.seed);
    let (f, sk) = construct(inst, opts)?;
    match &inst.task {
        Task::ExtendFinite { function, .. } => finite_task(function, f.unwrap(), opts, &mut rng),
        Task::ExtendCell { map } => cell_task(map, f.unwrap(), opts, &mut rng),
        Task::ExtendGraphs { family } => graphs_task(family, f.unwrap(), opts, &mut rng),
        Task::Glue(g) => glue_task(g, f.unwrap(), opts, &mut rng),
        Task::Skeleton { cells } => skeleton_task(cells, sk.unwrap(), opts, &mut rng),
    }
}
