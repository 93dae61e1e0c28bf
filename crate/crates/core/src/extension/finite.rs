//! Finite domains: nearest-point averaging on the line and the δ-ladder in
//! the plane and in `K^n`.
//!
//! Ladder state: every first coordinate `u_i` owns a fiber function `ψ_i`
//! on the union of the fibers of its current class. When classes at
//! distance `δ` merge, `ψ_i` keeps its own values, fills the open
//! `δ`-neighbourhood of its old domain with its own nearest-point extension,
//! and takes the class-wide average over the open `δ`-ball elsewhere (the
//! other sub-classes contribute through their canonical-minimal member).
//! Every choice depends on the domain only, so the operator is linear in the
//! values; that linearity is what keeps `|Ψ_i − Ψ_j| ≤ |u_i − u_j|`.

use super::{average, nearest, ExtendedFunction, Node};
use crate::error::{Error, Result};
use crate::lipschitz::{require_one_lipschitz, FiniteFunction};
use crate::valued_field::{FieldElement, NormValue, Point};

fn require_dim(f: &FiniteFunction, n: usize) -> Result<()> {
    if f.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.dim(),
        });
    }
    Ok(())
}

/// `F(x)` = average of `f` over the points of `A` nearest to `x`.
pub fn extend_finite_line(f: &FiniteFunction) -> Result<ExtendedFunction> {
    require_dim(f, 1)?;
    require_one_lipschitz(f)?;
    let mut g = ExtendedFunction::nearest_average(f)?;
    g.provenance = "nearest-point average on the line".into();
    Ok(g)
}

/// The line operator `ω` on stored `(v, φ(v))` pairs.
pub(crate) fn omega_line(data: &[(FieldElement, FieldElement)], v: &FieldElement, warn: &mut bool) -> FieldElement {
    let idx = nearest(data.iter().map(|(w, _)| w), |w| w.dist(v));
    average(idx.iter().map(|&k| &data[k].1), warn)
}

fn min_dist<'a, T: 'a>(items: impl IntoIterator<Item = &'a T>, d: impl Fn(&T) -> NormValue) -> Option<NormValue> {
    items.into_iter().map(d).min()
}

/// Distinct pairwise distances of the first coordinates, ascending.
fn ladder_steps(firsts: &[FieldElement]) -> Vec<NormValue> {
    let mut ds: Vec<NormValue> = Vec::new();
    for i in 0..firsts.len() {
        for j in i + 1..firsts.len() {
            ds.push(firsts[i].dist(&firsts[j]));
        }
    }
    ds.sort();
    ds.dedup();
    ds
}

/// Class of each index at threshold `δ`, named by its least member.
fn classes_at(firsts: &[FieldElement], delta: NormValue) -> Vec<usize> {
    let mut class = vec![usize::MAX; firsts.len()];
    for i in 0..firsts.len() {
        if class[i] != usize::MAX {
            continue;
        }
        for j in i..firsts.len() {
            if class[j] == usize::MAX && firsts[i].dist(&firsts[j]) <= delta {
                class[j] = i;
            }
        }
    }
    for i in 0..firsts.len() {
        for j in 0..firsts.len() {
            let close = firsts[i].dist(&firsts[j]) <= delta;
            assert_eq!(close, class[i] == class[j], "ladder classes must partition the first coordinates");
        }
    }
    class
}

/// Groups domain points by first coordinate (sorted canonically), fibers sorted.
fn split_fibers(f: &FiniteFunction) -> (Vec<FieldElement>, Vec<Vec<(Point, FieldElement)>>) {
    let mut entries: Vec<&(Point, FieldElement)> = f.entries().iter().collect();
    entries.sort_by(|a, b| a.0.coord(0).canonical_cmp(b.0.coord(0)).then_with(|| a.0.canonical_cmp(&b.0)));
    let mut firsts: Vec<FieldElement> = Vec::new();
    let mut fibers: Vec<Vec<(Point, FieldElement)>> = Vec::new();
    for (x, v) in entries {
        let u = x.coord(0);
        if firsts.last() != Some(u) {
            firsts.push(u.clone());
            fibers.push(Vec::new());
        }
        fibers.last_mut().unwrap().push((x.tail(), v.clone()));
    }
    (firsts, fibers)
}

/// The staged construction in the plane with line fibers.
pub fn extend_finite_plane_ladder(f: &FiniteFunction) -> Result<ExtendedFunction> {
    require_dim(f, 2)?;
    require_one_lipschitz(f)?;
    let field = f.field().ok_or(Error::EmptyInput("finite function"))?;
    let (firsts, fibers) = split_fibers(f);
    let mut psi: Vec<Vec<(FieldElement, FieldElement)>> = fibers
        .into_iter()
        .map(|fb| fb.into_iter().map(|(p, v)| (p.coord(0).clone(), v)).collect())
        .collect();
    let mut warn = false;
    let mut class: Vec<usize> = (0..firsts.len()).collect();

    for delta in ladder_steps(&firsts) {
        let next = classes_at(&firsts, delta);
        let old = psi.clone();
        for c in 0..firsts.len() {
            let members: Vec<usize> = (0..firsts.len()).filter(|&i| next[i] == c).collect();
            let mut subs: Vec<usize> = members.iter().map(|&i| class[i]).collect();
            subs.sort();
            subs.dedup();
            if subs.len() < 2 {
                continue;
            }
            let mut domain: Vec<FieldElement> = subs.iter().flat_map(|&d| old[d].iter().map(|(w, _)| w.clone())).collect();
            domain.sort_by(FieldElement::canonical_cmp);
            domain.dedup();
            // class-wide average over the open δ-ball, from the sub-class representatives
            let ball_average = |w: &FieldElement, warn: &mut bool| {
                let vals: Vec<&FieldElement> = subs
                    .iter()
                    .flat_map(|&d| old[d].iter())
                    .filter(|(w2, _)| w2.dist(w) < delta)
                    .map(|(_, v)| v)
                    .collect();
                average(vals, warn)
            };
            for &i in &members {
                let own = &old[i];
                psi[i] = domain
                    .iter()
                    .map(|w| {
                        let val = match own.iter().find(|(w2, _)| w2 == w) {
                            Some((_, v)) => v.clone(),
                            None if min_dist(own.iter().map(|(w2, _)| w2), |w2| w2.dist(w)).unwrap() < delta => {
                                omega_line(own, w, &mut warn)
                            }
                            None => ball_average(w, &mut warn),
                        };
                        (w.clone(), val)
                    })
                    .collect();
            }
        }
        class = next;
    }
    Ok(ExtendedFunction::new(
        2,
        field,
        "delta-ladder in the plane",
        Node::PlaneLadder { firsts, fibers: psi },
    )
    .with_warning(warn))
}

/// The ladder in `K^n`, fiber extensions by recursion down to the line.
pub fn extend_finite_nd(f: &FiniteFunction) -> Result<ExtendedFunction> {
    if f.dim() == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    require_one_lipschitz(f)?;
    if f.is_empty() {
        return Err(Error::EmptyInput("finite function"));
    }
    Ok(ladder_nd(f))
}

fn ladder_nd(f: &FiniteFunction) -> ExtendedFunction {
    let n = f.dim();
    let field = f.field().expect("nonempty");
    if n == 1 {
        let mut g = ExtendedFunction::nearest_average(f).expect("nonempty");
        g.provenance = "nearest-point average on the line".into();
        return g;
    }
    let (firsts, fibers) = split_fibers(f);
    let mut psi: Vec<Vec<(Point, FieldElement)>> = fibers;
    let mut warn = false;
    let mut class: Vec<usize> = (0..firsts.len()).collect();
    let ext = |data: &[(Point, FieldElement)]| {
        ladder_nd(&FiniteFunction::new(n - 1, data.to_vec()).expect("fiber data has distinct points"))
    };

    for delta in ladder_steps(&firsts) {
        let next = classes_at(&firsts, delta);
        let old = psi.clone();
        let mut groups: Vec<usize> = next.clone();
        groups.sort();
        groups.dedup();
        for c in groups {
            let members: Vec<usize> = (0..firsts.len()).filter(|&i| next[i] == c).collect();
            let mut subs: Vec<usize> = members.iter().map(|&i| class[i]).collect();
            subs.sort();
            subs.dedup();
            if subs.len() < 2 {
                continue;
            }
            let mut domain: Vec<Point> = subs.iter().flat_map(|&d| old[d].iter().map(|(w, _)| w.clone())).collect();
            domain.sort_by(Point::canonical_cmp);
            domain.dedup();
            for &i in &members {
                let own = &old[i];
                let own_ext = ext(own);
                psi[i] = domain
                    .iter()
                    .map(|w| {
                        let val = match own.iter().find(|(w2, _)| w2 == w) {
                            Some((_, v)) => v.clone(),
                            None if own.iter().map(|(w2, _)| w2.dist(w)).min().unwrap() < delta => {
                                own_ext.eval_inner(w, &mut warn)
                            }
                            None => {
                                let vals: Vec<&FieldElement> = subs
                                    .iter()
                                    .flat_map(|&d| old[d].iter())
                                    .filter(|(w2, _)| w2.dist(w) < delta)
                                    .map(|(_, v)| v)
                                    .collect();
                                average(vals, &mut warn)
                            }
                        };
                        (w.clone(), val)
                    })
                    .collect();
            }
        }
        class = next;
    }
    let fibers: Vec<ExtendedFunction> = psi.iter().map(|d| ext(d)).collect();
    ExtendedFunction::new(
        n,
        field,
        format!("delta-ladder in dimension {n}"),
        Node::Ladder { firsts, fibers },
    )
    .with_warning(warn)
}
