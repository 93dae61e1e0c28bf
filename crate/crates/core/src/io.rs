//! JSON instances. Elements travel as strings in the text grammar, so every
//! parser needs the field first; errors carry a JSON path.

use std::str::FromStr;

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::extension::{Branch, GraphFamily, ValueMap};
use crate::geometry::{Cell1D, RvBox};
use crate::lipschitz::{AffinePiece, FiniteFunction, PiecewiseAffineMap1D};
use crate::valued_field::{parse_exponent_json, CutValue, FieldDescriptor, FieldElement, NormValue, Point, RvValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FiniteMethod {
    /// line for `n = 1`, plane ladder for `n = 2`, general ladder above
    #[default]
    Auto,
    Line,
    Plane,
    Nd,
}

impl FiniteMethod {
    fn name(self) -> Option<&'static str> {
        match self {
            FiniteMethod::Auto => None,
            FiniteMethod::Line => Some("line"),
            FiniteMethod::Plane => Some("plane"),
            FiniteMethod::Nd => Some("nd"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum GlueTask {
    /// `f` on `A`, zero on `B`
    Vanishing { a: FiniteFunction, b: Vec<Point> },
    Union { parts: Vec<FiniteFunction> },
}

#[derive(Clone, Debug)]
pub enum Task {
    ExtendFinite { function: FiniteFunction, method: FiniteMethod },
    ExtendCell { map: PiecewiseAffineMap1D },
    ExtendGraphs { family: GraphFamily },
    Glue(GlueTask),
    Skeleton { cells: Vec<Cell1D> },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::ExtendFinite { .. } => "extend-finite",
            Task::ExtendCell { .. } => "extend-cell",
            Task::ExtendGraphs { .. } => "extend-graphs",
            Task::Glue(_) => "glue",
            Task::Skeleton { .. } => "skeleton",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub field: FieldDescriptor,
    pub task: Task,
}

fn schema(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Schema(format!("at {path}: {msg}"))
}

fn get<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.as_object()
        .ok_or_else(|| schema(path, "expected an object"))?
        .get(key)
        .ok_or_else(|| schema(path, format!("missing key `{key}`")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(path, "expected a string"))
}

/// Located, but keeps invariant errors (duplicates, Lipschitz, …) as they are.
fn located<T>(r: Result<T>, path: &str) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } | Error::ExponentNotInGroup { .. } | Error::BackendMismatch { .. } => schema(path, e),
        other => other,
    })
}

pub fn parse_element(v: &Value, field: FieldDescriptor, path: &str) -> Result<FieldElement> {
    let s = match v {
        Value::Number(n) => n.to_string(),
        _ => string(v, path)?.to_string(),
    };
    located(FieldElement::parse(field, &s), path)
}

pub fn parse_point(v: &Value, field: FieldDescriptor, n: Option<usize>, path: &str) -> Result<Point> {
    let cs = array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, c)| parse_element(c, field, &format!("{path}[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    if let Some(n) = n {
        if cs.len() != n {
            return Err(schema(path, format!("expected {n} coordinates, found {}", cs.len())));
        }
    }
    located(Point::new(cs), path)
}

fn parse_unit(v: &Value, path: &str) -> Result<Option<BigRational>> {
    match v {
        Value::Null => Ok(None),
        Value::Number(n) => BigRational::from_str(&n.to_string())
            .map(Some)
            .map_err(|e| schema(path, e)),
        _ => {
            let s = string(v, path)?;
            let u = BigRational::from_str(s.trim()).map_err(|e| schema(path, format!("bad unit `{s}`: {e}")))?;
            if u == BigRational::from_integer(0.into()) {
                return Err(schema(path, "unit must be nonzero"));
            }
            Ok(Some(u))
        }
    }
}

fn parse_ord(v: &Value, path: &str) -> Result<NormValue> {
    match v {
        Value::Null => Ok(NormValue::Zero),
        _ => parse_exponent_json(v).map(NormValue::Theta).map_err(|e| schema(path, e)),
    }
}

fn parse_cut(v: &Value, path: &str) -> Result<CutValue> {
    let norm = parse_ord(get(v, "ord", path)?, &format!("{path}.ord"))?;
    let attained = get(v, "attained", path)?
        .as_bool()
        .ok_or_else(|| schema(&format!("{path}.attained"), "expected a boolean"))?;
    Ok(CutValue { norm, attained })
}

pub fn parse_box(v: &Value, field: FieldDescriptor, path: &str) -> Result<RvBox> {
    let obj = v.as_object().ok_or_else(|| schema(path, "expected an object"))?;
    let b = if let Some(e) = obj.get("exact") {
        let p = format!("{path}.exact");
        match parse_ord(get(e, "ord", &p)?, &format!("{p}.ord"))? {
            NormValue::Zero => RvBox::Exact(RvValue::Zero),
            NormValue::Theta(exponent) => {
                let unit = parse_unit(get(e, "unit", &p)?, &format!("{p}.unit"))?
                    .ok_or_else(|| schema(&p, "an exact nonzero box needs a unit"))?;
                RvBox::Exact(RvValue::new(exponent, unit))
            }
        }
    } else if let Some(a) = obj.get("annulus") {
        let p = format!("{path}.annulus");
        let lower = parse_cut(get(a, "lower", &p)?, &format!("{p}.lower"))?;
        let upper = match a.get("upper") {
            None | Some(Value::Null) => None,
            Some(u) => Some(parse_cut(u, &format!("{p}.upper"))?),
        };
        let unit = match a.get("unit") {
            None => None,
            Some(u) => parse_unit(u, &format!("{p}.unit"))?,
        };
        RvBox::Annulus { lower, upper, unit }
    } else {
        return Err(schema(path, "a box is {\"exact\": …} or {\"annulus\": …}"));
    };
    located(b.normalized(field), path)
}

/// A center is an element string or an affine record with no coefficients.
fn parse_center(v: &Value, field: FieldDescriptor, path: &str) -> Result<FieldElement> {
    if v.is_object() {
        let coeffs = array(get(v, "coefficients", path)?, &format!("{path}.coefficients"))?;
        if !coeffs.is_empty() {
            return Err(schema(path, "a line cell has a constant center"));
        }
        return parse_element(get(v, "constant", path)?, field, &format!("{path}.constant"));
    }
    parse_element(v, field, path)
}

pub fn parse_cell(v: &Value, field: FieldDescriptor, path: &str) -> Result<Cell1D> {
    let center = parse_center(get(v, "center", path)?, field, &format!("{path}.center"))?;
    let boxes = array(get(v, "boxes", path)?, &format!("{path}.boxes"))?
        .iter()
        .enumerate()
        .map(|(k, b)| parse_box(b, field, &format!("{path}.boxes[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    Cell1D::new(center, boxes).map_err(|e| schema(path, e))
}

pub fn parse_cells(v: &Value, field: FieldDescriptor, path: &str) -> Result<Vec<Cell1D>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, c)| parse_cell(c, field, &format!("{path}[{k}]")))
        .collect()
}

pub fn parse_finite_function(v: &Value, field: FieldDescriptor, path: &str) -> Result<FiniteFunction> {
    let n = get(v, "n", path)?
        .as_u64()
        .filter(|&n| n > 0)
        .ok_or_else(|| schema(&format!("{path}.n"), "expected a positive integer"))? as usize;
    let entries = array(get(v, "entries", path)?, &format!("{path}.entries"))?
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let p = format!("{path}.entries[{k}]");
            let x = parse_point(get(e, "x", &p)?, field, Some(n), &format!("{p}.x"))?;
            let fx = parse_element(get(e, "fx", &p)?, field, &format!("{p}.fx"))?;
            Ok((x, fx))
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteFunction::new(n, entries)
}

pub fn parse_points(v: &Value, field: FieldDescriptor, n: Option<usize>, path: &str) -> Result<Vec<Point>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, p)| parse_point(p, field, n, &format!("{path}[{k}]")))
        .collect()
}

fn parse_pieces(v: &Value, field: FieldDescriptor, path: &str) -> Result<PiecewiseAffineMap1D> {
    let pieces = array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let path = format!("{path}[{k}]");
            Ok(AffinePiece {
                cell: parse_cell(get(p, "cell", &path)?, field, &format!("{path}.cell"))?,
                slope: parse_element(get(p, "slope", &path)?, field, &format!("{path}.slope"))?,
                intercept: parse_element(get(p, "intercept", &path)?, field, &format!("{path}.intercept"))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PiecewiseAffineMap1D::new(pieces)
}

fn parse_family(v: &Value, field: FieldDescriptor, path: &str) -> Result<GraphFamily> {
    let cells = parse_cells(get(v, "base_cells", path)?, field, &format!("{path}.base_cells"))?;
    let branches = array(get(v, "branches", path)?, &format!("{path}.branches"))?
        .iter()
        .enumerate()
        .map(|(i, bs)| {
            let p = format!("{path}.branches[{i}]");
            array(bs, &p)?
                .iter()
                .enumerate()
                .map(|(j, b)| {
                    let p = format!("{p}[{j}]");
                    let value = get(b, "value", &p)?;
                    let vp = format!("{p}.value");
                    Ok(Branch {
                        slope: parse_element(get(b, "slope", &p)?, field, &format!("{p}.slope"))?,
                        intercept: parse_element(get(b, "intercept", &p)?, field, &format!("{p}.intercept"))?,
                        value: ValueMap::affine(
                            parse_element(get(value, "slope", &vp)?, field, &format!("{vp}.slope"))?,
                            parse_element(get(value, "intercept", &vp)?, field, &format!("{vp}.intercept"))?,
                        ),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GraphFamily::new(cells, branches)
}

pub fn parse_field(v: &Value) -> Result<FieldDescriptor> {
    serde_json::from_value(v.clone()).map_err(|e| schema("$.field", e))
}

pub fn parse_instance_value(v: &Value) -> Result<Instance> {
    let field = parse_field(get(v, "field", "$")?)?;
    let task = string(get(v, "task", "$")?, "$.task")?;
    let task = match task {
        "extend-finite" => {
            let method = match v.get("method") {
                None | Some(Value::Null) => FiniteMethod::Auto,
                Some(m) => match string(m, "$.method")? {
                    "line" => FiniteMethod::Line,
                    "plane" => FiniteMethod::Plane,
                    "nd" => FiniteMethod::Nd,
                    "auto" => FiniteMethod::Auto,
                    other => return Err(schema("$.method", format!("unknown method `{other}`"))),
                },
            };
            Task::ExtendFinite {
                function: parse_finite_function(get(v, "function", "$")?, field, "$.function")?,
                method,
            }
        }
        "extend-cell" => Task::ExtendCell {
            map: parse_pieces(get(v, "pieces", "$")?, field, "$.pieces")?,
        },
        "extend-graphs" => Task::ExtendGraphs {
            family: parse_family(v, field, "$")?,
        },
        "glue" => Task::Glue(if let Some(parts) = v.get("parts") {
            GlueTask::Union {
                parts: array(parts, "$.parts")?
                    .iter()
                    .enumerate()
                    .map(|(k, p)| parse_finite_function(p, field, &format!("$.parts[{k}]")))
                    .collect::<Result<Vec<_>>>()?,
            }
        } else {
            let a = parse_finite_function(get(v, "a", "$")?, field, "$.a")?;
            let b = parse_points(get(v, "b", "$")?, field, Some(a.dim()), "$.b")?;
            GlueTask::Vanishing { a, b }
        }),
        "skeleton" => Task::Skeleton {
            cells: parse_cells(get(v, "cells", "$")?, field, "$.cells")?,
        },
        other => return Err(schema("$.task", format!("unknown task `{other}`"))),
    };
    Ok(Instance { field, task })
}

pub fn parse_instance(bytes: &[u8]) -> Result<Instance> {
    let v: Value = serde_json::from_slice(bytes).map_err(|e| schema("$", e))?;
    parse_instance_value(&v)
}

pub fn finite_function_json(f: &FiniteFunction) -> Value {
    json!({
        "n": f.dim(),
        "entries": f.entries().iter().map(|(x, fx)| json!({"x": x, "fx": fx})).collect::<Vec<_>>(),
    })
}

fn value_map_json(v: &ValueMap) -> Value {
    assert!(v.correction.is_none(), "instances carry plain affine values");
    json!({"slope": v.slope, "intercept": v.intercept})
}

pub fn emit_instance(inst: &Instance) -> Value {
    let mut out = Map::new();
    out.insert("field".into(), serde_json::to_value(inst.field).expect("descriptor"));
    out.insert("task".into(), inst.task.name().into());
    match &inst.task {
        Task::ExtendFinite { function, method } => {
            out.insert("function".into(), finite_function_json(function));
            if let Some(m) = method.name() {
                out.insert("method".into(), m.into());
            }
        }
        Task::ExtendCell { map } => {
            out.insert("pieces".into(), serde_json::to_value(&map.pieces).expect("pieces"));
        }
        Task::ExtendGraphs { family } => {
            out.insert("base_cells".into(), serde_json::to_value(&family.base_cells).expect("cells"));
            let branches: Vec<Vec<Value>> = family
                .branches
                .iter()
                .map(|bs| {
                    bs.iter()
                        .map(|b| json!({"slope": b.slope, "intercept": b.intercept, "value": value_map_json(&b.value)}))
                        .collect()
                })
                .collect();
            out.insert("branches".into(), json!(branches));
        }
        Task::Glue(GlueTask::Vanishing { a, b }) => {
            out.insert("a".into(), finite_function_json(a));
            out.insert("b".into(), json!(b));
        }
        Task::Glue(GlueTask::Union { parts }) => {
            out.insert("parts".into(), Value::Array(parts.iter().map(finite_function_json).collect()));
        }
        Task::Skeleton { cells } => {
            out.insert("cells".into(), serde_json::to_value(cells).expect("cells"));
        }
    }
    Value::Object(out)
}

/// Pretty JSON with a trailing newline; key order is fixed, so equal
/// instances give identical bytes.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
