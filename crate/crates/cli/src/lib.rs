//! Batch front end for `ultralip`: instances in, reports out.
//!
//! Exit status: 0 when every verdict passes, 1 when some verdict fails,
//! 2 when the input cannot be processed at all.

use std::time::Instant;

use num_rational::Rational64;
use serde_json::{json, Value};
use ultralip::generate::{generate_instance, Profile};
use ultralip::io::{emit_instance, finite_function_json, parse_instance, parse_instance_value, parse_point, to_pretty, Task};
use ultralip::lipschitz::{require_one_lipschitz, FiniteFunction};
use ultralip::sampling::Window;
use ultralip::{Error, FieldDescriptor, Result};

pub mod tasks;

use tasks::{agreement, stored_lipschitz, Outcome, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    ExtendFinite,
    ExtendCell,
    ExtendGraphs,
    Glue,
    Skeleton,
    Verify,
    Generate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::ExtendFinite => "extend-finite",
            Command::ExtendCell => "extend-cell",
            Command::ExtendGraphs => "extend-graphs",
            Command::Glue => "glue",
            Command::Skeleton => "skeleton",
            Command::Verify => "verify",
            Command::Generate => "generate",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    /// pseudo-random points per radius scale
    pub samples: usize,
    pub window: Window,
    /// `q` with `|ε| = Θ(−q)`
    pub epsilon: Option<Rational64>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            samples: 4,
            window: Window::new(-4, 4),
            epsilon: None,
        }
    }
}

fn rational(s: &str) -> std::result::Result<Rational64, String> {
    let (n, d) = s.trim().split_once('/').unwrap_or((s.trim(), "1"));
    let n: i64 = n.trim().parse().map_err(|_| format!("bad rational `{s}`"))?;
    let d: i64 = d.trim().parse().map_err(|_| format!("bad rational `{s}`"))?;
    if d == 0 {
        return Err(format!("bad rational `{s}`"));
    }
    Ok(Rational64::new(n, d))
}

pub fn parse_rational(s: &str) -> std::result::Result<Rational64, String> {
    rational(s)
}

/// `lo,hi` as rationals, widened to the enclosing integer window.
pub fn parse_window(s: &str) -> std::result::Result<Window, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("window `{s}` is not `lo,hi`"))?;
    let (lo, hi) = (rational(a)?.floor().to_integer(), rational(b)?.ceil().to_integer());
    if lo > hi {
        return Err(format!("window `{s}` is empty"));
    }
    Ok(Window::new(lo, hi))
}

fn options_json(o: &Options) -> Value {
    json!({
        "seed": o.seed,
        "samples": o.samples,
        "window": [o.window.lo, o.window.hi],
        "epsilon": o.epsilon.map(|q| format!("{}/{}", q.numer(), q.denom())),
    })
}

fn options_from_json(v: &Value, fallback: &Options) -> Options {
    let mut o = fallback.clone();
    if let Some(e) = v.get("epsilon").and_then(Value::as_str) {
        o.epsilon = rational(e).ok();
    }
    o
}

/// A finished command: the JSON to write and whether every check passed.
pub struct Report {
    pub json: Value,
    pub passed: bool,
}

fn verification_json(verdicts: &[Verdict], lipschitz: Option<Value>, warning: bool) -> (Value, bool) {
    let passed = verdicts.iter().all(|v| v.pass);
    let mut v = json!({
        "passed": passed,
        "verdicts": verdicts.iter().map(Verdict::to_json).collect::<Vec<_>>(),
        "hypothesis_warning": warning,
    });
    if let Some(l) = lipschitz {
        v["lipschitz"] = l;
    }
    (v, passed)
}

fn samples_json(f: &FiniteFunction) -> Value {
    finite_function_json(f)["entries"].clone()
}

fn lipschitz_json(rep: &ultralip::lipschitz::LipschitzReport) -> Value {
    json!({
        "constant": rep.constant,
        "target": rep.target,
        "witness": rep.witness,
        "violation_count": rep.violations.len(),
        "violations": rep.violations.iter().take(10).collect::<Vec<_>>(),
    })
}

fn outcome_report(cmd: Command, inst_json: Value, out: Outcome, opts: &Options, times: (u128, u128)) -> Report {
    let lip = out.lipschitz.as_ref().map(lipschitz_json);
    let (verification, passed) = verification_json(&out.verdicts, lip, out.hypothesis_warning);
    let mut json = json!({
        "command": cmd.name(),
        "options": options_json(opts),
        "task": inst_json,
        "verification": verification,
        "timing_ms": {"construction": times.0, "verification": times.1},
    });
    if let Some(f) = &out.extension {
        json["extension"] = serde_json::to_value(f).expect("serializable extension");
    }
    if let Some(s) = &out.skeleton {
        json["skeleton"] = serde_json::to_value(s).expect("serializable skeleton");
    }
    if let Some(s) = &out.samples {
        json["samples"] = samples_json(s);
    }
    Report { json, passed }
}

fn run_instance(cmd: Command, bytes: &[u8], opts: &Options) -> Result<Report> {
    let inst = parse_instance(bytes)?;
    if inst.task.name() != cmd.name() {
        return Err(Error::Schema(format!(
            "instance task `{}` does not match command `{}`",
            inst.task.name(),
            cmd.name()
        )));
    }
    let t0 = Instant::now();
    tasks::construct(&inst, opts)?;
    let t1 = Instant::now();
    let out = tasks::run_task(&inst, opts)?;
    let t2 = Instant::now();
    Ok(outcome_report(
        cmd,
        emit_instance(&inst),
        out,
        opts,
        ((t1 - t0).as_millis(), (t2 - t1).as_millis()),
    ))
}

/// Re-checks a stored report: recomputes the extension from the echoed task
/// and compares it with the stored samples, then scans the stored samples.
fn verify(bytes: &[u8], opts: &Options) -> Result<Report> {
    let stored: Value = serde_json::from_slice(bytes).map_err(|e| Error::Schema(format!("at $: {e}")))?;
    let task = stored.get("task").ok_or_else(|| Error::Schema("at $: missing key `task`".into()))?;
    let inst = parse_instance_value(task)?;
    let opts = options_from_json(stored.get("options").unwrap_or(&Value::Null), opts);
    let t0 = Instant::now();
    let (f, sk) = tasks::construct(&inst, &opts)?;
    let t1 = Instant::now();
    let mut verdicts = Vec::new();
    let mut lip = None;
    if let Some(sk) = sk {
        let fresh = serde_json::to_value(&sk).expect("skeleton");
        verdicts.push(if stored.get("skeleton") == Some(&fresh) {
            Verdict::ok("stored-skeleton", "stored skeleton matches a fresh build")
        } else {
            Verdict::fail("stored-skeleton", "stored skeleton differs from a fresh build", json!({"fresh": fresh}))
        });
    }
    if let Some(f) = f {
        let entries = stored
            .get("samples")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Schema("at $.samples: expected an array".into()))?;
        let mut pts = Vec::new();
        for (k, e) in entries.iter().enumerate() {
            let p = format!("$.samples[{k}]");
            let x = parse_point(e.get("x").unwrap_or(&Value::Null), inst.field, Some(f.dim), &format!("{p}.x"))?;
            let fx = ultralip::io::parse_element(e.get("fx").unwrap_or(&Value::Null), inst.field, &format!("{p}.fx"))?;
            pts.push((x, fx));
        }
        let tab = FiniteFunction::new(f.dim, pts)?;
        let (eps, _) = tasks::target(&opts, inst.field)?;
        verdicts.push(agreement("stored-values", &f, tab.entries().iter().cloned()));
        if let Task::ExtendFinite { function, .. } = &inst.task {
            let bad = function
                .entries()
                .iter()
                .find(|(x, v)| tab.get(x).is_some_and(|w| w != v));
            verdicts.push(match bad {
                None => Verdict::ok("extends", "stored samples agree with f on its domain"),
                Some((x, v)) => Verdict::fail(
                    "extends",
                    format!("stored value at {x} is not f({x}) = {v}"),
                    json!({"x": x, "expected": v, "found": tab.get(x)}),
                ),
            });
        }
        let (v, rep) = stored_lipschitz(&tab, eps)?;
        verdicts.push(v);
        lip = Some(lipschitz_json(&rep));
    }
    let t2 = Instant::now();
    let (verification, passed) = verification_json(&verdicts, lip, false);
    Ok(Report {
        json: json!({
            "command": "verify",
            "options": options_json(&opts),
            "task": emit_instance(&inst),
            "verification": verification,
            "timing_ms": {"construction": (t1 - t0).as_millis(), "verification": (t2 - t1).as_millis()},
        }),
        passed,
    })
}

#[derive(Clone, Debug)]
pub struct GenerateSpec {
    pub profile: Profile,
    pub size: usize,
    pub field: FieldDescriptor,
}

/// Reads `{"profile", "size", "field"}`; every key is optional.
pub fn parse_generate_spec(bytes: &[u8], fallback: GenerateSpec) -> Result<GenerateSpec> {
    let v: Value = serde_json::from_slice(bytes).map_err(|e| Error::Schema(format!("at $: {e}")))?;
    let mut spec = fallback;
    if let Some(p) = v.get("profile") {
        spec.profile = p
            .as_str()
            .ok_or_else(|| Error::Schema("at $.profile: expected a string".into()))?
            .parse()?;
    }
    if let Some(s) = v.get("size") {
        spec.size = s
            .as_u64()
            .filter(|&s| s > 0)
            .ok_or_else(|| Error::Schema("at $.size: expected a positive integer".into()))? as usize;
    }
    if let Some(f) = v.get("field") {
        spec.field = ultralip::io::parse_field(f)?;
    }
    Ok(spec)
}

/// A seeded instance, re-parsed and re-checked before it is handed out.
pub fn generate(spec: &GenerateSpec, opts: &Options) -> Result<String> {
    let inst = generate_instance(opts.seed, spec.profile, spec.size, spec.field, opts.window);
    let text = to_pretty(&emit_instance(&inst));
    let back = parse_instance(text.as_bytes())?;
    if let Task::ExtendFinite { function, .. } = &back.task {
        require_one_lipschitz(function)?;
    }
    Ok(text)
}

/// Runs one command on the input bytes.
pub fn execute(cmd: Command, input: &[u8], opts: &Options) -> Result<Report> {
    match cmd {
        Command::Verify => verify(input, opts),
        Command::Generate => unreachable!("generate has its own entry point"),
        _ => run_instance(cmd, input, opts),
    }
}

pub fn render(r: &Report) -> String {
    to_pretty(&r.json)
}
