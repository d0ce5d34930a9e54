use std::io;

use aiet::distortion::{
    ball_word_lengths, bp_growth_certificate, bs_obstruction, bs_relation_check, classify_rational,
    drift_certificate, nilpotent_commutator_check, normal_form_theorem_th, semi_hyperbolic_certificate, word_evaluate,
    ComponentKind, DistortionError, GeneratingSet, ThOutcome,
};
use aiet::dynamics::{classify_bp_growth, fixed_points, periodic_structure, DynamicsError};
use aiet::numbers::multiplicative_basis;
use aiet::{Aiet, Config};
use serde_json::{json, Value};
use thiserror::Error;

use crate::mapfile::{parse_map_file, MapFile, MapFileError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    MapFile(#[from] MapFileError),
    #[error("no {kind} named `{name}`; available: {available}")]
    UnknownName { kind: &'static str, name: String, available: String },
    #[error("{0}")]
    Syntax(String),
    #[error("{stage}: {message}")]
    Validation { stage: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Syntax(_) => 4,
            CliError::MapFile(e) if e.is_syntax() => 4,
            _ => 3,
        }
    }
}

pub struct Outcome {
    pub inputs: Value,
    pub results: Value,
    pub inconclusive: bool,
}

impl Outcome {
    fn ok(inputs: Value, results: Value) -> Outcome {
        Outcome { inputs, results, inconclusive: false }
    }
}

pub fn load(path: &str) -> Result<MapFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    Ok(parse_map_file(&text)?)
}

fn lookup<'a>(file: &'a MapFile, name: &str) -> Result<&'a Aiet, CliError> {
    file.map(name).ok_or_else(|| CliError::UnknownName {
        kind: "map",
        name: name.into(),
        available: file.map_names().join(", "),
    })
}

fn generating_set(file: &MapFile, name: &str) -> Result<GeneratingSet, CliError> {
    let members = file.group(name).ok_or_else(|| CliError::UnknownName {
        kind: "group",
        name: name.into(),
        available: file.group_names().join(", "),
    })?;
    let gens = members.iter().map(|m| lookup(file, m).cloned()).collect::<Result<Vec<_>, _>>()?;
    GeneratingSet::new(members.to_vec(), gens).map_err(|e| validation("group", e))
}

fn validation(stage: &'static str, e: impl ToString) -> CliError {
    CliError::Validation { stage, message: e.to_string() }
}

fn stage_of(e: &DistortionError) -> &'static str {
    match e {
        DistortionError::Dynamics(_) => "periodic_structure",
        DistortionError::NormalForm(_) => "li_normal_form",
        DistortionError::TwoSlope(_) => "minakawa",
        DistortionError::Map(_) => "composition",
        DistortionError::Number(_) => "arithmetic",
        DistortionError::Precondition(_) => "precondition",
        DistortionError::Structure(_) => "verification",
        DistortionError::BallGuard(_) => "ball",
    }
}

/// Inconclusive failures become a report section; the rest are errors.
fn soft(stage: &'static str, reason: String, limit: bool, flag: &mut bool) -> Result<Value, CliError> {
    if limit {
        *flag = true;
        Ok(json!({ "status": "inconclusive", "stage": stage, "reason": reason }))
    } else {
        Err(CliError::Validation { stage, message: reason })
    }
}

pub fn analyze(path: &str, name: &str, cfg: &Config) -> Result<Outcome, CliError> {
    let file = load(path)?;
    let f = lookup(&file, name)?;
    let mut inconclusive = false;
    let periodic = match periodic_structure(f, cfg.max_period, cfg.guard_pieces) {
        Ok(p) => json!({ "status": "ok", "structure": p }),
        Err(DynamicsError::PeriodNotStable { max_period, partial }) => {
            inconclusive = true;
            json!({
                "status": "inconclusive",
                "stage": "periodic_structure",
                "reason": format!("periodic set did not stabilize within period {max_period}"),
                "partial": partial,
            })
        }
        Err(e) => soft("periodic_structure", e.to_string(), e.is_inconclusive(), &mut inconclusive)?,
    };
    let growth = match classify_bp_growth(f, cfg.horizon_for(f.bp_count()), cfg.guard_pieces) {
        Ok(g) => json!({ "status": "ok", "class": g }),
        Err(e) => soft("bp_growth", e.to_string(), e.is_inconclusive(), &mut inconclusive)?,
    };
    let results = json!({
        "status": if inconclusive { "inconclusive" } else { "ok" },
        "piece_count": f.piece_count(),
        "bp0": f.breakpoints().bp0(),
        "bp1": f.breakpoints().bp1(),
        "breakpoints": f.breakpoints(),
        "slopes": f.slopes(),
        "shapes": f.classify_shape(),
        "fixed_points": fixed_points(f),
        "periodic": periodic,
        "growth": growth,
    });
    Ok(Outcome { inputs: json!({ "file": path, "map": name, "definition": f }), results, inconclusive })
}

fn component_summary(outcome: &ThOutcome) -> Value {
    let ThOutcome::NormalForm(nf) = outcome else {
        return Value::Array(Vec::new());
    };
    nf.components
        .iter()
        .map(|c| match &c.kind {
            ComponentKind::Rotation { angle, delta, infinite_order } => json!({
                "interval": [c.a, c.b], "kind": "rotation", "angle": angle, "delta": delta,
                "infinite_order": infinite_order,
            }),
            ComponentKind::TwoSlope { lambda1, lambda2, rho, .. } => json!({
                "interval": [c.a, c.b], "kind": "two_slope", "lambda1": lambda1, "lambda2": lambda2, "rho": rho,
            }),
        })
        .collect()
}

pub fn normalize(path: &str, name: &str, cfg: &Config) -> Result<Outcome, CliError> {
    let file = load(path)?;
    let f = lookup(&file, name)?;
    let inputs = json!({ "file": path, "map": name, "definition": f });
    match normal_form_theorem_th(f, cfg) {
        Ok(outcome) => {
            let results = json!({
                "status": "ok",
                "summary": component_summary(&outcome),
                "normal_form": outcome,
            });
            Ok(Outcome::ok(inputs, results))
        }
        Err(e) => {
            let mut flag = false;
            let results = soft(stage_of(&e), e.to_string(), e.is_inconclusive(), &mut flag)?;
            Ok(Outcome { inputs, results, inconclusive: flag })
        }
    }
}

pub fn certify(path: &str, name: &str, group: Option<&str>, cfg: &Config) -> Result<Outcome, CliError> {
    let file = load(path)?;
    let f = lookup(&file, name)?;
    let gens = match group {
        Some(g) => generating_set(&file, g)?,
        None => GeneratingSet::new(vec![name.to_string()], vec![f.clone()]).map_err(|e| validation("group", e))?,
    };
    let inputs = json!({ "file": path, "map": name, "definition": f, "group": gens.names });
    if f.is_rational() {
        let verdict = classify_rational(f, &gens, cfg).map_err(|e| validation(stage_of(&e), e))?;
        let inconclusive = verdict.is_inconclusive();
        let results = json!({
            "status": if inconclusive { "inconclusive" } else { "ok" },
            "rational": true,
            "verdict": verdict,
        });
        return Ok(Outcome { inputs, results, inconclusive });
    }

    let mut certificates = Vec::new();
    let mut skipped = Vec::new();
    match semi_hyperbolic_certificate(f, &gens, cfg) {
        Ok(c) => certificates.push(c),
        Err(e) => skipped.push(json!({ "kind": "semi_hyperbolic", "reason": e.reason })),
    }
    match bp_growth_certificate(f, &gens, cfg) {
        Ok(c) => certificates.push(c),
        Err(e) => skipped.push(json!({ "kind": "bp_growth", "reason": e.reason })),
    }
    let mut normal_form = Value::Null;
    let mut verdict = if certificates.is_empty() { "inconclusive" } else { "undistorted" };
    if certificates.is_empty() {
        match normal_form_theorem_th(f, cfg) {
            Ok(ThOutcome::FiniteOrder { order }) => {
                verdict = "finite_order";
                normal_form = json!({ "order": order });
            }
            Ok(ThOutcome::NormalForm(nf)) => {
                let two_slope = nf.components.iter().find(|c| matches!(c.kind, ComponentKind::TwoSlope { .. }));
                if let Some(c) = two_slope {
                    let mut slopes: Vec<_> = f.slopes().iter().filter_map(|s| s.as_rational().cloned()).collect();
                    slopes.extend(gens.slope_values().iter().filter_map(|s| s.as_rational().cloned()));
                    let x = nf.conjugator.inverse().eval(&c.a);
                    match drift_certificate(f, &gens, &multiplicative_basis(&slopes), &x, cfg.drift_n as u64, cfg) {
                        Ok(cert) => {
                            certificates.push(cert);
                            verdict = "undistorted";
                        }
                        Err(e) => skipped.push(json!({ "kind": "exponent_drift", "reason": e.reason })),
                    }
                } else {
                    verdict = "normal_form_rotations";
                }
                normal_form = serde_json::to_value(&nf).expect("serializable");
            }
            Err(e) if e.is_inconclusive() => skipped.push(json!({ "kind": "normal_form", "reason": e.to_string() })),
            Err(e) => return Err(validation(stage_of(&e), e)),
        }
    }
    let inconclusive = verdict == "inconclusive";
    let results = json!({
        "status": if inconclusive { "inconclusive" } else { "ok" },
        "rational": false,
        "verdict": verdict,
        "certificates": certificates,
        "not_applicable": skipped,
        "normal_form": normal_form,
    });
    Ok(Outcome { inputs, results, inconclusive })
}

/// Parse `a b^-1 a^3` (commas or spaces between letters) into signed
/// generator indices.
pub fn parse_word(gens: &GeneratingSet, word: &str) -> Result<Vec<i64>, CliError> {
    let mut out = Vec::new();
    for tok in word.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e.parse().map_err(|_| CliError::Syntax(format!("bad exponent in `{tok}`")))?;
                (n, e)
            }
            None => (tok, 1),
        };
        let idx = gens.names.iter().position(|n| n == name).ok_or_else(|| {
            CliError::Syntax(format!("`{name}` is not a generator; generators: {}", gens.names.join(", ")))
        })? as i64
            + 1;
        let letter = if exp < 0 { -idx } else { idx };
        out.extend(std::iter::repeat_n(letter, exp.unsigned_abs() as usize));
    }
    Ok(out)
}

pub enum GroupOp {
    BsCheck { a: String, b: String, m: i64, n: i64 },
    BsObstruct { a: String, b: String, m: i64, n: i64, s_max: usize },
    NilpCheck { u: String, v: String, p: i64, q: i64 },
    Word { group: String, word: String },
    Ball { group: String, radius: usize, targets: Vec<String> },
}

pub fn group(path: &str, op: &GroupOp, cfg: &Config) -> Result<Outcome, CliError> {
    let file = load(path)?;
    let guard = cfg.guard_pieces;
    let hard = |stage: &'static str| move |e: DistortionError| validation(stage, e);
    let (inputs, results) = match op {
        GroupOp::BsCheck { a, b, m, n } => {
            let holds = bs_relation_check(lookup(&file, a)?, lookup(&file, b)?, *m, *n, guard).map_err(hard("bs-check"))?;
            (json!({ "a": a, "b": b, "m": m, "n": n }), json!({ "status": "ok", "relation_holds": holds }))
        }
        GroupOp::BsObstruct { a, b, m, n, s_max } => {
            let rep = bs_obstruction(lookup(&file, a)?, lookup(&file, b)?, *m, *n, *s_max, guard)
                .map_err(hard("bs-obstruct"))?;
            (
                json!({ "a": a, "b": b, "m": m, "n": n, "s_max": s_max }),
                json!({ "status": "ok", "report": rep }),
            )
        }
        GroupOp::NilpCheck { u, v, p, q } => {
            let rep = nilpotent_commutator_check(lookup(&file, u)?, lookup(&file, v)?, *p, *q, guard)
                .map_err(hard("nilp-check"))?;
            (json!({ "u": u, "v": v, "p": p, "q": q }), json!({ "status": "ok", "report": rep }))
        }
        GroupOp::Word { group, word } => {
            let gens = generating_set(&file, group)?;
            let letters = parse_word(&gens, word)?;
            let w = word_evaluate(&gens, &letters, guard).map_err(hard("word"))?;
            (
                json!({ "group": group, "word": word, "letters": letters }),
                json!({ "status": "ok", "map": w, "piece_count": w.piece_count() }),
            )
        }
        GroupOp::Ball { group, radius, targets } => {
            let gens = generating_set(&file, group)?;
            let maps = targets.iter().map(|t| lookup(&file, t).cloned()).collect::<Result<Vec<_>, _>>()?;
            let inputs = json!({ "group": group, "radius": radius, "targets": targets });
            match ball_word_lengths(&gens, *radius, &maps, guard) {
                Ok(found) => {
                    let lengths: Vec<Value> = targets
                        .iter()
                        .zip(&found)
                        .map(|(t, l)| json!({ "target": t, "length": l }))
                        .collect();
                    (inputs, json!({ "status": "ok", "lengths": lengths }))
                }
                Err(e) => {
                    let mut flag = false;
                    let results = soft("ball", e.to_string(), e.is_inconclusive(), &mut flag)?;
                    return Ok(Outcome { inputs, results, inconclusive: flag });
                }
            }
        }
    };
    let mut inputs = inputs;
    inputs["file"] = json!(path);
    Ok(Outcome::ok(inputs, results))
}
