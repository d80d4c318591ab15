//! Property reports for `verify`.

use std::collections::BTreeMap;
use std::time::Instant;

use rankint_core::constructions::{Expectation, Expected};
use rankint_core::geometry::{is_2_spannable, is_scattered, is_scattered_wrt_hyperplanes, SpannabilityWitness};
use rankint_core::linalg::DEFAULT_ENUMERATION_CAP;
use rankint_core::properties::{
    is_21_separating, is_2_rank_frameproof, is_hamming_intersecting, is_minimal, is_rank_intersecting, mrd_status,
    Certificate, Verdict, DEFAULT_PAIR_CAP,
};
use rankint_core::{ExtField, Fqm, QSystem, RankCode};
use serde::Serialize;
use serde_json::{json, Value};

use crate::codefile::{expected_json, CodeFile};

/// Every property `verify` knows.
pub const PROPERTIES: &[&str] = &[
    "nondegenerate",
    "distance",
    "intersecting",
    "hamming_intersecting",
    "minimal",
    "mrd",
    "mrd_label",
    "separating",
    "frameproof",
    "spannable",
    "scattered",
    "hyperplane_scattered",
];

pub const DEFAULT_PROPERTIES: &[&str] =
    &["nondegenerate", "distance", "intersecting", "minimal", "mrd", "separating", "frameproof", "spannable"];

#[derive(Clone, Copy, Debug)]
pub struct Caps {
    /// Projective codewords for pairwise scans.
    pub pairs: u64,
    /// Items for the distance, point and hyperplane enumerations.
    pub enumeration: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { pairs: DEFAULT_PAIR_CAP, enumeration: DEFAULT_ENUMERATION_CAP }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CodeInfo {
    pub name: String,
    pub q: u32,
    pub m: u32,
    pub n: usize,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Match,
    Mismatch,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpectationResult {
    pub property: String,
    pub expected: Value,
    pub actual: Value,
    pub citation: String,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub code: CodeInfo,
    pub modulus: Vec<u32>,
    pub verdicts: BTreeMap<String, Value>,
    pub certificates: BTreeMap<String, Value>,
    pub expectations: Vec<ExpectationResult>,
    pub timings_ms: BTreeMap<String, f64>,
    #[serde(skip)]
    pub order: Vec<String>,
    #[serde(skip)]
    pub errors: usize,
}

impl PropertyReport {
    /// 0 when every expectation matches, 1 on a mismatch, 2 when a property failed to run.
    pub fn exit_code(&self) -> i32 {
        if self.errors > 0 || self.expectations.iter().any(|e| e.status == Status::Error) {
            2
        } else if self.expectations.iter().any(|e| e.status == Status::Mismatch) {
            1
        } else {
            0
        }
    }
}

pub fn check_property_names(names: &[String]) -> anyhow::Result<()> {
    for n in names {
        if !PROPERTIES.contains(&n.as_str()) {
            anyhow::bail!("unknown property {n:?}; known: {}", PROPERTIES.join(", "));
        }
    }
    Ok(())
}

fn encodings(v: &[Fqm]) -> Vec<u64> {
    v.iter().map(|x| x.encoding()).collect()
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::SufficientCondition { d, n } => {
            json!({"kind": "sufficient_condition", "rule": "2d > n", "d": d, "n": n})
        }
        Certificate::Exhaustive { checked } => json!({"kind": "exhaustive", "checked": checked}),
        Certificate::Pair { first, second } => {
            json!({"kind": "pair", "first": encodings(first), "second": encodings(second)})
        }
        Certificate::Triple { x, y, z } => {
            json!({"kind": "triple", "x": encodings(x), "y": encodings(y), "z": encodings(z)})
        }
    }
}

fn witness_json(w: &SpannabilityWitness) -> Value {
    json!({"kind": "witness", "h1": encodings(&w.h1), "h2": encodings(&w.h2), "w1": w.w1, "w2": w.w2})
}

type Outcome = Result<(Value, Value), String>;

fn skipped(reason: &str) -> Outcome {
    Ok((Value::String("skipped".into()), json!({"kind": "skipped", "reason": reason})))
}

fn verdict(v: rankint_core::Result<Verdict>) -> Outcome {
    let v = v.map_err(|e| e.to_string())?;
    Ok((Value::Bool(v.holds), certificate_json(&v.certificate)))
}

fn evaluate(prop: &str, code: &RankCode, system: &Option<QSystem>, caps: Caps) -> Outcome {
    let nondegenerate = system.is_some();
    let needs_system = "needs a nondegenerate code";
    match prop {
        "nondegenerate" => Ok((Value::Bool(nondegenerate), json!({"kind": "column_rank", "rank": code.column_rank()}))),
        "distance" => {
            let s = code.weight_spectrum(caps.enumeration).map_err(|e| e.to_string())?;
            let counts: BTreeMap<String, u64> = s.counts.iter().map(|(w, c)| (w.to_string(), *c)).collect();
            Ok((Value::from(s.min_distance), json!({"kind": "projective_spectrum", "counts": counts})))
        }
        "intersecting" if !nondegenerate => skipped(needs_system),
        "intersecting" => verdict(is_rank_intersecting(code, caps.pairs)),
        "hamming_intersecting" => verdict(is_hamming_intersecting(code, caps.pairs)),
        "minimal" if !nondegenerate => skipped(needs_system),
        "minimal" => verdict(is_minimal(code, caps.pairs)),
        "mrd" | "mrd_label" => {
            let s = mrd_status(code, caps.enumeration).map_err(|e| e.to_string())?;
            let d = code.min_distance(caps.enumeration).map_err(|e| e.to_string())?;
            let bound = rankint_core::properties::singleton_bound(
                code.field().q(),
                code.field().m() as usize,
                code.n(),
                code.k(),
            );
            let cert = json!({"kind": "singleton", "d": d, "bound": bound, "label": s.label()});
            if prop == "mrd" {
                Ok((Value::Bool(s == rankint_core::properties::MrdStatus::Mrd), cert))
            } else {
                Ok((Value::String(s.label().into()), cert))
            }
        }
        "separating" => verdict(is_21_separating(code, caps.pairs)),
        "frameproof" if !nondegenerate => skipped(needs_system),
        "frameproof" => verdict(is_2_rank_frameproof(code, caps.pairs)),
        "spannable" | "scattered" | "hyperplane_scattered" => {
            let Some(u) = system else { return skipped(needs_system) };
            match prop {
                "spannable" if u.k() < 2 => skipped("needs k >= 2"),
                "spannable" => match is_2_spannable(u, caps.enumeration).map_err(|e| e.to_string())? {
                    Some(w) => Ok((Value::Bool(true), witness_json(&w))),
                    None => Ok((Value::Bool(false), json!({"kind": "exhaustive_hyperplane_pairs"}))),
                },
                "scattered" => {
                    let s = is_scattered(u, caps.enumeration).map_err(|e| e.to_string())?;
                    Ok((Value::Bool(s), json!({"kind": "point_weights"})))
                }
                _ => {
                    let s = is_scattered_wrt_hyperplanes(u, caps.enumeration).map_err(|e| e.to_string())?;
                    Ok((Value::Bool(s), json!({"kind": "hyperplane_weights"})))
                }
            }
        }
        _ => Err(format!("unknown property {prop:?}")),
    }
}

fn compare(e: &Expectation, actual: Option<&Value>, failed: bool) -> ExpectationResult {
    let expected = expected_json(&e.value);
    let actual = actual.cloned().unwrap_or(Value::Null);
    let status = if failed {
        Status::Error
    } else {
        let ok = match (&e.value, &actual) {
            (Expected::Bool(b), Value::Bool(a)) => a == b,
            (Expected::Int(i), Value::Number(a)) => a.as_u64() == Some(*i),
            (Expected::Label(l), Value::String(a)) => a == l,
            _ => false,
        };
        if ok {
            Status::Match
        } else {
            Status::Mismatch
        }
    };
    ExpectationResult { property: e.property.clone(), expected, actual, citation: e.citation.clone(), status }
}

/// Runs `selected` plus every property named in the file's expectations.
pub fn verify(file: &CodeFile, label: &str, selected: &[String], caps: Caps) -> PropertyReport {
    let code = &file.code;
    let f: &ExtField = code.field();
    let system = QSystem::of_code(code).ok();
    let mut order: Vec<String> = selected.to_vec();
    for e in file.expected.iter().flatten() {
        if !order.contains(&e.property) {
            order.push(e.property.clone());
        }
    }
    let mut verdicts = BTreeMap::new();
    let mut certificates = BTreeMap::new();
    let mut timings = BTreeMap::new();
    let mut failed = Vec::new();
    for p in &order {
        let t = Instant::now();
        let (v, c) = match evaluate(p, code, &system, caps) {
            Ok(vc) => vc,
            Err(msg) => {
                failed.push(p.clone());
                (Value::String("error".into()), json!({"kind": "error", "message": msg}))
            }
        };
        timings.insert(p.clone(), (t.elapsed().as_secs_f64() * 1e6).round() / 1e3);
        verdicts.insert(p.clone(), v);
        certificates.insert(p.clone(), c);
    }
    let expectations = file
        .expected
        .iter()
        .flatten()
        .map(|e| compare(e, verdicts.get(&e.property), failed.contains(&e.property)))
        .collect();
    PropertyReport {
        code: CodeInfo { name: label.to_string(), q: f.q(), m: f.m(), n: code.n(), k: code.k() },
        modulus: f.modulus().to_vec(),
        verdicts,
        certificates,
        expectations,
        timings_ms: timings,
        order,
        errors: failed.len(),
    }
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn to_json(reports: &[PropertyReport]) -> String {
    let mut s = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0])
    } else {
        serde_json::to_string_pretty(reports)
    }
    .expect("reports serialize");
    s.push('\n');
    s
}

/// One row per (code, property).
pub fn to_csv(reports: &[PropertyReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["code", "property", "verdict", "expected", "status"]).expect("in-memory write");
    for r in reports {
        for p in &r.order {
            let exp = r.expectations.iter().find(|e| &e.property == p);
            let expected = exp.map(|e| value_text(&e.expected)).unwrap_or_default();
            let status = exp.map(|e| value_text(&serde_json::to_value(&e.status).expect("status"))).unwrap_or_default();
            w.write_record([r.code.name.as_str(), p, &value_text(&r.verdicts[p]), &expected, &status])
                .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn certificate_note(c: &Value) -> String {
    match c["kind"].as_str() {
        Some("sufficient_condition") => "2d > n shortcut".into(),
        Some("exhaustive") => format!("2d > n shortcut not taken; exhaustive scan, {} checks", c["checked"]),
        Some("skipped") => format!("skipped: {}", value_text(&c["reason"])),
        Some("error") => format!("error: {}", value_text(&c["message"])),
        Some("pair") => format!("counterexample pair {} {}", c["first"], c["second"]),
        Some("witness") => format!("hyperplanes {} and {}", c["h1"], c["h2"]),
        _ => String::new(),
    }
}

pub fn to_text(reports: &[PropertyReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out += &format!(
            "{}: [{}, {}]_{{{}^{}/{}}}, modulus {:?}\n",
            r.code.name, r.code.n, r.code.k, r.code.q, r.code.m, r.code.q, r.modulus
        );
        for p in &r.order {
            let note = if p == "intersecting" { certificate_note(&r.certificates[p]) } else { String::new() };
            if note.is_empty() {
                out += &format!("  {p}: {}\n", value_text(&r.verdicts[p]));
            } else {
                out += &format!("  {p}: {} ({note})\n", value_text(&r.verdicts[p]));
            }
        }
        for e in &r.expectations {
            let status = value_text(&serde_json::to_value(&e.status).expect("status"));
            out += &format!("  expect {} = {}: {status} [{}]\n", e.property, value_text(&e.expected), e.citation);
        }
    }
    out
}

/// The report as JSON with the timings block removed, for run-to-run comparison.
pub fn without_timings(json: &str) -> Value {
    let mut v: Value = serde_json::from_str(json).expect("report JSON");
    strip(&mut v);
    v
}

fn strip(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("timings_ms");
            map.remove("timings");
            map.values_mut().for_each(strip);
        }
        Value::Array(items) => items.iter_mut().for_each(strip),
        _ => {}
    }
}
