//! JSON code files.
//!
//! ```json
//! {
//!   "name": "gab_3_2_f8",
//!   "field": {"q": 2, "m": 3, "modulus": [1, 1, 0, 1]},
//!   "n": 3,
//!   "k": 2,
//!   "generator": [
//!     [1, 2, 4],
//!     [1, 4, 6]
//!   ],
//!   "expected_properties": [
//!     {"property": "distance", "value": 2, "citation": "..."}
//!   ]
//! }
//! ```
//!
//! `name` and `expected_properties` are optional. [`emit`] writes exactly
//! this layout, so `emit(parse(text)) == text` for every emitted file.

use std::path::Path;
use std::sync::Arc;

use rankint_core::constructions::{Expectation, Expected, Recipe};
use rankint_core::{ExtField, Fqm, RankCode};
use serde::Deserialize;
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum CodeFileError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("schema error at line {line}, column {column}: {msg}")]
    Schema { line: usize, column: usize, msg: String },
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error(transparent)]
    Code(#[from] rankint_core::Error),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    q: u32,
    m: u32,
    modulus: Vec<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExpectation {
    property: String,
    value: Value,
    citation: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCodeFile {
    name: Option<String>,
    field: RawField,
    n: usize,
    k: usize,
    generator: Vec<Vec<u64>>,
    expected_properties: Option<Vec<RawExpectation>>,
}

/// A parsed code file.
#[derive(Clone, Debug)]
pub struct CodeFile {
    pub name: Option<String>,
    pub code: RankCode,
    pub expected: Option<Vec<Expectation>>,
}

impl CodeFile {
    pub fn from_recipe(r: Recipe) -> Self {
        CodeFile { name: Some(r.name), code: r.code, expected: Some(r.expected) }
    }

    pub fn bare(code: RankCode) -> Self {
        CodeFile { name: None, code, expected: None }
    }

    /// Name for reports: the recorded name, else `fallback`.
    pub fn label(&self, fallback: &str) -> String {
        self.name.clone().unwrap_or_else(|| fallback.to_string())
    }
}

fn schema(line: usize, column: usize, msg: impl Into<String>) -> CodeFileError {
    CodeFileError::Schema { line, column, msg: msg.into() }
}

fn expected_value(v: &Value) -> Option<Expected> {
    match v {
        Value::Bool(b) => Some(Expected::Bool(*b)),
        Value::Number(n) => n.as_u64().map(Expected::Int),
        Value::String(s) => Some(Expected::Label(s.clone())),
        _ => None,
    }
}

pub fn parse(text: &str) -> Result<CodeFile, CodeFileError> {
    let raw: RawCodeFile = serde_json::from_str(text).map_err(|e| schema(e.line(), e.column(), e.to_string()))?;
    let field = Arc::new(ExtField::new(raw.field.q, raw.field.m, Some(&raw.field.modulus))?);
    if raw.generator.len() != raw.k {
        return Err(schema(0, 0, format!("generator has {} rows but k = {}", raw.generator.len(), raw.k)));
    }
    let mut rows = Vec::with_capacity(raw.k);
    for (i, row) in raw.generator.iter().enumerate() {
        if row.len() != raw.n {
            return Err(schema(0, 0, format!("generator row {i} has {} entries but n = {}", row.len(), raw.n)));
        }
        let elems = row
            .iter()
            .map(|&e| {
                field.element(e).map_err(|_| {
                    CodeFileError::FieldMismatch(format!(
                        "entry {e} in row {i} is not an element of F_{}^{}",
                        raw.field.q, raw.field.m
                    ))
                })
            })
            .collect::<Result<Vec<Fqm>, _>>()?;
        rows.push(elems);
    }
    let code = RankCode::new(field, rows)?;
    let expected = match raw.expected_properties {
        None => None,
        Some(list) => Some(
            list.into_iter()
                .enumerate()
                .map(|(i, e)| {
                    let value = expected_value(&e.value).ok_or_else(|| {
                        schema(0, 0, format!("expected_properties[{i}].value must be a bool, integer or string"))
                    })?;
                    Ok(Expectation { property: e.property, value, citation: e.citation })
                })
                .collect::<Result<Vec<_>, CodeFileError>>()?,
        ),
    };
    Ok(CodeFile { name: raw.name, code, expected })
}

pub fn read(path: &Path) -> Result<CodeFile, CodeFileError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CodeFileError::Io { path: path.display().to_string(), source })?;
    parse(&text)
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn int_list<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

pub fn expected_json(v: &Expected) -> Value {
    match v {
        Expected::Bool(b) => Value::Bool(*b),
        Expected::Int(i) => Value::from(*i),
        Expected::Label(s) => Value::String(s.clone()),
    }
}

pub fn emit(file: &CodeFile) -> String {
    let code = &file.code;
    let f = code.field();
    let mut out = String::from("{\n");
    if let Some(name) = &file.name {
        out += &format!("  \"name\": {},\n", json_str(name));
    }
    out += &format!("  \"field\": {{\"q\": {}, \"m\": {}, \"modulus\": {}}},\n", f.q(), f.m(), int_list(f.modulus()));
    out += &format!("  \"n\": {},\n  \"k\": {},\n  \"generator\": [\n", code.n(), code.k());
    let rows: Vec<String> =
        code.generator().iter().map(|row| format!("    {}", int_list(row.iter().map(|x| x.encoding())))).collect();
    out += &rows.join(",\n");
    out += "\n  ]";
    if let Some(expected) = &file.expected {
        out += ",\n  \"expected_properties\": [";
        let items: Vec<String> = expected
            .iter()
            .map(|e| {
                format!(
                    "\n    {{\"property\": {}, \"value\": {}, \"citation\": {}}}",
                    json_str(&e.property),
                    expected_json(&e.value),
                    json_str(&e.citation)
                )
            })
            .collect();
        out += &items.join(",");
        out += if items.is_empty() { "]" } else { "\n  ]" };
    }
    out += "\n}\n";
    out
}
