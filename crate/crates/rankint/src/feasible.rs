//! Feasibility tables over parameter grids.

use std::ops::RangeInclusive;
use std::str::FromStr;

use rankint_core::properties::{feasibility, FeasibilityVerdict};
use serde::Serialize;

/// `7` or `5..8` (inclusive).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntRange(pub RangeInclusive<u32>);

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
        let (a, b) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if a > b {
            return Err(format!("empty range {s:?}"));
        }
        Ok(IntRange(a..=b))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub q: u32,
    pub m: u32,
    pub k: u32,
    /// `None` when no length was given: the best verdict over all lengths.
    pub n: Option<u32>,
    pub d: Option<u32>,
    pub verdict: &'static str,
    pub citation: &'static str,
}

fn row(v: FeasibilityVerdict, n: Option<u32>) -> Row {
    Row { q: v.q, m: v.m, k: v.k, n: n.map(|_| v.n), d: v.d, verdict: v.verdict.name(), citation: v.citation }
}

/// Rows in `q, m, k, n` lexicographic order.
pub fn grid(
    q: &IntRange,
    m: &IntRange,
    k: &IntRange,
    n: Option<&IntRange>,
    d: Option<u32>,
) -> rankint_core::Result<Vec<Row>> {
    let mut rows = Vec::new();
    for q in q.0.clone() {
        for m in m.0.clone() {
            for k in k.0.clone() {
                match n {
                    Some(ns) => {
                        for n in ns.0.clone() {
                            rows.push(row(feasibility(q, m, k, Some(n), d)?, Some(n)));
                        }
                    }
                    None => rows.push(row(feasibility(q, m, k, None, d)?, None)),
                }
            }
        }
    }
    Ok(rows)
}

pub fn to_json(rows: &[Row]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["q", "m", "k", "n", "d", "verdict", "citation"]).expect("in-memory write");
    let opt = |x: Option<u32>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.q.to_string(),
            r.m.to_string(),
            r.k.to_string(),
            opt(r.n),
            opt(r.d),
            r.verdict.into(),
            r.citation.into(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn to_text(rows: &[Row]) -> String {
    let mut out = format!("{:>3} {:>3} {:>3} {:>4} {:>3}  {:<18} {}\n", "q", "m", "k", "n", "d", "verdict", "rule");
    let opt = |x: Option<u32>| x.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
    for r in rows {
        out += &format!(
            "{:>3} {:>3} {:>3} {:>4} {:>3}  {:<18} {}\n",
            r.q,
            r.m,
            r.k,
            opt(r.n),
            opt(r.d),
            r.verdict,
            r.citation
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("5..8".parse::<IntRange>().unwrap(), IntRange(5..=8));
        assert_eq!("3".parse::<IntRange>().unwrap(), IntRange(3..=3));
        assert!("8..5".parse::<IntRange>().is_err());
        assert!("x".parse::<IntRange>().is_err());
    }
}
