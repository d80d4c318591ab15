//! Command line interface.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rankint_core::constructions::{
    club_code, default_points, extend_to_intersecting, gabidulin, recipe, simplex, Expectation, Expected, Recipe,
};
use rankint_core::geometry::{hyperplane_weights, point_weight_spectrum};
use rankint_core::linalg::DEFAULT_ENUMERATION_CAP;
use rankint_core::properties::DEFAULT_PAIR_CAP;
use rankint_core::{ExtField, QSystem};
use serde_json::json;

use crate::codefile::{self, CodeFile};
use crate::feasible::{self, IntRange};
use crate::report::{self, Caps};
use crate::search::{self, SearchConfig, Span};

#[derive(Parser, Debug)]
#[command(name = "rankint", version, about = "Rank-metric intersecting codes: verification, constructions and search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check properties of code files against their expectations.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Comma-separated property names.
        #[arg(long, value_delimiter = ',')]
        properties: Option<Vec<String>>,
        #[arg(long, default_value_t = DEFAULT_PAIR_CAP)]
        pair_cap: u64,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Build a code and write it as a code file with its expected properties.
    Construct {
        #[command(subcommand)]
        kind: Construct,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Feasibility verdicts over a parameter grid.
    Feasible {
        #[arg(long)]
        q: IntRange,
        #[arg(long)]
        m: IntRange,
        #[arg(long)]
        k: IntRange,
        /// Lengths; without it each row gives the best verdict over all lengths.
        #[arg(long)]
        n: Option<IntRange>,
        #[arg(long)]
        d: Option<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Exhaustive search over the canonical forms.
    Search {
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// 1, 2, 3 or all.
        #[arg(long)]
        form: String,
        /// Comma-separated START..END ranges applied to every form.
        #[arg(long, value_delimiter = ',')]
        range: Option<Vec<Span>>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = search::DEFAULT_CHUNK)]
        chunk: u64,
        /// 6, or 7 to add one more vector and decide generically.
        #[arg(long, default_value_t = 6)]
        length: usize,
        /// Re-decide every candidate whose index is a multiple of this generically (0 disables).
        #[arg(long, default_value_t = search::DEFAULT_ORACLE_STRIDE)]
        oracle_stride: u64,
        /// Stop after this many chunks; the checkpoint allows resuming.
        #[arg(long)]
        max_chunks: Option<usize>,
    },
    /// Weight spectrum and point/hyperplane weight distributions.
    Spectrum {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    Gabidulin {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: usize,
        /// Defaults to m.
        #[arg(long)]
        n: Option<usize>,
    },
    Simplex {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: usize,
    },
    Club {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: u32,
    },
    /// Direct extension of the `[m, k]` Gabidulin system by `r` vectors.
    Extend {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
    },
    /// A named example code.
    Example { id: String },
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn field(q: u32, m: u32) -> Result<Arc<ExtField>> {
    Ok(Arc::new(ExtField::new(q, m, None)?))
}

fn exp(property: &str, value: Expected, citation: &str) -> Expectation {
    Expectation { property: property.into(), value, citation: citation.into() }
}

pub fn construct(kind: &Construct) -> Result<CodeFile> {
    use Expected::*;
    let r = match *kind {
        Construct::Gabidulin { q, m, k, n } => {
            let f = field(q, m)?;
            let n = n.unwrap_or(m as usize);
            let code = gabidulin(f.clone(), &default_points(&f, n), k)?;
            let d = n + 1 - k;
            Recipe {
                name: format!("gab_{n}_{k}_q{q}_m{m}"),
                code,
                expected: vec![
                    exp("distance", Int(d as u64), "Gabidulin distance n - k + 1"),
                    exp("mrd", Bool(true), "Gabidulin codes are MRD"),
                    exp("intersecting", Bool(2 * d > n), "MRD with n <= m: intersecting iff 2d > n"),
                ],
            }
        }
        Construct::Simplex { q, m, k } => {
            let code = simplex(field(q, m)?, k)?;
            let mut expected = vec![
                exp("distance", Int(m as u64), "simplex codewords all have rank m"),
                exp("minimal", Bool(true), "constant-weight simplex code is minimal"),
                exp("separating", Bool(true), "rk(c + c') <= m < 2m"),
            ];
            if k >= 2 {
                expected.push(exp("intersecting", Bool(false), "sigma(e1 G) and sigma(e2 G) meet trivially"));
            }
            Recipe { name: format!("simplex_{k}_{m}_q{q}"), code, expected }
        }
        Construct::Club { q, m } => Recipe {
            name: format!("club_{m}_2_q{q}"),
            code: club_code(field(q, m)?)?,
            expected: vec![
                exp("distance", Int(2), "[h,2,2] club code"),
                exp("intersecting", Bool(true), "club codes are intersecting"),
                exp("spannable", Bool(false), "club systems are not 2-spannable"),
            ],
        },
        Construct::Extend { q, m, k, r } => {
            let f = field(q, m)?;
            let gab = gabidulin(f.clone(), &default_points(&f, m as usize), k)?;
            let u = extend_to_intersecting(&QSystem::of_code(&gab)?, r)?;
            Recipe {
                name: format!("extend_gab_{m}_{k}_r{r}_q{q}"),
                code: u.to_code()?,
                expected: vec![
                    exp("intersecting", Bool(true), "direct extension of a scattered system is intersecting"),
                    exp("spannable", Bool(false), "every hyperplane weight is below n/2"),
                ],
            }
        }
        Construct::Example { ref id } => recipe(id)?,
    };
    Ok(CodeFile::from_recipe(r))
}

fn verify_files(
    files: &[PathBuf],
    props: &[String],
    caps: Caps,
    threads: usize,
) -> Vec<Result<report::PropertyReport>> {
    let run = |p: &PathBuf| -> Result<report::PropertyReport> {
        let file = codefile::read(p)?;
        let fallback = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        Ok(report::verify(&file, &file.label(&fallback), props, caps))
    };
    let threads = threads.max(1).min(files.len().max(1));
    if threads == 1 {
        return files.iter().map(run).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<Option<Result<report::PropertyReport>>>> =
        files.iter().map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= files.len() {
                    break;
                }
                *slots[i].lock().expect("slot") = Some(run(&files[i]));
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().expect("slot").expect("filled")).collect()
}

fn spectrum_report(file: &CodeFile, label: &str, cap: u64) -> Result<serde_json::Value> {
    let code = &file.code;
    let s = code.weight_spectrum(cap)?;
    let counts: BTreeMap<String, u64> = s.counts.iter().map(|(w, c)| (w.to_string(), *c)).collect();
    let mut v = json!({
        "code": {"name": label, "q": code.field().q(), "m": code.field().m(), "n": code.n(), "k": code.k()},
        "modulus": code.field().modulus(),
        "weight_spectrum": {"min_distance": s.min_distance, "projective_counts": counts},
    });
    if let Ok(u) = QSystem::of_code(code) {
        let points: BTreeMap<String, u64> =
            point_weight_spectrum(&u, cap)?.into_iter().map(|(w, c)| (w.to_string(), c)).collect();
        let mut hyper: BTreeMap<String, u64> = BTreeMap::new();
        for (_, w) in hyperplane_weights(&u, cap)? {
            *hyper.entry(w.to_string()).or_default() += 1;
        }
        v["point_weights"] = json!(points);
        v["hyperplane_weights"] = json!(hyper);
    }
    Ok(v)
}

fn spectrum_text(v: &serde_json::Value) -> String {
    let c = &v["code"];
    let mut out = format!(
        "{}: [{}, {}]_{{{}^{}/{}}}\n",
        c["name"].as_str().unwrap_or(""),
        c["n"],
        c["k"],
        c["q"],
        c["m"],
        c["q"]
    );
    out += &format!("  min distance: {}\n", v["weight_spectrum"]["min_distance"]);
    for (key, title) in
        [("weight_spectrum", "rank"), ("point_weights", "point weight"), ("hyperplane_weights", "hyperplane weight")]
    {
        let map = if key == "weight_spectrum" { &v[key]["projective_counts"] } else { &v[key] };
        if let Some(obj) = map.as_object() {
            for (w, n) in obj {
                out += &format!("  {title} {w}: {n}\n");
            }
        }
    }
    out
}

fn spectrum_csv(v: &serde_json::Value) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["code", "kind", "weight", "count"]).expect("in-memory write");
    let name = v["code"]["name"].as_str().unwrap_or("");
    for (key, kind) in [("weight_spectrum", "rank"), ("point_weights", "point"), ("hyperplane_weights", "hyperplane")] {
        let map = if key == "weight_spectrum" { &v[key]["projective_counts"] } else { &v[key] };
        if let Some(obj) = map.as_object() {
            for (wt, n) in obj {
                w.write_record([name, kind, wt, &n.to_string()]).expect("in-memory write");
            }
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn parse_forms(s: &str) -> Result<Vec<u8>> {
    match s {
        "all" => Ok(vec![1, 2, 3]),
        "1" | "2" | "3" => Ok(vec![s.parse()?]),
        _ => bail!("--form must be 1, 2, 3 or all, got {s:?}"),
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify { files, properties, pair_cap, cap, threads, output } => {
            let props =
                properties.unwrap_or_else(|| report::DEFAULT_PROPERTIES.iter().map(|s| s.to_string()).collect());
            report::check_property_names(&props)?;
            let caps = Caps { pairs: pair_cap, enumeration: cap };
            let mut reports = Vec::new();
            for (path, r) in files.iter().zip(verify_files(&files, &props, caps, threads)) {
                reports.push(r.with_context(|| format!("verifying {}", path.display()))?);
            }
            let text = match output.format {
                Format::Json => report::to_json(&reports),
                Format::Csv => report::to_csv(&reports),
                Format::Text => report::to_text(&reports),
            };
            write_output(output.out.as_deref(), &text)?;
            Ok(reports.iter().map(|r| r.exit_code()).max().unwrap_or(0))
        }
        Command::Construct { kind, out } => {
            let file = construct(&kind)?;
            write_output(out.as_deref(), &codefile::emit(&file))?;
            Ok(0)
        }
        Command::Feasible { q, m, k, n, d, output } => {
            let rows = feasible::grid(&q, &m, &k, n.as_ref(), d)?;
            let text = match output.format {
                Format::Json => feasible::to_json(&rows),
                Format::Csv => feasible::to_csv(&rows),
                Format::Text => feasible::to_text(&rows),
            };
            write_output(output.out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Search { q, form, range, threads, checkpoint, report, chunk, length, oracle_stride, max_chunks } => {
            let mut config = SearchConfig::new(q, parse_forms(&form)?);
            config.ranges = range;
            config.threads = threads;
            config.checkpoint = checkpoint;
            config.chunk = chunk;
            config.length = length;
            config.oracle_stride = oracle_stride;
            config.max_chunks = max_chunks;
            let r = search::run_search(&config)?;
            write_output(report.as_deref(), &r.to_json())?;
            Ok(0)
        }
        Command::Spectrum { file, cap, output } => {
            let f = codefile::read(&file)?;
            let fallback = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let v = spectrum_report(&f, &f.label(&fallback), cap)?;
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&v)? + "\n",
                Format::Csv => spectrum_csv(&v),
                Format::Text => spectrum_text(&v),
            };
            write_output(output.out.as_deref(), &text)?;
            Ok(0)
        }
    }
}
