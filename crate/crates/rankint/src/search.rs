//! Chunked, checkpointed and multi-threaded driver for the candidate search.
//!
//! Each completed chunk appends one line to the checkpoint file:
//!
//! ```text
//! form,start,end,examined,survivors,crc32
//! ```
//!
//! `survivors` lists candidate indices separated by `;` (empty when there
//! are none) and `crc32` is the CRC-32 of everything before the last comma,
//! as 8 lowercase hex digits.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rankint_core::search::{RangeOutcome, Searcher};
use serde::Serialize;

pub const DEFAULT_CHUNK: u64 = 4096;
pub const DEFAULT_ORACLE_STRIDE: u64 = 10_000;

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("corrupt checkpoint {path}, line {line}: {reason}")]
    CorruptCheckpoint { path: String, line: usize, reason: String },
    #[error("checkpoint {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid range for form {form}: {reason}")]
    InvalidRange { form: u8, reason: String },
    #[error(transparent)]
    Core(#[from] rankint_core::Error),
}

/// `START..END` (end exclusive).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: u64,
    pub end: u64,
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("expected START..END, got {s:?}"))?;
        let parse = |t: &str| t.trim().replace('_', "").parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
        Ok(Span { start: parse(a)?, end: parse(b)? })
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub q: u32,
    pub forms: Vec<u8>,
    /// Ranges applied to every form; `None` means each form's full range.
    pub ranges: Option<Vec<Span>>,
    /// 6 or 7.
    pub length: usize,
    pub threads: usize,
    pub chunk: u64,
    pub oracle_stride: u64,
    pub checkpoint: Option<PathBuf>,
    /// Stop after this many chunks in this invocation.
    pub max_chunks: Option<usize>,
}

impl SearchConfig {
    pub fn new(q: u32, forms: Vec<u8>) -> Self {
        SearchConfig {
            q,
            forms,
            ranges: None,
            length: 6,
            threads: 1,
            chunk: DEFAULT_CHUNK,
            oracle_stride: DEFAULT_ORACLE_STRIDE,
            checkpoint: None,
            max_chunks: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct ChunkId {
    form: u8,
    start: u64,
    end: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct ChunkResult {
    examined: u64,
    survivors: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RangeSpec {
    pub form: u8,
    pub start: u64,
    pub end: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Survivor {
    pub form: u8,
    pub index: u64,
    pub params: Vec<u64>,
    pub alpha: u64,
    pub beta: u64,
}

/// Details that legitimately differ between runs.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Timings {
    pub wall_ms: u64,
    pub cpu_ms: u64,
    pub chunks_this_run: usize,
    pub chunks_from_checkpoint: usize,
    pub oracle_checks_this_run: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub q: u32,
    pub length: usize,
    pub chunk_size: u64,
    pub oracle_stride: u64,
    pub ranges: Vec<RangeSpec>,
    pub candidates: u64,
    pub chunks_total: usize,
    pub chunks_completed: usize,
    pub complete: bool,
    pub examined: u64,
    pub skipped: u64,
    pub survivors: Vec<Survivor>,
    pub timings: Timings,
}

impl SearchReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// The checkpoint line of one chunk.
pub fn checkpoint_line(form: u8, start: u64, end: u64, outcome: &RangeOutcome) -> String {
    let survivors: Vec<String> = outcome.survivors.iter().map(u64::to_string).collect();
    let body = format!("{form},{start},{end},{},{}", outcome.examined, survivors.join(";"));
    format!("{body},{:08x}", crc32fast::hash(body.as_bytes()))
}

fn parse_line(line: &str) -> Result<(ChunkId, ChunkResult), String> {
    let (body, crc) = line.rsplit_once(',').ok_or("missing crc field")?;
    let crc = u32::from_str_radix(crc, 16).map_err(|_| format!("bad crc {crc:?}"))?;
    if crc32fast::hash(body.as_bytes()) != crc {
        return Err("crc mismatch".into());
    }
    let fields: Vec<&str> = body.split(',').collect();
    if fields.len() != 5 {
        return Err(format!("expected 6 fields, found {}", fields.len() + 1));
    }
    let num = |s: &str| s.parse::<u64>().map_err(|_| format!("bad number {s:?}"));
    let form = fields[0].parse::<u8>().map_err(|_| format!("bad form {:?}", fields[0]))?;
    let (start, end, examined) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
    let survivors =
        if fields[4].is_empty() { Vec::new() } else { fields[4].split(';').map(num).collect::<Result<Vec<_>, _>>()? };
    if start > end || examined > end - start || survivors.iter().any(|&s| s < start || s >= end) {
        return Err("counts or survivors outside the chunk".into());
    }
    Ok((ChunkId { form, start, end }, ChunkResult { examined, survivors }))
}

/// Reads completed chunks. A final line without a newline is the remnant
/// of an interrupted write; it is cut off so that appending can continue.
fn load_checkpoint(path: &Path) -> Result<BTreeMap<ChunkId, ChunkResult>, SearchError> {
    let io = |source| SearchError::Io { path: path.display().to_string(), source };
    let mut done = BTreeMap::new();
    let mut file = match OpenOptions::new().read(true).write(true).open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(done),
        Err(e) => return Err(io(e)),
    };
    let mut text = String::new();
    file.read_to_string(&mut text).map_err(io)?;
    let complete_len = text.rfind('\n').map_or(0, |i| i + 1);
    if complete_len < text.len() {
        file.set_len(complete_len as u64).map_err(io)?;
        file.seek(SeekFrom::End(0)).map_err(io)?;
    }
    for (i, line) in text[..complete_len].lines().enumerate() {
        let corrupt =
            |reason: String| SearchError::CorruptCheckpoint { path: path.display().to_string(), line: i + 1, reason };
        let (id, result) = parse_line(line).map_err(corrupt)?;
        if let Some(prev) = done.insert(id, result.clone()) {
            if prev != result {
                return Err(corrupt("conflicting duplicate of an earlier chunk".into()));
            }
        }
    }
    Ok(done)
}

fn plan(config: &SearchConfig) -> Result<(Vec<RangeSpec>, Vec<ChunkId>), SearchError> {
    if config.chunk == 0 {
        return Err(SearchError::Core(rankint_core::Error::InvalidParameters("chunk size must be positive".into())));
    }
    let mut ranges = Vec::new();
    let mut chunks = Vec::new();
    let mut forms = config.forms.clone();
    forms.sort_unstable();
    forms.dedup();
    for &form in &forms {
        let total = u64::try_from(rankint_core::search::search_space_size(config.q, form)?)
            .map_err(|_| SearchError::InvalidRange { form, reason: "search space exceeds 64 bits".into() })?;
        let mut spans = config.ranges.clone().unwrap_or_else(|| vec![Span { start: 0, end: total }]);
        spans.sort_by_key(|s| (s.start, s.end));
        for w in spans.windows(2) {
            if w[0].end > w[1].start {
                return Err(SearchError::InvalidRange { form, reason: "ranges overlap".into() });
            }
        }
        for s in spans {
            if s.start > s.end || s.end > total {
                return Err(SearchError::InvalidRange {
                    form,
                    reason: format!("{}..{} is not within 0..{total}", s.start, s.end),
                });
            }
            ranges.push(RangeSpec { form, start: s.start, end: s.end });
            let mut a = s.start;
            while a < s.end {
                let b = (a + config.chunk).min(s.end);
                chunks.push(ChunkId { form, start: a, end: b });
                a = b;
            }
        }
    }
    Ok((ranges, chunks))
}

struct Shared {
    next: AtomicUsize,
    abort: AtomicBool,
    results: Mutex<BTreeMap<ChunkId, ChunkResult>>,
    checkpoint: Option<Mutex<File>>,
    error: Mutex<Option<SearchError>>,
    oracle_checks: Mutex<u64>,
    cpu: Mutex<Duration>,
}

fn worker(config: &SearchConfig, pending: &[ChunkId], limit: usize, shared: &Shared) -> Result<(), SearchError> {
    let started = Instant::now();
    let mut searchers: BTreeMap<u8, Searcher> = BTreeMap::new();
    let result = (|| {
        while !shared.abort.load(Ordering::Relaxed) {
            let i = shared.next.fetch_add(1, Ordering::Relaxed);
            if i >= limit {
                break;
            }
            let id = pending[i];
            let searcher = match searchers.entry(id.form) {
                std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(Searcher::new(config.q, id.form, config.length, config.oracle_stride)?)
                }
            };
            let out = searcher.run_range(id.start, id.end)?;
            if let Some(cp) = &shared.checkpoint {
                let line = checkpoint_line(id.form, id.start, id.end, &out);
                let mut f = cp.lock().expect("checkpoint lock");
                let path = config.checkpoint.as_ref().expect("checkpoint path").display().to_string();
                f.write_all(format!("{line}\n").as_bytes())
                    .and_then(|_| f.flush())
                    .map_err(|source| SearchError::Io { path, source })?;
            }
            *shared.oracle_checks.lock().expect("lock") += out.oracle_checks;
            shared
                .results
                .lock()
                .expect("results lock")
                .insert(id, ChunkResult { examined: out.examined, survivors: out.survivors });
        }
        Ok(())
    })();
    *shared.cpu.lock().expect("lock") += started.elapsed();
    result
}

/// Runs (or resumes) a search and aggregates every completed chunk.
pub fn run_search(config: &SearchConfig) -> Result<SearchReport, SearchError> {
    let wall = Instant::now();
    let (ranges, chunks) = plan(config)?;
    let planned: BTreeSet<ChunkId> = chunks.iter().copied().collect();
    let mut from_checkpoint = BTreeMap::new();
    let mut checkpoint = None;
    if let Some(path) = &config.checkpoint {
        from_checkpoint = load_checkpoint(path)?;
        from_checkpoint.retain(|id, _| planned.contains(id));
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|source| SearchError::Io { path: path.display().to_string(), source })?;
        checkpoint = Some(Mutex::new(file));
    }
    let pending: Vec<ChunkId> = chunks.iter().copied().filter(|c| !from_checkpoint.contains_key(c)).collect();
    let limit = config.max_chunks.map_or(pending.len(), |m| m.min(pending.len()));
    let shared = Shared {
        next: AtomicUsize::new(0),
        abort: AtomicBool::new(false),
        results: Mutex::new(BTreeMap::new()),
        checkpoint,
        error: Mutex::new(None),
        oracle_checks: Mutex::new(0),
        cpu: Mutex::new(Duration::ZERO),
    };
    let threads = config.threads.max(1).min(limit.max(1));
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| {
                if let Err(e) = worker(config, &pending, limit, &shared) {
                    shared.abort.store(true, Ordering::Relaxed);
                    shared.error.lock().expect("lock").get_or_insert(e);
                }
            });
        }
    });
    if let Some(e) = shared.error.into_inner().expect("lock") {
        return Err(e);
    }
    let fresh = shared.results.into_inner().expect("lock");
    let chunks_this_run = fresh.len();
    let chunks_from_checkpoint = from_checkpoint.len();
    let mut all = from_checkpoint;
    all.extend(fresh);

    let mut decoders: BTreeMap<u8, Searcher> = BTreeMap::new();
    let (mut examined, mut skipped) = (0u64, 0u64);
    let mut survivors = Vec::new();
    for (id, r) in &all {
        examined += r.examined;
        skipped += id.end - id.start - r.examined;
        for &index in &r.survivors {
            let dec = match decoders.entry(id.form) {
                std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(Searcher::new(config.q, id.form, config.length, 0)?)
                }
            };
            let c = dec.decode(index);
            survivors.push(Survivor {
                form: id.form,
                index,
                params: c.params.iter().map(|x| x.encoding()).collect(),
                alpha: c.alpha.encoding(),
                beta: c.beta.encoding(),
            });
        }
    }
    Ok(SearchReport {
        q: config.q,
        length: config.length,
        chunk_size: config.chunk,
        oracle_stride: config.oracle_stride,
        candidates: ranges.iter().map(|r| r.end - r.start).sum(),
        ranges,
        chunks_total: chunks.len(),
        chunks_completed: all.len(),
        complete: all.len() == chunks.len(),
        examined,
        skipped,
        survivors,
        timings: Timings {
            wall_ms: wall.elapsed().as_millis() as u64,
            cpu_ms: shared.cpu.into_inner().expect("lock").as_millis() as u64,
            chunks_this_run,
            chunks_from_checkpoint,
            oracle_checks_this_run: shared.oracle_checks.into_inner().expect("lock"),
        },
    })
}
