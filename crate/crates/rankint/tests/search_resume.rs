use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use rankint::core::search::Searcher;
use rankint::report::without_timings;
use rankint::search::{checkpoint_line, run_search, SearchConfig, SearchError, Span};

fn config(checkpoint: Option<std::path::PathBuf>) -> SearchConfig {
    let mut c = SearchConfig::new(2, vec![3]);
    c.ranges = Some(vec![Span { start: 20_000, end: 30_000 }]);
    c.chunk = 1000;
    c.oracle_stride = 500;
    c.checkpoint = checkpoint;
    c
}

fn strip(json: &str) -> serde_json::Value {
    without_timings(json)
}

#[test]
fn interrupted_runs_resume_to_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let reference = run_search(&config(None)).unwrap();
    assert!(reference.complete);
    assert!(reference.survivors.is_empty());

    let cp = dir.path().join("cp.txt");
    let mut c = config(Some(cp.clone()));
    c.max_chunks = Some(3);
    let partial = run_search(&c).unwrap();
    assert!(!partial.complete);
    assert_eq!(partial.chunks_completed, 3);
    assert_eq!(std::fs::read_to_string(&cp).unwrap().lines().count(), 3);

    // A torn final write is discarded.
    let mut text = std::fs::read_to_string(&cp).unwrap();
    text.push_str("3,23000,24000,99");
    std::fs::write(&cp, &text).unwrap();

    c.max_chunks = None;
    c.threads = 3;
    let resumed = run_search(&c).unwrap();
    assert_eq!(resumed.timings.chunks_from_checkpoint, 3);
    assert_eq!(strip(&resumed.to_json()), strip(&reference.to_json()));
    assert_eq!(std::fs::read_to_string(&cp).unwrap().lines().count(), 10);

    // Nothing left to do.
    let again = run_search(&c).unwrap();
    assert_eq!(again.timings.chunks_this_run, 0);
    assert_eq!(strip(&again.to_json()), strip(&reference.to_json()));
}

#[test]
fn checkpoint_lines_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.txt");
    run_search(&config(Some(cp.clone()))).unwrap();
    let text = std::fs::read_to_string(&cp).unwrap();
    let mut s = Searcher::new(2, 3, 6, 0).unwrap();
    for line in text.lines() {
        let f: Vec<u64> = line.split(',').take(3).map(|x| x.parse().unwrap()).collect();
        let out = s.run_range(f[1], f[2]).unwrap();
        assert_eq!(checkpoint_line(f[0] as u8, f[1], f[2], &out), line);
    }
}

#[test]
fn corrupt_checkpoints_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.txt");
    let mut c = config(Some(cp.clone()));
    c.max_chunks = Some(2);
    run_search(&c).unwrap();
    let text = std::fs::read_to_string(&cp).unwrap();
    for bad in [text.replacen("1000,", "1001,", 1), format!("x{}", &text[1..]), format!("{text}garbage\n")] {
        std::fs::write(&cp, &bad).unwrap();
        match run_search(&c) {
            Err(SearchError::CorruptCheckpoint { line, .. }) => assert!(line >= 1),
            other => panic!("expected a corrupt checkpoint, got {other:?}"),
        }
    }
}

#[test]
fn thread_count_does_not_change_the_report() {
    let mut c = config(None);
    c.ranges = Some(vec![Span { start: 0, end: 3000 }, Span { start: 500_000, end: 503_000 }]);
    c.chunk = 700;
    let one = run_search(&c).unwrap();
    c.threads = 4;
    let four = run_search(&c).unwrap();
    assert_eq!(strip(&one.to_json()), strip(&four.to_json()));
    assert_eq!(one.examined + one.skipped, 6000);
}

#[test]
fn killed_process_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.txt");
    let args = |report: &std::path::Path, cp: Option<&std::path::Path>| {
        let mut a: Vec<String> = ["search", "--form", "3", "--range", "100000..160000", "--chunk", "2000"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        a.extend(["--report".into(), report.display().to_string()]);
        if let Some(cp) = cp {
            a.extend(["--checkpoint".into(), cp.display().to_string()]);
        }
        a
    };
    let bin = env!("CARGO_BIN_EXE_rankint");
    let full = dir.path().join("full.json");
    assert!(Command::new(bin).args(args(&full, None)).status().unwrap().success());

    let mut child =
        Command::new(bin).args(args(&dir.path().join("never.json"), Some(&cp))).stdout(Stdio::null()).spawn().unwrap();
    let t = Instant::now();
    loop {
        let lines = std::fs::read_to_string(&cp).map(|s| s.lines().count()).unwrap_or(0);
        if lines >= 2 || t.elapsed() > Duration::from_secs(60) {
            break;
        }
        std::thread::sleep(Duration::from_millis(5));
    }
    child.kill().unwrap();
    child.wait().unwrap();
    let done = std::fs::read_to_string(&cp).unwrap().lines().count();
    assert!((2..30).contains(&done), "killed after {done} chunks");

    let resumed = dir.path().join("resumed.json");
    assert!(Command::new(bin).args(args(&resumed, Some(&cp))).status().unwrap().success());
    let a = strip(&std::fs::read_to_string(&full).unwrap());
    let b = strip(&std::fs::read_to_string(&resumed).unwrap());
    assert_eq!(a, b);
    assert_eq!(a["chunks_completed"], 30);
}
