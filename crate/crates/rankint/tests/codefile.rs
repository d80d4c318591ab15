use std::path::PathBuf;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankint::codefile::{emit, parse, read, CodeFile, CodeFileError};
use rankint::core::{Error, ExtField, RankCode};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

#[test]
fn corpus_roundtrips_byte_for_byte() {
    let mut seen = 0;
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let f = parse(&text).unwrap();
        assert_eq!(emit(&f), text, "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 6);
}

#[test]
fn random_codes_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for &(q, m) in &[(2u32, 4u32), (3, 3), (5, 2), (2, 7)] {
        let f = Arc::new(ExtField::new(q, m, None).unwrap());
        for _ in 0..20 {
            let n = rng.gen_range(1..6);
            let k = rng.gen_range(1..=n);
            let g: Vec<Vec<_>> =
                (0..k).map(|_| (0..n).map(|_| f.element(rng.gen_range(0..f.order())).unwrap()).collect()).collect();
            let Ok(code) = RankCode::new(f.clone(), g) else { continue };
            let file = CodeFile { name: Some("r\"x".into()), code: code.clone(), expected: Some(vec![]) };
            let text = emit(&file);
            let back = parse(&text).unwrap();
            assert_eq!(back.code, code);
            assert_eq!(back.name.as_deref(), Some("r\"x"));
            assert_eq!(emit(&back), text);
            let bare = emit(&CodeFile::bare(code));
            assert_eq!(emit(&parse(&bare).unwrap()), bare);
        }
    }
}

#[test]
fn minimal_example_parses_with_its_parameters() {
    let f = read(&corpus_dir().join("minimal_9_3_f128.json")).unwrap();
    assert_eq!((f.code.n(), f.code.k()), (9, 3));
    assert_eq!(f.code.distance().unwrap(), 5);
}

#[test]
fn invalid_files() {
    let text = std::fs::read_to_string(corpus_dir().join("gab_3_2_f8.json")).unwrap();
    match parse(&text.replace("[1, 1, 0, 1]", "[1, 0, 0, 1]")) {
        Err(CodeFileError::Code(Error::ReducibleModulus(p))) => assert_eq!(p, vec![1, 0, 0, 1]),
        other => panic!("expected a reducible modulus, got {other:?}"),
    }
    assert!(matches!(parse(&text.replace("[1, 4, 6]", "[1, 4, 9]")), Err(CodeFileError::FieldMismatch(_))));
    assert!(matches!(
        parse(&text.replace("[1, 4, 6]", "[1, 2, 4]")),
        Err(CodeFileError::Code(Error::RankDeficientGenerator { rank: 1, rows: 2 }))
    ));
    assert!(matches!(parse(&text.replace("\"k\": 2", "\"k\": 3")), Err(CodeFileError::Schema { .. })));
    assert!(matches!(parse(&text.replace("[1, 4, 6]", "[1, 4]")), Err(CodeFileError::Schema { .. })));
    assert!(matches!(parse(&text.replace("\"value\": 2", "\"value\": [2]")), Err(CodeFileError::Schema { .. })));
    assert!(matches!(parse(&text.replace("\"q\": 2", "\"q\": 4")), Err(CodeFileError::Code(_))));
    assert!(matches!(read(&corpus_dir().join("missing.json")), Err(CodeFileError::Io { .. })));
}
