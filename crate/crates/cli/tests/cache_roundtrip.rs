use sigma_lab::{enumerate_changepoints, PrecisionPolicy};
use sigma_lab_cli::cache::{self, CacheLine};

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = sigma_lab_cli::run(std::iter::once("sigma-lab").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn write_then_read_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cp.jsonl");
    let records = enumerate_changepoints(30_000, &PrecisionPolicy::default()).unwrap();
    let lines: Vec<CacheLine> = records.iter().map(CacheLine::from).collect();
    cache::write(&path, &lines).unwrap();
    let back = cache::read(&path).unwrap();
    assert_eq!(back, lines);
    let as_records: Vec<_> = back.iter().map(CacheLine::to_record).collect();
    for (a, b) in as_records.iter().zip(&records) {
        assert_eq!((a.index, a.n_i, a.sigma_at, a.bits_used), (b.index, b.n_i, b.sigma_at, b.bits_used));
    }
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert_eq!(text.lines().next().unwrap(), r#"{"index":1,"n_i":3,"sigma_at":2,"bits_used":128}"#);
}

#[test]
fn missing_file_is_empty_and_bad_file_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(cache::read(&dir.path().join("absent")).unwrap().is_empty());
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{\"index\":2,\"n_i\":54,\"sigma_at\":3,\"bits_used\":128}\n").unwrap();
    assert!(cache::read(&bad).is_err());
    std::fs::write(&bad, "not json\n").unwrap();
    assert!(cache::read(&bad).is_err());
}

#[test]
fn cli_output_is_the_same_with_and_without_cache() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cp.jsonl");
    let p = path.to_str().unwrap();
    let (code, cold) = run(&["changepoints", "--max-n", "30000", "--format", "json", "--cache", p]);
    assert_eq!(code, 0);
    assert_eq!(cache::read(&path).unwrap().len(), 5);
    let (_, warm) = run(&["changepoints", "--max-n", "30000", "--format", "json", "--cache", p]);
    assert_eq!(cold, warm);
    let (_, fresh) = run(&["changepoints", "--max-n", "30000", "--format", "json", "--cache", p, "--no-cache"]);
    assert_eq!(cold, fresh);
    // a smaller bound reads the same cache and truncates
    let (_, small) = run(&["changepoints", "--max-n", "500", "--format", "csv", "--cache", p]);
    assert_eq!(small.lines().count(), 4);
}
