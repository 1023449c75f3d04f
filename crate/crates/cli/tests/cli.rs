use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(p).unwrap()
}

fn reebkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reebkit")).args(args).env_remove("REEBKIT_SHARDS").output().unwrap()
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn validate_exit_codes() {
    let ok = reebkit(&["validate", path(&corpus("lens.reeb"))]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "pre-M\n");

    let bad = reebkit(&["validate", path(&corpus("pendant_torus.reeb"))]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("[pendant-sphere] e1"));

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("broken.reeb");
    fs::write(&f, "mode 3\nvertex v1 0\nvertex v2 1\nedge e1 v1 v2 S3\n").unwrap();
    let out = reebkit(&["validate", path(&f)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[parse]"));
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));

    let missing = reebkit(&["validate", "/nonexistent/x.reeb"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).starts_with("error[io]"));
}

#[test]
fn classify_blocks() {
    let out = reebkit(&["classify", path(&corpus("lens.reeb"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("lens.classify"));
    assert!(stdout(&out).starts_with("minSphereBundles 0 / maxLens 1 / exactNonOrDeg1 0\n"));

    let out = reebkit(&["classify", path(&corpus("klein.reeb"))]);
    assert!(stdout(&out).starts_with("minSphereBundles 0 / maxLens 0 / exactNonOrDeg1 1\n"));

    let out = reebkit(&["classify", path(&corpus("s3.reeb"))]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("S3 only"));
}

#[test]
fn classify_names_condition_b() {
    let f = corpus("rp2xs1.reeb");
    let out = reebkit(&["classify", path(&f)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error[condition-b]"), "{}", stderr(&out));
    assert!(stderr(&out).contains("condition (b)"));

    let out = reebkit(&["classify", path(&f), "--variant", "literal"]);
    assert_eq!(out.status.code(), Some(1));

    let out = reebkit(&["classify", path(&f), "--vanishing-w2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("minSphereBundles 0 / maxLens 0 / exactNonOrDeg1 2\n"));

    let out = reebkit(&["classify", path(&f), "--variant", "sideways"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn realize_simulate_isomorphic_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (block, extra) in [("s3", vec![]), ("lens", vec!["--lens", "e2=a"]), ("klein", vec!["--klein", "e2=TwS1xS2"])] {
        let src = corpus(&format!("{block}.reeb"));
        let seq = dir.path().join(format!("{block}.surgery"));
        let mut args = vec!["realize", path(&src), "-o", path(&seq)];
        args.extend(extra);
        let out = reebkit(&args);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

        let sim = reebkit(&["simulate", path(&seq)]);
        assert_eq!(sim.status.code(), Some(0), "{}", stderr(&sim));
        let back = dir.path().join(format!("{block}.back.reeb"));
        fs::write(&back, stdout(&sim)).unwrap();

        let iso = reebkit(&["isomorphic", path(&back), path(&src)]);
        assert_eq!(iso.status.code(), Some(0), "{block}: {}", stdout(&iso));
    }
}

#[test]
fn simulate_prints_trace() {
    let out = reebkit(&["simulate", path(&corpus("lens.surgery"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("lens.simulate"));

    let out = reebkit(&["simulate", path(&corpus("rp2_split.surgery"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).lines().any(|l| l == "# trace (3, 4): RP2 RP2"));
    assert!(stderr(&out).starts_with("error[invalid-sequence]"));
}

#[test]
fn isomorphic_rejects_different_labels() {
    let out = reebkit(&["isomorphic", path(&corpus("lens.reeb")), path(&corpus("klein.reeb"))]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "not isomorphic\n");
}

#[test]
fn min_genus_of_theta() {
    let f = corpus("theta.reeb");
    let out = reebkit(&["min-genus", path(&f)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1\n");
    assert_eq!(reebkit(&["min-genus", path(&f), "--check-genus", "2"]).status.code(), Some(0));
    assert_eq!(reebkit(&["min-genus", path(&f), "--check-genus", "0"]).status.code(), Some(1));
    let wrong = reebkit(&["min-genus", path(&corpus("lens.reeb"))]);
    assert!(stderr(&wrong).starts_with("error[wrong-mode]"));
}

#[test]
fn export_dot_is_deterministic_and_reloadable() {
    let dir = tempfile::tempdir().unwrap();
    for block in ["s3", "lens", "klein", "rp2xs1"] {
        let f = corpus(&format!("{block}.reeb"));
        let first = reebkit(&["export-dot", path(&f)]);
        let second = reebkit(&["export-dot", path(&f)]);
        assert_eq!(first.stdout, second.stdout);
        assert_eq!(stdout(&first), golden(&format!("{block}.dot")));

        let dot = dir.path().join(format!("{block}.dot"));
        fs::write(&dot, &first.stdout).unwrap();
        let iso = reebkit(&["isomorphic", "--strict-levels", path(&dot), path(&f)]);
        assert_eq!(iso.status.code(), Some(0));
    }
}

#[test]
fn verify_suites() {
    let out = reebkit(&["verify", "algebra", "--shards", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("discrepancies 0\n"));

    let out = reebkit(&["verify", "thm5", "--bounds", "3", "--shards", "2"]);
    assert_eq!(out.status.code(), Some(0));

    let out = reebkit(&["verify", "thm5", "--bounds", "99"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[bounds]"));

    assert_eq!(reebkit(&["verify", "thm7"]).status.code(), Some(2));
}

#[test]
fn decide_descriptions() {
    let out = reebkit(&["decide", "S1xS2 # Lens(5,2) # NOr1(x)"]);
    assert_eq!((out.status.code(), stdout(&out).as_str()), (Some(0), "yes\n"));

    let out = reebkit(&["decide", "S1xS2 # T3"]);
    assert_eq!((out.status.code(), stdout(&out).as_str()), (Some(1), "no\n"));

    let out = reebkit(&["decide", "S1xS2 ##"]);
    assert_eq!(out.status.code(), Some(2));

    let out = reebkit(&["decide", "Lens(a) # TwS1xS2", "--witness"]);
    let text = stdout(&out);
    assert!(text.contains("# reeb v1\n") && text.contains("# surgery v1\n"));
    assert!(text.contains(" Lens(a)\n") && text.contains(" TwS1xS2\n"));
}
