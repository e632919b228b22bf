use std::path::Path;
use std::process::{Command, Output};

fn hpmon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hpmon")).args(args).output().expect("binary runs")
}

fn status(args: &[&str]) -> i32 {
    hpmon(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(hpmon(args).stdout).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn word_problem_exit_codes() {
    assert_eq!(status(&["eq", "--builtin", "bii", "a b", "b c"]), 0);
    assert_eq!(status(&["eq", "--builtin", "bii", "a", "b"]), 1);
}

#[test]
fn separated_letters_are_not_conjugate() {
    let args = ["conj", "--builtin", "gmn", "--m", "2", "--n", "2", "t1", "u1", "--machine"];
    let out = hpmon(&args);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("result: no\n"));
    assert!(text.contains("reason: letter-count\n"));
}

#[test]
fn family_procedures() {
    assert_eq!(status(&["gmn", "conj", "s t1", "t1 s"]), 0);
    assert_eq!(status(&["gmn", "conj", "t1", "t2"]), 1);
    assert_eq!(status(&["gmn", "propP", "s t1 t2 t1 u1"]), 0);
    assert_eq!(status(&["bii", "conj", "b a b b", "a b b b"]), 0);
    assert_eq!(status(&["bii", "conj", "a", "b"]), 1);
    let nf = stdout(&["bii", "nf", "b b b a c", "--machine"]);
    assert!(nf.contains("normal-form: k=1 j=0 p=1 q=1\n"), "{nf}");
}

#[test]
fn garside_queries() {
    assert_eq!(status(&["garside", "--builtin", "bii", "b c b c b c"]), 0);
    assert_eq!(status(&["garside", "--builtin", "bii", "b b b"]), 1);
    assert_eq!(status(&["fund", "--builtin", "gmn", "s t1 t2 u1 u2"]), 0);
    assert_eq!(status(&["minfund", "--builtin", "gmn", "s t1 t2 u1 u2"]), 0);
}

#[test]
fn group_bridge() {
    assert_eq!(status(&["group-eq", "--builtin", "gmn", "s s^-1", "e"]), 0);
    assert_eq!(status(&["group-conj", "--builtin", "gmn", "s^-1 t1 s", "t1"]), 0);
    assert_eq!(status(&["group-conj", "--builtin", "gmn", "t1", "u1"]), 1);
}

#[test]
fn bound_limited_results_are_inconclusive() {
    assert_eq!(status(&["mcm", "--builtin", "bii", "--bound", "1", "a", "b"]), 2);
    assert_eq!(status(&["mcm", "--builtin", "bii", "--bound", "4", "a", "b"]), 0);
}

#[test]
fn errors_exit_with_three() {
    assert_eq!(status(&["eq", "a", "b"]), 3);
    assert_eq!(status(&["eq", "--builtin", "bii", "a", "zz"]), 3);
    assert_eq!(status(&["transmin", "--builtin", "bii", "--bound", "0", "a"]), 3);
    assert_eq!(status(&["bogus"]), 3);
    assert_eq!(status(&["gmn", "nf", "s t1", "--builtin", "bii"]), 3);
    assert_eq!(status(&["--help"]), 0);
}

#[test]
fn presentation_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("comm.txt");
    std::fs::write(&file, "# free commutative on two letters\ngenerators: x y\nrelation: x y = y x\n").unwrap();
    let f = path_str(&file);
    assert_eq!(status(&["eq", "--file", f, "x y x", "y x x"]), 0);
    assert_eq!(status(&["eq", "--file", f, "x", "y"]), 1);
    assert_eq!(status(&["conj", "--file", f, "x y", "y x"]), 0);
    // Without a Δ, a presentation file has no default for orbit queries.
    assert_eq!(status(&["orbit", "--file", f, "x y"]), 3);
    assert_eq!(status(&["eq", "--file", f, "--builtin", "bii", "x", "x"]), 3);
}

#[test]
fn machine_output_is_deterministic_across_job_counts() {
    let one = stdout(&["class", "--builtin", "bii", "b c b c b c", "--machine", "--jobs", "1"]);
    let four = stdout(&["class", "--builtin", "bii", "b c b c b c", "--machine", "--jobs", "4"]);
    assert_eq!(one, four);
    assert!(one.starts_with("canonical: a b a b a b\nsize: 28\nclass-begin\n"), "{one}");
    assert!(one.ends_with("class-end\n"));
    let orbit = ["gmn", "conj", "s t1 u1", "u1 s t1", "--machine"];
    assert_eq!(stdout(&orbit), stdout(&[&orbit[..], &["--jobs", "2"]].concat()));
}

#[test]
fn class_cache_persists_and_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("bii.cache");
    let c = path_str(&cache);
    let args = ["class", "--builtin", "bii", "b c b", "--machine", "--cache", c];
    let first = stdout(&args);
    let saved = std::fs::read_to_string(&cache).unwrap();
    assert!(saved.contains("class-begin\na b b\nb c b\nclass-end\n"), "{saved}");
    assert_eq!(stdout(&args), first);

    std::fs::write(&cache, "class-begin\na b\nclass-end\n").unwrap();
    assert_eq!(status(&args), 3);
}
