use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopkit"))
        .args(args)
        .env("HOPKIT_COLOR", "0")
        .output()
        .expect("spawn hopkit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn reduce_trace_and_exit_codes() {
    let acb = data("acb.phi");
    let o = run(&["reduce", &acb, "--chars", "aaacbbbbcbcbbb", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("#⊙#[a[a⊙c⊙b]c⊙b⊙b⊙b]#⊙#"), "{out}");
    assert!(out.trim_end().ends_with("accepted"));

    let o = run(&["reduce", &acb, "--chars", "aacbb", "--records"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("stuck irreducible 5 13"));
}

#[test]
fn reduce_strategies() {
    let dyck = data("dyck.phi");
    let left = stdout(&run(&["reduce", &dyck, "a", "a", "a'", "a'", "a", "a'", "--trace"]));
    let right = stdout(&run(&["reduce", &dyck, "a", "a", "a'", "a'", "a", "a'", "--trace", "--strategy", "rightmost"]));
    assert!(left.contains("#⊙#[a⊙a'[a⊙a']#⊙#"), "{left}");
    assert!(right.contains("#⊙#[a[a⊙a']a']#⊙#"), "{right}");
}

#[test]
fn tagging() {
    let o = run(&["tag", &data("dyck.phi"), "a", "b", "b'", "a'"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "a[b⊙b']a'");
    let o = run(&["tag", &data("acb.phi"), "--chars", "ab"]);
    assert_eq!(stdout(&o).trim(), "none");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn hopcheck_outcomes() {
    let o = run(&["hopcheck", &data("nested.grammar"), "--search-k", "9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("HOP(7): yes"));
    let o = run(&["hopcheck", &data("palindrome.grammar"), "-k", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("conflict:"));
}

#[test]
fn maxgrammar_is_deterministic_and_reparses() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("acb.grammar");
    let out = out.to_str().unwrap();
    let a = run(&["maxgrammar", &data("acb.phi"), "--out", out]);
    assert_eq!(a.status.code(), Some(0));
    let first = fs::read_to_string(out).unwrap();
    run(&["maxgrammar", &data("acb.phi"), "--out", out]);
    assert_eq!(first, fs::read_to_string(out).unwrap());

    // The synthesized grammar is a valid input for the grammar commands.
    let o = run(&["grammar", "validate", out]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["hopcheck", out]);
    assert_eq!(o.status.code(), Some(0));
    let words = stdout(&run(&["grammar", "enumerate", out, "--max-len", "5"]));
    assert!(words.lines().any(|l| l == "a c b"), "{words}");
}

#[test]
fn dot_only_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("fa.dot");
    run(&["fa", &data("acb.phi")]);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    let o = run(&["fa", &data("acb.phi"), "--dot", dot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_to_string(&dot).unwrap().starts_with("digraph"));
}

#[test]
fn grammar_tag_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tagged.grammar");
    let o = run(&["grammar", "tag", &data("split.grammar"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains('['), "{text}");
}

#[test]
fn slt_embed_and_union() {
    let o = run(&["slt-embed", &data("aplus.slt")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("a o a"));
    let o = run(&["union", &data("split.grammar"), &data("palindrome.grammar")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn intersections() {
    let o = run(&["intersect-regular", &data("acb.phi"), &data("one-c.regex")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("->"));
    let g = data("split.grammar");
    assert_eq!(run(&["intersect", &g, &g]).status.code(), Some(2));
    assert_eq!(run(&["complement", &g]).status.code(), Some(2));
}

#[test]
fn phi_search_finds_nothing_for_aab() {
    let o = run(&["phi-search", &data("aab-plus.regex"), "--max-len", "6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("0 matching"));
}

#[test]
fn bad_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.phi");
    fs::write(&bad, "k: 3\n#⊙#⊙#\n").unwrap();
    let o = run(&["phi-check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(run(&["phi-check", "/nonexistent.phi"]).status.code(), Some(2));
}

#[test]
fn no_colour_when_piped() {
    let o = run(&["selfcheck"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains('\u{1b}'));
}
