use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn mastkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mastkit")).args(args).env_remove("MASTKIT_SEED").output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn quartets() -> (TempDir, PathBuf, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.nwk", "(1,2,(3,4));\n");
    let b = write(dir.path(), "b.nwk", "(1,3,(2,4));\n");
    (dir, a, b)
}

#[test]
fn exact_on_conflicting_quartets() {
    let (_d, a, b) = quartets();
    let o = mastkit(&["exact", "--t1", s(&a), "--t2", s(&b)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("size: 3\n"));
    let o = mastkit(&["exact", "--t1", s(&a), "--t2", s(&b), "--method", "brute", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["size"], 3);
}

#[test]
fn rooted_exact() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.nwk", "(((1,2),3),4);");
    let b = write(dir.path(), "b.nwk", "(((4,3),2),1);");
    let o = mastkit(&["exact", "--rooted", "--t1", s(&a), "--t2", s(&b)]);
    assert!(stdout(&o).starts_with("size: 2\n"));
    let o = mastkit(&["exact", "--t1", s(&a), "--t2", s(&b)]);
    assert!(stdout(&o).starts_with("size: 4\n"));
}

#[test]
fn exit_codes() {
    let (d, a, b) = quartets();
    let bad = write(d.path(), "bad.nwk", "(1,2,(3,4);");
    let other = write(d.path(), "other.nwk", "(1,2,(3,5));");
    assert_eq!(mastkit(&["exact", "--t1", s(&bad), "--t2", s(&b)]).status.code(), Some(2));
    assert_eq!(mastkit(&["exact", "--t1", s(&a), "--t2", s(&other)]).status.code(), Some(3));
    assert_eq!(mastkit(&["exact", "--t1", s(&a), "--t2", s(&b), "--cap", "3"]).status.code(), Some(4));
    assert_eq!(mastkit(&["construct", "--t1", s(&a), "--t2", "/nonexistent/x.nwk"]).status.code(), Some(2));
    assert_eq!(mastkit(&["verify", "--t1", s(&a), "--t2", s(&b), "--set", "1,2,9"]).status.code(), Some(2));
}

#[test]
fn verify_agreement_sets() {
    let (_d, a, b) = quartets();
    let yes = mastkit(&["verify", "--t1", s(&a), "--t2", s(&b), "--set", "1,2,3"]);
    assert!(yes.status.success());
    assert_eq!(stdout(&yes), "agree: true\n");
    let no = mastkit(&["verify", "--t1", s(&a), "--t2", s(&b), "--set", "1,2,3,4"]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(stdout(&no), "agree: false\n");
}

#[test]
fn construct_reports_a_verified_set() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.nwk"), dir.path().join("b.nwk"));
    assert!(mastkit(&["gen", "--model", "adversarial", "--n", "32", "--seed", "2", "--out", s(&a), "--out2", s(&b)]).status.success());
    for alg in ["weak", "main"] {
        let o = mastkit(&["construct", "--algorithm", alg, "--t1", s(&a), "--t2", s(&b), "--json"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["verified"], true);
        assert_eq!(v["algorithm"], alg);
        let set: Vec<String> = v["agreement_set"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect();
        let check = mastkit(&["verify", "--t1", s(&a), "--t2", s(&b), "--set", &set.join(",")]);
        assert!(check.status.success());
    }
}

#[test]
fn construct_small_inputs_are_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.nwk", "(1,2,3);");
    let o = mastkit(&["construct", "--t1", s(&a), "--t2", s(&a)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("branch: trivial"));
}

#[test]
fn gen_is_seeded() {
    let a = mastkit(&["gen", "--model", "uniform", "--n", "20", "--seed", "1"]);
    let b = mastkit(&["gen", "--model", "uniform", "--n", "20", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
    let c = mastkit(&["gen", "--model", "caterpillar", "--n", "5"]);
    assert_eq!(stdout(&c), "(1,2,(3,(4,5)));\n");
    assert_eq!(mastkit(&["gen", "--model", "balanced", "--n", "6"]).status.code(), Some(2));
}

#[test]
fn experiment_csv_and_append() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.csv");
    let args = ["experiment", "--n-min", "8", "--n-max", "16", "--trials", "2", "--out", s(&out)];
    assert!(mastkit(&args).status.success());
    let first = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines[0], mastkit::harness::CSV_HEADER);
    // 2 models x 2 sizes x 2 trials x 3 algorithms.
    assert_eq!(lines.len(), 1 + 24);
    assert!(lines[1..].iter().all(|l| l.ends_with(",true,0")));

    let mut appended = args.to_vec();
    appended.push("--append");
    assert!(mastkit(&appended).status.success());
    let both = fs::read_to_string(&out).unwrap();
    assert_eq!(both.lines().count(), 1 + 48);
    assert_eq!(both.matches("n,seed").count(), 1);

    assert!(mastkit(&args).status.success());
    assert_eq!(fs::read_to_string(&out).unwrap(), first);
}

#[test]
fn experiment_rejects_bad_grids() {
    assert_eq!(mastkit(&["experiment", "--n-min", "12", "--n-max", "24"]).status.code(), Some(2));
    assert_eq!(mastkit(&["experiment", "--n-min", "8", "--n-max", "16", "--step-factor", "1"]).status.code(), Some(2));
    let o = mastkit(&["experiment", "--n-min", "12", "--n-max", "12", "--model", "uniform", "--trials", "1", "--algorithm", "main"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn seed_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_mastkit"));
        c.args(["gen", "--model", "uniform", "--n", "30"]).env_remove("MASTKIT_SEED");
        if let Some(e) = env {
            c.env("MASTKIT_SEED", e);
        }
        if let Some(f) = flag {
            c.args(["--seed", f]);
        }
        c.current_dir(dir.path()).output().unwrap().stdout
    };
    assert_eq!(run(Some("7"), None), run(None, Some("7")));
    assert_ne!(run(Some("7"), None), run(None, None));
}

#[test]
fn exact_examples() {
    let dir = tempfile::tempdir().unwrap();
    let t = mastkit(&["gen", "--model", "uniform", "--n", "12", "--seed", "4"]);
    let a = write(dir.path(), "a.nwk", &stdout(&t));
    let o = mastkit(&["exact", "--t1", s(&a), "--t2", s(&a)]);
    assert!(stdout(&o).starts_with("size: 12\n"));
    assert_eq!(mastkit(&["exact", "--method", "brute", "--t1", s(&a), "--t2", s(&a)]).status.code(), Some(4));
}

#[test]
fn construct_identical_and_mismatched() {
    let dir = tempfile::tempdir().unwrap();
    let t = mastkit(&["gen", "--model", "uniform", "--n", "64", "--seed", "8"]);
    let a = write(dir.path(), "a.nwk", &stdout(&t));
    let o = mastkit(&["construct", "--t1", s(&a), "--t2", s(&a), "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verified"], true);
    assert!(v["size"].as_u64().unwrap() >= 6);
    let b = write(dir.path(), "b.nwk", "(1,2,(3,4));");
    let o = mastkit(&["construct", "--t1", s(&a), "--t2", s(&b)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("different taxon sets"));
}

#[test]
fn single_adversarial_trial() {
    let o = mastkit(&["experiment", "--n-min", "8", "--n-max", "8", "--trials", "1", "--model", "adversarial"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.contains(",adversarial,") && r.ends_with(",true,0")));
}

#[test]
fn unwritable_output() {
    let o = mastkit(&["experiment", "--n-min", "8", "--n-max", "8", "--trials", "1", "--out", "/nonexistent/dir/e.csv"]);
    assert_eq!(o.status.code(), Some(2));
}
