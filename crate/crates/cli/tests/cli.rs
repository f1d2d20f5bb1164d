use std::path::PathBuf;
use std::process::Command;

use flipkit_cli::{run, InstanceFile, Outcome};

fn flipkit(args: &[&str]) -> Outcome {
    run(std::iter::once("flipkit").chain(args.iter().copied()))
}

fn write_temp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("flipkit-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn summary(out: &Outcome) -> serde_json::Value {
    let line = out.stdout.lines().rev().find(|l| l.contains("summary: ")).expect("summary line");
    serde_json::from_str(line.split_once("summary: ").unwrap().1).unwrap()
}

const CYCLE: &str = "digraph n=3\narc 0 1\narc 1 2\narc 2 0\n";

#[test]
fn generated_instances_round_trip() {
    for seed in 0..20 {
        for (model, target) in [("random-ec", "2"), ("random-ec", "3"), ("cycle", "2"), ("bidirected", "4")] {
            let out = flipkit(&["gen", "--model", model, "--n", "5", "--target-ec", target, "--seed", &seed.to_string()]);
            assert_eq!(out.code, 0, "{}", out.stderr);
            let parsed = InstanceFile::parse(&out.stdout).unwrap();
            let printed = parsed.to_string();
            assert_eq!(InstanceFile::parse(&printed).unwrap(), parsed);
        }
    }
}

#[test]
fn instance_with_families_round_trips() {
    let text = "digraph n=4\narc 0 1\narc 1 2 w=0\narc 2 3\narc 3 0\n\
                family cuts {\n  builder dicuts\n}\n\
                family pair {\n  0\n  0 1\n}\n\
                fn slack family=cuts builder=dicut-slack:1\n\
                fn t family=pair builder=table {\n  set 0 = 1\n  set 0 1 = 2\n}\n";
    let parsed = InstanceFile::parse(text).unwrap();
    assert_eq!(InstanceFile::parse(&parsed.to_string()).unwrap(), parsed);
}

#[test]
fn reports_are_deterministic() {
    let gen_args = ["gen", "--model", "random-ec", "--n", "6", "--target-ec", "4", "--seed", "11"];
    let first = flipkit(&gen_args);
    assert_eq!(first, flipkit(&gen_args));
    let path = write_temp("det.txt", &first.stdout);
    let p = path.to_str().unwrap();
    let args = ["decompose", "--in", p, "--tau", "4", "--k", "2"];
    assert_eq!(flipkit(&args), flipkit(&args));
    let search = ["conjecture-search", "--tau", "3", "--n", "5", "--trials", "5", "--seed", "2"];
    assert_eq!(flipkit(&search), flipkit(&search));
}

#[test]
fn connectivity_of_a_directed_triangle() {
    let p = write_temp("cycle.txt", CYCLE);
    let p = p.to_str().unwrap();
    let yes = flipkit(&["check", "--what", "connectivity", "--in", p, "--k", "1"]);
    assert_eq!(yes.code, 0);
    assert_eq!(summary(&yes)["verdict"], "true");
    let no = flipkit(&["check", "--what", "connectivity", "--in", p, "--k", "2"]);
    assert_eq!(no.code, 0);
    assert_eq!(summary(&no)["verdict"], "false");
}

#[test]
fn decompose_generated_four_connected_orientation() {
    let generated = flipkit(&["gen", "--model", "random-ec", "--n", "6", "--target-ec", "4", "--seed", "3"]);
    let path = write_temp("ec4.txt", &generated.stdout);
    let out = flipkit(&["decompose", "--in", path.to_str().unwrap(), "--tau", "4", "--k", "2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(!out.stdout.contains("[FAIL]"));
    let s = summary(&out);
    assert_eq!(s["verdict"], "decomposition found");
    assert!(s["checks"].as_object().unwrap().values().all(|v| v == true));
}

#[test]
fn bad_example_prints_the_half_vertex() {
    let out = flipkit(&["repro", "bad-example"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("1/2 1/2 1/2"));
}

#[test]
fn negative_verdicts_exit_zero() {
    let p = write_temp("arc.txt", "digraph n=2\narc 0 1\n");
    let out = flipkit(&["verify-hypothesis", "--in", p.to_str().unwrap(), "--tau", "2", "--k", "1"]);
    assert_eq!(out.code, 0);
    assert_eq!(summary(&out)["set"], serde_json::json!([1]));
    let refused = flipkit(&["decompose", "--in", p.to_str().unwrap(), "--tau", "2", "--k", "1"]);
    assert_eq!(refused.code, 0);
    assert_eq!(summary(&refused)["verdict"], "refused");
}

#[test]
fn exit_codes() {
    let missing = flipkit(&["orient", "--in", "/nonexistent/instance.txt", "--k", "1"]);
    assert_eq!(missing.code, 1);
    let garbage = write_temp("garbage.txt", "digraph n=2\narc 0 zero\n");
    assert_eq!(flipkit(&["orient", "--in", garbage.to_str().unwrap(), "--k", "1"]).code, 1);
    assert_eq!(flipkit(&["orient", "--bogus"]).code, 1);
    let mut big = String::from("digraph n=30\n");
    for i in 0..30 {
        big.push_str(&format!("arc {i} {}\n", (i + 1) % 30));
    }
    let big = write_temp("big.txt", &big);
    assert_eq!(flipkit(&["verify-hypothesis", "--in", big.to_str().unwrap(), "--tau", "2", "--k", "1"]).code, 2);
}

#[test]
fn binary_matches_library() {
    let out = Command::new(env!("CARGO_BIN_EXE_flipkit")).args(["reduce-matroids", "--catalog", "tiny"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), flipkit(&["reduce-matroids", "--catalog", "tiny"]).stdout);
    let missing = Command::new(env!("CARGO_BIN_EXE_flipkit")).args(["transship", "--in", "/nonexistent", "--b", "x"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
}
