use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    run_with_threads(args, None)
}

fn run_with_threads(args: &[&str], threads: Option<usize>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_subset-syzygy"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("SUBSET_SYZYGY_THREADS", t.to_string()),
        None => cmd.env_remove("SUBSET_SYZYGY_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn text(args: &[&str]) -> String {
    let mut full = args.to_vec();
    full.extend(["--format", "text"]);
    let out = run(&full);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn five_point_subset() {
    let r48 = fixture("five_points.json");
    let out = run(&["find-subset", "--input", &r48, "--m", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["subset"], serde_json::json!([1, 2, 4, 5]));
    assert_eq!(v["steps"][0]["removed"], 3);
}

#[test]
fn twist_five_window_of_22_points() {
    let v = json(&[
        "betti",
        "--random",
        "n=6,d=22,seed=42",
        "--prime",
        "31991",
        "--window",
        "twist=5",
    ]);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(
        entries[0],
        serde_json::json!({"p": 2, "twist": 5, "beta": 216})
    );
}

#[test]
fn one_point_hilbert_function() {
    let v = json(&["hilbert", "--input", &fixture("one_point.json")]);
    assert_eq!(v["values"], serde_json::json!([1, 1]));
    assert_eq!(v["deltas"], serde_json::json!([1, 0]));
}

#[test]
fn validation_errors_exit_two() {
    let dup = run(&["hilbert", "--input", &fixture("duplicate.json")]);
    assert_eq!(dup.status.code(), Some(2));
    assert!(
        stderr_of(&dup).contains("point 3 duplicates point 1"),
        "{}",
        stderr_of(&dup)
    );

    let composite = run(&["hilbert", "--input", &fixture("composite.json")]);
    assert_eq!(composite.status.code(), Some(2));
    assert!(stderr_of(&composite).contains("31989 is not prime"));

    let malformed = run(&["hilbert", "--input", &fixture("malformed.json")]);
    assert_eq!(malformed.status.code(), Some(2));
    assert!(
        stderr_of(&malformed).contains("line 2"),
        "{}",
        stderr_of(&malformed)
    );

    let both = run(&[
        "hilbert",
        "--input",
        &fixture("one_point.json"),
        "--random",
        "n=2,d=3",
    ]);
    assert_eq!(both.status.code(), Some(2));

    let neither = run(&["hilbert"]);
    assert_eq!(neither.status.code(), Some(2));

    let big_subset = run(&[
        "find-subset",
        "--input",
        &fixture("five_points.json"),
        "--m",
        "5",
    ]);
    assert_eq!(big_subset.status.code(), Some(2));

    let e_equals_d = run(&["experiment", "--n", "2", "--d", "5", "--e", "5"]);
    assert_eq!(e_equals_d.status.code(), Some(2));

    let wrong_prime = run(&[
        "hilbert",
        "--input",
        &fixture("one_point.json"),
        "--prime",
        "101",
    ]);
    assert_eq!(wrong_prime.status.code(), Some(2));

    let char2 = run(&["hilbert", "--random", "n=2,d=3", "--prime", "2"]);
    assert_eq!(char2.status.code(), Some(2));

    let off_plane = run(&["classify", "--random", "n=3,d=5"]);
    assert_eq!(off_plane.status.code(), Some(2));
}

#[test]
fn enumeration_and_budget() {
    let r48 = fixture("five_points.json");
    let v = json(&["enumerate", "--input", &r48, "--m", "4"]);
    let winners: Vec<&Value> = v
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["gens_at_lplus1"] == 0)
        .collect();
    assert_eq!(winners.len(), 1);
    assert_eq!(winners[0]["subset"], serde_json::json!([1, 2, 4, 5]));
    let refused = run(&["enumerate", "--input", &r48, "--m", "2", "--budget", "3"]);
    assert_eq!(refused.status.code(), Some(2));
    assert!(stderr_of(&refused).contains("exceed the budget"));
}

#[test]
fn classification_of_five_points() {
    let v = json(&["classify", "--input", &fixture("five_points.json")]);
    assert_eq!(v["label"]["case"], 3);
    assert_eq!(v["label"]["l"], 2);
    assert_eq!(
        v["degree_matrix"]["entries"],
        serde_json::json!([[1, 1, 2], [1, 1, 2]])
    );
    assert_eq!(v["base_locus"]["gcd_degree"], 2);
}

#[test]
fn linkage() {
    let v = json(&["link", "--delta", "1,2,2", "--ci", "2,3"]);
    assert_eq!(v["delta_residual"], serde_json::json!([1, 0, 0, 0]));
    let v = json(&[
        "link",
        "--input",
        &fixture("five_points.json"),
        "--ci",
        "2,3",
        "--seed",
        "5",
    ]);
    assert_eq!(v["delta_residual"], v["delta_colon"]);
    assert_eq!(v["residual_degree"], 1);
    let bad = run(&["link", "--delta", "1,2,3", "--ci", "2,2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn counterexample_report() {
    let v = json(&["counterexample", "--seed", "42"]);
    assert_eq!(v["dims22"], serde_json::json!([210, 1302, 1316, 440]));
    assert_eq!(v["ranks22"], serde_json::json!([210, 876, 440]));
    assert_eq!(v["beta25_22"], 216);
    assert_eq!(v["dims11"], serde_json::json!([595, 1533, 1393, 451]));
    assert_eq!(v["predicted_betti11"], serde_json::json!([0, 4]));
    assert_eq!(v["actual_betti11"], serde_json::json!([1, 5]));
    assert_eq!(v["mismatch"], true);
}

#[test]
fn plane_experiment_always_finds_subsets() {
    let v = json(&["experiment", "--n", "2", "--d", "4..7", "--seeds", "2"]);
    let s = &v["summary"];
    assert_eq!(s["instances"], s["subset_exists"]);
    assert_eq!(s["subset_missing"], 0);
}

#[test]
fn eleven_of_twenty_two_fails_at_twist_five() {
    let v = json(&[
        "experiment",
        "--n",
        "6",
        "--d",
        "22",
        "--e",
        "11",
        "--seeds",
        "1",
        "--seed-base",
        "42",
    ]);
    let inst = &v["instances"][0];
    assert_eq!(inst["full_match"], false);
    assert_eq!(inst["mismatched_twists"], serde_json::json!([5]));
    assert_eq!(inst["generators_match"], true);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    let out = run(&[
        "hilbert",
        "--random",
        "n=2,d=5,seed=1",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["values"], serde_json::json!([1, 3, 5, 5]));
}

#[test]
fn identical_output_across_thread_counts() {
    for args in [
        &["counterexample", "--seed", "3"][..],
        &["experiment", "--n", "2,3", "--d", "5..7", "--seeds", "2"][..],
        &["betti", "--random", "n=4,d=12,seed=9"][..],
    ] {
        let one = run_with_threads(args, Some(1));
        let four = run_with_threads(args, Some(4));
        assert!(one.status.success());
        assert_eq!(one.stdout, four.stdout, "{args:?}");
        assert_eq!(one.stdout, run_with_threads(args, Some(1)).stdout);
    }
    let bad = run_with_threads(&["hilbert", "--random", "n=2,d=3"], Some(0));
    assert_eq!(bad.status.code(), Some(2));
}

fn numbers(line: &str) -> Vec<u64> {
    line.split(|c: char| !c.is_ascii_digit())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().unwrap())
        .collect()
}

#[test]
fn text_and_json_agree_on_hilbert() {
    let args = ["hilbert", "--random", "n=3,d=9,seed=4"];
    let v = json(&args);
    let t = text(&args);
    let line = |prefix: &str| {
        t.lines()
            .find(|l| l.starts_with(prefix))
            .map(numbers)
            .unwrap()
    };
    let values: Vec<u64> = v["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    let deltas: Vec<u64> = v["deltas"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(line("h "), values);
    assert_eq!(line("dh "), deltas);
}

#[test]
fn text_and_json_agree_on_betti() {
    let args = ["betti", "--random", "n=3,d=11,seed=2"];
    let v = json(&args);
    let t = text(&args);
    let mut from_text = Vec::new();
    for line in t.lines().skip(2) {
        let (row, cells) = line.split_once(':').unwrap();
        let q: u64 = row.trim().parse().unwrap();
        for (p, cell) in cells.split_whitespace().enumerate() {
            if cell != "." {
                from_text.push((p as u64, q + p as u64, cell.parse::<u64>().unwrap()));
            }
        }
    }
    let from_json: Vec<(u64, u64, u64)> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["p"].as_u64().unwrap(),
                e["twist"].as_u64().unwrap(),
                e["beta"].as_u64().unwrap(),
            )
        })
        .collect();
    from_text.sort();
    let mut sorted = from_json.clone();
    sorted.sort();
    assert_eq!(from_text, sorted);
}

#[test]
fn text_and_json_agree_on_counterexample() {
    let args = ["counterexample", "--seed", "42"];
    let v = json(&args);
    let t = text(&args);
    let dims22: Vec<u64> = v["dims22"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    let arrows = t.lines().find(|l| l.contains("0 -> 210")).unwrap();
    assert_eq!(numbers(arrows), [vec![0], dims22, vec![0]].concat());
    let pair = t.lines().find(|l| l.contains("predicted (")).unwrap();
    let nums = numbers(pair);
    let tail = &nums[nums.len() - 6..];
    let expect = [
        &v["predicted_betti11"],
        &v["actual_betti11"],
        &v["mrc_betti11"],
    ]
    .iter()
    .flat_map(|a| {
        a.as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_u64().unwrap())
            .collect::<Vec<_>>()
    })
    .collect::<Vec<_>>();
    assert_eq!(tail, expect.as_slice());
}
