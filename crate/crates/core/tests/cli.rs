use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logderham"))
        .args(args)
        .env("LOGDERHAM_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn lattice_of_two_coordinate_lines() {
    let text = stdout(&["lattice", &data("boolean2.json")]);
    assert!(text.contains("Poincaré polynomial: 1 + 2t + t^2"), "{text}");
    assert!(text.contains("Betti: 1, 2, 1"));
}

#[test]
fn bs_candidates_for_three_lines() {
    let text = stdout(&["bs-candidates", &data("threelines.json")]);
    for line in ["3*s1 + 2 = 0", "3*s1 + 3 = 0", "3*s1 + 4 = 0", "s1 + 1 = 0"] {
        assert!(text.contains(line), "missing {line} in\n{text}");
    }
    assert!(text.contains("-2/3, -1, -4/3"));
    assert!(text.contains("all inside (-5/3, 0)"));
}

#[test]
fn hilbert_table() {
    let text = stdout(&[
        "hilbert",
        &data("threelines.json"),
        "-j",
        "1",
        "--q-range",
        "-1..2",
    ]);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(
        rows,
        vec![
            vec!["-1", "1"],
            vec!["0", "3"],
            vec!["1", "5"],
            vec!["2", "7"]
        ]
    );
}

#[test]
fn json_output_is_canonical() {
    for args in [
        vec!["--json", "lattice", "deleted_b3.json"],
        vec!["--json", "betti", "deleted_b3.json"],
        vec!["--json", "bs-candidates", "threelines.json"],
        vec![
            "--json",
            "hilbert",
            "braid.json",
            "-j",
            "2",
            "--q-range",
            "-1..1",
        ],
    ] {
        let mut args = args;
        let file = data(args[2]);
        args[2] = &file;
        let text = stdout(&args);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(
            serde_json::to_string_pretty(&value).unwrap(),
            text.trim_end(),
            "{args:?}"
        );
    }
}

#[test]
fn output_is_deterministic_across_seeds_and_threads() {
    let file = data("deleted_b3.json");
    let a = stdout(&["--json", "--seed", "1", "betti", &file]);
    let b = stdout(&["--json", "--seed", "99", "betti", &file]);
    let single = Command::new(env!("CARGO_BIN_EXE_logderham"))
        .args(["--json", "betti", &file])
        .env("LOGDERHAM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a, b);
    assert_eq!(a.as_bytes(), single.stdout.as_slice());
}

#[test]
fn verify_passes_and_reports_checks() {
    let text = stdout(&[
        "--seed",
        "7",
        "verify",
        &data("threelines.json"),
        "--weights",
        "1/3,1/3,1/3",
    ]);
    assert!(
        text.lines().skip(1).all(|l| l.starts_with("pass")),
        "{text}"
    );
}

#[test]
fn invalid_input_exits_one() {
    let three = data("threelines.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["betti", &three, "--weights", "1,1"],
        vec!["betti", &three, "--weights", "1/0,1,1"],
        vec!["lattice", "/nonexistent/arrangement.json"],
        vec!["hilbert", &three, "-j", "1", "--q-range", "3"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn degree_guard_rejects_large_grades() {
    let three = data("threelines.json");
    let out = run(&[
        "--max-degree",
        "2",
        "hilbert",
        &three,
        "-j",
        "1",
        "--q-range",
        "0..5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds the bound 2"));
    stdout(&[
        "--max-degree",
        "4",
        "hilbert",
        &three,
        "-j",
        "1",
        "--q-range",
        "0..1",
    ]);
}

#[test]
fn uncertified_weights_are_flagged() {
    let text = stdout(&["betti", &data("threelines.json"), "--weights", "1,1,1"]);
    assert!(text.contains("weight conditions: FAIL"));
    assert!(text.contains("certified: no"));

    let text = stdout(&[
        "betti",
        &data("threelines.json"),
        "--weights",
        "1,1,1",
        "--normalize",
    ]);
    assert!(text.contains("certified: yes"), "{text}");
}
