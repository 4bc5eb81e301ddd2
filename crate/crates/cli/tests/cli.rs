use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use factorfree::{io, make_a, make_b, Dfa};
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_factorfree"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn factorfree")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn save(dir: &Path, name: &str, dfa: &Dfa) -> String {
    let path = dir.join(name);
    io::write_dfa(&path, dfa).unwrap();
    path.to_str().unwrap().to_string()
}

/// Minimal DFA of {a, aba}: 1 -a-> 2 -b-> 3 -a-> 4, finals {2, 4}, trap 5.
fn a_or_aba() -> Dfa {
    Dfa::new(
        vec!['a', 'b'],
        5,
        1,
        [2, 4],
        vec![vec![2, 5], vec![5, 3], vec![4, 5], vec![5, 5], vec![5, 5]],
    )
    .unwrap()
}

#[test]
fn witness_b7_json() {
    let out = run(&["witness", "--family", "B", "--m", "7", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["states"], 7);
    assert_eq!(v["delta"][5], serde_json::json!([7, 7]));
    assert_eq!(v["delta"][6], serde_json::json!([7, 7]));
    assert_eq!(io::from_json(&stdout(&out)).unwrap(), make_b(7).unwrap());
}

#[test]
fn witness_a10_dot() {
    let out = run(&["witness", "--family", "A", "--n", "10", "--format", "dot"]);
    assert_eq!(code(&out), 0);
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("__start -> 1;"));
    assert!(dot.contains("9 [shape=doublecircle"));
    assert_eq!(dot.matches("doublecircle").count(), 1);
    for edge in [
        "1 -> 2 [label=\"a\"]",
        "3 -> 3 [label=\"a\"]",
        "8 -> 2 [label=\"b\"]",
        "8 -> 9 [label=\"a\"]",
        "9 -> 10 [label=\"a,b\"]",
        "10 -> 10 [label=\"a,b\"]",
    ] {
        assert!(dot.contains(edge), "missing {edge}");
    }
}

#[test]
fn witness_below_minimum_fails() {
    let out = run(&["witness", "--family", "A", "--n", "3"]);
    assert_ne!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains(">= 6"));
    assert_ne!(code(&run(&["witness", "--family", "B", "--m", "3"])), 0);
}

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let a12 = save(dir.path(), "a12.json", &make_a(12).unwrap());
    for method in ["lemma", "semantic", "brute"] {
        let out = run(&["check", &a12, "--method", method]);
        assert_eq!(code(&out), 0, "{method}");
        assert!(stdout(&out).contains("factor-free"));
    }

    let bad = save(dir.path(), "aba.json", &a_or_aba());
    let out = run(&["check", &bad, "--method", "semantic", "--format", "json"]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["factor_free"], false);
    let word = format!(
        "{}{}{}",
        v["x"].as_str().unwrap(),
        v["u"].as_str().unwrap(),
        v["y"].as_str().unwrap()
    )
    .replace('ε', "");
    assert_eq!(word, "aba");
    assert_eq!(v["u"], "a");

    assert_eq!(code(&run(&["check", &bad, "--method", "brute"])), 1);
    let out = run(&["check", &bad, "--method", "lemma"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("condition (ii)"));

    let malformed = dir.path().join("broken.json");
    std::fs::write(&malformed, "{\"alphabet\": [\"a\"], \"states\": 2").unwrap();
    assert_eq!(code(&run(&["check", malformed.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["check", "/nonexistent/file.json"])), 2);
}

#[test]
fn lemma_minimizes_first() {
    let dir = TempDir::new().unwrap();
    let a8 = make_a(8).unwrap();
    let mut table = a8.table();
    table.push(vec![9, 9]);
    let padded = Dfa::new(vec!['a', 'b'], 9, 1, [7], table).unwrap();
    let path = save(dir.path(), "padded.json", &padded);
    let out = run(&["check", &path, "--method", "lemma"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("minimized from 9 to 8 states"));

    // a one-state minimal automaton is outside the structural check
    let sigma_star = Dfa::new(vec!['a', 'b'], 1, 1, [1], vec![vec![1, 1]]).unwrap();
    let path = save(dir.path(), "all.json", &sigma_star);
    assert_eq!(code(&run(&["check", &path, "--method", "lemma"])), 2);
    assert_eq!(code(&run(&["check", &path, "--method", "semantic"])), 1);
}

#[test]
fn complexity_reports() {
    let dir = TempDir::new().unwrap();
    let a10 = save(dir.path(), "a10.json", &make_a(10).unwrap());
    let b12 = save(dir.path(), "b12.json", &make_b(12).unwrap());
    let b7 = save(dir.path(), "b7.json", &make_b(7).unwrap());

    let out = run(&["complexity", &a10, &b12, "--mode", "union"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "n,m,mode,reachable,minimal,bound_conjectured,bound_paper,bound_ternary"
    );
    assert_eq!(lines[1], "10,12,union,94,92,91,92,98");

    let out = run(&["complexity", &a10, &b7, "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["reachable_count"], 49);

    let unary = Dfa::new(vec!['a'], 2, 1, [2], vec![vec![2], vec![2]]).unwrap();
    let unary = save(dir.path(), "unary.json", &unary);
    let out = run(&["complexity", &a10, &unary]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("alphabets differ"));
}

#[test]
fn verify_theorem_table() {
    let out = run(&["verify-theorem", "--n", "10..14", "--m", "10..14"]);
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(
        rows[0],
        [
            "n",
            "m",
            "reachable",
            "minimal",
            "formula",
            "match",
            "asserted",
            "symdiff_minimal"
        ]
    );
    assert_eq!(rows.len(), 26);
    let row_10_12 = rows.iter().find(|r| r[0] == "10" && r[1] == "12").unwrap();
    assert_eq!(&row_10_12[2..7], ["94", "92", "92", "true", "true"]);
    for r in &rows[1..] {
        let (n, m): (usize, usize) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        assert_eq!(r[6] == "true", n <= m, "{r:?}");
        assert_eq!(r[5] == "true", r[3] == r[4], "{r:?}");
    }
    // exit status follows the asserted rows
    let any_failed = rows[1..].iter().any(|r| r[6] == "true" && r[5] == "false");
    assert_eq!(code(&out), any_failed as i32);

    let again = run(&["verify-theorem", "--n", "10..14", "--m", "10..14"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn verify_theorem_even_rows_pass() {
    for n in ["10", "12", "14"] {
        let out = run(&["verify-theorem", "--n", n, "--m", "10..=14"]);
        assert_eq!(code(&out), 0, "n={n}\n{}", stdout(&out));
    }
}

#[test]
fn verify_theorem_small_sizes_are_reported_only() {
    let out = run(&[
        "verify-theorem",
        "--n",
        "6..9",
        "--m",
        "9..10",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let rows: Vec<Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r["asserted"] == false));
    assert_eq!(
        code(&run(&["verify-theorem", "--n", "3..10", "--m", "10"])),
        2
    );
}

#[test]
fn search_commands() {
    let out = run(&["search", "--states", "3", "--mode", "exhaustive"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let top: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(top[0], "3");
    assert_eq!(top[3], "3");

    let out = run(&["search", "--states", "9", "--mode", "exhaustive"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn random_search_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let outputs: Vec<PathBuf> = (0..2).map(|i| dir.path().join(format!("run{i}"))).collect();
    for path in &outputs {
        let out = run(&[
            "search",
            "--states",
            "5",
            "--mode",
            "random",
            "--budget",
            "10000",
            "--seed",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    let listing = |p: &Path| {
        let mut names: Vec<_> = std::fs::read_dir(p)
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        names.sort();
        names
    };
    let names = listing(&outputs[0]);
    assert_eq!(names, listing(&outputs[1]));
    assert!(names.iter().any(|n| n == "leaderboard.csv"));
    for name in &names {
        assert_eq!(
            std::fs::read(outputs[0].join(name)).unwrap(),
            std::fs::read(outputs[1].join(name)).unwrap(),
            "{name:?}"
        );
    }
}

#[test]
fn emitted_files_round_trip() {
    let dir = TempDir::new().unwrap();
    let witness = dir.path().join("a9.json");
    let out = run(&[
        "witness",
        "--family",
        "A",
        "--n",
        "9",
        "--out",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let a9 = io::read_dfa(&witness).unwrap();
    assert_eq!(a9.canonical_form(), make_a(9).unwrap().canonical_form());

    let min = dir.path().join("min.json");
    let input = save(dir.path(), "aba.json", &a_or_aba());
    assert_eq!(
        code(&run(&["minimize", &input, "--out", min.to_str().unwrap()])),
        0
    );
    assert_eq!(
        io::read_dfa(&min).unwrap().canonical_form(),
        a_or_aba().canonical_form()
    );

    let search_dir = dir.path().join("search");
    let out = run(&[
        "search",
        "--states",
        "4",
        "--top",
        "5",
        "--out",
        search_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let mut files = 0;
    for entry in std::fs::read_dir(&search_dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let d = io::read_dfa(&path).unwrap();
            assert_eq!(d.canonical_form(), d);
            files += 1;
        }
    }
    assert!(files > 0);
}

#[test]
fn info_and_dot() {
    let dir = TempDir::new().unwrap();
    let a10 = save(dir.path(), "a10.json", &make_a(10).unwrap());
    let b7 = save(dir.path(), "b7.json", &make_b(7).unwrap());

    let out = run(&["info", &a10, "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["state_complexity"], 10);
    assert_eq!(v["traps"], serde_json::json!([10]));
    assert_eq!(v["factor_free"], true);

    let out = run(&["dot", &a10, &b7]);
    assert_eq!(code(&out), 0);
    let dot = stdout(&out);
    assert_eq!(
        dot.matches("shape=circle").count() + dot.matches("shape=doublecircle").count(),
        49
    );
    assert!(dot.contains("label=\"10,7\""));
}
