use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_roman-ilp"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String) {
    let out: Output = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, text: &str) -> String {
        let path = self.0.path().join(name);
        fs::write(&path, text).unwrap();
        path.to_str().unwrap().to_string()
    }
}

const STAR: &str = "4\n0 1\n0 2\n0 3\n";
const C4: &str = "4\n0 1\n1 2\n2 3\n0 3\n";

#[test]
fn validate_exit_codes() {
    let f = Files::new();
    let k2 = fixture("k2.txt");
    let k2 = k2.to_str().unwrap();
    let good = f.write("good", "4 0\n");
    let bad = f.write("bad", "2 1\n");
    assert_eq!(run(&["validate", "--graph", k2, "--labels", &good, "--k", "3"]).0, 0);
    let (code, out) = run(&["validate", "--graph", k2, "--labels", &bad, "--k", "3"]);
    assert_eq!(code, 1);
    assert!(out.contains("vertex 0"));
    let short = f.write("short", "4\n");
    assert_eq!(run(&["validate", "--graph", k2, "--labels", &short, "--k", "3"]).0, 2);
    assert_eq!(run(&["validate", "--graph", k2, "--labels", &good, "--k", "5"]).0, 2);
}

#[test]
fn oracle_prints_optimum_and_witness() {
    let f = Files::new();
    let c4 = f.write("c4", C4);
    let (code, out) = run(&["oracle", "--graph", &c4, "--k", "3"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("6"));
    assert_eq!(lines.next(), Some("0 3 0 3"));
}

#[test]
fn golden_optima_through_the_cli() {
    let f = Files::new();
    let cases = [
        ("1\n", 3, 3),
        ("2\n0 1\n", 3, 4),
        ("3\n0 1\n1 2\n", 3, 4),
        (C4, 3, 6),
        ("5\n0 1\n1 2\n2 3\n3 4\n0 4\n", 3, 7),
        ("2\n0 1\n", 4, 5),
        (STAR, 4, 5),
    ];
    for (i, (text, k, expected)) in cases.iter().enumerate() {
        let g = f.write(&format!("g{i}"), text);
        let k = k.to_string();
        let (_, out) = run(&["oracle", "--graph", &g, "--k", &k]);
        assert_eq!(out.lines().next(), Some(expected.to_string().as_str()));
        let model = if k == "3" { "M3RDP_AN" } else { "M4RDP_AN" };
        let (code, out) = run(&["solve", "--graph", &g, "--model", model, "--budget", "30"]);
        assert_eq!(code, 0);
        assert!(out.contains(&format!("objective {expected}\n")), "{out}");
    }
}

#[test]
fn solve_reports_the_star_gap() {
    let f = Files::new();
    let star = f.write("star", STAR);
    let (code, out) = run(&["solve", "--graph", &star, "--model", "M4RDP2", "--fidelity", "faithful"]);
    assert_eq!(code, 0);
    assert!(out.contains("objective 4\n"));
    assert!(out.contains("labels 4 0 0 0\n"));
    assert!(out.contains("note: encoding gap"));
    let (code, out) = run(&["solve", "--graph", &star, "--model", "M4RDP2", "--fidelity", "corrected"]);
    assert_eq!(code, 0);
    assert!(out.contains("model M4RDP_AN\n"));
    assert!(out.contains("objective 5\n"));
    assert!(!out.contains("note:"));
}

#[test]
fn solve_timeout_without_incumbent() {
    let f = Files::new();
    let (code, gen) = run(&["gen", "--n", "80", "--p", "0.05", "--seed", "2"]);
    assert_eq!(code, 0);
    let g = f.write("big", &gen);
    let (code, out) = run(&["solve", "--graph", &g, "--model", "M4RDP1", "--budget", "0.000001"]);
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("status timed out"));
}

#[test]
fn export_matches_golden_file() {
    let (code, out) = run(&["export", "--graph", fixture("k2.txt").to_str().unwrap(), "--model", "m3rdp-an"]);
    assert_eq!(code, 0);
    assert_eq!(out, fs::read_to_string(fixture("k2_m3rdp_an.lp")).unwrap());
}

#[test]
fn gen_is_seeded_and_parseable() {
    let a = run(&["gen", "--n", "12", "--p", "0.3", "--seed", "4"]);
    let b = run(&["gen", "--n", "12", "--p", "0.3", "--seed", "4"]);
    assert_eq!(a, b);
    let g = roman_ilp::graph::parse_edge_list(&a.1).unwrap();
    assert_eq!(g.vertex_count(), 12);
    assert!(g.is_connected());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["solve", "--model", "M3RDP1"]).0, 2);
    assert_eq!(run(&["oracle", "--graph", "/nonexistent/graph", "--k", "3"]).0, 2);
    let f = Files::new();
    let g = f.write("g", "13\n0 1\n");
    assert_eq!(run(&["oracle", "--graph", &g, "--k", "3"]).0, 2);
    assert_eq!(run(&["solve", "--graph", &g, "--model", "M9"]).0, 2);
    let cfg = f.write("cfg", "n = 5\nmystery = 1\n");
    assert_eq!(run(&["bench", "--config", &cfg]).0, 2);
}

#[test]
fn bench_is_deterministic_without_times() {
    let f = Files::new();
    f.write("star.txt", STAR);
    let cfg = f.write(
        "suite.cfg",
        "n = 6, 7\np = 0.4\nseed = 3\ngraphs = star.txt\nmodels = M3RDP2, M4RDP2\n\
         fidelity = both\nbudget = 30\noracle_check = true\njobs = 2\n",
    );
    let (code, a) = run(&["bench", "--config", &cfg, "--no-times"]);
    assert_eq!(code, 0);
    let (_, b) = run(&["bench", "--config", &cfg, "--no-times", "--jobs", "1"]);
    assert_eq!(a, b);
    assert!(a.starts_with(
        "| \\|V\\| | \\|E\\| | p | M3RDP2 result | M4RDP2 result | M3RDP_AN result | M4RDP_AN result |"
    ));
    assert!(a.contains("| 4 | 3 |  | "));
    assert!(a.contains("M4RDP2: optimum 4 but exhaustive optimum is 5"));

    let (_, csv) = run(&["bench", "--config", &cfg, "--format", "csv"]);
    assert!(csv.starts_with("|V|,|E|,p,M3RDP2 result,M3RDP2 time,"));
    assert_eq!(csv.lines().count(), 4);
}
