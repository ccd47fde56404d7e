//! End-to-end tests of the `knap` binary: documented outputs, exit
//! codes, format round-trips, and byte-level determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn knap() -> Command {
    Command::new(env!("CARGO_BIN_EXE_knap"))
}

fn run(args: &[&str]) -> Output {
    knap().args(args).output().expect("spawn knap")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

struct Scratch {
    dir: PathBuf,
}

impl Scratch {
    fn new(tag: &str) -> Scratch {
        let dir = std::env::temp_dir().join(format!("knap-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch { dir }
    }

    fn file(&self, name: &str, contents: &str) -> String {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).unwrap();
        path.to_string_lossy().into_owned()
    }

    fn path(&self, name: &str) -> String {
        self.dir.join(name).to_string_lossy().into_owned()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.dir);
    }
}

#[test]
fn conv_prints_documented_result() {
    let s = Scratch::new("conv");
    let a = s.file("a.vec", "1 2\n");
    let b = s.file("b.vec", "3 4\n");
    let out = run(&["conv", "--algo", "naive", &a, &b]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "4 5 6\n");
    let out = run(&["conv", "--algo", "bounded", "--e-max", "4", &a, &b]);
    assert_eq!(stdout(&out), "4 5 6\n");
}

#[test]
fn knapsack_classic_prints_optimum() {
    let s = Scratch::new("knap");
    let inst = s.file("inst.txt", "2 5\n2 3\n3 4\n");
    let out = run(&["knapsack", "--algo", "classic", &inst]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "7\n");
    // --oracle forces the classic path regardless of --algo.
    let out = run(&["knapsack", "--algo", "via-conv", "--oracle", &inst]);
    assert_eq!(stdout(&out), "7\n");
}

#[test]
fn missing_file_exits_2_without_stdout() {
    let out = run(&["knapsack", "--algo", "classic", "/nonexistent/inst.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn overflow_exits_3() {
    let s = Scratch::new("ovf");
    let inst = s.file("big.txt", &format!("1 2\n1 {} 2\n", u64::MAX));
    let out = run(&["knapsack", "--algo", "classic", &inst]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_arguments_exit_2() {
    let out = run(&["knapsack", "--algo", "nope", "/dev/null"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn power_and_treesep_outputs() {
    let s = Scratch::new("misc");
    let a = s.file("a.vec", "0 3 1\n");
    let out = run(&["power", &a, "2"]);
    assert_eq!(stdout(&out), "0 3 6 4 2\n");
    let out = run(&["power", "--algo", "naive", "--prefix-cap", "3", &a, "2"]);
    assert_eq!(stdout(&out), "0 3 6\n");

    let tree = s.file("tree.txt", "3\n0 1 1\n1 2 5\n");
    for algo in ["brute", "naive-dp", "spine", "bounded"] {
        let out = run(&["treesep", "--algo", algo, &tree]);
        assert_eq!(stdout(&out), "0 1 1 0\n", "algo {algo}");
    }
    let out = run(&["treesep", "--algo", "spine", "--m", "1", &tree]);
    assert_eq!(stdout(&out), "1\n");
}

#[test]
fn gen_round_trips_and_is_deterministic() {
    let s = Scratch::new("gen");
    for kind in ["bounded-value", "bounded-size", "unbounded", "mult", "tree"] {
        let p1 = s.path(&format!("{kind}-1.txt"));
        let p2 = s.path(&format!("{kind}-2.txt"));
        for p in [&p1, &p2] {
            let out = run(&[
                "gen", "--kind", kind, "--n", "12", "--t", "40", "--seed", "9", "--out", p,
            ]);
            assert!(out.status.success(), "gen {kind}");
        }
        let b1 = std::fs::read(&p1).unwrap();
        let b2 = std::fs::read(&p2).unwrap();
        assert_eq!(b1, b2, "gen {kind} not deterministic");
        // Generated files parse back through the matching solver.
        let algo = match kind {
            "unbounded" => "infinite-mult",
            "mult" => "given-mult",
            "tree" => continue,
            _ => "classic",
        };
        let out = run(&["knapsack", "--algo", algo, &p1]);
        assert!(out.status.success(), "solve generated {kind}");
    }
    let tree = s.path("tree.txt");
    let out = run(&["gen", "--kind", "tree", "--n", "9", "--seed", "4", "--out", &tree]);
    assert!(out.status.success());
    let out = run(&["treesep", "--algo", "naive-dp", &tree]);
    assert!(out.status.success());
}

#[test]
fn env_seed_applies_when_flag_missing() {
    let s = Scratch::new("envseed");
    let inst = s.file(
        "inst.txt",
        "4 30\n3 4\n5 2\n7 6\n2 1\n",
    );
    let with_env = knap()
        .args(["knapsack", "--algo", "via-conv", &inst])
        .env("KNAP_SEED", "123")
        .output()
        .unwrap();
    let with_flag = run(&["knapsack", "--algo", "via-conv", "--seed", "123", &inst]);
    assert_eq!(with_env.stdout, with_flag.stdout);
}

#[test]
fn randomized_paths_are_byte_identical_for_fixed_seed() {
    let s = Scratch::new("det");
    let inst = s.file(
        "inst.txt",
        "6 60\n3 4\n5 2\n7 6\n2 1\n11 5\n4 3\n",
    );
    for algo in ["via-conv", "small-sizes"] {
        let a = run(&["knapsack", "--algo", algo, "--seed", "7", &inst]);
        let b = run(&["knapsack", "--algo", algo, "--seed", "7", &inst]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "algo {algo}");
    }
    let args = [
        "bench",
        "--algos",
        "bounded-conv,via-conv",
        "--sizes",
        "64,128",
        "--seeds",
        "1,2",
        "--reps",
        "2",
        "--verify",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bench_report_shapes() {
    let s = Scratch::new("bench");
    let json = s.path("report.json");
    let out = run(&[
        "bench", "--algos", "naive-conv", "--sizes", "32,64", "--seeds", "1,2,3", "--out", &json,
    ]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(&json).unwrap();
    assert_eq!(body.matches("\"algorithm\"").count(), 6);
    let csv = s.path("report.csv");
    let out = run(&[
        "bench", "--algos", "naive-conv", "--sizes", "32", "--format", "csv", "--out", &csv,
    ]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(body.lines().count(), 2);
    assert!(body.starts_with("algorithm,n,e_max,t,seed,wall_nanos,result_checksum"));
}

#[test]
fn bench_ladder_validation() {
    let out = run(&["bench", "--algos", "naive-conv", "--sizes", "64,32"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_format_wraps_result_and_checksum() {
    let s = Scratch::new("json");
    let a = s.file("a.vec", "1 2\n");
    let b = s.file("b.vec", "3 4\n");
    let out = run(&["conv", "--algo", "naive", "--format", "json", &a, &b]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"algorithm\": \"naive\""));
    assert!(text.contains("\"result\": \"4 5 6\""));
    assert!(text.contains("\"checksum\""));
    let out = run(&["conv", "--format", "yaml", &a, &b]);
    assert_eq!(out.status.code(), Some(2));
}
