use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_robust-sched")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const INSTANCE: &str = r#"{"kind": "identical", "machines": 2, "gamma": 1,
  "jobs": [{"p_bar": "3", "p_hat": "2"}, {"p_bar": "2", "p_hat": "1/2"}, {"p_bar": 1, "p_hat": 4}]}"#;

#[test]
fn evaluate_prints_exact_value() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.json", INSTANCE);
    let sched = write(dir.path(), "s.json", r#"{"assignment": [0, 1, 1]}"#);
    let out = cli(&["evaluate", &inst, &sched]);
    assert!(out.status.success());
    // machine 0: 3 + 2, machine 1: 2 + 1 + 4
    assert!(stdout(&out).contains("worst-case makespan: 7/1 "), "{}", stdout(&out));
}

#[test]
fn solve_round_trips_through_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.json", INSTANCE);
    for algo in ["exact", "bnb", "greedy", "approx3", "ptas", "eptas"] {
        let sched = dir.path().join(format!("{algo}.json"));
        let out = cli(&["solve", &inst, "--algo", algo, "--epsilon", "0.2", "-o", sched.to_str().unwrap()]);
        assert!(out.status.success(), "{algo}: {}", String::from_utf8_lossy(&out.stderr));
        let eval = cli(&["evaluate", &inst, sched.to_str().unwrap()]);
        assert!(eval.status.success());
    }
    let out = cli(&["solve", &inst, "--algo", "bnb"]);
    assert!(stdout(&out).contains("assignment"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bnb: worst-case makespan 7/1"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"kind": "identical"}"#);
    assert_eq!(cli(&["solve", &bad]).status.code(), Some(2));
    let inst = write(dir.path(), "i.json", INSTANCE);
    let wrong = write(dir.path(), "s.json", r#"{"assignment": [0, 5, 1]}"#);
    assert_eq!(cli(&["evaluate", &inst, &wrong]).status.code(), Some(2));
    let jobs: Vec<String> = (0..12).map(|k| format!(r#"{{"p_bar": {}, "p_hat": 1}}"#, k + 1)).collect();
    let big = write(
        dir.path(),
        "big.json",
        &format!(r#"{{"kind": "identical", "machines": 4, "gamma": 2, "jobs": [{}]}}"#, jobs.join(",")),
    );
    assert_eq!(cli(&["solve", &big, "--algo", "exact"]).status.code(), Some(3));
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<String>> = ["a", "b"]
        .iter()
        .map(|sub| {
            let out = dir.path().join(sub);
            let o = cli(&[
                "gen", "--family", "identical-correlated", "--seed", "5", "--jobs", "3-6", "--count", "3", "-o",
                out.to_str().unwrap(),
            ]);
            assert!(o.status.success());
            let mut files: Vec<_> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().path()).collect();
            files.sort();
            files.iter().map(|p| fs::read_to_string(p).unwrap()).collect()
        })
        .collect();
    assert_eq!(runs[0].len(), 3);
    assert_eq!(runs[0], runs[1]);
    assert_eq!(cli(&["gen", "--family", "nope", "-o", "x"]).status.code(), Some(2));
}

#[test]
fn sat_gap_check() {
    let dir = tempfile::tempdir().unwrap();
    let sat = write(dir.path(), "sat.cnf", "c example\np cnf 3 2\n1 -2 3 0\n-1 2 3 0\n");
    let out = cli(&["sat-gap", &sat, "--check"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("satisfiable: true") && text.contains("optimum: 1/1 ") && text.contains("gap holds"));

    let clauses: Vec<String> = (0..8)
        .map(|m| {
            let s = |b: u32, v: i32| if m >> b & 1 == 1 { -v } else { v };
            format!("{} {} {} 0", s(0, 1), s(1, 2), s(2, 3))
        })
        .collect();
    let unsat = write(dir.path(), "unsat.cnf", &format!("p cnf 3 8\n{}\n", clauses.join("\n")));
    let text = stdout(&cli(&["sat-gap", &unsat, "--check"]));
    assert!(text.contains("satisfiable: false") && text.contains("gap holds"));

    let inst = cli(&["sat-gap", &sat]);
    assert!(stdout(&inst).contains("unrelated"));
}

#[test]
fn bench_csv_and_gnuplot() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "suite.json",
        r#"{"instances": [{"generator": {"seed": 1, "family": "identical-uniform-random", "jobs": [3, 5], "machines": [2, 2]}, "count": 2}],
            "solvers": [{"algo": "bnb"}, {"algo": "ptas", "epsilon": "1/5"}], "oracle": true}"#,
    );
    let csv = dir.path().join("r.csv");
    let json = dir.path().join("r.json");
    let out = cli(&["bench", &config, "--csv", csv.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("instance_id,family,"));
    assert_eq!(text.lines().count(), 5);
    let plot = cli(&["gnuplot", json.to_str().unwrap()]);
    assert!(plot.status.success());
    assert_eq!(stdout(&plot).lines().count(), 5);
}
