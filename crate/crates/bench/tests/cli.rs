use std::process::{Command, Output};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kaczmarz-bench"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_writes_one_row_per_outer_iteration() {
    let o = bench(&[
        "run",
        "--matrix",
        "parter",
        "--size",
        "60",
        "--k",
        "2",
        "--max-iter",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "n,err_z,err_kacz_ref,err_ratio,dz_norm,stop_ratio,breakdown_flag"
    );
    assert_eq!(lines.len(), 9);
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 7));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("final relative error"));
}

#[test]
fn json_mirrors_the_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.json");
    let o = bench(&[
        "run",
        "--matrix",
        "lesp",
        "--size",
        "40",
        "--mode",
        "rk",
        "--transform",
        "mpe",
        "--k",
        "3",
        "--max-iter",
        "4",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 5);
    assert_eq!(v["config"]["transform"], "mpe");
    assert_eq!(v["config"]["mode"], "rk");
    assert!(v["summary"]["final_error"].as_f64().unwrap() > 0.0);
    assert!(o.stdout.is_empty());
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(
        &cfg,
        "# small plain run\nmatrix = toeppen\nsize = 30\nmode = plain\nmax_iter = 3\n",
    )
    .unwrap();
    let o = bench(&["run", "--config", cfg.to_str().unwrap(), "--max-iter", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 7);
}

#[test]
fn configuration_errors_exit_with_2() {
    for args in [
        vec!["run", "--matrix", "baart"],
        vec!["run", "--size", "1"],
        vec!["run", "--k", "0"],
        vec!["run", "--size", "10", "--k", "11"],
        vec!["run", "--transform", "shanks"],
        vec!["run", "--noise", "-1"],
        vec!["run", "--format", "xml"],
        vec!["run", "--bogus"],
    ] {
        let o = bench(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let o = bench(&["run", "--config", "/nonexistent/exp.cfg"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn abort_policy_exits_with_3() {
    let o = bench(&[
        "run",
        "--matrix",
        "toeppen",
        "--size",
        "1000",
        "--mode",
        "rk",
        "--k",
        "8",
        "--max-iter",
        "30",
        "--fallback",
        "abort",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let csv = stdout(&o);
    assert!(csv.lines().last().unwrap().ends_with(",1"));
}

#[test]
fn suite_joins_transforms_on_n() {
    let o = bench(&[
        "suite",
        "--size",
        "40",
        "--k",
        "2",
        "--max-iter",
        "3",
        "--transforms",
        "mpe,rre,vea",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("n,mpe_k2_err_z,"));
    assert!(header.contains("vector-epsilon_k2_breakdown_flag"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn matrix_dump_and_spectrum() {
    let o = bench(&[
        "dump-matrix",
        "--matrix",
        "clement",
        "--size",
        "5",
        "--no-precondition",
    ]);
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|l| l.split(' ').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][1], 1.0);
    assert_eq!(rows[1][0], 4.0);
    assert_eq!(rows[2][2], 0.0);

    let o = bench(&["spectrum", "--matrix", "parter", "--size", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 21);
    let moduli: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(moduli.windows(2).all(|w| w[0] >= w[1]));
    assert!(moduli[0] < 1.0);
}
