use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn qnull(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qnull"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qnull-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn enumerate_lines_and_trailer() {
    let o = qnull(&["enumerate", "--q", "2", "--n", "2", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body, ["0\t10", "1\t11", "2\t01"]);
    assert!(text.ends_with("# count 3 gaussian_binomial 3\n"));

    let o = qnull(&["enumerate", "--q", "3", "--n", "3", "--k", "0"]);
    assert_eq!(
        stdout(&o).lines().filter(|l| !l.starts_with('#')).count(),
        1
    );

    let o = qnull(&["--json", "enumerate", "--q", "2", "--n", "4", "--k", "2"]);
    assert_eq!(json(&o)["count"], 35);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["enumerate", "--q", "6", "--n", "2", "--k", "1"][..],
        &["enumerate", "--q", "2", "--n", "2", "--k", "3"],
        &["nonsense"],
        &[
            "--threads",
            "0",
            "enumerate",
            "--q",
            "2",
            "--n",
            "1",
            "--k",
            "1",
        ],
        &["verify", "--design", "/nonexistent/design.txt", "--t", "1"],
        &[
            "construct",
            "--kind",
            "lb",
            "--q",
            "4",
            "--n",
            "3",
            "--t",
            "1",
            "--r",
            "3",
        ],
    ] {
        assert_eq!(qnull(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn construct_verify_round_trip() {
    let path = scratch("uniform.txt");
    let p = path.to_str().unwrap();
    let o = qnull(&[
        "construct",
        "--kind",
        "uniform",
        "--q",
        "4",
        "--n",
        "4",
        "--t",
        "1",
        "--k",
        "2",
        "--out",
        p,
    ]);
    assert_eq!(o.status.code(), Some(0));
    for r in ["2", "4"] {
        assert_eq!(
            qnull(&["verify", "--design", p, "--t", "1", "--r", r])
                .status
                .code(),
            Some(0)
        );
    }
    let o = qnull(&["--json", "verify", "--design", p, "--t", "2", "--r", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["ok"], false);

    let o = qnull(&["--json", "strength", "--design", p, "--r", "4"]);
    assert_eq!(json(&o)["strength"], 1);
}

#[test]
fn lower_bound_design_has_strength_t() {
    let path = scratch("lb.txt");
    let p = path.to_str().unwrap();
    assert!(qnull(&[
        "construct",
        "--kind",
        "lb",
        "--q",
        "3",
        "--n",
        "4",
        "--t",
        "2",
        "--out",
        p
    ])
    .status
    .success());
    let o = qnull(&["--json", "strength", "--design", p]);
    assert_eq!(json(&o)["strength"], 2);
    assert_eq!(json(&o)["weight"], 14);
}

#[test]
fn matrix_commands_share_the_file_format() {
    let path = scratch("w.txt");
    let p = path.to_str().unwrap();
    assert!(
        qnull(&["wilson", "--q", "2", "--n", "4", "--t", "1", "--k", "2", "--out", p])
            .status
            .success()
    );

    let o = qnull(&["--json", "rank", "--matrix", p, "--over", "gf"]);
    assert_eq!(json(&o)["rank"], 11);
    let o = qnull(&["--json", "rank", "--matrix", p, "--over", "q"]);
    assert_eq!(json(&o)["rank"], 15);

    let o = qnull(&["--json", "minweight", "--matrix", p, "--cap", "4"]);
    let rec = json(&o);
    assert_eq!(rec["weight"], 4);
    assert_eq!(rec["exhaustive"], true);
    assert_eq!(rec["mode"], "support-enumeration");

    // The witness is itself a design file that verifies at t = 1.
    let witness = scratch("witness.txt");
    fs::write(&witness, rec["witness"].as_str().unwrap()).unwrap();
    let o = qnull(&["verify", "--design", witness.to_str().unwrap(), "--t", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = qnull(&["--json", "minsupport", "--matrix", p, "--cap", "6"]);
    assert_eq!(json(&o)["weight"], 6);
}

#[test]
fn kernel_mode_respects_the_budget() {
    let path = scratch("w-budget.txt");
    let p = path.to_str().unwrap();
    assert!(
        qnull(&["wilson", "--q", "2", "--n", "4", "--t", "1", "--k", "2", "--out", p])
            .status
            .success()
    );
    // Kernel dimension 24 is over the default 2^22.
    assert_eq!(
        qnull(&["minweight", "--matrix", p, "--cap", "4", "--mode", "kernel"])
            .status
            .code(),
        Some(2)
    );
    let o = Command::new(env!("CARGO_BIN_EXE_qnull"))
        .args([
            "--json",
            "minweight",
            "--matrix",
            p,
            "--cap",
            "4",
            "--mode",
            "kernel",
        ])
        .env("QNULL_BUDGET", "16777216")
        .output()
        .unwrap();
    assert_eq!(json(&o)["weight"], 4);
}

#[test]
fn randomized_mode_is_seeded() {
    let path = scratch("w-rand.txt");
    let p = path.to_str().unwrap();
    assert!(
        qnull(&["wilson", "--q", "2", "--n", "4", "--t", "2", "--k", "3", "--out", p])
            .status
            .success()
    );
    let args = [
        "--json",
        "minweight",
        "--matrix",
        p,
        "--cap",
        "15",
        "--mode",
        "randomized",
        "--seed",
        "11",
    ];
    let a = qnull(&args);
    let b = qnull(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["exhaustive"], false);
}

#[test]
fn reproduce_filters_and_fault_injection() {
    let o = qnull(&["--json", "reproduce", "--only", "binmin"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o)["rows"].as_array().unwrap().clone();
    assert!(!rows.is_empty());
    assert!(rows
        .iter()
        .all(|r| r["group"] == "binmin" && r["pass"] == true));

    let o = qnull(&["--json", "reproduce", "--only", "q3"]);
    let rows = json(&o)["rows"].as_array().unwrap().clone();
    assert!(rows
        .iter()
        .all(|r| r["tags"].as_array().unwrap().iter().any(|t| t == "q3")));

    let o = qnull(&["--json", "reproduce", "--only", "binmin", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    let failed: Vec<String> = json(&o)["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["pass"] == false)
        .map(|r| r["id"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(failed, ["binmin/support/n4/t1/k2"]);
}
