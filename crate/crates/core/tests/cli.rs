use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nrm-lab"));
    cmd.env_remove("NRM_LAB_WORKERS");
    cmd
}

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(rel)
}

fn run(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    bin()
        .args(args.iter().map(|a| a.as_ref()))
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn solve_dlp_reports_solution_and_degeneracy() {
    let out = run(&[&"solve-dlp", &fixture("instances/two_class_r2_b1.json")]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("v_dlp = 2000"), "{text}");
    assert!(text.contains("x* = (1, 0)"), "{text}");
    assert!(text.contains("degenerate (counts 2+1=3 > n=2)"), "{text}");

    let out = run(&[&"solve-dlp", &fixture("instances/two_class_r2_b1_5.json")]);
    let text = stdout(&out);
    assert!(text.contains("x* = (1, 0.5)"), "{text}");
    assert!(text.contains("nondegenerate"), "{text}");
}

#[test]
fn validate_prints_dimensions() {
    let out = run(&[&"validate", &fixture("instances/multi_resource.json")]);
    assert!(out.status.success());
    assert!(
        stdout(&out).starts_with("valid: n=5 classes, m=4 resources"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn malformed_instance_exits_2_and_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"horizon": 10, "lambda": [1, -1], "revenue": [1, 1], "bom": [[1, 1]], "capacity": [5]}"#)
        .unwrap();
    let out = run(&[&"solve-dlp", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("lambda") || stderr(&out).contains("rate"),
        "{}",
        stderr(&out)
    );

    std::fs::write(
        &bad,
        r#"{"horizon": 10, "lambda": [1], "revenue": [1], "bom": [[1]]}"#,
    )
    .unwrap();
    let out = run(&[&"validate", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("capacity"), "{}", stderr(&out));

    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(run(&[&"validate", &bad]).status.code(), Some(2));
}

#[test]
fn missing_spec_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        &"run",
        &dir.path().join("nope.json"),
        &"--out",
        &dir.path().join("o.csv"),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("missing-dir").join("o.csv");
    let out = run(&[
        &"run",
        &fixture("specs/smoke.json"),
        &"--out",
        &dest,
        &"--workers",
        &"1",
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

fn run_smoke(dir: &Path, workers: &str) -> Vec<u8> {
    let dest = dir.join(format!("smoke-{workers}.csv"));
    let out = run(&[
        &"run",
        &fixture("specs/smoke.json"),
        &"--out",
        &dest,
        &"--workers",
        &workers,
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    std::fs::read(dest).unwrap()
}

#[test]
fn run_output_is_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let one = run_smoke(dir.path(), "1");
    assert_eq!(run_smoke(dir.path(), "8"), one);
    assert!(String::from_utf8(one)
        .unwrap()
        .starts_with("sweep,policy,mean_regret,stderr,n_paths,v_dlp,v_ho_hat\n"));

    // The environment variable is the fallback for --workers.
    let dest = dir.path().join("env.csv");
    let out = bin()
        .env("NRM_LAB_WORKERS", "3")
        .args([
            "run".as_ref(),
            fixture("specs/smoke.json").as_os_str(),
            "--out".as_ref(),
            dest.as_os_str(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read(dest).unwrap(), run_smoke(dir.path(), "1"));
}

#[test]
fn seed_override_changes_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let base = run_smoke(dir.path(), "1");
    let dest = dir.path().join("seeded.csv");
    let out = run(&[
        &"run",
        &fixture("specs/smoke.json"),
        &"--out",
        &dest,
        &"--seed",
        &"12345",
    ]);
    assert!(out.status.success());
    assert_ne!(std::fs::read(dest).unwrap(), base);
}

#[test]
fn sample_and_replay_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let inst = fixture("instances/two_class_r2_b1.json");
    let path = dir.path().join("path.jsonl");
    let out = run(&[&"sample-path", &inst, &"--seed", &"42", &"--out", &path]);
    assert!(out.status.success());
    let lines = std::fs::read_to_string(&path).unwrap().lines().count();
    assert!(lines > 1800 && lines < 2200, "{lines} events");

    let replay = || {
        let out = run(&[&"replay", &inst, &path, &"IRT", &"--seed", &"7"]);
        assert!(out.status.success(), "{}", stderr(&out));
        stdout(&out)
    };
    let first = replay();
    assert_eq!(first, replay());
    assert!(first.starts_with("time,class,decision,prob,remaining_0\n"));
    assert_eq!(first.lines().count(), lines + 1);

    let trace = dir.path().join("trace.csv");
    let out = run(&[
        &"replay", &inst, &path, &"irt", &"--seed", &"7", &"--trace", &trace,
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(trace).unwrap(), first);
    assert!(
        stdout(&out).starts_with("IRT: revenue "),
        "{}",
        stdout(&out)
    );
}

#[test]
fn spa_replay_on_a_single_class_instance_accepts_with_probability_one() {
    let dir = tempfile::tempdir().unwrap();
    let inst = fixture("instances/single_class.json");
    let path = dir.path().join("p.jsonl");
    assert!(run(&[&"sample-path", &inst, &"--out", &path])
        .status
        .success());
    let out = run(&[&"replay", &inst, &path, &"spa"]);
    let text = stdout(&out);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    for rec in reader.records() {
        let rec = rec.unwrap();
        assert_eq!(&rec[3], "1");
        assert_ne!(&rec[2], "reject");
    }
}

#[test]
fn unknown_policy_exits_2_and_lists_the_choices() {
    let dir = tempfile::tempdir().unwrap();
    let inst = fixture("instances/two_class_r2_b1.json");
    let path = dir.path().join("p.jsonl");
    assert!(run(&[&"sample-path", &inst, &"--out", &path])
        .status
        .success());
    let out = run(&[&"replay", &inst, &path, &"greedy"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    for name in ["SPA", "FR", "IR", "IRT", "FRT"] {
        assert!(err.contains(name), "{err}");
    }
}
