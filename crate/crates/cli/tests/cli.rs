//! End-to-end tests against the compiled binary: exit codes, output
//! determinism, and the JSON schema.

use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jacsplit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

#[test]
fn verify_rejects_short_signatures() {
    let out = run(&["verify", "--n", "1", "--t", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("below the minimum"), "stderr: {err}");
}

#[test]
fn verify_rejects_bad_ranges() {
    assert_eq!(run(&["verify", "--n", "3..1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--n", "x"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--n", "1", "--t", "nope"]).status.code(), Some(2));
    // a grid with even one invalid point must fail as a whole, upfront:
    // n = 3 needs t >= 6
    assert_eq!(run(&["verify", "--n", "1..3", "--t", "4..5"]).status.code(), Some(2));
}

#[test]
fn rejects_n_beyond_enumeration_limit() {
    // group arithmetic goes up to n = 16, but every subcommand enumerates,
    // so the CLI must turn large n into a usage error instead of a panic
    for (args, msg) in [
        (vec!["verify", "--n", "13"], "enumeration limit"),
        (vec!["report", "--n", "13"], "enumeration limit"),
        (vec!["gv-search", "--n", "13", "--t", "26"], "enumeration limit"),
        (vec!["lattice", "--n", "13"], "enumeration limit"),
        // chartab cuts off even earlier: its table is quadratic in m
        (vec!["chartab", "--n", "13"], "table limit"),
        // reports need class and coset enumeration on top of the lattice,
        // which caps them below the orbit-level commands
        (vec!["verify", "--n", "11"], "report limit"),
        (vec!["report", "--n", "11"], "report limit"),
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(msg), "stderr: {err}");
    }
    // a factor target that resolves past the limit, including u64::MAX,
    // which must not overflow the n search
    for target in ["99999999", "18446744073709551615"] {
        let out = run(&["report", "--target-factors", target]);
        assert_eq!(out.status.code(), Some(2), "target: {target}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("report limit"), "stderr: {err}");
    }
    // the full character table is quadratic in the class count, so chartab
    // cuts off earlier than the linear commands
    let out = run(&["chartab", "--n", "7"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("table limit"), "stderr: {err}");
}

#[test]
fn dies_quietly_when_stdout_closes_early() {
    use std::io::Read;
    use std::process::Stdio;

    // ~440 KB of output, far past any pipe buffer
    let mut child = bin()
        .args(["lattice", "--n", "6"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    // read a few bytes, then drop the pipe while the table is still printing
    let mut stdout = child.stdout.take().expect("piped stdout");
    let mut buf = [0u8; 64];
    stdout.read_exact(&mut buf).expect("some output arrives");
    drop(stdout);
    let out = child.wait_with_output().expect("child finishes");
    // SIGPIPE death (141 via a shell) is fine; a panic (101 + backtrace) is not
    assert_ne!(out.status.code(), Some(101), "binary panicked on closed pipe");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(!err.contains("panicked"), "stderr: {err}");
}

#[test]
fn verify_grid_passes_and_is_byte_deterministic() {
    let args = ["verify", "--n", "1..2", "--t", "auto", "--json", "-"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout, "two identical invocations must emit identical bytes");

    let reports: Value = serde_json::from_str(&stdout_str(&a)).expect("stdout is pure JSON");
    let arr = reports.as_array().expect("array of reports");
    assert_eq!(arr.len(), 2);
    assert_eq!(arr[0]["params"]["n"], 1);
    assert_eq!(arr[0]["params"]["t"], 4);
    assert_eq!(arr[1]["params"]["n"], 2);
    assert_eq!(arr[1]["params"]["t"], 4);
}

#[test]
fn verify_is_deterministic_across_thread_counts() {
    let args = ["verify", "--n", "1", "--t", "4..5", "--json", "-"];
    let single = bin().args(args).env("JD_THREADS", "1").output().unwrap();
    let multi = bin().args(args).env("JD_THREADS", "4").output().unwrap();
    assert_eq!(single.status.code(), Some(0));
    assert_eq!(single.stdout, multi.stdout);
}

#[test]
fn verify_rejects_bad_thread_count() {
    let out = bin()
        .args(["verify", "--n", "1"])
        .env("JD_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_writes_json_file() {
    let dir = std::env::temp_dir().join("jacsplit-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let out = run(&["verify", "--n", "1", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    // text still goes to stdout when writing to a file
    assert!(stdout_str(&out).contains("checks:"));
    let contents = std::fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&contents).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    std::fs::remove_file(&path).ok();
}

#[test]
fn gv_search_finds_and_validates() {
    let out = run(&["gv-search", "--n", "2", "--t", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_str(&out).lines().count(), 4);

    // deterministic per seed
    let again = run(&["gv-search", "--n", "2", "--t", "4"]);
    assert_eq!(out.stdout, again.stdout);
    let seeded = run(&["gv-search", "--n", "3", "--t", "6", "--seed", "7"]);
    assert_eq!(seeded.status.code(), Some(0));
    assert_eq!(stdout_str(&seeded).lines().count(), 6);
}

#[test]
fn gv_search_rejects_short_t() {
    let out = run(&["gv-search", "--n", "2", "--t", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gv_search_reports_budget_exhaustion() {
    let out = run(&["gv-search", "--n", "2", "--t", "4", "--budget", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("budget"), "stderr: {err}");
}

#[test]
fn gv_search_emits_vector_json() {
    let out = run(&["gv-search", "--n", "2", "--t", "5", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["n"], 2);
    assert_eq!(v["t"], 5);
    assert_eq!(v["elements"].as_array().unwrap().len(), 5);
    assert_eq!(v["signature"]["periods"].as_array().unwrap().len(), 5);
}

#[test]
fn report_json_schema_is_stable() {
    let out = run(&["report", "--n", "1", "--t", "4", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout_str(&out)).expect("stdout is pure JSON");

    assert_eq!(v["params"]["n"], 1);
    assert_eq!(v["params"]["t"], 4);
    assert_eq!(v["params"]["seed"], 0);
    assert_eq!(v["group"]["order"], 12);
    assert_eq!(v["group"]["m"], 1);
    assert_eq!(v["genera"]["X"], 5);
    assert_eq!(v["genera"]["X_N"], 2);
    assert_eq!(v["genera"]["X_B"], 1);
    assert_eq!(v["vector"].as_array().unwrap().len(), 4);
    assert_eq!(v["jxb_factors"].as_array().unwrap().len(), 1);
    assert_eq!(v["jx_factors"].as_array().unwrap().len(), 2);
    assert!(v["hecke_matrix"].is_array());
    assert_eq!(v["degree"]["scalar"], 2);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["name"].is_string());
        let status = c["status"].as_str().unwrap();
        assert!(status == "verified-exact" || status == "algebra-verified", "{status}");
    }
}

#[test]
fn report_target_factors_picks_smallest_group() {
    let out = run(&["report", "--target-factors", "5", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["params"]["n"], 2, "5 factors need m >= 5, i.e. n = 2");
    assert_eq!(v["params"]["t"], 4);
    assert_eq!(v["jxb_factors"].as_array().unwrap().len(), 5);
}

#[test]
fn report_text_format_prints_tables() {
    let out = run(&["report", "--n", "2", "--t", "7", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("genera: X 65 | X_N 5 | X_L 9 | X_U 17 | X_M 4 | X_B 20"), "{text}");
    assert!(text.contains("hecke eigenvalue matrix"));
}

#[test]
fn report_requires_n_or_target() {
    let out = run(&["report"]);
    assert_eq!(out.status.code(), Some(2));
    let conflict = run(&["report", "--n", "1", "--target-factors", "5"]);
    assert_eq!(conflict.status.code(), Some(2));
}

#[test]
fn lattice_and_chartab_render() {
    let lat = run(&["lattice", "--n", "2"]);
    assert_eq!(lat.status.code(), Some(0));
    assert_eq!(stdout_str(&lat).lines().count(), 6, "header plus five entries");

    let lat_json = run(&["lattice", "--n", "2", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout_str(&lat_json)).unwrap();
    assert_eq!(v["m"], 5);
    assert_eq!(v["entries"].as_array().unwrap().len(), 5);

    let tab = run(&["chartab", "--n", "1"]);
    assert_eq!(tab.status.code(), Some(0));
    let text = stdout_str(&tab);
    assert!(text.contains("chi_0"));
    assert!(text.contains("theta_1"));

    let tab_json = run(&["chartab", "--n", "2", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout_str(&tab_json)).unwrap();
    assert_eq!(v["irreducibles"].as_array().unwrap().len(), 8);
}
