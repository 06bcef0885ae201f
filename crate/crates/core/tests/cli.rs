use std::path::Path;
use std::process::{Command, Output};

fn origami(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_origami"))
        .args(args)
        .arg("--cache-dir")
        .arg(cache)
        .env("RUST_LOG", "info")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn census_prints_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = origami(dir.path(), &["census", "--degree", "5", "--mu", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("N=40"), "{}", stdout(&o));

    let o = origami(dir.path(), &["census", "--degree", "2", "--mu", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("N=0"));
}

#[test]
fn invalid_mu_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = origami(dir.path(), &["census", "--degree", "5", "--mu", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = origami(dir.path(), &["census", "--degree", "5", "--mu", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn orbits_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = origami(dir.path(), &["orbits", "--degree", "5", "--mu", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rows: Vec<(String, String)> = text
        .lines()
        .filter(|l| l.trim_start().starts_with("component "))
        .map(|l| {
            let field = |name: &str| {
                l.split_whitespace()
                    .find_map(|w| w.strip_prefix(name))
                    .unwrap()
                    .to_string()
            };
            (field("size="), field("slope="))
        })
        .collect();
    rows.sort();
    let want: Vec<(String, String)> = [("10", "9"), ("12", "9"), ("15", "28/3"), ("3", "28/3")]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    assert_eq!(rows, want);
}

#[test]
fn orbits_json_shape() {
    let dir = tempfile::tempdir().unwrap();
    let o = origami(
        dir.path(),
        &["orbits", "--degree", "3", "--mu", "2", "--format", "json"],
    );
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degree"], 3);
    assert!(v["cusp_convention"].is_string());
    for c in v["components"].as_array().unwrap() {
        for field in [
            "component_id",
            "size",
            "n",
            "m",
            "slope",
            "hyperelliptic",
            "parity",
            "cusp_count",
            "member_keys",
        ] {
            assert!(c.get(field).is_some(), "missing {field}");
        }
        assert_eq!(c["slope"], "10/1");
        assert!(c["m"].as_str().unwrap().contains('/'));
    }
}

#[test]
fn warm_cache_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["orbits", "--degree", "5", "--mu", "4", "--format", "csv"];
    let cold = origami(dir.path(), &args);
    assert!(!stderr(&cold).contains("cache hit"));
    let warm = origami(dir.path(), &args);
    assert!(stderr(&warm).contains("cache hit"), "{}", stderr(&warm));
    assert_eq!(cold.stdout, warm.stdout);
}

#[test]
fn worker_count_does_not_change_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let one = origami(
        a.path(),
        &[
            "orbits",
            "--degree",
            "6",
            "--mu",
            "2,2",
            "--workers",
            "1",
            "--format",
            "json",
        ],
    );
    let many = origami(
        b.path(),
        &[
            "orbits",
            "--degree",
            "6",
            "--mu",
            "2,2",
            "--workers",
            "8",
            "--format",
            "json",
        ],
    );
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    let file = "census-v1-d6-mu2_2.jsonl";
    assert_eq!(
        std::fs::read(a.path().join(file)).unwrap(),
        std::fs::read(b.path().join(file)).unwrap()
    );
}

#[test]
fn unusable_cache_file_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["census", "--degree", "4", "--mu", "2"];
    let first = origami(dir.path(), &args);
    let path = dir.path().join("census-v1-d4-mu2.jsonl");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    let second = origami(dir.path(), &args);
    assert!(second.status.success());
    assert!(stderr(&second).contains("unusable"));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_origami"))
        .args(["census", "--degree", "3", "--mu", "2"])
        .env("ORIGAMI_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("census-v1-d3-mu2.jsonl").exists());
}

#[test]
fn budget_failure() {
    let dir = tempfile::tempdir().unwrap();
    let o = origami(
        dir.path(),
        &["census", "--degree", "6", "--mu", "2", "--budget", "10"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("budget"));
    assert_eq!(
        std::fs::read_dir(dir.path())
            .map(|r| r.count())
            .unwrap_or(0),
        0
    );
}

#[test]
fn genus_two_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let o = origami(dir.path(), &["limits", "--mu", "2", "--dmax", "7"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("d=")).collect();
    assert_eq!(rows.len(), 5);
    for l in rows {
        assert!(l.contains("M/N=10/9 "), "{l}");
    }

    let o = origami(
        dir.path(),
        &["limits", "--mu", "2", "--dmax", "7", "--format", "csv"],
    );
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "stratum,component_label,d,N,M_num,M_den,slope_num,slope_den"
    );
    assert_eq!(lines.count(), 5);
}

#[test]
fn reference_table_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = origami(dir.path(), &["limits", "--genus", "3", "--table"]);
    assert!(o.status.success());
    let slopes: Vec<String> = stdout(&o)
        .lines()
        .filter(|l| l.starts_with("g=3"))
        .map(|l| {
            l.split_whitespace()
                .find_map(|w| w.strip_prefix("s="))
                .unwrap()
                .to_string()
        })
        .collect();
    assert_eq!(
        slopes,
        ["28/3", "9", "28/3", "44/5", "9", "98/11", "468/53"]
    );

    let o = origami(dir.path(), &["limits", "--genus", "9", "--table"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("outside table range"));

    let o = origami(dir.path(), &["table", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().count(), 104);
}

#[test]
fn table_comparison_with_estimates() {
    let dir = tempfile::tempdir().unwrap();
    let o = origami(
        dir.path(),
        &[
            "limits", "--genus", "3", "--table", "--dmax", "6", "--format", "json",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["comparison"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[0]["exact_matches"], true);
    assert_eq!(rows[0]["estimate_s"], "28/3");
    assert_eq!(rows[1]["estimate_s"], "9/1");
}

#[test]
fn classify_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = origami(
        dir.path(),
        &[
            "classify",
            "--alpha",
            "(1234)(5)",
            "--beta",
            "(15)(2)(3)(4)",
            "--format",
            "json",
        ],
    );
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["genus"], 2);
    assert_eq!(v["weight"], "5/4");
    assert_eq!(v["hyperelliptic"], true);
    assert_eq!(v["anti_involutions"][0]["total_fixed"], 6);
    assert_eq!(v["spin_parity"], 1);

    let o = origami(
        dir.path(),
        &["classify", "--alpha", "(12)", "--beta", "(34)"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("disconnected"));
}
