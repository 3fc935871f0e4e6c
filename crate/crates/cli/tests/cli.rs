use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gridstat::adf::{adf_test, AdfConfig};
use gridstat::dataset::{extract_series, load_csv};
use gridstat::series::{drop_undefined_prefix, resample, Horizon, Market, Variable};
use gridstat::transforms::difference;

fn gridstat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridstat"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(dir: &Path, days: usize, kind: &str) -> PathBuf {
    let path = dir.join(format!("{kind}-{days}.csv"));
    let o = gridstat(&[
        "synth",
        "--kind",
        kind,
        "--n",
        &days.to_string(),
        "--seed",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(gridstat(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(gridstat(&[]).status.code(), Some(2));
    let o = gridstat(&["report", "x.csv", "--format", "xml"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let dir = tempfile::tempdir().unwrap();
    let csv = fixture(dir.path(), 60, "ar1");
    let o = gridstat(&[
        "adf",
        csv.to_str().unwrap(),
        "--zone",
        "Boston",
        "--transform",
        "cube-root",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_lists_defaults() {
    let o = gridstat(&["report", "--help"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for needle in [
        "[default: daily]",
        "[default: md]",
        "[default: 0.05]",
        "[default: 30]",
        "[default: standard]",
    ] {
        assert!(text.contains(needle), "missing {needle} in\n{text}");
    }
}

#[test]
fn data_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.csv");
    assert_eq!(
        gridstat(&["validate", missing.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );

    let gap = dir.path().join("gap.csv");
    std::fs::write(
        &gap,
        "timestamp,zone,da_demand,da_price,rt_demand,rt_price\n\
         2016-01-01T00:00:00Z,Boston,1,1,1,1\n\
         2016-01-01T05:00:00Z,Boston,1,1,1,1\n",
    )
    .unwrap();
    let o = gridstat(&["validate", gap.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("gap: Boston missing 4 hour(s) from 2016-01-01T01:00:00Z"));

    let csv = fixture(dir.path(), 60, "ar1");
    let o = gridstat(&["validate", csv.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("ok\n"));
    assert_eq!(
        gridstat(&["adf", csv.to_str().unwrap(), "--zone", "Atlantis"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn adf_diff1_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let csv = fixture(dir.path(), 400, "rw");
    let o = gridstat(&[
        "adf",
        csv.to_str().unwrap(),
        "--zone",
        "Portland",
        "--market",
        "rt",
        "--variable",
        "price",
        "--transform",
        "diff1",
        "--json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let (d, _) = load_csv(&csv).unwrap();
    let s = extract_series(&d, "Portland", Variable::Price, Market::RealTime).unwrap();
    let s = resample(&s, Horizon::Daily).unwrap();
    let s = drop_undefined_prefix(&difference(&s, 1).unwrap()).unwrap();
    let r = adf_test(&s, &AdfConfig::default()).unwrap();
    assert_eq!(
        stdout(&o),
        format!("{}\n", serde_json::to_string_pretty(&r).unwrap())
    );
}

#[test]
fn report_has_nine_tables_and_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let csv = fixture(dir.path(), 1797, "ar1");
    let csv = csv.to_str().unwrap();

    let md = dir.path().join("md");
    let o = gridstat(&[
        "report",
        csv,
        "--format",
        "md",
        "--out",
        md.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(md.join("report.md")).unwrap();
    let titles: Vec<&str> = text.lines().filter(|l| l.starts_with("## ")).collect();
    assert_eq!(titles.len(), 9);
    assert_eq!(titles[0], "## ISONE CA DATA");

    let runs: Vec<Vec<u8>> = ["1", "4", "1"]
        .iter()
        .map(|threads| {
            let o = gridstat(&["report", csv, "--format", "csv", "--threads", threads]);
            assert!(o.status.success());
            o.stdout
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
    // Header plus 9 zones × 28 cells, none skipped on positive data.
    assert_eq!(
        String::from_utf8_lossy(&runs[0]).lines().count(),
        1 + 9 * 28
    );
}

#[test]
fn synth_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = std::fs::read(fixture(dir.path(), 10, "trend")).unwrap();
    let b_dir = tempfile::tempdir().unwrap();
    let b = std::fs::read(fixture(b_dir.path(), 10, "trend")).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        String::from_utf8(a).unwrap().lines().count(),
        1 + 9 * 10 * 24
    );
}

#[test]
fn plot_data_and_anomaly_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = fixture(dir.path(), 120, "ar1");
    let csv = csv.to_str().unwrap();

    let out = dir.path().join("plot.csv");
    let o = gridstat(&[
        "plot-data",
        csv,
        "--zone",
        "Concord",
        "--window",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "time,value,ma,ewma,mstd");
    assert_eq!(lines.len(), 121);
    assert!(lines[1].starts_with("2016-01-01T00:00:00Z,"));
    // Warm-up: MA and Mstd are empty, EWMA starts at the first value.
    let first: Vec<&str> = lines[1].split(',').collect();
    assert!(first[2].is_empty() && first[4].is_empty(), "{}", lines[1]);
    assert_eq!(first[3], first[1]);

    let o = gridstat(&["anomaly", csv, "--zone", "Concord", "--threshold", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("timestamp,zone,series_label,zscore,threshold\n"));
    for line in text.lines().skip(1) {
        let z: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!(z.abs() > 3.0);
    }
}
