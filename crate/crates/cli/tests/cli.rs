use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use colearn_core::harness::{parse_results, RESULT_HEADER};
use colearn_core::instances::read_instance;

fn colearn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_colearn"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = colearn(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// 40 rows on two features; the label is 1 above the diagonal.
fn write_dataset(p: &Path) {
    let mut text = String::from("f0,f1,class\n");
    for i in 0..40 {
        let (x, y) = ((i * 7 % 40) as f64 / 4.0, (i * 13 % 40) as f64 / 4.0);
        let label = if y > x { "pos" } else { "neg" };
        text.push_str(&format!("{x},{y},{label}\n"));
    }
    fs::write(p, text).unwrap();
}

#[test]
fn run_prints_one_row_per_algorithm_and_epsilon() {
    let out = ok(&[
        "run",
        "--generator",
        "psi",
        "--k",
        "4",
        "--d",
        "2",
        "--algo",
        "naive,mweights",
        "--epsilon",
        "0.1,0.2",
        "--runs",
        "3",
    ]);
    let header = out.lines().next().unwrap();
    assert_eq!(header, RESULT_HEADER.join(","));
    let rows = parse_results(&out).unwrap();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        let (l, t) = (r.learning_samples.unwrap(), r.test_samples.unwrap());
        assert_eq!(r.total_samples, Some(l + t));
        assert_eq!(r.budget, Some(2));
    }
}

#[test]
fn run_output_files_repeat_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("r{i}.csv"));
            let diag = dir.path().join(format!("d{i}.csv"));
            ok(&[
                "run",
                "--generator",
                "class-dup",
                "--k",
                "6",
                "--outlier",
                "4",
                "--shared",
                "5",
                "--algo",
                "basicmw",
                "--runs",
                "4",
                "--seed",
                "21",
                "--budget",
                "7",
                "--out",
                path(&out),
                "--diagnostics",
                path(&diag),
            ]);
            [fs::read(out).unwrap(), fs::read(diag).unwrap()].concat()
        })
        .collect();
    assert_eq!(files[0], files[1]);
}

#[test]
fn diagnostics_csv_has_one_line_per_round() {
    let dir = tempfile::tempdir().unwrap();
    let diag = dir.path().join("diag.csv");
    ok(&[
        "run",
        "--generator",
        "psi",
        "--k",
        "8",
        "--d",
        "2",
        "--algo",
        "mweights",
        "--rounds",
        "5",
        "--runs",
        "2",
        "--test-mode",
        "exact",
        "--diagnostics",
        path(&diag),
    ]);
    let text = fs::read_to_string(diag).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "algorithm,epsilon,run,t,W,ln_W,Q,chi,psi_count"
    );
    assert_eq!(lines.count(), 10);
}

#[test]
fn generated_instance_files_feed_run() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("psi.inst");
    ok(&[
        "gen-instance",
        "--generator",
        "psi",
        "--k",
        "6",
        "--d",
        "3",
        "--epsilon",
        "0.05",
        "--seed",
        "2",
        "--out",
        path(&file),
    ]);
    let (instance, meta) = read_instance(&file).unwrap();
    assert_eq!(instance.k(), 6);
    assert_eq!(meta.generator, "psi");
    assert!(meta.permutation.is_some());
    let rows = parse_results(&ok(&["run", "--instance", path(&file), "--runs", "2"])).unwrap();
    assert_eq!(rows[0].instance, instance.id);
}

#[test]
fn partitions_round_trip_through_instance_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("data.csv");
    write_dataset(&csv);
    for strategy in ["random", "class-dup", "feature-threshold", "feature-grid"] {
        let inst = dir.path().join(format!("{strategy}.inst"));
        ok(&[
            "partition",
            "--dataset",
            path(&csv),
            "--partition",
            strategy,
            "--k",
            "4",
            "--seed",
            "3",
            "--out",
            path(&inst),
        ]);
        let (instance, meta) = read_instance(&inst).unwrap();
        assert_eq!(instance.k(), 4, "{strategy}");
        assert_eq!(meta.generator, format!("partition-{strategy}"));
        let rows = parse_results(&ok(&[
            "run",
            "--instance",
            path(&inst),
            "--budget",
            "20",
            "--algo",
            "naive,mweights",
            "--epsilon",
            "0.3",
            "--runs",
            "2",
        ]))
        .unwrap();
        assert_eq!(rows.len(), 2);
    }
}

#[test]
fn datasets_run_directly_but_need_a_budget() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("data.csv");
    write_dataset(&csv);
    let base = ["run", "--dataset", path(&csv), "--k", "3", "--runs", "2"];
    assert!(!colearn(&base).status.success());
    let rows = parse_results(&ok(&[&base[..], &["--budget", "15"]].concat())).unwrap();
    assert!(rows[0].instance.starts_with("data-"));
}

#[test]
fn command_line_flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("exp.conf");
    fs::write(
        &conf,
        "# psi search\ngenerator = psi\nk = 4\nd = 2\nseed = 9\nruns = 2\nepsilon = 0.3\n",
    )
    .unwrap();
    let rows = parse_results(&ok(&["run", "--config", path(&conf), "--seed", "4"])).unwrap();
    assert_eq!(rows[0].seed, 4);
    assert_eq!(rows[0].epsilon, 0.3);
}

#[test]
fn exhausted_ladders_report_not_found() {
    let out = ok(&[
        "budget-search",
        "--generator",
        "psi",
        "--k",
        "8",
        "--d",
        "2",
        "--algo",
        "naive",
        "--epsilon",
        "0.01",
        "--runs",
        "10",
        "--ladder-max",
        "2",
    ]);
    let line = out.lines().nth(1).unwrap();
    assert!(line.contains(",not-found,"), "{line}");
}

#[test]
fn conflicting_or_missing_sources_are_rejected() {
    assert!(!colearn(&["run", "--runs", "1"]).status.success());
    let both = colearn(&[
        "run",
        "--generator",
        "psi",
        "--k",
        "2",
        "--d",
        "1",
        "--instance",
        "x.inst",
    ]);
    assert!(!both.status.success());
    assert!(String::from_utf8_lossy(&both.stderr).contains("exactly one"));
    assert!(
        !colearn(&["run", "--generator", "psi", "--k", "3", "--d", "2"])
            .status
            .success()
    );
}
