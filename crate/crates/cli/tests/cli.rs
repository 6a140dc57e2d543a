use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fractal_parity_cli::artifacts::{
    read_cumulative, read_difference, read_manifest, read_periods, read_report, CumulativeTable,
    DifferenceTable, PeriodTable, CUMULATIVE_CSV, DIFFERENCE_CSV, MANIFEST_JSON, PERIODS_CSV,
    REPORT_JSON, REPORT_TXT,
};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fractal-parity"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fixture_config() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/fixture.toml")
}

const SYNTHETIC_CONFIG: &str = r#"
horizon = 63
[commission]
per_share = 0.0035
[[assets]]
ticker = "SPY"
csv = "unused.csv"
expense_ratio = 0.09
[[assets]]
ticker = "TLT"
csv = "unused.csv"
expense_ratio = 0.15
[[assets]]
ticker = "IYR"
csv = "unused.csv"
expense_ratio = 0.43
"#;

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path
}

fn backtest(config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "backtest",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn missing_data_file_is_a_data_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "[[assets]]\nticker = \"SPY\"\ncsv = \"absent.csv\"\n",
    );
    let out = backtest(&cfg, &tmp.path().join("out"), &[]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr(&out);
    assert!(err.starts_with("error[data]: FileNotFound"), "{err}");
}

#[test]
fn bad_config_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "horizon = \"long\"\n");
    let out = backtest(&cfg, &tmp.path().join("out"), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[config]"));
}

#[test]
fn five_horizons_of_rows_give_four_periods() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), SYNTHETIC_CONFIG);
    let out_dir = tmp.path().join("out");
    let out = backtest(&cfg, &out_dir, &["--synthetic-rows", "315", "--seed", "4"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let periods = read_periods(&out_dir.join(PERIODS_CSV)).unwrap();
    assert_eq!(periods.rows.len(), 4);
    assert_eq!(
        periods.columns,
        [
            "fractal_biased",
            "standard_biased",
            "naive_risk_parity",
            "benchmark"
        ]
    );
    let text = fs::read_to_string(out_dir.join(REPORT_TXT)).unwrap();
    assert!(text.contains("Improvement A-B, %"));
    assert!(stdout(&out).contains("Benchmark (SPY)"));
}

#[test]
fn standard_matches_fractal_when_hurst_is_pinned() {
    let tmp = TempDir::new().unwrap();
    let pinned = format!("{SYNTHETIC_CONFIG}\n[hurst]\nh_min = 0.5\nh_max = 0.5\n");
    let cfg = write_config(tmp.path(), &pinned);
    let out_dir = tmp.path().join("out");
    let out = backtest(
        &cfg,
        &out_dir,
        &[
            "--synthetic-rows",
            "630",
            "--seed",
            "9",
            "--variant",
            "fractal_biased",
            "--variant",
            "standard_biased",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let report = read_report(&out_dir.join(REPORT_JSON)).unwrap();
    assert_eq!(report.strategies.len(), 2);
    assert_eq!(report.strategies[0].report, report.strategies[1].report);
    let periods = read_periods(&out_dir.join(PERIODS_CSV)).unwrap();
    assert!(periods.rows.iter().all(|r| r.values[0] == r.values[1]));
    let diff = read_difference(&out_dir.join(DIFFERENCE_CSV)).unwrap();
    assert!(diff.rows.iter().all(|r| r.difference == 0.0));
}

#[test]
fn fixture_run_is_deterministic_and_round_trips() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let out = backtest(&fixture_config(), dir, &[]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    for name in [
        REPORT_JSON,
        REPORT_TXT,
        PERIODS_CSV,
        CUMULATIVE_CSV,
        DIFFERENCE_CSV,
    ] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
    let (ma, mut mb) = (
        read_manifest(&a.join(MANIFEST_JSON)).unwrap(),
        read_manifest(&b.join(MANIFEST_JSON)).unwrap(),
    );
    mb.created_at = ma.created_at.clone();
    assert_eq!(ma, mb);
    assert_eq!(ma.inputs.len(), 4);
    assert!(ma.inputs.iter().all(|d| d.sha256.len() == 64));
    assert_eq!(ma.outputs.len(), 6);

    let periods_text = fs::read_to_string(a.join(PERIODS_CSV)).unwrap();
    assert_eq!(
        PeriodTable::from_reader(periods_text.as_bytes())
            .unwrap()
            .to_csv(),
        periods_text
    );
    let cum_text = fs::read_to_string(a.join(CUMULATIVE_CSV)).unwrap();
    assert_eq!(
        CumulativeTable::from_reader(cum_text.as_bytes())
            .unwrap()
            .to_csv(),
        cum_text
    );
    let diff_text = fs::read_to_string(a.join(DIFFERENCE_CSV)).unwrap();
    assert_eq!(
        DifferenceTable::from_reader(diff_text.as_bytes())
            .unwrap()
            .to_csv(),
        diff_text
    );
    let report_text = fs::read_to_string(a.join(REPORT_JSON)).unwrap();
    let report = read_report(&a.join(REPORT_JSON)).unwrap();
    assert_eq!(
        serde_json::to_string_pretty(&report).unwrap() + "\n",
        report_text
    );

    // The fixture's benchmark falls 36% in its first period.
    assert!((report.benchmark.report.protection - 64.0).abs() < 1e-9);
    assert_eq!(report.benchmark.report.beta, Some(1.0));
    let cum = read_cumulative(&a.join(CUMULATIVE_CSV)).unwrap();
    assert_eq!(cum.dates.len(), 5);
    assert_eq!(cum.values[1][3], -36.0);
}

#[test]
fn horizon_override_changes_period_count() {
    let tmp = TempDir::new().unwrap();
    let out_dir = tmp.path().join("out");
    let out = backtest(
        &fixture_config(),
        &out_dir,
        &["--horizon", "252", "--variant", "naive_risk_parity"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let periods = read_periods(&out_dir.join(PERIODS_CSV)).unwrap();
    assert_eq!(periods.rows.len(), 630 / 252 - 1);
    assert!(!out_dir.join(DIFFERENCE_CSV).exists());
}

#[test]
fn hurst_of_linear_ramp_is_one() {
    let tmp = TempDir::new().unwrap();
    let csv = tmp.path().join("ramp.csv");
    let mut text = String::from("date,adj_close\n");
    let days = fractal_parity_cli::synthetic::weekdays(300);
    for (i, d) in days.iter().enumerate() {
        text += &format!("{d},{}\n", 50.0 + 0.5 * i as f64);
    }
    fs::write(&csv, text).unwrap();
    let out = run(&["hurst", "--csv", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let s = stdout(&out);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("h,mu_index,r_squared"));
    assert!(lines.next().unwrap().starts_with("1.000000,"), "{s}");
    assert!(s.contains("delta,variation"));
}

#[test]
fn hurst_of_seeded_walk_is_near_one_half() {
    for seed in ["1", "2", "3"] {
        let out = run(&["hurst", "--synthetic-walk", "1024", "--seed", seed]);
        assert!(out.status.success());
        let s = stdout(&out);
        let h: f64 = s
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .next()
            .unwrap()
            .parse()
            .unwrap();
        assert!((0.35..=0.65).contains(&h), "seed {seed}: h = {h}");
    }
}

#[test]
fn hurst_of_five_points_is_too_short() {
    let tmp = TempDir::new().unwrap();
    let csv = tmp.path().join("short.csv");
    fs::write(
        &csv,
        "date,adj_close\n2016-01-04,100\n2016-01-05,101\n2016-01-06,99\n2016-01-07,102\n2016-01-08,103\n",
    )
    .unwrap();
    let out = run(&["hurst", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("TooShort"));
}

#[test]
fn stable_cdf_anchor_values() {
    let out = run(&[
        "stable-cdf",
        "--r",
        "0",
        "--alpha",
        "2",
        "--beta",
        "0",
        "--sigma",
        "1",
        "--mu",
        "0",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out)
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("0.500000,"));
    let out = run(&["stable-cdf", "--r", "1", "--alpha", "1"]);
    assert!(stdout(&out)
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("0.750000,"));
    let out = run(&["stable-cdf", "--r", "-1", "--alpha", "1"]);
    assert!(stdout(&out)
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("0.250000,"));
}

#[test]
fn stable_cdf_rejects_alpha_above_two() {
    let out = run(&["stable-cdf", "--r", "0", "--alpha", "2.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("alpha"));
}
