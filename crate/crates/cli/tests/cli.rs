use std::path::Path;
use std::process::{Command, Output};

fn qdeconv(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdeconv"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn simulate_writes_a_run_directory() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "simulate", "--snr", "-1,2", "--trials", "20", "--bits", "50", "--seed", "4",
    ];
    let o = qdeconv(&args, dir.path());
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).starts_with(
        "snr_db,sigma,decoder,ber,std_err,trials,bits_per_trial,master_seed,analytic_ber"
    ));
    assert_eq!(stdout(&o).lines().count(), 9);
    let runs: Vec<_> = std::fs::read_dir(dir.path().join("runs"))
        .unwrap()
        .collect();
    assert_eq!(runs.len(), 1);
    let run = runs[0].as_ref().unwrap().path();
    for f in ["config.txt", "results.csv", "plot.dat"] {
        assert!(run.join(f).is_file(), "{f}");
    }
    assert!(run.file_name().unwrap().to_string_lossy().ends_with("-4"));
    qdeconv(&args, dir.path());
    assert_eq!(
        std::fs::read_dir(dir.path().join("runs")).unwrap().count(),
        2
    );
}

#[test]
fn simulate_is_reproducible_and_config_merges() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("c.txt"),
        "snr = 0,3\ntrials = 10\nbits = 40\ndecoders = one_state\nseed = 8\n",
    )
    .unwrap();
    let a = qdeconv(
        &["simulate", "--config", "c.txt", "--out", "a.csv"],
        dir.path(),
    );
    let b = qdeconv(
        &[
            "simulate",
            "--config",
            "c.txt",
            "--out",
            "b.csv",
            "--decoders",
            "one_state,two_states",
        ],
        dir.path(),
    );
    assert!(a.status.success() && b.status.success());
    let a = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert_eq!(a.lines().count(), 3);
    assert_eq!(b.lines().count(), 5);
    assert!(b.contains(a.lines().nth(1).unwrap()));
}

#[test]
fn plot_data_from_results() {
    let dir = tempfile::tempdir().unwrap();
    let o = qdeconv(
        &[
            "simulate",
            "--snr",
            "0,1,2",
            "--trials",
            "10",
            "--bits",
            "30",
            "--decoders",
            "bcjr,one_state",
            "--out",
            "r.csv",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let o = qdeconv(&["plot-data", "r.csv", "--out", "p.dat"], dir.path());
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("p.dat")).unwrap();
    let blocks: Vec<_> = text.split("\n\n").collect();
    assert_eq!(blocks.len(), 2);
    assert!(blocks.iter().all(|b| b.trim_end().lines().count() == 3));
}

#[test]
fn analyze_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let o = qdeconv(
        &["analyze", "one-state", "--sigma", "1", "--out", "phi.csv"],
        dir.path(),
    );
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("phi.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("d,phi"));
    assert_eq!(csv.lines().count(), 62);
    let o = qdeconv(
        &[
            "analyze",
            "two-states",
            "--sigma",
            "1",
            "--bins",
            "32",
            "--out",
            "grid.csv",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("grid.csv")).unwrap();
    assert_eq!(
        csv.lines().next(),
        Some("alpha_bin_low,alpha_bin_high,d,phi_mass")
    );
    assert_eq!(csv.lines().count(), 1 + 32 * 61);
    let ber: f64 = stdout(&o)
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(2)
        .unwrap()
        .parse()
        .unwrap();
    assert!((ber - 0.3377).abs() < 1e-3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qdeconv(&["frobnicate"], dir.path()).status.code(), Some(1));
    assert_eq!(
        qdeconv(&["simulate", "--decoders", "viterbi"], dir.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        qdeconv(&["plot-data", "missing.csv"], dir.path())
            .status
            .code(),
        Some(1)
    );
    let o = qdeconv(
        &["analyze", "two-states", "--sigma", "1", "--d-max", "3"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    let o = qdeconv(&["oracle-check", "--bits", "13"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(qdeconv(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn oracle_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = qdeconv(
        &["oracle-check", "--bits", "6", "--trials", "30"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("pass"));
}

#[test]
fn cber_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    let o = qdeconv(
        &[
            "cber",
            "--decoders",
            "two_states",
            "--sigma",
            "1",
            "--bits",
            "20000",
            "--input-seed",
            "1",
            "--noise-seed",
            "2",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(line.starts_with("two_states,1,20000,"));
    assert!(line.ends_with(",1,2"));
    let o = qdeconv(&["cber", "--decoders", "bcjr", "--sigma", "1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = qdeconv(
        &["compare", "--sigma", "1", "--bits", "20000", "--bins", "32"],
        dir.path(),
    );
    assert!(o.status.success());
    let rows: Vec<_> = stdout(&o).lines().skip(1).map(String::from).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| !r.ends_with(',')));
}
