use std::path::Path;
use std::process::{Command, Output};

use superpose::metrics::fid_closed_bitphase;
use superpose::scenarios::builtin;

fn superpose(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superpose"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Rows of a CSV as (header-keyed) string vectors.
fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

fn value_at(text: &str, p: f64, name: &str) -> f64 {
    let (header, rows) = csv(text);
    let (pc, oc, vc) = (column(&header, "p"), column(&header, "outcome"), column(&header, name));
    let row = rows
        .iter()
        .find(|r| r[oc] == "0" && (r[pc].parse::<f64>().unwrap() - p).abs() < 1e-9)
        .unwrap_or_else(|| panic!("no row at p={p}"));
    row[vc].parse().unwrap()
}

fn sweep_csv(scenario: &str, points: &str) -> String {
    let o = superpose(&["sweep", "--scenario", scenario, "--points", points]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn sweep_header_and_reference_points() {
    let red = sweep_csv("fig4a_red", "101");
    assert!(red.starts_with("p,q,outcome,fidelity,oracle_fidelity,conc_pairwise,conc_one_vs_rest\n"));
    assert_eq!(red.lines().count(), 102);
    assert!((value_at(&red, 1.0, "fidelity") - 1.0).abs() < 1e-8);

    let blue = sweep_csv("fig4b_blue", "101");
    assert!((value_at(&blue, 0.5, "fidelity") - 1.0).abs() < 1e-8);

    for name in ["fig8_red", "fig8_green", "fig8_blue"] {
        let w = sweep_csv(name, "11");
        assert!((value_at(&w, 1.0, "conc_one_vs_rest") - 0.942809).abs() < 1e-6, "{name}");
    }
}

#[test]
fn numbers_have_nine_significant_digits() {
    let (header, rows) = csv(&sweep_csv("fig4a_red", "3"));
    let f = column(&header, "fidelity");
    // 1/√2 at p = 0
    assert_eq!(rows[0][f], "0.707106781");
    assert_eq!(rows[2][f], "1.00000000");
}

#[test]
fn sweep_output_is_byte_identical_across_runs_and_threads() {
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_superpose"))
            .args(["sweep", "--scenario", "fig8_green"])
            .env("THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success());
        o.stdout
    };
    let one = run("1");
    assert_eq!(one, run("1"));
    assert_eq!(one, run("4"));
}

#[test]
fn out_flag_writes_file_and_summarizes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("red.csv");
    let o = superpose(&["sweep", "--scenario", "fig4a_red", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("fig4a_red: 101 rows"));
    let body = std::fs::read_to_string(&path).unwrap();
    assert_eq!(body, sweep_csv("fig4a_red", "101"));
}

#[test]
fn fixed_q_and_single_p() {
    let o = superpose(&["sweep", "--scenario", "cor1_p05", "--p", "0.5", "--q", "0.5"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!((value_at(&text, 0.5, "fidelity") - 1.0).abs() < 1e-8);
}

#[test]
fn grid_defaults_to_51_by_51() {
    let o = superpose(&["grid", "--scenario", "bell_bitphase"]);
    assert!(o.status.success());
    let (header, rows) = csv(&stdout(&o));
    assert_eq!(rows.len(), 51 * 51);
    let (p, q) = (column(&header, "p"), column(&header, "q"));
    assert_eq!((rows[1][p].as_str(), rows[1][q].as_str()), ("0", "0.0200000000"));
    assert_eq!(rows[51][p], "0.0200000000");
}

#[test]
fn verify_passes_and_reports_notes() {
    let o = superpose(&["verify"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let prop4 = text.lines().find(|l| l.contains("prop4.p1")).unwrap();
    assert!(prop4.starts_with("PASS") && prop4.contains("1.000000000"));
    assert!(text.contains("not normalized"));
    assert!(!text.contains("FAIL"));
}

fn optimize(scenario: &str, p: &str) -> serde_json::Value {
    let o = superpose(&["optimize", "--scenario", scenario, "--p", p, "--q", p, "--seed", "7"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn optimize_reaches_unit_fidelity_regimes() {
    let dep = optimize("bell_depolarizing", "1");
    for key in ["best_fidelity", "best_config", "seed", "restarts", "iterations"] {
        assert!(dep.get(key).is_some(), "missing {key}");
    }
    assert!(dep["best_fidelity"].as_f64().unwrap() >= 0.999999);
    assert_eq!(dep["seed"], 7);

    let floor = fid_closed_bitphase(0.3, 0.3, &builtin("cor1_p05").unwrap().config).unwrap();
    let bp = optimize("bell_bitphase", "0.3");
    assert!(bp["best_fidelity"].as_f64().unwrap() >= floor - 1e-12);

    let w = optimize("w_memoryless", "1");
    assert!(w["best_fidelity"].as_f64().unwrap() >= 0.999999);
    for channel in w["best_config"]["amplitudes"].as_array().unwrap() {
        let alpha0 = &channel[0];
        let magnitude = match alpha0 {
            serde_json::Value::Array(z) => z[0].as_f64().unwrap().hypot(z[1].as_f64().unwrap()),
            v => v.as_f64().unwrap().abs(),
        };
        assert!(magnitude < 1e-3, "{alpha0}");
    }
}

#[test]
fn optimize_is_deterministic() {
    assert_eq!(optimize("bell_bitphase", "0.7"), optimize("bell_bitphase", "0.7"));
}

fn walk(args: &[&str]) -> Vec<Vec<f64>> {
    let mut all = vec!["walk"];
    all.extend_from_slice(args);
    let o = superpose(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv(&stdout(&o));
    assert_eq!(header, ["step", "position", "probability"]);
    let mut steps: Vec<Vec<f64>> = Vec::new();
    for r in rows {
        let (s, pos): (usize, usize) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        if steps.len() <= s {
            steps.push(Vec::new());
        }
        assert_eq!(steps[s].len(), pos);
        steps[s].push(r[2].parse().unwrap());
    }
    steps
}

#[test]
fn hadamard_walk_is_symmetric_about_start() {
    let steps = walk(&["--steps", "20", "--positions", "41"]);
    assert_eq!(steps.len(), 21);
    let last = &steps[20];
    for d in 0..=20 {
        assert!((last[20 + d] - last[20 - d]).abs() < 1e-8);
    }
}

#[test]
fn identity_coin_marches_right_and_zero_steps_echo() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("walk.json");
    std::fs::write(
        &cfg,
        r#"{"walk": {"positions": 6, "start": 0, "steps": 3, "coin": "identity", "coin_state": [[1, 0], [0, 0]]}}"#,
    )
    .unwrap();
    let steps = walk(&["--config", cfg.to_str().unwrap()]);
    for (s, dist) in steps.iter().enumerate() {
        let expected: Vec<f64> = (0..6).map(|i| if i == s { 1.0 } else { 0.0 }).collect();
        assert_eq!(dist, &expected);
    }
    let echo = walk(&["--config", cfg.to_str().unwrap(), "--steps", "0"]);
    assert_eq!(echo, vec![vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]]);
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "broken.json", "{ not json");
    let o = superpose(&["sweep", "--config", &broken]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("config error"));

    let range = write(dir.path(), "range.json", r#"{"sweep": {"start": 0, "stop": 2}}"#);
    assert_eq!(superpose(&["sweep", "--config", &range]).status.code(), Some(2));
    assert_eq!(superpose(&["sweep", "--points", "0"]).status.code(), Some(2));
    assert_eq!(superpose(&["sweep", "--bogus"]).status.code(), Some(2));
    assert_eq!(superpose(&["walk", "--config", &broken]).status.code(), Some(2));

    let o = superpose(&["sweep", "--scenario", "no_such_scenario"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("scenario error"));
    assert_eq!(superpose(&["optimize", "--scenario", "ideal_bell"]).status.code(), Some(3));
}

#[test]
fn dumped_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--scenario", "fig6a_blue", "--points", "21", "--seed", "3"];
    let mut dump_args = vec!["sweep", "--dump-config"];
    dump_args.extend_from_slice(&args);
    let dumped = superpose(&dump_args);
    assert!(dumped.status.success());
    let cfg = write(dir.path(), "dumped.json", &stdout(&dumped));

    let mut direct_args = vec!["sweep"];
    direct_args.extend_from_slice(&args);
    let direct = superpose(&direct_args);
    let replay = superpose(&["sweep", "--config", &cfg]);
    assert_eq!(direct.stdout, replay.stdout);

    // and the dump of the replay is the same config
    let again = superpose(&["sweep", "--config", &cfg, "--dump-config"]);
    assert_eq!(again.stdout, dumped.stdout);
}

#[test]
fn inline_scenario_in_config() {
    let dir = tempfile::tempdir().unwrap();
    let spec = serde_json::to_string(&builtin("cor1_p05").unwrap()).unwrap();
    let cfg = write(
        dir.path(),
        "inline.json",
        &format!(r#"{{"scenario": {spec}, "sweep": {{"points": 11}}}}"#),
    );
    let o = superpose(&["sweep", "--config", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 12);
    assert!((value_at(&text, 0.5, "fidelity") - 1.0).abs() < 1e-8);
}
