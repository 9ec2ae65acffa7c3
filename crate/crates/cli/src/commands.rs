use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use superpose::dtqw::{evolve, hadamard, WalkSpec};
use superpose::metrics::VacuumConfig;
use superpose::numerics::ComplexMatrix;
use superpose::scenarios::{
    optimize_amplitudes, sweep, verify_propositions, Comparison, OptimizeOptions, SweepRecord,
};

use crate::config::{CoinSpec, RunConfig, GRID_POINTS, SWEEP_POINTS};
use crate::format::{opt_sig9, sig9};
use crate::CliError;

const SWEEP_HEADER: &str = "p,q,outcome,fidelity,oracle_fidelity,conc_pairwise,conc_one_vs_rest";

/// Writes to `out`, or standard output when no path is configured.
fn emit(out: Option<&Path>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Status lines go to stderr when the artifact itself is on stdout.
fn status(cfg: &RunConfig, line: &str) {
    if cfg.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn sweep_csv(rows: &[SweepRecord], emit_oracle: bool) -> String {
    let mut csv = String::with_capacity(64 * (rows.len() + 1));
    csv.push_str(SWEEP_HEADER);
    csv.push('\n');
    for r in rows {
        let oracle = if emit_oracle { r.oracle_fidelity } else { None };
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            sig9(r.p),
            sig9(r.q),
            r.outcome,
            sig9(r.fidelity),
            opt_sig9(oracle),
            sig9(r.conc_pairwise),
            sig9(r.conc_one_vs_rest),
        );
    }
    csv
}

fn summarize(cfg: &RunConfig, name: &str, rows: &[SweepRecord]) {
    let best = rows.iter().max_by(|a, b| a.fidelity.total_cmp(&b.fidelity));
    let worst_gap = rows
        .iter()
        .filter_map(|r| r.oracle_fidelity.map(|o| (o - r.fidelity).abs()))
        .fold(None, |acc: Option<f64>, g| Some(acc.map_or(g, |a| a.max(g))));
    let mut line = format!("{name}: {} rows", rows.len());
    if let Some(b) = best {
        let _ = write!(
            line,
            ", max fidelity {} at p={} q={} outcome {}",
            sig9(b.fidelity),
            sig9(b.p),
            sig9(b.q),
            b.outcome
        );
    }
    if let Some(g) = worst_gap {
        let _ = write!(line, ", max |fidelity - oracle| {g:.3e}");
    }
    if let Some(out) = &cfg.out {
        let _ = write!(line, " -> {}", out.display());
    }
    status(cfg, &line);
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = cfg.scenario()?;
    let ps = cfg.sweep.values(SWEEP_POINTS);
    let rows = if cfg.lock_q_to_p {
        sweep(&spec, &ps, None)?
    } else {
        let q = cfg.fixed_q.expect("validated");
        sweep(&spec, &ps, Some(&[q]))?
    };
    emit(cfg.out.as_deref(), &sweep_csv(&rows, cfg.emit_oracle))?;
    summarize(cfg, &spec.name, &rows);
    Ok(())
}

pub fn cmd_grid(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = cfg.scenario()?;
    let ps = cfg.sweep.values(GRID_POINTS);
    let qs = cfg.q_axis.as_ref().unwrap_or(&cfg.sweep).values(GRID_POINTS);
    let rows = sweep(&spec, &ps, Some(&qs))?;
    emit(cfg.out.as_deref(), &sweep_csv(&rows, cfg.emit_oracle))?;
    summarize(cfg, &spec.name, &rows);
    Ok(())
}

/// Returns whether every check passed.
pub fn cmd_verify() -> Result<bool, CliError> {
    let checks = verify_propositions()?;
    let width = checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
    let mut all = true;
    for c in &checks {
        all &= c.passed;
        let relation = match c.comparison {
            Comparison::Equal => format!("= {:.9} ± {:.0e}", c.expected, c.tolerance),
            Comparison::AtLeast => format!(">= {:.9}", c.expected),
        };
        println!(
            "{}  {:<width$}  {:.9}  {relation:<24}  {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.measured,
            c.description,
        );
        if let Some(note) = &c.note {
            println!("      {:<width$}  note: {note}", "");
        }
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} checks, {} failed", checks.len(), failed);
    Ok(all)
}

#[derive(Serialize)]
struct OptimizeReport<'a> {
    scenario: &'a str,
    p: f64,
    q: f64,
    best_fidelity: f64,
    best_config: &'a VacuumConfig,
    seed: u64,
    restarts: usize,
    iterations: usize,
}

pub fn cmd_optimize(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = cfg.scenario()?;
    let o = &cfg.optimize;
    let result = optimize_amplitudes(
        &spec,
        o.p,
        o.q,
        OptimizeOptions {
            seed: cfg.seed,
            restarts: o.restarts,
            max_iterations: o.max_iterations,
            anchor: o.anchor,
        },
    )?;
    let report = OptimizeReport {
        scenario: &spec.name,
        p: o.p,
        q: o.q,
        best_fidelity: result.best_fidelity,
        best_config: &result.best_config,
        seed: result.seed,
        restarts: result.restarts,
        iterations: result.iterations,
    };
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    emit(cfg.out.as_deref(), &json)?;
    status(
        cfg,
        &format!(
            "{}: best fidelity {} at p={} q={} (start {} of {} anchored + {} random)",
            spec.name,
            sig9(result.best_fidelity),
            sig9(o.p),
            sig9(o.q),
            result.best_start,
            result.anchors,
            result.restarts
        ),
    );
    Ok(())
}

fn coin_matrix(coin: &CoinSpec) -> Result<ComplexMatrix, CliError> {
    match coin {
        CoinSpec::Named(name) => match name.to_ascii_lowercase().as_str() {
            "hadamard" | "h" => Ok(hadamard()),
            "identity" | "i" => Ok(ComplexMatrix::identity(2)),
            "x" => Ok(ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]])),
            _ => Err(CliError::Config(format!(
                "unknown coin {name:?} (expected hadamard, identity, x or a 2x2 matrix)"
            ))),
        },
        CoinSpec::Matrix(rows) => Ok(ComplexMatrix::from_rows::<[Complex64; 2]>(rows)),
    }
}

pub fn cmd_walk(cfg: &RunConfig) -> Result<(), CliError> {
    let w = &cfg.walk;
    let start = w.start.unwrap_or(w.positions / 2);
    let spec = WalkSpec::localized(w.positions, start, w.coin_state, coin_matrix(&w.coin)?, w.steps)?;
    let dists = evolve(&spec)?;
    let mut csv = String::from("step,position,probability\n");
    for (step, dist) in dists.iter().enumerate() {
        for (pos, prob) in dist.iter().enumerate() {
            let _ = writeln!(csv, "{step},{pos},{}", sig9(*prob));
        }
    }
    emit(cfg.out.as_deref(), &csv)?;
    let last = dists.last().expect("step 0 is always present");
    status(
        cfg,
        &format!(
            "walk: {} steps on {} sites from {start}, final asymmetry {:.3e}",
            w.steps,
            w.positions,
            superpose::dtqw::asymmetry(last, start)
        ),
    );
    Ok(())
}
