use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{fid_closed_bitphase, fid_closed_depolarizing, fid_closed_w3};

use super::{Family, ScenarioSpec};

/// One scored outcome at one grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub p: f64,
    pub q: f64,
    pub outcome: usize,
    pub probability: f64,
    pub fidelity: f64,
    /// Closed-form value, where one exists for this family and outcome.
    pub oracle_fidelity: Option<f64>,
    pub conc_pairwise: f64,
    pub conc_one_vs_rest: f64,
}

/// `points` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (points - 1) as f64;
            (0..points)
                .map(|i| if i == points - 1 { stop } else { start + step * i as f64 })
                .collect()
        }
    }
}

fn check_grid(values: &[f64]) -> Result<()> {
    match values.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        Some(bad) => Err(Error::BadProbability(format!("grid value {bad}"))),
        None => Ok(()),
    }
}

fn oracle(spec: &ScenarioSpec, outcome: usize) -> Option<f64> {
    if outcome != 0 {
        return None;
    }
    let (p, q) = (spec.noise.p, spec.noise.q);
    let value = match spec.family {
        Family::BellDepolarizing => fid_closed_depolarizing(p, q, &spec.config),
        Family::BellBitphase => fid_closed_bitphase(p, q, &spec.config),
        Family::WMemoryless if spec.n == 3 => fid_closed_w3([p; 3], &spec.config),
        _ => return None,
    };
    value.ok()
}

fn evaluate_point(spec: &ScenarioSpec, p: f64, q: f64) -> Result<Vec<SweepRecord>> {
    let at = spec.with_noise(p, q);
    Ok(at
        .evaluate()?
        .into_iter()
        .map(|r| SweepRecord {
            p,
            q,
            outcome: r.outcome,
            probability: r.probability,
            fidelity: r.fidelity,
            oracle_fidelity: oracle(&at, r.outcome),
            conc_pairwise: r.conc_pairwise,
            conc_one_vs_rest: r.conc_one_vs_rest,
        })
        .collect())
}

/// Evaluates `spec` over `p_grid`, with `q` either locked to `p` (`q_grid = None`)
/// or crossed with `q_grid`.
///
/// Rows are ordered by p, then q, then outcome, regardless of how many worker
/// threads evaluate the points. Outcomes with zero probability produce no row.
pub fn sweep(spec: &ScenarioSpec, p_grid: &[f64], q_grid: Option<&[f64]>) -> Result<Vec<SweepRecord>> {
    check_grid(p_grid)?;
    let points: Vec<(f64, f64)> = match q_grid {
        None => p_grid.iter().map(|&p| (p, p)).collect(),
        Some(qs) => {
            check_grid(qs)?;
            p_grid
                .iter()
                .flat_map(|&p| qs.iter().map(move |&q| (p, q)))
                .collect()
        }
    };
    let rows = points
        .par_iter()
        .map(|&(p, q)| evaluate_point(spec, p, q))
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Full `p × q` grid.
pub fn grid(spec: &ScenarioSpec, p_grid: &[f64], q_grid: &[f64]) -> Result<Vec<SweepRecord>> {
    sweep(spec, p_grid, Some(q_grid))
}
