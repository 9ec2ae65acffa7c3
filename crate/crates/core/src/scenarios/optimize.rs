use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::VacuumConfig;
use crate::numerics::{C64, ZERO};

use super::nelder_mead::{nelder_mead, NelderMeadOptions, NelderMeadResult};
use super::{registered_configs, Family, ScenarioSpec};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeOptions {
    pub seed: u64,
    /// Random restarts, in addition to the anchored ones.
    pub restarts: usize,
    pub max_iterations: usize,
    /// Also start from every registered configuration of the family.
    pub anchor: bool,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 20,
            max_iterations: 500,
            anchor: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_config: VacuumConfig,
    pub best_fidelity: f64,
    /// Simplex iterations used by the winning restart.
    pub iterations: usize,
    pub seed: u64,
    pub restarts: usize,
    /// Index of the winning start: anchors come first, then random restarts.
    pub best_start: usize,
    pub anchors: usize,
}

/// Which slots of which amplitude vector the optimizer may move.
struct Block {
    len: usize,
    slots: Vec<usize>,
}

fn blocks(spec: &ScenarioSpec) -> Result<Vec<Block>> {
    let full = |len: usize| Block {
        len,
        slots: (0..len).collect(),
    };
    match spec.family {
        Family::BellDepolarizing | Family::GhzDepolarizing => Ok(vec![full(4), full(4)]),
        Family::BellBitphase | Family::GhzBitphase => Ok(vec![
            Block { len: 4, slots: vec![0, 1] },
            Block { len: 4, slots: vec![0, 3] },
        ]),
        Family::WMemoryless => Ok((0..spec.n).map(|_| full(2)).collect()),
        f => Err(Error::NoFreeAmplitudes(format!("{f:?}"))),
    }
}

fn project(blocks: &[Block], mut x: Vec<f64>) -> Vec<f64> {
    let mut start = 0;
    for b in blocks {
        let seg = &mut x[start..start + b.slots.len()];
        let norm = seg.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-300 {
            seg.iter_mut().for_each(|v| *v /= norm);
        } else {
            seg.iter_mut().enumerate().for_each(|(i, v)| *v = if i == 0 { 1.0 } else { 0.0 });
        }
        start += b.slots.len();
    }
    x
}

fn to_config(blocks: &[Block], x: &[f64]) -> VacuumConfig {
    let mut start = 0;
    let amplitudes = blocks
        .iter()
        .map(|b| {
            let mut v = vec![ZERO; b.len];
            for (k, &slot) in b.slots.iter().enumerate() {
                v[slot] = C64::new(x[start + k], 0.0);
            }
            start += b.slots.len();
            v
        })
        .collect();
    VacuumConfig::new(amplitudes)
}

fn from_config(blocks: &[Block], cfg: &VacuumConfig) -> Option<Vec<f64>> {
    let mut x = Vec::new();
    for (b, v) in blocks.iter().zip(&cfg.amplitudes) {
        if v.len() != b.len {
            return None;
        }
        x.extend(b.slots.iter().map(|&s| v[s].re));
    }
    (x.len() == blocks.iter().map(|b| b.slots.len()).sum::<usize>()).then_some(x)
}

/// Maximizes the fidelity of outcome 0 over real vacuum amplitudes at fixed `(p, q)`.
///
/// Each start runs a projected Nelder–Mead search; starts are evaluated in
/// parallel and the best is chosen by value, ties going to the lowest start
/// index, so the result depends only on the inputs and the seed.
pub fn optimize_amplitudes(
    spec: &ScenarioSpec,
    p: f64,
    q: f64,
    opts: OptimizeOptions,
) -> Result<OptimizationResult> {
    let blocks = blocks(spec)?;
    let at = spec.with_noise(p, q);
    // surface configuration errors before the search swallows them
    at.primary_fidelity()?;

    let dim: usize = blocks.iter().map(|b| b.slots.len()).sum();
    let mut starts: Vec<Vec<f64>> = Vec::new();
    if opts.anchor {
        let mut anchors = registered_configs(spec.family, spec.n);
        anchors.insert(0, spec.config.clone());
        for cfg in &anchors {
            if let Some(x) = from_config(&blocks, cfg) {
                let x = project(&blocks, x);
                if !starts.contains(&x) {
                    starts.push(x);
                }
            }
        }
    }
    let anchors = starts.len();
    for i in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
        let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        starts.push(project(&blocks, x));
    }

    let objective = |x: &[f64]| -> f64 {
        match at.with_config(to_config(&blocks, x)).primary_fidelity() {
            Ok(f) => -f,
            Err(_) => f64::INFINITY,
        }
    };
    let nm = NelderMeadOptions {
        max_iterations: opts.max_iterations,
        ..Default::default()
    };

    let runs: Vec<_> = starts
        .par_iter()
        .map(|x0| nelder_mead(objective, |x| project(&blocks, x), x0, nm))
        .collect();

    let (best_start, best) = runs
        .iter()
        .enumerate()
        .fold(None::<(usize, &NelderMeadResult)>, |acc, (i, r)| match acc {
            Some((_, b)) if r.value >= b.value => acc,
            _ => Some((i, r)),
        })
        .ok_or_else(|| Error::InvalidScenario("optimizer needs at least one start".into()))?;

    Ok(OptimizationResult {
        best_config: to_config(&blocks, &best.x),
        best_fidelity: -best.value,
        iterations: best.iterations,
        seed: opts.seed,
        restarts: opts.restarts,
        best_start,
        anchors,
    })
}
