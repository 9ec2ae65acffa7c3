//! Named experiments, parameter sweeps and vacuum-amplitude optimization.

mod nelder_mead;
mod optimize;
mod registry;
mod sweep;
mod verify;

use serde::{Deserialize, Serialize};

use crate::channels::{
    bit_flip_correlated, depolarizing_correlated, memoryless_bitflip, pauli_channel_correlated,
    pauli_string, phase_flip_correlated, single_qubit_x, unitary_channel, VacuumExtendedChannel,
};
use crate::error::{Error, Result};
use crate::metrics::{
    avg_one_vs_rest_concurrence, avg_pairwise_concurrence, fidelity_pure, fidelity_up_to_phase,
    TargetKind, TargetState, VacuumConfig,
};
use crate::numerics::{DensityMatrix, ZERO};
use crate::superposition::{
    conditional_outcome, ControlState, MeasurementBasis, MeasurementOutcome, SuperpositionScenario,
};

pub use nelder_mead::{nelder_mead, NelderMeadOptions, NelderMeadResult};
pub use optimize::{optimize_amplitudes, OptimizationResult, OptimizeOptions};
pub use registry::{builtin, builtin_names, registered_configs};
pub use sweep::{grid, linspace, sweep, SweepRecord};
pub use verify::{verify_propositions, Comparison, PropositionCheck};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    IdealBell,
    IdealGhz,
    IdealW,
    BellDepolarizing,
    BellBitphase,
    GhzDepolarizing,
    GhzBitphase,
    WMemoryless,
    Custom,
}

impl Family {
    pub fn is_ideal(self) -> bool {
        matches!(self, Family::IdealBell | Family::IdealGhz | Family::IdealW)
    }
}

/// Noise strengths. `per_channel`, when present, overrides `p` for memoryless families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Noise {
    pub p: f64,
    #[serde(default)]
    pub q: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_channel: Option<Vec<f64>>,
}

impl Noise {
    pub fn symmetric(p: f64) -> Self {
        Self {
            p,
            q: p,
            per_channel: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomePolicy {
    /// Only the outcome the amplitudes were tuned for (`|+⟩` or `|0̃⟩`).
    #[default]
    PlusOnly,
    AllOutcomes,
}

/// A noise parameter in a custom channel: a number or the name of a swept variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Value(f64),
    Symbol(String),
}

impl Param {
    fn resolve(&self, noise: &Noise) -> Result<f64> {
        match self {
            Param::Value(x) => Ok(*x),
            Param::Symbol(s) if s == "p" => Ok(noise.p),
            Param::Symbol(s) if s == "q" => Ok(noise.q),
            Param::Symbol(s) => Err(Error::InvalidScenario(format!(
                "unknown noise symbol {s:?} (expected \"p\" or \"q\")"
            ))),
        }
    }
}

/// One branch of a custom scenario. Its vacuum amplitudes are taken from the
/// matching entry of the scenario's [`VacuumConfig`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelSpec {
    /// Correlated Pauli channel with fixed weights over I, X, Y, Z.
    Pauli { weights: [f64; 4] },
    Depolarizing { p: Param },
    BitFlip { p: Param },
    PhaseFlip { p: Param },
    MemorylessBitflip { qubit: usize, p: Param },
    /// Unitary given as a Pauli string such as `"XIZ"`.
    Unitary { paulis: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: String,
    pub family: Family,
    pub n: usize,
    pub noise: Noise,
    pub config: VacuumConfig,
    pub target: TargetKind,
    #[serde(default)]
    pub outcome_policy: OutcomePolicy,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub channels: Vec<ChannelSpec>,
}

/// Figures of merit for one control outcome.
#[derive(Clone, Debug)]
pub struct OutcomeReport {
    pub outcome: usize,
    pub probability: f64,
    pub fidelity: f64,
    pub conc_pairwise: f64,
    pub conc_one_vs_rest: f64,
    pub post_state: DensityMatrix,
}

impl ScenarioSpec {
    pub fn with_noise(&self, p: f64, q: f64) -> Self {
        let mut s = self.clone();
        s.noise = Noise {
            p,
            q,
            per_channel: None,
        };
        s
    }

    pub fn with_config(&self, config: VacuumConfig) -> Self {
        let mut s = self.clone();
        s.config = config;
        s
    }

    fn channel_noise(&self, i: usize) -> f64 {
        self.noise
            .per_channel
            .as_ref()
            .and_then(|v| v.get(i).copied())
            .unwrap_or(self.noise.p)
    }

    fn check_shape(&self) -> Result<()> {
        let need_n = match self.family {
            Family::IdealBell | Family::BellDepolarizing | Family::BellBitphase => Some(2),
            _ => None,
        };
        if let Some(n) = need_n {
            if self.n != n {
                return Err(Error::InvalidScenario(format!(
                    "{:?} requires n = {n}, got {}",
                    self.family, self.n
                )));
            }
        }
        if self.n < 2 && self.family != Family::Custom {
            return Err(Error::InvalidScenario(format!("n must be at least 2, got {}", self.n)));
        }
        if self.n >= 12 {
            return Err(Error::TooLarge(1 << self.n.min(usize::BITS as usize - 1)));
        }
        if let Some(v) = &self.noise.per_channel {
            if v.len() != self.n {
                return Err(Error::InvalidScenario(format!(
                    "{} per-channel probabilities for {} channels",
                    v.len(),
                    self.n
                )));
            }
        }
        Ok(())
    }

    /// Amplitudes of a bit/phase-flip pair must vanish outside slots {I, X} and {I, Z}.
    fn bitphase_amplitudes(&self) -> Result<([crate::numerics::C64; 2], [crate::numerics::C64; 2])> {
        let a = self.config.fixed::<4>(0)?;
        let b = self.config.fixed::<4>(1)?;
        if a[2] != ZERO || a[3] != ZERO || b[1] != ZERO || b[2] != ZERO {
            return Err(Error::InvalidScenario(
                "bit-flip amplitudes live in slots I, X and phase-flip amplitudes in slots I, Z"
                    .into(),
            ));
        }
        Ok(([a[0], a[1]], [b[0], b[3]]))
    }

    pub fn build_channels(&self) -> Result<Vec<VacuumExtendedChannel>> {
        self.check_shape()?;
        let n = self.n;
        let (p, q) = (self.noise.p, self.noise.q);
        match self.family {
            Family::IdealBell | Family::IdealGhz => Ok(vec![
                unitary_channel(pauli_string(&"X".repeat(n))?)?,
                unitary_channel(pauli_string(&"Z".repeat(n))?)?,
            ]),
            Family::IdealW => (0..n)
                .map(|l| unitary_channel(single_qubit_x(l, n)?))
                .collect(),
            Family::BellDepolarizing | Family::GhzDepolarizing => Ok(vec![
                depolarizing_correlated(p, n, self.config.fixed(0)?)?,
                depolarizing_correlated(q, n, self.config.fixed(1)?)?,
            ]),
            Family::BellBitphase | Family::GhzBitphase => {
                let (a, b) = self.bitphase_amplitudes()?;
                Ok(vec![bit_flip_correlated(p, n, a)?, phase_flip_correlated(q, n, b)?])
            }
            Family::WMemoryless => (0..n)
                .map(|i| memoryless_bitflip(i, n, self.channel_noise(i), self.config.fixed(i)?))
                .collect(),
            Family::Custom => {
                if self.channels.len() < 2 {
                    return Err(Error::InvalidScenario(
                        "custom scenarios need at least two channels".into(),
                    ));
                }
                self.channels
                    .iter()
                    .enumerate()
                    .map(|(k, c)| self.build_custom(k, c))
                    .collect()
            }
        }
    }

    fn build_custom(&self, k: usize, spec: &ChannelSpec) -> Result<VacuumExtendedChannel> {
        let n = self.n;
        let noise = &self.noise;
        match spec {
            ChannelSpec::Pauli { weights } => {
                pauli_channel_correlated(*weights, n, self.config.fixed(k)?)
            }
            ChannelSpec::Depolarizing { p } => {
                depolarizing_correlated(p.resolve(noise)?, n, self.config.fixed(k)?)
            }
            ChannelSpec::BitFlip { p } => {
                bit_flip_correlated(p.resolve(noise)?, n, self.config.fixed(k)?)
            }
            ChannelSpec::PhaseFlip { p } => {
                phase_flip_correlated(p.resolve(noise)?, n, self.config.fixed(k)?)
            }
            ChannelSpec::MemorylessBitflip { qubit, p } => {
                memoryless_bitflip(*qubit, n, p.resolve(noise)?, self.config.fixed(k)?)
            }
            ChannelSpec::Unitary { paulis } => {
                if paulis.chars().count() != n {
                    return Err(Error::InvalidScenario(format!(
                        "Pauli string {paulis:?} does not act on {n} qubits"
                    )));
                }
                let ch = unitary_channel(pauli_string(paulis)?)?;
                let amps = self.config.amplitudes.get(k).cloned().unwrap_or(vec![crate::numerics::ONE]);
                ch.with_amplitudes(amps)
            }
        }
    }

    /// Input `|0…0⟩`, control uniform over branches, readout in `{|±⟩}` or the Fourier basis.
    pub fn build(&self) -> Result<SuperpositionScenario> {
        let channels = self.build_channels()?;
        let branches = channels.len();
        let basis = if branches == 2 {
            MeasurementBasis::plus_minus()
        } else {
            MeasurementBasis::fourier(branches)
        };
        SuperpositionScenario::new(
            channels,
            DensityMatrix::zero_qubits(self.n),
            ControlState::uniform(branches),
            basis,
        )
    }

    /// Outcome indices reported under the spec's policy.
    pub fn reported_outcomes(&self, branches: usize) -> Vec<usize> {
        match self.outcome_policy {
            OutcomePolicy::PlusOnly => vec![0],
            OutcomePolicy::AllOutcomes => (0..branches).collect(),
        }
    }

    /// Fidelity of the post-state of outcome `k` with the state that outcome should herald.
    ///
    /// Bell targets alternate sign between the two outcomes, GHZ targets are
    /// scored up to the relative phase, and W targets pick up the Fourier phase
    /// of the outcome.
    pub fn outcome_fidelity(&self, k: usize, rho: &DensityMatrix) -> Result<f64> {
        match self.target {
            TargetKind::BellPhiPlus | TargetKind::BellPhiMinus => {
                let plus = (self.target == TargetKind::BellPhiPlus) == k.is_multiple_of(2);
                let t = if plus {
                    TargetState::bell_phi_plus()
                } else {
                    TargetState::bell_phi_minus()
                };
                fidelity_pure(rho, &t)
            }
            TargetKind::Ghz { n, .. } => Ok(fidelity_up_to_phase(rho, n)?.0),
            TargetKind::W { n, k: k0 } => fidelity_pure(rho, &TargetState::w_phased(n, (k0 + k) % n)?),
        }
    }

    /// Runs the scenario and scores each reported outcome; zero-probability outcomes are skipped.
    pub fn evaluate(&self) -> Result<Vec<OutcomeReport>> {
        let scenario = self.build()?;
        self.reported_outcomes(scenario.branches())
            .into_iter()
            .filter_map(|k| match conditional_outcome(&scenario, k) {
                Ok(MeasurementOutcome {
                    post_state: None, ..
                }) => None,
                Ok(MeasurementOutcome {
                    probability,
                    post_state: Some(rho),
                    ..
                }) => Some(self.report(k, probability, rho)),
                Err(e) => Some(Err(e)),
            })
            .collect()
    }

    fn report(&self, k: usize, probability: f64, rho: DensityMatrix) -> Result<OutcomeReport> {
        Ok(OutcomeReport {
            outcome: k,
            probability,
            fidelity: self.outcome_fidelity(k, &rho)?,
            conc_pairwise: avg_pairwise_concurrence(&rho)?,
            conc_one_vs_rest: avg_one_vs_rest_concurrence(&rho)?,
            post_state: rho,
        })
    }

    /// Fidelity of outcome 0 only; the optimizer's objective.
    pub fn primary_fidelity(&self) -> Result<f64> {
        let scenario = self.build()?;
        match conditional_outcome(&scenario, 0)?.post_state {
            Some(rho) => self.outcome_fidelity(0, &rho),
            None => Ok(0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superposition::run;

    #[test]
    fn evaluate_matches_joint_state_path() {
        for name in ["prop4_p05", "fig4b_green", "fig8_blue", "ideal_w_n4", "prop5_p1"] {
            let mut spec = builtin(name).unwrap().with_noise(0.37, 0.37);
            spec.outcome_policy = OutcomePolicy::AllOutcomes;
            let reports = spec.evaluate().unwrap();
            let joint = run(&spec.build().unwrap()).unwrap();
            for r in &reports {
                let o = &joint[r.outcome];
                assert!((o.probability - r.probability).abs() < 1e-12, "{name}");
                let f = spec.outcome_fidelity(r.outcome, o.post_state.as_ref().unwrap()).unwrap();
                assert!((f - r.fidelity).abs() < 1e-10, "{name}");
            }
        }
    }

    #[test]
    fn bitphase_rejects_amplitude_in_unused_slot() {
        let mut spec = builtin("cor1_p1").unwrap();
        spec.config = VacuumConfig::pair(&[0.0, 0.6, 0.8, 0.0], &[0.0, 0.0, 0.0, 1.0]);
        assert!(matches!(spec.build(), Err(Error::InvalidScenario(_))));
    }

    #[test]
    fn bell_family_requires_two_qubits() {
        let mut spec = builtin("prop4_p1").unwrap();
        spec.n = 3;
        assert!(spec.build().is_err());
    }

    #[test]
    fn custom_scenario_matches_builtin() {
        let json = r#"{
            "name": "my_bitphase",
            "family": "custom",
            "n": 2,
            "noise": {"p": 0.5, "q": 0.5},
            "config": {"amplitudes": [[-0.7071067811865476, 0.7071067811865476], [0.7071067811865476, 0.7071067811865476]]},
            "target": "bell_phi_plus",
            "channels": [{"kind": "bit_flip", "p": "p"}, {"kind": "phase_flip", "p": "q"}]
        }"#;
        let custom: ScenarioSpec = serde_json::from_str(json).unwrap();
        let a = custom.evaluate().unwrap();
        let b = builtin("cor1_p05").unwrap().evaluate().unwrap();
        assert!((a[0].fidelity - b[0].fidelity).abs() < 1e-12);
        assert!((a[0].fidelity - 1.0).abs() < 1e-9);
    }

    #[test]
    fn custom_symbol_errors() {
        let mut spec = builtin("cor1_p05").unwrap();
        spec.family = Family::Custom;
        spec.config = VacuumConfig::pair(&[1.0, 0.0], &[1.0, 0.0]);
        spec.channels = vec![
            ChannelSpec::BitFlip { p: Param::Symbol("r".into()) },
            ChannelSpec::PhaseFlip { p: Param::Value(0.2) },
        ];
        assert!(matches!(spec.build(), Err(Error::InvalidScenario(_))));
        spec.channels.truncate(1);
        assert!(spec.build().is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        for name in builtin_names() {
            let spec = builtin(name).unwrap();
            let json = serde_json::to_string(&spec).unwrap();
            let back: ScenarioSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(back, spec, "{name}");
        }
    }
}
