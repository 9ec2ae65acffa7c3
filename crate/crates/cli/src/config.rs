use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use superpose::scenarios::{builtin, OutcomePolicy, ScenarioSpec};

use crate::CliError;

pub const SWEEP_POINTS: usize = 101;
pub const GRID_POINTS: usize = 51;

/// Everything a run needs. Every field has a default so a config file may be
/// partial, and `--dump-config` prints the fully resolved form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioRef,
    pub sweep: Axis,
    /// Second axis for `grid`; defaults to the same range as `sweep`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_axis: Option<Axis>,
    /// When false, `sweep` holds q at `fixed_q` instead of tying it to p.
    pub lock_q_to_p: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub emit_oracle: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome_policy: Option<OutcomePolicy>,
    pub optimize: OptimizeConfig,
    pub walk: WalkConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioRef::Builtin("prop4_p1".into()),
            sweep: Axis::default(),
            q_axis: None,
            lock_q_to_p: true,
            fixed_q: None,
            out: None,
            seed: 0,
            emit_oracle: true,
            outcome_policy: None,
            optimize: OptimizeConfig::default(),
            walk: WalkConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScenarioRef {
    Builtin(String),
    Inline(Box<ScenarioSpec>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    /// Unset means the command's default density.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

impl Default for Axis {
    fn default() -> Self {
        Self {
            start: 0.0,
            stop: 1.0,
            points: None,
        }
    }
}

impl Axis {
    pub fn values(&self, default_points: usize) -> Vec<f64> {
        superpose::scenarios::linspace(self.start, self.stop, self.points.unwrap_or(default_points))
    }

    fn validate(&self, what: &str) -> Result<(), CliError> {
        for x in [self.start, self.stop] {
            if !(0.0..=1.0).contains(&x) {
                return Err(CliError::Config(format!("{what} bound {x} outside [0, 1]")));
            }
        }
        if self.points == Some(0) {
            return Err(CliError::Config(format!("{what} needs at least one point")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizeConfig {
    pub p: f64,
    pub q: f64,
    pub restarts: usize,
    pub max_iterations: usize,
    /// Also start from the registered configurations of the family.
    pub anchor: bool,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            p: 1.0,
            q: 1.0,
            restarts: 20,
            max_iterations: 500,
            anchor: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoinSpec {
    /// `hadamard`, `identity` or `x`.
    Named(String),
    /// Rows of complex entries, each `[re, im]`.
    Matrix([[Complex64; 2]; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WalkConfig {
    pub positions: usize,
    /// Defaults to the middle site.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<usize>,
    pub steps: usize,
    pub coin: CoinSpec,
    pub coin_state: [Complex64; 2],
}

impl Default for WalkConfig {
    fn default() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            positions: 41,
            start: None,
            steps: 20,
            coin: CoinSpec::Named("hadamard".into()),
            coin_state: [Complex64::new(s, 0.0), Complex64::new(0.0, s)],
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.sweep.validate("sweep")?;
        if let Some(q) = &self.q_axis {
            q.validate("q_axis")?;
        }
        let o = &self.optimize;
        for (name, x) in [("optimize.p", o.p), ("optimize.q", o.q)]
            .into_iter()
            .chain(self.fixed_q.map(|q| ("fixed_q", q)))
        {
            if !(0.0..=1.0).contains(&x) {
                return Err(CliError::Config(format!("{name} = {x} outside [0, 1]")));
            }
        }
        if !self.lock_q_to_p && self.fixed_q.is_none() {
            return Err(CliError::Config("lock_q_to_p is false but fixed_q is unset".into()));
        }
        Ok(())
    }

    /// The scenario with the config's outcome policy applied.
    pub fn scenario(&self) -> Result<ScenarioSpec, CliError> {
        let mut spec = match &self.scenario {
            ScenarioRef::Builtin(name) => builtin(name)?,
            ScenarioRef::Inline(spec) => (**spec).clone(),
        };
        if let Some(policy) = self.outcome_policy {
            spec.outcome_policy = policy;
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_the_default() {
        let c: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(c, RunConfig::default());
    }

    #[test]
    fn resolved_config_round_trips() {
        let mut c = RunConfig::default();
        c.sweep.points = Some(11);
        c.q_axis = Some(Axis::default());
        c.outcome_policy = Some(OutcomePolicy::AllOutcomes);
        c.walk.coin = CoinSpec::Matrix([
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ]);
        let text = serde_json::to_string_pretty(&c).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), c);
    }

    #[test]
    fn inline_scenarios_parse() {
        let spec = serde_json::to_value(builtin("cor1_p05").unwrap()).unwrap();
        let c: RunConfig = serde_json::from_value(serde_json::json!({ "scenario": spec })).unwrap();
        assert_eq!(c.scenario().unwrap(), builtin("cor1_p05").unwrap());
    }

    #[test]
    fn invalid_grids_rejected() {
        let mut c = RunConfig::default();
        c.sweep.stop = 1.5;
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.sweep.points = Some(0);
        assert!(c.validate().is_err());
        let c: Result<RunConfig, _> = serde_json::from_str(r#"{"sweeep": {}}"#);
        assert!(c.is_err());
    }
}
