use std::f64::consts::FRAC_1_SQRT_2 as S2;

use crate::error::{Error, Result};
use crate::metrics::{TargetKind, VacuumConfig};

use super::{Family, Noise, OutcomePolicy, ScenarioSpec};

fn s3() -> f64 {
    1.0 / 3f64.sqrt()
}

fn s6() -> f64 {
    1.0 / 6f64.sqrt()
}

/// Depolarizing pair, unit fidelity at `p = q = 1`.
fn dep_p1() -> VacuumConfig {
    let s = s3();
    VacuumConfig::pair(&[0.0, s, -s, -s], &[0.0, -s, s, s])
}

/// Depolarizing pair, unit fidelity at `p = q = 1/2`.
fn dep_p05() -> VacuumConfig {
    let s = s6();
    VacuumConfig::pair(&[-S2, s, -s, -s], &[S2, -s, s, s])
}

fn dep_uniform() -> VacuumConfig {
    VacuumConfig::pair(&[0.5; 4], &[0.5; 4])
}

/// GHZ variant of [`dep_p1`] with the Y slot's sign flipped.
fn ghz_dep_p1() -> VacuumConfig {
    let s = s3();
    VacuumConfig::pair(&[0.0, s, s, -s], &[0.0, -s, -s, s])
}

fn ghz_dep_p05() -> VacuumConfig {
    let s = s6();
    VacuumConfig::pair(&[-S2, s, s, -s], &[S2, -s, -s, s])
}

/// Bit/phase pair: all weight on the flip operators.
fn bp_p1() -> VacuumConfig {
    VacuumConfig::pair(&[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0])
}

fn bp_uniform() -> VacuumConfig {
    VacuumConfig::pair(&[S2, S2, 0.0, 0.0], &[S2, 0.0, 0.0, S2])
}

fn bp_p05() -> VacuumConfig {
    VacuumConfig::pair(&[-S2, S2, 0.0, 0.0], &[S2, 0.0, 0.0, S2])
}

fn w_config(n: usize, a0: f64, a1: f64) -> VacuumConfig {
    VacuumConfig::new(vec![crate::numerics::real_vec(&[a0, a1]); n])
}

fn trivial_pair() -> VacuumConfig {
    VacuumConfig::pair(&[1.0], &[1.0])
}

/// Registered base names; GHZ and W entries also accept an `_n<k>` suffix.
const NAMES: &[&str] = &[
    "ideal_bell",
    "prop1",
    "ideal_ghz",
    "prop2",
    "ideal_w",
    "prop3",
    "prop4_p1",
    "prop4_p05",
    "cor1_p1",
    "cor1_p05",
    "prop5_p1",
    "prop5_p05",
    "cor2_p1",
    "cor2_p05",
    "prop7_p1",
    "fig4a_red",
    "fig4a_green",
    "fig4a_blue",
    "fig4b_red",
    "fig4b_green",
    "fig4b_blue",
    "fig6a_red",
    "fig6a_blue",
    "fig6b_red",
    "fig6b_green",
    "fig6b_blue",
    "fig7_red",
    "fig7_green",
    "fig7_blue",
    "fig8_red",
    "fig8_green",
    "fig8_blue",
    "bell_depolarizing",
    "bell_bitphase",
    "ghz_depolarizing",
    "ghz_bitphase",
    "w_memoryless",
];

pub fn builtin_names() -> &'static [&'static str] {
    NAMES
}

fn spec(
    name: &str,
    family: Family,
    n: usize,
    p: f64,
    config: VacuumConfig,
    outcome_policy: OutcomePolicy,
) -> ScenarioSpec {
    let target = match family {
        Family::IdealBell | Family::BellDepolarizing | Family::BellBitphase => TargetKind::BellPhiPlus,
        Family::IdealW | Family::WMemoryless => TargetKind::W { n, k: 0 },
        _ => TargetKind::Ghz { n, plus: true },
    };
    ScenarioSpec {
        name: name.to_string(),
        family,
        n,
        noise: Noise::symmetric(p),
        config,
        target,
        outcome_policy,
        channels: Vec::new(),
    }
}

fn base(name: &str, n: Option<usize>) -> Option<ScenarioSpec> {
    use Family::*;
    use OutcomePolicy::{AllOutcomes as All, PlusOnly as Plus};

    let ghz_n = n.unwrap_or(3);
    let w_n = n.unwrap_or(3);
    let fixed_two = n.is_none() || n == Some(2);

    let s = match name {
        "ideal_bell" | "prop1" if fixed_two => spec(name, IdealBell, 2, 0.0, trivial_pair(), All),
        "ideal_ghz" | "prop2" => spec(name, IdealGhz, ghz_n, 0.0, trivial_pair(), All),
        "ideal_w" | "prop3" => spec(
            name,
            IdealW,
            w_n,
            0.0,
            VacuumConfig::new(vec![vec![crate::numerics::ONE]; w_n]),
            All,
        ),
        "prop4_p1" | "fig4a_red" | "fig6a_red" | "bell_depolarizing" if fixed_two => {
            spec(name, BellDepolarizing, 2, 1.0, dep_p1(), Plus)
        }
        "prop4_p05" if fixed_two => spec(name, BellDepolarizing, 2, 0.5, dep_p05(), Plus),
        "fig4a_blue" | "fig6a_blue" if fixed_two => {
            spec(name, BellDepolarizing, 2, 1.0, dep_p05(), Plus)
        }
        "fig4a_green" if fixed_two => spec(name, BellDepolarizing, 2, 1.0, dep_uniform(), Plus),
        "cor1_p1" | "fig4b_red" | "fig6b_red" | "bell_bitphase" if fixed_two => {
            spec(name, BellBitphase, 2, 1.0, bp_p1(), Plus)
        }
        "cor1_p05" if fixed_two => spec(name, BellBitphase, 2, 0.5, bp_p05(), Plus),
        "fig4b_blue" | "fig6b_blue" if fixed_two => spec(name, BellBitphase, 2, 1.0, bp_p05(), Plus),
        "fig4b_green" | "fig6b_green" if fixed_two => {
            spec(name, BellBitphase, 2, 1.0, bp_uniform(), Plus)
        }
        "prop5_p1" | "ghz_depolarizing" => {
            spec(name, GhzDepolarizing, n.unwrap_or(4), 1.0, ghz_dep_p1(), Plus)
        }
        "prop5_p05" => spec(name, GhzDepolarizing, n.unwrap_or(4), 0.5, ghz_dep_p05(), Plus),
        "cor2_p1" | "fig7_red" | "ghz_bitphase" => spec(name, GhzBitphase, ghz_n, 1.0, bp_p1(), Plus),
        "cor2_p05" => spec(name, GhzBitphase, ghz_n, 0.5, bp_p05(), Plus),
        "fig7_blue" => spec(name, GhzBitphase, ghz_n, 1.0, bp_p05(), Plus),
        "fig7_green" => spec(name, GhzBitphase, ghz_n, 1.0, bp_uniform(), Plus),
        "prop7_p1" | "fig8_red" | "w_memoryless" => {
            spec(name, WMemoryless, w_n, 1.0, w_config(w_n, 0.0, 1.0), All)
        }
        "fig8_green" => spec(name, WMemoryless, w_n, 1.0, w_config(w_n, S2, S2), All),
        "fig8_blue" => spec(
            name,
            WMemoryless,
            w_n,
            1.0,
            w_config(w_n, s3(), (2.0f64 / 3.0).sqrt()),
            All,
        ),
        _ => return None,
    };
    Some(s)
}

/// Looks up a registered scenario. GHZ and W names take an optional `_n<k>` suffix.
pub fn builtin(name: &str) -> Result<ScenarioSpec> {
    if let Some(s) = base(name, None) {
        return Ok(s);
    }
    if let Some((stem, digits)) = name.rsplit_once("_n") {
        if let Ok(n) = digits.parse::<usize>() {
            if let Some(mut s) = base(stem, Some(n)) {
                s.name = name.to_string();
                return Ok(s);
            }
        }
    }
    Err(Error::UnknownScenario(name.to_string()))
}

/// Every amplitude configuration registered for a family at `n` qubits.
///
/// These seed the optimizer so that it is never worse than a known configuration.
pub fn registered_configs(family: Family, n: usize) -> Vec<VacuumConfig> {
    match family {
        Family::BellDepolarizing => vec![dep_p1(), dep_p05(), dep_uniform()],
        Family::GhzDepolarizing => vec![ghz_dep_p1(), ghz_dep_p05(), dep_p1(), dep_p05(), dep_uniform()],
        Family::BellBitphase | Family::GhzBitphase => vec![bp_p1(), bp_p05(), bp_uniform()],
        Family::WMemoryless => vec![
            w_config(n, 0.0, 1.0),
            w_config(n, S2, S2),
            w_config(n, s3(), (2.0f64 / 3.0).sqrt()),
        ],
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves_and_builds() {
        for &name in NAMES {
            let s = builtin(name).unwrap();
            assert_eq!(s.name, name);
            assert!(s.config.norm_defect() < 1e-12, "{name}");
            s.build().unwrap();
        }
    }

    #[test]
    fn registered_configs_are_normalized() {
        for family in [
            Family::BellDepolarizing,
            Family::GhzDepolarizing,
            Family::BellBitphase,
            Family::WMemoryless,
        ] {
            for c in registered_configs(family, 3) {
                assert!(c.norm_defect() < 1e-12);
            }
        }
    }

    #[test]
    fn suffix_sets_qubit_count() {
        assert_eq!(builtin("ideal_ghz_n5").unwrap().n, 5);
        assert_eq!(builtin("ideal_w_n4").unwrap().n, 4);
        assert_eq!(builtin("prop5_p1_n8").unwrap().n, 8);
        assert_eq!(builtin("ideal_bell_n2").unwrap().n, 2);
        assert!(matches!(builtin("prop4_p1_n3"), Err(Error::UnknownScenario(_))));
        assert!(matches!(builtin("nope"), Err(Error::UnknownScenario(_))));
        assert!(builtin("ideal_ghz_nx").is_err());
    }

    #[test]
    fn named_configurations() {
        let s = builtin("cor1_p05").unwrap();
        assert_eq!(s.noise.p, 0.5);
        let a: Vec<f64> = s.config.alpha().iter().map(|z| z.re).collect();
        let b: Vec<f64> = s.config.beta().iter().map(|z| z.re).collect();
        assert_eq!(a, vec![-S2, S2, 0.0, 0.0]);
        assert_eq!(b, vec![S2, 0.0, 0.0, S2]);
        let s = builtin("prop4_p1").unwrap();
        assert_eq!(s.config.alpha()[0].re, 0.0);
        assert!((s.config.alpha()[1].re - s3()).abs() < 1e-15);
        assert!((s.config.alpha()[2].re + s3()).abs() < 1e-15);
        let w = builtin("ideal_w_n3").unwrap().build().unwrap();
        assert_eq!(w.branches(), 3);
        assert!((w.control().amplitudes()[2].re - s3()).abs() < 1e-15);
    }
}
