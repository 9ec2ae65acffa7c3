use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::metrics::{fidelity_up_to_phase, TargetState};
use crate::superposition::run;

use super::builtin;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `|measured − expected| ≤ tolerance`
    Equal,
    /// `measured ≥ expected − tolerance`
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropositionCheck {
    pub id: String,
    pub description: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PropositionCheck {
    fn new(
        id: impl Into<String>,
        description: impl Into<String>,
        measured: f64,
        expected: f64,
        tolerance: f64,
        comparison: Comparison,
    ) -> Self {
        let passed = match comparison {
            Comparison::Equal => (measured - expected).abs() <= tolerance,
            Comparison::AtLeast => measured >= expected - tolerance,
        };
        Self {
            id: id.into(),
            description: description.into(),
            measured,
            expected,
            tolerance,
            comparison,
            passed,
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

const IDEAL_TOL: f64 = 1e-10;
const NOISY_TOL: f64 = 1e-9;

fn ideal_bell() -> Result<Vec<PropositionCheck>> {
    let spec = builtin("ideal_bell")?;
    let outcomes = run(&spec.build()?)?;
    let targets = [
        ("Φ+", TargetState::bell_phi_plus()),
        ("Φ-", TargetState::bell_phi_minus()),
    ];
    let mut checks = Vec::new();
    for (o, (label, t)) in outcomes.iter().zip(targets) {
        let rho = o.post_state.as_ref().expect("both outcomes occur");
        checks.push(PropositionCheck::new(
            format!("prop1.outcome{}", o.outcome_index),
            format!("ideal Bell, outcome {} vs {label}", o.outcome_index),
            crate::metrics::fidelity_pure(rho, &t)?,
            1.0,
            IDEAL_TOL,
            Comparison::Equal,
        ));
    }
    Ok(checks)
}

fn ideal_ghz() -> Result<Vec<PropositionCheck>> {
    let mut checks = Vec::new();
    for n in 2..=5 {
        let spec = builtin(&format!("ideal_ghz_n{n}"))?;
        for o in run(&spec.build()?)? {
            let rho = o.post_state.as_ref().expect("both outcomes occur");
            checks.push(PropositionCheck::new(
                format!("prop2.n{n}.outcome{}", o.outcome_index),
                format!("ideal GHZ n={n}, outcome {} (up to phase)", o.outcome_index),
                fidelity_up_to_phase(rho, n)?.0,
                1.0,
                IDEAL_TOL,
                Comparison::Equal,
            ));
        }
    }
    Ok(checks)
}

fn ideal_w() -> Result<Vec<PropositionCheck>> {
    let mut checks = Vec::new();
    for n in 3..=4 {
        let spec = builtin(&format!("ideal_w_n{n}"))?;
        for o in run(&spec.build()?)? {
            let k = o.outcome_index;
            checks.push(PropositionCheck::new(
                format!("prop3.n{n}.outcome{k}.probability"),
                format!("ideal W n={n}, outcome {k} probability"),
                o.probability,
                1.0 / n as f64,
                IDEAL_TOL,
                Comparison::Equal,
            ));
            let rho = o.post_state.as_ref().expect("every Fourier outcome occurs");
            checks.push(PropositionCheck::new(
                format!("prop3.n{n}.outcome{k}.fidelity"),
                format!("ideal W n={n}, outcome {k} vs phased W"),
                spec.outcome_fidelity(k, rho)?,
                1.0,
                IDEAL_TOL,
                Comparison::Equal,
            ));
        }
    }
    Ok(checks)
}

fn unit_fidelity(id: &str, name: &str, description: &str) -> Result<PropositionCheck> {
    let spec = builtin(name)?;
    Ok(PropositionCheck::new(
        id,
        description,
        spec.primary_fidelity()?,
        1.0,
        NOISY_TOL,
        Comparison::Equal,
    ))
}

/// Runs every registered claim and reports each one.
pub fn verify_propositions() -> Result<Vec<PropositionCheck>> {
    let mut checks = ideal_bell()?;
    checks.extend(ideal_ghz()?);
    checks.extend(ideal_w()?);

    checks.push(unit_fidelity("prop4.p1", "prop4_p1", "depolarizing pair, p=q=1, Bell outcome +")?);
    checks.push(unit_fidelity("prop4.p05", "prop4_p05", "depolarizing pair, p=q=1/2, Bell outcome +")?);
    checks.push(unit_fidelity("cor1.p1", "cor1_p1", "bit/phase flip pair, p=q=1, Bell outcome +")?);
    checks.push(unit_fidelity("cor1.p05", "cor1_p05", "bit/phase flip pair, p=q=1/2, Bell outcome +")?);

    let parity_note = "GHZ depolarizing amplitudes are exact for n divisible by 4; for other n \
                       the output is mixed (n=3 reaches 0.8577 up to phase at p=1)";
    checks.push(
        unit_fidelity("prop5.p1", "prop5_p1", "GHZ depolarizing pair n=4, p=q=1 (up to phase)")?
            .with_note(parity_note),
    );
    checks.push(
        unit_fidelity("prop5.p05", "prop5_p05", "GHZ depolarizing pair n=4, p=q=1/2 (up to phase)")?
            .with_note(parity_note),
    );
    checks.push(
        unit_fidelity("cor2.p1", "cor2_p1", "GHZ bit/phase flip pair n=3, p=q=1 (up to phase)")?
            .with_note(
                "the reference amplitudes for this regime are not normalized; using \
                 the normalized choice α0=β0=0, α1=β1=1 instead",
            ),
    );
    checks.push(unit_fidelity(
        "cor2.p05",
        "cor2_p05",
        "GHZ bit/phase flip pair n=3, p=q=1/2 (up to phase)",
    )?);

    let w = builtin("prop7_p1")?;
    checks.push(PropositionCheck::new(
        "prop7.p1",
        "memoryless bit flips n=3, p=1, outcome 0 vs W",
        w.primary_fidelity()?,
        1.0,
        NOISY_TOL,
        Comparison::Equal,
    ));
    checks.push(PropositionCheck::new(
        "prop7.p099",
        "memoryless bit flips n=3, p=0.99, outcome 0 vs W",
        w.with_noise(0.99, 0.99).primary_fidelity()?,
        0.994,
        0.0,
        Comparison::AtLeast,
    ));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes() {
        let checks = verify_propositions().unwrap();
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(checks.len() > 30);
    }

    #[test]
    fn comparison_modes() {
        assert!(PropositionCheck::new("a", "", 0.995, 0.994, 0.0, Comparison::AtLeast).passed);
        assert!(!PropositionCheck::new("a", "", 0.99, 0.994, 0.0, Comparison::AtLeast).passed);
        assert!(!PropositionCheck::new("a", "", 0.99, 1.0, 1e-3, Comparison::Equal).passed);
    }
}
