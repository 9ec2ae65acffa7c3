//! Closed-form fidelities of the `|+⟩` (or `|0̃⟩`) outcome, used as independent
//! references for the simulator.
//!
//! The expressions are written for real amplitudes. Complex input is folded in
//! by replacing every product `a·b` of amplitudes from two different channels
//! with `Re(a* b)`.

use crate::error::{Error, Result};
use crate::numerics::C64;

use super::VacuumConfig;

const DENOMINATOR_TOL: f64 = 1e-14;

fn check_p(p: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::BadProbability(format!("{name} = {p}")));
    }
    Ok(())
}

fn amplitudes(cfg: &VacuumConfig, k: usize, len: usize) -> Result<&[C64]> {
    match cfg.amplitudes.get(k) {
        Some(v) if v.len() == len => Ok(v),
        _ => Err(Error::InvalidScenario(format!(
            "closed form needs amplitude vector {k} of length {len}"
        ))),
    }
}

/// Symmetrized product `Re(a* b)`.
fn re(a: C64, b: C64) -> f64 {
    (a.conj() * b).re
}

fn ratio_sqrt(num: f64, den: f64) -> Result<f64> {
    if den.abs() <= DENOMINATOR_TOL {
        return Err(Error::DivisionByZero(den));
    }
    Ok((num / den).max(0.0).sqrt())
}

/// Two correlated depolarizing channels (four Pauli slots each) on `|00⟩`, fidelity to `|Φ⁺⟩`.
pub fn fid_closed_depolarizing(p: f64, q: f64, cfg: &VacuumConfig) -> Result<f64> {
    check_p(p, "p")?;
    check_p(q, "q")?;
    let a = amplitudes(cfg, 0, 4)?;
    let b = amplitudes(cfg, 1, 4)?;

    let s00 = ((1.0 - p) * (1.0 - q)).sqrt();
    let s_p = (3.0 * p * (1.0 - q)).sqrt();
    let s_q = (3.0 * q * (1.0 - p)).sqrt();
    let s_pq = (p * q).sqrt();
    let a_odd = a[1] - a[2] + a[3];
    let b_odd = b[1] - b[2] + b[3];

    let c = 3.0
        + 3.0 * s00 * re(a[0], b[0])
        + s_p * re(a_odd, b[0])
        + s_q * re(a[0], b_odd)
        + s_pq * re(a_odd, b_odd);
    let d = 2.0
        * (3.0
            + 3.0 * s00 * re(a[0], b[0])
            + s_pq * re(a[3], b[3])
            + s_p * re(a[3], b[0])
            + s_q * re(a[0], b[3])
            + s_pq * re(a[1] - a[2], b[1] - b[2]));
    ratio_sqrt(c, d)
}

/// Correlated bit flip (slots I, X) and phase flip (slots I, Z) on `|00⟩`, fidelity to `|Φ⁺⟩`.
///
/// Amplitudes are length-4 vectors in Pauli slot order; only `α₀, α₁, β₀, β₃` enter.
pub fn fid_closed_bitphase(p: f64, q: f64, cfg: &VacuumConfig) -> Result<f64> {
    check_p(p, "p")?;
    check_p(q, "q")?;
    let a = amplitudes(cfg, 0, 4)?;
    let b = amplitudes(cfg, 1, 4)?;

    let base = 1.0
        + (q * (1.0 - p)).sqrt() * re(a[0], b[3])
        + ((1.0 - p) * (1.0 - q)).sqrt() * re(a[0], b[0]);
    let num = base + (p * (1.0 - q)).sqrt() * re(a[1], b[0]) + (p * q).sqrt() * re(a[1], b[3]);
    ratio_sqrt(num, 2.0 * base)
}

/// Three memoryless bit flips on `|000⟩` with control `|0̃⟩`, fidelity of the `|0̃⟩` outcome to `|W⟩`.
pub fn fid_closed_w3(p: [f64; 3], cfg: &VacuumConfig) -> Result<f64> {
    for (k, &pk) in p.iter().enumerate() {
        check_p(pk, &format!("p[{k}]"))?;
    }
    let a = [
        amplitudes(cfg, 0, 2)?,
        amplitudes(cfg, 1, 2)?,
        amplitudes(cfg, 2, 2)?,
    ];
    let mut num = p.iter().sum::<f64>();
    let mut den = 9.0;
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        num += 2.0 * re(a[i][1], a[j][1]) * (p[i] * p[j]).sqrt();
        den += 6.0 * re(a[i][0], a[j][0]) * ((1.0 - p[i]) * (1.0 - p[j])).sqrt();
    }
    ratio_sqrt(num, den)
}
