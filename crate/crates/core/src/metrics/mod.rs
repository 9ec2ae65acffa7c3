//! Fidelity and entanglement measures, plus closed-form fidelity references.

mod closed_form;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::channels::Pauli;
use crate::error::{Error, Result};
use crate::numerics::{
    eig_hermitian, inner, partial_trace_matrix, sqrt_psd, DensityMatrix, C64, ZERO,
};
#[cfg(test)]
use crate::numerics::{kron, ComplexMatrix, ONE};

pub use closed_form::{fid_closed_bitphase, fid_closed_depolarizing, fid_closed_w3};

/// Eigenvalues below this are rounding noise of a rank-deficient product and
/// are dropped before taking square roots (which would amplify 1e-16 to 1e-8).
const SPECTRUM_FLOOR: f64 = 1e-15;

fn floored_sqrt(x: f64) -> f64 {
    if x > SPECTRUM_FLOOR {
        x.sqrt()
    } else {
        0.0
    }
}

/// Which pure state a [`TargetState`] represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    BellPhiPlus,
    BellPhiMinus,
    /// `(|0…0⟩ ± |1…1⟩)/√2`
    Ghz { n: usize, plus: bool },
    /// `(1/√n) Σ_l ω^{-kl} |0…1_l…0⟩`; `k = 0` is the ordinary W state.
    W { n: usize, k: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TargetState {
    kind: TargetKind,
    vector: Vec<C64>,
}

impl TargetState {
    pub fn new(kind: TargetKind) -> Result<Self> {
        let vector = match kind {
            TargetKind::BellPhiPlus => ghz_vector(2, 1.0),
            TargetKind::BellPhiMinus => ghz_vector(2, -1.0),
            TargetKind::Ghz { n, plus } => {
                if n < 2 {
                    return Err(Error::DimMismatch(format!("GHZ needs n >= 2, got {n}")));
                }
                ghz_vector(n, if plus { 1.0 } else { -1.0 })
            }
            TargetKind::W { n, k } => {
                if n < 2 || k >= n {
                    return Err(Error::DimMismatch(format!("W state with n={n}, k={k}")));
                }
                let mut v = vec![ZERO; 1 << n];
                let s = 1.0 / (n as f64).sqrt();
                for l in 0..n {
                    let phase = -2.0 * PI * ((k * l) % n) as f64 / n as f64;
                    v[1 << (n - 1 - l)] = C64::from_polar(s, phase);
                }
                v
            }
        };
        Ok(Self { kind, vector })
    }

    pub fn bell_phi_plus() -> Self {
        Self::new(TargetKind::BellPhiPlus).expect("static target")
    }

    pub fn bell_phi_minus() -> Self {
        Self::new(TargetKind::BellPhiMinus).expect("static target")
    }

    pub fn ghz(n: usize, plus: bool) -> Result<Self> {
        Self::new(TargetKind::Ghz { n, plus })
    }

    pub fn w(n: usize) -> Result<Self> {
        Self::new(TargetKind::W { n, k: 0 })
    }

    /// The W state reached on Fourier outcome `k`.
    pub fn w_phased(n: usize, k: usize) -> Result<Self> {
        Self::new(TargetKind::W { n, k })
    }

    pub fn kind(&self) -> TargetKind {
        self.kind
    }

    pub fn vector(&self) -> &[C64] {
        &self.vector
    }

    pub fn qubits(&self) -> usize {
        self.vector.len().trailing_zeros() as usize
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(vec![2; self.qubits()], &self.vector).expect("unit target vector")
    }
}

fn ghz_vector(n: usize, sign: f64) -> Vec<C64> {
    let mut v = vec![ZERO; 1 << n];
    v[0] = C64::new(FRAC_1_SQRT_2, 0.0);
    v[(1 << n) - 1] = C64::new(sign * FRAC_1_SQRT_2, 0.0);
    v
}

/// Vacuum amplitudes, one vector per channel (`alpha`, `beta`, … in order).
///
/// In JSON each amplitude is either a number or a `[re, im]` pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VacuumConfig {
    #[serde(with = "amplitude_serde")]
    pub amplitudes: Vec<Vec<C64>>,
}

impl VacuumConfig {
    pub fn new(amplitudes: Vec<Vec<C64>>) -> Self {
        Self { amplitudes }
    }

    pub fn pair(alpha: &[f64], beta: &[f64]) -> Self {
        Self::from_real(&[alpha, beta])
    }

    pub fn from_real(vectors: &[&[f64]]) -> Self {
        Self {
            amplitudes: vectors
                .iter()
                .map(|v| v.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect(),
        }
    }

    pub fn alpha(&self) -> &[C64] {
        &self.amplitudes[0]
    }

    pub fn beta(&self) -> &[C64] {
        &self.amplitudes[1]
    }

    /// Largest `|‖v‖ − 1|` over the vectors.
    pub fn norm_defect(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|v| (crate::numerics::norm(v) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Amplitude vector `k` as a fixed-size array, for channel constructors.
    pub fn fixed<const L: usize>(&self, k: usize) -> Result<[C64; L]> {
        let v = self.amplitudes.get(k).ok_or_else(|| {
            Error::InvalidScenario(format!("vacuum config has no amplitude vector {k}"))
        })?;
        v.as_slice().try_into().map_err(|_| {
            Error::InvalidScenario(format!(
                "amplitude vector {k} has length {}, expected {L}",
                v.len()
            ))
        })
    }
}

mod amplitude_serde {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Amp {
        Real(f64),
        Complex([f64; 2]),
    }

    pub fn serialize<S: Serializer>(v: &[Vec<C64>], s: S) -> Result<S::Ok, S::Error> {
        let out: Vec<Vec<Amp>> = v
            .iter()
            .map(|row| {
                row.iter()
                    .map(|z| {
                        if z.im == 0.0 {
                            Amp::Real(z.re)
                        } else {
                            Amp::Complex([z.re, z.im])
                        }
                    })
                    .collect()
            })
            .collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<C64>>, D::Error> {
        let raw = Vec::<Vec<Amp>>::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|a| match a {
                        Amp::Real(x) => C64::new(x, 0.0),
                        Amp::Complex([re, im]) => C64::new(re, im),
                    })
                    .collect()
            })
            .collect())
    }
}

fn check_dim(rho: &DensityMatrix, d: usize) -> Result<()> {
    if rho.dim() != d {
        return Err(Error::DimMismatch(format!(
            "state has dimension {}, target has {d}",
            rho.dim()
        )));
    }
    Ok(())
}

/// `√⟨ψ|ρ|ψ⟩`
pub fn fidelity_pure(rho: &DensityMatrix, target: &TargetState) -> Result<f64> {
    fidelity_with_vector(rho, target.vector())
}

pub fn fidelity_with_vector(rho: &DensityMatrix, psi: &[C64]) -> Result<f64> {
    check_dim(rho, psi.len())?;
    let overlap = inner(psi, &rho.matrix().apply(psi)).re;
    Ok(overlap.clamp(0.0, 1.0).sqrt())
}

/// Uhlmann fidelity `Tr √(√ρ σ √ρ)` for arbitrary states.
pub fn fidelity_uhlmann(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dim(rho, sigma.dim())?;
    let r = sqrt_psd(rho.matrix())?;
    let inner = r.matmul(sigma.matrix()).matmul(&r).hermitian_part();
    let eig = eig_hermitian(&inner)?;
    Ok(eig.values.iter().map(|&x| floored_sqrt(x)).sum::<f64>().min(1.0))
}

/// Best fidelity against `(|0…0⟩ + e^{iφ}|1…1⟩)/√2` over `φ`, and the maximizing `φ ∈ (−π, π]`.
///
/// Only the corner element `ρ_{1…1,0…0}` depends on `φ`, so the optimum is its argument.
pub fn fidelity_up_to_phase(rho: &DensityMatrix, n: usize) -> Result<(f64, f64)> {
    if n < 1 || n >= usize::BITS as usize {
        return Err(Error::DimMismatch(format!("{n} qubits")));
    }
    let d = 1usize << n;
    check_dim(rho, d)?;
    let m = rho.matrix();
    let corner = m[(d - 1, 0)];
    let phi = if corner.norm() == 0.0 { 0.0 } else { corner.arg() };
    let f2 = (m[(0, 0)].re + m[(d - 1, d - 1)].re + 2.0 * corner.norm()) / 2.0;
    Ok((f2.clamp(0.0, 1.0).sqrt(), phi))
}

/// Wootters concurrence of a two-qubit state.
///
/// The square roots of the spectrum of `ρρ̃` are taken from the Hermitian
/// matrix `√ρ ρ̃ √ρ`, which is similar to `ρρ̃`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimMismatch(format!(
            "concurrence needs a two-qubit state, got dimension {}",
            rho.dim()
        )));
    }
    let yy = Pauli::Y.tensor_power(2);
    let tilde = yy.matmul(&rho.matrix().conj()).matmul(&yy);
    let r = sqrt_psd(rho.matrix())?;
    let m = r.matmul(&tilde).matmul(&r).hermitian_part();
    let lambda: Vec<f64> = eig_hermitian(&m)?
        .values
        .iter()
        .map(|&x| floored_sqrt(x))
        .collect();
    Ok((lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0))
}

fn qubit_count(rho: &DensityMatrix) -> Result<usize> {
    let n = rho.dims().len();
    if n < 2 || rho.dims().iter().any(|&d| d != 2) {
        return Err(Error::DimMismatch(format!(
            "expected at least two qubits, got subsystem dims {:?}",
            rho.dims()
        )));
    }
    Ok(n)
}

/// Mean Wootters concurrence over every two-qubit reduction.
pub fn avg_pairwise_concurrence(rho: &DensityMatrix) -> Result<f64> {
    let n = qubit_count(rho)?;
    let mut total = 0.0;
    let mut count = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            total += concurrence(&rho.partial_trace(&[i, j])?)?;
            count += 1;
        }
    }
    Ok(total / count as f64)
}

/// Mean over qubits `k` of `√(2(1 − Tr ρ_k²))`.
///
/// This is the concurrence of the cut `k | rest` only when the global state is
/// pure; for mixed states it is a descriptive statistic.
pub fn avg_one_vs_rest_concurrence(rho: &DensityMatrix) -> Result<f64> {
    let n = qubit_count(rho)?;
    let mut total = 0.0;
    for k in 0..n {
        let (_, r) = partial_trace_matrix(rho.dims(), rho.matrix(), &[k])?;
        let purity = r.matmul(&r).trace().re;
        total += floored_sqrt(2.0 * (1.0 - purity));
    }
    Ok(total / n as f64)
}

/// General single-qubit unitary `U3(θ, φ, λ)`.
#[cfg(test)]
pub(crate) fn local_unitary(theta: f64, phi: f64, lambda: f64) -> ComplexMatrix {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    ComplexMatrix::from_rows(&[
        [C64::new(c, 0.0), -C64::from_polar(s, lambda)],
        [C64::from_polar(s, phi), C64::from_polar(c, phi + lambda)],
    ])
}
