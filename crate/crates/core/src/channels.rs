//! Vacuum-extended channels: Kraus operators paired with the amplitudes that
//! govern how each Kraus branch interferes once the channel sits on one arm of
//! a coherent superposition of paths.

use crate::error::{Error, Result};
use crate::numerics::{kron_all, ComplexMatrix, C64, I, ONE, ZERO};

/// Tolerance for the CPTP and amplitude-normalization checks.
pub const CHANNEL_TOL: f64 = 1e-10;
/// Tolerance for probability vectors summing to one.
pub const PROBABILITY_TOL: f64 = 1e-12;

/// Global Pauli index convention: 0 = I, 1 = X, 2 = Y, 3 = Z.
///
/// Correlated Pauli channels always carry four Kraus slots in this order, so an
/// amplitude vector means the same thing for every channel family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(k: usize) -> Option<Self> {
        Self::ALL.get(k).copied()
    }

    pub fn letter(self) -> char {
        ['I', 'X', 'Y', 'Z'][self.index()]
    }

    pub fn from_letter(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::BadLetter(other)),
        }
    }

    pub fn matrix(self) -> ComplexMatrix {
        match self {
            Pauli::I => ComplexMatrix::identity(2),
            Pauli::X => ComplexMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]]),
            Pauli::Y => ComplexMatrix::from_rows(&[[ZERO, -I], [I, ZERO]]),
            Pauli::Z => ComplexMatrix::from_rows(&[[ONE, ZERO], [ZERO, -ONE]]),
        }
    }

    /// `P ⊗ P ⊗ … ⊗ P` over `n` qubits.
    pub fn tensor_power(self, n: usize) -> ComplexMatrix {
        let p = self.matrix();
        kron_all(std::iter::repeat_n(&p, n))
    }
}

/// Kronecker product of single-qubit Paulis, left to right (`"IXI"` = X on qubit 1).
pub fn pauli_string(letters: &str) -> Result<ComplexMatrix> {
    let mats = letters
        .chars()
        .map(|c| Pauli::from_letter(c).map(Pauli::matrix))
        .collect::<Result<Vec<_>>>()?;
    Ok(kron_all(&mats))
}

/// `X` acting on qubit `i` of `n`.
pub fn single_qubit_x(i: usize, n: usize) -> Result<ComplexMatrix> {
    if i >= n {
        return Err(Error::BadIndex(format!("qubit {i} of {n}")));
    }
    let letters: String = (0..n).map(|k| if k == i { 'X' } else { 'I' }).collect();
    pauli_string(&letters)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VacuumExtendedChannel {
    kraus: Vec<ComplexMatrix>,
    vacuum_amplitudes: Vec<C64>,
    label: String,
}

/// Diagnostic produced by [`VacuumExtendedChannel::validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelReport {
    /// Max elementwise deviation of `Σ K†K` from the identity.
    pub cptp_defect: f64,
    /// `|1 - Σ|α|²|`
    pub amplitude_defect: f64,
    /// Kraus/amplitude count or dimension problems.
    pub structural: Vec<String>,
}

impl ChannelReport {
    pub fn is_ok(&self) -> bool {
        self.structural.is_empty()
            && self.cptp_defect < CHANNEL_TOL
            && self.amplitude_defect < CHANNEL_TOL
    }
}

impl VacuumExtendedChannel {
    /// Builds a channel and rejects it unless it is CPTP with normalized amplitudes.
    pub fn new(
        kraus: Vec<ComplexMatrix>,
        vacuum_amplitudes: Vec<C64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let ch = Self::from_parts(kraus, vacuum_amplitudes, label);
        let report = ch.validate();
        if let Some(msg) = report.structural.first() {
            return Err(Error::DimMismatch(msg.clone()));
        }
        if report.cptp_defect >= CHANNEL_TOL {
            return Err(Error::NotCptp(report.cptp_defect));
        }
        if report.amplitude_defect >= CHANNEL_TOL {
            return Err(Error::BadNormalization(format!(
                "Σ|α|² deviates from 1 by {:.3e}",
                report.amplitude_defect
            )));
        }
        Ok(ch)
    }

    /// Unchecked constructor; pair with [`validate`](Self::validate).
    pub fn from_parts(
        kraus: Vec<ComplexMatrix>,
        vacuum_amplitudes: Vec<C64>,
        label: impl Into<String>,
    ) -> Self {
        Self {
            kraus,
            vacuum_amplitudes,
            label: label.into(),
        }
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn vacuum_amplitudes(&self) -> &[C64] {
        &self.vacuum_amplitudes
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Dimension of the system the Kraus operators act on.
    pub fn dim(&self) -> usize {
        self.kraus.first().map_or(0, ComplexMatrix::rows)
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }

    /// Same Kraus operators with new vacuum amplitudes.
    pub fn with_amplitudes(&self, amps: Vec<C64>) -> Result<Self> {
        Self::new(self.kraus.clone(), amps, self.label.clone())
    }

    pub fn validate(&self) -> ChannelReport {
        let mut structural = Vec::new();
        if self.kraus.is_empty() {
            structural.push("channel has no Kraus operators".to_string());
        }
        if self.kraus.len() != self.vacuum_amplitudes.len() {
            structural.push(format!(
                "{} Kraus operators but {} vacuum amplitudes",
                self.kraus.len(),
                self.vacuum_amplitudes.len()
            ));
        }
        let d = self.dim();
        if self.kraus.iter().any(|k| k.rows() != d || k.cols() != d) {
            structural.push("Kraus operators must share one square dimension".to_string());
        }

        let cptp_defect = if structural.is_empty() {
            let mut sum = ComplexMatrix::zeros(d, d);
            for k in &self.kraus {
                sum += &k.adjoint().matmul(k);
            }
            sum.max_abs_diff(&ComplexMatrix::identity(d))
        } else {
            f64::INFINITY
        };
        let amp_norm: f64 = self.vacuum_amplitudes.iter().map(|a| a.norm_sqr()).sum();

        ChannelReport {
            cptp_defect,
            amplitude_defect: (1.0 - amp_norm).abs(),
            structural,
        }
    }

    /// `Σ_k K_k ρ K_k†`, the channel acting alone.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(rho.rows(), rho.cols());
        for k in &self.kraus {
            out += &k.conjugate(rho);
        }
        out
    }
}

fn check_probability(p: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::BadProbability(format!("{name} = {p} outside [0, 1]")));
    }
    Ok(())
}

fn check_amplitudes(amps: &[C64]) -> Result<()> {
    let s: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (s - 1.0).abs() >= CHANNEL_TOL {
        return Err(Error::BadNormalization(format!(
            "Σ|α|² = {s} for amplitudes {amps:?}"
        )));
    }
    Ok(())
}

/// Correlated Pauli channel with Kraus `√w_k P_k^{⊗n}`, slots ordered I, X, Y, Z.
pub fn pauli_channel_correlated(
    weights: [f64; 4],
    n: usize,
    amps: [C64; 4],
) -> Result<VacuumExtendedChannel> {
    for (k, &w) in weights.iter().enumerate() {
        check_probability(w, &format!("weight[{k}]"))?;
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > PROBABILITY_TOL {
        return Err(Error::BadProbability(format!(
            "Pauli weights sum to {total}"
        )));
    }
    check_amplitudes(&amps)?;
    let kraus = Pauli::ALL
        .iter()
        .zip(weights)
        .map(|(p, w)| p.tensor_power(n).scale_real(w.sqrt()))
        .collect();
    VacuumExtendedChannel::new(
        kraus,
        amps.to_vec(),
        format!("pauli{weights:?}^{n}"),
    )
}

/// Correlated depolarizing channel: `(1-p)ρ + p/3 Σ_{P∈{X,Y,Z}} P^{⊗n} ρ P^{⊗n}`.
pub fn depolarizing_correlated(p: f64, n: usize, amps: [C64; 4]) -> Result<VacuumExtendedChannel> {
    check_probability(p, "p")?;
    let mut ch = pauli_channel_correlated([1.0 - p, p / 3.0, p / 3.0, p / 3.0], n, amps)?;
    ch.label = format!("depolarizing(p={p}, n={n})");
    Ok(ch)
}

/// Correlated bit flip `(1-p)ρ + p X^{⊗n}ρX^{⊗n}`; `amps` fill Pauli slots I and X.
pub fn bit_flip_correlated(p: f64, n: usize, amps: [C64; 2]) -> Result<VacuumExtendedChannel> {
    check_probability(p, "p")?;
    let mut ch = pauli_channel_correlated([1.0 - p, p, 0.0, 0.0], n, [amps[0], amps[1], ZERO, ZERO])?;
    ch.label = format!("bit-flip(p={p}, n={n})");
    Ok(ch)
}

/// Correlated phase flip `(1-q)ρ + q Z^{⊗n}ρZ^{⊗n}`; `amps` fill Pauli slots I and Z.
pub fn phase_flip_correlated(q: f64, n: usize, amps: [C64; 2]) -> Result<VacuumExtendedChannel> {
    check_probability(q, "q")?;
    let mut ch = pauli_channel_correlated([1.0 - q, 0.0, 0.0, q], n, [amps[0], ZERO, ZERO, amps[1]])?;
    ch.label = format!("phase-flip(q={q}, n={n})");
    Ok(ch)
}

/// Memoryless bit flip on qubit `i` of `n`: Kraus `{√(1-p) I, √p X_i}`.
pub fn memoryless_bitflip(
    i: usize,
    n: usize,
    p: f64,
    amps: [C64; 2],
) -> Result<VacuumExtendedChannel> {
    check_probability(p, "p")?;
    let xi = single_qubit_x(i, n)?;
    check_amplitudes(&amps)?;
    let d = xi.rows();
    VacuumExtendedChannel::new(
        vec![
            ComplexMatrix::identity(d).scale_real((1.0 - p).sqrt()),
            xi.scale_real(p.sqrt()),
        ],
        amps.to_vec(),
        format!("memoryless-bit-flip(i={i}, n={n}, p={p})"),
    )
}

/// A single unitary with vacuum amplitude 1.
pub fn unitary_channel(u: ComplexMatrix) -> Result<VacuumExtendedChannel> {
    let defect = u.unitary_defect();
    if defect > CHANNEL_TOL {
        return Err(Error::NotUnitary(defect));
    }
    VacuumExtendedChannel::new(vec![u], vec![ONE], "unitary")
}
