//! Coherent superposition of `N` vacuum-extended channels.
//!
//! For a multi-index `i = (i_0, …, i_{N-1})` the global Kraus operator on
//! target ⊗ control is
//!
//! ```text
//! S_i = Σ_l [ Π_{k≠l} α^(k)_{i_k} ] E^(l)_{i_l} ⊗ |l⟩⟨l|
//! ```
//!
//! so that branch `l` applies its own Kraus operator while every other channel
//! contributes only its vacuum amplitude. For two channels this is
//! `S_ij = β_j F_i ⊗ |0⟩⟨0| + α_i N_j ⊗ |1⟩⟨1|`.

use std::f64::consts::PI;

use crate::channels::VacuumExtendedChannel;
use crate::error::{Error, Result};
use crate::numerics::{inner, kron, norm, ComplexMatrix, DensityMatrix, C64, ONE, ZERO};

/// Largest supported `target dim × control dim`.
pub const MAX_JOINT_DIM: usize = 4096;
/// Outcomes below this probability carry no post-measurement state.
pub const ZERO_PROBABILITY: f64 = 1e-14;

const UNIT_TOL: f64 = 1e-12;
const ORTHONORMAL_TOL: f64 = 1e-10;

/// Pure state of the path (control) system.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlState {
    amplitudes: Vec<C64>,
}

impl ControlState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if amplitudes.is_empty() || (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::BadNormalization(format!(
                "control state norm {n}"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// `|+⟩ = (|0⟩ + |1⟩)/√2`
    pub fn plus() -> Self {
        Self::uniform(2)
    }

    /// `(1/√N) Σ_j |j⟩`, i.e. the zeroth Fourier vector.
    pub fn uniform(n: usize) -> Self {
        let a = C64::new(1.0 / (n as f64).sqrt(), 0.0);
        Self {
            amplitudes: vec![a; n],
        }
    }

    pub fn computational(k: usize, n: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::BadIndex(format!("control basis state {k} of {n}")));
        }
        let mut amplitudes = vec![ZERO; n];
        amplitudes[k] = ONE;
        Ok(Self { amplitudes })
    }

    /// Accepts a control density matrix only if it is pure.
    pub fn from_density(rho: &ComplexMatrix) -> Result<Self> {
        let dm = DensityMatrix::new(vec![rho.rows()], rho.clone())?;
        let purity = dm.purity();
        if (purity - 1.0).abs() > 1e-10 {
            return Err(Error::MixedControl(purity));
        }
        let eig = crate::numerics::eig_hermitian(rho)?;
        Self::new(eig.vector(0))
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn density(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.amplitudes)
    }
}

/// Orthonormal basis in which the control is measured.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBasis {
    vectors: Vec<Vec<C64>>,
}

impl MeasurementBasis {
    pub fn new(vectors: Vec<Vec<C64>>) -> Result<Self> {
        let n = vectors.len();
        if n == 0 || vectors.iter().any(|v| v.len() != n) {
            return Err(Error::DimMismatch(
                "measurement basis must be N vectors of length N".into(),
            ));
        }
        for i in 0..n {
            for j in 0..n {
                let g = inner(&vectors[i], &vectors[j]);
                let expected = if i == j { ONE } else { ZERO };
                if (g - expected).norm() > ORTHONORMAL_TOL {
                    return Err(Error::BadNormalization(format!(
                        "basis vectors {i},{j} have overlap {g}"
                    )));
                }
            }
        }
        Ok(Self { vectors })
    }

    /// `{|+⟩, |−⟩}`
    pub fn plus_minus() -> Self {
        Self::fourier(2)
    }

    /// `|k̃⟩ = (1/√N) Σ_l ω^{kl} |l⟩`, `ω = e^{2πi/N}`; `|0̃⟩` is the uniform state.
    pub fn fourier(n: usize) -> Self {
        let s = 1.0 / (n as f64).sqrt();
        let vectors = (0..n)
            .map(|k| {
                (0..n)
                    .map(|l| C64::from_polar(s, 2.0 * PI * ((k * l) % n) as f64 / n as f64))
                    .collect()
            })
            .collect();
        Self { vectors }
    }

    pub fn computational(n: usize) -> Self {
        let vectors = (0..n)
            .map(|k| (0..n).map(|l| if k == l { ONE } else { ZERO }).collect())
            .collect();
        Self { vectors }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, k: usize) -> &[C64] {
        &self.vectors[k]
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }
}

/// One experiment: channels on the paths, target input, control preparation and readout basis.
#[derive(Clone, Debug)]
pub struct SuperpositionScenario {
    channels: Vec<VacuumExtendedChannel>,
    input: DensityMatrix,
    control: ControlState,
    basis: MeasurementBasis,
}

impl SuperpositionScenario {
    pub fn new(
        channels: Vec<VacuumExtendedChannel>,
        input: DensityMatrix,
        control: ControlState,
        basis: MeasurementBasis,
    ) -> Result<Self> {
        let target_dim = check_channels(&channels)?;
        if input.dim() != target_dim {
            return Err(Error::DimMismatch(format!(
                "input dimension {} vs channel dimension {target_dim}",
                input.dim()
            )));
        }
        if control.dim() != channels.len() || basis.len() != channels.len() {
            return Err(Error::DimMismatch(format!(
                "{} channels, control dimension {}, basis size {}",
                channels.len(),
                control.dim(),
                basis.len()
            )));
        }
        Ok(Self {
            channels,
            input,
            control,
            basis,
        })
    }

    pub fn channels(&self) -> &[VacuumExtendedChannel] {
        &self.channels
    }

    pub fn input(&self) -> &DensityMatrix {
        &self.input
    }

    pub fn control(&self) -> &ControlState {
        &self.control
    }

    pub fn basis(&self) -> &MeasurementBasis {
        &self.basis
    }

    pub fn branches(&self) -> usize {
        self.channels.len()
    }
}

/// Result of projecting the control onto one basis vector.
#[derive(Clone, Debug)]
pub struct MeasurementOutcome {
    pub outcome_index: usize,
    pub probability: f64,
    /// Normalized target state; `None` when the outcome has zero probability.
    pub post_state: Option<DensityMatrix>,
}

fn check_channels(channels: &[VacuumExtendedChannel]) -> Result<usize> {
    if channels.len() < 2 {
        return Err(Error::DimMismatch(format!(
            "superposition needs at least two channels, got {}",
            channels.len()
        )));
    }
    let d = channels[0].dim();
    if let Some(bad) = channels.iter().find(|c| c.dim() != d) {
        return Err(Error::DimMismatch(format!(
            "channel {:?} acts on dimension {}, expected {d}",
            bad.label(),
            bad.dim()
        )));
    }
    if d * channels.len() > MAX_JOINT_DIM {
        return Err(Error::TooLarge(d * channels.len()));
    }
    Ok(d)
}

/// Lexicographic multi-indices over the Kraus counts, last index fastest.
pub fn multi_indices(counts: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = counts.iter().product();
    let mut out = Vec::with_capacity(total);
    if counts.is_empty() || total == 0 {
        return out;
    }
    let mut idx = vec![0usize; counts.len()];
    loop {
        out.push(idx.clone());
        let mut pos = counts.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < counts[pos] {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Product of vacuum amplitudes of every channel except `skip`.
fn vacuum_weight(channels: &[VacuumExtendedChannel], idx: &[usize], skip: usize) -> C64 {
    channels
        .iter()
        .zip(idx)
        .enumerate()
        .filter(|&(k, _)| k != skip)
        .map(|(_, (ch, &i))| ch.vacuum_amplitudes()[i])
        .product()
}

/// Global Kraus operators `S_i` on target ⊗ control, in lexicographic multi-index order.
pub fn global_kraus(channels: &[VacuumExtendedChannel]) -> Result<Vec<ComplexMatrix>> {
    check_channels(channels)?;
    let n = channels.len();
    let counts: Vec<usize> = channels.iter().map(VacuumExtendedChannel::len).collect();
    let ops = multi_indices(&counts)
        .into_iter()
        .map(|idx| {
            let d = channels[0].dim();
            let mut s = ComplexMatrix::zeros(d * n, d * n);
            for l in 0..n {
                let w = vacuum_weight(channels, &idx, l);
                if w == ZERO {
                    continue;
                }
                let mut branch = ComplexMatrix::zeros(n, n);
                branch[(l, l)] = ONE;
                s += &kron(&channels[l].kraus()[idx[l]].scale(w), &branch);
            }
            s
        })
        .collect();
    Ok(ops)
}

/// `Σ_i S_i (ρ_t ⊗ |c⟩⟨c|) S_i†`, dims `[target…, N]`.
pub fn apply(scenario: &SuperpositionScenario) -> Result<DensityMatrix> {
    let ops = global_kraus(&scenario.channels)?;
    let joint_in = kron(scenario.input.matrix(), &scenario.control.density());
    let d = joint_in.rows();
    let mut out = ComplexMatrix::zeros(d, d);
    for s in &ops {
        out += &s.conjugate(&joint_in);
    }
    let mut dims = scenario.input.dims().to_vec();
    dims.push(scenario.branches());
    DensityMatrix::new(dims, out.hermitian_part())
}

/// Projects the control (the last subsystem of `joint`) onto each basis vector.
pub fn measure_control(
    joint: &DensityMatrix,
    basis: &MeasurementBasis,
) -> Result<Vec<MeasurementOutcome>> {
    let n = basis.len();
    let (&control_dim, target_dims) = joint
        .dims()
        .split_last()
        .ok_or_else(|| Error::DimMismatch("joint state has no subsystems".into()))?;
    if control_dim != n {
        return Err(Error::DimMismatch(format!(
            "control dimension {control_dim} vs basis size {n}"
        )));
    }
    let d = joint.dim() / n;
    let rho = joint.matrix();

    let outcomes = (0..n)
        .map(|k| {
            let b = basis.vector(k);
            // (I ⊗ ⟨b|) ρ (I ⊗ |b⟩)
            let mut m = ComplexMatrix::zeros(d, d);
            for a in 0..d {
                for c in 0..d {
                    let mut s = ZERO;
                    for l in 0..n {
                        let bl = b[l].conj();
                        if bl == ZERO {
                            continue;
                        }
                        for r in 0..n {
                            s += bl * rho[(a * n + l, c * n + r)] * b[r];
                        }
                    }
                    m[(a, c)] = s;
                }
            }
            finish_outcome(k, target_dims.to_vec(), m)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(outcomes)
}

fn finish_outcome(k: usize, dims: Vec<usize>, m: ComplexMatrix) -> Result<MeasurementOutcome> {
    let probability = m.trace().re.max(0.0);
    let post_state = if probability > ZERO_PROBABILITY {
        Some(DensityMatrix::from_unnormalized(dims, m)?)
    } else {
        None
    };
    Ok(MeasurementOutcome {
        outcome_index: k,
        probability,
        post_state,
    })
}

/// `measure_control(apply(scenario))`
pub fn run(scenario: &SuperpositionScenario) -> Result<Vec<MeasurementOutcome>> {
    measure_control(&apply(scenario)?, &scenario.basis)
}

/// Single outcome computed without forming the joint state.
///
/// With a pure control `|c⟩` the unnormalized post-state for `|b_k⟩` is
/// `Σ_i A_i ρ_t A_i†` where `A_i = ⟨b_k| S_i |c⟩` acts on the target alone.
/// Used on hot paths (optimization); agrees with [`run`] to rounding.
pub fn conditional_outcome(
    scenario: &SuperpositionScenario,
    k: usize,
) -> Result<MeasurementOutcome> {
    if k >= scenario.basis.len() {
        return Err(Error::BadIndex(format!(
            "outcome {k} of {}",
            scenario.basis.len()
        )));
    }
    let channels = &scenario.channels;
    let b = scenario.basis.vector(k);
    let c = scenario.control.amplitudes();
    let d = scenario.input.dim();
    let rho = scenario.input.matrix();
    let counts: Vec<usize> = channels.iter().map(VacuumExtendedChannel::len).collect();

    let mut out = ComplexMatrix::zeros(d, d);
    for idx in multi_indices(&counts) {
        let mut a = ComplexMatrix::zeros(d, d);
        let mut any = false;
        for (l, ch) in channels.iter().enumerate() {
            let w = vacuum_weight(channels, &idx, l) * b[l].conj() * c[l];
            if w == ZERO {
                continue;
            }
            a += &ch.kraus()[idx[l]].scale(w);
            any = true;
        }
        if any {
            out += &a.conjugate(rho);
        }
    }
    finish_outcome(k, scenario.input.dims().to_vec(), out.hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{
        bit_flip_correlated, depolarizing_correlated, memoryless_bitflip, pauli_string,
        phase_flip_correlated, single_qubit_x, unitary_channel,
    };
    use crate::numerics::real_vec;

    const S2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn ideal_bell() -> SuperpositionScenario {
        SuperpositionScenario::new(
            vec![
                unitary_channel(pauli_string("XX").unwrap()).unwrap(),
                unitary_channel(pauli_string("ZZ").unwrap()).unwrap(),
            ],
            DensityMatrix::zero_qubits(2),
            ControlState::plus(),
            MeasurementBasis::plus_minus(),
        )
        .unwrap()
    }

    fn proj(v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::projector(&real_vec(v))
    }

    #[test]
    fn unitary_pair_gives_single_controlled_operator() {
        let u1 = pauli_string("XX").unwrap();
        let u2 = pauli_string("ZZ").unwrap();
        let ops = global_kraus(&[
            unitary_channel(u1.clone()).unwrap(),
            unitary_channel(u2.clone()).unwrap(),
        ])
        .unwrap();
        assert_eq!(ops.len(), 1);
        let expected = &kron(&u1, &proj(&[1.0, 0.0])) + &kron(&u2, &proj(&[0.0, 1.0]));
        assert!(ops[0].max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn two_channel_operators_match_pairwise_formula() {
        let (p, q) = (0.3, 0.6);
        let alpha = [c(0.8), c(0.6)];
        let beta = [c(-S2), c(S2)];
        let f = bit_flip_correlated(p, 2, alpha).unwrap();
        let nch = phase_flip_correlated(q, 2, beta).unwrap();
        let ops = global_kraus(&[f.clone(), nch.clone()]).unwrap();
        assert_eq!(ops.len(), 16);
        let p0 = proj(&[1.0, 0.0]);
        let p1 = proj(&[0.0, 1.0]);
        for i in 0..4 {
            for j in 0..4 {
                let a_i = f.vacuum_amplitudes()[i];
                let b_j = nch.vacuum_amplitudes()[j];
                let expected = &kron(&f.kraus()[i].scale(b_j), &p0)
                    + &kron(&nch.kraus()[j].scale(a_i), &p1);
                assert!(ops[i * 4 + j].max_abs_diff(&expected) < 1e-15);
            }
        }
        // the four nonzero weights are √(1-p),√p × √(1-q),√q
        let nonzero = ops.iter().filter(|s| s.max_abs() > 0.0).count();
        assert!(nonzero >= 4);
    }

    #[test]
    fn three_memoryless_channels_expand_by_hand() {
        let a = [c(0.6), c(0.8)];
        let chans: Vec<_> = (0..3)
            .map(|i| memoryless_bitflip(i, 3, 1.0, a).unwrap())
            .collect();
        let ops = global_kraus(&chans).unwrap();
        assert_eq!(ops.len(), 8);
        // p = 1 kills every Kraus index 0, so S_(1,1,1) = Σ_l α_1² X_l ⊗ |l⟩⟨l|
        let mut expected = ComplexMatrix::zeros(24, 24);
        for l in 0..3 {
            let mut e = ComplexMatrix::zeros(3, 3);
            e[(l, l)] = ONE;
            expected += &kron(&single_qubit_x(l, 3).unwrap().scale_real(0.64), &e);
        }
        assert!(ops[7].max_abs_diff(&expected) < 1e-15);
        // S_(0,1,1): only branch 0 can carry the vanishing identity Kraus, others
        // carry X_l with vacuum factor α_0 α_1
        let mut expected = ComplexMatrix::zeros(24, 24);
        for l in 1..3 {
            let mut e = ComplexMatrix::zeros(3, 3);
            e[(l, l)] = ONE;
            expected += &kron(&single_qubit_x(l, 3).unwrap().scale_real(0.6 * 0.8), &e);
        }
        assert!(ops[3].max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn ideal_bell_outcomes() {
        let out = run(&ideal_bell()).unwrap();
        let plus = proj(&[S2, 0.0, 0.0, S2]);
        let minus = proj(&[S2, 0.0, 0.0, -S2]);
        assert!((out[0].probability - 0.5).abs() < 1e-14);
        assert!((out[1].probability - 0.5).abs() < 1e-14);
        assert!(out[0].post_state.as_ref().unwrap().matrix().max_abs_diff(&plus) < 1e-14);
        assert!(out[1].post_state.as_ref().unwrap().matrix().max_abs_diff(&minus) < 1e-14);
    }

    #[test]
    fn ideal_bell_joint_state_is_pure() {
        let joint = apply(&ideal_bell()).unwrap();
        // S(|00⟩⊗|+⟩) = (|11⟩|0⟩ + |00⟩|1⟩)/√2
        let mut v = vec![0.0; 8];
        v[6] = S2; // |11⟩|0⟩
        v[1] = S2; // |00⟩|1⟩
        assert!(joint.matrix().max_abs_diff(&proj(&v)) < 1e-14);
    }

    #[test]
    fn identity_channels_leave_state_untouched() {
        let id = unitary_channel(ComplexMatrix::identity(2)).unwrap();
        let input = DensityMatrix::from_pure(vec![2], &real_vec(&[0.6, 0.8])).unwrap();
        let sc = SuperpositionScenario::new(
            vec![id.clone(), id],
            input.clone(),
            ControlState::plus(),
            MeasurementBasis::plus_minus(),
        )
        .unwrap();
        let joint = apply(&sc).unwrap();
        let expected = kron(input.matrix(), &ControlState::plus().density());
        assert!(joint.matrix().max_abs_diff(&expected) < 1e-15);
        let out = run(&sc).unwrap();
        assert!((out[0].probability - 1.0).abs() < 1e-14);
        assert!(out[1].post_state.is_none());
        assert!(out[0].post_state.as_ref().unwrap().matrix().max_abs_diff(input.matrix()) < 1e-14);
    }

    #[test]
    fn computational_readout_gives_populations() {
        let id = unitary_channel(ComplexMatrix::identity(2)).unwrap();
        let ctrl = ControlState::new(real_vec(&[0.6, 0.8])).unwrap();
        let sc = SuperpositionScenario::new(
            vec![id.clone(), id],
            DensityMatrix::zero_qubits(1),
            ctrl,
            MeasurementBasis::computational(2),
        )
        .unwrap();
        let out = run(&sc).unwrap();
        assert!((out[0].probability - 0.36).abs() < 1e-14);
        assert!((out[1].probability - 0.64).abs() < 1e-14);
    }

    #[test]
    fn conditional_path_agrees_with_joint_path() {
        let s3 = 1.0 / 3f64.sqrt();
        let f = depolarizing_correlated(0.7, 2, [c(0.1), c(0.7), c(-0.5), c(-(1.0f64 - 0.75).sqrt())]).unwrap();
        let g = depolarizing_correlated(0.4, 2, [ZERO, c(-s3), c(s3), c(s3)]).unwrap();
        let sc = SuperpositionScenario::new(
            vec![f, g],
            DensityMatrix::zero_qubits(2),
            ControlState::plus(),
            MeasurementBasis::plus_minus(),
        )
        .unwrap();
        let joint = run(&sc).unwrap();
        for (k, via_joint) in joint.iter().enumerate() {
            let direct = conditional_outcome(&sc, k).unwrap();
            assert!((direct.probability - via_joint.probability).abs() < 1e-13);
            let a = direct.post_state.unwrap();
            let b = via_joint.post_state.clone().unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
        }
    }

    #[test]
    fn scenario_validation() {
        let xx = unitary_channel(pauli_string("XX").unwrap()).unwrap();
        let x = unitary_channel(pauli_string("X").unwrap()).unwrap();
        assert!(global_kraus(std::slice::from_ref(&xx)).is_err());
        assert!(matches!(
            global_kraus(&[xx.clone(), x]),
            Err(Error::DimMismatch(_))
        ));
        assert!(SuperpositionScenario::new(
            vec![xx.clone(), xx.clone()],
            DensityMatrix::zero_qubits(2),
            ControlState::uniform(3),
            MeasurementBasis::plus_minus(),
        )
        .is_err());
        assert!(SuperpositionScenario::new(
            vec![xx.clone(), xx],
            DensityMatrix::zero_qubits(3),
            ControlState::plus(),
            MeasurementBasis::plus_minus(),
        )
        .is_err());
    }

    #[test]
    fn joint_dimension_cap() {
        let big = unitary_channel(ComplexMatrix::identity(2048)).unwrap();
        let err = global_kraus(&[big.clone(), big.clone(), big]).unwrap_err();
        assert_eq!(err, Error::TooLarge(6144));
    }

    #[test]
    fn mixed_control_rejected() {
        let mixed = ComplexMatrix::from_real_diag(&[0.5, 0.5]);
        assert!(matches!(
            ControlState::from_density(&mixed),
            Err(Error::MixedControl(_))
        ));
        let pure = ControlState::plus().density();
        let back = ControlState::from_density(&pure).unwrap();
        assert!((inner(back.amplitudes(), ControlState::plus().amplitudes()).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fourier_basis_is_orthonormal() {
        for n in 1..6 {
            let b = MeasurementBasis::fourier(n);
            assert!(MeasurementBasis::new(b.vectors().to_vec()).is_ok());
        }
        assert!(MeasurementBasis::new(vec![real_vec(&[1.0, 0.0]), real_vec(&[1.0, 0.0])]).is_err());
    }

    #[test]
    fn multi_index_order_is_lexicographic() {
        assert_eq!(
            multi_indices(&[2, 3]),
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![1, 2]
            ]
        );
        assert!(multi_indices(&[]).is_empty());
    }

    #[test]
    fn minus_outcome_equals_plus_outcome_with_flipped_amplitudes() {
        let alpha = [c(0.3), c(-0.5), c(0.7), c(-(1.0f64 - 0.83).sqrt())];
        let beta = [c(0.1), c(0.2), c(-0.4), c((1.0f64 - 0.21).sqrt())];
        let flipped = alpha.map(|a| -a);
        let make = |a: [C64; 4]| {
            SuperpositionScenario::new(
                vec![
                    depolarizing_correlated(0.6, 2, a).unwrap(),
                    depolarizing_correlated(0.35, 2, beta).unwrap(),
                ],
                DensityMatrix::zero_qubits(2),
                ControlState::plus(),
                MeasurementBasis::plus_minus(),
            )
            .unwrap()
        };
        let minus = run(&make(alpha)).unwrap()[1].post_state.clone().unwrap();
        let plus = run(&make(flipped)).unwrap()[0].post_state.clone().unwrap();
        assert!(minus.matrix().max_abs_diff(plus.matrix()) < 1e-10);
    }

    #[test]
    fn branch_zero_control_reproduces_channel_zero() {
        let f = depolarizing_correlated(0.45, 2, [c(0.5), c(0.5), c(0.5), c(0.5)]).unwrap();
        let g = bit_flip_correlated(0.8, 2, [c(0.6), c(0.8)]).unwrap();
        let input = DensityMatrix::from_pure(vec![2, 2], &real_vec(&[0.6, 0.0, 0.48, 0.64])).unwrap();
        let sc = SuperpositionScenario::new(
            vec![f.clone(), g],
            input.clone(),
            ControlState::computational(0, 2).unwrap(),
            MeasurementBasis::plus_minus(),
        )
        .unwrap();
        let reduced = apply(&sc).unwrap().partial_trace(&[0, 1]).unwrap();
        let direct = f.apply(input.matrix());
        assert!(reduced.matrix().max_abs_diff(&direct) < 1e-10);
    }
}
