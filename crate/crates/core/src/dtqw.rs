//! Discrete-time quantum walk on a cycle, and its identification with a
//! two-branch spatial superposition.
//!
//! Basis index is `position * 2 + coin`; coin `0` steps right, coin `1` steps left.

use crate::error::{Error, Result};
use crate::numerics::{kron, norm, ComplexMatrix, C64, ONE, ZERO};

const UNITARY_TOL: f64 = 1e-10;
const EMBEDDING_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct WalkSpec {
    pub positions: usize,
    /// 2×2 coin, rows `[[c00, c01], [c10, c11]]`.
    pub coin: ComplexMatrix,
    pub steps: usize,
    /// Pure state on position ⊗ coin.
    pub initial: Vec<C64>,
}

impl WalkSpec {
    /// Walker at `start` with the given coin state.
    pub fn localized(
        positions: usize,
        start: usize,
        coin_state: [C64; 2],
        coin: ComplexMatrix,
        steps: usize,
    ) -> Result<Self> {
        if start >= positions {
            return Err(Error::BadIndex(format!("start {start} of {positions} positions")));
        }
        let mut initial = vec![ZERO; 2 * positions];
        initial[2 * start] = coin_state[0];
        initial[2 * start + 1] = coin_state[1];
        let spec = Self {
            positions,
            coin,
            steps,
            initial,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.positions == 0 {
            return Err(Error::DimMismatch("walk needs at least one position".into()));
        }
        if self.coin.rows() != 2 || self.coin.cols() != 2 {
            return Err(Error::DimMismatch(format!(
                "coin must be 2x2, got {}x{}",
                self.coin.rows(),
                self.coin.cols()
            )));
        }
        let defect = self.coin.unitary_defect();
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        if self.initial.len() != 2 * self.positions {
            return Err(Error::DimMismatch(format!(
                "initial state has {} amplitudes, walk space has {}",
                self.initial.len(),
                2 * self.positions
            )));
        }
        let n = norm(&self.initial);
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::BadNormalization(format!("initial state norm {n}")));
        }
        Ok(())
    }
}

pub fn hadamard() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real_rows(&[[s, s], [s, -s]])
}

/// `T = Σ_i |i+1⟩⟨i| ⊗ |0⟩⟨0| + |i−1⟩⟨i| ⊗ |1⟩⟨1|` on a cycle of `positions` sites.
pub fn shift_operator(positions: usize) -> ComplexMatrix {
    let d = 2 * positions;
    let mut t = ComplexMatrix::zeros(d, d);
    for i in 0..positions {
        let right = (i + 1) % positions;
        let left = (i + positions - 1) % positions;
        t[(2 * right, 2 * i)] = ONE;
        t[(2 * left + 1, 2 * i + 1)] = ONE;
    }
    t
}

/// One walk step `U = T (I ⊗ C)`.
pub fn step_operator(spec: &WalkSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let coin = kron(&ComplexMatrix::identity(spec.positions), &spec.coin);
    Ok(shift_operator(spec.positions).matmul(&coin))
}

/// Position distributions after 0, 1, …, `steps` steps.
pub fn evolve(spec: &WalkSpec) -> Result<Vec<Vec<f64>>> {
    let u = step_operator(spec)?;
    let mut psi = spec.initial.clone();
    let mut out = Vec::with_capacity(spec.steps + 1);
    out.push(position_distribution(&psi));
    for _ in 0..spec.steps {
        psi = u.apply(&psi);
        out.push(position_distribution(&psi));
    }
    Ok(out)
}

pub fn position_distribution(psi: &[C64]) -> Vec<f64> {
    psi.chunks(2)
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum())
        .collect()
}

/// Largest `|P(start + d) − P(start − d)|` on the cycle.
pub fn asymmetry(dist: &[f64], start: usize) -> f64 {
    let n = dist.len();
    (0..n)
        .map(|d| (dist[(start + d) % n] - dist[(start + n - d % n) % n]).abs())
        .fold(0.0, f64::max)
}

/// Whether the superposition operator `U1 ⊗ |0⟩⟨0| + U2 ⊗ |1⟩⟨1|` is the
/// trivial-coin walk step on a cycle with `dim(U1)` sites.
///
/// The control qubit plays the coin, so the match holds exactly when `U1`
/// shifts right and `U2` shifts left.
pub fn verify_embedding(u1: &ComplexMatrix, u2: &ComplexMatrix) -> Result<bool> {
    if !u1.is_square() || u1.rows() != u2.rows() || u1.cols() != u2.cols() {
        return Err(Error::DimMismatch(format!(
            "U1 is {}x{}, U2 is {}x{}",
            u1.rows(),
            u1.cols(),
            u2.rows(),
            u2.cols()
        )));
    }
    for u in [u1, u2] {
        let defect = u.unitary_defect();
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary(defect));
        }
    }
    let p0 = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
    let p1 = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
    let s = &kron(u1, &p0) + &kron(u2, &p1);
    Ok(s.max_abs_diff(&shift_operator(u1.rows())) <= EMBEDDING_TOL)
}

/// Cyclic shift `|i⟩ → |i + k mod n⟩`.
pub fn cyclic_shift(n: usize, k: isize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        let j = (i as isize + k).rem_euclid(n as isize) as usize;
        m[(j, i)] = ONE;
    }
    m
}
