use super::eigen::{min_eigenvalue, HERMITIAN_TOL};
use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Trace tolerance for states produced by the simulator.
pub const TRACE_TOL: f64 = 1e-10;

/// A density operator over an ordered list of subsystems.
///
/// Subsystem 0 is the leftmost (most significant) tensor factor.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Wraps a matrix after checking shape, Hermiticity and unit trace.
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        check_shape(&dims, &matrix)?;
        let defect = matrix.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NonHermitian(defect));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::BadNormalization(format!(
                "density matrix trace is {tr}"
            )));
        }
        Ok(Self { dims, matrix })
    }

    /// Normalizes a positive operator to unit trace.
    pub fn from_unnormalized(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        check_shape(&dims, &matrix)?;
        let tr = matrix.trace().re;
        if tr <= 0.0 {
            return Err(Error::BadNormalization(format!(
                "cannot normalize operator with trace {tr}"
            )));
        }
        Self::new(dims, matrix.scale_real(1.0 / tr).hermitian_part())
    }

    pub fn from_pure(dims: Vec<usize>, psi: &[C64]) -> Result<Self> {
        let n = super::matrix::norm(psi);
        if n == 0.0 {
            return Err(Error::BadNormalization("zero state vector".into()));
        }
        let unit: Vec<C64> = psi.iter().map(|z| z / n).collect();
        Self::new(dims, ComplexMatrix::projector(&unit))
    }

    /// `|b⟩⟨b|` for a computational basis index over `dims`.
    pub fn basis_state(dims: Vec<usize>, index: usize) -> Result<Self> {
        let d: usize = dims.iter().product();
        if index >= d {
            return Err(Error::BadIndex(format!("basis index {index} >= {d}")));
        }
        let mut m = ComplexMatrix::zeros(d, d);
        m[(index, index)] = C64::new(1.0, 0.0);
        Self::new(dims, m)
    }

    /// `n`-qubit `|0…0⟩⟨0…0|`.
    pub fn zero_qubits(n: usize) -> Self {
        Self::basis_state(vec![2; n], 0).expect("index 0 is always valid")
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        let m = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
        Self { dims, matrix: m }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).trace().re
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        min_eigenvalue(&self.matrix)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            dims,
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        partial_trace(self, keep)
    }
}

fn check_shape(dims: &[usize], m: &ComplexMatrix) -> Result<()> {
    let d: usize = dims.iter().product();
    if !m.is_square() || m.rows() != d {
        return Err(Error::DimMismatch(format!(
            "dims {dims:?} imply {d}x{d}, matrix is {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Reduced state on the subsystems listed in `keep` (in ascending order).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let (dims, m) = partial_trace_matrix(&rho.dims, &rho.matrix, keep)?;
    Ok(DensityMatrix { dims, matrix: m })
}

/// Partial trace on a bare operator; no normalization or positivity assumptions.
pub fn partial_trace_matrix(
    dims: &[usize],
    m: &ComplexMatrix,
    keep: &[usize],
) -> Result<(Vec<usize>, ComplexMatrix)> {
    check_shape(dims, m)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(Error::BadIndex(format!("duplicate subsystem in {keep:?}")));
    }
    if let Some(&bad) = kept.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::BadIndex(format!(
            "subsystem {bad} out of range for {} subsystems",
            dims.len()
        )));
    }

    let n = dims.len();
    let is_kept: Vec<bool> = (0..n).map(|k| kept.contains(&k)).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = (0..n).filter(|&k| !is_kept[k]).map(|k| dims[k]).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = traced_dims.iter().product();

    // strides of each subsystem in the full index
    let mut strides = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }

    let full_index = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut idx = 0;
        let mut rem_k = kept_idx;
        let mut rem_t = traced_idx;
        // decode mixed-radix digits from the least significant subsystem
        for k in (0..n).rev() {
            let digit = if is_kept[k] {
                let d = rem_k % dims[k];
                rem_k /= dims[k];
                d
            } else {
                let d = rem_t % dims[k];
                rem_t /= dims[k];
                d
            };
            idx += digit * strides[k];
        }
        idx
    };

    let offsets: Vec<Vec<usize>> = (0..dk)
        .map(|a| (0..dt).map(|t| full_index(a, t)).collect())
        .collect();

    let mut out = ComplexMatrix::zeros(dk, dk);
    for a in 0..dk {
        for b in 0..dk {
            let mut s = C64::new(0.0, 0.0);
            for t in 0..dt {
                s += m[(offsets[a][t], offsets[b][t])];
            }
            out[(a, b)] = s;
        }
    }
    Ok((kept_dims, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::real_vec;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn bell_reduction_is_maximally_mixed() {
        let bell = DensityMatrix::from_pure(vec![2, 2], &real_vec(&[S, 0.0, 0.0, S])).unwrap();
        let r = bell.partial_trace(&[0]).unwrap();
        assert!(r
            .matrix()
            .max_abs_diff(&ComplexMatrix::from_real_diag(&[0.5, 0.5]))
            < 1e-15);
    }

    #[test]
    fn product_state_factorizes() {
        let a = DensityMatrix::from_pure(vec![2], &real_vec(&[0.6, 0.8])).unwrap();
        let b = DensityMatrix::maximally_mixed(vec![3]);
        let ab = a.tensor(&b);
        assert!(ab.partial_trace(&[0]).unwrap().matrix().max_abs_diff(a.matrix()) < 1e-15);
        assert!(ab.partial_trace(&[1]).unwrap().matrix().max_abs_diff(b.matrix()) < 1e-15);
    }

    #[test]
    fn ghz_single_qubit_reduction() {
        let mut v = vec![0.0; 8];
        v[0] = S;
        v[7] = S;
        let ghz = DensityMatrix::from_pure(vec![2, 2, 2], &real_vec(&v)).unwrap();
        for k in 0..3 {
            let r = ghz.partial_trace(&[k]).unwrap();
            assert!(r
                .matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diag(&[0.5, 0.5]))
                < 1e-15);
        }
    }

    #[test]
    fn tracing_everything_leaves_the_trace() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 3]);
        let r = rho.partial_trace(&[]).unwrap();
        assert_eq!(r.dims(), &[] as &[usize]);
        assert!((r.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bad_indices() {
        let rho = DensityMatrix::zero_qubits(2);
        assert!(matches!(rho.partial_trace(&[2]), Err(Error::BadIndex(_))));
        assert!(matches!(rho.partial_trace(&[0, 0]), Err(Error::BadIndex(_))));
    }

    #[test]
    fn constructor_checks() {
        let m = ComplexMatrix::from_real_diag(&[0.5, 0.4]);
        assert!(DensityMatrix::new(vec![2], m.clone()).is_err());
        assert!(DensityMatrix::from_unnormalized(vec![2], m).is_ok());
        assert!(DensityMatrix::new(vec![3], ComplexMatrix::identity(2)).is_err());
    }
}
