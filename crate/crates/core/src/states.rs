//! Bipartite pure and mixed states on `C^d (x) C^d`.
//!
//! The basis vector `|i>|j>` sits at flat index `i * d_b + j`; `i` labels the
//! retained (first) subsystem and `j` the transmitted (second) one.

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, ONE, ZERO};

/// Tolerance on the Euclidean norm of a pure state.
pub const NORM_TOL: f64 = 1e-12;
/// Hermiticity and trace tolerance for density operators.
pub const DENSITY_TOL: f64 = 1e-12;
/// Most negative eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;
/// Schmidt coefficients within this distance of `1/sqrt(d)` count as maximal.
pub const MAX_ENTANGLED_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// A unit vector on `C^d (x) C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureBipartiteState {
    dim: usize,
    amplitudes: CVec,
}

impl PureBipartiteState {
    pub fn new(dim: usize, amplitudes: CVec) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { dim, min: 2 });
        }
        if amplitudes.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm {norm} differs from 1")));
        }
        Ok(Self { dim, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm before validating.
    pub fn normalized(dim: usize, amplitudes: CVec) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Self::new(dim, amplitudes.unscale(norm))
    }

    /// The product basis state `|i>|j>`.
    pub fn basis(dim: usize, i: usize, j: usize) -> Result<Self> {
        let mut amps = CVec::zeros(dim * dim);
        if i >= dim || j >= dim {
            return Err(Error::InvalidState(format!("basis index ({i}, {j}) out of range")));
        }
        amps[i * dim + j] = ONE;
        Self::new(dim, amps)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amplitudes
    }

    pub fn amplitude(&self, i: usize, j: usize) -> num_complex::Complex64 {
        self.amplitudes[i * self.dim + j]
    }

    /// The `d x d` matrix `M[i][j] = <ij|psi>`.
    pub fn coefficient_matrix(&self) -> CMat {
        linalg::unvec_rows(&self.amplitudes, self.dim, self.dim)
    }

    pub fn from_coefficient_matrix(m: &CMat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidState("coefficient matrix must be square".into()));
        }
        Self::new(m.nrows(), linalg::vec_rows(m))
    }

    pub fn projector(&self) -> DensityOperator {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityOperator::from_trusted(self.dim, self.dim, m)
    }

    /// `(U (x) V)|psi>`.
    pub fn apply_local(&self, u: &CMat, v: &CMat) -> Result<Self> {
        check_square(u, self.dim)?;
        check_square(v, self.dim)?;
        let m = u * self.coefficient_matrix() * v.transpose();
        Self::from_coefficient_matrix(&m)
    }
}

/// A Hermitian, positive semidefinite, unit-trace operator on `C^{d_a} (x) C^{d_b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dim_a: usize,
    dim_b: usize,
    matrix: CMat,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and numerical positivity.
    pub fn new(dim_a: usize, dim_b: usize, matrix: CMat) -> Result<Self> {
        let rho = Self::from_trusted(dim_a, dim_b, matrix);
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps a matrix known to be a (possibly unnormalized) positive operator.
    pub(crate) fn from_trusted(dim_a: usize, dim_b: usize, matrix: CMat) -> Self {
        debug_assert_eq!(matrix.shape(), (dim_a * dim_b, dim_a * dim_b));
        Self { dim_a, dim_b, matrix }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim_a * self.dim_b;
        if self.matrix.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.matrix.nrows(),
            });
        }
        let herm = linalg::hermiticity_defect(&self.matrix);
        if herm > DENSITY_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm:.3e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > DENSITY_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = self.eigenvalues()[0];
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let n = dim * dim;
        Self::from_trusted(dim, dim, CMat::identity(n, n).unscale(n as f64))
    }

    /// `rho_a (x) rho_b` for single-party density matrices.
    pub fn product(rho_a: &CMat, rho_b: &CMat) -> Result<Self> {
        let m = linalg::kron(rho_a, rho_b);
        Self::new(rho_a.nrows(), rho_b.nrows(), m)
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Eigenvalues sorted ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues().last().expect("non-empty operator")
    }

    /// `(U (x) V) rho (U (x) V)^H`.
    pub fn conjugate_local(&self, u: &CMat, v: &CMat) -> Result<Self> {
        check_square(u, self.dim_a)?;
        check_square(v, self.dim_b)?;
        let uv = linalg::kron(u, v);
        let m = &uv * &self.matrix * uv.adjoint();
        Ok(Self::from_trusted(self.dim_a, self.dim_b, m))
    }
}

/// Schmidt coefficients (non-increasing) and the matching local bases.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<CVec>,
    pub right_basis: Vec<CVec>,
}

impl SchmidtDecomposition {
    /// Largest minus smallest coefficient.
    pub fn spread(&self) -> f64 {
        let max = self.coefficients.first().copied().unwrap_or(0.0);
        let min = self.coefficients.last().copied().unwrap_or(0.0);
        max - min
    }

    pub fn is_maximally_entangled(&self) -> bool {
        let target = 1.0 / (self.coefficients.len() as f64).sqrt();
        self.coefficients
            .iter()
            .all(|c| (c - target).abs() < MAX_ENTANGLED_TOL)
    }
}

/// `|Phi+> = (1/sqrt d) sum_i |ii>`.
pub fn max_entangled(d: usize) -> Result<PureBipartiteState> {
    if d < 2 {
        return Err(Error::InvalidDimension { dim: d, min: 2 });
    }
    let mut amps = CVec::zeros(d * d);
    let a = linalg::c(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        amps[i * d + i] = a;
    }
    PureBipartiteState::new(d, amps)
}

/// The maximally entangled state `(W (x) I)|Phi+>`.
pub fn mes_from_unitary(w: &CMat) -> Result<PureBipartiteState> {
    if !w.is_square() {
        return Err(Error::InvalidOperator("W must be square".into()));
    }
    let d = w.nrows();
    let defect = linalg::unitarity_defect(w);
    if defect > 1e-10 {
        return Err(Error::InvalidOperator(format!(
            "W is not unitary (defect {defect:.3e})"
        )));
    }
    let m = w.unscale((d as f64).sqrt());
    PureBipartiteState::from_coefficient_matrix(&m)
}

pub fn schmidt(state: &PureBipartiteState) -> SchmidtDecomposition {
    let svd = state.coefficient_matrix().svd(true, true);
    let u = svd.u.expect("requested");
    let v_t = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    SchmidtDecomposition {
        coefficients: order.iter().map(|&k| svd.singular_values[k]).collect(),
        left_basis: order.iter().map(|&k| u.column(k).into_owned()).collect(),
        right_basis: order
            .iter()
            .map(|&k| v_t.row(k).transpose().into_owned())
            .collect(),
    }
}

/// Partial transpose of a bipartite operator on the chosen subsystem.
pub fn partial_transpose_matrix(m: &CMat, dim_a: usize, dim_b: usize, sub: Subsystem) -> CMat {
    let n = dim_a * dim_b;
    assert_eq!(m.shape(), (n, n), "operator shape does not match dimensions");
    let mut out = CMat::from_element(n, n, ZERO);
    for i in 0..dim_a {
        for j in 0..dim_b {
            for k in 0..dim_a {
                for l in 0..dim_b {
                    let (row, col) = match sub {
                        Subsystem::First => (k * dim_b + j, i * dim_b + l),
                        Subsystem::Second => (i * dim_b + l, k * dim_b + j),
                    };
                    out[(row, col)] = m[(i * dim_b + j, k * dim_b + l)];
                }
            }
        }
    }
    out
}

pub fn partial_transpose(rho: &DensityOperator, sub: Subsystem) -> CMat {
    partial_transpose_matrix(&rho.matrix, rho.dim_a, rho.dim_b, sub)
}

/// Traces out `traced` and returns the reduced operator of the other party.
pub fn partial_trace(rho: &DensityOperator, traced: Subsystem) -> CMat {
    let (da, db) = (rho.dim_a, rho.dim_b);
    let m = &rho.matrix;
    match traced {
        Subsystem::Second => CMat::from_fn(da, da, |i, k| {
            (0..db).map(|j| m[(i * db + j, k * db + j)]).sum()
        }),
        Subsystem::First => CMat::from_fn(db, db, |j, l| {
            (0..da).map(|i| m[(i * db + j, i * db + l)]).sum()
        }),
    }
}

/// `<phi|rho|phi>`, clamped to `[0, 1]`.
pub fn fidelity_with(rho: &DensityOperator, phi: &PureBipartiteState) -> Result<f64> {
    if rho.dim_a != phi.dim || rho.dim_b != phi.dim {
        return Err(Error::DimensionMismatch {
            expected: rho.dim_a * rho.dim_b,
            found: phi.dim * phi.dim,
        });
    }
    let v = &phi.amplitudes;
    let value = (v.adjoint() * &rho.matrix * v)[(0, 0)].re;
    Ok(value.clamp(0.0, 1.0))
}

fn check_square(m: &CMat, d: usize) -> Result<()> {
    if m.shape() != (d, d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: m.nrows(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn max_entangled_amplitudes() {
        let s = max_entangled(2).unwrap();
        let a = 1.0 / 2f64.sqrt();
        let expected = [a, 0.0, 0.0, a];
        for (k, e) in expected.iter().enumerate() {
            assert!((s.amplitudes()[k] - c(*e, 0.0)).norm() < 1e-15);
        }
        let s3 = max_entangled(3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 / 3f64.sqrt() } else { 0.0 };
                assert!((s3.amplitude(i, j) - c(e, 0.0)).norm() < 1e-15);
            }
        }
        let sd = schmidt(&s3);
        for coeff in &sd.coefficients {
            assert!((coeff - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        }
        assert!(sd.is_maximally_entangled());
    }

    #[test]
    fn max_entangled_rejects_small_dimension() {
        assert!(matches!(
            max_entangled(1),
            Err(Error::InvalidDimension { dim: 1, .. })
        ));
    }

    #[test]
    fn mes_from_phase_unitary() {
        let w = CMat::from_diagonal(&CVec::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)]));
        let s = mes_from_unitary(&w).unwrap();
        let a = 1.0 / 2f64.sqrt();
        assert!((s.amplitude(0, 0) - c(a, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(1, 1) - c(-a, 0.0)).norm() < 1e-15);
        assert_eq!(s.amplitude(0, 1), ZERO);

        let id = mes_from_unitary(&CMat::identity(3, 3)).unwrap();
        assert!((id.amplitudes() - max_entangled(3).unwrap().amplitudes()).norm() < 1e-15);
    }

    #[test]
    fn mes_rejects_non_unitary() {
        let w = CMat::identity(2, 2).scale(1.1);
        assert!(matches!(mes_from_unitary(&w), Err(Error::InvalidOperator(_))));
    }

    #[test]
    fn schmidt_of_product_and_diagonal_states() {
        let s = PureBipartiteState::basis(3, 0, 0).unwrap();
        let sd = schmidt(&s);
        assert!((sd.coefficients[0] - 1.0).abs() < 1e-15);
        assert!(sd.coefficients[1..].iter().all(|x| x.abs() < 1e-15));

        // Squared singular values of diag(1, 0.5, 0.9) / sqrt(2.06).
        let mut amps = CVec::zeros(9);
        amps[0] = c(1.0, 0.0);
        amps[4] = c(0.5, 0.0);
        amps[8] = c(0.9, 0.0);
        let sd = schmidt(&PureBipartiteState::normalized(3, amps).unwrap());
        let sq: Vec<f64> = sd.coefficients.iter().map(|x| x * x).collect();
        let expected = [1.0 / 2.06, 0.81 / 2.06, 0.25 / 2.06];
        for (a, b) in sq.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        assert!((expected[0] - 0.48544).abs() < 1e-5);
        assert!((expected[1] - 0.39320).abs() < 1e-5);
        assert!((expected[2] - 0.12136).abs() < 1e-5);

        let sd4 = schmidt(&max_entangled(4).unwrap());
        assert!(sd4.coefficients.iter().all(|x| (x - 0.5).abs() < 1e-14));
    }

    #[test]
    fn schmidt_bases_reconstruct_state() {
        let mut amps = CVec::zeros(4);
        amps[0] = c(0.3, 0.1);
        amps[1] = c(-0.2, 0.4);
        amps[2] = c(0.5, 0.0);
        amps[3] = c(0.1, -0.6);
        let s = PureBipartiteState::normalized(2, amps).unwrap();
        let sd = schmidt(&s);
        let mut m = CMat::zeros(2, 2);
        for k in 0..2 {
            m += (&sd.left_basis[k] * sd.right_basis[k].transpose()).scale(sd.coefficients[k]);
        }
        assert!(linalg::max_abs_diff(&m, &s.coefficient_matrix()).0 < 1e-12);
        let total: f64 = sd.coefficients.iter().map(|x| x * x).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_of_product_transposes_second_factor() {
        let ra = CMat::from_row_slice(2, 2, &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]);
        let rb = CMat::from_row_slice(2, 2, &[c(0.4, 0.0), c(0.0, 0.3), c(0.0, -0.3), c(0.6, 0.0)]);
        let rho = DensityOperator::product(&ra, &rb).unwrap();
        let pt = partial_transpose(&rho, Subsystem::Second);
        let expected = linalg::kron(&ra, &rb.transpose());
        assert!(linalg::max_abs_diff(&pt, &expected).0 < 1e-15);
        let pt1 = partial_transpose(&rho, Subsystem::First);
        let expected1 = linalg::kron(&ra.transpose(), &rb);
        assert!(linalg::max_abs_diff(&pt1, &expected1).0 < 1e-15);
    }

    #[test]
    fn partial_transpose_of_phiplus_has_swap_spectrum() {
        let rho = max_entangled(3).unwrap().projector();
        let vals = linalg::eigvalsh(&partial_transpose(&rho, Subsystem::Second));
        for (k, v) in vals.iter().enumerate() {
            let e = if k < 3 { -1.0 / 3.0 } else { 1.0 / 3.0 };
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_phiplus_is_maximally_mixed() {
        let rho = max_entangled(3).unwrap().projector();
        for sub in [Subsystem::First, Subsystem::Second] {
            let r = partial_trace(&rho, sub);
            let expected = CMat::identity(3, 3).unscale(3.0);
            assert!(linalg::max_abs_diff(&r, &expected).0 < 1e-15);
        }
    }

    #[test]
    fn fidelity_examples() {
        let phi = max_entangled(3).unwrap();
        let rho = phi.projector();
        assert!((fidelity_with(&rho, &phi).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityOperator::maximally_mixed(3);
        assert!((fidelity_with(&mixed, &phi).unwrap() - 1.0 / 9.0).abs() < 1e-15);
        let phi2 = max_entangled(2).unwrap();
        assert!(matches!(
            fidelity_with(&rho, &phi2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn density_validation_rejects_bad_operators() {
        let mut m = CMat::identity(4, 4).unscale(4.0);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(DensityOperator::new(2, 2, m).is_err());
        let m = CMat::identity(4, 4).unscale(2.0);
        assert!(DensityOperator::new(2, 2, m).is_err());
        let mut m = CMat::zeros(4, 4);
        m[(0, 0)] = c(1.5, 0.0);
        m[(1, 1)] = c(-0.5, 0.0);
        assert!(DensityOperator::new(2, 2, m).is_err());
        assert!(DensityOperator::new(2, 2, CMat::identity(4, 4).unscale(4.0)).is_ok());
    }

    #[test]
    fn pure_state_rejects_unnormalized() {
        let amps = CVec::from_element(4, c(1.0, 0.0));
        assert!(PureBipartiteState::new(2, amps.clone()).is_err());
        assert!(PureBipartiteState::normalized(2, amps).is_ok());
        assert!(PureBipartiteState::normalized(2, CVec::zeros(4)).is_err());
    }
}
