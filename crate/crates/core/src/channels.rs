//! Kraus representations of channels and of their dual maps.

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, ONE, ZERO};
use crate::states::{self, DensityOperator, PureBipartiteState, Subsystem};

/// Completeness and unitality tolerance.
pub const KRAUS_TOL: f64 = 1e-10;
/// Gap below which the top Choi eigenvalue is reported as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// An ordered list of `d x d` Kraus operators.
///
/// Values built through [`KrausChannel::new`] satisfy `sum A_i^H A_i = I`.
/// Dual maps of nonunital channels are carried in the same type with
/// `trace_preserving == false`; they may still be applied one-sided.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    kraus_ops: Vec<CMat>,
    trace_preserving: bool,
}

impl KrausChannel {
    /// Validates shapes and completeness.
    pub fn new(ops: Vec<CMat>) -> Result<Self> {
        let dim = check_shapes(&ops)?;
        let ch = Self {
            dim,
            kraus_ops: ops,
            trace_preserving: true,
        };
        let (residual, row, col) = ch.completeness_residual();
        if residual > KRAUS_TOL {
            return Err(Error::NotTracePreserving { residual, row, col });
        }
        Ok(ch)
    }

    /// A completely positive map with no completeness requirement.
    pub fn cp_map(ops: Vec<CMat>) -> Result<Self> {
        let dim = check_shapes(&ops)?;
        let mut map = Self {
            dim,
            kraus_ops: ops,
            trace_preserving: false,
        };
        map.trace_preserving = map.completeness_residual().0 <= KRAUS_TOL;
        Ok(map)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_ops(&self) -> &[CMat] {
        &self.kraus_ops
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    /// `max |sum A_i^H A_i - I|` and where it occurs.
    pub fn completeness_residual(&self) -> (f64, usize, usize) {
        let sum = self
            .kraus_ops
            .iter()
            .fold(CMat::zeros(self.dim, self.dim), |acc, a| acc + a.adjoint() * a);
        linalg::max_abs_diff(&sum, &CMat::identity(self.dim, self.dim))
    }

    /// `max |sum A_i A_i^H - I|`.
    pub fn unitality_residual(&self) -> f64 {
        let sum = self
            .kraus_ops
            .iter()
            .fold(CMat::zeros(self.dim, self.dim), |acc, a| acc + a * a.adjoint());
        linalg::max_abs_diff(&sum, &CMat::identity(self.dim, self.dim)).0
    }

    pub fn is_unital(&self) -> bool {
        self.unitality_residual() < KRAUS_TOL
    }

    /// The adjoint map with Kraus operators `A_i^H`. It is trace preserving
    /// exactly when `self` is unital.
    pub fn dual(&self) -> KrausChannel {
        KrausChannel {
            dim: self.dim,
            kraus_ops: self.kraus_ops.iter().map(|a| a.adjoint()).collect(),
            trace_preserving: self.is_unital(),
        }
    }

    /// `sum_i A_i X A_i^H` on a single-party operator.
    pub fn apply(&self, x: &CMat) -> CMat {
        self.kraus_ops
            .iter()
            .fold(CMat::zeros(self.dim, self.dim), |acc, a| acc + a * x * a.adjoint())
    }

    /// Stable FNV-1a digest of the dimension and Kraus entries.
    pub fn fingerprint(&self) -> u64 {
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |x: u64| {
            for byte in x.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(PRIME);
            }
        };
        feed(self.dim as u64);
        feed(self.kraus_ops.len() as u64);
        for op in &self.kraus_ops {
            for z in op.iter() {
                feed(z.re.to_bits());
                feed(z.im.to_bits());
            }
        }
        h
    }
}

fn check_shapes(ops: &[CMat]) -> Result<usize> {
    let first = ops
        .first()
        .ok_or_else(|| Error::InvalidOperator("empty Kraus list".into()))?;
    if !first.is_square() {
        return Err(Error::InvalidOperator("Kraus operators must be square".into()));
    }
    let dim = first.nrows();
    if dim == 0 {
        return Err(Error::InvalidDimension { dim, min: 1 });
    }
    for op in ops {
        if op.shape() != (dim, dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: op.nrows(),
            });
        }
    }
    Ok(dim)
}

/// Builds a channel from raw Kraus operators, rejecting incomplete sets.
pub fn kraus_validate(ops: Vec<CMat>) -> Result<KrausChannel> {
    KrausChannel::new(ops)
}

pub fn is_unital(ch: &KrausChannel) -> bool {
    ch.is_unital()
}

pub fn dual(ch: &KrausChannel) -> KrausChannel {
    ch.dual()
}

/// `sum_i (I (x) K_i)|psi><psi|(I (x) K_i^H)`.
///
/// The result has unit trace when `map` is trace preserving; for dual maps of
/// nonunital channels the trace differs from one.
pub fn apply_one_sided(map: &KrausChannel, psi: &PureBipartiteState) -> Result<DensityOperator> {
    let d = map.dim;
    if psi.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: psi.dim(),
        });
    }
    let coeffs = psi.coefficient_matrix();
    let n = d * d;
    let mut rho = CMat::zeros(n, n);
    for k in &map.kraus_ops {
        // (I (x) K) vec(M) = vec(M K^T) in row-major order.
        let v = linalg::vec_rows(&(&coeffs * k.transpose()));
        rho += &v * v.adjoint();
    }
    Ok(DensityOperator::from_trusted(d, d, rho))
}

/// `rho_{Phi+, map}` as a plain operator; works for any CP map.
pub fn choi_operator(map: &KrausChannel) -> Result<DensityOperator> {
    let phi = states::max_entangled(map.dim)?;
    apply_one_sided(map, &phi)
}

/// The Choi state of a channel together with a fingerprint of its source.
#[derive(Debug, Clone)]
pub struct ChoiState {
    pub channel_hash: u64,
    pub rho: DensityOperator,
}

pub fn choi_state(ch: &KrausChannel) -> Result<ChoiState> {
    if !ch.is_trace_preserving() {
        return Err(Error::InvalidOperator(
            "Choi states are defined for trace-preserving channels".into(),
        ));
    }
    let rho = choi_operator(ch)?;
    rho.validate()?;
    let reduced = states::partial_trace(&rho, Subsystem::Second);
    let target = CMat::identity(ch.dim, ch.dim).unscale(ch.dim as f64);
    let defect = linalg::max_abs_diff(&reduced, &target).0;
    if defect > KRAUS_TOL {
        return Err(Error::InvalidState(format!(
            "reduced Choi state deviates from I/d by {defect:.3e}"
        )));
    }
    Ok(ChoiState {
        channel_hash: ch.fingerprint(),
        rho,
    })
}

/// Largest eigenvalue of a Choi operator and a unit eigenvector for it.
#[derive(Debug, Clone)]
pub struct TopEigenpair {
    pub value: f64,
    pub vector: PureBipartiteState,
    /// Set when the second-largest eigenvalue lies within
    /// [`DEGENERACY_TOL`]; the vector is then one member of the eigenspace.
    pub degenerate: bool,
}

/// Top eigenpair of `rho_{Phi+, map}`. The eigenvector phase is fixed so its
/// leading large amplitude is real and positive.
pub fn top_choi_eigenpair(map: &KrausChannel) -> Result<TopEigenpair> {
    if map.dim < 2 {
        return Err(Error::InvalidDimension { dim: map.dim, min: 2 });
    }
    let rho = choi_operator(map)?;
    let (values, vectors) = linalg::eigh(rho.matrix());
    let n = values.len();
    let mut v = vectors.column(n - 1).into_owned();
    linalg::fix_phase(&mut v);
    let vector = PureBipartiteState::normalized(map.dim, v)?;
    Ok(TopEigenpair {
        value: values[n - 1],
        vector,
        degenerate: values[n - 1] - values[n - 2] < DEGENERACY_TOL,
    })
}

/// Commonly used channels.
pub mod library {
    use super::*;

    pub fn identity(d: usize) -> KrausChannel {
        KrausChannel::new(vec![CMat::identity(d, d)]).expect("identity is a channel")
    }

    pub fn unitary(u: &CMat) -> Result<KrausChannel> {
        KrausChannel::new(vec![u.clone()])
    }

    /// Qubit amplitude damping with decay probability `gamma`.
    pub fn amplitude_damping(gamma: f64) -> Result<KrausChannel> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidOperator(format!("gamma {gamma} outside [0, 1]")));
        }
        let k0 = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, c((1.0 - gamma).sqrt(), 0.0)]);
        let k1 = CMat::from_row_slice(2, 2, &[ZERO, c(gamma.sqrt(), 0.0), ZERO, ZERO]);
        KrausChannel::new(vec![k0, k1])
    }

    pub fn pauli_matrices() -> [CMat; 4] {
        [
            CMat::identity(2, 2),
            CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
            CMat::from_row_slice(2, 2, &[ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]),
            CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, c(-1.0, 0.0)]),
        ]
    }

    /// `rho -> sum_k p_k sigma_k rho sigma_k` with `sigma_0 = I`.
    pub fn pauli(probs: [f64; 4]) -> Result<KrausChannel> {
        if probs.iter().any(|&p| p < 0.0) {
            return Err(Error::InvalidOperator("negative Pauli weight".into()));
        }
        let ops = pauli_matrices()
            .into_iter()
            .zip(probs)
            .map(|(s, p)| s.scale(p.sqrt()))
            .collect();
        KrausChannel::new(ops)
    }

    /// `{sqrt(p) I, sqrt(1-p) X}`.
    pub fn bit_flip(p: f64) -> Result<KrausChannel> {
        pauli([p, 1.0 - p, 0.0, 0.0])
    }

    /// `rho -> (1 - p) rho + p I/d`, written with the `d^2` Weyl operators.
    pub fn depolarizing(d: usize, p: f64) -> Result<KrausChannel> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidOperator(format!("p {p} outside [0, 1]")));
        }
        let n = (d * d) as f64;
        let omega = 2.0 * std::f64::consts::PI / d as f64;
        let mut ops = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                let weight = if a == 0 && b == 0 {
                    1.0 - p + p / n
                } else {
                    p / n
                };
                // X^a Z^b |j> = w^{b j} |j + a>
                let op = CMat::from_fn(d, d, |row, col| {
                    if row == (col + a) % d {
                        let phase = omega * (b * col) as f64;
                        c(phase.cos(), phase.sin()) * weight.sqrt()
                    } else {
                        ZERO
                    }
                });
                ops.push(op);
            }
        }
        KrausChannel::new(ops)
    }

    /// Measure in the computational basis, prepare `|0>` or `|+>`.
    pub fn measure_prepare_qubit() -> KrausChannel {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let k0 = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO]);
        let k1 = CMat::from_row_slice(2, 2, &[ZERO, c(h, 0.0), ZERO, c(h, 0.0)]);
        KrausChannel::new(vec![k0, k1]).expect("measure-and-prepare is a channel")
    }
}

#[cfg(test)]
mod tests {
    use super::library::*;
    use super::*;
    use crate::measures::negativity;

    #[test]
    fn identity_is_valid_and_unital() {
        let ch = kraus_validate(vec![CMat::identity(3, 3)]).unwrap();
        assert!(is_unital(&ch));
        assert!(ch.is_trace_preserving());
    }

    #[test]
    fn truncated_kraus_set_reports_residual() {
        let a0 = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, c(0.8, 0.0)]);
        match kraus_validate(vec![a0]) {
            Err(Error::NotTracePreserving { residual, row, col }) => {
                assert!((residual - 0.36).abs() < 1e-12);
                assert_eq!((row, col), (1, 1));
            }
            other => panic!("expected completeness error, got {other:?}"),
        }
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(kraus_validate(vec![]), Err(Error::InvalidOperator(_))));
        assert!(kraus_validate(vec![CMat::zeros(2, 3)]).is_err());
        assert!(matches!(
            kraus_validate(vec![CMat::identity(2, 2), CMat::zeros(3, 3)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn pauli_channels_are_unital() {
        assert!(bit_flip(0.3).unwrap().is_unital());
        assert!(depolarizing(3, 0.4).unwrap().is_unital());
        assert!(!amplitude_damping(0.36).unwrap().is_unital());
    }

    #[test]
    fn dual_of_unitary_and_involution() {
        let u = CMat::from_row_slice(2, 2, &[ZERO, c(0.0, 1.0), ONE, ZERO]);
        let ch = unitary(&u).unwrap();
        let d = ch.dual();
        assert_eq!(d.kraus_ops()[0], u.adjoint());
        assert!(d.is_trace_preserving());
        assert_eq!(d.dual().kraus_ops(), ch.kraus_ops());
        assert_eq!(identity(3).dual().kraus_ops(), identity(3).kraus_ops());

        let ad = amplitude_damping(0.5).unwrap();
        assert!(!ad.dual().is_trace_preserving());
        assert_eq!(ad.dual().dual().kraus_ops(), ad.kraus_ops());
    }

    #[test]
    fn identity_on_phiplus_is_projector() {
        let phi = states::max_entangled(3).unwrap();
        let out = apply_one_sided(&identity(3), &phi).unwrap();
        assert!(linalg::max_abs_diff(out.matrix(), phi.projector().matrix()).0 < 1e-15);
    }

    #[test]
    fn product_inputs_stay_separable() {
        let psi = PureBipartiteState::basis(2, 0, 0).unwrap();
        for ch in [amplitude_damping(0.3).unwrap(), bit_flip(0.2).unwrap()] {
            let out = apply_one_sided(&ch, &psi).unwrap();
            assert!((out.trace() - 1.0).abs() < 1e-12);
            assert!(negativity(&out) < 1e-12);
        }
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let psi = states::max_entangled(2).unwrap();
        assert!(matches!(
            apply_one_sided(&identity(3), &psi),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn choi_state_of_channels() {
        let choi = choi_state(&amplitude_damping(0.36).unwrap()).unwrap();
        assert!((choi.rho.trace() - 1.0).abs() < 1e-12);
        assert!(choi_state(&amplitude_damping(0.36).unwrap().dual()).is_err());
    }

    #[test]
    fn top_eigenpair_examples() {
        let top = top_choi_eigenpair(&identity(3)).unwrap();
        assert!((top.value - 1.0).abs() < 1e-12);
        assert!(!top.degenerate);
        let phi = states::max_entangled(3).unwrap();
        assert!((top.vector.amplitudes() - phi.amplitudes()).norm() < 1e-12);

        let full = depolarizing(2, 1.0).unwrap();
        let top = top_choi_eigenpair(&full).unwrap();
        assert!((top.value - 0.25).abs() < 1e-12);
        assert!(top.degenerate);
    }

    #[test]
    fn amplitude_damping_dual_choi_top() {
        let top = top_choi_eigenpair(&amplitude_damping(0.36).unwrap().dual()).unwrap();
        assert!((top.value - 0.82).abs() < 1e-12);
    }

    #[test]
    fn measure_prepare_is_not_unital() {
        let ch = measure_prepare_qubit();
        assert!(ch.is_trace_preserving());
        assert!(!ch.is_unital());
    }

    #[test]
    fn fingerprint_is_stable_under_clone() {
        let ch = amplitude_damping(0.2).unwrap();
        assert_eq!(ch.fingerprint(), ch.clone().fingerprint());
        assert_ne!(ch.fingerprint(), amplitude_damping(0.3).unwrap().fingerprint());
    }
}
