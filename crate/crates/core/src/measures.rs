//! Entanglement figures of merit: negativity, fully entangled fraction and
//! the negativity ceiling on the achievable singlet fraction.

use crate::channels::{self, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::random;
use crate::states::{self, DensityOperator, PureBipartiteState, Subsystem};

/// Eigenvalues in `(-EIG_CLAMP, 0)` are treated as zero.
pub const EIG_CLAMP: f64 = 1e-12;

/// Sum of the magnitudes of the negative partial-transpose eigenvalues.
pub fn negativity(rho: &DensityOperator) -> f64 {
    let spectrum = linalg::eigvalsh(&states::partial_transpose(rho, Subsystem::Second));
    negative_part(&spectrum)
}

pub(crate) fn negative_part(spectrum: &[f64]) -> f64 {
    -spectrum
        .iter()
        .filter(|&&l| l <= -EIG_CLAMP)
        .sum::<f64>()
}

/// `(1 + 2 N(rho)) / d`, an upper bound on the singlet fraction reachable
/// from `rho` by trace-preserving LOCC.
pub fn fstar_upper_bound(rho: &DensityOperator) -> Result<f64> {
    let d = square_dim(rho)?;
    Ok((1.0 + 2.0 * negativity(rho)) / d as f64)
}

/// Certified ceiling on the fully entangled fraction: `min(lambda_max, (1+2N)/d)`.
pub fn fef_ceiling(rho: &DensityOperator) -> Result<f64> {
    Ok(rho.lambda_max().min(fstar_upper_bound(rho)?))
}

fn square_dim(rho: &DensityOperator) -> Result<usize> {
    if rho.dim_a() != rho.dim_b() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim_a(),
            found: rho.dim_b(),
        });
    }
    Ok(rho.dim_a())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FefOptions {
    /// Total number of starting points, the identity included.
    pub restarts: usize,
    pub max_iter: usize,
    /// Stop a restart once one step improves the value by less than this.
    pub tol: f64,
    pub seed: u64,
}

impl Default for FefOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iter: 500,
            tol: 1e-9,
            seed: 0,
        }
    }
}

/// Best maximally entangled overlap found, `<Phi_W| rho |Phi_W>` with
/// `|Phi_W> = (W (x) I)|Phi+>`. A lower bound on the true value.
#[derive(Debug, Clone)]
pub struct FefResult {
    pub value: f64,
    pub maximizer_unitary: CMat,
    pub restarts_used: usize,
    pub converged: bool,
}

/// Maximizes `scale * v^H F v` over row-major vectorized unitaries `v`.
///
/// Each step replaces `V` by the unitary closest to `unvec(F v)`. Because the
/// form is positive semidefinite, the objective is convex and this
/// linearize-and-project step never decreases it.
struct UnitaryAscent<'a> {
    form: &'a CMat,
    scale: f64,
    d: usize,
}

struct Climb {
    value: f64,
    unitary: CMat,
    converged: bool,
}

impl UnitaryAscent<'_> {
    fn value(&self, v: &linalg::CVec) -> f64 {
        (v.adjoint() * self.form * v)[(0, 0)].re * self.scale
    }

    fn climb(&self, start: CMat, opts: &FefOptions) -> Climb {
        let mut v = linalg::vec_rows(&start);
        let mut value = self.value(&v);
        let mut unitary = start;
        let mut converged = false;
        for _ in 0..opts.max_iter {
            let gradient = linalg::unvec_rows(&(self.form * &v), self.d, self.d);
            let next = linalg::polar_unitary(&gradient);
            let next_v = linalg::vec_rows(&next);
            let next_value = self.value(&next_v);
            if next_value - value < opts.tol {
                if next_value > value {
                    value = next_value;
                    unitary = next;
                }
                converged = true;
                break;
            }
            v = next_v;
            value = next_value;
            unitary = next;
        }
        Climb {
            value,
            unitary,
            converged,
        }
    }

    fn best(&self, starts: impl Iterator<Item = CMat>, opts: &FefOptions) -> (Climb, usize) {
        let mut best: Option<Climb> = None;
        let mut used = 0;
        for start in starts {
            used += 1;
            let climb = self.climb(start, opts);
            if best.as_ref().is_none_or(|b| climb.value > b.value) {
                best = Some(climb);
            }
        }
        (best.expect("at least one restart"), used)
    }
}

/// Starting unitaries: the identity, then Haar draws on counter-derived streams.
fn restart_unitaries(d: usize, opts: &FefOptions) -> impl Iterator<Item = CMat> + '_ {
    (0..opts.restarts.max(1)).map(move |r| {
        if r == 0 {
            CMat::identity(d, d)
        } else {
            random::haar_unitary(d, &mut random::rng_for(opts.seed, r as u64))
        }
    })
}

/// Fully entangled fraction of `rho`, maximized over the unitary group.
pub fn fef(rho: &DensityOperator, opts: &FefOptions) -> Result<FefResult> {
    let d = square_dim(rho)?;
    // <Phi_W|rho|Phi_W> = (1/d) w^H rho w with w the row-major entries of W.
    let ascent = UnitaryAscent {
        form: rho.matrix(),
        scale: 1.0 / d as f64,
        d,
    };
    let (best, used) = ascent.best(restart_unitaries(d, opts), opts);
    let value = states::fidelity_with(rho, &states::mes_from_unitary(&best.unitary)?)?;
    Ok(FefResult {
        value,
        maximizer_unitary: best.unitary,
        restarts_used: used,
        converged: best.converged,
    })
}

/// Fully entangled fraction of `rho_{psi, map}` computed on the dual side:
/// `<Phi_W|rho_{psi,map}|Phi_W> = <psi_W| rho_{Phi+, dual} |psi_W>` with
/// `psi_W = (W^H (x) I)|psi>`.
///
/// Restarts are the adjoints of those used by [`fef`], so both routes follow
/// the same trajectories in exact arithmetic.
pub fn fef_channel_output(
    psi: &PureBipartiteState,
    map: &KrausChannel,
    opts: &FefOptions,
) -> Result<FefResult> {
    let d = map.dim();
    if psi.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: psi.dim(),
        });
    }
    let dual_choi = channels::choi_operator(&map.dual())?;
    // vec(V M) = (I (x) M^T) vec(V) for row-major vectorization.
    let lift = linalg::kron(&CMat::identity(d, d), &psi.coefficient_matrix().transpose());
    let form = lift.adjoint() * dual_choi.matrix() * &lift;
    let ascent = UnitaryAscent {
        form: &form,
        scale: 1.0,
        d,
    };
    let starts = restart_unitaries(d, opts).map(|w| w.adjoint());
    let (best, used) = ascent.best(starts, opts);
    Ok(FefResult {
        value: best.value.clamp(0.0, 1.0),
        maximizer_unitary: best.unitary.adjoint(),
        restarts_used: used,
        converged: best.converged,
    })
}
