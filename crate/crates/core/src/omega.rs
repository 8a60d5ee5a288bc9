//! The nonunital qudit channel family `Omega(d, x)` with
//! `A_0 = diag(1, x_1, ..., x_{d-1})` and `A_m = sqrt(1 - x_m^2) |0><m|`,
//! its closed forms, and the certificate that a nonmaximally entangled
//! input beats every maximally entangled one.

use crate::channels::{self, KrausChannel};
use crate::error::{Error, ParamViolation, Result};
use crate::linalg::{c, CMat};
use crate::measures::{self, FefOptions};
use crate::states::{self, PureBipartiteState};

/// Minimum `max |x_i - x_j|` for strict parameters.
pub const DISTINCTNESS_TOL: f64 = 1e-12;
/// Schmidt spread above which a state counts as not maximally entangled.
pub const SPREAD_TOL: f64 = 1e-8;

/// Dimension and decay parameters `x_1 .. x_{d-1}`.
///
/// Strict parameters (from [`OmegaParams::new`]) have `d >= 3`, every `x_i`
/// in the open interval `(0, 1)` and at least one distinct pair. Relaxed
/// parameters only require `x_i` in `[0, 1]`; they feed the closed forms at
/// boundary points but not the certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaParams {
    d: usize,
    x: Vec<f64>,
    relaxed: bool,
}

impl OmegaParams {
    pub fn new(d: usize, x: Vec<f64>) -> Result<Self> {
        if d < 3 {
            return Err(Error::InvalidParams(ParamViolation::Dimension { d }));
        }
        check_length(d, &x)?;
        for (k, &xi) in x.iter().enumerate() {
            if !(xi > 0.0 && xi < 1.0) {
                return Err(Error::InvalidParams(ParamViolation::OutOfRange {
                    index: k + 1,
                    value: xi,
                }));
            }
        }
        let spread = max_pair_spread(&x);
        if spread <= DISTINCTNESS_TOL {
            return Err(Error::InvalidParams(ParamViolation::Distinctness { spread }));
        }
        Ok(Self {
            d,
            x,
            relaxed: false,
        })
    }

    pub fn relaxed(d: usize, x: Vec<f64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension { dim: d, min: 2 });
        }
        check_length(d, &x)?;
        for (k, &xi) in x.iter().enumerate() {
            if !(0.0..=1.0).contains(&xi) {
                return Err(Error::InvalidParams(ParamViolation::OutOfRange {
                    index: k + 1,
                    value: xi,
                }));
            }
        }
        Ok(Self { d, x, relaxed: true })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn is_relaxed(&self) -> bool {
        self.relaxed
    }

    fn sum_squares(&self) -> f64 {
        self.x.iter().map(|v| v * v).sum()
    }

    fn sum_pairs(&self) -> f64 {
        let mut total = 0.0;
        for (i, a) in self.x.iter().enumerate() {
            for b in &self.x[i + 1..] {
                total += a * b;
            }
        }
        total
    }
}

fn check_length(d: usize, x: &[f64]) -> Result<()> {
    if x.len() != d - 1 {
        return Err(Error::InvalidParams(ParamViolation::Length {
            expected: d - 1,
            found: x.len(),
        }));
    }
    Ok(())
}

fn max_pair_spread(x: &[f64]) -> f64 {
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = x.iter().copied().fold(f64::INFINITY, f64::min);
    if x.is_empty() {
        0.0
    } else {
        max - min
    }
}

/// The `d` Kraus operators of `Omega`.
pub fn omega_channel(p: &OmegaParams) -> Result<KrausChannel> {
    let d = p.d;
    let mut a0 = CMat::zeros(d, d);
    a0[(0, 0)] = c(1.0, 0.0);
    for (m, &xm) in p.x.iter().enumerate() {
        a0[(m + 1, m + 1)] = c(xm, 0.0);
    }
    let mut ops = vec![a0];
    for (m, &xm) in p.x.iter().enumerate() {
        let mut am = CMat::zeros(d, d);
        am[(0, m + 1)] = c((1.0 - xm * xm).sqrt(), 0.0);
        ops.push(am);
    }
    KrausChannel::new(ops)
}

/// `lambda_max(rho_{Phi+, Omega}) = (1 + sum x_i^2) / d`.
pub fn omega_lambda_max(p: &OmegaParams) -> f64 {
    (1.0 + p.sum_squares()) / p.d as f64
}

/// `N(rho_{Phi+, Omega}) = (sum x_i^2 + sum_{i<j} x_i x_j) / d`.
pub fn omega_negativity_phiplus(p: &OmegaParams) -> f64 {
    (p.sum_squares() + p.sum_pairs()) / p.d as f64
}

/// Partial-transpose spectrum of the Choi state, sorted ascending:
/// `1/d` (d times), `+-x_i^2/d`, and `+-x_i x_j/d` for `i < j`.
pub fn omega_pt_spectrum(p: &OmegaParams) -> Vec<f64> {
    let d = p.d as f64;
    let mut spectrum = vec![1.0 / d; p.d];
    for (i, a) in p.x.iter().enumerate() {
        spectrum.push(a * a / d);
        spectrum.push(-a * a / d);
        for b in &p.x[i + 1..] {
            spectrum.push(a * b / d);
            spectrum.push(-a * b / d);
        }
    }
    spectrum.sort_by(f64::total_cmp);
    spectrum
}

/// `(d - 2) sum x_i^2 - 2 sum_{i<j} x_i x_j`, which equals
/// `sum_{i<j} (x_i - x_j)^2` and is positive unless all `x_i` coincide.
pub fn omega_gap(p: &OmegaParams) -> f64 {
    (p.d as f64 - 2.0) * p.sum_squares() - 2.0 * p.sum_pairs()
}

/// Every quantity in the chain
/// `F(Omega) >= F(rho_{psi', Omega}) > (1 + 2 N(rho_{Phi+, Omega})) / d >= F*(rho_{Phi, Omega})`
/// for one parameter point, with verdicts.
#[derive(Debug, Clone)]
pub struct TheoremCertificate {
    pub params: OmegaParams,
    pub seed: u64,
    pub restarts: usize,
    pub lambda_max_closed: f64,
    pub lambda_max_numeric: f64,
    pub negativity_phiplus_closed: f64,
    pub negativity_phiplus_numeric: f64,
    pub fstar_bound_phiplus: f64,
    pub gap: f64,
    pub psi_prime: PureBipartiteState,
    pub psi_prime_degenerate: bool,
    pub psi_prime_schmidt_spread: f64,
    pub fef_psi_prime: f64,
    pub fef_psi_prime_converged: bool,
    pub negativity_psi_prime: f64,
    /// Best lower bound on the channel's optimal singlet fraction found here.
    /// The optimum itself is not computed.
    pub channel_fidelity_lower_bound: f64,
    pub verdict_lemma3: bool,
    pub verdict_theorem1: bool,
    pub verdict_negativity_corollary: bool,
}

impl TheoremCertificate {
    pub fn all_verdicts(&self) -> bool {
        self.verdict_lemma3 && self.verdict_theorem1 && self.verdict_negativity_corollary
    }
}

pub fn theorem1_certificate(p: &OmegaParams, opts: &FefOptions) -> Result<TheoremCertificate> {
    if p.relaxed {
        // Re-run the strict checks so the error names the violated clause.
        OmegaParams::new(p.d, p.x.clone())?;
    }
    let omega = omega_channel(p)?;
    let choi = channels::choi_state(&omega)?;

    let lambda_max_closed = omega_lambda_max(p);
    let lambda_max_numeric = choi.rho.lambda_max();
    let negativity_phiplus_closed = omega_negativity_phiplus(p);
    let negativity_phiplus_numeric = measures::negativity(&choi.rho);
    let fstar_bound_phiplus = (1.0 + 2.0 * negativity_phiplus_closed) / p.d as f64;

    // psi' comes from the dual map's Choi operator.
    let top = channels::top_choi_eigenpair(&omega.dual())?;
    let psi_prime = top.vector;
    let psi_prime_schmidt_spread = states::schmidt(&psi_prime).spread();

    let output = channels::apply_one_sided(&omega, &psi_prime)?;
    let fef = measures::fef(&output, opts)?;
    let negativity_psi_prime = measures::negativity(&output);

    Ok(TheoremCertificate {
        params: p.clone(),
        seed: opts.seed,
        restarts: fef.restarts_used,
        lambda_max_closed,
        lambda_max_numeric,
        negativity_phiplus_closed,
        negativity_phiplus_numeric,
        fstar_bound_phiplus,
        gap: omega_gap(p),
        psi_prime,
        psi_prime_degenerate: top.degenerate,
        psi_prime_schmidt_spread,
        fef_psi_prime: fef.value,
        fef_psi_prime_converged: fef.converged,
        negativity_psi_prime,
        channel_fidelity_lower_bound: lambda_max_closed.max(fef.value),
        verdict_lemma3: lambda_max_closed > fstar_bound_phiplus,
        verdict_theorem1: fef.value > fstar_bound_phiplus
            && psi_prime_schmidt_spread > SPREAD_TOL,
        verdict_negativity_corollary: negativity_psi_prime > negativity_phiplus_closed,
    })
}
