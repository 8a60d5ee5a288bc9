//! Choice of the transmitted state: the exact best `Phi+`-fidelity input,
//! a multi-start search for negativity-maximizing inputs, and the qubit
//! closed form for the optimal singlet fraction.

use crate::channels::{self, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::{c, CVec};
use crate::measures;
use crate::random;
use crate::states::{self, PureBipartiteState};

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_state: PureBipartiteState,
    pub best_value: f64,
    pub restarts: usize,
    /// `(iteration, value)` along the winning restart, when requested.
    pub trace: Option<Vec<(usize, f64)>>,
    pub seed: u64,
    pub converged: bool,
}

/// The input maximizing `<Phi+| rho_{psi, map} |Phi+>` over pure states: the
/// top eigenvector of the dual map's Choi operator.
pub fn best_phiplus_fidelity_input(map: &KrausChannel) -> Result<SearchResult> {
    let top = channels::top_choi_eigenpair(&map.dual())?;
    Ok(SearchResult {
        best_state: top.vector,
        best_value: top.value,
        restarts: 1,
        trace: None,
        seed: 0,
        converged: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Total starting points: `Phi+`, then `psi'`, then Haar-random kets.
    pub restarts: usize,
    /// Maximum number of coordinate sweeps per restart.
    pub max_iter: usize,
    /// A sweep gaining less than this halves the probe step.
    pub tol: f64,
    pub seed: u64,
    pub record_trace: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iter: 2000,
            tol: 1e-9,
            seed: 0,
            record_trace: false,
        }
    }
}

const INITIAL_STEP: f64 = 0.1;
const MIN_STEP: f64 = 1e-7;

/// Objective over the real parameterization `(Re a_0, Im a_0, Re a_1, ...)`.
struct NegativityObjective<'a> {
    map: &'a KrausChannel,
    dim: usize,
}

impl NegativityObjective<'_> {
    fn state(&self, params: &[f64]) -> PureBipartiteState {
        let amps = CVec::from_fn(params.len() / 2, |k, _| c(params[2 * k], params[2 * k + 1]));
        PureBipartiteState::normalized(self.dim, amps).expect("parameters stay non-zero")
    }

    fn eval(&self, params: &[f64]) -> f64 {
        let rho = channels::apply_one_sided(self.map, &self.state(params))
            .expect("dimensions checked at entry");
        measures::negativity(&rho)
    }
}

struct Ascent {
    params: Vec<f64>,
    value: f64,
    converged: bool,
    trace: Vec<(usize, f64)>,
}

fn to_params(psi: &PureBipartiteState) -> Vec<f64> {
    psi.amplitudes().iter().flat_map(|z| [z.re, z.im]).collect()
}

fn renormalize(params: &mut [f64]) {
    let norm = params.iter().map(|p| p * p).sum::<f64>().sqrt();
    params.iter_mut().for_each(|p| *p /= norm);
}

/// Gradient-free coordinate ascent: probe each coordinate at `+-h`, try the
/// vertex of the interpolating parabola, keep the best strict improvement.
fn coordinate_ascent(obj: &NegativityObjective, start: Vec<f64>, opts: &SearchOptions) -> Ascent {
    let mut params = start;
    let mut value = obj.eval(&params);
    let mut step = INITIAL_STEP;
    let mut trace = vec![(0, value)];
    let mut converged = false;
    let mut probe = params.clone();
    for iter in 1..=opts.max_iter {
        let before = value;
        for k in 0..params.len() {
            let base = params[k];
            let mut best = (0.0, value);
            let mut try_offset = |t: f64, best: &mut (f64, f64)| -> f64 {
                probe.copy_from_slice(&params);
                probe[k] = base + t;
                let f = obj.eval(&probe);
                if f > best.1 {
                    *best = (t, f);
                }
                f
            };
            let f_plus = try_offset(step, &mut best);
            let f_minus = try_offset(-step, &mut best);
            let curvature = f_plus - 2.0 * value + f_minus;
            if curvature < 0.0 {
                let vertex = 0.5 * step * (f_minus - f_plus) / curvature;
                if vertex.abs() <= 4.0 * step && vertex.abs() > 0.0 {
                    try_offset(vertex, &mut best);
                }
            }
            if best.1 > value {
                params[k] = base + best.0;
                value = best.1;
            }
        }
        renormalize(&mut params);
        // Renormalizing leaves the state unchanged; re-evaluate so the stored
        // value is exactly the objective at the stored parameters.
        value = obj.eval(&params);
        if opts.record_trace {
            trace.push((iter, value));
        }
        if value - before < opts.tol {
            step *= 0.5;
            if step < MIN_STEP {
                converged = true;
                break;
            }
        }
    }
    Ascent {
        params,
        value,
        converged,
        trace,
    }
}

/// Multi-start search for the pure input with the largest output negativity.
/// The result is a lower bound on the channel's optimal negativity.
pub fn maximize_negativity_input(map: &KrausChannel, opts: &SearchOptions) -> Result<SearchResult> {
    if !map.is_trace_preserving() {
        return Err(Error::InvalidOperator(
            "negativity search needs a trace-preserving channel".into(),
        ));
    }
    let d = map.dim();
    let obj = NegativityObjective { map, dim: d };
    let psi_prime = channels::top_choi_eigenpair(&map.dual())?.vector;
    let phi = states::max_entangled(d)?;

    let mut best: Option<Ascent> = None;
    let total = opts.restarts.max(1);
    for r in 0..total {
        let start = match r {
            0 => phi.clone(),
            1 => psi_prime.clone(),
            _ => random::haar_state(d, &mut random::rng_for(opts.seed, r as u64)),
        };
        let ascent = coordinate_ascent(&obj, to_params(&start), opts);
        if best.as_ref().is_none_or(|b| ascent.value > b.value) {
            best = Some(ascent);
        }
    }
    let best = best.expect("at least one restart");
    Ok(SearchResult {
        best_state: obj.state(&best.params),
        best_value: best.value,
        restarts: total,
        trace: opts.record_trace.then_some(best.trace),
        seed: opts.seed,
        converged: best.converged,
    })
}

/// `(1 + 2 N(rho_{Phi+, map})) / 2`, the optimal one-shot singlet fraction of
/// a qubit channel. Not valid in higher dimensions.
pub fn qubit_optimal_fidelity(map: &KrausChannel) -> Result<f64> {
    if map.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: map.dim(),
        });
    }
    let choi = channels::choi_state(map)?;
    Ok((1.0 + 2.0 * measures::negativity(&choi.rho)) / 2.0)
}
