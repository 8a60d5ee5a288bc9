//! Randomized invariant checks on sampled channels.

use std::path::Path;

use entshare::channels::{self, library};
use entshare::io::Sig17;
use entshare::linalg::{self, CMat};
use entshare::measures::{self, FefOptions};
use entshare::random::{self, rng_for};
use entshare::states::{self, max_entangled};
use entshare::KrausChannel;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::{Failure, Verdict};

pub const DUAL_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-12;
pub const COVARIANCE_TOL: f64 = 1e-12;
pub const SANDWICH_TOL: f64 = 1e-9;
pub const PAULI_TOL: f64 = 1e-10;

/// Worst deviation seen per check for one sampled channel.
#[derive(Debug, Clone, Copy, Default)]
struct Sample {
    dual_lambda: f64,
    trace: f64,
    covariance: f64,
    sandwich: f64,
    pauli: Option<f64>,
}

fn audit_one(d: usize, seed: u64, index: usize, restarts: usize) -> Result<Sample, Failure> {
    let mut rng = rng_for(seed, index as u64);
    let ch = random::random_dilation_channel(d, &mut rng);
    let psi = random::haar_state(d, &mut rng);
    let u = random::haar_unitary(d, &mut rng);

    let primal = channels::top_choi_eigenpair(&ch)?.value;
    let dual = channels::top_choi_eigenpair(&ch.dual())?.value;

    let rho = channels::apply_one_sided(&ch, &psi)?;
    let trace = (rho.trace() - 1.0).abs();

    let id = CMat::identity(d, d);
    let rotated = channels::apply_one_sided(&ch, &psi.apply_local(&u, &id)?)?;
    let expected = rho.conjugate_local(&u, &id)?;
    let covariance = linalg::max_abs_diff(rotated.matrix(), expected.matrix()).0;

    let opts = FefOptions {
        restarts,
        seed: seed.wrapping_add(index as u64),
        ..FefOptions::default()
    };
    let f = measures::fef(&rho, &opts)?.value;
    let floor = states::fidelity_with(&rho, &max_entangled(d)?)?;
    let ceiling = measures::fef_ceiling(&rho)?;
    let sandwich = (floor - f).max(f - ceiling).max(0.0);

    let pauli = if d == 2 {
        Some(pauli_gap(&mut rng)?)
    } else {
        None
    };

    Ok(Sample {
        dual_lambda: (primal - dual).abs(),
        trace,
        covariance,
        sandwich,
        pauli,
    })
}

/// Pauli channel with a dominant weight of at least one half: the Choi
/// top eigenvalue must equal `(1 + 2N)/2`.
fn pauli_gap<R: Rng + ?Sized>(rng: &mut R) -> Result<f64, Failure> {
    let spread = random::random_simplex(4, rng);
    let lead = rng.random_range(0..4);
    let mut probs = [0.0; 4];
    for (k, p) in probs.iter_mut().enumerate() {
        *p = 0.5 * spread[k] + if k == lead { 0.5 } else { 0.0 };
    }
    let ch: KrausChannel = library::pauli(probs)?;
    let choi = channels::choi_state(&ch)?.rho;
    let n = measures::negativity(&choi);
    Ok((choi.lambda_max() - (1.0 + 2.0 * n) / 2.0).abs())
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    tolerance: Sig17,
    max_violation: Sig17,
    pass: bool,
}

#[derive(Serialize)]
struct Report {
    d: usize,
    n: usize,
    seed: u64,
    restarts: usize,
    checks: Vec<Check>,
    pass: bool,
}

fn check(name: &'static str, tolerance: f64, values: impl Iterator<Item = f64>) -> Check {
    let worst = values.fold(0.0_f64, f64::max);
    Check {
        name,
        tolerance: Sig17(tolerance),
        max_violation: Sig17(worst),
        pass: worst <= tolerance,
    }
}

pub fn run(
    d: usize,
    n: usize,
    seed: u64,
    restarts: usize,
    out: Option<&Path>,
) -> Result<Verdict, Failure> {
    if !(2..=6).contains(&d) {
        return Err(Failure::usage(format!("audit supports d in 2..=6, got {d}")));
    }
    if n == 0 {
        return Err(Failure::usage("audit needs n >= 1"));
    }
    crate::commands::check_restarts(restarts)?;
    let samples = (0..n)
        .into_par_iter()
        .map(|i| audit_one(d, seed, i, restarts))
        .collect::<Result<Vec<_>, _>>()?;

    let mut checks = vec![
        check("dual_lambda_max", DUAL_TOL, samples.iter().map(|s| s.dual_lambda)),
        check("output_trace", TRACE_TOL, samples.iter().map(|s| s.trace)),
        check("local_unitary_covariance", COVARIANCE_TOL, samples.iter().map(|s| s.covariance)),
        check("fef_sandwich", SANDWICH_TOL, samples.iter().map(|s| s.sandwich)),
    ];
    if d == 2 {
        checks.push(check("pauli_qubit_formula", PAULI_TOL, samples.iter().filter_map(|s| s.pauli)));
    }
    let pass = checks.iter().all(|c| c.pass);
    let report = Report {
        d,
        n,
        seed,
        restarts,
        checks,
        pass,
    };
    let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    crate::commands::emit(out, &text)?;
    Ok(if pass { Verdict::Pass } else { Verdict::Fail })
}
