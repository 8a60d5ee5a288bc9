//! Seeded sampling of unitaries, states and channels.
//!
//! Every sampler takes an explicit generator. [`rng_for`] derives an
//! independent stream per `(seed, counter)` pair so restarts and grid points
//! can be drawn in any order with the same results.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::KrausChannel;
use crate::linalg::{self, c, CMat, CVec};
use crate::omega::OmegaParams;
use crate::states::{DensityOperator, PureBipartiteState};

pub type SeededRng = ChaCha8Rng;

pub fn rng_for(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> num_complex::Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed `n x n` unitary: QR of a complex Ginibre matrix with the
/// phases of `diag(R)` folded back into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let z = DMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { linalg::ONE };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

/// Haar-random pure state on `C^d (x) C^d`.
pub fn haar_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> PureBipartiteState {
    let v = CVec::from_fn(d * d, |_, _| complex_gaussian(rng));
    PureBipartiteState::normalized(d, v).expect("gaussian vector is non-zero")
}

/// Channel with `k` Kraus operators sliced from the first `d` columns of a
/// Haar unitary on `C^{d k}`. Completeness holds by construction.
pub fn random_channel<R: Rng + ?Sized>(d: usize, k: usize, rng: &mut R) -> KrausChannel {
    let u = haar_unitary(d * k, rng);
    let ops = (0..k)
        .map(|block| u.view((block * d, 0), (d, d)).into_owned())
        .collect();
    KrausChannel::new(ops).expect("isometry blocks form a channel")
}

/// Random number of Kraus operators in `2..=d` (at least 2), then [`random_channel`].
pub fn random_dilation_channel<R: Rng + ?Sized>(d: usize, rng: &mut R) -> KrausChannel {
    let k = rng.random_range(2..=d.max(2));
    random_channel(d, k, rng)
}

/// Random probability vector of length `n` (uniform on the simplex).
pub fn random_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..n)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|x| x / total).collect()
}

/// Mixed state on `C^d (x) C^d`: a Haar pure state sent one-sided through a
/// random channel.
pub fn random_mixed_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOperator {
    let ch = random_dilation_channel(d, rng);
    let psi = haar_state(d, rng);
    crate::channels::apply_one_sided(&ch, &psi).expect("dimensions agree")
}

/// Strict Omega parameters with every `x_i` uniform on `(0, 1)`. Draws that
/// land too close to a boundary or to each other are redrawn.
pub fn random_omega_params<R: Rng + ?Sized>(d: usize, rng: &mut R) -> crate::Result<OmegaParams> {
    loop {
        let x: Vec<f64> = (0..d.saturating_sub(1)).map(|_| rng.random::<f64>()).collect();
        match OmegaParams::new(d, x) {
            Err(crate::Error::InvalidParams(
                crate::ParamViolation::OutOfRange { .. } | crate::ParamViolation::Distinctness { .. },
            )) => continue,
            other => return other,
        }
    }
}
