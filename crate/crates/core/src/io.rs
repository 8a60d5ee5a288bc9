//! File formats: channel files, state files, and the fixed-precision number
//! formatting shared by every JSON and CSV writer.
//!
//! Channel file:
//! `{"d": 3, "kraus": [ [ [[re, im], ...d cols], ...d rows ], ... ]}`.
//! State file: `{"d": 3, "amplitudes": [[re, im], ...d*d entries]}`.

use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{c, CMat, CVec};
use crate::omega::TheoremCertificate;
use crate::states::PureBipartiteState;

/// Formats `x` with 17 significant digits in positional notation, falling
/// back to exponent notation for very large or very small magnitudes.
pub fn format_sig17(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.0000000000000000".to_string();
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("exponent present in scientific format");
    if !(-7..=16).contains(&exp) {
        return sci;
    }
    let precision = (16 - exp) as usize;
    format!("{x:.precision$}")
}

/// A float serialized as a JSON number with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        let raw = RawValue::from_string(format_sig17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

fn complex_pairs(v: impl Iterator<Item = num_complex::Complex64>) -> Vec<[Sig17; 2]> {
    v.map(|z| [Sig17(z.re), Sig17(z.im)]).collect()
}

#[derive(Deserialize)]
struct ChannelFileIn {
    d: usize,
    kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Serialize)]
struct ChannelFileOut {
    d: usize,
    kraus: Vec<Vec<Vec<[Sig17; 2]>>>,
}

/// Parses the Kraus operators of a channel file without checking completeness.
pub fn parse_kraus_ops(text: &str) -> Result<Vec<CMat>> {
    let raw: ChannelFileIn = serde_json::from_str(text)?;
    let d = raw.d;
    if d == 0 {
        return Err(Error::Malformed("d must be positive".into()));
    }
    let mut ops = Vec::with_capacity(raw.kraus.len());
    for (k, rows) in raw.kraus.iter().enumerate() {
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(Error::Malformed(format!("Kraus operator {k} is not {d}x{d}")));
        }
        ops.push(CMat::from_fn(d, d, |i, j| c(rows[i][j][0], rows[i][j][1])));
    }
    if ops.is_empty() {
        return Err(Error::Malformed("empty Kraus list".into()));
    }
    Ok(ops)
}

/// Parses a channel file and enforces completeness.
pub fn parse_channel(text: &str) -> Result<KrausChannel> {
    KrausChannel::new(parse_kraus_ops(text)?)
}

pub fn read_channel(path: &Path) -> Result<KrausChannel> {
    parse_channel(&std::fs::read_to_string(path)?)
}

pub fn channel_to_json(ch: &KrausChannel) -> String {
    let d = ch.dim();
    let out = ChannelFileOut {
        d,
        kraus: ch
            .kraus_ops()
            .iter()
            .map(|op| (0..d).map(|i| complex_pairs(op.row(i).iter().copied())).collect())
            .collect(),
    };
    serde_json::to_string(&out).expect("serializable")
}

pub fn write_channel(path: &Path, ch: &KrausChannel) -> Result<()> {
    std::fs::write(path, channel_to_json(ch) + "\n")?;
    Ok(())
}

#[derive(Deserialize)]
struct StateFileIn {
    d: usize,
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct StateFileOut {
    d: usize,
    amplitudes: Vec<[Sig17; 2]>,
}

/// Parses a state file; amplitudes must already be normalized.
pub fn parse_state(text: &str) -> Result<PureBipartiteState> {
    let raw: StateFileIn = serde_json::from_str(text)?;
    if raw.amplitudes.len() != raw.d * raw.d {
        return Err(Error::Malformed(format!(
            "expected {} amplitudes, found {}",
            raw.d * raw.d,
            raw.amplitudes.len()
        )));
    }
    let amps = CVec::from_iterator(raw.amplitudes.len(), raw.amplitudes.iter().map(|a| c(a[0], a[1])));
    PureBipartiteState::new(raw.d, amps)
}

pub fn read_state(path: &Path) -> Result<PureBipartiteState> {
    parse_state(&std::fs::read_to_string(path)?)
}

pub fn state_to_json(psi: &PureBipartiteState) -> String {
    let out = StateFileOut {
        d: psi.dim(),
        amplitudes: complex_pairs(psi.amplitudes().iter().copied()),
    };
    serde_json::to_string(&out).expect("serializable")
}

#[derive(Serialize)]
struct CertificateOut {
    d: usize,
    x: Vec<Sig17>,
    seed: u64,
    restarts: usize,
    lambda_max_closed: Sig17,
    lambda_max_numeric: Sig17,
    negativity_phiplus_closed: Sig17,
    negativity_phiplus_numeric: Sig17,
    fstar_bound_phiplus: Sig17,
    gap: Sig17,
    psi_prime: Vec<[Sig17; 2]>,
    psi_prime_degenerate: bool,
    psi_prime_schmidt_spread: Sig17,
    fef_psi_prime: Sig17,
    fef_psi_prime_converged: bool,
    negativity_psi_prime: Sig17,
    channel_fidelity_lower_bound: Sig17,
    verdict_lemma3: bool,
    verdict_theorem1: bool,
    verdict_negativity_corollary: bool,
}

/// Pretty-printed JSON with a fixed field order.
pub fn certificate_to_json(cert: &TheoremCertificate) -> String {
    let out = CertificateOut {
        d: cert.params.d(),
        x: cert.params.x().iter().copied().map(Sig17).collect(),
        seed: cert.seed,
        restarts: cert.restarts,
        lambda_max_closed: Sig17(cert.lambda_max_closed),
        lambda_max_numeric: Sig17(cert.lambda_max_numeric),
        negativity_phiplus_closed: Sig17(cert.negativity_phiplus_closed),
        negativity_phiplus_numeric: Sig17(cert.negativity_phiplus_numeric),
        fstar_bound_phiplus: Sig17(cert.fstar_bound_phiplus),
        gap: Sig17(cert.gap),
        psi_prime: complex_pairs(cert.psi_prime.amplitudes().iter().copied()),
        psi_prime_degenerate: cert.psi_prime_degenerate,
        psi_prime_schmidt_spread: Sig17(cert.psi_prime_schmidt_spread),
        fef_psi_prime: Sig17(cert.fef_psi_prime),
        fef_psi_prime_converged: cert.fef_psi_prime_converged,
        negativity_psi_prime: Sig17(cert.negativity_psi_prime),
        channel_fidelity_lower_bound: Sig17(cert.channel_fidelity_lower_bound),
        verdict_lemma3: cert.verdict_lemma3,
        verdict_theorem1: cert.verdict_theorem1,
        verdict_negativity_corollary: cert.verdict_negativity_corollary,
    };
    serde_json::to_string_pretty(&out).expect("serializable")
}
