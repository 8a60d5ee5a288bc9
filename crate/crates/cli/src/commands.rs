use std::path::Path;

use entshare::io::{self, format_sig17, Sig17};
use entshare::measures::{self, FefOptions};
use entshare::omega::{self, OmegaParams};
use entshare::{channels, states, Error, KrausChannel, PureBipartiteState};
use serde::Serialize;

use crate::{Failure, Verdict};

/// Writes `text` to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn check_restarts(restarts: usize) -> Result<(), Failure> {
    if restarts == 0 {
        return Err(Failure::usage("restarts must be at least 1"));
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_channel(path: &Path) -> Result<KrausChannel, Failure> {
    Ok(io::parse_channel(&read_text(path)?)?)
}

pub fn validate(path: &Path) -> Result<Verdict, Failure> {
    let ops = io::parse_kraus_ops(&read_text(path)?)?;
    let d = ops[0].nrows();
    println!("dimension: {d}");
    println!("kraus operators: {}", ops.len());
    match channels::kraus_validate(ops) {
        Ok(ch) => {
            let (residual, _, _) = ch.completeness_residual();
            println!("completeness residual: {}", format_sig17(residual));
            let unital = if ch.is_unital() { "unital" } else { "nonunital" };
            println!("valid, {unital}");
            Ok(Verdict::Pass)
        }
        Err(Error::NotTracePreserving { residual, row, col }) => {
            println!("completeness residual: {}", format_sig17(residual));
            println!("invalid: not trace preserving at entry ({row}, {col})");
            Ok(Verdict::Fail)
        }
        Err(other) => Err(other.into()),
    }
}

#[derive(Serialize)]
struct MeasuresReport {
    input: String,
    phiplus_fidelity: Sig17,
    fef_value: Sig17,
    fef_converged: bool,
    negativity: Sig17,
    fstar_upper_bound: Sig17,
    lambda_max_choi: Sig17,
}

fn select_input(ch: &KrausChannel, input: &str) -> Result<PureBipartiteState, Failure> {
    match input {
        "phiplus" => Ok(states::max_entangled(ch.dim())?),
        "psi_prime" => Ok(channels::top_choi_eigenpair(&ch.dual())?.vector),
        path => {
            let psi = io::parse_state(&read_text(Path::new(path))?)?;
            if psi.dim() != ch.dim() {
                return Err(Failure::usage(format!(
                    "state dimension {} does not match channel dimension {}",
                    psi.dim(),
                    ch.dim()
                )));
            }
            Ok(psi)
        }
    }
}

pub fn measures(
    path: &Path,
    input: &str,
    seed: u64,
    restarts: usize,
    out: Option<&Path>,
) -> Result<Verdict, Failure> {
    check_restarts(restarts)?;
    let ch = load_channel(path)?;
    let psi = select_input(&ch, input)?;
    let rho = channels::apply_one_sided(&ch, &psi)?;
    let phi = states::max_entangled(ch.dim())?;
    let opts = FefOptions {
        restarts,
        seed,
        ..FefOptions::default()
    };
    let fef = measures::fef(&rho, &opts)?;
    let report = MeasuresReport {
        input: input.to_string(),
        phiplus_fidelity: Sig17(states::fidelity_with(&rho, &phi)?),
        fef_value: Sig17(fef.value),
        fef_converged: fef.converged,
        negativity: Sig17(measures::negativity(&rho)),
        fstar_upper_bound: Sig17(measures::fstar_upper_bound(&rho)?),
        lambda_max_choi: Sig17(channels::choi_operator(&ch)?.lambda_max()),
    };
    let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    emit(out, &text)?;
    Ok(Verdict::Pass)
}

/// Parses a comma-separated x vector and checks its length against `d - 1`.
pub fn parse_x(d: usize, text: &str) -> Result<Vec<f64>, Failure> {
    let x = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Failure::usage(format!("cannot parse {t:?} as a number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if d < 2 || x.len() != d - 1 {
        return Err(Failure::usage(format!(
            "--x has {} entries, expected d - 1 = {}",
            x.len(),
            d.saturating_sub(1)
        )));
    }
    Ok(x)
}

pub fn certify(
    d: usize,
    x: &str,
    seed: u64,
    restarts: usize,
    out: Option<&Path>,
) -> Result<Verdict, Failure> {
    check_restarts(restarts)?;
    let x = parse_x(d, x)?;
    let params = OmegaParams::new(d, x)?;
    let opts = FefOptions {
        restarts,
        seed,
        ..FefOptions::default()
    };
    let cert = omega::theorem1_certificate(&params, &opts)?;
    emit(out, &(io::certificate_to_json(&cert) + "\n"))?;
    Ok(if cert.all_verdicts() {
        Verdict::Pass
    } else {
        Verdict::Fail
    })
}
