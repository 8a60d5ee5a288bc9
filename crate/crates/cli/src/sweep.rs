//! Parameter sweeps over the Omega family.
//!
//! Sweep file:
//! ```json
//! {"d": 3,
//!  "axes": [{"component": 1, "start": 0.1, "stop": 0.9, "steps": 9},
//!           {"component": 2, "start": 0.1, "stop": 0.9, "steps": 9}],
//!  "fixed": {},
//!  "output_path": "sweep.csv",
//!  "format": "csv"}
//! ```
//! Components are numbered `1..=d-1`; each must be covered by exactly one
//! axis or fixed entry. Rows follow the grid in lexicographic order with the
//! first axis varying slowest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use entshare::io::{format_sig17, Sig17};
use entshare::measures::FefOptions;
use entshare::omega::{self, OmegaParams, TheoremCertificate};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Failure, Format, Verdict};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub component: usize,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    fn value(&self, k: usize) -> f64 {
        if self.steps == 1 {
            self.start
        } else {
            self.start + (self.stop - self.start) * k as f64 / (self.steps - 1) as f64
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub d: usize,
    pub axes: Vec<Axis>,
    #[serde(default)]
    pub fixed: BTreeMap<usize, f64>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
}

impl SweepSpec {
    pub fn check(&self) -> Result<(), Failure> {
        if self.d < 3 {
            return Err(Failure::usage(format!("sweep needs d >= 3, got {}", self.d)));
        }
        if self.axes.is_empty() {
            return Err(Failure::usage("sweep has no axes"));
        }
        let mut seen = vec![false; self.d];
        let components = self
            .axes
            .iter()
            .map(|a| a.component)
            .chain(self.fixed.keys().copied());
        for c in components {
            if c == 0 || c >= self.d {
                return Err(Failure::usage(format!(
                    "component {c} outside 1..={}",
                    self.d - 1
                )));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Failure::usage(format!("component {c} given more than once")));
            }
        }
        if let Some(missing) = (1..self.d).find(|&c| !seen[c]) {
            return Err(Failure::usage(format!("component {missing} has no axis or fixed value")));
        }
        if let Some(axis) = self.axes.iter().find(|a| a.steps == 0) {
            return Err(Failure::usage(format!("axis {} has zero steps", axis.component)));
        }
        Ok(())
    }

    /// Grid points in lexicographic order of the axis indices.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut points = Vec::new();
        let mut index = vec![0usize; self.axes.len()];
        loop {
            let mut x = vec![0.0; self.d - 1];
            for (&c, &v) in &self.fixed {
                x[c - 1] = v;
            }
            for (axis, &k) in self.axes.iter().zip(&index) {
                x[axis.component - 1] = axis.value(k);
            }
            points.push(x);
            // Odometer increment, last axis fastest.
            let mut pos = self.axes.len();
            loop {
                if pos == 0 {
                    return points;
                }
                pos -= 1;
                index[pos] += 1;
                if index[pos] < self.axes[pos].steps {
                    break;
                }
                index[pos] = 0;
            }
        }
    }
}

/// One sweep row. Closed-form columns are filled whenever the point is a
/// valid relaxed parameter; certificate columns only for strict points.
#[derive(Debug, Clone)]
pub struct Row {
    pub d: usize,
    pub x: Vec<f64>,
    pub status: &'static str,
    pub reason: Option<String>,
    pub lambda_max: Option<f64>,
    pub negativity_phiplus: Option<f64>,
    pub fstar_bound: Option<f64>,
    pub gap: Option<f64>,
    pub certificate: Option<TheoremCertificate>,
}

pub fn evaluate(d: usize, x: Vec<f64>, opts: &FefOptions) -> Row {
    let mut row = Row {
        d,
        x: x.clone(),
        status: "skipped",
        reason: None,
        lambda_max: None,
        negativity_phiplus: None,
        fstar_bound: None,
        gap: None,
        certificate: None,
    };
    if let Ok(relaxed) = OmegaParams::relaxed(d, x.clone()) {
        let neg = omega::omega_negativity_phiplus(&relaxed);
        row.lambda_max = Some(omega::omega_lambda_max(&relaxed));
        row.negativity_phiplus = Some(neg);
        row.fstar_bound = Some((1.0 + 2.0 * neg) / d as f64);
        row.gap = Some(omega::omega_gap(&relaxed));
    }
    match OmegaParams::new(d, x).and_then(|p| omega::theorem1_certificate(&p, opts)) {
        Ok(cert) => {
            row.status = "ok";
            row.lambda_max = Some(cert.lambda_max_closed);
            row.negativity_phiplus = Some(cert.negativity_phiplus_closed);
            row.fstar_bound = Some(cert.fstar_bound_phiplus);
            row.gap = Some(cert.gap);
            row.certificate = Some(cert);
        }
        Err(err) => row.reason = Some(err.to_string()),
    }
    row
}

fn opt_num(v: Option<f64>) -> String {
    v.map(format_sig17).unwrap_or_default()
}

fn opt_bool(v: Option<bool>) -> String {
    v.map(|b| b.to_string()).unwrap_or_default()
}

pub fn to_csv(d: usize, rows: &[Row]) -> Result<String, Failure> {
    let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
    let mut header = vec!["d".to_string()];
    header.extend((1..d).map(|k| format!("x{k}")));
    header.extend(
        [
            "status",
            "lambda_max",
            "negativity_phiplus",
            "fstar_bound",
            "gap",
            "fef_psi_prime",
            "negativity_psi_prime",
            "verdict_lemma3",
            "verdict_theorem1",
            "verdict_negativity_corollary",
        ]
        .map(String::from),
    );
    let to_failure = |e: csv::Error| Failure::usage(e.to_string());
    wtr.write_record(&header).map_err(to_failure)?;
    for row in rows {
        let cert = row.certificate.as_ref();
        let mut record = vec![row.d.to_string()];
        record.extend(row.x.iter().map(|&v| format_sig17(v)));
        record.push(row.status.to_string());
        record.push(opt_num(row.lambda_max));
        record.push(opt_num(row.negativity_phiplus));
        record.push(opt_num(row.fstar_bound));
        record.push(opt_num(row.gap));
        record.push(opt_num(cert.map(|c| c.fef_psi_prime)));
        record.push(opt_num(cert.map(|c| c.negativity_psi_prime)));
        record.push(opt_bool(cert.map(|c| c.verdict_lemma3)));
        record.push(opt_bool(cert.map(|c| c.verdict_theorem1)));
        record.push(opt_bool(cert.map(|c| c.verdict_negativity_corollary)));
        wtr.write_record(&record).map_err(to_failure)?;
    }
    let bytes = wtr.into_inner().map_err(|e| Failure::usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct JsonRow {
    d: usize,
    x: Vec<Sig17>,
    status: &'static str,
    reason: Option<String>,
    lambda_max: Option<Sig17>,
    negativity_phiplus: Option<Sig17>,
    fstar_bound: Option<Sig17>,
    gap: Option<Sig17>,
    fef_psi_prime: Option<Sig17>,
    negativity_psi_prime: Option<Sig17>,
    verdict_lemma3: Option<bool>,
    verdict_theorem1: Option<bool>,
    verdict_negativity_corollary: Option<bool>,
}

pub fn to_json(rows: &[Row]) -> String {
    let out: Vec<JsonRow> = rows
        .iter()
        .map(|row| {
            let cert = row.certificate.as_ref();
            JsonRow {
                d: row.d,
                x: row.x.iter().copied().map(Sig17).collect(),
                status: row.status,
                reason: row.reason.clone(),
                lambda_max: row.lambda_max.map(Sig17),
                negativity_phiplus: row.negativity_phiplus.map(Sig17),
                fstar_bound: row.fstar_bound.map(Sig17),
                gap: row.gap.map(Sig17),
                fef_psi_prime: cert.map(|c| Sig17(c.fef_psi_prime)),
                negativity_psi_prime: cert.map(|c| Sig17(c.negativity_psi_prime)),
                verdict_lemma3: cert.map(|c| c.verdict_lemma3),
                verdict_theorem1: cert.map(|c| c.verdict_theorem1),
                verdict_negativity_corollary: cert.map(|c| c.verdict_negativity_corollary),
            }
        })
        .collect();
    serde_json::to_string_pretty(&out).expect("serializable") + "\n"
}

pub fn run(
    spec_file: &Path,
    seed: Option<u64>,
    restarts: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
) -> Result<Verdict, Failure> {
    let text = std::fs::read_to_string(spec_file)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", spec_file.display())))?;
    let spec: SweepSpec = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("malformed sweep file: {e}")))?;
    spec.check()?;
    let opts = FefOptions {
        seed: seed.or(spec.seed).unwrap_or(0),
        restarts: restarts
            .or(spec.restarts)
            .unwrap_or(FefOptions::default().restarts),
        ..FefOptions::default()
    };
    crate::commands::check_restarts(opts.restarts)?;
    let format = format.or(spec.format).unwrap_or(Format::Csv);
    let out = out.or(spec.output_path.clone());

    let rows: Vec<Row> = spec
        .points()
        .into_par_iter()
        .map(|x| evaluate(spec.d, x, &opts))
        .collect();

    let text = match format {
        Format::Csv => to_csv(spec.d, &rows)?,
        Format::Json => to_json(&rows),
    };
    crate::commands::emit(out.as_deref(), &text)?;

    let evaluated = rows.iter().filter(|r| r.certificate.is_some()).count();
    let failed = rows
        .iter()
        .filter(|r| r.certificate.as_ref().is_some_and(|c| !c.all_verdicts()))
        .count();
    eprintln!(
        "{} rows, {} certified, {} skipped, {} with a false verdict",
        rows.len(),
        evaluated,
        rows.len() - evaluated,
        failed
    );
    Ok(if failed == 0 { Verdict::Pass } else { Verdict::Fail })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(axes: Vec<Axis>, fixed: BTreeMap<usize, f64>) -> SweepSpec {
        SweepSpec {
            d: 4,
            axes,
            fixed,
            output_path: None,
            format: None,
            seed: None,
            restarts: None,
        }
    }

    fn axis(component: usize, steps: usize) -> Axis {
        Axis {
            component,
            start: 0.1,
            stop: 0.9,
            steps,
        }
    }

    #[test]
    fn grid_order_is_lexicographic() {
        let s = spec(vec![axis(1, 2), axis(3, 3)], BTreeMap::from([(2, 0.5)]));
        s.check().unwrap();
        let pts = s.points();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], vec![0.1, 0.5, 0.1]);
        assert_eq!(pts[1], vec![0.1, 0.5, 0.5]);
        assert_eq!(pts[3], vec![0.9, 0.5, 0.1]);
    }

    #[test]
    fn spec_coverage_errors() {
        assert!(spec(vec![], BTreeMap::new()).check().is_err());
        assert!(spec(vec![axis(1, 2)], BTreeMap::new()).check().is_err());
        assert!(spec(vec![axis(1, 2), axis(1, 2), axis(2, 1), axis(3, 1)], BTreeMap::new())
            .check()
            .is_err());
        assert!(spec(vec![axis(1, 2), axis(2, 0), axis(3, 1)], BTreeMap::new())
            .check()
            .is_err());
        assert!(spec(vec![axis(4, 2)], BTreeMap::from([(1, 0.2), (2, 0.3), (3, 0.4)]))
            .check()
            .is_err());
    }

    #[test]
    fn boundary_rows_are_skipped_with_closed_forms() {
        let row = evaluate(3, vec![0.5, 0.5], &FefOptions::default());
        assert_eq!(row.status, "skipped");
        assert!(row.gap.unwrap().abs() < 1e-12);
        assert!(row.certificate.is_none());
        assert!(row.reason.unwrap().contains("distinctness"));

        let row = evaluate(3, vec![1.5, 0.5], &FefOptions::default());
        assert_eq!(row.status, "skipped");
        assert!(row.lambda_max.is_none());
    }
}
