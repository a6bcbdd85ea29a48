//! Solve, cross-check and certify one configuration.

use serde::Serialize;

use itw::certify::{certify_spectrum_with, mark_certified, CertReport, CertifyOptions};
use itw::error::Error;
use itw::rational::{spectrum_rational_with, RationalOptions};
use itw::spectrum::{match_roots, Spectrum};
use itw::analytic::spectrum_analytic;

use crate::config::RunConfig;

/// Largest distance tolerated between the two solvers under `--method both`.
pub const AGREEMENT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct Agreement {
    pub tolerance: f64,
    pub rational_roots: usize,
    pub analytic_roots: usize,
    /// Largest matched distance in `z`; `None` when the lists do not pair up.
    pub max_distance: Option<f64>,
}

impl Agreement {
    pub fn ok(&self) -> bool {
        self.max_distance.is_some()
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub spectrum: Spectrum,
    pub report: CertReport,
    pub agreement: Option<Agreement>,
}

impl Outcome {
    /// Anything that should turn the exit code to 1.
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .report
            .defects
            .iter()
            .map(|d| format!("defect in strip {}: {}", d.strip, d.message))
            .collect();
        out.extend(self.report.mismatches().map(|s| {
            format!(
                "strip {} does not match its predicted class{}",
                s.strip,
                s.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default()
            )
        }));
        out.extend(self.report.bound_violations.iter().map(|v| {
            format!("root z = {} exceeds the imaginary-part bound {}", v.z, v.bound)
        }));
        if let Some(a) = self.agreement.as_ref().filter(|a| !a.ok()) {
            out.push(format!(
                "rational ({}) and analytic ({}) roots disagree beyond {:e}",
                a.rational_roots, a.analytic_roots, a.tolerance
            ));
        }
        out
    }
}

/// Runs the solver(s) selected in `cfg`, then certifies the result.
///
/// Under `--method both` the rational spectrum is the one reported.
pub fn run(cfg: &RunConfig) -> Result<Outcome, Error> {
    let (lo, hi) = cfg.window_z;
    let (rational, analytic) = cfg.solvers().map_err(|e| Error::Precondition(e.0))?;
    let ropts = RationalOptions {
        cluster_radius: cfg.cluster_tol,
        ..RationalOptions::default()
    };
    let mut from_rational = match rational {
        Some(rm) => Some(spectrum_rational_with(&cfg.problem, rm, lo, hi, &ropts)?),
        None => None,
    };
    let from_analytic = if analytic {
        Some(spectrum_analytic(&cfg.problem, lo, hi)?)
    } else {
        None
    };
    let agreement = match (&from_rational, &from_analytic) {
        (Some(a), Some(b)) => Some(Agreement {
            tolerance: AGREEMENT_TOL,
            rational_roots: a.roots.len(),
            analytic_roots: b.roots.len(),
            max_distance: match_roots(&a.roots, &b.roots, AGREEMENT_TOL),
        }),
        _ => None,
    };
    let mut spectrum = from_rational
        .take()
        .or(from_analytic)
        .expect("at least one solver is selected");
    spectrum.sort();
    let opts = CertifyOptions {
        eigen_tol: cfg.residual_tol,
        ..CertifyOptions::default()
    };
    let report = certify_spectrum_with(&spectrum, Some(&cfg.medium), &opts);
    mark_certified(&mut spectrum, &report)?;
    Ok(Outcome {
        spectrum,
        report,
        agreement,
    })
}
