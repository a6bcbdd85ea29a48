//! Continuation of the roots of `p_β(z) = sin(mπz) ∓ β sin(πz)` from `β = 0`,
//! where they sit at `z = j/m`, towards `β = m`.
//!
//! This is a validation tool rather than a production solver: paths are real
//! until two of them meet, and tracking stops at that collision.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::{eval_beta, eval_beta_derivative, BetaFamily, Parity};
use crate::error::{Error, Result};

/// Denominator of `dz/dβ` below which two roots are considered merged.
pub const COLLISION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ReachedTarget,
    Collision,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomotopyPath {
    pub j: i64,
    pub parity: Parity,
    /// `(β, z)` samples, starting at `(0, j/m)`.
    pub samples: Vec<(f64, Complex64)>,
    pub terminated_by: Termination,
}

impl HomotopyPath {
    pub fn last(&self) -> (f64, Complex64) {
        *self.samples.last().expect("paths hold at least the start")
    }
}

fn family(m: f64, beta: f64, parity: Parity) -> BetaFamily {
    BetaFamily::new(m, beta, parity)
}

/// `∂p_β/∂z`, the denominator of `dz/dβ`.
fn denominator(z: Complex64, m: f64, beta: f64, parity: Parity) -> Complex64 {
    eval_beta_derivative(z, &family(m, beta, parity))
}

/// `dz/dβ = s·sin(πz) / (mπ cos(mπz) − sβπ cos(πz))`.
pub fn path_slope(z: Complex64, m: f64, beta: f64, parity: Parity) -> Complex64 {
    let f = family(m, beta, parity);
    (PI * z).sin() * f.sign / eval_beta_derivative(z, &f)
}

fn jpfjm_sign(j: i64, m: f64) -> f64 {
    let n = j + (j as f64 / m).floor() as i64;
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Slope of the path at `β = 0`: `s·(−1)^{j+⌊j/m⌋}·|sin(jπ/m)| / (mπ)`.
pub fn initial_slope(j: i64, m: f64, parity: Parity) -> f64 {
    let s = family(m, 0.0, parity).sign;
    s * jpfjm_sign(j, m) * (j as f64 * PI / m).sin().abs() / (m * PI)
}

/// The same slope without the `1/(mπ)` factor, in its usual stated form.
pub fn stated_initial_slope(j: i64, m: f64) -> f64 {
    jpfjm_sign(j, m) * (j as f64 * PI / m).sin().abs()
}

fn correct(z0: Complex64, m: f64, beta: f64, parity: Parity) -> Option<Complex64> {
    let f = family(m, beta, parity);
    let mut z = z0;
    for _ in 0..12 {
        let step = eval_beta(z, &f) / eval_beta_derivative(z, &f);
        if !step.is_finite() {
            return None;
        }
        z -= step;
        if step.norm() <= 1e-14 * z.norm().max(1.0) {
            return Some(z);
        }
    }
    None
}

/// Root of `p_β` continued from `j/m`, found by Newton at small `β`.
pub fn root_near_start(j: i64, m: f64, beta: f64, parity: Parity) -> Result<Complex64> {
    let start = Complex64::new(j as f64 / m, 0.0);
    let seed = start + initial_slope(j, m, parity) * beta;
    correct(seed, m, beta, parity).ok_or(Error::NonConvergence {
        iterations: 12,
        residual: eval_beta(seed, &family(m, beta, parity)).norm(),
    })
}

/// `(z(β) − j/m)/β`.
pub fn finite_difference_slope(j: i64, m: f64, beta: f64, parity: Parity) -> Result<f64> {
    let z = root_near_start(j, m, beta, parity)?;
    Ok((z.re - j as f64 / m) / beta)
}

/// Solves `p_β = ∂p_β/∂z = 0` for `(β, z)` from a nearby point of the path.
fn locate_fold(beta0: f64, z0: f64, m: f64, parity: Parity) -> Option<(f64, f64)> {
    let s = family(m, 0.0, parity).sign;
    let (mut b, mut z) = (beta0, z0);
    for _ in 0..50 {
        let (smz, cmz) = (m * PI * z).sin_cos();
        let (sz, cz) = (PI * z).sin_cos();
        let f1 = smz - s * b * sz;
        let f2 = m * PI * cmz - s * b * PI * cz;
        let (a11, a12) = (f2, -s * sz);
        let (a21, a22) = (-m * m * PI * PI * smz + s * b * PI * PI * sz, -s * PI * cz);
        let det = a11 * a22 - a12 * a21;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dz = (f1 * a22 - f2 * a12) / det;
        let db = (a11 * f2 - a21 * f1) / det;
        z -= dz;
        b -= db;
        if dz.abs() < 1e-15 && db.abs() < 1e-15 {
            break;
        }
    }
    (b.is_finite() && z.is_finite()).then_some((b, z))
}

/// Tracks the odd-family root starting at `j/m`.
pub fn trace_homotopy(j: i64, m: f64, beta_end: f64, steps: usize) -> Result<HomotopyPath> {
    trace_homotopy_family(j, m, Parity::Odd, beta_end, steps)
}

/// Predictor–corrector continuation in `β` with step halving near folds.
pub fn trace_homotopy_family(
    j: i64,
    m: f64,
    parity: Parity,
    beta_end: f64,
    steps: usize,
) -> Result<HomotopyPath> {
    if !(m > 1.0) || !(beta_end > 0.0) || beta_end > m || steps == 0 {
        return Err(Error::Precondition(format!(
            "need m > 1, 0 < beta_end ≤ m, steps > 0 (m = {m}, beta_end = {beta_end})"
        )));
    }
    let start = Complex64::new(j as f64 / m, 0.0);
    let mut samples = vec![(0.0, start)];
    // both terms of dz/dβ vanish: the root never moves
    if (PI * start.re).sin().abs() < 1e-14 {
        samples.push((beta_end, start));
        return Ok(HomotopyPath {
            j,
            parity,
            samples,
            terminated_by: Termination::ReachedTarget,
        });
    }
    let slope0 = initial_slope(j, m, parity);
    let (lo, hi) = if slope0 < 0.0 {
        ((j - 1) as f64 / m, j as f64 / m)
    } else {
        (j as f64 / m, (j + 1) as f64 / m)
    };
    let guard = 1e-12;
    let nominal = beta_end / steps as f64;
    let max_move = 0.05 / m;
    let mut h = nominal;
    let (mut beta, mut z) = (0.0, start);
    let mut first = true;

    while beta < beta_end {
        h = h.min(beta_end - beta);
        let next_beta = beta + h;
        // the path leaves j/m with a finite slope even though sin(mπz) = 0 there
        let slope = if first {
            Complex64::new(slope0, 0.0)
        } else {
            path_slope(z, m, beta, parity)
        };
        let predicted = z + slope * h;
        // a corrector that lands outside the strip has jumped branches near a
        // fold at the edge; shrink the step until the fold solve takes over
        let corrected = correct(predicted, m, next_beta, parity)
            .filter(|c| (c - z).norm() <= max_move && c.im.abs() < 1e-9)
            .filter(|c| c.re >= lo - guard && c.re <= hi + guard);
        match corrected {
            Some(c) => {
                let c = Complex64::new(c.re, 0.0);
                beta = next_beta;
                z = c;
                first = false;
                samples.push((beta, z));
                if denominator(z, m, beta, parity).norm() < COLLISION_TOL {
                    return Ok(HomotopyPath {
                        j,
                        parity,
                        samples,
                        terminated_by: Termination::Collision,
                    });
                }
                h = (h * 1.5).min(nominal);
            }
            None => {
                h *= 0.5;
                if h < 1e-13 * beta_end.max(1.0) {
                    let (fb, fz) = locate_fold(beta, z.re, m, parity).ok_or(Error::NonConvergence {
                        iterations: 50,
                        residual: denominator(z, m, beta, parity).norm(),
                    })?;
                    // at β = m an integer edge is a triple root of p_β; the
                    // fold solve only resolves it to about eps^(1/3)
                    let edge = fz.round();
                    let (fb, fz) = if (fb - beta_end).abs() < 1e-6
                        && (fz - edge).abs() < 1e-4 * edge.abs().max(1.0)
                        && (edge - lo).abs().min((edge - hi).abs()) < 1e-9 * edge.abs().max(1.0)
                    {
                        (beta_end, edge)
                    } else {
                        (fb, fz)
                    };
                    if fz < lo - guard || fz > hi + guard {
                        return Err(Error::LeftStrip { beta: fb, re: fz });
                    }
                    samples.push((fb, Complex64::new(fz, 0.0)));
                    return Ok(HomotopyPath {
                        j,
                        parity,
                        samples,
                        terminated_by: Termination::Collision,
                    });
                }
            }
        }
    }
    Ok(HomotopyPath {
        j,
        parity,
        samples,
        terminated_by: Termination::ReachedTarget,
    })
}
