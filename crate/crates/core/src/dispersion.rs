//! Characteristic functions of the problem.
//!
//! In scaled coordinates the wavenumbers are the zeros of
//!
//! ```text
//! p_odd(z)  = sin(mπz) − m·sin(πz)
//! p_even(z) = sin(mπz) + m·sin(πz)
//! ```
//!
//! and of the β-family `sin(mπz) − s·β·sin(πz)` that deforms `sin(mπz)` into
//! either factor. The `*_scaled` evaluators multiply by `e^{−mπ|Im z|}` so tall
//! contours never overflow; logarithmic derivatives are unaffected.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::Medium;

/// Symmetry class of an eigenfunction pair, which selects the dispersion factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// `sin(mπz) − m sin(πz)`; odd eigenfunctions.
    Odd,
    /// `sin(mπz) + m sin(πz)`; even eigenfunctions.
    Even,
    /// Product of both factors.
    Product,
}

impl Parity {
    /// Sign in front of `m·sin(πz)`.
    fn sign(self) -> f64 {
        match self {
            Parity::Odd => -1.0,
            Parity::Even => 1.0,
            Parity::Product => panic!("product has no single sign"),
        }
    }

    pub fn other(self) -> Parity {
        match self {
            Parity::Odd => Parity::Even,
            Parity::Even => Parity::Odd,
            Parity::Product => Parity::Product,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
            Parity::Product => "product",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `p_β(z) = sin(mπz) − sign·β·sin(πz)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaFamily {
    pub m: f64,
    pub beta: f64,
    /// `+1` deforms towards the odd factor, `−1` towards the even one.
    pub sign: f64,
}

impl BetaFamily {
    pub fn new(m: f64, beta: f64, parity: Parity) -> Self {
        assert!(beta >= 0.0, "beta must be non-negative");
        let sign = match parity {
            Parity::Odd => 1.0,
            Parity::Even => -1.0,
            Parity::Product => panic!("beta family is defined per factor"),
        };
        Self { m, beta, sign }
    }
}

/// `sin(a)·e^{−s}` without forming `sin(a)` when `|Im a|` is large.
fn sin_scaled(a: Complex64, s: f64) -> Complex64 {
    if s == 0.0 {
        return a.sin();
    }
    let (sx, cx) = a.re.sin_cos();
    let up = (a.im - s).exp();
    let down = (-a.im - s).exp();
    Complex64::new(sx * 0.5 * (up + down), cx * 0.5 * (up - down))
}

/// `n`-th derivative of `sin(c·z)`, times `e^{−s}`.
fn sin_derivative_scaled(c: f64, z: Complex64, n: u32, s: f64) -> Complex64 {
    let shifted = c * z + Complex64::new(n as f64 * FRAC_PI_2, 0.0);
    sin_scaled(shifted, s) * c.powi(n as i32)
}

fn factor_derivative_scaled(z: Complex64, m: f64, sign: f64, n: u32, s: f64) -> Complex64 {
    sin_derivative_scaled(m * PI, z, n, s) + sin_derivative_scaled(PI, z, n, s) * (sign * m)
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn derivative_scaled(z: Complex64, m: f64, parity: Parity, order: u32, s: f64) -> Complex64 {
    match parity {
        Parity::Odd | Parity::Even => factor_derivative_scaled(z, m, parity.sign(), order, s),
        Parity::Product => {
            // Leibniz rule; each factor carries half of the scale
            let half = 0.5 * s;
            (0..=order)
                .map(|k| {
                    factor_derivative_scaled(z, m, -1.0, k, half)
                        * factor_derivative_scaled(z, m, 1.0, order - k, half)
                        * binomial(order, k)
                })
                .sum()
        }
    }
}

/// Exponent of the internal scale at `z`.
pub fn scale_exponent(z: Complex64, m: f64, parity: Parity) -> f64 {
    let s = m * PI * z.im.abs();
    match parity {
        Parity::Product => 2.0 * s,
        _ => s,
    }
}

/// Value of the dispersion factor (or their product) at `z`.
pub fn eval_factor(z: Complex64, m: f64, parity: Parity) -> Complex64 {
    derivative_scaled(z, m, parity, 0, 0.0)
}

/// Analytic derivative of order `0..=4`.
pub fn eval_derivative(z: Complex64, m: f64, parity: Parity, order: u32) -> Complex64 {
    assert!(order <= 4, "derivative order must be at most 4");
    derivative_scaled(z, m, parity, order, 0.0)
}

/// `(f, f')` at `z`, both multiplied by `e^{−scale_exponent(z)}`.
pub fn eval_scaled(z: Complex64, m: f64, parity: Parity) -> (Complex64, Complex64) {
    let s = scale_exponent(z, m, parity);
    (
        derivative_scaled(z, m, parity, 0, s),
        derivative_scaled(z, m, parity, 1, s),
    )
}

/// `(f^{(n)}, f^{(n+1)})` at `z`, both scaled like [`eval_scaled`].
pub fn eval_derivative_scaled(
    z: Complex64,
    m: f64,
    parity: Parity,
    order: u32,
) -> (Complex64, Complex64) {
    let s = scale_exponent(z, m, parity);
    (
        derivative_scaled(z, m, parity, order, s),
        derivative_scaled(z, m, parity, order + 1, s),
    )
}

/// `|f(z)|` divided by the size of the two terms that cancel at a root.
pub fn relative_residual(z: Complex64, m: f64, parity: Parity) -> f64 {
    let s = scale_exponent(z, m, Parity::Odd);
    let big = sin_scaled(z * (m * PI), s).norm();
    let small = sin_scaled(z * PI, s).norm() * m;
    let value = match parity {
        Parity::Product => {
            let a = factor_derivative_scaled(z, m, -1.0, 0, s).norm();
            let b = factor_derivative_scaled(z, m, 1.0, 0, s).norm();
            return (a / (big + small)).min(b / (big + small));
        }
        _ => factor_derivative_scaled(z, m, parity.sign(), 0, s).norm(),
    };
    value / (big + small)
}

/// Value of `p_β` at `z`.
pub fn eval_beta(z: Complex64, family: &BetaFamily) -> Complex64 {
    (family.m * PI * z).sin() - (PI * z).sin() * (family.sign * family.beta)
}

/// `d p_β / dz` at `z`.
pub fn eval_beta_derivative(z: Complex64, family: &BetaFamily) -> Complex64 {
    (family.m * PI * z).cos() * (family.m * PI)
        - (PI * z).cos() * (family.sign * family.beta * PI)
}

/// Residual of the physical relation
/// `(σ−1) sin((σ+1)kL/2) ∓ (σ+1) sin((σ−1)kL/2)`, minus for odd pairs.
///
/// For `σ > 1` this equals `(σ−1)·eval_factor(z(k), m, parity)`.
pub fn eval_physical(k: Complex64, medium: &Medium, parity: Parity) -> Complex64 {
    let sigma = medium.sigma();
    let half = k * (0.5 * medium.length());
    let one = |sign: f64| {
        ((sigma + 1.0) * half).sin() * (sigma - 1.0)
            + ((sigma - 1.0) * half).sin() * (sign * (sigma + 1.0))
    };
    match parity {
        Parity::Odd => one(-1.0),
        Parity::Even => one(1.0),
        Parity::Product => one(-1.0) * one(1.0),
    }
}
