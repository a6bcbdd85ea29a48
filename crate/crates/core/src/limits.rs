//! Limiting regimes and counting functions.
//!
//! * Born limit `σ → 1`: the factors degenerate to `πz = ±sin(πz)`; every
//!   nonzero root is complex with `Im z` growing logarithmically.
//! * Strong scatterer `σ → ∞`: odd wavenumbers approach the solutions of
//!   `x = tan x` with `x = k(σ−1)L/2`, even ones approach `2πj/(σL)`.
//! * Counting: with quadruples split 2 + 2, a window of width `W` in `Re k`
//!   holds `(σ+1)LW/π ± 2` wavenumbers, `|σ−1|LW/π ± 2` of them real. The
//!   quadruple at `k = 0` is shared with the mirror window and counts half.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Medium;
use crate::spectrum::Spectrum;

/// A root of `πz = s·sin(πz)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BornRoot {
    /// Index of the strip `j ≤ Re z ≤ j + 1`.
    pub j: i64,
    /// `s = ±1`.
    pub sign: f64,
    pub z: Complex64,
    pub multiplicity: u32,
}

impl BornRoot {
    /// Wavenumber `k = πz/L`.
    pub fn k(&self, length: f64) -> Complex64 {
        self.z * (PI / length)
    }

    /// See [`born_residual`].
    pub fn residual(&self) -> f64 {
        born_residual(self.z, self.sign)
    }
}

/// `|πz − s·sin(πz)| / (|πz| + |sin(πz)|)`.
///
/// Relative, because one ulp of `z` already moves the absolute value by
/// `|π(1 − s·cos πz)|·ulp`, which exceeds `1e-11` for `j` in the hundreds.
pub fn born_residual(z: Complex64, sign: f64) -> f64 {
    let (a, b) = (z * PI, (z * PI).sin());
    (a - b * sign).norm() / (a.norm() + b.norm())
}

/// Sign of the equation whose pair lives in `[j, j+1]`: `+` for even `j`.
///
/// For large `Im z`, `sin(π(j + ½ + iy)) ≈ (−1)^j e^{πy}/2`, so a root near
/// `Re z = j + ½` needs `s·(−1)^j > 0`.
pub fn born_sign(j: i64) -> f64 {
    if j.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Leading-order position in its usual stated form: `(j+½) + i·log(2|j+½|)`.
pub fn born_asymptotic(j: i64) -> Complex64 {
    let c = j as f64 + 0.5;
    Complex64::new(c, (2.0 * c.abs()).ln())
}

/// Leading-order position from balancing `π(j+½)` against `e^{πy}/2`:
/// `(j+½) + i·log(2π|j+½|)/π`.
pub fn born_asymptotic_corrected(j: i64) -> Complex64 {
    let c = j as f64 + 0.5;
    Complex64::new(c, (2.0 * PI * c.abs()).ln() / PI)
}

fn born_newton(seed: Complex64, sign: f64) -> Result<Complex64> {
    let mut z = seed;
    for _ in 0..60 {
        let f = z * PI - (z * PI).sin() * sign;
        let df = PI - (z * PI).cos() * (PI * sign);
        let step = f / df;
        if !step.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
            return Ok(z);
        }
    }
    Err(Error::NonConvergence {
        iterations: 60,
        residual: born_residual(seed, sign),
    })
}

/// Upper root of the pair in `[j, j+1]`, `j ≥ 1`.
fn born_upper(j: i64) -> Result<Complex64> {
    let sign = born_sign(j);
    let z = born_newton(born_asymptotic_corrected(j), sign)?;
    if z.re < j as f64 || z.re > (j + 1) as f64 || z.im <= 0.0 {
        return Err(Error::NonConvergence {
            iterations: 60,
            residual: born_residual(z, sign),
        });
    }
    Ok(z)
}

/// Roots of the Born equation in the strips `j ≤ Re z ≤ j+1` for `j` in `js`.
///
/// Strips `−1` and `0` hold only the triple root at the origin, reported
/// once; every other strip holds one conjugate pair, upper root first.
pub fn born_roots(js: std::ops::RangeInclusive<i64>) -> Result<Vec<BornRoot>> {
    let mut out = Vec::new();
    let mut origin_done = false;
    for j in js {
        if j == 0 || j == -1 {
            if !origin_done {
                out.push(BornRoot {
                    j: 0,
                    sign: 1.0,
                    z: Complex64::new(0.0, 0.0),
                    multiplicity: 3,
                });
                origin_done = true;
            }
            continue;
        }
        // the equation is odd in z: strip j < −1 mirrors strip −j−1
        let (mirror, base) = if j > 0 { (false, j) } else { (true, -j - 1) };
        let up = born_upper(base)?;
        let up = if mirror { -up.conj() } else { up };
        let sign = born_sign(base);
        for z in [up, up.conj()] {
            out.push(BornRoot {
                j,
                sign,
                z,
                multiplicity: 1,
            });
        }
    }
    Ok(out)
}

/// Positive solutions of `x = tan x`, one per branch `(jπ, (j+½)π)`, `j = 1..=j_max`.
///
/// Wavenumbers follow as `k = 2x/((σ−1)L)`.
pub fn strong_odd_roots(j_max: usize) -> Vec<f64> {
    (1..=j_max)
        .map(|j| {
            let c = (j as f64 + 0.5) * PI;
            branch_root(|x| x * x.cos() - x.sin(), j as f64 * PI, c, c - 1.0 / c)
        })
        .collect()
}

/// Positive solutions of `x = −cot x`, one per branch `((j−½)π, jπ)`.
///
/// These are the even-eigenfunction wavenumbers of the limiting boundary
/// problem, `x = kσL/2`.
pub fn strong_cot_roots(j_max: usize) -> Vec<f64> {
    (1..=j_max)
        .map(|j| {
            let c = j as f64 * PI;
            branch_root(|x| x * x.sin() + x.cos(), c - FRAC_PI_2, c, c - 1.0 / c)
        })
        .collect()
}

/// Bisection on a bracket polished by a few secant steps from `seed`.
fn branch_root(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, seed: f64) -> f64 {
    let mut fa = f(a);
    let fs = f(seed);
    if fs == 0.0 {
        return seed;
    }
    if fa * fs < 0.0 {
        b = seed;
    } else {
        a = seed;
        fa = fs;
    }
    while b - a > 4.0 * f64::EPSILON * b {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// `2πj/(σL)`.
pub fn strong_even_limit(j: i64, medium: &Medium) -> f64 {
    2.0 * PI * j as f64 / (medium.sigma() * medium.length())
}

/// `(L/2)·v'(L/2) − v(L/2)` relative to its terms, for `v = sin(kσx)`
/// (odd) or `cos(kσx)` (even).
pub fn limit_problem_residual(k: f64, medium: &Medium, odd: bool) -> f64 {
    let x = k * medium.sigma() * medium.length() / 2.0;
    let (lhs, rhs) = if odd {
        (x * x.cos(), x.sin())
    } else {
        (-x * x.sin(), x.cos())
    };
    (lhs - rhs).abs() / (lhs.abs() + rhs.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountingResult {
    /// Width of the window `0 < Re k ≤ W`.
    pub width: f64,
    pub real_only: bool,
    /// Includes [`CountingResult::origin`].
    pub computed: i64,
    /// Share of the quadruple at `k = 0`: 2 of 4, or 1 of its 2 real.
    pub origin: i64,
    pub predicted: f64,
}

impl CountingResult {
    pub fn deviation(&self) -> f64 {
        self.computed as f64 - self.predicted
    }

    pub fn within(&self, tol: f64) -> bool {
        self.deviation().abs() <= tol
    }
}

/// Counts wavenumbers with `0 < Re k ≤ width`, quadruples as two real plus
/// two non-real.
///
/// The spectrum is symmetric under `k ↦ −k`, and the origin is a quadruple
/// root that no solver reports: half of it is added, so that `computed` is
/// half the count over `|Re k| ≤ width`. Without it every count sits near
/// the lower edge of the `± 2` band, since the strip next to the origin is
/// empty but still contributes to the prediction.
pub fn counting(spectrum: &Spectrum, medium: &Medium, width: f64, real_only: bool) -> Result<CountingResult> {
    if !spectrum.defects.is_empty() {
        return Err(Error::UncertifiedInput(spectrum.defects.len()));
    }
    let origin = if real_only { 1 } else { 2 };
    let mut computed = origin;
    for r in spectrum.roots.iter().filter(|r| r.k.re > 0.0 && r.k.re <= width * (1.0 + 1e-12)) {
        let m = r.multiplicity as i64;
        computed += match (real_only, r.is_real(), m) {
            (false, _, _) => m,
            (true, true, 4) => 2,
            (true, true, _) => m,
            (true, false, _) => 0,
        };
    }
    let (sigma, length) = (medium.sigma(), medium.length());
    let factor = if real_only { (sigma - 1.0).abs() } else { sigma + 1.0 };
    Ok(CountingResult {
        width,
        real_only,
        computed,
        origin,
        predicted: factor * length * width / PI,
    })
}
