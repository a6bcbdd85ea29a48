//! Strip-by-strip root finding for any `m > 1`.
//!
//! Each strip is solved according to its predicted class: real pairs by
//! bisection on the bracket the class names, complex pairs by a winding count
//! in the upper half strip followed by Newton from the zero centroid, and
//! quadruple roots are placed at the integer directly.

use num_complex::Complex64;

use crate::contour::{winding, ContourOptions, Rect};
use crate::dispersion::{eval_derivative_scaled, eval_factor, relative_residual, Parity};
use crate::error::{Error, Result};
use crate::model::{detect_rational, MInput, ScaledProblem, DEFAULT_MAX_DENOMINATOR};
use crate::spectrum::{Defect, Method, Root, Spectrum};
use crate::strips::{classify_with, strip_range, Contrast, Degeneracy, Strip, StripClass};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Lower edge of the upper-half search rectangle for complex pairs.
    pub imag_floor: f64,
    /// Search height as a multiple of the `|Im z|` bound.
    pub height_factor: f64,
    /// Subintervals scanned when the endpoints do not bracket a root.
    pub scan_intervals: usize,
    pub bisect_width: f64,
    /// `None` resolves float near-degeneracies through [`detect_rational`].
    pub degeneracy: Option<Degeneracy>,
    /// Also emit the mirror images `−z`.
    pub with_reflections: bool,
    pub contour: ContourOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            imag_floor: 1e-8,
            height_factor: 1.25,
            scan_intervals: 64,
            bisect_width: 1e-13,
            degeneracy: None,
            with_reflections: false,
            contour: ContourOptions::default(),
        }
    }
}

fn real_value(x: f64, m: f64, parity: Parity) -> f64 {
    eval_factor(Complex64::new(x, 0.0), m, parity).re
}

/// Newton on the `order`-th derivative, stopping once steps stall.
pub(crate) fn newton_polish(z0: Complex64, m: f64, parity: Parity, order: u32) -> Complex64 {
    let mut z = z0;
    for _ in 0..50 {
        let (f, df) = eval_derivative_scaled(z, m, parity, order);
        if f == Complex64::new(0.0, 0.0) || df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        if !step.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
            break;
        }
    }
    z
}

/// The single real root of `parity` in `(lo, hi)`.
pub fn real_root_in(lo: f64, hi: f64, m: f64, parity: Parity) -> Result<f64> {
    real_root_with(lo, hi, m, parity, &SolveOptions::default())
}

fn real_root_with(lo: f64, hi: f64, m: f64, parity: Parity, opts: &SolveOptions) -> Result<f64> {
    let no_bracket = || Error::NoBracket { lo, hi, parity };
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (real_value(a, m, parity), real_value(b, m, parity));
    if fa * fb > 0.0 || fa == 0.0 || fb == 0.0 {
        let n = opts.scan_intervals.max(2);
        let eps = 1e-9 * (hi - lo);
        let xs: Vec<f64> = (0..=n)
            .map(|i| lo + eps + (hi - lo - 2.0 * eps) * i as f64 / n as f64)
            .collect();
        let vals: Vec<f64> = xs.iter().map(|&x| real_value(x, m, parity)).collect();
        let i = (0..n)
            .find(|&i| vals[i] * vals[i + 1] < 0.0)
            .ok_or_else(no_bracket)?;
        a = xs[i];
        b = xs[i + 1];
        fa = vals[i];
    }
    while b - a > opts.bisect_width {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = real_value(mid, m, parity);
        if fm == 0.0 {
            a = mid;
            b = mid;
            break;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    let mid = 0.5 * (a + b);
    let polished = newton_polish(Complex64::new(mid, 0.0), m, parity, 0).re;
    let x = if (polished - mid).abs() <= (b - a).max(1e-12) { polished } else { mid };
    if x <= lo || x >= hi {
        return Err(no_bracket());
    }
    Ok(x)
}

/// Height of the search rectangles above the real axis.
pub fn search_height(m: f64, factor: f64) -> f64 {
    factor * (2.0 * m + 1.0).ln() / (std::f64::consts::PI * (m - 1.0))
}

/// The conjugate pair of `parity` in `strip`, upper root first.
pub fn complex_pair_in(strip: &Strip, m: f64, parity: Parity) -> Result<(Complex64, Complex64)> {
    complex_pair_with(strip, m, parity, &SolveOptions::default())
}

fn complex_pair_with(
    strip: &Strip,
    m: f64,
    parity: Parity,
    opts: &SolveOptions,
) -> Result<(Complex64, Complex64)> {
    let rect = Rect::new(strip.lo, strip.hi, opts.imag_floor, search_height(m, opts.height_factor));
    let w = winding(
        |z| crate::dispersion::eval_scaled(z, m, parity),
        &rect,
        &opts.contour,
    )?;
    if w.count != 1 {
        return Err(Error::CountMismatch {
            expected: 1,
            found: w.count,
        });
    }
    let seed = w.first_moment;
    let z = newton_polish(seed, m, parity, 0);
    if !rect.contains(z) || relative_residual(z, m, parity) > 1e-12 {
        return Err(Error::NonConvergence {
            iterations: 50,
            residual: relative_residual(z, m, parity),
        });
    }
    Ok((z, z.conj()))
}

/// Resolves a float near-degeneracy by looking for a small-denominator `m`.
fn resolve_degeneracy(problem: &ScaledProblem, opts: &SolveOptions) -> Degeneracy {
    match opts.degeneracy {
        Some(d) => d,
        None => match detect_rational(MInput::Real(problem.m), DEFAULT_MAX_DENOMINATOR) {
            Some(_) => Degeneracy::AssumeInteger,
            None => Degeneracy::AssumeGeneric,
        },
    }
}

pub(crate) fn classify_strip(j: i64, problem: &ScaledProblem, opts: &SolveOptions) -> Result<StripClass> {
    let contrast = Contrast::of(problem);
    match classify_with(j, contrast, Degeneracy::Reject) {
        Err(Error::Ambiguous { .. }) => classify_with(j, contrast, resolve_degeneracy(problem, opts)),
        other => other,
    }
}

/// Roots contributed by strip `j`, or the error that prevented finding them.
pub(crate) fn solve_strip(
    j: i64,
    problem: &ScaledProblem,
    opts: &SolveOptions,
) -> std::result::Result<Vec<Root>, (Option<Parity>, Error)> {
    let m = problem.m;
    let strip = Strip::new(j, m);
    let class = classify_strip(j, problem, opts).map_err(|e| (None, e))?;
    let mut roots = Vec::new();
    match class {
        StripClass::RealPair { k0, left, right } => {
            let k0 = k0 as f64;
            for (a, b, parity) in [(strip.lo, k0, left), (k0, strip.hi, right)] {
                let x = real_root_with(a, b, m, parity, opts).map_err(|e| (Some(parity), e))?;
                roots.push(Root::new(Complex64::new(x, 0.0), problem, 1, parity, Method::Analytic));
            }
        }
        StripClass::ComplexPair { carrier } => {
            let (up, down) =
                complex_pair_with(&strip, m, carrier, opts).map_err(|e| (Some(carrier), e))?;
            roots.push(Root::new(up, problem, 1, carrier, Method::Analytic));
            roots.push(Root::new(down, problem, 1, carrier, Method::Analytic));
        }
        StripClass::Quadruple { at, triple, simple } => {
            if at != 0 {
                let mut root = Root::new(
                    Complex64::new(at as f64, 0.0),
                    problem,
                    4,
                    Parity::Product,
                    Method::ExactQuadruple,
                );
                root.components = vec![(triple, 3), (simple, 1)];
                root.strip = j;
                roots.push(root);
            }
        }
        StripClass::AdjacentEmpty { .. } => {}
    }
    for r in &mut roots {
        r.strip = j;
    }
    Ok(roots)
}

/// All roots with `lo < Re z ≤ hi` (and their conjugates), strip by strip.
pub fn spectrum_analytic(problem: &ScaledProblem, lo: f64, hi: f64) -> Result<Spectrum> {
    spectrum_analytic_with(problem, lo, hi, &SolveOptions::default())
}

pub fn spectrum_analytic_with(
    problem: &ScaledProblem,
    lo: f64,
    hi: f64,
    opts: &SolveOptions,
) -> Result<Spectrum> {
    if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi < lo {
        return Err(Error::Precondition(format!("invalid window ({lo}, {hi}]")));
    }
    let mut spectrum = Spectrum::new(*problem, (lo, hi));
    for j in strip_range(problem.m, lo, hi) {
        match solve_strip(j, problem, opts) {
            Ok(roots) => spectrum
                .roots
                .extend(roots.into_iter().filter(|r| r.z.re > lo && r.z.re <= hi)),
            Err((parity, e)) => spectrum.defects.push(Defect {
                strip: j,
                parity,
                message: e.to_string(),
            }),
        }
    }
    if opts.with_reflections {
        let mirrored: Vec<Root> = spectrum
            .roots
            .iter()
            .map(|r| {
                let mut m = r.clone();
                m.z = -r.z;
                m.k = -r.k;
                m.strip = -r.strip - 1;
                m
            })
            .collect();
        spectrum.roots.extend(mirrored);
    }
    spectrum.sort();
    Ok(spectrum)
}
