//! Independent checks of a computed spectrum.
//!
//! Every strip (or, around a quadruple root, the pair of strips sharing it) is
//! enclosed in a rectangle symmetric about the real axis and the zeros of each
//! factor are counted by the argument principle. Real zeros are censused
//! separately by sign changes, with multiplicities from small boxes, so the
//! complex count follows by difference. Counts are compared with the strip
//! predictions and with what the spectrum actually contains. Each root is
//! also checked against the boundary conditions of the eigenfunction pair.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{classify_strip, search_height, SolveOptions};
use crate::contour::{winding, ContourOptions, Rect};
use crate::dispersion::{eval_factor, eval_scaled, Parity};
use crate::error::{Error, Result};
use crate::model::{Medium, ScaledProblem};
use crate::spectrum::{Defect, Spectrum};
use crate::strips::{floor_parity, stated_theorem_carrier, strip_range, Contrast, FloorParity, Strip, StripClass};

pub use crate::contour::{count_zeros_rect, zero_centroid_rect};

/// Default for [`CertifyOptions::eigen_tol`].
pub const EIGEN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    /// Rectangle half-height as a multiple of the `|Im z|` bound.
    pub height_factor: f64,
    /// Sample points of the real-axis census per cell.
    pub census_points: usize,
    /// Largest half-width of the boxes that measure real multiplicities.
    pub box_radius: f64,
    /// Largest eigenfunction residual accepted at a certified root.
    pub eigen_tol: f64,
    pub contour: ContourOptions,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            height_factor: 1.25,
            census_points: 2000,
            box_radius: 1e-3,
            eigen_tol: EIGEN_TOL,
            contour: ContourOptions::default(),
        }
    }
}

/// Zeros of one factor inside one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorCount {
    /// Argument-principle count over the whole cell.
    pub winding: i64,
    /// Real zeros with multiplicity.
    pub real: i64,
    /// `winding − real`: zeros off the real axis.
    pub complex: i64,
    pub predicted: u32,
    pub predicted_real: u32,
    /// Multiplicity the spectrum under test puts in the cell.
    pub found: u32,
}

impl FactorCount {
    pub fn agrees(&self) -> bool {
        self.winding == self.predicted as i64
            && self.real == self.predicted_real as i64
            && self.found as i64 == self.winding
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripRecord {
    pub strip: i64,
    pub predicted: StripClass,
    /// `Re z` range of the certified cell; a quadruple shares its cell with
    /// the empty strip to its left, which then has no cell of its own.
    pub cell: Option<(f64, f64)>,
    pub odd: Option<FactorCount>,
    pub even: Option<FactorCount>,
    #[serde(rename = "match")]
    pub matched: bool,
    pub error: Option<String>,
    /// The window clips the cell: only the winding count over the clipped
    /// cell is checked against the roots found, not the predicted class.
    #[serde(default)]
    pub partial: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `|Im z| ≤ log(2m+1)/(π(m−1))`.
    Scaled,
    /// `|Im k| ≤ (2/L)·log((3σ+1)/|σ−1|)`.
    Wavenumber,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundViolation {
    pub kind: BoundKind,
    pub z: Complex64,
    pub k: Complex64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_z: f64,
    /// The wavenumber form as stated.
    pub bound_k: f64,
    /// The scaled bound converted to wavenumbers; half of `bound_k`.
    pub bound_k_from_z: f64,
    pub max_im_z: f64,
    pub max_im_k: f64,
    /// `max_im_z / bound_z`.
    pub fraction_of_bound: f64,
    pub violations: Vec<BoundViolation>,
    pub note: String,
}

/// Least-squares solution of the boundary conditions for the coefficient `A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub parity: Parity,
    /// Coefficient of `sin(kσx)` (odd) or `cos(kσx)` (even) in `u`.
    pub coefficient_a: Complex64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootCheck {
    pub z: Complex64,
    pub k: Complex64,
    pub strip: i64,
    pub eigen_residual: f64,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub strips: Vec<StripRecord>,
    pub bound: BoundReport,
    pub bound_violations: Vec<BoundViolation>,
    pub max_eigen_residual: f64,
    pub roots: Vec<RootCheck>,
    pub convention_notes: Vec<String>,
    /// Partly covered strips whose clipped cell could not be counted,
    /// usually because the window edge runs through a root.
    pub skipped: Vec<i64>,
    pub defects: Vec<Defect>,
}

impl CertReport {
    pub fn all_match(&self) -> bool {
        self.strips.iter().all(|s| s.matched)
    }

    /// Every strip matches, no bound is violated and the spectrum had no defects.
    pub fn is_clean(&self) -> bool {
        self.all_match() && self.bound_violations.is_empty() && self.defects.is_empty()
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &StripRecord> {
        self.strips.iter().filter(|s| !s.matched)
    }
}

/// Residual of the boundary conditions `u(L/2) = u'(L/2) = 0` for the pair
/// built from `v = sin(kx)` (odd) or `cos(kx)` (even).
///
/// Minimizing over `A` leaves `|det[a b]| / (‖a‖‖b‖)`, the sine of the angle
/// between the two coefficient columns; it vanishes exactly at transmission
/// wavenumbers, including the degenerate case where both sines vanish.
pub fn eigen_pair(k: Complex64, medium: &Medium, parity: Parity) -> EigenPair {
    let sigma = medium.sigma();
    let theta = k * (0.5 * medium.length());
    let st = theta * sigma;
    let (a, b) = match parity {
        Parity::Odd => ([st.sin(), st.cos() * sigma], [theta.sin(), theta.cos()]),
        Parity::Even => ([st.cos(), -st.sin() * sigma], [theta.cos(), -theta.sin()]),
        Parity::Product => {
            let o = eigen_pair(k, medium, Parity::Odd);
            let e = eigen_pair(k, medium, Parity::Even);
            return if o.residual <= e.residual { o } else { e };
        }
    };
    let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
    let nb = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
    let det = a[0] * b[1] - a[1] * b[0];
    let coefficient_a = (a[0].conj() * b[0] + a[1].conj() * b[1]) / (na * na);
    EigenPair {
        parity,
        coefficient_a,
        residual: det.norm() / (na * nb),
    }
}

pub fn eigenfunction_residual(k: Complex64, medium: &Medium, parity: Parity) -> f64 {
    eigen_pair(k, medium, parity).residual
}

/// Residual of a root that may belong to both factors: the worst over its components.
fn root_residual(k: Complex64, medium: &Medium, components: &[(Parity, u32)]) -> f64 {
    components
        .iter()
        .map(|&(p, _)| eigenfunction_residual(k, medium, p))
        .fold(0.0, f64::max)
}

/// Both imaginary-part bounds for every root of `spectrum`.
pub fn check_imag_bound(spectrum: &Spectrum, medium: &Medium) -> BoundReport {
    let problem = &spectrum.problem;
    let sigma = medium.sigma();
    let bound_z = problem.imag_bound_z();
    let bound_k = 2.0 / medium.length() * ((3.0 * sigma + 1.0) / (sigma - 1.0).abs()).ln();
    let bound_k_from_z = bound_z * problem.k_per_z();
    let slack = 1.0 + 1e-12;
    let mut violations = Vec::new();
    let (mut max_im_z, mut max_im_k) = (0.0f64, 0.0f64);
    for r in &spectrum.roots {
        max_im_z = max_im_z.max(r.z.im.abs());
        max_im_k = max_im_k.max(r.k.im.abs());
        if r.z.im.abs() > bound_z * slack {
            violations.push(BoundViolation {
                kind: BoundKind::Scaled,
                z: r.z,
                k: r.k,
                bound: bound_z,
            });
        }
        if r.k.im.abs() > bound_k * slack {
            violations.push(BoundViolation {
                kind: BoundKind::Wavenumber,
                z: r.z,
                k: r.k,
                bound: bound_k,
            });
        }
    }
    BoundReport {
        bound_z,
        bound_k,
        bound_k_from_z,
        max_im_z,
        max_im_k,
        fraction_of_bound: max_im_z / bound_z,
        violations,
        note: format!(
            "the scaled bound in wavenumber units is {bound_k_from_z:.6}, a factor {:.3} below the stated |Im k| bound {bound_k:.6}",
            bound_k / bound_k_from_z
        ),
    }
}

fn real_value(x: f64, m: f64, parity: Parity) -> f64 {
    eval_factor(Complex64::new(x, 0.0), m, parity).re
}

fn bisect(mut a: f64, mut b: f64, m: f64, parity: Parity) -> f64 {
    let mut fa = real_value(a, m, parity);
    while b - a > 1e-14 * a.abs().max(1.0) {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = real_value(mid, m, parity);
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

/// Real zeros of `parity` strictly inside `(x0, x1)`, with multiplicities.
fn real_census(x0: f64, x1: f64, m: f64, parity: Parity, opts: &CertifyOptions) -> Result<Vec<(f64, i64)>> {
    let n = opts.census_points.max(16);
    let h = (x1 - x0) / n as f64;
    // a zero can sit closer to an edge than one grid step (m near an integer)
    let near_edge = |base: f64, dir: f64| (1..=24).rev().map(move |e| base + dir * h * 0.5f64.powi(e));
    let xs = near_edge(x0, 1.0)
        .chain((1..n).map(|i| x0 + h * i as f64))
        .chain(near_edge(x1, -1.0).rev());
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for x in xs {
        let v = real_value(x, m, parity);
        if v == 0.0 {
            continue;
        }
        if let Some((px, pv)) = prev {
            if pv * v < 0.0 {
                roots.push(bisect(px, x, m, parity));
            }
        }
        prev = Some((x, v));
    }
    let mut out = Vec::with_capacity(roots.len());
    for (i, &x) in roots.iter().enumerate() {
        let mut gap = (x - x0).min(x1 - x);
        if i > 0 {
            gap = gap.min(x - roots[i - 1]);
        }
        if i + 1 < roots.len() {
            gap = gap.min(roots[i + 1] - x);
        }
        let r = opts.box_radius.min(0.45 * gap);
        let w = winding(
            |z| eval_scaled(z, m, parity),
            &Rect::around(Complex64::new(x, 0.0), r),
            &opts.contour,
        )?;
        out.push((x, w.count));
    }
    Ok(out)
}

fn count_factor(
    cell: (f64, f64),
    problem: &ScaledProblem,
    parity: Parity,
    class: &[StripClass],
    spectrum: &Spectrum,
    opts: &CertifyOptions,
) -> Result<FactorCount> {
    let m = problem.m;
    let y = search_height(m, opts.height_factor);
    let rect = Rect::new(cell.0, cell.1, -y, y);
    let total = winding(|z| eval_scaled(z, m, parity), &rect, &opts.contour)?.count;
    let real: i64 = real_census(cell.0, cell.1, m, parity, opts)?.iter().map(|r| r.1).sum();
    let predicted = class.iter().map(|c| c.predicted_for(parity)).sum();
    let predicted_real = class.iter().map(|c| predicted_real_for(c, parity)).sum();
    let found = spectrum
        .roots
        .iter()
        .filter(|r| r.z.re > cell.0 && r.z.re < cell.1)
        .flat_map(|r| r.components.iter())
        .filter(|(p, _)| *p == parity)
        .map(|(_, k)| k)
        .sum();
    Ok(FactorCount {
        winding: total,
        real,
        complex: total - real,
        predicted,
        predicted_real,
        found,
    })
}

fn predicted_real_for(class: &StripClass, parity: Parity) -> u32 {
    match class {
        StripClass::RealPair { .. } | StripClass::Quadruple { .. } => class.predicted_for(parity),
        _ => 0,
    }
}

/// Whether the window `(lo, hi]` holds everything strip `j` contributes.
fn covered(j: i64, class: &StripClass, m: f64, lo: f64, hi: f64) -> bool {
    let (a, b) = (j as f64 / m, (j + 1) as f64 / m);
    let eps = 1e-12 * hi.abs().max(1.0);
    match class {
        StripClass::Quadruple { .. } => a > lo + eps && a <= hi + eps,
        StripClass::AdjacentEmpty { .. } => a >= lo - eps && b <= hi + eps,
        _ => a >= lo - eps && b <= hi + eps,
    }
}

fn full_cell(j: i64, class: &StripClass, m: f64) -> ((f64, f64), Vec<StripClass>) {
    match class {
        StripClass::Quadruple { .. } => (
            ((j - 1) as f64 / m, (j + 1) as f64 / m),
            vec![StripClass::AdjacentEmpty { owner: j }, *class],
        ),
        _ => ((j as f64 / m, (j + 1) as f64 / m), vec![*class]),
    }
}

/// Counts the part of a strip's cell inside the window. `None` when the
/// contour cannot be evaluated there.
fn certify_clipped(j: i64, class: StripClass, spectrum: &Spectrum, opts: &CertifyOptions) -> Option<StripRecord> {
    let problem = &spectrum.problem;
    let (lo, hi) = spectrum.window;
    let ((a, b), classes) = full_cell(j, &class, problem.m);
    let cell = (a.max(lo), b.min(hi));
    if cell.1 <= cell.0 {
        return None;
    }
    let odd = count_factor(cell, problem, Parity::Odd, &classes, spectrum, opts).ok()?;
    let even = count_factor(cell, problem, Parity::Even, &classes, spectrum, opts).ok()?;
    let agrees = |c: &FactorCount| c.found as i64 == c.winding && (0..=c.winding).contains(&c.real);
    Some(StripRecord {
        strip: j,
        predicted: class,
        cell: Some(cell),
        matched: agrees(&odd) && agrees(&even),
        odd: Some(odd),
        even: Some(even),
        error: None,
        partial: true,
    })
}

fn certify_cell(
    j: i64,
    class: StripClass,
    spectrum: &Spectrum,
    opts: &CertifyOptions,
) -> StripRecord {
    let problem = &spectrum.problem;
    let (cell, classes) = full_cell(j, &class, problem.m);
    let counts = count_factor(cell, problem, Parity::Odd, &classes, spectrum, opts).and_then(|o| {
        count_factor(cell, problem, Parity::Even, &classes, spectrum, opts).map(|e| (o, e))
    });
    match counts {
        Ok((odd, even)) => StripRecord {
            strip: j,
            predicted: class,
            cell: Some(cell),
            matched: odd.agrees() && even.agrees(),
            odd: Some(odd),
            even: Some(even),
            error: None,
            partial: false,
        },
        Err(e) => StripRecord {
            strip: j,
            predicted: class,
            cell: Some(cell),
            odd: None,
            even: None,
            matched: false,
            error: Some(e.to_string()),
            partial: false,
        },
    }
}

/// The strip theorem as stated puts the pair of an odd-parity strip in the
/// odd factor; certified counts put it in the even one.
fn convention_notes(records: &[StripRecord], problem: &ScaledProblem) -> Vec<String> {
    let contrast = Contrast::of(problem);
    let (mut agree, mut disagree) = (0usize, 0usize);
    let mut example = None;
    for r in records {
        let (StripClass::ComplexPair { .. }, Some(odd), Some(even)) = (r.predicted, r.odd, r.even) else {
            continue;
        };
        let Ok(fp) = floor_parity(r.strip, contrast) else {
            continue;
        };
        let certified_carrier = if odd.complex > 0 && even.complex == 0 {
            Parity::Odd
        } else if even.complex > 0 && odd.complex == 0 {
            Parity::Even
        } else {
            continue;
        };
        if certified_carrier == stated_theorem_carrier(fp) {
            agree += 1;
        } else {
            disagree += 1;
            example.get_or_insert((r.strip, fp, certified_carrier));
        }
    }
    let mut notes = Vec::new();
    if let Some((j, fp, carrier)) = example {
        let parity = match fp {
            FloorParity::Even => "even",
            FloorParity::Odd => "odd",
        };
        notes.push(format!(
            "complex pairs: {disagree} strip(s) carry their pair in the factor opposite to the stated strip theorem \
             (item 1(b) assigns the pair of a strip with j + floor(j/m) odd to the odd factor); \
             e.g. strip {j} has j + floor(j/m) {parity} and its pair in the {carrier} factor. \
             Certified counts follow the small-beta corollary: j + floor(j/m) odd puts the pair in the even factor."
        ));
    }
    if agree > 0 {
        notes.push(format!("complex pairs: {agree} strip(s) agree with the stated strip theorem"));
    }
    notes
}

/// Certifies every strip fully covered by the window of `spectrum`.
///
/// Residuals use `medium` and the stored wavenumbers when given, otherwise
/// the effective medium of the scaled problem.
pub fn certify_spectrum(spectrum: &Spectrum, medium: Option<&Medium>) -> CertReport {
    certify_spectrum_with(spectrum, medium, &CertifyOptions::default())
}

pub fn certify_spectrum_with(spectrum: &Spectrum, medium: Option<&Medium>, opts: &CertifyOptions) -> CertReport {
    let problem = &spectrum.problem;
    let m = problem.m;
    let (lo, hi) = spectrum.window;
    let mut strips = Vec::new();
    let mut skipped = Vec::new();
    let mut defects = spectrum.defects.clone();
    let solve_opts = SolveOptions::default();
    for j in strip_range(m, lo, hi) {
        let class = match classify_strip(j, problem, &solve_opts) {
            Ok(c) => c,
            Err(e) => {
                defects.push(Defect {
                    strip: j,
                    parity: None,
                    message: e.to_string(),
                });
                continue;
            }
        };
        let clipped = !covered(j, &class, m, lo, hi);
        if let StripClass::AdjacentEmpty { owner } = class {
            // counted inside the owner's cell; here only check emptiness
            let strip = Strip::new(j, m);
            // the owner's quadruple can land an ulp inside the right edge
            let inside = spectrum
                .roots_between(strip.lo, strip.hi)
                .filter(|r| r.strip != owner)
                .count();
            strips.push(StripRecord {
                strip: j,
                predicted: class,
                cell: None,
                odd: None,
                even: None,
                matched: inside == 0,
                error: (inside > 0).then(|| format!("{inside} root(s) in a strip emptied by quadruple {owner}")),
                partial: clipped,
            });
            continue;
        }
        if clipped {
            match certify_clipped(j, class, spectrum, opts) {
                Some(rec) => strips.push(rec),
                None => skipped.push(j),
            }
            continue;
        }
        strips.push(certify_cell(j, class, spectrum, opts));
    }

    let effective = problem.effective_medium();
    let (res_medium, use_k) = match medium {
        Some(md) => (*md, true),
        None => (effective, false),
    };
    let mut roots = Vec::with_capacity(spectrum.roots.len());
    let mut max_eigen_residual = 0.0f64;
    for r in &spectrum.roots {
        let k = if use_k { r.k } else { r.z / problem.z_scale };
        let residual = root_residual(k, &res_medium, &r.components);
        max_eigen_residual = max_eigen_residual.max(residual);
        let strip_ok = strips
            .iter()
            .find(|s| s.cell.is_some_and(|(a, b)| r.z.re > a && r.z.re < b))
            .is_some_and(|s| s.matched);
        roots.push(RootCheck {
            z: r.z,
            k: r.k,
            strip: r.strip,
            eigen_residual: residual,
            certified: strip_ok && residual < opts.eigen_tol,
        });
    }

    let bound = check_imag_bound(spectrum, &res_medium);
    let convention_notes = convention_notes(&strips, problem);
    CertReport {
        bound_violations: bound.violations.clone(),
        bound,
        strips,
        max_eigen_residual,
        roots,
        convention_notes,
        skipped,
        defects,
    }
}

/// Copies the per-root verdicts of `report` onto `spectrum`.
pub fn mark_certified(spectrum: &mut Spectrum, report: &CertReport) -> Result<()> {
    if report.roots.len() != spectrum.roots.len() {
        return Err(Error::Precondition("report does not belong to this spectrum".into()));
    }
    for (r, c) in spectrum.roots.iter_mut().zip(&report.roots) {
        r.certified = c.certified;
    }
    Ok(())
}
