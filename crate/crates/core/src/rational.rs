//! Polynomial route for rational `m = p/q`.
//!
//! With `w = e^{iπz/q}` each factor becomes
//!
//! ```text
//! w^{2p} − 1 ∓ (p/q)(w^{p+q} − w^{p−q})        (− for odd, + for even)
//! ```
//!
//! so one period `0 ≤ Re z < 2q` holds exactly `2p` roots per factor. All of
//! them are found at once by Aberth iteration, clustered into multiple roots,
//! and lifted back to `z = (q/π)·arg w − i(q/π)·ln|w| + 2qt`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::analytic::newton_polish;
use crate::dispersion::{eval_factor, Parity};
use crate::error::{Error, Result};
use crate::model::{RationalM, ScaledProblem};
use crate::spectrum::{strip_of, Defect, Method, Root, Spectrum};

/// Largest numerator accepted; the iteration is quadratic in the degree.
pub const MAX_NUMERATOR: u64 = 5000;

/// One dispersion factor as a polynomial in `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorPolynomial {
    pub parity: Parity,
    /// Coefficient of `w^d` at index `d`, `d = 0..=2p`.
    pub coefficients: Vec<Rational64>,
    pub p: u64,
    pub q: u64,
}

impl FactorPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients_f64(&self) -> Vec<f64> {
        self.coefficients
            .iter()
            .map(|c| *c.numer() as f64 / *c.denom() as f64)
            .collect()
    }
}

/// A polynomial root together with its detected multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusteredRoot {
    pub w: Complex64,
    pub multiplicity: u32,
    /// `|P(w)| / Σ|a_d||w|^d` at the refined centre.
    pub refinement_residual: f64,
}

impl ClusteredRoot {
    /// Multiplicities above four never arise from the dispersion factors.
    pub fn is_suspicious(&self) -> bool {
        self.multiplicity > 4
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalOptions {
    pub max_iterations: usize,
    /// Candidate clusters are roots closer than `cluster_radius·max(1, |w|)`.
    pub cluster_radius: f64,
    /// `|ln|w||` below which a root is treated as lying on the real axis.
    pub real_snap: f64,
}

impl Default for RationalOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            // a triple root only resolves to about eps^(1/3) ≈ 6e-6
            cluster_radius: 1e-4,
            real_snap: 1e-10,
        }
    }
}

pub fn build_polynomial(rm: RationalM, parity: Parity) -> FactorPolynomial {
    let (p, q) = (rm.p as usize, rm.q as usize);
    let ratio = Rational64::new(rm.p as i64, rm.q as i64);
    let sign = match parity {
        Parity::Odd => -1,
        Parity::Even => 1,
        Parity::Product => panic!("build_polynomial takes a single factor"),
    };
    let mut c = vec![Rational64::from_integer(0); 2 * p + 1];
    c[2 * p] += 1;
    c[0] -= 1;
    c[p + q] += ratio * sign;
    c[p - q] -= ratio * sign;
    FactorPolynomial {
        parity,
        coefficients: c,
        p: rm.p,
        q: rm.q,
    }
}

struct Eval {
    /// Newton correction `P/P'`.
    newton: Complex64,
    /// `|P(w)|` relative to the Horner error scale.
    backward: f64,
}

/// Newton correction and backward error, evaluated through the reversed
/// polynomial outside the unit disc so large `|w|^n` never overflows.
fn eval_newton(c: &[f64], w: Complex64) -> Eval {
    let n = c.len() - 1;
    let zero = Complex64::new(0.0, 0.0);
    let (mut r, mut dr, mut s) = (zero, zero, 0.0);
    if w.norm() <= 1.0 {
        let aw = w.norm();
        for &a in c.iter().rev() {
            dr = dr * w + r;
            r = r * w + a;
            s = s * aw + a.abs();
        }
        Eval {
            newton: r / dr,
            backward: r.norm() / s,
        }
    } else {
        // R(y) = y^n P(1/y); P/P' = wR / (nR − yR')
        let y = w.inv();
        let ay = y.norm();
        for &a in c {
            dr = dr * y + r;
            r = r * y + a;
            s = s * ay + a.abs();
        }
        Eval {
            newton: w * r / (r * n as f64 - y * dr),
            backward: r.norm() / s,
        }
    }
}

fn horner(c: &[f64], w: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * w + a)
}

fn abs_sum(c: &[f64], w: Complex64) -> f64 {
    let aw = w.norm();
    c.iter().rev().fold(0.0, |acc, &a| acc * aw + a.abs())
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(d, &a)| a * d as f64).collect()
}

/// All `n` roots by Aberth–Ehrlich iteration from a circle just outside the
/// Cauchy bound.
fn aberth(c: &[f64], max_iterations: usize) -> Result<Vec<Complex64>> {
    let n = c.len() - 1;
    let lead = c[n];
    let radius = 1.0 + c[..n].iter().map(|a| (a / lead).abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.7))
        .collect();
    let threshold = 2.0 * n as f64 * f64::EPSILON;
    let mut done = vec![false; n];
    for _ in 0..max_iterations {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let e = eval_newton(c, z[i]);
            if e.backward <= threshold {
                done[i] = true;
                continue;
            }
            let repel: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = e.newton / (1.0 - e.newton * repel);
            if step.is_finite() {
                z[i] -= step;
            } else {
                // P' vanished; nudge off the critical point
                let nudge = Complex64::new(1e-8, 1e-8) * z[i].norm().max(1.0);
                z[i] += nudge;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok(z);
        }
    }
    let worst = z
        .iter()
        .map(|&w| eval_newton(c, w).backward)
        .fold(0.0, f64::max);
    Err(Error::NonConvergence {
        iterations: max_iterations,
        residual: worst,
    })
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut i = i;
    while parent[i] != r {
        let next = parent[i];
        parent[i] = r;
        i = next;
    }
    r
}

/// Does a `k`-fold root at `centre` explain the observed `spread`?
///
/// Roots of a `k`-fold zero perturbed at the backward-error level scatter over
/// `(n·ε·S / |P^(k)/k!|)^(1/k)`; genuinely distinct roots sit much further apart.
fn plausible_multiple(c: &[f64], centre: Complex64, k: usize, spread: f64) -> bool {
    let n = c.len() - 1;
    let mut d = c.to_vec();
    let mut fact = 1.0;
    for i in 1..=k {
        d = derivative(&d);
        fact *= i as f64;
    }
    let taylor = horner(&d, centre).norm() / fact;
    if taylor == 0.0 {
        return true;
    }
    let scale = (2.0 * n as f64 * f64::EPSILON * abs_sum(c, centre) / taylor).powf(1.0 / k as f64);
    spread <= 10.0 * scale
}

/// Newton on `P^(k−1)`, whose root at a `k`-fold zero of `P` is simple.
fn refine_centre(c: &[f64], start: Complex64, k: usize) -> Complex64 {
    let mut d = c.to_vec();
    for _ in 1..k {
        d = derivative(&d);
    }
    let dd = derivative(&d);
    let mut w = start;
    for _ in 0..50 {
        let step = horner(&d, w) / horner(&dd, w);
        if !step.is_finite() {
            break;
        }
        w -= step;
        if step.norm() <= 4.0 * f64::EPSILON * w.norm().max(1.0) {
            break;
        }
    }
    w
}

pub fn solve_polynomial(poly: &FactorPolynomial) -> Result<Vec<ClusteredRoot>> {
    solve_polynomial_with(poly, &RationalOptions::default())
}

pub fn solve_polynomial_with(poly: &FactorPolynomial, opts: &RationalOptions) -> Result<Vec<ClusteredRoot>> {
    if poly.degree() < 1 {
        return Err(Error::Precondition("polynomial of degree zero".into()));
    }
    let c = poly.coefficients_f64();
    let z = aberth(&c, opts.max_iterations)?;
    let n = z.len();

    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if (z[i] - z[j]).norm() <= opts.cluster_radius * z[i].norm().max(1.0) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }

    let mut out = Vec::with_capacity(n);
    let mut push = |w: Complex64, k: usize| {
        let w = if k > 1 { refine_centre(&c, w, k) } else { w };
        out.push(ClusteredRoot {
            w,
            multiplicity: k as u32,
            refinement_residual: horner(&c, w).norm() / abs_sum(&c, w),
        });
    };
    for g in groups {
        let k = g.len();
        let centre = g.iter().map(|&i| z[i]).sum::<Complex64>() / k as f64;
        let spread = g.iter().map(|&i| (z[i] - centre).norm()).fold(0.0, f64::max);
        if k == 1 || plausible_multiple(&c, centre, k, spread) {
            push(centre, k);
        } else {
            for i in g {
                push(z[i], 1);
            }
        }
    }
    out.sort_by(|a, b| a.w.arg().total_cmp(&b.w.arg()).then(a.w.norm().total_cmp(&b.w.norm())));
    Ok(out)
}

/// A lifted root before polishing.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Lifted {
    z: Complex64,
    multiplicity: u32,
    snapped: bool,
}

const WINDOW_SLACK: f64 = 1e-9;

fn lift(roots: &[ClusteredRoot], rm: RationalM, window: (f64, f64), real_snap: f64) -> Vec<Lifted> {
    let q = rm.q as f64;
    let period = 2.0 * q;
    let (lo, hi) = window;
    let (lo_t, hi_t) = (lo + WINDOW_SLACK * lo.abs().max(1.0), hi + WINDOW_SLACK * hi.abs().max(1.0));
    let mut out = Vec::new();
    for r in roots {
        let log_mod = r.w.norm().ln();
        let snapped = log_mod.abs() < real_snap;
        let im = if snapped { 0.0 } else { -q / PI * log_mod };
        let re0 = q / PI * r.w.arg();
        let t0 = ((lo_t - re0) / period).ceil() as i64;
        let t1 = ((hi_t - re0) / period).floor() as i64;
        for t in t0..=t1 {
            let re = re0 + period * t as f64;
            if re > lo_t && re <= hi_t {
                out.push(Lifted {
                    z: Complex64::new(re, im),
                    multiplicity: r.multiplicity,
                    snapped,
                });
            }
        }
    }
    out
}

/// Every member `z₀ + 2qt` of each root family with `Re z` in `window`.
pub fn lift_roots(roots: &[ClusteredRoot], rm: RationalM, parity: Parity, window: (f64, f64)) -> Vec<Root> {
    let problem = ScaledProblem::from_rational(rm);
    lift(roots, rm, window, RationalOptions::default().real_snap)
        .into_iter()
        .map(|l| Root::new(l.z, &problem, l.multiplicity, parity, Method::Rational))
        .collect()
}

/// Sign change of the factor across `x`, as an odd-multiplicity real root must show.
fn confirms_real(x: f64, m: f64, parity: Parity, multiplicity: u32) -> bool {
    let delta = if multiplicity > 1 { 1e-3 } else { 1e-6 };
    let f = |t: f64| eval_factor(Complex64::new(t, 0.0), m, parity).re;
    multiplicity % 2 == 1 && f(x - delta) * f(x + delta) < 0.0
}

pub fn spectrum_rational(problem: &ScaledProblem, rm: RationalM, lo: f64, hi: f64) -> Result<Spectrum> {
    spectrum_rational_with(problem, rm, lo, hi, &RationalOptions::default())
}

pub fn spectrum_rational_with(
    problem: &ScaledProblem,
    rm: RationalM,
    lo: f64,
    hi: f64,
    opts: &RationalOptions,
) -> Result<Spectrum> {
    let m = problem.m;
    if (rm.value() - m).abs() > 1e-12 * m {
        return Err(Error::Precondition(format!(
            "{}/{} does not match m = {m}",
            rm.p, rm.q
        )));
    }
    if rm.p > MAX_NUMERATOR {
        return Err(Error::Precondition(format!(
            "numerator {} exceeds {MAX_NUMERATOR}",
            rm.p
        )));
    }
    if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi < lo {
        return Err(Error::Precondition(format!("invalid window ({lo}, {hi}]")));
    }
    let mut spectrum = Spectrum::new(*problem, (lo, hi));
    let mut per_factor: Vec<(Parity, Vec<Lifted>)> = Vec::new();
    for parity in [Parity::Odd, Parity::Even] {
        let poly = build_polynomial(rm, parity);
        let clustered = solve_polynomial_with(&poly, opts)?;
        for r in clustered.iter().filter(|r| r.is_suspicious()) {
            spectrum.defects.push(Defect {
                strip: strip_of(q_arg(r.w, rm), m),
                parity: Some(parity),
                message: format!("cluster of multiplicity {} at w = {}", r.multiplicity, r.w),
            });
        }
        let mut lifted = lift(&clustered, rm, (lo, hi), opts.real_snap);
        for l in &mut lifted {
            let order = l.multiplicity.saturating_sub(1);
            let polished = newton_polish(l.z, m, parity, order);
            if (polished - l.z).norm() < 1e-3 {
                l.z = polished;
            }
            if l.snapped {
                if confirms_real(l.z.re, m, parity, l.multiplicity) {
                    l.z.im = 0.0;
                } else {
                    spectrum.defects.push(Defect {
                        strip: strip_of(l.z.re, m),
                        parity: Some(parity),
                        message: format!("root near the real axis at z = {} has no sign change", l.z),
                    });
                }
            }
        }
        lifted.retain(|l| l.z.norm() > 1e-9);
        per_factor.push((parity, lifted));
    }

    let (odd, even) = (&per_factor[0].1, &per_factor[1].1);
    let mut even_used = vec![false; even.len()];
    for o in odd {
        let partner = even.iter().enumerate().position(|(i, e)| {
            !even_used[i] && (e.z - o.z).norm() <= 1e-8 * o.z.norm().max(1.0)
        });
        match partner {
            Some(i) => {
                even_used[i] = true;
                let e = even[i];
                let (z, comps) = if o.multiplicity >= e.multiplicity {
                    (o.z, vec![(Parity::Odd, o.multiplicity), (Parity::Even, e.multiplicity)])
                } else {
                    (e.z, vec![(Parity::Even, e.multiplicity), (Parity::Odd, o.multiplicity)])
                };
                // a common zero has sin(πz) = 0, so z is an integer
                let n = z.re.round();
                let z = if z.im.abs() < 1e-8 && (z.re - n).abs() < 1e-8 * n.abs().max(1.0) {
                    Complex64::new(n, 0.0)
                } else {
                    z
                };
                let mut root = Root::new(z, problem, o.multiplicity + e.multiplicity, Parity::Product, Method::Rational);
                root.components = comps;
                spectrum.roots.push(root);
            }
            None => spectrum
                .roots
                .push(Root::new(o.z, problem, o.multiplicity, Parity::Odd, Method::Rational)),
        }
    }
    for (i, e) in even.iter().enumerate() {
        if !even_used[i] {
            spectrum
                .roots
                .push(Root::new(e.z, problem, e.multiplicity, Parity::Even, Method::Rational));
        }
    }
    spectrum.sort();
    Ok(spectrum)
}

fn q_arg(w: Complex64, rm: RationalM) -> f64 {
    rm.q as f64 / PI * w.arg()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::spectrum_analytic;
    use crate::dispersion::relative_residual;
    use crate::spectrum::match_roots;

    fn rm(p: u64, q: u64) -> RationalM {
        RationalM::new(p, q, true).unwrap()
    }

    fn ints(c: &[Rational64]) -> Vec<i64> {
        c.iter().map(|r| r.to_integer()).collect()
    }

    #[test]
    fn polynomials_for_integer_m() {
        let p = build_polynomial(rm(3, 1), Parity::Odd);
        assert_eq!(ints(&p.coefficients), vec![-1, 0, 3, 0, -3, 0, 1]);
        let p = build_polynomial(rm(2, 1), Parity::Odd);
        assert_eq!(ints(&p.coefficients), vec![-1, 2, 0, -2, 1]);
        let p = build_polynomial(rm(2, 1), Parity::Even);
        assert_eq!(ints(&p.coefficients), vec![-1, -2, 0, 2, 1]);
    }

    #[test]
    fn polynomial_invariants() {
        for (p, q) in [(5, 2), (7, 3), (11, 4), (13, 1)] {
            for parity in [Parity::Odd, Parity::Even] {
                let poly = build_polynomial(rm(p, q), parity);
                assert_eq!(poly.degree(), 2 * p as usize);
                assert_eq!(*poly.coefficients.last().unwrap(), Rational64::from_integer(1));
                assert_eq!(poly.coefficients[0], Rational64::from_integer(-1));
                assert_eq!(poly.coefficients[(p + q) as usize], Rational64::new(p as i64, q as i64) * if parity == Parity::Odd { -1 } else { 1 });
            }
        }
    }

    #[test]
    fn polynomial_matches_factor() {
        // w^{-p}·P(w)/(2i) = factor(z)
        let r = rm(7, 3);
        for parity in [Parity::Odd, Parity::Even] {
            let c = build_polynomial(r, parity).coefficients_f64();
            for z in [Complex64::new(0.3, 0.1), Complex64::new(2.7, -0.4)] {
                let w = (Complex64::i() * PI * z / 3.0).exp();
                let lhs = horner(&c, w) / w.powu(7) / Complex64::new(0.0, 2.0);
                assert!((lhs - eval_factor(z, r.value(), parity)).norm() < 1e-12);
            }
        }
    }

    fn mults(roots: &[ClusteredRoot]) -> Vec<(f64, f64, u32)> {
        let mut v: Vec<_> = roots
            .iter()
            .map(|r| ((r.w.re * 1e8).round() / 1e8, (r.w.im * 1e8).round() / 1e8 + 0.0, r.multiplicity))
            .collect();
        v.sort_by(|a, b| b.0.total_cmp(&a.0));
        v
    }

    #[test]
    fn clusters_of_integer_m() {
        let roots = solve_polynomial(&build_polynomial(rm(2, 1), Parity::Odd)).unwrap();
        assert_eq!(mults(&roots), vec![(1.0, 0.0, 3), (-1.0, 0.0, 1)]);
        assert!(roots.iter().all(|r| r.refinement_residual < 1e-14));
        let roots = solve_polynomial(&build_polynomial(rm(2, 1), Parity::Even)).unwrap();
        assert_eq!(mults(&roots), vec![(1.0, 0.0, 1), (-1.0, 0.0, 3)]);
        let roots = solve_polynomial(&build_polynomial(rm(3, 1), Parity::Odd)).unwrap();
        assert_eq!(mults(&roots), vec![(1.0, 0.0, 3), (-1.0, 0.0, 3)]);
        assert!((roots[0].w - 1.0).norm() < 1e-14);
    }

    #[test]
    fn simple_roots_of_five_halves() {
        let poly = build_polynomial(rm(5, 2), Parity::Odd);
        let roots = solve_polynomial(&poly).unwrap();
        assert_eq!(roots.iter().map(|r| r.multiplicity).sum::<u32>(), 10);
        assert!(roots.iter().all(|r| r.refinement_residual < 1e-10));
    }

    #[test]
    fn close_distinct_roots_are_not_merged() {
        // (w − 1)(w − 1 − 2e-5)
        let e = 2e-5;
        let c = [1.0 + e, -(2.0 + e), 1.0];
        let z = aberth(&c, 200).unwrap();
        let centre = (z[0] + z[1]) / 2.0;
        let spread = (z[0] - centre).norm();
        assert!(!plausible_multiple(&c, centre, 2, spread));
        let c = [1.0, -2.0, 1.0];
        let z = aberth(&c, 200).unwrap();
        let centre = (z[0] + z[1]) / 2.0;
        assert!(plausible_multiple(&c, centre, 2, (z[0] - centre).norm()));
    }

    #[test]
    fn iteration_cap_reports_nonconvergence() {
        let poly = build_polynomial(rm(7, 3), Parity::Odd);
        let opts = RationalOptions {
            max_iterations: 1,
            ..Default::default()
        };
        assert!(matches!(solve_polynomial_with(&poly, &opts), Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn lifting_families() {
        let roots = [ClusteredRoot {
            w: Complex64::new(-1.0, 0.0),
            multiplicity: 1,
            refinement_residual: 0.0,
        }];
        let z: Vec<f64> = lift_roots(&roots, rm(2, 1), Parity::Even, (0.0, 7.5))
            .iter()
            .map(|r| r.z.re)
            .collect();
        for (a, b) in z.iter().zip([1.0, 3.0, 5.0, 7.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(z.len(), 4);

        let even = solve_polynomial(&build_polynomial(rm(3, 1), Parity::Even)).unwrap();
        let h = 1.5f64.sqrt().acosh() / PI;
        let lifted = lift_roots(&even, rm(3, 1), Parity::Even, (0.0, 2.0));
        let complex: Vec<_> = lifted.iter().filter(|r| r.z.im.abs() > 1e-3).collect();
        assert_eq!(complex.len(), 4);
        for r in complex {
            assert!((r.z.re - r.z.re.floor() - 0.5).abs() < 1e-9);
            assert!((r.z.im.abs() - h).abs() < 1e-9);
        }
    }

    #[test]
    fn m3_spectrum_in_first_period() {
        let problem = ScaledProblem::from_rational(rm(3, 1));
        let s = spectrum_rational(&problem, rm(3, 1), 0.0, 1.0).unwrap();
        assert!(s.is_clean());
        assert_eq!(s.roots.len(), 3);
        assert_eq!(s.total_multiplicity(), 6);
        let quad = s.roots.iter().find(|r| r.multiplicity == 4).unwrap();
        assert!((quad.z - 1.0).norm() < 1e-12);
        assert_eq!(quad.z.im, 0.0);
        assert_eq!(quad.parity, Parity::Product);
        assert_eq!(quad.components, vec![(Parity::Odd, 3), (Parity::Even, 1)]);
        assert_eq!(quad.strip, 3);
    }

    #[test]
    fn m2_spectrum_is_all_quadruples() {
        let problem = ScaledProblem::from_rational(rm(2, 1));
        let s = spectrum_rational(&problem, rm(2, 1), 0.0, 5.0).unwrap();
        assert_eq!(s.roots.len(), 5);
        for (i, r) in s.roots.iter().enumerate() {
            assert_eq!(r.multiplicity, 4);
            assert!((r.z - (i + 1) as f64).norm() < 1e-12);
        }
    }

    #[test]
    fn residuals_periodicity_and_symmetry() {
        let r = rm(7, 3);
        let problem = ScaledProblem::from_rational(r);
        let s = spectrum_rational(&problem, r, 0.0, 12.0).unwrap();
        assert!(s.is_clean());
        for root in &s.roots {
            for &(parity, _) in &root.components {
                if root.multiplicity == 1 {
                    assert!(relative_residual(root.z, r.value(), parity) < 1e-12);
                }
            }
            if root.z.im != 0.0 {
                assert_eq!(root.multiplicity, 1);
                assert!(s.roots.iter().any(|o| (o.z - root.z.conj()).norm() < 1e-12));
            }
        }
        // per period 2q: 2p per factor
        let period: u32 = s.roots_between(0.0 + 1e-9, 6.0 + 1e-9).map(|r| r.multiplicity).sum();
        assert_eq!(period, 4 * 7);
        let first: Vec<_> = s.roots.iter().filter(|x| x.z.re <= 6.0).collect();
        let second: Vec<_> = s.roots.iter().filter(|x| x.z.re > 6.0).collect();
        assert_eq!(first.len(), second.len());
        for (a, b) in first.iter().zip(second) {
            assert!((a.z + 6.0 - b.z).norm() < 1e-9);
        }
    }

    #[test]
    fn agrees_with_analytic() {
        for (p, q) in [(5, 2), (7, 2), (4, 1), (9, 7)] {
            let r = rm(p, q);
            let problem = ScaledProblem::from_rational(r);
            let a = spectrum_rational(&problem, r, 0.0, 10.0).unwrap();
            let b = spectrum_analytic(&problem, 0.0, 10.0).unwrap();
            assert!(a.is_clean() && b.is_clean(), "{p}/{q}");
            let d = match_roots(&a.roots, &b.roots, 1e-8);
            assert!(d.is_some(), "{p}/{q}: {} vs {} roots", a.roots.len(), b.roots.len());
        }
    }
}
