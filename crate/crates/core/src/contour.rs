//! Argument-principle integrals over axis-aligned rectangles.
//!
//! `(1/2πi) ∮ f'/f dz` is integrated edge by edge with adaptive
//! Gauss–Legendre panels. The integrand only needs `f'/f`, so callers may
//! hand in any rescaled `(f, f')` pair.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `[x0, x1] × [y0, y1]`, traversed counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        assert!(x0 < x1 && y0 < y1, "degenerate rectangle");
        Self { x0, x1, y0, y1 }
    }

    /// Square of half-width `r` around `c`.
    pub fn around(c: Complex64, r: f64) -> Self {
        Self::new(c.re - r, c.re + r, c.im - r, c.im + r)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re > self.x0 && z.re < self.x1 && z.im > self.y0 && z.im < self.y1
    }

    fn corners(&self) -> [Complex64; 5] {
        [
            Complex64::new(self.x0, self.y0),
            Complex64::new(self.x1, self.y0),
            Complex64::new(self.x1, self.y1),
            Complex64::new(self.x0, self.y1),
            Complex64::new(self.x0, self.y0),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourOptions {
    /// Absolute tolerance per unit parameter length of each edge.
    pub tol: f64,
    pub max_nodes_per_edge: usize,
    /// Smallest accepted `min|f| / max|f|` over the quadrature nodes.
    pub boundary_ratio: f64,
    /// Largest accepted distance of the winding number from an integer.
    pub integer_tol: f64,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_nodes_per_edge: 1 << 14,
            boundary_ratio: 1e-8,
            integer_tol: 0.05,
        }
    }
}

/// Outcome of one contour integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Winding {
    pub count: i64,
    /// `(1/2πi) ∮ f'/f`, before rounding.
    pub raw: Complex64,
    /// `(1/2πi) ∮ z f'/f`: sum of the enclosed zeros.
    pub first_moment: Complex64,
    pub nodes: usize,
    pub min_ratio: f64,
}

impl Winding {
    /// Multiplicity-weighted mean of the enclosed zeros.
    pub fn centroid(&self) -> Option<Complex64> {
        (self.count > 0).then(|| self.first_moment / self.count as f64)
    }
}

const GAUSS_ORDER: usize = 10;

fn gauss_legendre() -> &'static [(f64, f64); GAUSS_ORDER] {
    static RULE: OnceLock<[(f64, f64); GAUSS_ORDER]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_ORDER;
        let mut rule = [(0.0, 0.0); GAUSS_ORDER];
        for (i, slot) in rule.iter_mut().enumerate() {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        rule
    })
}

struct EdgeState {
    nodes: usize,
    min_abs: f64,
    max_abs: f64,
}

/// Gauss–Legendre estimate of `∫ (f'/f, z f'/f) dz` over the straight segment `a → b`.
fn panel<F>(f: &F, a: Complex64, b: Complex64, st: &mut EdgeState) -> (Complex64, Complex64)
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let half = (b - a) * 0.5;
    let mid = (a + b) * 0.5;
    let mut zero = Complex64::new(0.0, 0.0);
    let mut first = Complex64::new(0.0, 0.0);
    for &(x, w) in gauss_legendre() {
        let z = mid + half * x;
        let (v, dv) = f(z);
        let mag = v.norm();
        st.min_abs = st.min_abs.min(mag);
        st.max_abs = st.max_abs.max(mag);
        let ratio = dv / v;
        zero += ratio * w;
        first += ratio * z * w;
    }
    st.nodes += GAUSS_ORDER;
    (zero * half, first * half)
}

fn adaptive<F>(
    f: &F,
    a: Complex64,
    b: Complex64,
    whole: (Complex64, Complex64),
    tol: f64,
    budget: usize,
    st: &mut EdgeState,
) -> (Complex64, Complex64)
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let mid = (a + b) * 0.5;
    let left = panel(f, a, mid, st);
    let right = panel(f, mid, b, st);
    let sum = (left.0 + right.0, left.1 + right.1);
    let err = (sum.0 - whole.0).norm();
    if err <= tol || st.nodes >= budget || (b - a).norm() < 1e-14 {
        return sum;
    }
    let l = adaptive(f, a, mid, left, 0.5 * tol, budget, st);
    let r = adaptive(f, mid, b, right, 0.5 * tol, budget, st);
    (l.0 + r.0, l.1 + r.1)
}

/// Integrates the winding and first moment of `f` around `rect`.
///
/// `f` returns `(f(z), f'(z))`, possibly multiplied by a common positive
/// factor that may vary with `z`.
pub fn winding<F>(f: F, rect: &Rect, opts: &ContourOptions) -> Result<Winding>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let mut total = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let mut nodes = 0;
    let mut min_abs = f64::INFINITY;
    let mut max_abs = 0.0f64;
    let corners = rect.corners();
    for edge in corners.windows(2) {
        let (a, b) = (edge[0], edge[1]);
        let mut st = EdgeState {
            nodes: 0,
            min_abs: f64::INFINITY,
            max_abs: 0.0,
        };
        // start from a few panels so narrow features are not skipped entirely
        let pieces = 8;
        for p in 0..pieces {
            let lo = a + (b - a) * (p as f64 / pieces as f64);
            let hi = a + (b - a) * ((p + 1) as f64 / pieces as f64);
            let whole = panel(&f, lo, hi, &mut st);
            let part = adaptive(
                &f,
                lo,
                hi,
                whole,
                opts.tol / pieces as f64,
                opts.max_nodes_per_edge,
                &mut st,
            );
            total.0 += part.0;
            total.1 += part.1;
        }
        nodes += st.nodes;
        min_abs = min_abs.min(st.min_abs);
        max_abs = max_abs.max(st.max_abs);
    }
    let min_ratio = if max_abs > 0.0 { min_abs / max_abs } else { 0.0 };
    if !(min_ratio > opts.boundary_ratio) {
        return Err(Error::BoundaryZero { ratio: min_ratio });
    }
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let raw = total.0 / two_pi_i;
    let first_moment = total.1 / two_pi_i;
    let count = raw.re.round();
    if (raw - count).norm() > opts.integer_tol || !raw.re.is_finite() {
        return Err(Error::NonIntegerWinding(raw.re));
    }
    Ok(Winding {
        count: count as i64,
        raw,
        first_moment,
        nodes,
        min_ratio,
    })
}

/// Number of zeros of `f` inside `rect`, counted with multiplicity.
pub fn count_zeros_rect<F>(f: F, rect: &Rect) -> Result<i64>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    Ok(winding(f, rect, &ContourOptions::default())?.count)
}

/// Multiplicity-weighted mean of the zeros of `f` inside `rect`.
pub fn zero_centroid_rect<F>(f: F, rect: &Rect) -> Result<Complex64>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let w = winding(f, rect, &ContourOptions::default())?;
    w.centroid()
        .ok_or(Error::CountMismatch { expected: 1, found: w.count })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(roots: Vec<Complex64>) -> impl Fn(Complex64) -> (Complex64, Complex64) {
        move |z| {
            let mut v = Complex64::new(1.0, 0.0);
            let mut dv = Complex64::new(0.0, 0.0);
            for r in &roots {
                dv = dv * (z - r) + v;
                v *= z - r;
            }
            (v, dv)
        }
    }

    #[test]
    fn gauss_rule_integrates_polynomials() {
        let s: f64 = gauss_legendre().iter().map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
        let w: f64 = gauss_legendre().iter().map(|(_, w)| w).sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn counts_polynomial_roots() {
        let roots = vec![
            Complex64::new(0.1, 0.2),
            Complex64::new(0.1, 0.2),
            Complex64::new(-0.3, 0.0),
            Complex64::new(2.0, 2.0),
        ];
        let f = poly(roots);
        assert_eq!(count_zeros_rect(&f, &Rect::new(-1.0, 1.0, -1.0, 1.0)).unwrap(), 3);
        assert_eq!(count_zeros_rect(&f, &Rect::new(1.5, 2.5, 1.5, 2.5)).unwrap(), 1);
        assert_eq!(count_zeros_rect(&f, &Rect::new(0.5, 1.0, 0.5, 1.0)).unwrap(), 0);
        let c = zero_centroid_rect(&f, &Rect::new(-1.0, 1.0, -1.0, 1.0)).unwrap();
        assert!((c - Complex64::new(-0.1 / 3.0, 0.4 / 3.0)).norm() < 1e-10);
    }

    #[test]
    fn root_close_to_edge() {
        let f = poly(vec![Complex64::new(0.9999, 0.0)]);
        assert_eq!(count_zeros_rect(&f, &Rect::new(0.0, 1.0, -1.0, 1.0)).unwrap(), 1);
        assert_eq!(count_zeros_rect(&f, &Rect::new(1.0, 2.0, -1.0, 1.0)).unwrap(), 0);
    }

    #[test]
    fn zero_on_contour_is_rejected() {
        let f = poly(vec![Complex64::new(0.5, 0.0)]);
        let err = count_zeros_rect(&f, &Rect::new(0.5, 1.0, -1.0, 1.0));
        assert!(matches!(err, Err(Error::BoundaryZero { .. }) | Err(Error::NonIntegerWinding(_))));
    }

    #[test]
    fn centroid_requires_a_zero() {
        let f = poly(vec![Complex64::new(5.0, 0.0)]);
        assert!(zero_centroid_rect(&f, &Rect::new(0.0, 1.0, -1.0, 1.0)).is_err());
    }
}
