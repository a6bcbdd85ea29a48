//! Root and spectrum containers shared by both solvers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::Parity;
use crate::model::ScaledProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Rational,
    Analytic,
    ExactQuadruple,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Rational => "rational",
            Method::Analytic => "analytic",
            Method::ExactQuadruple => "exact-quadruple",
        }
    }
}

/// One transmission wavenumber, in both coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub z: Complex64,
    pub k: Complex64,
    pub multiplicity: u32,
    pub parity: Parity,
    /// Multiplicity per factor; `[(Odd, 3), (Even, 1)]` for a quadruple.
    pub components: Vec<(Parity, u32)>,
    pub method: Method,
    pub certified: bool,
    /// Strip index `j` whose closure `[j/m, (j+1)/m)` holds `Re z`.
    pub strip: i64,
}

impl Root {
    pub fn new(
        z: Complex64,
        problem: &ScaledProblem,
        multiplicity: u32,
        parity: Parity,
        method: Method,
    ) -> Self {
        Self {
            z,
            k: problem.z_to_k(z),
            multiplicity,
            parity,
            components: vec![(parity, multiplicity)],
            method,
            certified: false,
            strip: strip_of(z.re, problem.m),
        }
    }

    pub fn is_real(&self) -> bool {
        self.z.im == 0.0
    }
}

/// Index `j` of the strip `[j/m, (j+1)/m)` holding `x`, tolerant of `x·m`
/// landing just below an integer.
pub(crate) fn strip_of(x: f64, m: f64) -> i64 {
    let s = x * m;
    let r = s.round();
    if (s - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r as i64
    } else {
        s.floor() as i64
    }
}

/// A failure confined to one strip; the rest of the spectrum is still usable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Defect {
    pub strip: i64,
    pub parity: Option<Parity>,
    pub message: String,
}

/// Roots with `lo < Re z ≤ hi`, plus conjugates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub problem: ScaledProblem,
    pub window: (f64, f64),
    pub roots: Vec<Root>,
    pub defects: Vec<Defect>,
}

impl Spectrum {
    pub fn new(problem: ScaledProblem, window: (f64, f64)) -> Self {
        Self {
            problem,
            window,
            roots: Vec::new(),
            defects: Vec::new(),
        }
    }

    /// Orders roots by `(Re k, Im k)`.
    pub fn sort(&mut self) {
        self.roots.sort_by(|a, b| {
            a.z.re
                .total_cmp(&b.z.re)
                .then(a.z.im.total_cmp(&b.z.im))
                .then(a.parity.cmp(&b.parity))
        });
    }

    pub fn in_window(&self, z: Complex64) -> bool {
        z.re > self.window.0 && z.re <= self.window.1
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn is_clean(&self) -> bool {
        self.defects.is_empty()
    }

    /// Roots with `x0 < Re z < x1`.
    pub fn roots_between(&self, x0: f64, x1: f64) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(move |r| r.z.re > x0 && r.z.re < x1)
    }
}

/// One-to-one matching of two root lists, multiplicity aware.
///
/// Returns the largest distance over matched pairs, or `None` when some
/// root has no partner within `tol`.
pub fn match_roots(a: &[Root], b: &[Root], tol: f64) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for ra in a {
        let best = b
            .iter()
            .enumerate()
            .filter(|(i, rb)| !used[*i] && rb.multiplicity == ra.multiplicity && rb.parity == ra.parity)
            .map(|(i, rb)| (i, (rb.z - ra.z).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))?;
        if best.1 > tol {
            return None;
        }
        used[best.0] = true;
        worst = worst.max(best.1);
    }
    Some(worst)
}
