//! Problem data and the change of variables shared by every solver.
//!
//! All root finding happens in the scaled coordinate
//! `z = (σ_eff − 1)·k·L / (2π)` with contrast `m = (σ_eff + 1)/(σ_eff − 1) > 1`.
//! A medium with `σ < 1` is mapped onto `σ_eff = 1/σ`; its wavenumbers are
//! those of `σ_eff` multiplied by `σ_eff`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Threshold on `|x − p/q|` for accepting a continued-fraction convergent.
pub const RATIONAL_TOL: f64 = 1e-12;
/// Largest denominator tried by [`detect_rational`] unless told otherwise.
pub const DEFAULT_MAX_DENOMINATOR: u64 = 1000;

/// A constant index of refraction `sigma` on an interval of length `length`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Medium {
    sigma: f64,
    length: f64,
    /// Exact `sigma = num/den` when the caller supplied a fraction.
    sigma_exact: Option<(u64, u64)>,
}

impl Medium {
    pub fn new(sigma: f64, length: f64) -> Result<Self> {
        make_medium(sigma, length)
    }

    /// Builds a medium from an exact fraction `num/den`.
    pub fn from_fraction(num: u64, den: u64, length: f64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidRational(format!("{num}/{den}")));
        }
        let g = gcd(num, den);
        let (num, den) = (num / g.max(1), den / g.max(1));
        let mut medium = make_medium(num as f64 / den as f64, length)?;
        if num == den {
            return Err(Error::UnitSigma);
        }
        medium.sigma_exact = Some((num, den));
        Ok(medium)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn sigma_exact(&self) -> Option<(u64, u64)> {
        self.sigma_exact
    }
}

/// Validates `sigma` and `length` and builds a [`Medium`].
pub fn make_medium(sigma: f64, length: f64) -> Result<Medium> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::NonPositiveSigma(sigma));
    }
    if sigma == 1.0 {
        return Err(Error::UnitSigma);
    }
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::NonPositiveLength(length));
    }
    Ok(Medium {
        sigma,
        length,
        sigma_exact: None,
    })
}

/// `m = p/q` in lowest terms with `p > q ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalM {
    pub p: u64,
    pub q: u64,
    /// False when the fraction was recovered from a floating-point value.
    pub exact: bool,
}

impl RationalM {
    pub fn new(p: u64, q: u64, exact: bool) -> Result<Self> {
        if q == 0 || p <= q {
            return Err(Error::InvalidRational(format!("{p}/{q}")));
        }
        let g = gcd(p, q);
        Ok(Self {
            p: p / g,
            q: q / g,
            exact,
        })
    }

    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// Input accepted by [`detect_rational`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MInput {
    Exact { p: u64, q: u64 },
    Real(f64),
}

/// Recovers `m = p/q` from an exact fraction or from a float by continued
/// fractions. Returns `None` when no convergent with `q ≤ max_denominator`
/// lies within [`RATIONAL_TOL`].
pub fn detect_rational(m_input: MInput, max_denominator: u64) -> Option<RationalM> {
    match m_input {
        MInput::Exact { p, q } => RationalM::new(p, q, true).ok(),
        MInput::Real(x) => {
            if !(x > 1.0) || !x.is_finite() {
                return None;
            }
            // convergents h/k of the continued fraction of x
            let (mut h_prev, mut h) = (1u128, x.floor() as u128);
            let (mut k_prev, mut k) = (0u128, 1u128);
            let mut frac = x - x.floor();
            loop {
                if k > max_denominator as u128 {
                    return None;
                }
                if (x - h as f64 / k as f64).abs() <= RATIONAL_TOL * x.max(1.0) {
                    return RationalM::new(h as u64, k as u64, false).ok();
                }
                if frac < 1e-15 {
                    return None;
                }
                let inv = 1.0 / frac;
                let a = inv.floor();
                frac = inv - a;
                let a = a as u128;
                let (h_next, k_next) = (a * h + h_prev, a * k + k_prev);
                h_prev = h;
                h = h_next;
                k_prev = k;
                k = k_next;
            }
        }
    }
}

/// Normalized parameters in which every root search takes place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledProblem {
    pub m: f64,
    /// `z = z_scale · k'` where `k'` is the wavenumber of the `sigma_effective` medium.
    pub z_scale: f64,
    pub reciprocal_applied: bool,
    pub sigma_effective: f64,
    /// Exact `m` when the medium was given as a fraction.
    pub rational: Option<RationalM>,
}

impl ScaledProblem {
    /// Problem with a prescribed `m` and unit `z_scale`; used when working purely in `z`.
    pub fn from_m(m: f64) -> Result<Self> {
        if !(m > 1.0) || !m.is_finite() {
            return Err(Error::Precondition(format!("m must exceed 1 (got {m})")));
        }
        Ok(Self {
            m,
            z_scale: 1.0,
            reciprocal_applied: false,
            sigma_effective: (m + 1.0) / (m - 1.0),
            rational: None,
        })
    }

    /// Same as [`ScaledProblem::from_m`] for an exact `m = p/q`.
    pub fn from_rational(rm: RationalM) -> Self {
        Self {
            m: rm.value(),
            z_scale: 1.0,
            reciprocal_applied: false,
            sigma_effective: (rm.p + rm.q) as f64 / (rm.p - rm.q) as f64,
            rational: Some(rm),
        }
    }

    /// Tightest known bound on `|Im z|` for any root.
    pub fn imag_bound_z(&self) -> f64 {
        (2.0 * self.m + 1.0).ln() / (PI * (self.m - 1.0))
    }

    pub fn z_to_k(&self, z: Complex64) -> Complex64 {
        z_to_k(z, self)
    }

    pub fn k_to_z(&self, k: Complex64) -> Complex64 {
        k_to_z(k, self)
    }

    /// Medium with `σ = sigma_effective > 1` whose wavenumbers are `z / z_scale`.
    pub fn effective_medium(&self) -> Medium {
        let sigma = self.sigma_effective;
        Medium {
            sigma,
            length: 2.0 * PI * self.z_scale / (sigma - 1.0),
            sigma_exact: None,
        }
    }

    /// Factor such that `k = z · k_per_z()`.
    pub fn k_per_z(&self) -> f64 {
        let k = 1.0 / self.z_scale;
        if self.reciprocal_applied {
            k * self.sigma_effective
        } else {
            k
        }
    }
}

/// Applies the `σ ↦ 1/σ` rule when needed so that `m > 1`.
pub fn normalize(medium: &Medium) -> ScaledProblem {
    let reciprocal_applied = medium.sigma < 1.0;
    let sigma_effective = if reciprocal_applied {
        1.0 / medium.sigma
    } else {
        medium.sigma
    };
    let rational = medium.sigma_exact.and_then(|(num, den)| {
        // sigma_eff = a/b > 1, m = (a + b)/(a − b)
        let (a, b) = if num > den { (num, den) } else { (den, num) };
        RationalM::new(a + b, a - b, true).ok()
    });
    let m = match rational {
        Some(rm) => rm.value(),
        None => (sigma_effective + 1.0) / (sigma_effective - 1.0),
    };
    ScaledProblem {
        m,
        z_scale: (sigma_effective - 1.0) * medium.length / (2.0 * PI),
        reciprocal_applied,
        sigma_effective,
        rational,
    }
}

pub fn z_to_k(z: Complex64, problem: &ScaledProblem) -> Complex64 {
    z * problem.k_per_z()
}

pub fn k_to_z(k: Complex64, problem: &ScaledProblem) -> Complex64 {
    k / problem.k_per_z()
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn medium_validation() {
        let m = make_medium(2.0, 2.0).unwrap();
        assert_eq!((m.sigma(), m.length()), (2.0, 2.0));
        assert_eq!(make_medium(1.0, 2.0), Err(Error::UnitSigma));
        assert!(matches!(make_medium(0.0, 2.0), Err(Error::NonPositiveSigma(_))));
        assert!(matches!(make_medium(-3.0, 2.0), Err(Error::NonPositiveSigma(_))));
        assert!(matches!(make_medium(2.0, 0.0), Err(Error::NonPositiveLength(_))));
        assert!(make_medium(0.5, 2.0).is_ok());
        assert_eq!(Medium::from_fraction(4, 4, 1.0), Err(Error::UnitSigma));
    }

    #[test]
    fn normalize_examples() {
        let p = normalize(&make_medium(2.0, 2.0).unwrap());
        assert_relative_eq!(p.m, 3.0);
        assert_relative_eq!(p.z_scale, 1.0 / PI);
        assert!(!p.reciprocal_applied);

        let p = normalize(&make_medium(3.0, 2.0).unwrap());
        assert_relative_eq!(p.m, 2.0);

        let p = normalize(&make_medium(0.5, 1.0).unwrap());
        assert_relative_eq!(p.m, 3.0);
        assert!(p.reciprocal_applied);
        assert_relative_eq!(p.sigma_effective, 2.0);
    }

    #[test]
    fn exact_sigma_gives_exact_m() {
        let p = normalize(&Medium::from_fraction(5, 3, 2.0).unwrap());
        assert_eq!(p.rational, Some(RationalM { p: 4, q: 1, exact: true }));
        let p = normalize(&Medium::from_fraction(3, 5, 2.0).unwrap());
        assert_eq!(p.rational, Some(RationalM { p: 4, q: 1, exact: true }));
        assert!(p.reciprocal_applied);
        let p = normalize(&Medium::from_fraction(9, 5, 1.0).unwrap());
        assert_eq!(p.rational, Some(RationalM { p: 7, q: 2, exact: true }));
    }

    #[test]
    fn z_to_k_examples() {
        let p = normalize(&make_medium(2.0, 2.0).unwrap());
        assert_relative_eq!(z_to_k(Complex64::new(1.0, 0.0), &p).re, PI, epsilon = 1e-15);
        assert_eq!(z_to_k(Complex64::new(0.0, 0.0), &p), Complex64::new(0.0, 0.0));
        let height = (1.5f64.sqrt()).acosh() / PI;
        let k = z_to_k(Complex64::new(0.5, height), &p);
        assert_relative_eq!(k.re, PI / 2.0, epsilon = 1e-14);
        assert_relative_eq!(k.im, 1.5f64.sqrt().acosh(), epsilon = 1e-14);
    }

    #[test]
    fn reciprocal_maps_differ_by_sigma_effective() {
        for &(s, l) in &[(2.0, 2.0), (3.7, 0.4), (1.25, 5.0)] {
            let a = normalize(&make_medium(s, l).unwrap());
            let b = normalize(&make_medium(1.0 / s, l).unwrap());
            assert_relative_eq!(a.m, b.m, max_relative = 1e-13);
            let z = Complex64::new(0.7, -0.3);
            let ratio = z_to_k(z, &b) / z_to_k(z, &a);
            assert_relative_eq!(ratio.re, b.sigma_effective, max_relative = 1e-13);
            assert!(ratio.im.abs() < 1e-13);
        }
    }

    #[test]
    fn detect_rational_examples() {
        assert_eq!(
            detect_rational(MInput::Exact { p: 3, q: 1 }, 1000),
            Some(RationalM { p: 3, q: 1, exact: true })
        );
        assert_eq!(
            detect_rational(MInput::Real(2.5), 1000),
            Some(RationalM { p: 5, q: 2, exact: false })
        );
        assert_eq!(detect_rational(MInput::Real(PI / 1.1), 50), None);
        assert_eq!(detect_rational(MInput::Real(5f64.sqrt()), 1000), None);
        assert_eq!(
            detect_rational(MInput::Exact { p: 12, q: 8 }, 1000),
            Some(RationalM { p: 3, q: 2, exact: true })
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn round_trip_z_k(re in -50.0f64..50.0, im in -10.0f64..10.0,
                          sigma in 0.05f64..20.0, len in 0.1f64..10.0) {
            prop_assume!((sigma - 1.0).abs() > 1e-3);
            let p = normalize(&make_medium(sigma, len).unwrap());
            let z = Complex64::new(re, im);
            let back = k_to_z(z_to_k(z, &p), &p);
            prop_assert!((back - z).norm() <= 1e-14 * z.norm().max(1e-300) * 4.0);
        }

        #[test]
        fn rational_reconstruction(q in 1u64..400, extra in 1u64..400) {
            let p = q + extra;
            let rm = RationalM::new(p, q, true).unwrap();
            let found = detect_rational(MInput::Real(rm.value()), 1000).unwrap();
            prop_assert_eq!((found.p, found.q), (rm.p, rm.q));
        }
    }
}
