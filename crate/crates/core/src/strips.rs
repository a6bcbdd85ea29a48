//! Strip bookkeeping: which roots each vertical band `j/m < Re z < (j+1)/m`
//! must contain, and which dispersion factor owns them.
//!
//! Factor assignment depends on the parity of `j + ⌊j/m⌋`:
//!
//! | strip content            | `j + ⌊j/m⌋` even          | odd                        |
//! |--------------------------|---------------------------|----------------------------|
//! | integer `k0` inside      | odd root in `(j/m, k0)`   | odd root in `(k0, (j+1)/m)`|
//! | no integer inside        | pair in the odd factor    | pair in the even factor    |
//! | `j/m` integer            | triple in the odd factor  | triple in the even factor  |
//!
//! The middle row follows the small-β corollary and the closed form at
//! `m = 3`; the usual statement of the strip theorem swaps it, see
//! [`stated_theorem_carrier`].

use serde::{Deserialize, Serialize};

use crate::dispersion::Parity;
use crate::error::{Error, Result};
use crate::model::{RationalM, ScaledProblem};

/// Guard band used when `m` is only known as a float.
pub const FLOOR_GUARD: f64 = 1e-12;

/// The value of `m` as seen by integer arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contrast {
    Rational(RationalM),
    Real(f64),
}

impl Contrast {
    pub fn of(problem: &ScaledProblem) -> Self {
        match problem.rational {
            Some(rm) => Contrast::Rational(rm),
            None => Contrast::Real(problem.m),
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Contrast::Rational(rm) => rm.value(),
            Contrast::Real(m) => *m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FloorParity {
    Even,
    Odd,
}

impl FloorParity {
    fn of(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            FloorParity::Even
        } else {
            FloorParity::Odd
        }
    }
}

/// How to treat a float `j/m` that sits inside the guard band of an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// Report [`Error::Ambiguous`].
    Reject,
    /// Treat the ratio as that integer.
    AssumeInteger,
    /// Treat the ratio as non-integer, on the side the float says.
    AssumeGeneric,
}

/// `⌊j/m⌋` together with whether `j/m` is an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub floor: i64,
    pub is_integer: bool,
}

pub fn ratio(j: i64, contrast: Contrast, degeneracy: Degeneracy) -> Result<Ratio> {
    match contrast {
        Contrast::Rational(rm) => {
            let num = j as i128 * rm.q as i128;
            let den = rm.p as i128;
            Ok(Ratio {
                floor: num.div_euclid(den) as i64,
                is_integer: num.rem_euclid(den) == 0,
            })
        }
        Contrast::Real(m) => {
            if j == 0 {
                return Ok(Ratio {
                    floor: 0,
                    is_integer: true,
                });
            }
            let x = j as f64 / m;
            let nearest = x.round();
            if (x - nearest).abs() <= FLOOR_GUARD * x.abs().max(1.0) {
                match degeneracy {
                    Degeneracy::Reject => return Err(Error::Ambiguous { j }),
                    Degeneracy::AssumeInteger => {
                        return Ok(Ratio {
                            floor: nearest as i64,
                            is_integer: true,
                        })
                    }
                    Degeneracy::AssumeGeneric => {}
                }
            }
            Ok(Ratio {
                floor: x.floor() as i64,
                is_integer: false,
            })
        }
    }
}

/// Parity of `j + ⌊j/m⌋`.
pub fn floor_parity(j: i64, contrast: Contrast) -> Result<FloorParity> {
    let r = ratio(j, contrast, Degeneracy::Reject)?;
    Ok(FloorParity::of(j + r.floor))
}

/// The band `lo < Re z < hi` with `lo = j/m`, `hi = (j+1)/m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Strip {
    pub j: i64,
    pub lo: f64,
    pub hi: f64,
}

impl Strip {
    pub fn new(j: i64, m: f64) -> Self {
        Self {
            j,
            lo: j as f64 / m,
            hi: (j + 1) as f64 / m,
        }
    }
}

/// Predicted content of one strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StripClass {
    /// Two real roots, one on each side of the integer `k0`.
    RealPair { k0: i64, left: Parity, right: Parity },
    /// One conjugate pair, both roots in `carrier`.
    ComplexPair { carrier: Parity },
    /// `lo = j/m` is the integer `at`; a quadruple root sits on the left edge
    /// and the open strip is empty.
    Quadruple { at: i64, triple: Parity, simple: Parity },
    /// `hi` is an integer; the strip `owner` carries the quadruple.
    AdjacentEmpty { owner: i64 },
}

impl StripClass {
    /// Roots attributed to the strip, counted with multiplicity.
    pub fn predicted_count(&self) -> u32 {
        match self {
            StripClass::RealPair { .. } | StripClass::ComplexPair { .. } => 2,
            StripClass::Quadruple { .. } => 4,
            StripClass::AdjacentEmpty { .. } => 0,
        }
    }

    /// Multiplicity-weighted count attributed to one factor.
    pub fn predicted_for(&self, parity: Parity) -> u32 {
        match (*self, parity) {
            (_, Parity::Product) => self.predicted_count(),
            (StripClass::RealPair { .. }, _) => 1,
            (StripClass::ComplexPair { carrier }, p) => {
                if carrier == p {
                    2
                } else {
                    0
                }
            }
            (StripClass::Quadruple { triple, .. }, p) => {
                if triple == p {
                    3
                } else {
                    1
                }
            }
            (StripClass::AdjacentEmpty { .. }, _) => 0,
        }
    }

    /// Real roots attributed to the strip (a quadruple counts fully).
    pub fn predicted_real(&self) -> u32 {
        match self {
            StripClass::RealPair { .. } => 2,
            StripClass::Quadruple { .. } => 4,
            _ => 0,
        }
    }
}

fn odd_factor_first(fp: FloorParity) -> (Parity, Parity) {
    match fp {
        FloorParity::Even => (Parity::Odd, Parity::Even),
        FloorParity::Odd => (Parity::Even, Parity::Odd),
    }
}

/// Classifies strip `j`, rejecting near-degenerate float ratios.
pub fn classify(j: i64, problem: &ScaledProblem) -> Result<StripClass> {
    classify_with(j, Contrast::of(problem), Degeneracy::Reject)
}

pub fn classify_with(j: i64, contrast: Contrast, degeneracy: Degeneracy) -> Result<StripClass> {
    if j < 0 {
        return Err(Error::Precondition(format!("strip index must be non-negative (got {j})")));
    }
    let here = ratio(j, contrast, degeneracy)?;
    let next = ratio(j + 1, contrast, degeneracy)?;
    let fp = FloorParity::of(j + here.floor);
    if here.is_integer {
        let (triple, simple) = odd_factor_first(fp);
        return Ok(StripClass::Quadruple {
            at: here.floor,
            triple,
            simple,
        });
    }
    if next.is_integer {
        return Ok(StripClass::AdjacentEmpty { owner: j + 1 });
    }
    if next.floor > here.floor {
        let (left, right) = odd_factor_first(fp);
        Ok(StripClass::RealPair {
            k0: next.floor,
            left,
            right,
        })
    } else {
        let carrier = match fp {
            FloorParity::Even => Parity::Odd,
            FloorParity::Odd => Parity::Even,
        };
        Ok(StripClass::ComplexPair { carrier })
    }
}

/// Carrier of a complex pair as the strip theorem states it: odd parity puts
/// the pair in the odd factor. Kept for reporting against certified counts.
pub fn stated_theorem_carrier(fp: FloorParity) -> Parity {
    match fp {
        FloorParity::Odd => Parity::Odd,
        FloorParity::Even => Parity::Even,
    }
}

/// Strip indices whose span `[j/m, (j+1)/m)` meets the window `(lo, hi]`.
pub fn strip_range(m: f64, lo: f64, hi: f64) -> std::ops::RangeInclusive<i64> {
    let first = ((lo * m).floor() as i64).max(0);
    let last = (hi * m).floor() as i64;
    first..=last
}

/// Every strip meeting the window `(lo, hi]` of `Re z`, classified.
pub fn strips_in_window(
    problem: &ScaledProblem,
    lo: f64,
    hi: f64,
) -> Result<Vec<(Strip, StripClass)>> {
    if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi < lo {
        return Err(Error::Precondition(format!("invalid window ({lo}, {hi}]")));
    }
    let contrast = Contrast::of(problem);
    strip_range(problem.m, lo, hi)
        .map(|j| Ok((Strip::new(j, problem.m), classify_with(j, contrast, Degeneracy::Reject)?)))
        .collect()
}
