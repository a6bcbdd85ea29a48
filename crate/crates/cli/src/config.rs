//! Run configuration shared by every subcommand.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use itw::error::Error;
use itw::model::{detect_rational, normalize, MInput, Medium, RationalM, ScaledProblem};
use itw::rational::MAX_NUMERATOR;

/// Exact numerators above this go to the analytic solver under `--method auto`.
pub const AUTO_RATIONAL_MAX_P: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    Auto,
    Rational,
    Analytic,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

/// How `--sigma` was written.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SigmaSpec {
    Exact { num: u64, den: u64 },
    Float { value: f64 },
}

impl SigmaSpec {
    pub fn value(&self) -> f64 {
        match *self {
            SigmaSpec::Exact { num, den } => num as f64 / den as f64,
            SigmaSpec::Float { value } => value,
        }
    }
}

/// Parses `"p/q"`, a plain decimal such as `"2.5"` (read exactly as `5/2`),
/// or any other float literal.
pub fn parse_sigma(text: &str) -> Result<SigmaSpec, String> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let num = p.trim().parse::<u64>().map_err(|e| format!("bad numerator in {t:?}: {e}"))?;
        let den = q.trim().parse::<u64>().map_err(|e| format!("bad denominator in {t:?}: {e}"))?;
        if den == 0 {
            return Err(format!("zero denominator in {t:?}"));
        }
        return Ok(SigmaSpec::Exact { num, den });
    }
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    let digits = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if !int.is_empty() && digits(int) && digits(frac) && int.len() + frac.len() <= 18 {
        let den = 10u64.pow(frac.len() as u32);
        let num = format!("{int}{frac}").parse::<u64>().map_err(|e| e.to_string())?;
        return Ok(SigmaSpec::Exact { num, den });
    }
    t.parse::<f64>()
        .map(|value| SigmaSpec::Float { value })
        .map_err(|e| format!("cannot read sigma {t:?}: {e}"))
}

/// Flags describing the medium and the wavenumber window.
#[derive(Debug, Clone, Args, Serialize)]
pub struct ProblemArgs {
    /// Index of refraction: a real number or an exact fraction "p/q".
    #[arg(long)]
    pub sigma: String,
    /// Length of the interval.
    #[arg(long, default_value_t = 2.0)]
    pub length: f64,
    /// Lower end of the window in Re k (exclusive).
    #[arg(long, default_value_t = 0.0)]
    pub kmin: f64,
    /// Upper end of the window in Re k (inclusive).
    #[arg(long, default_value_t = 10.0)]
    pub kmax: f64,
    #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
    pub method: MethodChoice,
    #[command(flatten)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct Tolerances {
    /// Largest eigenfunction residual accepted at a certified root.
    #[arg(long = "tol-residual", default_value_t = 1e-8)]
    pub residual: f64,
    /// Radius within which polynomial roots are clustered.
    #[arg(long = "tol-cluster", default_value_t = 1e-4)]
    pub cluster: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A validated problem ready for solving.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub sigma: SigmaSpec,
    pub length: f64,
    pub window_k: (f64, f64),
    pub window_z: (f64, f64),
    pub method: MethodChoice,
    pub residual_tol: f64,
    pub cluster_tol: f64,
    #[serde(skip)]
    pub medium: Medium,
    pub problem: ScaledProblem,
}

/// Invalid input: reported with exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<Error> for ConfigError {
    fn from(e: Error) -> Self {
        ConfigError(e.to_string())
    }
}

pub fn make_medium(sigma: &SigmaSpec, length: f64) -> Result<Medium, ConfigError> {
    Ok(match *sigma {
        SigmaSpec::Exact { num, den } => Medium::from_fraction(num, den, length)?,
        SigmaSpec::Float { value } => Medium::new(value, length)?,
    })
}

impl RunConfig {
    pub fn from_args(args: &ProblemArgs) -> Result<Self, ConfigError> {
        let sigma = parse_sigma(&args.sigma).map_err(ConfigError)?;
        Self::new(sigma, args.length, (args.kmin, args.kmax), args.method, args.tolerances)
    }

    pub fn new(
        sigma: SigmaSpec,
        length: f64,
        window_k: (f64, f64),
        method: MethodChoice,
        tolerances: Tolerances,
    ) -> Result<Self, ConfigError> {
        let medium = make_medium(&sigma, length)?;
        let problem = normalize(&medium);
        let (kmin, kmax) = window_k;
        if !(kmin >= 0.0 && kmax > kmin && kmax.is_finite()) {
            return Err(ConfigError(format!("need 0 ≤ kmin < kmax (got {kmin}, {kmax})")));
        }
        if !(tolerances.residual > 0.0 && tolerances.cluster > 0.0) {
            return Err(ConfigError("tolerances must be positive".into()));
        }
        let to_z = |k: f64| problem.k_to_z(k.into()).re;
        let cfg = Self {
            sigma,
            length,
            window_k,
            window_z: (to_z(kmin), to_z(kmax)),
            method,
            residual_tol: tolerances.residual,
            cluster_tol: tolerances.cluster,
            medium,
            problem,
        };
        cfg.solvers()?;
        Ok(cfg)
    }

    /// `m = p/q` when the polynomial route applies: exactly, or recovered
    /// from a float with a small denominator.
    pub fn rational(&self) -> Option<RationalM> {
        self.problem
            .rational
            .or_else(|| detect_rational(MInput::Real(self.problem.m), 1000))
    }

    /// The solver(s) `method` resolves to: `(rational, analytic)`.
    pub fn solvers(&self) -> Result<(Option<RationalM>, bool), ConfigError> {
        let need = || {
            let rm = self.rational().ok_or_else(|| {
                ConfigError(format!("m = {} is not a fraction with denominator ≤ 1000", self.problem.m))
            })?;
            if rm.p > MAX_NUMERATOR {
                return Err(ConfigError(format!(
                    "m = {}/{} is too large for the polynomial solver (numerator limit {MAX_NUMERATOR})",
                    rm.p, rm.q
                )));
            }
            Ok(rm)
        };
        Ok(match self.method {
            MethodChoice::Auto => match self.problem.rational {
                Some(rm) if rm.p <= AUTO_RATIONAL_MAX_P => (Some(rm), false),
                _ => (None, true),
            },
            MethodChoice::Rational => (Some(need()?), false),
            MethodChoice::Analytic => (None, true),
            MethodChoice::Both => (Some(need()?), true),
        })
    }
}
