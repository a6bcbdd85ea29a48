//! Subcommand implementations. Each returns the process exit code.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use itw::certify::CertReport;
use itw::dispersion::Parity;
use itw::homotopy::{
    finite_difference_slope, initial_slope, stated_initial_slope, trace_homotopy, Termination,
};
use itw::limits::{
    born_asymptotic, born_asymptotic_corrected, born_roots, counting, strong_even_limit,
    strong_odd_roots, CountingResult,
};
use itw::model::normalize;
use itw::spectrum::{Defect, Root};

use crate::config::{
    make_medium, parse_sigma, ConfigError, Format, MethodChoice, OutputArgs, ProblemArgs, RunConfig,
    Tolerances,
};
use crate::output::{emit, fmt_f64, root_fields, roots_csv, to_json, RootRecord, Table, ROOT_HEADER};
use crate::pipeline::{self, Agreement, Outcome};
use crate::svg::{self, Panel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "itw", version, about = "Interior transmission wavenumbers of a homogeneous interval")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute every wavenumber in a window.
    Spectrum(SpectrumArgs),
    /// Compute and certify strip by strip with the argument principle.
    Certify(SpectrumArgs),
    /// Compare root counts with the counting-function asymptotics.
    Count(CountArgs),
    /// Plot spectra for several media with strip guide lines.
    Figure(FigureArgs),
    /// Roots of the Born-limit equation πz = ±sin(πz).
    Born(BornArgs),
    /// Compare a strong scatterer with its limiting spectra.
    Limits(LimitsArgs),
    /// Slopes and end points of the β-homotopy paths.
    Homotopy(HomotopyArgs),
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Count roots with 0 < Re k ≤ width (defaults to --kmax).
    #[arg(long)]
    pub width: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Indices of refraction, one panel each.
    #[arg(long = "sigma", num_args = 1, default_values_t = vec!["2".to_string(), "3/2".to_string()])]
    pub sigmas: Vec<String>,
    #[arg(long, default_value_t = 2.0)]
    pub length: f64,
    #[arg(long, default_value_t = 0.0)]
    pub kmin: f64,
    #[arg(long, default_value_t = 30.0)]
    pub kmax: f64,
    #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
    pub method: MethodChoice,
    #[command(flatten)]
    pub tolerances: Tolerances,
    #[arg(long, value_enum, default_value_t = Format::Svg)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the plotted roots; defaults to --out with a .csv extension.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BornArgs {
    /// Strips j = 1..=jmax, two roots each.
    #[arg(long, default_value_t = 50)]
    pub jmax: i64,
    /// Length used to convert z to k = πz/L.
    #[arg(long, default_value_t = 2.0)]
    pub length: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    #[arg(long, default_value = "1000")]
    pub sigma: String,
    #[arg(long, default_value_t = 2.0)]
    pub length: f64,
    #[arg(long, default_value_t = 10)]
    pub jmax: usize,
    #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
    pub method: MethodChoice,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct HomotopyArgs {
    #[arg(long)]
    pub sigma: String,
    #[arg(long, default_value_t = 10)]
    pub jmax: i64,
    /// β at which the finite-difference slope is taken.
    #[arg(long, default_value_t = 1e-4)]
    pub beta: f64,
    /// Nominal continuation steps from β = 0 to β = m.
    #[arg(long, default_value_t = 400)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Spectrum(a) => cmd_spectrum(&a, false),
        Command::Certify(a) => cmd_spectrum(&a, true),
        Command::Count(a) => cmd_count(&a),
        Command::Figure(a) => cmd_figure(&a),
        Command::Born(a) => cmd_born(&a),
        Command::Limits(a) => cmd_limits(&a),
        Command::Homotopy(a) => cmd_homotopy(&a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Config(e)) => {
            eprintln!("itw: invalid configuration: {e}");
            EXIT_CONFIG
        }
        Err(Failure::Solver(e)) => {
            eprintln!("itw: {e}");
            EXIT_FAILED
        }
        Err(Failure::Io(e)) => {
            eprintln!("itw: cannot write output: {e}");
            EXIT_FAILED
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Config(ConfigError),
    Solver(itw::error::Error),
    Io(std::io::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<itw::error::Error> for Failure {
    fn from(e: itw::error::Error) -> Self {
        Failure::Solver(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type CmdResult = Result<i32, Failure>;

fn no_svg(format: Format, command: &str) -> Result<(), ConfigError> {
    if format == Format::Svg {
        return Err(ConfigError(format!("{command} has no svg output")));
    }
    Ok(())
}

fn report_failures(failures: &[String]) -> i32 {
    for f in failures {
        eprintln!("itw: {f}");
    }
    if failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

#[derive(Serialize)]
struct SpectrumReport<'a> {
    defects: &'a [Defect],
    agreement: Option<&'a Agreement>,
}

#[derive(Serialize)]
struct CertifyReport<'a> {
    #[serde(flatten)]
    certification: &'a CertReport,
    agreement: Option<&'a Agreement>,
}

fn records(roots: &[Root]) -> Vec<RootRecord> {
    roots.iter().map(RootRecord::from).collect()
}

fn single_panel(cfg: &RunConfig, roots: &[Root]) -> String {
    let panel = Panel {
        label: format!("sigma = {}", cfg.sigma.value()),
        problem: &cfg.problem,
        roots,
    };
    svg::render(&[panel], cfg.window_k.0, cfg.window_k.1)
}

pub fn cmd_spectrum(args: &SpectrumArgs, certify: bool) -> CmdResult {
    let cfg = RunConfig::from_args(&args.problem)?;
    let outcome = pipeline::run(&cfg)?;
    let Outcome {
        spectrum,
        report,
        agreement,
    } = &outcome;
    let text = match args.output.format {
        Format::Csv => roots_csv(&spectrum.roots),
        Format::Svg => single_panel(&cfg, &spectrum.roots),
        Format::Json if certify => to_json(
            &cfg,
            &records(&spectrum.roots),
            &CertifyReport {
                certification: report,
                agreement: agreement.as_ref(),
            },
        ),
        Format::Json => to_json(
            &cfg,
            &records(&spectrum.roots),
            &SpectrumReport {
                defects: &spectrum.defects,
                agreement: agreement.as_ref(),
            },
        ),
    };
    emit(&text, args.output.out.as_deref())?;
    let failures = if certify {
        outcome.failures()
    } else {
        let mut f: Vec<String> = spectrum
            .defects
            .iter()
            .map(|d| format!("defect in strip {}: {}", d.strip, d.message))
            .collect();
        if let Some(a) = agreement.as_ref().filter(|a| !a.ok()) {
            f.push(format!(
                "rational ({}) and analytic ({}) roots disagree beyond {:e}",
                a.rational_roots, a.analytic_roots, a.tolerance
            ));
        }
        f
    };
    Ok(report_failures(&failures))
}

#[derive(Serialize)]
struct CountReport {
    counts: Vec<CountingResult>,
    /// Allowed `|computed − predicted|`.
    tolerance: f64,
}

pub fn cmd_count(args: &CountArgs) -> CmdResult {
    no_svg(args.output.format, "count")?;
    let width = args.width.unwrap_or(args.problem.kmax);
    let mut problem = args.problem.clone();
    problem.kmin = 0.0;
    problem.kmax = width;
    let cfg = RunConfig::from_args(&problem)?;
    let outcome = pipeline::run(&cfg)?;
    let counts = [false, true]
        .into_iter()
        .map(|real_only| counting(&outcome.spectrum, &cfg.medium, width, real_only))
        .collect::<Result<Vec<_>, _>>()?;
    let text = match args.output.format {
        Format::Json => to_json(
            &cfg,
            &records(&outcome.spectrum.roots),
            &CountReport { counts, tolerance: 2.0 },
        ),
        _ => {
            let mut t = Table::new(["width", "kind", "computed", "predicted", "deviation"]);
            for c in &counts {
                t.row([
                    fmt_f64(c.width),
                    (if c.real_only { "real" } else { "all" }).to_string(),
                    c.computed.to_string(),
                    fmt_f64(c.predicted),
                    fmt_f64(c.deviation()),
                ]);
            }
            t.finish()
        }
    };
    emit(&text, args.output.out.as_deref())?;
    Ok(report_failures(&outcome.failures()))
}

/// Spectra behind a figure, one per medium.
pub struct FigureData {
    pub configs: Vec<RunConfig>,
    pub outcomes: Vec<Outcome>,
}

impl FigureData {
    pub fn compute(args: &FigureArgs) -> Result<Self, Failure> {
        if args.sigmas.is_empty() {
            return Err(ConfigError("figure needs at least one --sigma".into()).into());
        }
        let mut configs = Vec::new();
        for text in &args.sigmas {
            let sigma = parse_sigma(text).map_err(ConfigError)?;
            configs.push(RunConfig::new(
                sigma,
                args.length,
                (args.kmin, args.kmax),
                args.method,
                args.tolerances,
            )?);
        }
        let outcomes = configs.iter().map(pipeline::run).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { configs, outcomes })
    }

    pub fn svg(&self, kmin: f64, kmax: f64) -> String {
        let panels: Vec<Panel<'_>> = self
            .configs
            .iter()
            .zip(&self.outcomes)
            .map(|(c, o)| Panel {
                label: format!("sigma = {}, L = {}", c.sigma.value(), c.length),
                problem: &c.problem,
                roots: &o.spectrum.roots,
            })
            .collect();
        svg::render(&panels, kmin, kmax)
    }

    /// Plotted roots with a leading `sigma` column.
    pub fn csv(&self) -> String {
        let mut t = Table::new(std::iter::once("sigma").chain(ROOT_HEADER));
        for (c, o) in self.configs.iter().zip(&self.outcomes) {
            for r in &o.spectrum.roots {
                let [a, b, m, p, cert] = root_fields(r);
                t.row([fmt_f64(c.sigma.value()), a, b, m, p, cert]);
            }
        }
        t.finish()
    }
}

#[derive(Serialize)]
struct FigureReport<'a> {
    sigma: f64,
    defects: &'a [Defect],
    guide_lines: Vec<f64>,
    /// Shift in `Re k` that maps the spectrum onto itself, for rational `σ`.
    period_k: Option<f64>,
}

/// Period of the spectrum in `Re k`: `z ↦ z + 2q` for `m = p/q`.
pub fn period_k(cfg: &RunConfig) -> Option<f64> {
    cfg.problem
        .rational
        .map(|rm| 2.0 * rm.q as f64 * cfg.problem.k_per_z())
}

pub fn cmd_figure(args: &FigureArgs) -> CmdResult {
    let data = FigureData::compute(args)?;
    let csv_path = args
        .csv
        .clone()
        .or_else(|| args.out.as_ref().map(|p| p.with_extension("csv")));
    match args.format {
        Format::Svg => {
            emit(&data.svg(args.kmin, args.kmax), args.out.as_deref())?;
            if let Some(p) = csv_path.as_deref() {
                emit(&data.csv(), Some(p))?;
            }
        }
        Format::Csv => emit(&data.csv(), args.out.as_deref())?,
        Format::Json => {
            let roots: Vec<(f64, RootRecord)> = data
                .configs
                .iter()
                .zip(&data.outcomes)
                .flat_map(|(c, o)| o.spectrum.roots.iter().map(|r| (c.sigma.value(), RootRecord::from(r))))
                .collect();
            let report: Vec<FigureReport<'_>> = data
                .configs
                .iter()
                .zip(&data.outcomes)
                .map(|(c, o)| FigureReport {
                    sigma: c.sigma.value(),
                    defects: &o.spectrum.defects,
                    guide_lines: svg::guide_lines(&c.problem, args.kmin, args.kmax)
                        .into_iter()
                        .map(|(_, k)| k)
                        .collect(),
                    period_k: period_k(c),
                })
                .collect();
            emit(&to_json(&data.configs, &roots, &report), args.out.as_deref())?;
        }
    }
    let failures: Vec<String> = data.outcomes.iter().flat_map(Outcome::failures).collect();
    Ok(report_failures(&failures))
}

/// One row of the Born-limit table.
#[derive(Debug, Clone, Serialize)]
pub struct BornRow {
    pub j: i64,
    pub sign: f64,
    pub z: Complex64,
    pub k: Complex64,
    pub multiplicity: u32,
    pub residual: f64,
    /// `(j+½) ± i·log(2(j+½))`.
    pub asymptotic: Complex64,
    pub asymptotic_distance: f64,
    /// `2·log(2(j+½))/(j+½)`.
    pub asymptotic_allowance: f64,
    /// `(j+½) ± i·log(2π(j+½))/π`.
    pub corrected: Complex64,
    pub corrected_distance: f64,
}

pub fn born_table(jmax: i64, length: f64) -> Result<Vec<BornRow>, Failure> {
    if jmax < 1 {
        return Err(ConfigError(format!("jmax must be at least 1 (got {jmax})")).into());
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(ConfigError(format!("length must be positive (got {length})")).into());
    }
    let roots = born_roots(1..=jmax)?;
    Ok(roots
        .iter()
        .map(|r| {
            let conj = |w: Complex64| if r.z.im < 0.0 { w.conj() } else { w };
            let asymptotic = conj(born_asymptotic(r.j));
            let corrected = conj(born_asymptotic_corrected(r.j));
            let c = r.j as f64 + 0.5;
            BornRow {
                j: r.j,
                sign: r.sign,
                z: r.z,
                k: r.k(length),
                multiplicity: r.multiplicity,
                residual: r.residual(),
                asymptotic,
                asymptotic_distance: (r.z - asymptotic).norm(),
                asymptotic_allowance: 2.0 * (2.0 * c).ln() / c,
                corrected,
                corrected_distance: (r.z - corrected).norm(),
            }
        })
        .collect())
}

pub fn cmd_born(args: &BornArgs) -> CmdResult {
    no_svg(args.output.format, "born")?;
    let rows = born_table(args.jmax, args.length)?;
    let text = match args.output.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Config {
                jmax: i64,
                length: f64,
            }
            #[derive(Serialize)]
            struct Report {
                max_residual: f64,
                within_allowance: usize,
                total: usize,
            }
            let report = Report {
                max_residual: rows.iter().map(|r| r.residual).fold(0.0, f64::max),
                within_allowance: rows
                    .iter()
                    .filter(|r| r.asymptotic_distance <= r.asymptotic_allowance)
                    .count(),
                total: rows.len(),
            };
            let config = Config {
                jmax: args.jmax,
                length: args.length,
            };
            to_json(&config, &rows, &report)
        }
        _ => {
            let mut t = Table::new([
                "j",
                "sign",
                "re_z",
                "im_z",
                "re_k",
                "im_k",
                "residual",
                "asymptotic_re_z",
                "asymptotic_im_z",
                "asymptotic_distance",
                "asymptotic_allowance",
                "corrected_re_z",
                "corrected_im_z",
                "corrected_distance",
            ]);
            for r in &rows {
                t.row([
                    r.j.to_string(),
                    (if r.sign > 0.0 { "+" } else { "-" }).to_string(),
                    fmt_f64(r.z.re),
                    fmt_f64(r.z.im),
                    fmt_f64(r.k.re),
                    fmt_f64(r.k.im),
                    fmt_f64(r.residual),
                    fmt_f64(r.asymptotic.re),
                    fmt_f64(r.asymptotic.im),
                    fmt_f64(r.asymptotic_distance),
                    fmt_f64(r.asymptotic_allowance),
                    fmt_f64(r.corrected.re),
                    fmt_f64(r.corrected.im),
                    fmt_f64(r.corrected_distance),
                ]);
            }
            t.finish()
        }
    };
    emit(&text, args.output.out.as_deref())?;
    Ok(EXIT_OK)
}

/// One computed wavenumber next to its strong-scatterer limit.
#[derive(Debug, Clone, Serialize)]
pub struct LimitRow {
    pub family: Parity,
    pub j: i64,
    pub limit_k: f64,
    /// Closest real root of the family, if any.
    pub computed_k: Option<f64>,
    pub relative_error: Option<f64>,
}

pub struct LimitsData {
    pub config: RunConfig,
    pub outcome: Outcome,
    pub rows: Vec<LimitRow>,
}

/// Odd real roots against `x = tan x` with `k = 2x/((σ−1)L)`; even real
/// roots against `2πj/(σL)`.
pub fn limits_table(sigma: &str, length: f64, jmax: usize, method: MethodChoice) -> Result<LimitsData, Failure> {
    if jmax == 0 {
        return Err(ConfigError("jmax must be at least 1".into()).into());
    }
    let sigma = parse_sigma(sigma).map_err(ConfigError)?;
    let medium = make_medium(&sigma, length)?;
    if medium.sigma() <= 1.0 {
        return Err(ConfigError("the strong-scatterer comparison needs sigma > 1".into()).into());
    }
    let (s, l) = (medium.sigma(), medium.length());
    let odd: Vec<(i64, f64)> = strong_odd_roots(jmax)
        .into_iter()
        .enumerate()
        .map(|(i, x)| (i as i64 + 1, 2.0 * x / ((s - 1.0) * l)))
        .collect();
    let even: Vec<(i64, f64)> = (1..=jmax as i64).map(|j| (j, strong_even_limit(j, &medium))).collect();
    let kmax = odd.iter().chain(&even).map(|&(_, k)| k).fold(0.0, f64::max) * 1.1;
    let config = RunConfig::new(
        sigma,
        length,
        (0.0, kmax),
        method,
        Tolerances {
            residual: 1e-8,
            cluster: 1e-4,
        },
    )?;
    let outcome = pipeline::run(&config)?;
    let nearest = |parity: Parity, k: f64| {
        outcome
            .spectrum
            .roots
            .iter()
            .filter(|r| r.is_real() && r.components.iter().any(|&(p, _)| p == parity))
            .map(|r| r.k.re)
            .min_by(|a, b| (a - k).abs().total_cmp(&(b - k).abs()))
    };
    let rows = [(Parity::Odd, odd), (Parity::Even, even)]
        .into_iter()
        .flat_map(|(family, list)| {
            list.into_iter()
                .map(|(j, limit_k)| {
                    let computed_k = nearest(family, limit_k);
                    LimitRow {
                        family,
                        j,
                        limit_k,
                        computed_k,
                        relative_error: computed_k.map(|k| (k - limit_k).abs() / limit_k),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(LimitsData { config, outcome, rows })
}

pub fn cmd_limits(args: &LimitsArgs) -> CmdResult {
    no_svg(args.output.format, "limits")?;
    let data = limits_table(&args.sigma, args.length, args.jmax, args.method)?;
    let text = match args.output.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                comparisons: &'a [LimitRow],
                max_relative_error: f64,
                defects: &'a [Defect],
            }
            let report = Report {
                comparisons: &data.rows,
                max_relative_error: data
                    .rows
                    .iter()
                    .map(|r| r.relative_error.unwrap_or(f64::INFINITY))
                    .fold(0.0, f64::max),
                defects: &data.outcome.spectrum.defects,
            };
            to_json(&data.config, &records(&data.outcome.spectrum.roots), &report)
        }
        _ => {
            let mut t = Table::new(["family", "j", "limit_k", "computed_k", "relative_error"]);
            let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
            for r in &data.rows {
                t.row([
                    r.family.to_string(),
                    r.j.to_string(),
                    fmt_f64(r.limit_k),
                    opt(r.computed_k),
                    opt(r.relative_error),
                ]);
            }
            t.finish()
        }
    };
    emit(&text, args.output.out.as_deref())?;
    let mut failures = data.outcome.failures();
    failures.extend(
        data.rows
            .iter()
            .filter(|r| r.computed_k.is_none())
            .map(|r| format!("no real {} root near the limit for j = {}", r.family, r.j)),
    );
    Ok(report_failures(&failures))
}

/// Start of one homotopy path: formula slopes against a finite difference.
#[derive(Debug, Clone, Serialize)]
pub struct HomotopyRow {
    pub j: i64,
    /// `(−1)^{j+⌊j/m⌋}·|sin(jπ/m)|`.
    pub stated_slope: f64,
    /// The same divided by `mπ`.
    pub corrected_slope: f64,
    pub fd_slope: f64,
    pub stated_relative_error: f64,
    pub corrected_relative_error: f64,
    pub end: Option<(f64, Complex64)>,
    pub terminated_by: Option<Termination>,
    pub error: Option<String>,
}

/// Relative error, or absolute where the formula is `sin(nπ)` evaluated in floats.
fn rel_err(approx: f64, exact: f64) -> f64 {
    if exact.abs() < 1e-12 {
        approx.abs()
    } else {
        (approx - exact).abs() / exact.abs()
    }
}

pub fn homotopy_table(m: f64, jmax: i64, beta: f64, steps: usize) -> Result<Vec<HomotopyRow>, Failure> {
    if jmax < 1 || !(beta > 0.0) || steps == 0 {
        return Err(ConfigError("need jmax ≥ 1, beta > 0 and steps > 0".into()).into());
    }
    let mut rows = Vec::new();
    for j in 1..=jmax {
        let stated = stated_initial_slope(j, m);
        let corrected = initial_slope(j, m, Parity::Odd);
        let fd = finite_difference_slope(j, m, beta, Parity::Odd)?;
        let (end, terminated_by, error) = match trace_homotopy(j, m, m, steps) {
            Ok(p) => (Some(p.last()), Some(p.terminated_by), None),
            Err(e) => (None, None, Some(e.to_string())),
        };
        rows.push(HomotopyRow {
            j,
            stated_slope: stated,
            corrected_slope: corrected,
            fd_slope: fd,
            stated_relative_error: rel_err(fd, stated),
            corrected_relative_error: rel_err(fd, corrected),
            end,
            terminated_by,
            error,
        });
    }
    Ok(rows)
}

pub fn cmd_homotopy(args: &HomotopyArgs) -> CmdResult {
    no_svg(args.output.format, "homotopy")?;
    let sigma = parse_sigma(&args.sigma).map_err(ConfigError)?;
    let problem = normalize(&make_medium(&sigma, 1.0)?);
    let rows = homotopy_table(problem.m, args.jmax, args.beta, args.steps)?;
    let text = match args.output.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Config {
                sigma: f64,
                m: f64,
                beta: f64,
                steps: usize,
            }
            let config = Config {
                sigma: sigma.value(),
                m: problem.m,
                beta: args.beta,
                steps: args.steps,
            };
            to_json(&config, &rows, &serde_json::json!({ "paths": rows.len() }))
        }
        _ => {
            let mut t = Table::new([
                "j",
                "stated_slope",
                "corrected_slope",
                "fd_slope",
                "stated_relative_error",
                "corrected_relative_error",
                "end_beta",
                "end_re_z",
                "end_im_z",
                "terminated_by",
            ]);
            for r in &rows {
                let (b, z) = r.end.map_or((String::new(), (String::new(), String::new())), |(b, z)| {
                    (fmt_f64(b), (fmt_f64(z.re), fmt_f64(z.im)))
                });
                let term = match (r.terminated_by, &r.error) {
                    (Some(Termination::ReachedTarget), _) => "target".to_string(),
                    (Some(Termination::Collision), _) => "collision".to_string(),
                    (None, Some(e)) => format!("error: {e}"),
                    (None, None) => String::new(),
                };
                t.row([
                    r.j.to_string(),
                    fmt_f64(r.stated_slope),
                    fmt_f64(r.corrected_slope),
                    fmt_f64(r.fd_slope),
                    fmt_f64(r.stated_relative_error),
                    fmt_f64(r.corrected_relative_error),
                    b,
                    z.0,
                    z.1,
                    term,
                ]);
            }
            t.finish()
        }
    };
    emit(&text, args.output.out.as_deref())?;
    Ok(EXIT_OK)
}

/// Unit of `Re k` between guide lines: `2π/((σ+1)L)` for `σ > 1`.
pub fn guide_spacing(cfg: &RunConfig) -> f64 {
    cfg.problem.k_per_z() / cfg.problem.m
}
