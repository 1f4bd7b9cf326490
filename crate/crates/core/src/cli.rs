//! Command-line front end. Every command returns an [`Outcome`] instead of
//! printing, so the binary and the tests share one code path.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::{Biquaternion, Quaternion};
use crate::calculus::fc_eval;
use crate::cauchy::{self, cauchy_transform, default_contour, taylor_eval, CauchyResult};
use crate::error::Error;
use crate::slice::{self, RegularityReport, SliceCheckConfig, SliceFunction};
use crate::spectral::Spectrum;
use crate::stem::{stem_residual, verify_stem, StemFunctionSpec, DEFAULT_STEM_GRID};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NO_CONVERGENCE: i32 = 4;

/// Relative size of the `i`-part below which a value counts as a quaternion.
pub const QUATERNION_TOL: f64 = 1e-10;
/// Tolerance of the sampled stem check.
pub const STEM_TOL: f64 = 1e-12;

#[derive(Parser, Debug)]
#[command(
    name = "quatcalc",
    version,
    about = "Spectral functional calculus for quaternions"
)]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Spectral,
    Cauchy,
    Taylor,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    Stem,
    Regular,
    Equivalence,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print σ(q) for q = w + x·j + y·k + z·l.
    Spectrum {
        #[arg(allow_negative_numbers = true)]
        w: f64,
        #[arg(allow_negative_numbers = true)]
        x: f64,
        #[arg(allow_negative_numbers = true)]
        y: f64,
        #[arg(allow_negative_numbers = true)]
        z: f64,
    },
    /// Evaluate F_ℍ(q) by one route or all three.
    Eval(EvalArgs),
    /// Cauchy transform of F at q on the default contour.
    Cauchy(CauchyArgs),
    /// Stem, slice-regularity or equivalence check of a spec.
    Check(CheckArgs),
    /// Slice-regularity report of q ↦ F_ℍ(q).
    CheckRegular(RegularArgs),
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, num_args = 4, allow_negative_numbers = true, value_names = ["W", "X", "Y", "Z"])]
    pub q: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Route::Spectral)]
    pub route: Route,
    /// Real expansion point of the Taylor route; defaults to ℜq.
    #[arg(long, allow_negative_numbers = true)]
    pub s0: Option<f64>,
    #[arg(long, default_value_t = 40)]
    pub terms: usize,
    #[arg(long, default_value_t = cauchy::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub nodes: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CauchyArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, num_args = 4, allow_negative_numbers = true, value_names = ["W", "X", "Y", "Z"])]
    pub q: Vec<f64>,
    #[arg(long, default_value_t = cauchy::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = cauchy::DEFAULT_NODES)]
    pub nodes: usize,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, value_enum)]
    pub what: What,
    #[command(flatten)]
    pub sampling: Sampling,
}

#[derive(Args, Debug)]
pub struct RegularArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[command(flatten)]
    pub sampling: Sampling,
}

#[derive(Args, Debug, Clone)]
pub struct Sampling {
    /// Points per slice.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = slice::DEFAULT_H)]
    pub h: f64,
    #[arg(long, default_value_t = slice::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl Sampling {
    fn config(&self) -> SliceCheckConfig {
        SliceCheckConfig {
            samples: self.samples,
            h: self.h,
            tol: self.tol,
            seed: self.seed,
            random_slices: 0,
        }
    }
}

/// Exit code plus the text destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Self {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(code: i32, msg: impl std::fmt::Display) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::OutOfDomain(_)
        | Error::SpectrumOutsideDomain
        | Error::DegenerateDomain
        | Error::OutsideConvergenceDisk { .. }
        | Error::StencilOutsideDomain
        | Error::SeriesDivergence { .. } => EXIT_DOMAIN,
        Error::NoConvergence { .. } => EXIT_NO_CONVERGENCE,
        Error::InvalidSpec(_) | Error::InvalidArgument(_) => EXIT_PARSE,
        _ => EXIT_FAIL,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(code, text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    let fmt = cli.format;
    match &cli.command {
        Command::Spectrum { w, x, y, z } => cmd_spectrum(Quaternion::new(*w, *x, *y, *z), fmt),
        Command::Eval(a) => cmd_eval(a, fmt),
        Command::Cauchy(a) => cmd_cauchy(a, fmt),
        Command::Check(a) => cmd_check(a, fmt),
        Command::CheckRegular(a) => cmd_check_regular(a, fmt),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_row(out: &mut String, cells: &[String]) {
    out.push_str(&cells.join(","));
    out.push('\n');
}

/// Shortest round-trip form, as in the JSON output.
fn num(x: f64) -> String {
    serde_json::to_string(&x).expect("floats serialize")
}

fn bq_cells(v: &Biquaternion) -> Vec<String> {
    v.to_array().iter().map(|x| num(*x)).collect()
}

const BQ_HEADER: [&str; 8] = [
    "re_w", "re_x", "re_y", "re_z", "im_w", "im_x", "im_y", "im_z",
];

fn header(lead: &[&str], trail: &[&str]) -> Vec<String> {
    lead.iter()
        .chain(BQ_HEADER.iter())
        .chain(trail.iter())
        .map(|s| s.to_string())
        .collect()
}

fn quaternion_arg(q: &[f64]) -> std::result::Result<Quaternion, Outcome> {
    match q {
        [w, x, y, z] if q.iter().all(|v| v.is_finite()) => Ok(Quaternion::new(*w, *x, *y, *z)),
        _ => Err(Outcome::error(EXIT_PARSE, "--q expects four finite reals")),
    }
}

fn load_spec(path: &PathBuf) -> std::result::Result<StemFunctionSpec, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::error(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    StemFunctionSpec::from_json(&text).map_err(|e| Outcome::error(EXIT_PARSE, e))
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(o) => return o,
        }
    };
}

pub fn cmd_spectrum(q: Quaternion, fmt: Format) -> Outcome {
    if !q.is_finite() {
        return Outcome::error(EXIT_PARSE, "q must be finite");
    }
    let s = Spectrum::of(q);
    let out = match fmt {
        Format::Json => to_json(&s),
        Format::Csv => {
            let mut out = String::new();
            csv_row(
                &mut out,
                &[
                    "s_plus_re",
                    "s_plus_im",
                    "s_minus_re",
                    "s_minus_im",
                    "is_real",
                ]
                .map(String::from),
            );
            csv_row(
                &mut out,
                &[
                    num(s.s_plus.re),
                    num(s.s_plus.im),
                    num(s.s_minus.re),
                    num(s.s_minus.im),
                    s.is_real.to_string(),
                ],
            );
            out
        }
    };
    Outcome::ok(EXIT_OK, out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CauchyMeta {
    pub error_estimate: f64,
    pub nodes_used: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TaylorMeta {
    pub s0: f64,
    pub terms: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RouteValues {
    pub spectral: Biquaternion,
    pub cauchy: Biquaternion,
    pub taylor: Biquaternion,
}

/// Pairwise `cstar_norm` differences between the routes.
#[derive(Debug, Clone, Serialize)]
pub struct RouteDeltas {
    pub spectral_cauchy: f64,
    pub spectral_taylor: f64,
    pub cauchy_taylor: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub value: Biquaternion,
    pub is_quaternion: bool,
    pub spectrum: Spectrum,
    pub route: Route,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cauchy: Option<CauchyMeta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub taylor: Option<TaylorMeta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub routes: Option<RouteValues>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deltas: Option<RouteDeltas>,
}

fn run_cauchy(
    f: &StemFunctionSpec,
    q: Quaternion,
    tol: f64,
    nodes: Option<usize>,
) -> crate::Result<CauchyResult> {
    let mut contour = default_contour(q, &f.domain)?;
    if let Some(n) = nodes {
        contour = contour.with_nodes(n);
    }
    cauchy_transform(f, q, &contour, tol)
}

/// Evaluates `F_ℍ(q)` along the requested route(s).
pub fn eval_report(f: &StemFunctionSpec, q: Quaternion, a: &EvalArgs) -> crate::Result<EvalReport> {
    let spectrum = Spectrum::of(q);
    let s0 = a.s0.unwrap_or(q.re());
    let mut report = EvalReport {
        value: Biquaternion::ZERO,
        is_quaternion: false,
        spectrum,
        route: a.route,
        cauchy: None,
        taylor: None,
        routes: None,
        deltas: None,
    };
    let taylor_meta = TaylorMeta { s0, terms: a.terms };
    match a.route {
        Route::Spectral => report.value = fc_eval(f, q)?,
        Route::Cauchy => {
            let c = run_cauchy(f, q, a.tol, a.nodes)?;
            report.value = c.value;
            report.cauchy = Some(CauchyMeta {
                error_estimate: c.error_estimate,
                nodes_used: c.nodes_used,
            });
        }
        Route::Taylor => {
            report.value = taylor_eval(f, s0, q, a.terms)?;
            report.taylor = Some(taylor_meta);
        }
        Route::All => {
            let spectral = fc_eval(f, q)?;
            let c = run_cauchy(f, q, a.tol, a.nodes)?;
            let taylor = taylor_eval(f, s0, q, a.terms)?;
            report.value = spectral;
            report.cauchy = Some(CauchyMeta {
                error_estimate: c.error_estimate,
                nodes_used: c.nodes_used,
            });
            report.taylor = Some(taylor_meta);
            report.deltas = Some(RouteDeltas {
                spectral_cauchy: (spectral - c.value).cstar_norm(),
                spectral_taylor: (spectral - taylor).cstar_norm(),
                cauchy_taylor: (c.value - taylor).cstar_norm(),
            });
            report.routes = Some(RouteValues {
                spectral,
                cauchy: c.value,
                taylor,
            });
        }
    }
    let v = report.value;
    report.is_quaternion = v.im.norm() <= QUATERNION_TOL * v.cstar_norm().max(1.0);
    Ok(report)
}

pub fn cmd_eval(a: &EvalArgs, fmt: Format) -> Outcome {
    let q = tri!(quaternion_arg(&a.q));
    let f = tri!(load_spec(&a.spec));
    let report = match eval_report(&f, q, a) {
        Ok(r) => r,
        Err(e) => return Outcome::error(exit_code(&e), e),
    };
    let out = match fmt {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::new();
            csv_row(&mut out, &header(&["route"], &["is_quaternion"]));
            let mut row = |name: &str, v: &Biquaternion| {
                let mut cells = vec![name.to_string()];
                cells.extend(bq_cells(v));
                cells.push((v.im.norm() <= QUATERNION_TOL * v.cstar_norm().max(1.0)).to_string());
                csv_row(&mut out, &cells);
            };
            match &report.routes {
                Some(r) => {
                    row("spectral", &r.spectral);
                    row("cauchy", &r.cauchy);
                    row("taylor", &r.taylor);
                }
                None => {
                    let name = serde_json::to_value(report.route).expect("route serializes");
                    row(name.as_str().unwrap_or_default(), &report.value);
                }
            }
            out
        }
    };
    Outcome::ok(EXIT_OK, out)
}

pub fn cmd_cauchy(a: &CauchyArgs, fmt: Format) -> Outcome {
    let q = tri!(quaternion_arg(&a.q));
    let f = tri!(load_spec(&a.spec));
    let res = match run_cauchy(&f, q, a.tol, Some(a.nodes)) {
        Ok(r) => r,
        Err(e) => return Outcome::error(exit_code(&e), e),
    };
    let out = match fmt {
        Format::Json => to_json(&res),
        Format::Csv => {
            let mut out = String::new();
            csv_row(&mut out, &header(&[], &["error_estimate", "nodes_used"]));
            let mut cells = bq_cells(&res.value);
            cells.push(num(res.error_estimate));
            cells.push(res.nodes_used.to_string());
            csv_row(&mut out, &cells);
            out
        }
    };
    Outcome::ok(EXIT_OK, out)
}

#[derive(Debug, Clone, Serialize)]
pub struct StemReport {
    pub what: &'static str,
    /// Largest sampled `‖F(λ̄) - bar(F(λ))‖/(1 + ‖F(λ)‖)`.
    pub residual: f64,
    pub grid: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceSummary {
    pub what: &'static str,
    pub regularity: RegularityReport,
    pub roundtrip_errors: Vec<f64>,
    pub reconstructed_is_stem: bool,
    pub pass: bool,
}

fn pass_code(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn csv_report(pairs: &[(&str, String)]) -> String {
    let mut out = String::new();
    csv_row(
        &mut out,
        &pairs.iter().map(|(k, _)| k.to_string()).collect::<Vec<_>>(),
    );
    csv_row(
        &mut out,
        &pairs.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>(),
    );
    out
}

pub fn cmd_check(a: &CheckArgs, fmt: Format) -> Outcome {
    let f = tri!(load_spec(&a.spec));
    match a.what {
        What::Stem => {
            let residual = match stem_residual(&f, DEFAULT_STEM_GRID) {
                Ok(r) => r,
                Err(e) => return Outcome::error(exit_code(&e), e),
            };
            let report = StemReport {
                what: "stem",
                residual,
                grid: DEFAULT_STEM_GRID,
                pass: verify_stem(&f, DEFAULT_STEM_GRID, STEM_TOL),
            };
            let out = match fmt {
                Format::Json => to_json(&report),
                Format::Csv => csv_report(&[
                    ("what", "stem".into()),
                    ("residual", num(report.residual)),
                    ("grid", report.grid.to_string()),
                    ("pass", report.pass.to_string()),
                ]),
            };
            Outcome::ok(pass_code(report.pass), out)
        }
        What::Regular => regular(&f, &a.sampling, fmt),
        What::Equivalence => {
            let rep = match slice::equivalence_harness_with(&f, &a.sampling.config()) {
                Ok(r) => r,
                Err(e) => return Outcome::error(exit_code(&e), e),
            };
            let errors = rep
                .roundtrips
                .iter()
                .map(|r| r.slice_errors.iter().copied().fold(0.0, f64::max))
                .map(|e| if e.is_nan() { f64::INFINITY } else { e })
                .collect::<Vec<f64>>();
            let failed = rep.roundtrips.iter().any(|r| r.error.is_some());
            let summary = EquivalenceSummary {
                what: "equivalence",
                regularity: rep.regularity.clone(),
                roundtrip_errors: if failed { Vec::new() } else { errors },
                reconstructed_is_stem: rep.roundtrips.iter().all(|r| r.reconstructed_is_stem),
                pass: rep.pass,
            };
            let out = match fmt {
                Format::Json => to_json(&summary),
                Format::Csv => {
                    let worst = summary.roundtrip_errors.iter().copied().fold(0.0, f64::max);
                    csv_report(&[
                        ("what", "equivalence".into()),
                        ("max_residual", num(summary.regularity.max_residual)),
                        ("max_roundtrip_error", num(worst)),
                        (
                            "reconstructed_is_stem",
                            summary.reconstructed_is_stem.to_string(),
                        ),
                        ("pass", summary.pass.to_string()),
                    ])
                }
            };
            let mut o = Outcome::ok(pass_code(summary.pass), out);
            for r in rep.roundtrips.iter().filter_map(|r| r.error.as_ref()) {
                let _ = writeln!(o.stderr, "roundtrip: {r}");
            }
            o
        }
    }
}

fn regular(f: &StemFunctionSpec, s: &Sampling, fmt: Format) -> Outcome {
    let sf = match SliceFunction::from_spec(f) {
        Ok(sf) => sf,
        Err(e) => return Outcome::error(exit_code(&e), e),
    };
    let rep = slice::check_slice_regular_with(&sf, &s.config());
    let out = match fmt {
        Format::Json => to_json(&rep),
        Format::Csv => csv_report(&[
            ("max_residual", num(rep.max_residual)),
            ("h", num(rep.h)),
            ("samples", rep.samples.to_string()),
            ("pass", rep.pass.to_string()),
        ]),
    };
    Outcome::ok(pass_code(rep.pass), out)
}

pub fn cmd_check_regular(a: &RegularArgs, fmt: Format) -> Outcome {
    let f = tri!(load_spec(&a.spec));
    regular(&f, &a.sampling, fmt)
}
