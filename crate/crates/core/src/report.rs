//! Commands behind the `revtype` binary, as library functions that return a
//! rendered report and an exit code.
//!
//! Exit codes: 0 success or a definite verdict, 1 usage or input error,
//! 2 inconclusive or failed check.

use std::f64::consts::TAU;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::beltrami::{
    delta3_general, delta3_scalar, verify_position_identity, Harmonic, Radial, ScalarField,
};
use crate::catalog;
use crate::error::{Error, Result};
use crate::expr::{parse, Params};
use crate::finite_type::{
    case2_scan, evaluate_grid, fit_evaluation, reduced_rows, scan_points, Case2Certificate,
    FitReport, FitThresholds, RelationReport, ScanRange, Verdict, DEFAULT_SCAN_THRESHOLD,
};
use crate::geometry::{
    forms_at, validate_profile, ProfileCurve, ProfileFile, Tolerances, ValidationReport,
};
use crate::grid::{sample_grid, Exclusions, Grid};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

/// Samples used for profile validation before a fit.
pub const VALIDATION_SAMPLES: usize = 257;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceSource {
    Catalog { name: String, params: Params },
    File { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Allowed arclength defect |f'^2 + g'^2 - 1|.
    pub arc: f64,
    /// Parabolic cutoff on min(|phi'|, |sin phi|).
    pub parab: f64,
    /// Acceptance threshold for the fit (A = 0 or 2I, residual).
    pub fit: f64,
    /// Allowed off-diagonal entries and a11 - a22 split of the fitted A.
    pub structure: f64,
    /// Relative residual at or above which the fit is rejected.
    pub reject: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        let t = Tolerances::default();
        let f = FitThresholds::default();
        ToleranceConfig {
            arc: t.arc,
            parab: t.parab,
            fit: f.fit,
            structure: 1e-8,
            reject: f.reject,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::Usage(format!("unknown format `{s}` (json | csv)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub source: SurfaceSource,
    pub grid: Grid,
    pub tolerances: ToleranceConfig,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    /// Seed for randomized sampling (`verify eq9-vs-eq1`).
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            source: SurfaceSource::Catalog {
                name: "sphere".into(),
                params: Params::new(),
            },
            grid: Grid::default(),
            tolerances: ToleranceConfig::default(),
            output: None,
            format: OutputFormat::Json,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.grid.check()?;
        let t = &self.tolerances;
        for (name, v) in [
            ("arc", t.arc),
            ("parab", t.parab),
            ("fit", t.fit),
            ("structure", t.structure),
            ("reject", t.reject),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Usage(format!(
                    "tolerance {name} = {v} must be positive"
                )));
            }
        }
        Ok(())
    }

    /// Loads the surface with this config's tolerances, and returns the
    /// config with catalog defaults filled in.
    pub fn load_surface(&self) -> Result<(ProfileCurve, RunConfig)> {
        self.validate()?;
        let mut effective = self.clone();
        let profile = match &self.source {
            SurfaceSource::Catalog { name, params } => {
                let p = catalog::by_name(name, params)?.profile;
                effective.source = SurfaceSource::Catalog {
                    name: name.clone(),
                    params: p.params.clone(),
                };
                p
            }
            SurfaceSource::File { path } => ProfileCurve::load(path)?,
        };
        let tol = Tolerances {
            arc: self.tolerances.arc,
            parab: self.tolerances.parab,
        };
        Ok((profile.with_tolerances(tol), effective))
    }

    fn thresholds(&self) -> FitThresholds {
        FitThresholds {
            fit: self.tolerances.fit,
            reject: self.tolerances.reject,
        }
    }
}

/// A finished command: exit code, a one-line human summary and the report body.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub summary: String,
    pub body: String,
}

impl Outcome {
    /// Writes the body to `output`, or to stdout when `None`.
    pub fn emit(&self, output: Option<&PathBuf>) -> Result<()> {
        match output {
            Some(path) => std::fs::write(path, &self.body).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            }),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(self.body.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|source| Error::Io {
                        path: "<stdout>".into(),
                        source,
                    })
            }
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Serialize(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)
            .map_err(|e| Error::Serialize(e.to_string()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub command: &'static str,
    pub config: RunConfig,
    pub surface: ProfileFile,
    pub validation: ValidationReport,
    pub fit: FitReport,
    pub structure_ok: bool,
}

/// One grid sample of a fit, `residual = |Δx - A x|`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClassifyRow {
    pub s: f64,
    pub theta: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub lap1: f64,
    pub lap2: f64,
    pub lap3: f64,
    pub residual: f64,
}

/// Validates the profile, fits `A` and classifies it.
pub fn classify(cfg: &RunConfig) -> Result<Outcome> {
    let (profile, effective) = cfg.load_surface()?;
    let validation = validate_profile(&profile, VALIDATION_SAMPLES)?;
    if !validation.passed {
        return Err(Error::InvalidProfile(format!(
            "{}: {}",
            profile.name,
            validation.failures.join("; ")
        )));
    }
    let eval = evaluate_grid(&profile, &cfg.grid)?;
    let fit = fit_evaluation(&eval, cfg.thresholds());
    let structure_ok = fit.structure.within(cfg.tolerances.structure);
    let exit_code = if fit.verdict == Verdict::Inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    let summary = format!(
        "{}: {:?} (rel_residual {:.3e}, lambda {:.6}, mu {:.6}, {} points, {} excluded)",
        profile.name,
        fit.verdict,
        fit.rel_residual,
        fit.lambda,
        fit.mu,
        fit.n_points,
        fit.exclusions.total()
    );
    let body = match cfg.format {
        OutputFormat::Json => to_json(&ClassifyReport {
            command: "classify",
            config: effective,
            surface: profile.to_file(),
            validation,
            fit: fit.clone(),
            structure_ok,
        })?,
        OutputFormat::Csv => {
            let a = fit.a;
            let rows: Vec<ClassifyRow> = eval
                .samples
                .iter()
                .map(|p| {
                    let r: f64 = (0..3)
                        .map(|i| {
                            let ax: f64 = (0..3).map(|j| a[i][j] * p.x[j]).sum();
                            (p.lap[i] - ax).powi(2)
                        })
                        .sum();
                    ClassifyRow {
                        s: p.s,
                        theta: p.theta,
                        x1: p.x[0],
                        x2: p.x[1],
                        x3: p.x[2],
                        lap1: p.lap[0],
                        lap2: p.lap[1],
                        lap3: p.lap[2],
                        residual: r.sqrt(),
                    }
                })
                .collect();
            to_csv(&rows)?
        }
    };
    Ok(Outcome {
        exit_code,
        summary,
        body,
    })
}

/// Residual checks available to `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Check {
    /// Δ^III x = ∇^III(R, n) - R n
    #[serde(rename = "eq2")]
    Eq2,
    /// 1/φ' + f/sin φ against 1/κ1 + 1/κ2
    #[serde(rename = "eq8")]
    Eq8,
    /// Specialized operator against the general-coordinates one
    #[serde(rename = "eq9-vs-eq1")]
    Eq9VsEq1,
    /// The reduced system for A = diag(λ, λ, μ)
    #[serde(rename = "eq14")]
    Eq14,
    /// R' = (λ - μ)/2 sin φ cos φ
    #[serde(rename = "eq15")]
    Eq15,
}

impl Check {
    pub const ALL: [Check; 5] = [
        Check::Eq2,
        Check::Eq8,
        Check::Eq9VsEq1,
        Check::Eq14,
        Check::Eq15,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Eq2 => "eq2",
            Check::Eq8 => "eq8",
            Check::Eq9VsEq1 => "eq9-vs-eq1",
            Check::Eq14 => "eq14",
            Check::Eq15 => "eq15",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Check::Eq8 => 1e-10,
            _ => 1e-8,
        }
    }

    fn residual_kind(self) -> &'static str {
        match self {
            Check::Eq2 => "absolute: |lap x - (nabla(R, n) - R n)|",
            Check::Eq8 => "relative: |R - (k1+k2)/(k1 k2)| / (|1/k1| + |1/k2|)",
            Check::Eq9VsEq1 => "relative: |general - specialized| / (1 + |specialized|)",
            Check::Eq14 => "absolute: max of both reduced-equation residuals",
            Check::Eq15 => "absolute: |R' - (lambda-mu)/2 sin phi cos phi|",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown check `{s}` (eq2 | eq8 | eq9-vs-eq1 | eq14 | eq15)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub check: Check,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    /// Overrides the check's default tolerance.
    pub tol: Option<f64>,
    /// Random field/point pairs for eq9-vs-eq1.
    pub samples: usize,
}

impl VerifyOptions {
    pub fn new(check: Check) -> Self {
        VerifyOptions {
            check,
            lambda: None,
            mu: None,
            tol: None,
            samples: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerifyRow {
    pub s: f64,
    /// Empty for checks that depend on s only.
    pub theta: Option<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub config: RunConfig,
    pub options: VerifyOptions,
    pub surface: ProfileFile,
    pub tolerance: f64,
    pub residual_kind: &'static str,
    pub max_residual: f64,
    pub n_points: usize,
    pub exclusions: Option<Exclusions>,
    pub passed: bool,
    pub derivative_relation: Option<RelationReport>,
    pub diagnostic: Option<String>,
}

const RANDOM_RADIALS: [&str; 6] = [
    "s^2",
    "sin(s)",
    "exp(s/4)",
    "cos(2*s)",
    "s^3 - s",
    "1/(2 + s^2)",
];

/// A random separable field: one to three terms mixing profile, normal and
/// expression factors with low harmonics.
pub fn random_field<R: Rng + ?Sized>(rng: &mut R) -> ScalarField {
    let n_terms = rng.random_range(1..=3);
    let mut field = ScalarField::constant(0.0);
    for _ in 0..n_terms {
        let radial = match rng.random_range(0..7) {
            0 => Radial::F,
            1 => Radial::G,
            2 => Radial::NormalRadial,
            3 => Radial::NormalAxial,
            4 => Radial::Arclength,
            5 => Radial::Constant(rng.random_range(-2.0..2.0)),
            _ => Radial::Expr(
                parse(RANDOM_RADIALS[rng.random_range(0..RANDOM_RADIALS.len())])
                    .expect("fixed expression"),
            ),
        };
        let harmonic = match rng.random_range(0..4) {
            0 => Harmonic::One,
            1 => Harmonic::Cos(rng.random_range(1..=3)),
            2 => Harmonic::Sin(rng.random_range(1..=3)),
            _ => Harmonic::Angle,
        };
        let coeff: f64 = rng.random_range(-2.0..2.0);
        field = field + coeff * ScalarField::new(radial, harmonic);
    }
    field
}

/// A uniformly drawn `(s, θ)` at a regular, non-excluded point of the profile.
pub fn random_point<R: Rng + ?Sized>(p: &ProfileCurve, rng: &mut R) -> Result<(f64, f64)> {
    for _ in 0..10_000 {
        let s = rng.random_range(p.s_min..p.s_max);
        if p.is_excluded(s) || p.regular_state(s).is_err() {
            continue;
        }
        return Ok((s, rng.random_range(0.0..TAU)));
    }
    Err(Error::InvalidProfile(format!(
        "{}: no regular point found by sampling",
        p.name
    )))
}

fn require(v: Option<f64>, name: &str, check: Check) -> Result<f64> {
    v.ok_or_else(|| Error::Usage(format!("{check} needs --{name}")))
}

/// Runs one residual check over the grid.
pub fn verify(cfg: &RunConfig, opts: &VerifyOptions) -> Result<Outcome> {
    let (profile, effective) = cfg.load_surface()?;
    let check = opts.check;
    let tol = opts.tol.unwrap_or(check.default_tolerance());
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Usage(format!("tolerance {tol} must be positive")));
    }
    let mut exclusions = None;
    let mut relation = None;
    let mut diagnostic = None;
    let rows: Vec<VerifyRow> = match check {
        Check::Eq2 => {
            let rep = verify_position_identity(&profile, &cfg.grid)?;
            exclusions = Some(rep.exclusions);
            rep.points
                .iter()
                .map(|r| VerifyRow {
                    s: r.s,
                    theta: Some(r.theta),
                    residual: r.residual,
                })
                .collect()
        }
        Check::Eq8 => {
            let samples = sample_grid(&profile, &cfg.grid)?;
            exclusions = Some(samples.exclusions);
            samples
                .s_values()
                .into_iter()
                .map(|s| {
                    let fc = forms_at(&profile, s)?;
                    let (k1, k2) = fc.principal();
                    let oracle = (k1 + k2) / (k1 * k2);
                    let scale = (1.0 / k1).abs() + (1.0 / k2).abs();
                    Ok(VerifyRow {
                        s,
                        theta: None,
                        residual: (fc.r - oracle).abs() / scale,
                    })
                })
                .collect::<Result<_>>()?
        }
        Check::Eq9VsEq1 => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..opts.samples)
                .map(|_| {
                    let u = random_field(&mut rng);
                    let (s, theta) = random_point(&profile, &mut rng)?;
                    let spec = delta3_scalar(&profile, s, theta, &u)?;
                    let gen = delta3_general(&profile, s, theta, &u)?;
                    Ok(VerifyRow {
                        s,
                        theta: Some(theta),
                        residual: (gen - spec).abs() / (1.0 + spec.abs()),
                    })
                })
                .collect::<Result<_>>()?
        }
        Check::Eq14 | Check::Eq15 => {
            let lambda = require(opts.lambda, "lambda", check)?;
            let mu = require(opts.mu, "mu", check)?;
            let samples = sample_grid(&profile, &cfg.grid)?;
            exclusions = Some(samples.exclusions);
            let rows = reduced_rows(&profile, lambda, mu, &samples.s_values())?;
            if check == Check::Eq15 {
                let reduced = rows
                    .iter()
                    .map(|r| r.reduced_r.max(r.reduced_dr))
                    .fold(0.0, f64::max);
                let report = RelationReport {
                    defect: rows.iter().map(|r| r.relation_defect).fold(0.0, f64::max),
                    reduced_residual: reduced,
                    applicable: reduced <= tol,
                };
                if !report.applicable {
                    diagnostic = Some(format!(
                        "reduced equations fail (residual {reduced:.3e}), so the derivative relation need not hold"
                    ));
                }
                relation = Some(report);
            }
            rows.iter()
                .map(|r| VerifyRow {
                    s: r.s,
                    theta: None,
                    residual: if check == Check::Eq14 {
                        r.reduced_r.max(r.reduced_dr)
                    } else {
                        r.relation_defect
                    },
                })
                .collect()
        }
    };
    let max_residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    if rows.is_empty() {
        diagnostic = Some("no regular sample points".into());
    }
    let applicable = relation.is_none_or(|e| e.applicable);
    let passed = !rows.is_empty() && applicable && max_residual <= tol;
    let exit_code = if passed { EXIT_OK } else { EXIT_INCONCLUSIVE };
    let summary = format!(
        "{} {}: max residual {:.3e} over {} points (tolerance {:.1e}) {}",
        check,
        profile.name,
        max_residual,
        rows.len(),
        tol,
        if passed {
            "PASS"
        } else if !applicable {
            "NOT APPLICABLE"
        } else {
            "FAIL"
        }
    );
    let body = match cfg.format {
        OutputFormat::Json => to_json(&VerifyReport {
            command: "verify",
            config: effective,
            options: *opts,
            surface: profile.to_file(),
            tolerance: tol,
            residual_kind: check.residual_kind(),
            max_residual,
            n_points: rows.len(),
            exclusions,
            passed,
            derivative_relation: relation,
            diagnostic,
        })?,
        OutputFormat::Csv => to_csv(&rows)?,
    };
    Ok(Outcome {
        exit_code,
        summary,
        body,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case2Config {
    pub range: ScanRange,
    pub threshold: f64,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for Case2Config {
    fn default() -> Self {
        Case2Config {
            range: ScanRange::default(),
            threshold: DEFAULT_SCAN_THRESHOLD,
            output: None,
            format: OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Case2Report {
    pub command: &'static str,
    pub config: Case2Config,
    pub certificate: Case2Certificate,
    /// Scan bounded away from zero, interval bound positive on the whole box,
    /// and the μ = 0 branch contradicted.
    pub certified: bool,
}

/// Scans `(λ, μ)` and writes the certificate, or the scanned points as CSV.
pub fn case2(cfg: &Case2Config) -> Result<Outcome> {
    let certificate = case2_scan(&cfg.range, cfg.threshold)?;
    let certified = certificate.bounded_away
        && certificate.reduced_box.certified
        && certificate.mu_zero.contradiction;
    let summary = match certificate.argmin {
        Some(b) => format!(
            "case2: {} points, min max(|c4|,|c2|,|c0|) = {} at (lambda, mu) = ({}, {}); certified = {}",
            certificate.points_scanned, b.max_abs, b.lambda, b.mu, certified
        ),
        None => format!(
            "case2: no off-diagonal points ({} skipped); certified = false",
            certificate.diagonal_skipped
        ),
    };
    let body = match cfg.format {
        OutputFormat::Json => to_json(&Case2Report {
            command: "case2",
            config: cfg.clone(),
            certificate,
            certified,
        })?,
        OutputFormat::Csv => to_csv(&scan_points(&cfg.range)?.0)?,
    };
    Ok(Outcome {
        exit_code: if certified {
            EXIT_OK
        } else {
            EXIT_INCONCLUSIVE
        },
        summary,
        body,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogListing {
    pub name: &'static str,
    pub doc: &'static str,
    pub valid: bool,
    pub profile: ProfileFile,
    pub known_truth: catalog::KnownTruth,
}

/// All catalog entries with default parameters, as JSON.
pub fn catalog_list() -> Result<String> {
    let entries: Vec<CatalogListing> = catalog::all_entries()?
        .into_iter()
        .map(|e| CatalogListing {
            name: e.name,
            doc: e.doc,
            valid: e.valid,
            profile: e.profile.to_file(),
            known_truth: e.known_truth,
        })
        .collect();
    to_json(&entries)
}

/// A catalog entry in the profile file format.
pub fn catalog_export(name: &str, params: &Params) -> Result<String> {
    catalog::by_name(name, params)?.profile.to_toml_string()
}

/// Sizes the global worker pool from `REVTYPE_THREADS`, if set.
pub fn configure_threads() -> Result<Option<usize>> {
    let Ok(text) = std::env::var("REVTYPE_THREADS") else {
        return Ok(None);
    };
    let n: usize = text.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Error::Usage(format!(
            "REVTYPE_THREADS = `{text}` is not a positive integer"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Usage(format!("cannot size worker pool: {e}")))?;
    Ok(Some(n))
}

/// Parses `key=value` into a parameter binding.
pub fn parse_param(text: &str) -> Result<(String, f64)> {
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| Error::Usage(format!("parameter `{text}` is not key=value")))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| Error::Usage(format!("parameter `{text}` has a non-numeric value")))?;
    Ok((k.trim().to_string(), v))
}

/// Parses `lo:hi` or a single value.
pub fn parse_range(text: &str) -> Result<(f64, f64)> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::Usage(format!("range `{text}` is not lo:hi")))
    };
    match text.split_once(':') {
        Some((a, b)) => Ok((num(a)?, num(b)?)),
        None => {
            let v = num(text)?;
            Ok((v, v))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog_cfg(name: &str, params: &[(&str, f64)]) -> RunConfig {
        RunConfig {
            source: SurfaceSource::Catalog {
                name: name.into(),
                params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            },
            ..RunConfig::default()
        }
    }

    #[test]
    fn classify_exit_codes() {
        let out = classify(&catalog_cfg("sphere", &[("r", 1.0)])).unwrap();
        assert_eq!(out.exit_code, EXIT_OK);
        assert!(out.body.contains("\"SphereType\""));
        let out = classify(&catalog_cfg("catenoid", &[])).unwrap();
        assert!(out.body.contains("\"NullType\""));
        let err = classify(&catalog_cfg("broken-line", &[])).unwrap_err();
        assert!(matches!(err, Error::InvalidProfile(_)));
    }

    #[test]
    fn effective_config_expands_defaults() {
        let out = classify(&catalog_cfg("torus", &[("R", 4.0)])).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.body).unwrap();
        assert_eq!(v["config"]["source"]["params"]["r"], 1.0);
        assert_eq!(v["config"]["source"]["params"]["R"], 4.0);
        assert_eq!(v["config"]["grid"]["n_s"], 32);
        assert_eq!(v["fit"]["verdict"], "NotCoordinateFiniteType");
    }

    #[test]
    fn verify_checks() {
        let cfg = catalog_cfg("sphere", &[("r", 2.0)]);
        let out = verify(&cfg, &VerifyOptions::new(Check::Eq8)).unwrap();
        assert_eq!(out.exit_code, EXIT_OK, "{}", out.summary);

        let cfg = catalog_cfg("catenoid", &[]);
        let mut opts = VerifyOptions::new(Check::Eq15);
        opts.lambda = Some(0.0);
        opts.mu = Some(0.0);
        let out = verify(&cfg, &opts).unwrap();
        assert_eq!(out.exit_code, EXIT_OK, "{}", out.summary);

        let cfg = catalog_cfg("torus", &[]);
        opts.lambda = Some(2.0);
        opts.mu = Some(2.0);
        let out = verify(&cfg, &opts).unwrap();
        assert_eq!(out.exit_code, EXIT_INCONCLUSIVE);
        assert!(out.summary.contains("NOT APPLICABLE"));

        let err = verify(&cfg, &VerifyOptions::new(Check::Eq14)).unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
    }

    #[test]
    fn random_pairs_are_seeded() {
        let mut cfg = catalog_cfg("torus", &[]);
        let mut opts = VerifyOptions::new(Check::Eq9VsEq1);
        opts.samples = 50;
        let a = verify(&cfg, &opts).unwrap();
        let b = verify(&cfg, &opts).unwrap();
        assert_eq!(a.body, b.body);
        assert_eq!(a.exit_code, EXIT_OK, "{}", a.summary);
        cfg.seed = 7;
        cfg.format = OutputFormat::Csv;
        let c = verify(&cfg, &opts).unwrap();
        assert_eq!(c.body.lines().count(), 51);
        assert!(c.body.starts_with("s,theta,residual"));
    }

    #[test]
    fn case2_single_points() {
        let mut cfg = Case2Config::default();
        cfg.range.lambda = (0.0, 0.0);
        cfg.range.mu = (2.0, 2.0);
        let out = case2(&cfg).unwrap();
        assert_eq!(out.exit_code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out.body).unwrap();
        assert_eq!(v["certificate"]["argmin"]["c0"], 12.0);

        cfg.range.lambda = (1.0, 1.0);
        cfg.range.mu = (1.0, 1.0);
        let out = case2(&cfg).unwrap();
        assert_eq!(out.exit_code, EXIT_INCONCLUSIVE);
        let v: serde_json::Value = serde_json::from_str(&out.body).unwrap();
        assert_eq!(v["certificate"]["diagonal_skipped"], 1);

        cfg.range.lambda = (1.0, 0.0);
        assert!(matches!(case2(&cfg), Err(Error::InvalidRange(_))));
    }

    #[test]
    fn argument_parsing() {
        assert_eq!(parse_param("R=3").unwrap(), ("R".into(), 3.0));
        assert!(parse_param("R").is_err());
        assert!(parse_param("R=x").is_err());
        assert_eq!(parse_range("-10:10").unwrap(), (-10.0, 10.0));
        assert_eq!(parse_range("2").unwrap(), (2.0, 2.0));
        assert!("eq9-vs-eq1".parse::<Check>().is_ok());
        assert!("eq3".parse::<Check>().is_err());
        assert!("xml".parse::<OutputFormat>().is_err());
    }

    #[test]
    fn bad_config_rejected() {
        let mut cfg = RunConfig::default();
        cfg.grid.n_theta = 3;
        assert!(classify(&cfg).is_err());
        let mut cfg = RunConfig::default();
        cfg.tolerances.fit = 0.0;
        assert!(matches!(classify(&cfg), Err(Error::Usage(_))));
    }
}
