use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{eval_jet3, parse, Expr, Jet3, Params};

/// Tolerances governing which profile points count as regular.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Allowed |f'^2 + g'^2 - 1|.
    pub arc: f64,
    /// Points with |phi'| or |sin phi| below this are treated as parabolic.
    pub parab: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            arc: 1e-8,
            parab: 1e-3,
        }
    }
}

/// Arclength-parametrized profile `r(s) = (f(s), 0, g(s))`, rotated about the
/// x3-axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    pub name: String,
    f_text: String,
    g_text: String,
    f: Expr,
    g: Expr,
    pub s_min: f64,
    pub s_max: f64,
    pub params: Params,
    pub excluded: Vec<(f64, f64)>,
    pub tol: Tolerances,
}

fn parse_named(text: &str) -> Result<Expr> {
    parse(text).map_err(|source| Error::Parse {
        text: text.to_string(),
        source,
    })
}

impl ProfileCurve {
    /// Builds a profile from expression text. All parameters referenced by
    /// `f` and `g` must be bound in `params`.
    pub fn new(
        name: impl Into<String>,
        f: &str,
        g: &str,
        domain: (f64, f64),
        params: Params,
    ) -> Result<Self> {
        let (s_min, s_max) = domain;
        if !(s_min.is_finite() && s_max.is_finite() && s_min < s_max) {
            return Err(Error::InvalidProfile(format!(
                "domain ({s_min}, {s_max}) is not a nonempty finite interval"
            )));
        }
        let (fe, ge) = (parse_named(f)?, parse_named(g)?);
        for p in fe.params().union(&ge.params()) {
            if !params.contains_key(p) {
                return Err(Error::InvalidProfile(format!(
                    "parameter `{p}` is not bound"
                )));
            }
        }
        Ok(ProfileCurve {
            name: name.into(),
            f_text: f.to_string(),
            g_text: g.to_string(),
            f: fe,
            g: ge,
            s_min,
            s_max,
            params,
            excluded: Vec::new(),
            tol: Tolerances::default(),
        })
    }

    pub fn with_excluded(mut self, intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &intervals {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::InvalidProfile(format!(
                    "excluded interval ({a}, {b}) is not a nonempty finite interval"
                )));
            }
        }
        self.excluded = intervals;
        Ok(self)
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn f_expr(&self) -> &Expr {
        &self.f
    }

    pub fn g_expr(&self) -> &Expr {
        &self.g
    }

    pub fn f_text(&self) -> &str {
        &self.f_text
    }

    pub fn g_text(&self) -> &str {
        &self.g_text
    }

    pub fn f_jet(&self, s: f64) -> Result<Jet3> {
        Ok(eval_jet3(&self.f, s, &self.params)?)
    }

    pub fn g_jet(&self, s: f64) -> Result<Jet3> {
        Ok(eval_jet3(&self.g, s, &self.params)?)
    }

    pub fn is_excluded(&self, s: f64) -> bool {
        self.excluded.iter().any(|&(a, b)| s > a && s < b)
    }

    pub fn to_file(&self) -> ProfileFile {
        ProfileFile {
            name: self.name.clone(),
            f: self.f_text.clone(),
            g: self.g_text.clone(),
            s_min: self.s_min,
            s_max: self.s_max,
            excluded_intervals: self.excluded.iter().map(|&(a, b)| [a, b]).collect(),
            params: self.params.clone(),
        }
    }

    pub fn from_file(file: &ProfileFile) -> Result<Self> {
        ProfileCurve::new(
            file.name.clone(),
            &file.f,
            &file.g,
            (file.s_min, file.s_max),
            file.params.clone(),
        )?
        .with_excluded(
            file.excluded_intervals
                .iter()
                .map(|i| (i[0], i[1]))
                .collect(),
        )
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ProfileFile = toml::from_str(text).map_err(|e| Error::ProfileFile {
            path: "<string>".into(),
            message: e.to_string(),
        })?;
        ProfileCurve::from_file(&file)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(&self.to_file()).map_err(|e| Error::Serialize(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let file: ProfileFile = toml::from_str(&text).map_err(|e| Error::ProfileFile {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        ProfileCurve::from_file(&file)
    }
}

/// On-disk profile definition (TOML).
///
/// ```toml
/// name = "catenoid"
/// f = "sqrt(c^2 + s^2)"
/// g = "c*asinh(s/c)"
/// s_min = -2.0
/// s_max = 2.0
/// excluded_intervals = []
///
/// [params]
/// c = 1.0
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    pub name: String,
    pub f: String,
    pub g: String,
    pub s_min: f64,
    pub s_max: f64,
    #[serde(default)]
    pub excluded_intervals: Vec<[f64; 2]>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

/// Sampled checks of the profile's standing assumptions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub n_samples: usize,
    pub n_checked: usize,
    pub n_skipped_excluded: usize,
    /// max |f'^2 + g'^2 - 1|
    pub max_arclength_defect: f64,
    /// min |f' g'|, informational only
    pub min_abs_fprime_gprime: f64,
    pub min_f: f64,
    /// min over samples of min(|phi'|, |sin phi|); zero means a parabolic point
    pub min_curvature_margin: f64,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Samples `n_samples` equally spaced points over the closed domain, skipping
/// declared excluded intervals.
pub fn validate_profile(p: &ProfileCurve, n_samples: usize) -> Result<ValidationReport> {
    if n_samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "validation needs at least 2 samples, got {n_samples}"
        )));
    }
    let mut rep = ValidationReport {
        n_samples,
        n_checked: 0,
        n_skipped_excluded: 0,
        max_arclength_defect: 0.0,
        min_abs_fprime_gprime: f64::INFINITY,
        min_f: f64::INFINITY,
        min_curvature_margin: f64::INFINITY,
        passed: false,
        failures: Vec::new(),
    };
    let h = (p.s_max - p.s_min) / (n_samples - 1) as f64;
    for k in 0..n_samples {
        let s = p.s_min + k as f64 * h;
        if p.is_excluded(s) {
            rep.n_skipped_excluded += 1;
            continue;
        }
        let f = p.f_jet(s)?;
        let g = p.g_jet(s)?;
        rep.n_checked += 1;
        let defect = (f.v1 * f.v1 + g.v1 * g.v1 - 1.0).abs();
        rep.max_arclength_defect = rep.max_arclength_defect.max(defect);
        rep.min_abs_fprime_gprime = rep.min_abs_fprime_gprime.min((f.v1 * g.v1).abs());
        rep.min_f = rep.min_f.min(f.v0);
        let dphi = f.v1 * g.v2 - g.v1 * f.v2;
        rep.min_curvature_margin = rep.min_curvature_margin.min(dphi.abs().min(g.v1.abs()));
    }
    if rep.n_checked == 0 {
        rep.failures
            .push("every sample lies in an excluded interval".into());
    }
    if rep.max_arclength_defect > p.tol.arc {
        rep.failures.push(format!(
            "not arclength-parametrized: max |f'^2+g'^2-1| = {:.3e} > {:.1e}",
            rep.max_arclength_defect, p.tol.arc
        ));
    }
    if rep.min_f <= 0.0 {
        rep.failures.push(format!(
            "profile touches or crosses the axis: min f = {:.3e}",
            rep.min_f
        ));
    }
    if rep.min_curvature_margin <= p.tol.parab {
        rep.failures.push(format!(
            "parabolic points: min(|phi'|, |sin phi|) = {:.3e} <= {:.1e}",
            rep.min_curvature_margin, p.tol.parab
        ));
    }
    rep.passed = rep.failures.is_empty();
    Ok(rep)
}
