//! Closed-form profiles with known answers, plus a deliberately broken one.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{parse, Expr, Params};
use crate::finite_type::Verdict;
use crate::geometry::ProfileCurve;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnownTruth {
    pub verdict: Option<Verdict>,
    #[serde(rename = "A")]
    pub a: Option<[[f64; 3]; 3]>,
    /// Mean curvature as an expression in `s` and the entry parameters.
    pub mean: Option<String>,
    pub gauss: Option<String>,
}

impl KnownTruth {
    pub fn mean_expr(&self) -> Option<Expr> {
        self.mean
            .as_deref()
            .map(|t| parse(t).expect("catalog expression"))
    }

    pub fn gauss_expr(&self) -> Option<Expr> {
        self.gauss
            .as_deref()
            .map(|t| parse(t).expect("catalog expression"))
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub profile: ProfileCurve,
    pub known_truth: KnownTruth,
    pub doc: &'static str,
    /// False only for negative-test profiles.
    pub valid: bool,
}

const ZERO: [[f64; 3]; 3] = [[0.0; 3]; 3];
const TWO_I: [[f64; 3]; 3] = [[2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 2.0]];

fn params(pairs: &[(&str, f64)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} = {v} must be positive"
        )))
    }
}

/// Catenary profile about the axis; minimal, so `Δ^III x = 0`.
pub fn catenoid(c: f64) -> Result<CatalogEntry> {
    positive("c", c)?;
    let profile = ProfileCurve::new(
        "catenoid",
        "sqrt(c^2 + s^2)",
        "c*asinh(s/c)",
        (-2.0 * c, 2.0 * c),
        params(&[("c", c)]),
    )?;
    Ok(CatalogEntry {
        name: "catenoid",
        profile,
        known_truth: KnownTruth {
            verdict: Some(Verdict::NullType),
            a: Some(ZERO),
            mean: Some("0".into()),
            gauss: Some("-c^2/(c^2 + s^2)^2".into()),
        },
        doc: "catenoid of neck radius c; H = 0 so A is the zero matrix",
        valid: true,
    })
}

/// Round sphere of radius `r`, with a collar of width `0.05 r` cut at each pole.
pub fn sphere(r: f64) -> Result<CatalogEntry> {
    positive("r", r)?;
    let profile = ProfileCurve::new(
        "sphere",
        "r*sin(s/r)",
        "-r*cos(s/r)",
        (0.05 * r, (PI - 0.05) * r),
        params(&[("r", r)]),
    )?;
    Ok(CatalogEntry {
        name: "sphere",
        profile,
        known_truth: KnownTruth {
            verdict: Some(Verdict::SphereType),
            a: Some(TWO_I),
            mean: Some("1/r".into()),
            gauss: Some("1/r^2".into()),
        },
        doc: "sphere of radius r without its poles; A = 2I",
        valid: true,
    })
}

/// Torus with tube radius `r` at distance `R` from the axis. The circles where
/// the tube meets its top and bottom planes are parabolic and cut out.
pub fn torus(major: f64, minor: f64) -> Result<CatalogEntry> {
    positive("r", minor)?;
    if !(major.is_finite() && major > minor) {
        return Err(Error::InvalidParameter(format!(
            "torus needs R > r > 0, got R = {major}, r = {minor}"
        )));
    }
    let half = 0.05 * minor;
    let q = 0.5 * PI * minor;
    let profile = ProfileCurve::new(
        "torus",
        "R + r*cos(s/r)",
        "r*sin(s/r)",
        (-PI * minor, PI * minor),
        params(&[("R", major), ("r", minor)]),
    )?
    .with_excluded(vec![(-q - half, -q + half), (q - half, q + half)])?;
    Ok(CatalogEntry {
        name: "torus",
        profile,
        known_truth: KnownTruth {
            verdict: Some(Verdict::NotCoordinateFiniteType),
            a: None,
            mean: Some("(1/r + cos(s/r)/(R + r*cos(s/r)))/2".into()),
            gauss: Some("cos(s/r)/(r*(R + r*cos(s/r)))".into()),
        },
        doc: "torus of revolution; not of finite type, used as a negative control",
        valid: true,
    })
}

/// `f = g = s`: speed sqrt(2), so it must fail arclength validation.
pub fn broken_line() -> Result<CatalogEntry> {
    let profile = ProfileCurve::new("broken-line", "s", "s", (0.5, 2.0), Params::new())?;
    Ok(CatalogEntry {
        name: "broken-line",
        profile,
        known_truth: KnownTruth {
            verdict: None,
            a: None,
            mean: None,
            gauss: None,
        },
        doc: "diagonal line f = g = s; not unit speed, rejected by validation",
        valid: false,
    })
}

/// Names of the valid entries, with their default parameters.
pub fn list() -> Vec<(&'static str, Params)> {
    vec![
        ("catenoid", params(&[("c", 1.0)])),
        ("sphere", params(&[("r", 1.0)])),
        ("torus", params(&[("R", 3.0), ("r", 1.0)])),
    ]
}

/// Every entry including negative controls, built with default parameters.
pub fn all_entries() -> Result<Vec<CatalogEntry>> {
    let mut out: Vec<CatalogEntry> = list()
        .into_iter()
        .map(|(n, p)| by_name(n, &p))
        .collect::<Result<_>>()?;
    out.push(broken_line()?);
    Ok(out)
}

/// Looks up an entry; parameters not given take their defaults.
pub fn by_name(name: &str, overrides: &Params) -> Result<CatalogEntry> {
    let defaults = match name {
        "broken-line" => Params::new(),
        _ => list()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, p)| p)
            .ok_or_else(|| Error::UnknownSurface(name.to_string()))?,
    };
    let mut p = defaults.clone();
    for (k, v) in overrides {
        if !defaults.contains_key(k) {
            return Err(Error::InvalidParameter(format!(
                "`{name}` has no parameter `{k}`"
            )));
        }
        p.insert(k.clone(), *v);
    }
    match name {
        "catenoid" => catenoid(p["c"]),
        "sphere" => sphere(p["r"]),
        "torus" => torus(p["R"], p["r"]),
        _ => broken_line(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::eval;
    use crate::geometry::{forms_at, validate_profile};
    use approx::assert_relative_eq;

    #[test]
    fn catenoid_values() {
        let e = catenoid(1.0).unwrap();
        assert_eq!(e.profile.f_jet(0.0).unwrap().v0, 1.0);
        assert_eq!(e.profile.g_jet(0.0).unwrap().v0, 0.0);
        let e = catenoid(2.0).unwrap();
        assert_relative_eq!(
            e.profile.f_jet(2.0).unwrap().v0,
            8f64.sqrt(),
            epsilon = 1e-15
        );
        assert!(catenoid(0.0).is_err());
        assert!(catenoid(-1.0).is_err());
    }

    #[test]
    fn sphere_values() {
        let e = sphere(1.0).unwrap();
        let fc = forms_at(&e.profile, PI / 2.0).unwrap();
        assert_relative_eq!(e.profile.f_jet(PI / 2.0).unwrap().v0, 1.0, epsilon = 1e-15);
        assert!(e.profile.g_jet(PI / 2.0).unwrap().v0.abs() < 1e-15);
        assert_relative_eq!(fc.mean, 1.0, epsilon = 1e-14);
        assert_relative_eq!(fc.gauss, 1.0, epsilon = 1e-14);
        let e = sphere(2.0).unwrap();
        for s in [0.3, 1.0, 3.0, 5.5] {
            assert_relative_eq!(forms_at(&e.profile, s).unwrap().r, 4.0, epsilon = 1e-12);
        }
        assert!(sphere(1.0).unwrap().profile.s_min > 0.0);
        assert!(sphere(-2.0).is_err());
    }

    #[test]
    fn torus_values() {
        let e = torus(3.0, 1.0).unwrap();
        let fc = forms_at(&e.profile, 0.0).unwrap();
        assert_relative_eq!(e.profile.f_jet(0.0).unwrap().v0, 4.0);
        assert_relative_eq!(fc.gauss, 0.25, epsilon = 1e-14);
        assert_relative_eq!(fc.mean, 0.625, epsilon = 1e-14);
        let fc = forms_at(&e.profile, PI / 4.0).unwrap();
        assert_relative_eq!(fc.r, 2.0 + 3.0 * 2f64.sqrt(), epsilon = 1e-12);
        assert!(torus(1.0, 2.0).is_err());
        assert!(torus(1.0, 1.0).is_err());
        assert!(torus(3.0, 0.0).is_err());
    }

    #[test]
    fn closed_forms_match_computed_curvatures() {
        for entry in all_entries().unwrap().into_iter().filter(|e| e.valid) {
            let (mean, gauss) = (
                entry.known_truth.mean_expr().unwrap(),
                entry.known_truth.gauss_expr().unwrap(),
            );
            let p = &entry.profile;
            for k in 0..17 {
                let s = p.s_min + (p.s_max - p.s_min) * (k as f64 + 0.5) / 17.0;
                if p.is_excluded(s) {
                    continue;
                }
                let fc = forms_at(p, s).unwrap();
                let h = eval(&mean, s, &p.params).unwrap();
                let kk = eval(&gauss, s, &p.params).unwrap();
                assert!(
                    (fc.mean - h).abs() <= 1e-12 * (1.0 + h.abs()),
                    "{} H at {s}",
                    entry.name
                );
                assert!(
                    (fc.gauss - kk).abs() <= 1e-12 * (1.0 + kk.abs()),
                    "{} K at {s}",
                    entry.name
                );
            }
        }
    }

    #[test]
    fn valid_entries_validate() {
        for entry in all_entries().unwrap() {
            let v = validate_profile(&entry.profile, 200).unwrap();
            assert_eq!(v.passed, entry.valid, "{}", entry.name);
            if entry.valid {
                assert!(v.max_arclength_defect <= 1e-10, "{}", entry.name);
            }
        }
    }

    #[test]
    fn lookup() {
        let e = by_name("torus", &params(&[("R", 5.0)])).unwrap();
        assert_eq!(e.profile.params["R"], 5.0);
        assert_eq!(e.profile.params["r"], 1.0);
        assert!(matches!(
            by_name("pseudosphere", &Params::new()),
            Err(Error::UnknownSurface(_))
        ));
        assert!(by_name("sphere", &params(&[("c", 1.0)])).is_err());
    }

    #[test]
    fn export_round_trip() {
        for entry in all_entries().unwrap() {
            let text = entry.profile.to_toml_string().unwrap();
            let back = ProfileCurve::from_toml_str(&text).unwrap();
            assert_eq!(back, entry.profile);
        }
    }
}
