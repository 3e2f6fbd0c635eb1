//! Residuals of the reduced system obtained from `Δ^III x = A x` once `A` is
//! known to be `diag(λ, λ, μ)`:
//!
//! ```text
//! P1 = λ f,  P2 = μ g                          (coordinate equations)
//! R  = λ f sin φ - μ g cos φ                   (first reduced equation)
//! R' = -φ'(λ f cos φ + μ g sin φ)              (second reduced equation)
//! R' = (λ - μ)/2 sin φ cos φ                   (derivative relation)
//! ```

use serde::Serialize;

use crate::beltrami::p1_p2_at;
use crate::error::Result;
use crate::geometry::{ProfileCurve, ProfileState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedResiduals {
    /// max of |P1 - λf| and |P2 - μg|
    pub coordinate: f64,
    /// max |R - (λ f sin φ - μ g cos φ)|
    pub reduced_r: f64,
    /// max |R' + φ'(λ f cos φ + μ g sin φ)|
    pub reduced_dr: f64,
}

impl ReducedResiduals {
    pub fn max(&self) -> f64 {
        self.coordinate.max(self.reduced_r).max(self.reduced_dr)
    }
}

/// Residuals at a single arclength value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedRow {
    pub s: f64,
    pub coordinate: f64,
    pub reduced_r: f64,
    pub reduced_dr: f64,
    pub dr: f64,
    pub relation_rhs: f64,
    pub relation_defect: f64,
}

pub(crate) fn reduced_row(st: &ProfileState, lambda: f64, mu: f64) -> ReducedRow {
    let (f, g) = (st.f.v0, st.g.v0);
    let (sin_phi, cos_phi) = (st.sin_phi(), st.cos_phi());
    let (p1, p2) = p1_p2_at(st);
    let (r, dr) = st.curvature_radius_sum();
    let rhs15 = 0.5 * (lambda - mu) * sin_phi * cos_phi;
    ReducedRow {
        s: st.s,
        coordinate: (p1 - lambda * f).abs().max((p2 - mu * g).abs()),
        reduced_r: (r - (lambda * f * sin_phi - mu * g * cos_phi)).abs(),
        reduced_dr: (dr + st.dphi * (lambda * f * cos_phi + mu * g * sin_phi)).abs(),
        dr,
        relation_rhs: rhs15,
        relation_defect: (dr - rhs15).abs(),
    }
}

/// Per-sample rows; every sample must be a regular point.
pub fn reduced_rows(
    p: &ProfileCurve,
    lambda: f64,
    mu: f64,
    s_samples: &[f64],
) -> Result<Vec<ReducedRow>> {
    s_samples
        .iter()
        .map(|&s| Ok(reduced_row(&p.regular_state(s)?, lambda, mu)))
        .collect()
}

pub fn reduced_residuals(
    p: &ProfileCurve,
    lambda: f64,
    mu: f64,
    s_samples: &[f64],
) -> Result<ReducedResiduals> {
    let rows = reduced_rows(p, lambda, mu, s_samples)?;
    Ok(rows.iter().fold(
        ReducedResiduals {
            coordinate: 0.0,
            reduced_r: 0.0,
            reduced_dr: 0.0,
        },
        |acc, r| ReducedResiduals {
            coordinate: acc.coordinate.max(r.coordinate),
            reduced_r: acc.reduced_r.max(r.reduced_r),
            reduced_dr: acc.reduced_dr.max(r.reduced_dr),
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelationReport {
    /// max |R' - (λ-μ)/2 sin φ cos φ|
    pub defect: f64,
    /// max of the two reduced-equation residuals the relation is derived from
    pub reduced_residual: f64,
    /// false when the reduced equations do not hold, so the relation need not
    pub applicable: bool,
}

/// Checks the derivative relation; it only follows from the reduced equations,
/// so it is flagged not applicable when their residual exceeds `applicability_tol`.
pub fn derivative_relation_check(
    p: &ProfileCurve,
    lambda: f64,
    mu: f64,
    s_samples: &[f64],
    applicability_tol: f64,
) -> Result<RelationReport> {
    let rows = reduced_rows(p, lambda, mu, s_samples)?;
    let defect = rows.iter().map(|r| r.relation_defect).fold(0.0, f64::max);
    let eq14 = rows
        .iter()
        .map(|r| r.reduced_r.max(r.reduced_dr))
        .fold(0.0, f64::max);
    Ok(RelationReport {
        defect,
        reduced_residual: eq14,
        applicable: eq14 <= applicability_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Params;
    use crate::Error;
    use std::f64::consts::PI;

    fn samples(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| a + (b - a) * (k as f64 + 0.5) / n as f64)
            .collect()
    }

    fn sphere() -> ProfileCurve {
        ProfileCurve::new("sph", "sin(s)", "-cos(s)", (0.05, PI - 0.05), Params::new()).unwrap()
    }

    fn catenoid() -> ProfileCurve {
        ProfileCurve::new("cat", "sqrt(1+s^2)", "asinh(s)", (-2.0, 2.0), Params::new()).unwrap()
    }

    fn torus() -> ProfileCurve {
        ProfileCurve::new("tor", "3 + cos(s)", "sin(s)", (-PI, PI), Params::new()).unwrap()
    }

    #[test]
    fn sphere_satisfies_reduced_system() {
        let r = reduced_residuals(&sphere(), 2.0, 2.0, &samples(0.1, 3.0, 40)).unwrap();
        assert!(r.max() <= 1e-10, "{r:?}");
    }

    #[test]
    fn catenoid_satisfies_reduced_system() {
        let r = reduced_residuals(&catenoid(), 0.0, 0.0, &samples(-1.9, 1.9, 40)).unwrap();
        assert!(r.max() <= 1e-10, "{r:?}");
    }

    #[test]
    fn torus_fails() {
        let r = reduced_residuals(&torus(), 2.0, 2.0, &samples(-1.4, 1.4, 40)).unwrap();
        assert!(r.coordinate > 0.1, "{r:?}");
    }

    #[test]
    fn derivative_relation() {
        let e =
            derivative_relation_check(&sphere(), 2.0, 2.0, &samples(0.1, 3.0, 40), 1e-8).unwrap();
        assert!(e.applicable && e.defect <= 1e-10);
        let e = derivative_relation_check(&catenoid(), 0.0, 0.0, &samples(-1.9, 1.9, 40), 1e-8)
            .unwrap();
        assert!(e.applicable && e.defect <= 1e-10);
        let e =
            derivative_relation_check(&torus(), 3.0, 1.0, &samples(-1.4, 1.4, 40), 1e-8).unwrap();
        assert!(!e.applicable);
        assert!(e.defect > 0.0);
    }

    #[test]
    fn parabolic_sample_is_an_error() {
        let err = reduced_residuals(&torus(), 2.0, 2.0, &[PI / 2.0]).unwrap_err();
        assert!(matches!(err, Error::Parabolic { .. }));
    }
}
