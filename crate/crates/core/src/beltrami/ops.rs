//! Beltrami operators of the third fundamental form on a surface of
//! revolution.
//!
//! The production path uses the closed forms in terms of the tangent angle:
//!
//! ```text
//! ∇(u, w) = u_s w_s / phi'^2 + u_t w_t / sin^2 phi
//! Δu      = -u_ss / phi'^2 + (phi''/phi'^2 - cot phi) u_s / phi' - u_tt / sin^2 phi
//! ```
//!
//! [`delta3_general`] evaluates `-(1/√e) ∂_j(√e e^{ij} ∂_i u)` for an arbitrary
//! 2×2 metric built from the Gauss map, and serves as an independent check.

use nalgebra::{Matrix2, Vector2, Vector3};
use rayon::prelude::*;
use serde::Serialize;

use super::field::ScalarField;
use crate::error::{Error, Result};
use crate::geometry::{ProfileCurve, ProfileState};
use crate::grid::{sample_grid, Exclusions, Grid};

/// First Beltrami operator ∇^III(u, w).
pub fn nabla3(
    p: &ProfileCurve,
    s: f64,
    theta: f64,
    u: &ScalarField,
    w: &ScalarField,
) -> Result<f64> {
    let st = p.regular_state(s)?;
    nabla3_at(p, &st, theta, u, w)
}

pub(crate) fn nabla3_at(
    p: &ProfileCurve,
    st: &ProfileState,
    theta: f64,
    u: &ScalarField,
    w: &ScalarField,
) -> Result<f64> {
    let du = u.partials(p, st, theta)?;
    let dw = w.partials(p, st, theta)?;
    let e11 = st.dphi * st.dphi;
    let e22 = st.sin_phi() * st.sin_phi();
    Ok(du.u_s * dw.u_s / e11 + du.u_t * dw.u_t / e22)
}

/// Second Beltrami operator Δ^III u, specialized to revolution surfaces.
pub fn delta3_scalar(p: &ProfileCurve, s: f64, theta: f64, u: &ScalarField) -> Result<f64> {
    let st = p.regular_state(s)?;
    delta3_scalar_at(p, &st, theta, u)
}

pub(crate) fn delta3_scalar_at(
    p: &ProfileCurve,
    st: &ProfileState,
    theta: f64,
    u: &ScalarField,
) -> Result<f64> {
    let d = u.partials(p, st, theta)?;
    let u_ss = d
        .u_ss
        .ok_or_else(|| Error::InsufficientOrder(u.to_string()))?;
    let (dphi, ddphi) = (st.dphi, st.ddphi);
    let (sin_phi, cos_phi) = (st.sin_phi(), st.cos_phi());
    let dphi2 = dphi * dphi;
    Ok(
        -u_ss / dphi2 + (ddphi / dphi2 - cos_phi / sin_phi) * d.u_s / dphi
            - d.u_tt / (sin_phi * sin_phi),
    )
}

/// Metric `e_ij = <n_i, n_j>` of the Gauss map with its partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussMapMetric {
    pub e: Matrix2<f64>,
    pub de_ds: Matrix2<f64>,
    pub de_dt: Matrix2<f64>,
}

impl GaussMapMetric {
    /// Built from `n = (-g' cos t, -g' sin t, f')` and its partials, using
    /// only the raw profile jets.
    pub fn at(st: &ProfileState, theta: f64) -> Self {
        let (sn, cs) = theta.sin_cos();
        let (f, g) = (st.f, st.g);
        let n_s = Vector3::new(-g.v2 * cs, -g.v2 * sn, f.v2);
        let n_t = Vector3::new(g.v1 * sn, -g.v1 * cs, 0.0);
        let n_ss = Vector3::new(-g.v3 * cs, -g.v3 * sn, f.v3);
        let n_st = Vector3::new(g.v2 * sn, -g.v2 * cs, 0.0);
        let n_tt = Vector3::new(g.v1 * cs, g.v1 * sn, 0.0);
        let sym = |a: f64, b: f64, c: f64| Matrix2::new(a, b, b, c);
        GaussMapMetric {
            e: sym(n_s.dot(&n_s), n_s.dot(&n_t), n_t.dot(&n_t)),
            de_ds: sym(
                2.0 * n_s.dot(&n_ss),
                n_ss.dot(&n_t) + n_s.dot(&n_st),
                2.0 * n_t.dot(&n_st),
            ),
            de_dt: sym(
                2.0 * n_s.dot(&n_st),
                n_st.dot(&n_t) + n_s.dot(&n_tt),
                2.0 * n_t.dot(&n_tt),
            ),
        }
    }
}

/// Δ u = -(1/√e) ∂_j(√e e^{ij} u_i) for a metric with known partials.
///
/// Expanded as `-[e^{ij} u_ij + (∂_j e^{ij}) u_i + e^{ij} u_i ∂_j ln √e]`.
pub fn beltrami_general(m: &GaussMapMetric, grad: Vector2<f64>, hess: Matrix2<f64>) -> Option<f64> {
    let inv = m.e.try_inverse()?;
    let partials = [m.de_ds, m.de_dt];
    let mut total = (inv * hess).trace();
    for (j, de) in partials.iter().enumerate() {
        let d_inv = -inv * de * inv;
        let dlog_sqrt_det = 0.5 * (inv * de).trace();
        for i in 0..2 {
            total += d_inv[(i, j)] * grad[i] + inv[(i, j)] * grad[i] * dlog_sqrt_det;
        }
    }
    Some(-total)
}

/// Δ^III u from the general-coordinates formula.
pub fn delta3_general(p: &ProfileCurve, s: f64, theta: f64, u: &ScalarField) -> Result<f64> {
    let st = p.regular_state(s)?;
    delta3_general_at(p, &st, theta, u)
}

pub(crate) fn delta3_general_at(
    p: &ProfileCurve,
    st: &ProfileState,
    theta: f64,
    u: &ScalarField,
) -> Result<f64> {
    let d = u.partials(p, st, theta)?;
    let u_ss = d
        .u_ss
        .ok_or_else(|| Error::InsufficientOrder(u.to_string()))?;
    let metric = GaussMapMetric::at(st, theta);
    let grad = Vector2::new(d.u_s, d.u_t);
    let hess = Matrix2::new(u_ss, d.u_st, d.u_st, d.u_tt);
    beltrami_general(&metric, grad, hess).ok_or(Error::Parabolic {
        s: st.s,
        dphi: st.dphi.abs(),
        sin_phi: st.sin_phi().abs(),
        tol: p.tol.parab,
    })
}

/// `(P1, P2)` with `Δ^III x = (P1 cos t, P1 sin t, P2)`.
pub fn p1_p2(p: &ProfileCurve, s: f64) -> Result<(f64, f64)> {
    let st = p.regular_state(s)?;
    Ok(p1_p2_at(&st))
}

pub(crate) fn p1_p2_at(st: &ProfileState) -> (f64, f64) {
    let (r, dr) = st.curvature_radius_sum();
    let (sin_phi, cos_phi) = (st.sin_phi(), st.cos_phi());
    (
        r * sin_phi - cos_phi / st.dphi * dr,
        -r * cos_phi - sin_phi / st.dphi * dr,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoordinateLaplacian {
    pub p1: f64,
    pub p2: f64,
    /// (Δx1, Δx2, Δx3)
    pub lap: [f64; 3],
}

pub fn delta3_coords(p: &ProfileCurve, s: f64, theta: f64) -> Result<CoordinateLaplacian> {
    let st = p.regular_state(s)?;
    Ok(delta3_coords_at(&st, theta))
}

pub(crate) fn delta3_coords_at(st: &ProfileState, theta: f64) -> CoordinateLaplacian {
    let (p1, p2) = p1_p2_at(st);
    let (sn, cs) = theta.sin_cos();
    CoordinateLaplacian {
        p1,
        p2,
        lap: [p1 * cs, p1 * sn, p2],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointResidual {
    pub s: f64,
    pub theta: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub max_residual: f64,
    pub n_points: usize,
    pub exclusions: Exclusions,
    #[serde(skip)]
    pub points: Vec<PointResidual>,
}

/// Δ^III x against ∇^III(R, n) - R n at every regular grid point.
pub fn verify_position_identity(p: &ProfileCurve, grid: &Grid) -> Result<IdentityReport> {
    let samples = sample_grid(p, grid)?;
    let r_field = ScalarField::curvature_radius_sum();
    let normals: Vec<ScalarField> = (0..3).map(ScalarField::normal).collect();
    let pts: Vec<_> = samples.points().collect();
    let points = pts
        .par_iter()
        .map(|&(st, theta)| -> Result<PointResidual> {
            let lhs = delta3_coords_at(st, theta).lap;
            let (r, _) = st.curvature_radius_sum();
            let mut sq = 0.0;
            for (i, n_i) in normals.iter().enumerate() {
                let n_val = n_i.partials(p, st, theta)?.u;
                let rhs = nabla3_at(p, st, theta, &r_field, n_i)? - r * n_val;
                sq += (lhs[i] - rhs).powi(2);
            }
            Ok(PointResidual {
                s: st.s,
                theta,
                residual: sq.sqrt(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IdentityReport {
        max_residual: points.iter().map(|r| r.residual).fold(0.0, f64::max),
        n_points: points.len(),
        exclusions: samples.exclusions,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beltrami::field::{Harmonic, Radial};
    use crate::expr::Params;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI, SQRT_2};

    fn catenoid() -> ProfileCurve {
        ProfileCurve::new("cat", "sqrt(1+s^2)", "asinh(s)", (-2.0, 2.0), Params::new()).unwrap()
    }

    fn sphere(r: f64) -> ProfileCurve {
        let params = [("r".to_string(), r)].into_iter().collect();
        ProfileCurve::new(
            "sph",
            "r*sin(s/r)",
            "-r*cos(s/r)",
            (0.05 * r, (PI - 0.05) * r),
            params,
        )
        .unwrap()
    }

    fn torus() -> ProfileCurve {
        ProfileCurve::new("tor", "3 + cos(s)", "sin(s)", (-PI, PI), Params::new())
            .unwrap()
            .with_excluded(vec![
                (-FRAC_PI_2 - 0.05, -FRAC_PI_2 + 0.05),
                (FRAC_PI_2 - 0.05, FRAC_PI_2 + 0.05),
            ])
            .unwrap()
    }

    #[test]
    fn nabla_examples() {
        let th = ScalarField::theta();
        assert_relative_eq!(nabla3(&sphere(1.0), FRAC_PI_2, 0.3, &th, &th).unwrap(), 1.0);
        let s = ScalarField::arclength();
        assert_eq!(nabla3(&torus(), 0.4, 1.0, &s, &th).unwrap(), 0.0);
        let r = ScalarField::curvature_radius_sum();
        let n3 = ScalarField::normal(2);
        assert!(nabla3(&sphere(1.0), 1.2, 0.5, &r, &n3).unwrap().abs() < 1e-14);
    }

    #[test]
    fn delta_of_height_on_catenoid_vanishes() {
        let u = ScalarField::coordinate(2);
        assert!(delta3_scalar(&catenoid(), 1.0, 0.0, &u).unwrap().abs() < 1e-14);
    }

    #[test]
    fn delta_of_height_on_sphere() {
        let u = ScalarField::coordinate(2);
        for s in [0.4, 1.0, 2.2] {
            assert_relative_eq!(
                delta3_scalar(&sphere(1.0), s, 0.7, &u).unwrap(),
                -2.0 * s.cos(),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn delta_of_constant() {
        let u = ScalarField::constant(3.5);
        assert_eq!(delta3_scalar(&torus(), 0.3, 0.1, &u).unwrap(), 0.0);
        assert!(delta3_general(&torus(), 0.3, 0.1, &u).unwrap().abs() < 1e-15);
    }

    #[test]
    fn p1_p2_catalog() {
        for s in [0.3, 1.5, 2.8] {
            let (p1, p2) = p1_p2(&sphere(1.0), s).unwrap();
            assert_relative_eq!(p1, 2.0 * s.sin(), epsilon = 1e-13);
            assert_relative_eq!(p2, -2.0 * s.cos(), epsilon = 1e-13);
        }
        for s in [-1.5, 0.0, 1.9] {
            let (p1, p2) = p1_p2(&catenoid(), s).unwrap();
            assert!(p1.abs() < 1e-13 && p2.abs() < 1e-13, "{p1} {p2}");
        }
        // R = 2 + 3/cos s, R' = 3 sin s / cos^2 s substituted by hand
        let (p1, p2) = p1_p2(&torus(), FRAC_PI_4).unwrap();
        assert_relative_eq!(p1, 6.0 + SQRT_2, max_relative = 1e-14);
        assert_relative_eq!(p2, SQRT_2, max_relative = 1e-14);
    }

    #[test]
    fn coords_laplacian() {
        let c = delta3_coords(&sphere(2.0), FRAC_PI_2 * 2.0, 0.0).unwrap();
        assert_relative_eq!(c.lap[0], 4.0, epsilon = 1e-13);
        assert!(c.lap[1].abs() < 1e-15);
        assert!(c.lap[2].abs() < 1e-13);
        let c = delta3_coords(&catenoid(), 0.7, 2.0).unwrap();
        assert!(c.lap.iter().all(|v| v.abs() < 1e-13));
        let c = delta3_coords(&torus(), FRAC_PI_4, 0.0).unwrap();
        assert_relative_eq!(c.lap[0], 6.0 + SQRT_2, max_relative = 1e-14);
        assert_relative_eq!(c.lap[2], SQRT_2, max_relative = 1e-14);
    }

    #[test]
    fn coordinate_laplacian_matches_scalar_operator() {
        let p = torus();
        for (s, t) in [(0.3, 0.2), (-2.0, 4.0), (2.9, 1.0)] {
            let c = delta3_coords(&p, s, t).unwrap();
            for i in 0..3 {
                let v = delta3_scalar(&p, s, t, &ScalarField::coordinate(i)).unwrap();
                assert_relative_eq!(c.lap[i], v, epsilon = 1e-12, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn eq2_on_catalog() {
        let g = Grid::new(32, 32).unwrap();
        assert!(
            verify_position_identity(&sphere(1.0), &g)
                .unwrap()
                .max_residual
                <= 1e-10
        );
        assert!(
            verify_position_identity(&catenoid(), &g)
                .unwrap()
                .max_residual
                <= 1e-10
        );
        let t = verify_position_identity(&torus(), &g).unwrap();
        assert!(t.max_residual <= 1e-8, "{}", t.max_residual);
        assert_eq!(t.n_points, 1024);
    }

    #[test]
    fn general_formula_agrees() {
        let g_field = ScalarField::coordinate(2);
        let v = delta3_general(&sphere(1.0), FRAC_PI_3, 0.0, &g_field).unwrap();
        assert_relative_eq!(v, -1.0, epsilon = 1e-13);
        let f_field = ScalarField::new(Radial::F, Harmonic::One);
        let a = delta3_general(&catenoid(), 1.0, 0.0, &f_field).unwrap();
        let b = delta3_scalar(&catenoid(), 1.0, 0.0, &f_field).unwrap();
        assert!((a - b).abs() <= 1e-10);
    }

    #[test]
    fn r_field_has_no_laplacian() {
        let err = delta3_scalar(&sphere(1.0), 1.0, 0.0, &ScalarField::curvature_radius_sum())
            .unwrap_err();
        assert!(matches!(err, Error::InsufficientOrder(_)));
    }

    #[test]
    fn parabolic_point_is_an_error() {
        let u = ScalarField::coordinate(0);
        assert!(matches!(
            delta3_scalar(&torus(), FRAC_PI_2, 0.0, &u),
            Err(Error::Parabolic { .. })
        ));
        assert!(matches!(
            nabla3(&torus(), FRAC_PI_2, 0.0, &u, &u),
            Err(Error::Parabolic { .. })
        ));
    }

    #[test]
    fn gauss_map_metric_matches_third_form() {
        let p = catenoid();
        let st = p.state(0.8).unwrap();
        let m = GaussMapMetric::at(&st, 1.3);
        assert_relative_eq!(m.e[(0, 0)], st.dphi * st.dphi, max_relative = 1e-14);
        assert_relative_eq!(m.e[(1, 1)], st.sin_phi().powi(2), max_relative = 1e-14);
        assert!(m.e[(0, 1)].abs() < 1e-15);
        assert!(m.de_dt.iter().all(|v| v.abs() < 1e-15));
    }
}
