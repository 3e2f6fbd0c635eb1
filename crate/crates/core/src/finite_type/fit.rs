use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beltrami::delta3_coords_at;
use crate::error::Result;
use crate::geometry::ProfileCurve;
use crate::grid::{sample_grid, Exclusions, Grid};

/// Classification of a surface against `Δ^III x = A x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// A = 0: minimal surface (catenoid).
    NullType,
    /// A = 2I: sphere.
    SphereType,
    NotCoordinateFiniteType,
    Inconclusive,
}

/// Decision thresholds for [`Verdict`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitThresholds {
    /// Accept A = 0 or A = 2I within this.
    pub fit: f64,
    /// Reject when the relative residual is at least this.
    pub reject: f64,
}

impl Default for FitThresholds {
    fn default() -> Self {
        FitThresholds {
            fit: 1e-6,
            reject: 1e-2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StructureDiagnostics {
    /// max |a_ij| over i != j
    pub offdiag_max: f64,
    /// |a11 - a22|
    pub diag_split: f64,
}

impl StructureDiagnostics {
    pub fn within(&self, tol: f64) -> bool {
        self.offdiag_max <= tol && self.diag_split <= tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    #[serde(rename = "A")]
    pub a: [[f64; 3]; 3],
    pub rel_residual: f64,
    pub structure: StructureDiagnostics,
    /// (a11 + a22) / 2
    pub lambda: f64,
    /// a33
    pub mu: f64,
    pub verdict: Verdict,
    pub n_points: usize,
    pub exclusions: Exclusions,
    /// sup |Δx| / sup |x| over the grid
    pub null_ratio: f64,
    pub thresholds: FitThresholds,
    pub diagnostic: Option<String>,
}

/// Position and coordinate Laplacian at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitSample {
    pub s: f64,
    pub theta: f64,
    pub x: [f64; 3],
    pub lap: [f64; 3],
}

#[derive(Debug, Clone)]
pub struct GridEvaluation {
    pub samples: Vec<FitSample>,
    pub exclusions: Exclusions,
}

/// Evaluates `x` and `Δ^III x` at every regular grid point.
pub fn evaluate_grid(p: &ProfileCurve, grid: &Grid) -> Result<GridEvaluation> {
    let gs = sample_grid(p, grid)?;
    let pts: Vec<_> = gs.points().collect();
    let samples = pts
        .par_iter()
        .map(|&(st, theta)| {
            let (sn, cs) = theta.sin_cos();
            FitSample {
                s: st.s,
                theta,
                x: [st.f.v0 * cs, st.f.v0 * sn, st.g.v0],
                lap: delta3_coords_at(st, theta).lap,
            }
        })
        .collect();
    Ok(GridEvaluation {
        samples,
        exclusions: gs.exclusions,
    })
}

/// Least-squares solution of `min Σ |y_k - A x_k|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub a: Matrix3<f64>,
    /// sqrt(Σ |y_k - A x_k|²)
    pub residual_norm: f64,
    /// min |r_ii| / max |r_ii| of the triangular factor
    pub conditioning: f64,
}

/// Fits `A` row by row with a Householder QR of the N×3 sample matrix.
/// Returns `None` when the samples do not span three dimensions.
pub fn solve_least_squares(xs: &[Vector3<f64>], ys: &[Vector3<f64>]) -> Option<LeastSquares> {
    let n = xs.len();
    if n < 3 || ys.len() != n {
        return None;
    }
    let x = DMatrix::from_fn(n, 3, |k, j| xs[k][j]);
    let qr = x.qr();
    let r = qr.r();
    let diag: Vec<f64> = (0..3).map(|i| r[(i, i)].abs()).collect();
    let dmax = diag.iter().cloned().fold(0.0, f64::max);
    let dmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if dmax == 0.0 || dmin <= 1e-12 * dmax {
        return None;
    }
    let qt = qr.q().transpose();
    let mut a = Matrix3::zeros();
    for i in 0..3 {
        let y = DVector::from_fn(n, |k, _| ys[k][i]);
        let row = r.solve_upper_triangular(&(&qt * y))?;
        for j in 0..3 {
            a[(i, j)] = row[j];
        }
    }
    let residual_norm = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - a * x).norm_squared())
        .sum::<f64>()
        .sqrt();
    Some(LeastSquares {
        a,
        residual_norm,
        conditioning: dmin / dmax,
    })
}

fn structure_of(a: &Matrix3<f64>) -> StructureDiagnostics {
    let mut off: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                off = off.max(a[(i, j)].abs());
            }
        }
    }
    StructureDiagnostics {
        offdiag_max: off,
        diag_split: (a[(0, 0)] - a[(1, 1)]).abs(),
    }
}

/// Fits `A` to the evaluated grid and classifies the result.
pub fn fit_evaluation(eval: &GridEvaluation, thresholds: FitThresholds) -> FitReport {
    let xs: Vec<Vector3<f64>> = eval.samples.iter().map(|p| Vector3::from(p.x)).collect();
    let ys: Vec<Vector3<f64>> = eval.samples.iter().map(|p| Vector3::from(p.lap)).collect();
    let sup_x = xs.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let sup_y = ys.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let null_ratio = if sup_x > 0.0 {
        sup_y / sup_x
    } else {
        f64::INFINITY
    };

    let mut report = FitReport {
        a: [[f64::NAN; 3]; 3],
        rel_residual: f64::NAN,
        structure: StructureDiagnostics {
            offdiag_max: f64::NAN,
            diag_split: f64::NAN,
        },
        lambda: f64::NAN,
        mu: f64::NAN,
        verdict: Verdict::Inconclusive,
        n_points: xs.len(),
        exclusions: eval.exclusions,
        null_ratio,
        thresholds,
        diagnostic: None,
    };
    if xs.len() < 9 {
        report.diagnostic = Some(format!(
            "only {} regular grid points; at least 9 are needed",
            xs.len()
        ));
        return report;
    }
    let Some(ls) = solve_least_squares(&xs, &ys) else {
        report.diagnostic = Some("degenerate grid: sample matrix has rank < 3".into());
        return report;
    };
    let denom = ys.iter().map(|y| y.norm_squared()).sum::<f64>().sqrt();
    let rel = if denom < 1e-14 {
        ls.residual_norm
    } else {
        ls.residual_norm / denom
    };
    let a = ls.a;
    report.a = [
        [a[(0, 0)], a[(0, 1)], a[(0, 2)]],
        [a[(1, 0)], a[(1, 1)], a[(1, 2)]],
        [a[(2, 0)], a[(2, 1)], a[(2, 2)]],
    ];
    report.rel_residual = rel;
    report.structure = structure_of(&a);
    report.lambda = 0.5 * (a[(0, 0)] + a[(1, 1)]);
    report.mu = a[(2, 2)];

    let dist_2i = (a - Matrix3::<f64>::identity() * 2.0).amax();
    report.verdict = if null_ratio <= thresholds.fit {
        Verdict::NullType
    } else if dist_2i <= thresholds.fit && rel <= thresholds.fit {
        Verdict::SphereType
    } else if rel >= thresholds.reject {
        Verdict::NotCoordinateFiniteType
    } else {
        if rel <= thresholds.fit {
            report.diagnostic = Some(format!(
                "grid fits A with residual {rel:.3e} but A is neither 0 nor 2I (max |A-2I| = {dist_2i:.3e})"
            ));
        } else {
            report.diagnostic = Some(format!(
                "relative residual {rel:.3e} lies between the acceptance and rejection thresholds"
            ));
        }
        Verdict::Inconclusive
    };
    report
}

/// Least-squares fit of `Δ^III x = A x` over the grid, with classification.
pub fn fit_matrix(p: &ProfileCurve, grid: &Grid, thresholds: FitThresholds) -> Result<FitReport> {
    let eval = evaluate_grid(p, grid)?;
    Ok(fit_evaluation(&eval, thresholds))
}

/// Block pattern of the fitted matrix.
pub fn structure_check(report: &FitReport) -> StructureDiagnostics {
    report.structure
}
