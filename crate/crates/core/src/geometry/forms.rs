use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use serde::Serialize;

use super::profile::ProfileCurve;
use crate::error::{Error, Result};
use crate::expr::Jet3;

/// Jets of the profile at one arclength value, plus the tangent angle.
///
/// `cos phi = f'` and `sin phi = g'`; `phi' = f'g'' - g'f''` and
/// `phi'' = f'g''' - g'f'''`, both valid under the arclength condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileState {
    pub s: f64,
    pub f: Jet3,
    pub g: Jet3,
    pub phi: f64,
    pub dphi: f64,
    pub ddphi: f64,
}

impl ProfileState {
    pub fn sin_phi(&self) -> f64 {
        self.g.v1
    }

    pub fn cos_phi(&self) -> f64 {
        self.f.v1
    }

    /// Errors when |phi'| or |sin phi| fall below `tol`, i.e. K = 0 there.
    pub fn require_regular(&self, tol: f64) -> Result<()> {
        if self.dphi.abs() < tol || self.sin_phi().abs() < tol {
            return Err(Error::Parabolic {
                s: self.s,
                dphi: self.dphi.abs(),
                sin_phi: self.sin_phi().abs(),
                tol,
            });
        }
        Ok(())
    }

    /// `R = 2H/K = 1/phi' + f/sin phi` together with `R'`, propagated as a
    /// first-order jet.
    pub fn curvature_radius_sum(&self) -> (f64, f64) {
        let dphi = Jet3::first_order(self.dphi, self.ddphi);
        let sin_phi = Jet3::first_order(self.g.v1, self.g.v2);
        let f = Jet3::first_order(self.f.v0, self.f.v1);
        let r = dphi.recip() + f / sin_phi;
        (r.v0, r.v1)
    }
}

/// Wraps an angle difference into (-pi, pi].
fn wrap(d: f64) -> f64 {
    let w = (d + PI).rem_euclid(TAU) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

const BRANCH_STEPS: f64 = 256.0;

impl ProfileCurve {
    /// Tangent angle at `s` on the branch obtained by unwrapping atan2 from
    /// the left end of the domain.
    fn phi_branch(&self, s: f64, fp: f64, gp: f64) -> f64 {
        let target = gp.atan2(fp);
        let start = self.s_min;
        let span = self.s_max - self.s_min;
        let n = ((s - start).abs() / span * BRANCH_STEPS).ceil() as usize;
        if n == 0 {
            return target;
        }
        let mut phi: Option<f64> = None;
        for k in 0..n {
            let t = start + (s - start) * k as f64 / n as f64;
            let (Ok(f), Ok(g)) = (self.f_jet(t), self.g_jet(t)) else {
                continue;
            };
            if f.v1 == 0.0 && g.v1 == 0.0 {
                continue;
            }
            let a = g.v1.atan2(f.v1);
            phi = Some(match phi {
                None => a,
                Some(prev) => prev + wrap(a - prev),
            });
        }
        match phi {
            None => target,
            Some(prev) => prev + wrap(target - prev),
        }
    }

    /// Jets and tangent angle at `s`.
    pub fn state(&self, s: f64) -> Result<ProfileState> {
        let f = self.f_jet(s)?;
        let g = self.g_jet(s)?;
        if f.v1 == 0.0 && g.v1 == 0.0 {
            return Err(Error::SingularProfile { s });
        }
        Ok(ProfileState {
            s,
            f,
            g,
            phi: self.phi_branch(s, f.v1, g.v1),
            dphi: f.v1 * g.v2 - g.v1 * f.v2,
            ddphi: f.v1 * g.v3 - g.v1 * f.v3,
        })
    }

    /// Jets at `s`, failing on parabolic points.
    pub fn regular_state(&self, s: f64) -> Result<ProfileState> {
        let st = self.state(s)?;
        st.require_regular(self.tol.parab)?;
        Ok(st)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiJet {
    pub phi: f64,
    pub dphi: f64,
    pub ddphi: f64,
}

/// `(phi, phi', phi'')` with `f' = cos phi`, `g' = sin phi`.
pub fn phi_jet(p: &ProfileCurve, s: f64) -> Result<PhiJet> {
    let st = p.state(s)?;
    Ok(PhiJet {
        phi: st.phi,
        dphi: st.dphi,
        ddphi: st.ddphi,
    })
}

/// The three fundamental forms and curvatures at a regular point. Off-diagonal
/// components vanish by rotational symmetry and are not stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormsAndCurvature {
    pub g11: f64,
    pub g22: f64,
    pub h11: f64,
    pub h22: f64,
    pub e11: f64,
    pub e22: f64,
    /// Mean curvature, (h11/g11 + h22/g22)/2.
    pub mean: f64,
    /// Gauss curvature, h11 h22 / (g11 g22).
    pub gauss: f64,
    /// 2H/K = 1/phi' + f/sin phi, the sum of the principal radii.
    pub r: f64,
    pub phi: f64,
    pub dphi: f64,
    pub ddphi: f64,
}

impl FormsAndCurvature {
    /// det(e_ij)
    pub fn e_det(&self) -> f64 {
        self.e11 * self.e22
    }

    pub fn e_inv11(&self) -> f64 {
        1.0 / self.e11
    }

    pub fn e_inv22(&self) -> f64 {
        1.0 / self.e22
    }

    /// Principal curvatures along the meridian and the parallel.
    pub fn principal(&self) -> (f64, f64) {
        (self.h11 / self.g11, self.h22 / self.g22)
    }
}

pub fn forms_at(p: &ProfileCurve, s: f64) -> Result<FormsAndCurvature> {
    let st = p.regular_state(s)?;
    Ok(forms_from_state(&st))
}

pub(crate) fn forms_from_state(st: &ProfileState) -> FormsAndCurvature {
    let (f, g) = (st.f, st.g);
    let sin_phi = st.sin_phi();
    // <x_ss, n> and <x_thth, n> with n = (-g' cos t, -g' sin t, f')
    let h11 = f.v1 * g.v2 - g.v1 * f.v2;
    let h22 = f.v0 * g.v1;
    let g11 = f.v1 * f.v1 + g.v1 * g.v1;
    let g22 = f.v0 * f.v0;
    let (k1, k2) = (h11 / g11, h22 / g22);
    FormsAndCurvature {
        g11,
        g22,
        h11,
        h22,
        e11: st.dphi * st.dphi,
        e22: sin_phi * sin_phi,
        mean: 0.5 * (k1 + k2),
        gauss: k1 * k2,
        r: 1.0 / st.dphi + f.v0 / sin_phi,
        phi: st.phi,
        dphi: st.dphi,
        ddphi: st.ddphi,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub s: f64,
    /// Angle reduced to [0, 2pi).
    pub theta: f64,
    pub x: Vector3<f64>,
    /// Unit normal, x_s × x_theta normalized.
    pub n: Vector3<f64>,
    pub x_s: Vector3<f64>,
    pub x_theta: Vector3<f64>,
}

/// Position, tangents and unit normal of `x(s, t) = (f cos t, f sin t, g)`.
pub fn point_at(p: &ProfileCurve, s: f64, theta: f64) -> Result<SurfacePoint> {
    let f = p.f_jet(s)?;
    let g = p.g_jet(s)?;
    let (st, ct) = theta.sin_cos();
    let x = Vector3::new(f.v0 * ct, f.v0 * st, g.v0);
    let x_s = Vector3::new(f.v1 * ct, f.v1 * st, g.v1);
    let x_theta = Vector3::new(-f.v0 * st, f.v0 * ct, 0.0);
    let cross = x_s.cross(&x_theta);
    let norm = cross.norm();
    if norm == 0.0 {
        return Err(Error::SingularProfile { s });
    }
    Ok(SurfacePoint {
        s,
        theta: theta.rem_euclid(TAU),
        x,
        n: cross / norm,
        x_s,
        x_theta,
    })
}
