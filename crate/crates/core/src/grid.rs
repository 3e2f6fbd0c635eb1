//! Sample grids over `J × [0, 2pi)`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ProfileCurve, ProfileState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub n_s: usize,
    pub n_theta: usize,
}

impl Grid {
    pub fn new(n_s: usize, n_theta: usize) -> Result<Self> {
        let g = Grid { n_s, n_theta };
        g.check()?;
        Ok(g)
    }

    pub fn check(&self) -> Result<()> {
        if self.n_s < 2 || self.n_theta < 4 {
            return Err(Error::InvalidParameter(format!(
                "grid needs n_s >= 2 and n_theta >= 4, got {}x{}",
                self.n_s, self.n_theta
            )));
        }
        Ok(())
    }

    /// Cell-centred arclength samples; the open domain endpoints are never hit.
    pub fn s_values(&self, p: &ProfileCurve) -> Vec<f64> {
        let h = (p.s_max - p.s_min) / self.n_s as f64;
        (0..self.n_s)
            .map(|k| p.s_min + (k as f64 + 0.5) * h)
            .collect()
    }

    /// Uniform full-circle angles `2 pi j / n_theta`.
    pub fn thetas(&self) -> Vec<f64> {
        (0..self.n_theta)
            .map(|j| TAU * j as f64 / self.n_theta as f64)
            .collect()
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            n_s: 32,
            n_theta: 32,
        }
    }
}

/// Number of grid points dropped, by reason.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Exclusions {
    pub excluded_interval: usize,
    pub parabolic: usize,
    pub domain_error: usize,
}

impl Exclusions {
    pub fn total(&self) -> usize {
        self.excluded_interval + self.parabolic + self.domain_error
    }
}

/// The regular rows of a grid: one profile state per kept `s`, shared by all
/// angles.
#[derive(Debug, Clone)]
pub struct GridSamples {
    pub states: Vec<ProfileState>,
    pub thetas: Vec<f64>,
    pub exclusions: Exclusions,
}

impl GridSamples {
    pub fn len(&self) -> usize {
        self.states.len() * self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(s, theta)` pairs in row-major order (s outer).
    pub fn points(&self) -> impl Iterator<Item = (&ProfileState, f64)> + '_ {
        self.states
            .iter()
            .flat_map(move |st| self.thetas.iter().map(move |&t| (st, t)))
    }

    pub fn s_values(&self) -> Vec<f64> {
        self.states.iter().map(|st| st.s).collect()
    }
}

/// Evaluates the profile on the grid, dropping excluded, parabolic and
/// undefined rows.
pub fn sample_grid(p: &ProfileCurve, grid: &Grid) -> Result<GridSamples> {
    grid.check()?;
    let thetas = grid.thetas();
    let nt = thetas.len();
    let mut ex = Exclusions::default();
    let mut states = Vec::with_capacity(grid.n_s);
    for s in grid.s_values(p) {
        if p.is_excluded(s) {
            ex.excluded_interval += nt;
            continue;
        }
        match p.state(s) {
            Ok(st) => {
                if st.require_regular(p.tol.parab).is_ok() {
                    states.push(st);
                } else {
                    ex.parabolic += nt;
                }
            }
            Err(Error::SingularProfile { .. }) => ex.parabolic += nt,
            Err(Error::Eval(_)) => ex.domain_error += nt,
            Err(e) => return Err(e),
        }
    }
    Ok(GridSamples {
        states,
        thetas,
        exclusions: ex,
    })
}
