use std::fmt;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};
use crate::expr::{eval_jet3, parse, Expr};
use crate::geometry::{ProfileCurve, ProfileState};

/// The `s`-dependent factor of a separable field.
#[derive(Debug, Clone, PartialEq)]
pub enum Radial {
    /// User expression in `s`, evaluated with the profile's parameters.
    Expr(Expr),
    F,
    G,
    /// `-sin phi = -g'`, the radial factor of n1, n2.
    NormalRadial,
    /// `cos phi = f'`, the normal's x3 component.
    NormalAxial,
    /// `R = 2H/K`; only value and first derivative are available.
    CurvatureRadiusSum,
    Arclength,
    Constant(f64),
}

/// The `theta`-dependent factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Harmonic {
    One,
    Cos(u32),
    Sin(u32),
    /// `theta` itself, a chart coordinate rather than a periodic field.
    Angle,
}

impl Harmonic {
    /// `(h, h_theta, h_theta_theta)`
    pub fn eval(self, theta: f64) -> (f64, f64, f64) {
        match self {
            Harmonic::One => (1.0, 0.0, 0.0),
            Harmonic::Cos(k) => {
                let k = k as f64;
                let (s, c) = (k * theta).sin_cos();
                (c, -k * s, -k * k * c)
            }
            Harmonic::Sin(k) => {
                let k = k as f64;
                let (s, c) = (k * theta).sin_cos();
                (s, k * c, -k * k * s)
            }
            Harmonic::Angle => (theta, 1.0, 0.0),
        }
    }
}

/// Value and `s`-derivatives of a radial factor; `d2` is absent when the
/// profile jets are not deep enough to supply it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialJet {
    pub v0: f64,
    pub d1: f64,
    pub d2: Option<f64>,
}

impl Radial {
    pub fn jet(&self, p: &ProfileCurve, st: &ProfileState) -> Result<RadialJet> {
        let full = |v0, d1, d2| RadialJet {
            v0,
            d1,
            d2: Some(d2),
        };
        Ok(match self {
            Radial::Expr(e) => {
                let j = eval_jet3(e, st.s, &p.params)?;
                full(j.v0, j.v1, j.v2)
            }
            Radial::F => full(st.f.v0, st.f.v1, st.f.v2),
            Radial::G => full(st.g.v0, st.g.v1, st.g.v2),
            Radial::NormalRadial => full(-st.g.v1, -st.g.v2, -st.g.v3),
            Radial::NormalAxial => full(st.f.v1, st.f.v2, st.f.v3),
            Radial::CurvatureRadiusSum => {
                let (r, dr) = st.curvature_radius_sum();
                RadialJet {
                    v0: r,
                    d1: dr,
                    d2: None,
                }
            }
            Radial::Arclength => full(st.s, 1.0, 0.0),
            Radial::Constant(c) => full(*c, 0.0, 0.0),
        })
    }
}

impl fmt::Display for Radial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radial::Expr(e) => write!(f, "({e})"),
            Radial::F => f.write_str("f"),
            Radial::G => f.write_str("g"),
            Radial::NormalRadial => f.write_str("(-sin phi)"),
            Radial::NormalAxial => f.write_str("cos phi"),
            Radial::CurvatureRadiusSum => f.write_str("R"),
            Radial::Arclength => f.write_str("s"),
            Radial::Constant(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub radial: Radial,
    pub harmonic: Harmonic,
}

/// A finite sum of separable terms `coeff * a(s) * h(theta)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScalarField {
    pub terms: Vec<Term>,
}

/// Partial derivatives of a field at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPartials {
    pub u: f64,
    pub u_s: f64,
    pub u_ss: Option<f64>,
    pub u_t: f64,
    pub u_tt: f64,
    pub u_st: f64,
}

impl ScalarField {
    pub fn new(radial: Radial, harmonic: Harmonic) -> Self {
        ScalarField {
            terms: vec![Term {
                coeff: 1.0,
                radial,
                harmonic,
            }],
        }
    }

    pub fn constant(c: f64) -> Self {
        ScalarField::new(Radial::Constant(c), Harmonic::One)
    }

    pub fn theta() -> Self {
        ScalarField::new(Radial::Constant(1.0), Harmonic::Angle)
    }

    pub fn arclength() -> Self {
        ScalarField::new(Radial::Arclength, Harmonic::One)
    }

    /// `a(s) * h(theta)` with `a` given as expression text.
    pub fn expr(text: &str, harmonic: Harmonic) -> Result<Self> {
        let e = parse(text).map_err(|source| Error::Parse {
            text: text.to_string(),
            source,
        })?;
        Ok(ScalarField::new(Radial::Expr(e), harmonic))
    }

    /// Coordinate function `x_{i+1}`, `i` in 0..3.
    pub fn coordinate(i: usize) -> Self {
        match i {
            0 => ScalarField::new(Radial::F, Harmonic::Cos(1)),
            1 => ScalarField::new(Radial::F, Harmonic::Sin(1)),
            2 => ScalarField::new(Radial::G, Harmonic::One),
            _ => panic!("coordinate index {i} out of range"),
        }
    }

    /// Unit normal component `n_{i+1}`, `i` in 0..3.
    pub fn normal(i: usize) -> Self {
        match i {
            0 => ScalarField::new(Radial::NormalRadial, Harmonic::Cos(1)),
            1 => ScalarField::new(Radial::NormalRadial, Harmonic::Sin(1)),
            2 => ScalarField::new(Radial::NormalAxial, Harmonic::One),
            _ => panic!("normal index {i} out of range"),
        }
    }

    /// `R = 2H/K` as a field.
    pub fn curvature_radius_sum() -> Self {
        ScalarField::new(Radial::CurvatureRadiusSum, Harmonic::One)
    }

    pub fn partials(
        &self,
        p: &ProfileCurve,
        st: &ProfileState,
        theta: f64,
    ) -> Result<FieldPartials> {
        let mut out = FieldPartials {
            u: 0.0,
            u_s: 0.0,
            u_ss: Some(0.0),
            u_t: 0.0,
            u_tt: 0.0,
            u_st: 0.0,
        };
        for t in &self.terms {
            let a = t.radial.jet(p, st)?;
            let (h, ht, htt) = t.harmonic.eval(theta);
            let c = t.coeff;
            out.u += c * a.v0 * h;
            out.u_s += c * a.d1 * h;
            out.u_ss = match (out.u_ss, a.d2) {
                (Some(acc), Some(d2)) => Some(acc + c * d2 * h),
                _ => None,
            };
            out.u_t += c * a.v0 * ht;
            out.u_tt += c * a.v0 * htt;
            out.u_st += c * a.d1 * ht;
        }
        Ok(out)
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if t.coeff != 1.0 {
                write!(f, "{}*", t.coeff)?;
            }
            write!(f, "{}", t.radial)?;
            match t.harmonic {
                Harmonic::One => {}
                Harmonic::Cos(1) => write!(f, "*cos(t)")?,
                Harmonic::Cos(k) => write!(f, "*cos({k}t)")?,
                Harmonic::Sin(1) => write!(f, "*sin(t)")?,
                Harmonic::Sin(k) => write!(f, "*sin({k}t)")?,
                Harmonic::Angle => f.write_str("*t")?,
            }
        }
        Ok(())
    }
}

impl Add for ScalarField {
    type Output = ScalarField;
    fn add(mut self, o: ScalarField) -> ScalarField {
        self.terms.extend(o.terms);
        self
    }
}

impl Mul<ScalarField> for f64 {
    type Output = ScalarField;
    fn mul(self, mut u: ScalarField) -> ScalarField {
        for t in &mut u.terms {
            t.coeff *= self;
        }
        u
    }
}
