//! The `λ ≠ μ` branch of the reduced system.
//!
//! Eliminating `f` and `g` from `a f + b g = 0` and its differentiated form
//! `a1 f / sin φ + b1 g / cos φ = 0` leaves a quartic in `sin φ` whose
//! coefficients must all vanish:
//!
//! ```text
//! c4 = λ(λ-μ)²
//! c2 = (λ-μ)(λμ - λ² + 5λ + μ - 2)
//! c0 = (λ+μ)(μ - 3λ + 4)
//! ```
//!
//! [`case2_scan`] shows numerically that they never vanish together off the
//! diagonal.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Case2Coefficients {
    pub a: f64,
    pub b: f64,
    pub a1: f64,
    pub b1: f64,
    pub c4: f64,
    pub c2: f64,
    pub c0: f64,
}

/// `(c4, c2, c0)`; defined for every `(λ, μ)`.
pub fn quartic_coefficients(lambda: f64, mu: f64) -> (f64, f64, f64) {
    let (l, m) = (lambda, mu);
    let d = l - m;
    (
        l * d * d,
        d * (l * m - l * l + 5.0 * l + m - 2.0),
        (l + m) * (m - 3.0 * l + 4.0),
    )
}

impl Case2Coefficients {
    /// Coefficients at tangent angle `phi`.
    pub fn at_angle(lambda: f64, mu: f64, phi: f64) -> Result<Self> {
        let (sn, cs) = phi.sin_cos();
        Self::from_sin_cos(lambda, mu, sn, cs)
    }

    fn from_sin_cos(lambda: f64, mu: f64, sn: f64, cs: f64) -> Result<Self> {
        let (l, m) = (lambda, mu);
        if l == m {
            return Err(Error::DiagonalCase(l));
        }
        if sn == 0.0 || cs == 0.0 {
            return Err(Error::DenominatorZero(format!(
                "sin phi cos phi = 0 (sin phi = {sn}, cos phi = {cs})"
            )));
        }
        let d = l - m;
        let s2 = sn * sn;
        let s4 = s2 * s2;
        let (c4, c2, c0) = quartic_coefficients(l, m);
        Ok(Case2Coefficients {
            a: l * sn + (l + m) / (d * sn),
            b: 2.0 * m / (d * cs) - m * cs,
            a1: l * d * d * s4 + d * (l * m - l * l + 3.0 * l + m) * s2 - (l + m) * (3.0 * l - m),
            b1: m * (d * d * s4 + d * (m - l + 4.0) * s2 - 2.0 * (l + m)),
            c4,
            c2,
            c0,
        })
    }

    /// `c4 sin⁴φ + c2 sin²φ + c0`
    pub fn quartic(&self, sin_phi: f64) -> f64 {
        let s2 = sin_phi * sin_phi;
        (self.c4 * s2 + self.c2) * s2 + self.c0
    }
}

/// Coefficients for `sin φ ∈ (0, 1)`, taking `cos φ = +sqrt(1 - sin²φ)`.
pub fn case2_coefficients(lambda: f64, mu: f64, sin_phi: f64) -> Result<Case2Coefficients> {
    if !(sin_phi > 0.0 && sin_phi < 1.0) {
        return Err(Error::DenominatorZero(format!(
            "sin phi = {sin_phi} must lie in (0, 1)"
        )));
    }
    let cos_phi = (1.0 - sin_phi * sin_phi).sqrt();
    Case2Coefficients::from_sin_cos(lambda, mu, sin_phi, cos_phi)
}

/// Closed real interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    /// min |x| over the interval.
    pub fn mignitude(&self) -> f64 {
        if self.lo > 0.0 {
            self.lo
        } else if self.hi < 0.0 {
            -self.hi
        } else {
            0.0
        }
    }

    pub fn square(&self) -> Interval {
        let (a, b) = (self.lo * self.lo, self.hi * self.hi);
        if self.lo >= 0.0 || self.hi <= 0.0 {
            Interval::new(a.min(b), a.max(b))
        } else {
            Interval::new(0.0, a.max(b))
        }
    }

    /// Outward widening by a few ulps to absorb rounding.
    fn widen(self) -> Interval {
        let pad = 4.0 * f64::EPSILON * self.lo.abs().max(self.hi.abs());
        Interval::new(self.lo - pad, self.hi + pad)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::new(self.lo + o.lo, self.hi + o.hi).widen()
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval::new(self.lo - o.hi, self.hi - o.lo).widen()
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo, hi).widen()
    }
}

impl Mul<Interval> for f64 {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        Interval::point(self) * o
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, k: f64) -> Interval {
        self + Interval::point(k)
    }
}

/// Lower bound on `max(|λ|, |λμ - λ² + 5λ + μ - 2|, |(λ+μ)(μ - 3λ + 4)|)`
/// over a box. These are `c4/(λ-μ)²`, `c2/(λ-μ)` and `c0`, which vanish
/// together exactly when `(c4, c2, c0)` do, for `λ ≠ μ`.
fn reduced_lower_bound(l: Interval, m: Interval) -> f64 {
    let r4 = l;
    let r2 = l * m - l.square() + 5.0 * l + m + (-2.0);
    let r0 = (l + m) * (m - 3.0 * l + 4.0);
    r4.mignitude().max(r2.mignitude()).max(r0.mignitude())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRange {
    pub lambda: (f64, f64),
    pub mu: (f64, f64),
    pub step: f64,
}

impl Default for ScanRange {
    fn default() -> Self {
        ScanRange {
            lambda: (-10.0, 10.0),
            mu: (-10.0, 10.0),
            step: 0.25,
        }
    }
}

impl ScanRange {
    fn check(&self) -> Result<()> {
        let ok = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a <= b;
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidRange(format!(
                "step {} must be positive",
                self.step
            )));
        }
        if !ok(self.lambda) || !ok(self.mu) {
            return Err(Error::InvalidRange(format!(
                "empty range lambda {:?}, mu {:?}",
                self.lambda, self.mu
            )));
        }
        Ok(())
    }

    fn values(&self, (lo, hi): (f64, f64)) -> Vec<f64> {
        let n = ((hi - lo) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| lo + k as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub lambda: f64,
    pub mu: f64,
    pub c4: f64,
    pub c2: f64,
    pub c0: f64,
    /// max(|c4|, |c2|, |c0|)
    pub max_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxBound {
    pub cells: usize,
    pub leaves_examined: usize,
    pub certified: bool,
    /// Smallest certified lower bound over all leaves.
    pub min_lower_bound: f64,
    /// Leaves at maximum depth without a positive bound, as [λlo, λhi, μlo, μhi].
    pub uncertified: Vec<[f64; 4]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuZeroCheck {
    /// The only root of c4 = λ³ when μ = 0.
    pub lambda_from_c4: f64,
    /// min over sampled φ of |λ sin²φ + 1|
    pub min_abs_residual: f64,
    pub contradiction: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case2Certificate {
    pub range: ScanRange,
    pub threshold: f64,
    pub points_scanned: usize,
    pub diagonal_skipped: usize,
    /// min over scanned points of max(|c4|, |c2|, |c0|)
    pub min_max_coeff: Option<f64>,
    pub argmin: Option<ScanPoint>,
    pub bounded_away: bool,
    pub reduced_box: BoxBound,
    pub mu_zero: MuZeroCheck,
}

pub const DEFAULT_SCAN_THRESHOLD: f64 = 0.1;
const MAX_BISECTION_DEPTH: u32 = 12;

fn certify_cell(l: (f64, f64), m: (f64, f64), depth: u32, out: &mut BoxBound) {
    let bound = reduced_lower_bound(Interval::new(l.0, l.1), Interval::new(m.0, m.1));
    if bound > 0.0 {
        out.leaves_examined += 1;
        out.min_lower_bound = out.min_lower_bound.min(bound);
        return;
    }
    if depth >= MAX_BISECTION_DEPTH {
        out.leaves_examined += 1;
        out.certified = false;
        if out.uncertified.len() < 16 {
            out.uncertified.push([l.0, l.1, m.0, m.1]);
        }
        return;
    }
    let lm = 0.5 * (l.0 + l.1);
    let mm = 0.5 * (m.0 + m.1);
    for lh in [(l.0, lm), (lm, l.1)] {
        for mh in [(m.0, mm), (mm, m.1)] {
            certify_cell(lh, mh, depth + 1, out);
        }
    }
}

fn certify_box(range: &ScanRange) -> BoxBound {
    let mut out = BoxBound {
        cells: 0,
        leaves_examined: 0,
        certified: true,
        min_lower_bound: f64::INFINITY,
        uncertified: Vec::new(),
    };
    let edges = |(lo, hi): (f64, f64)| -> Vec<(f64, f64)> {
        let n = (((hi - lo) / range.step) - 1e-9).ceil().max(1.0) as usize;
        (0..n)
            .map(|k| {
                let a = lo + k as f64 * range.step;
                (a, (a + range.step).min(hi))
            })
            .collect()
    };
    for l in edges(range.lambda) {
        for m in edges(range.mu) {
            out.cells += 1;
            certify_cell(l, m, 0, &mut out);
        }
    }
    out
}

fn mu_zero_check() -> MuZeroCheck {
    let lambda = 0.0;
    let min_abs_residual = (1..1000)
        .map(|k| {
            let phi = std::f64::consts::FRAC_PI_2 * k as f64 / 1000.0;
            (lambda * phi.sin().powi(2) + 1.0).abs()
        })
        .fold(f64::INFINITY, f64::min);
    MuZeroCheck {
        lambda_from_c4: lambda,
        min_abs_residual,
        contradiction: min_abs_residual > 0.0,
    }
}

/// Off-diagonal grid points of the scan, λ outer, plus the number skipped
/// as diagonal (`|λ - μ| < step/2`).
pub fn scan_points(range: &ScanRange) -> Result<(Vec<ScanPoint>, usize)> {
    range.check()?;
    let mut points = Vec::new();
    let mut skipped = 0;
    for l in range.values(range.lambda) {
        for m in range.values(range.mu) {
            if (l - m).abs() < 0.5 * range.step {
                skipped += 1;
                continue;
            }
            let (c4, c2, c0) = quartic_coefficients(l, m);
            points.push(ScanPoint {
                lambda: l,
                mu: m,
                c4,
                c2,
                c0,
                max_abs: c4.abs().max(c2.abs()).max(c0.abs()),
            });
        }
    }
    Ok((points, skipped))
}

/// Grid scan of `max(|c4|, |c2|, |c0|)` off the diagonal, plus an interval
/// certificate for the reduced coefficients over the whole box.
pub fn case2_scan(range: &ScanRange, threshold: f64) -> Result<Case2Certificate> {
    let (points, skipped) = scan_points(range)?;
    // first minimum in scan order
    let best = points
        .iter()
        .copied()
        .reduce(|a, b| if b.max_abs < a.max_abs { b } else { a });
    let min = best.map(|b| b.max_abs);
    Ok(Case2Certificate {
        range: *range,
        threshold,
        points_scanned: points.len(),
        diagonal_skipped: skipped,
        min_max_coeff: min,
        argmin: best,
        bounded_away: min.is_some_and(|v| v > threshold),
        reduced_box: certify_box(range),
        mu_zero: mu_zero_check(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EliminationReport {
    pub lambda: f64,
    pub mu: f64,
    pub samples: usize,
    /// Mean of `D sin φ cos φ / Q` over samples with Q away from zero; equals μ.
    pub ratio: f64,
    pub max_ratio_rel_deviation: f64,
    /// Samples where exactly one of D, Q is (numerically) zero, plus
    /// consecutive pairs where exactly one of them changes sign.
    pub zero_set_discrepancies: usize,
}

/// Compares the elimination determinant `D = a b1 / cos φ - b a1 / sin φ`
/// with the printed quartic `Q`. They satisfy `D sin φ cos φ = μ Q`.
pub fn elimination_check(lambda: f64, mu: f64, phi_samples: &[f64]) -> Result<EliminationReport> {
    if lambda == mu {
        return Err(Error::DiagonalCase(lambda));
    }
    let mut pairs = Vec::with_capacity(phi_samples.len());
    for &phi in phi_samples {
        let (sn, cs) = phi.sin_cos();
        if (sn * cs).abs() < 1e-12 {
            return Err(Error::DenominatorZero(format!(
                "sin phi cos phi = 0 at phi = {phi}"
            )));
        }
        let c = Case2Coefficients::from_sin_cos(lambda, mu, sn, cs)?;
        let d = c.a * c.b1 / cs - c.b * c.a1 / sn;
        pairs.push((d * sn * cs, c.quartic(sn)));
    }
    let scale_d = pairs.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
    let scale_q = pairs.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    let zero = |v: f64, scale: f64| v.abs() <= 1e-9 * scale.max(f64::MIN_POSITIVE);
    let mut discrepancies = pairs
        .iter()
        .filter(|(d, q)| zero(*d, scale_d) != zero(*q, scale_q))
        .count();
    discrepancies += pairs
        .windows(2)
        .filter(|w| ((w[0].0 * w[1].0) < 0.0) != ((w[0].1 * w[1].1) < 0.0))
        .count();
    let ratios: Vec<f64> = pairs
        .iter()
        .filter(|(_, q)| !zero(*q, scale_q))
        .map(|(d, q)| d / q)
        .collect();
    let ratio = if ratios.is_empty() {
        f64::NAN
    } else {
        ratios.iter().sum::<f64>() / ratios.len() as f64
    };
    let dev = ratios
        .iter()
        .map(|r| (r - ratio).abs() / ratio.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    Ok(EliminationReport {
        lambda,
        mu,
        samples: phi_samples.len(),
        ratio,
        max_ratio_rel_deviation: dev,
        zero_set_discrepancies: discrepancies,
    })
}
