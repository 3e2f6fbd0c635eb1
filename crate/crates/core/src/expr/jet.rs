//! Order-3 truncated Taylor jets.
//!
//! A [`Jet3`] carries a value together with its first three derivatives with
//! respect to a single variable. Arithmetic on jets applies the product,
//! quotient and chain rules exactly, so evaluating an expression on the jet
//! `(s, 1, 0, 0)` yields `f(s), f'(s), f''(s), f'''(s)` to roundoff.
//!
//! The elementary functions here do not check their domain; they behave like
//! the corresponding `f64` methods and may return non-finite channels. The
//! expression evaluator is responsible for rejecting bad arguments.

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Value plus first, second and third derivative.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Jet3 {
    pub v0: f64,
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
}

impl Jet3 {
    pub const fn new(v0: f64, v1: f64, v2: f64, v3: f64) -> Self {
        Jet3 { v0, v1, v2, v3 }
    }

    pub const fn constant(v: f64) -> Self {
        Jet3::new(v, 0.0, 0.0, 0.0)
    }

    /// The independent variable seeded at `s`.
    pub const fn variable(s: f64) -> Self {
        Jet3::new(s, 1.0, 0.0, 0.0)
    }

    /// A jet known only to first order. Channels `v2`, `v3` are zero and carry
    /// no information; only `v0` and `v1` of anything computed from it are
    /// meaningful.
    pub const fn first_order(value: f64, slope: f64) -> Self {
        Jet3::new(value, slope, 0.0, 0.0)
    }

    pub fn channels(&self) -> [f64; 4] {
        [self.v0, self.v1, self.v2, self.v3]
    }

    pub fn is_finite(&self) -> bool {
        self.channels().iter().all(|v| v.is_finite())
    }

    /// Applies a scalar function given its value and first three derivatives
    /// at `self.v0` (Faà di Bruno to order 3).
    pub fn compose(&self, d: [f64; 4]) -> Jet3 {
        let (u1, u2, u3) = (self.v1, self.v2, self.v3);
        Jet3 {
            v0: d[0],
            v1: d[1] * u1,
            v2: d[2] * u1 * u1 + d[1] * u2,
            v3: d[3] * u1 * u1 * u1 + 3.0 * d[2] * u1 * u2 + d[1] * u3,
        }
    }

    pub fn recip(&self) -> Jet3 {
        let x = self.v0;
        let r = 1.0 / x;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn sin(&self) -> Jet3 {
        let (s, c) = self.v0.sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet3 {
        let (s, c) = self.v0.sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn tan(&self) -> Jet3 {
        let t = self.v0.tan();
        let sec2 = 1.0 + t * t;
        self.compose([t, sec2, 2.0 * t * sec2, 2.0 * sec2 * (1.0 + 3.0 * t * t)])
    }

    pub fn sinh(&self) -> Jet3 {
        let (sh, ch) = (self.v0.sinh(), self.v0.cosh());
        self.compose([sh, ch, sh, ch])
    }

    pub fn cosh(&self) -> Jet3 {
        let (sh, ch) = (self.v0.sinh(), self.v0.cosh());
        self.compose([ch, sh, ch, sh])
    }

    pub fn asinh(&self) -> Jet3 {
        let x = self.v0;
        let q = 1.0 + x * x;
        let r = q.sqrt();
        self.compose([
            x.asinh(),
            1.0 / r,
            -x / (q * r),
            (2.0 * x * x - 1.0) / (q * q * r),
        ])
    }

    pub fn sqrt(&self) -> Jet3 {
        let r = self.v0.sqrt();
        let x = self.v0;
        self.compose([r, 0.5 / r, -0.25 / (x * r), 0.375 / (x * x * r)])
    }

    pub fn exp(&self) -> Jet3 {
        let e = self.v0.exp();
        self.compose([e, e, e, e])
    }

    pub fn ln(&self) -> Jet3 {
        let r = 1.0 / self.v0;
        self.compose([self.v0.ln(), r, -r * r, 2.0 * r * r * r])
    }

    /// `self^p` for a constant real exponent. Integer exponents are exact at
    /// zero and for negative bases.
    pub fn powf(&self, p: f64) -> Jet3 {
        let x = self.v0;
        let integer = p.fract() == 0.0 && p.abs() < i32::MAX as f64;
        let mut d = [0.0; 4];
        let mut falling = 1.0;
        for (k, slot) in d.iter_mut().enumerate() {
            if k > 0 {
                falling *= p - (k as f64 - 1.0);
            }
            if falling == 0.0 {
                continue;
            }
            let e = p - k as f64;
            let base = if integer { x.powi(e as i32) } else { x.powf(e) };
            *slot = falling * base;
        }
        self.compose(d)
    }
}

impl From<f64> for Jet3 {
    fn from(v: f64) -> Self {
        Jet3::constant(v)
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, o: Jet3) -> Jet3 {
        Jet3::new(
            self.v0 + o.v0,
            self.v1 + o.v1,
            self.v2 + o.v2,
            self.v3 + o.v3,
        )
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, o: Jet3) -> Jet3 {
        Jet3::new(
            self.v0 - o.v0,
            self.v1 - o.v1,
            self.v2 - o.v2,
            self.v3 - o.v3,
        )
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        Jet3::new(-self.v0, -self.v1, -self.v2, -self.v3)
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, o: Jet3) -> Jet3 {
        let (a, b) = (self, o);
        Jet3 {
            v0: a.v0 * b.v0,
            v1: a.v1 * b.v0 + a.v0 * b.v1,
            v2: a.v2 * b.v0 + 2.0 * a.v1 * b.v1 + a.v0 * b.v2,
            v3: a.v3 * b.v0 + 3.0 * a.v2 * b.v1 + 3.0 * a.v1 * b.v2 + a.v0 * b.v3,
        }
    }
}

impl Div for Jet3 {
    type Output = Jet3;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet3) -> Jet3 {
        self * o.recip()
    }
}

impl Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(self, k: f64) -> Jet3 {
        Jet3::new(self.v0 * k, self.v1 * k, self.v2 * k, self.v3 * k)
    }
}

impl Add<f64> for Jet3 {
    type Output = Jet3;
    fn add(self, k: f64) -> Jet3 {
        Jet3::new(self.v0 + k, self.v1, self.v2, self.v3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn close(a: Jet3, b: [f64; 4], tol: f64) {
        for (x, y) in a.channels().iter().zip(b) {
            assert_relative_eq!(*x, y, epsilon = tol, max_relative = tol);
        }
    }

    #[test]
    fn product_rule_to_third_order() {
        // f = s^2, g = sin s at s = 0.7; (fg)''' = 6 cos s - 6 s sin s - s^2 cos s
        let s = 0.7f64;
        let x = Jet3::variable(s);
        let fg = (x * x) * x.sin();
        close(
            fg,
            [
                s * s * s.sin(),
                2.0 * s * s.sin() + s * s * s.cos(),
                2.0 * s.sin() + 4.0 * s * s.cos() - s * s * s.sin(),
                6.0 * s.cos() - 6.0 * s * s.sin() - s * s * s.cos(),
            ],
            1e-13,
        );
    }

    #[test]
    fn quotient_matches_closed_form() {
        // 1/(1+s) at s=1: derivatives (-1)^k k! / 2^(k+1)
        let x = Jet3::variable(1.0);
        let q = Jet3::constant(1.0) / (x + 1.0);
        close(q, [0.5, -0.25, 0.25, -0.375], 1e-15);
    }

    #[test]
    fn sine_at_zero() {
        close(Jet3::variable(0.0).sin(), [0.0, 1.0, 0.0, -1.0], 1e-15);
    }

    #[test]
    fn integer_power_at_zero_is_exact() {
        close(Jet3::variable(0.0).powf(3.0), [0.0, 0.0, 0.0, 6.0], 0.0);
        close(Jet3::variable(0.0).powf(2.0), [0.0, 0.0, 2.0, 0.0], 0.0);
    }

    #[test]
    fn negative_base_integer_power() {
        close(
            Jet3::variable(-2.0).powf(3.0),
            [-8.0, 12.0, -12.0, 6.0],
            1e-15,
        );
    }

    #[test]
    fn asinh_third_derivative() {
        // (2x^2-1)/(1+x^2)^(5/2) at x=1 -> 1/2^(5/2)
        let j = Jet3::variable(1.0).asinh();
        assert_relative_eq!(j.v3, 2f64.powf(-2.5), max_relative = 1e-14);
    }

    #[test]
    fn exp_ln_inverse() {
        let x = Jet3::variable(0.3);
        close(x.exp().ln(), [0.3, 1.0, 0.0, 0.0], 1e-14);
    }
}
