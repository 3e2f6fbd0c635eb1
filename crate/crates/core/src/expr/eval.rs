use std::collections::BTreeMap;

use thiserror::Error;

use super::ast::{BinOp, Expr, Func};
use super::jet::Jet3;

/// Named parameter bindings. Ordered so that serialized output is stable.
pub type Params = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("domain error in `{subexpr}` at s = {s}: {reason}")]
    Domain {
        subexpr: String,
        s: f64,
        reason: &'static str,
    },
    #[error("parameter `{0}` is not bound")]
    UnboundParameter(String),
}

/// Evaluates `e` at `s` as an order-3 jet in `s`.
pub fn eval_jet3(e: &Expr, s: f64, params: &Params) -> Result<Jet3, EvalError> {
    Evaluator { s, params }.eval(e)
}

/// Plain value of `e` at `s`.
pub fn eval(e: &Expr, s: f64, params: &Params) -> Result<f64, EvalError> {
    eval_jet3(e, s, params).map(|j| j.v0)
}

struct Evaluator<'a> {
    s: f64,
    params: &'a Params,
}

impl Evaluator<'_> {
    fn domain(&self, e: &Expr, reason: &'static str) -> EvalError {
        EvalError::Domain {
            subexpr: e.to_string(),
            s: self.s,
            reason,
        }
    }

    fn eval(&self, e: &Expr) -> Result<Jet3, EvalError> {
        let out = match e {
            Expr::Const(c) => Jet3::constant(*c),
            Expr::Var => Jet3::variable(self.s),
            Expr::Param(name) => Jet3::constant(
                *self
                    .params
                    .get(name)
                    .ok_or_else(|| EvalError::UnboundParameter(name.clone()))?,
            ),
            Expr::Unary(func, arg) => {
                let x = self.eval(arg)?;
                match func {
                    Func::Neg => -x,
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Tan => {
                        if x.v0.cos() == 0.0 {
                            return Err(self.domain(e, "tangent pole"));
                        }
                        x.tan()
                    }
                    Func::Sinh => x.sinh(),
                    Func::Cosh => x.cosh(),
                    Func::Asinh => x.asinh(),
                    Func::Sqrt => {
                        if x.v0 < 0.0 {
                            return Err(self.domain(e, "square root of a negative number"));
                        }
                        if x.v0 == 0.0 {
                            return Err(self.domain(e, "square root is not differentiable at 0"));
                        }
                        x.sqrt()
                    }
                    Func::Exp => x.exp(),
                    Func::Ln => {
                        if x.v0 <= 0.0 {
                            return Err(self.domain(e, "logarithm of a nonpositive number"));
                        }
                        x.ln()
                    }
                }
            }
            Expr::Binary(op, l, r) => {
                let (a, b) = (self.eval(l)?, self.eval(r)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b.v0 == 0.0 {
                            return Err(self.domain(e, "division by zero"));
                        }
                        a / b
                    }
                }
            }
            Expr::Pow(base, p) => {
                let x = self.eval(base)?;
                let integer = p.fract() == 0.0;
                if x.v0 < 0.0 && !integer {
                    return Err(self.domain(e, "fractional power of a negative number"));
                }
                if x.v0 == 0.0 && *p < 0.0 {
                    return Err(self.domain(e, "division by zero"));
                }
                x.powf(*p)
            }
        };
        if !out.is_finite() {
            return Err(self.domain(e, "non-finite result"));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use approx::assert_relative_eq;

    fn jet(text: &str, s: f64) -> Jet3 {
        eval_jet3(&parse(text).unwrap(), s, &Params::new()).unwrap()
    }

    #[test]
    fn sqrt_one_plus_s_squared_at_one() {
        // d^k/ds^k sqrt(1+s^2) at s=1: sqrt2, 1/sqrt2, 1/(2 sqrt2), -3/(4 sqrt2)
        let j = jet("sqrt(1+s^2)", 1.0);
        let r2 = 2f64.sqrt();
        for (got, want) in j
            .channels()
            .iter()
            .zip([r2, 1.0 / r2, 0.5 / r2, -0.75 / r2])
        {
            assert_relative_eq!(*got, want, max_relative = 1e-14);
        }
        assert_relative_eq!(j.v3, -0.53033009, epsilon = 1e-8);
    }

    #[test]
    fn identity_and_sine() {
        assert_eq!(jet("s", 7.0).channels(), [7.0, 1.0, 0.0, 0.0]);
        assert_eq!(jet("sin(s)", 0.0).channels(), [0.0, 1.0, 0.0, -1.0]);
    }

    #[test]
    fn cube_is_exact() {
        for s in [-3.0, -0.5, 0.0, 1.25, 10.0] {
            let j = jet("s^3", s);
            assert_eq!(j.channels(), [s * s * s, 3.0 * s * s, 6.0 * s, 6.0]);
        }
    }

    #[test]
    fn domain_errors_carry_subexpression() {
        let e = parse("1 + sqrt(s - 2)").unwrap();
        match eval_jet3(&e, 1.0, &Params::new()) {
            Err(EvalError::Domain { subexpr, s, .. }) => {
                assert_eq!(subexpr, "sqrt(s - 2)");
                assert_eq!(s, 1.0);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            eval_jet3(&parse("ln(s)").unwrap(), 0.0, &Params::new()),
            Err(EvalError::Domain { .. })
        ));
        assert!(matches!(
            eval_jet3(&parse("1/s").unwrap(), 0.0, &Params::new()),
            Err(EvalError::Domain { .. })
        ));
        assert!(matches!(
            eval_jet3(&parse("s^0.5").unwrap(), -1.0, &Params::new()),
            Err(EvalError::Domain { .. })
        ));
        assert!(matches!(
            eval_jet3(&parse("s^-1").unwrap(), 0.0, &Params::new()),
            Err(EvalError::Domain { .. })
        ));
    }

    #[test]
    fn unbound_parameter() {
        let err = eval_jet3(&parse("a*s").unwrap(), 1.0, &Params::new()).unwrap_err();
        assert_eq!(err, EvalError::UnboundParameter("a".into()));
        let mut p = Params::new();
        p.insert("a".into(), 3.0);
        assert_eq!(eval(&parse("a*s").unwrap(), 2.0, &p).unwrap(), 6.0);
    }

    #[test]
    fn rewritten_power_matches_pow() {
        let a = jet("(1+s^2)^(3/2)", 0.8);
        let mut p = Params::new();
        p.insert("k".into(), 1.5);
        let b = eval_jet3(&parse("(1+s^2)^k").unwrap(), 0.8, &p).unwrap();
        for (x, y) in a.channels().iter().zip(b.channels()) {
            assert_relative_eq!(*x, y, max_relative = 1e-13);
        }
    }
}
