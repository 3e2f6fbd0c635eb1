#![allow(dead_code)]

use rand::Rng;
use revtype::catalog;
use revtype::expr::{eval_jet3, BinOp, Expr, Func, Jet3, Params};
use revtype::geometry::ProfileCurve;

/// Random expression that is defined and smooth for every real `s`, with
/// arguments of growth-prone functions squashed through `sin`.
pub fn safe_expr<R: Rng + ?Sized>(rng: &mut R, depth: u32) -> Expr {
    let leaf = |rng: &mut R| -> Expr {
        match rng.random_range(0..3) {
            0 => Expr::Var,
            1 => Expr::Const(round(rng.random_range(-2.0..2.0))),
            _ => Expr::binary(
                BinOp::Mul,
                Expr::Const(round(rng.random_range(-2.0..2.0))),
                Expr::Var,
            ),
        }
    };
    if depth == 0 || rng.random_bool(0.2) {
        return leaf(rng);
    }
    let a = safe_expr(rng, depth - 1);
    let squash = |e: Expr| Expr::unary(Func::Sin, e);
    let one_plus_sq = |e: Expr| Expr::binary(BinOp::Add, Expr::Const(1.0), Expr::pow(e, 2.0));
    match rng.random_range(0..14) {
        0 => Expr::unary(Func::Sin, a),
        1 => Expr::unary(Func::Cos, a),
        2 => Expr::unary(Func::Asinh, a),
        3 => Expr::unary(Func::Exp, squash(a)),
        4 => Expr::unary(Func::Sinh, squash(a)),
        5 => Expr::unary(Func::Cosh, squash(a)),
        6 => Expr::unary(Func::Sqrt, one_plus_sq(a)),
        7 => Expr::unary(
            Func::Ln,
            Expr::binary(BinOp::Add, Expr::Const(1.5), squash(a)),
        ),
        8 => Expr::binary(BinOp::Div, Expr::Const(1.0), one_plus_sq(a)),
        9 => Expr::unary(
            Func::Tan,
            Expr::binary(BinOp::Mul, Expr::Const(0.5), squash(a)),
        ),
        10 => Expr::pow(
            one_plus_sq(a),
            if rng.random_bool(0.5) { 0.5 } else { -1.5 },
        ),
        11 => Expr::pow(a, rng.random_range(2..=3) as f64),
        12 => Expr::unary(Func::Neg, a),
        _ => {
            let b = safe_expr(rng, depth - 1);
            let op = [BinOp::Add, BinOp::Sub, BinOp::Mul][rng.random_range(0..3)];
            Expr::binary(op, a, b)
        }
    }
}

fn round(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

pub fn jet(e: &Expr, s: f64) -> Jet3 {
    eval_jet3(e, s, &Params::new()).expect("safe expression")
}

/// Largest finite-difference mismatch of each derivative channel, scaled as
/// `|jet - fd| / (1 + |jet|)`. Each channel is differenced from the one below.
pub fn fd_defects(e: &Expr, s: f64, h: f64) -> [f64; 3] {
    let (m, c, p) = (jet(e, s - h), jet(e, s), jet(e, s + h));
    let fd = [
        (p.v0 - m.v0) / (2.0 * h),
        (p.v1 - m.v1) / (2.0 * h),
        (p.v2 - m.v2) / (2.0 * h),
    ];
    let exact = [c.v1, c.v2, c.v3];
    [0, 1, 2].map(|i| (exact[i] - fd[i]).abs() / (1.0 + exact[i].abs()))
}

/// A catalog surface picked and sized by `(kind, a, b)` with `a, b ∈ [0, 1)`.
pub fn surface(kind: u8, a: f64, b: f64) -> ProfileCurve {
    match kind % 3 {
        0 => catalog::catenoid(0.5 + 2.5 * a).unwrap().profile,
        1 => catalog::sphere(0.3 + 4.7 * a).unwrap().profile,
        _ => {
            let r = 0.3 + 1.2 * b;
            catalog::torus(r + 0.5 + 4.0 * a, r).unwrap().profile
        }
    }
}

/// Regular arclength at fraction `t ∈ [0, 1]` of the domain, nudged out of
/// excluded or parabolic neighbourhoods.
pub fn regular_s(p: &ProfileCurve, t: f64) -> f64 {
    let span = p.s_max - p.s_min;
    let mut t = 0.02 + 0.96 * t;
    for _ in 0..100 {
        let s = p.s_min + t * span;
        if !p.is_excluded(s) && p.regular_state(s).is_ok() {
            return s;
        }
        t = (t + 0.0137) % 0.96 + 0.02;
    }
    panic!("no regular point on {}", p.name);
}
