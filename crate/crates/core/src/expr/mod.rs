//! Expression language for profile functions of the arclength `s`, evaluated
//! as order-3 jets.

mod ast;
mod eval;
mod jet;
mod parse;

pub use ast::{BinOp, Expr, Func};
pub use eval::{eval, eval_jet3, EvalError, Params};
pub use jet::Jet3;
pub use parse::{parse, ParseError, ParseErrorKind};
