//! Third-fundamental-form analysis of surfaces of revolution: expression
//! jets, fundamental forms, Beltrami operators for III, and the test of
//! whether `Δ^III x = A x` holds for a constant matrix `A`.

pub mod beltrami;
pub mod catalog;
pub mod error;
pub mod expr;
pub mod finite_type;
pub mod geometry;
pub mod grid;
pub mod report;

pub use error::{Error, Result};
