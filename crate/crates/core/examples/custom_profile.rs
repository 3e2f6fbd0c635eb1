//! Loads a profile file, validates it and classifies it.
//!
//!     cargo run --example custom_profile -- crates/core/profiles/sphere_r3.toml

use std::path::PathBuf;

use revtype::finite_type::{fit_matrix, FitThresholds};
use revtype::geometry::{validate_profile, ProfileCurve};
use revtype::grid::Grid;

fn main() -> revtype::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("profiles/sphere_r3.toml")
        });
    let p = ProfileCurve::load(&path)?;
    println!(
        "{}: f = {}, g = {}, s in ({}, {})",
        p.name,
        p.f_text(),
        p.g_text(),
        p.s_min,
        p.s_max
    );

    let v = validate_profile(&p, 257)?;
    println!(
        "arclength defect {:.2e}, min f {:.3}",
        v.max_arclength_defect, v.min_f
    );
    if !v.passed {
        for f in &v.failures {
            println!("  rejected: {f}");
        }
        return Ok(());
    }
    let fit = fit_matrix(&p, &Grid::default(), FitThresholds::default())?;
    println!(
        "verdict {:?}, lambda {:.6}, mu {:.6}, rel residual {:.2e}",
        fit.verdict, fit.lambda, fit.mu, fit.rel_residual
    );
    Ok(())
}
