//! Residuals of the reduced system for A = diag(λ, λ, μ).
//!
//!     cargo run --example reduced_system

use revtype::catalog;
use revtype::finite_type::{derivative_relation_check, reduced_residuals};

fn samples(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| a + (b - a) * (k as f64 + 0.5) / n as f64)
        .collect()
}

fn main() -> revtype::Result<()> {
    let cases = [
        (
            catalog::sphere(1.0)?.profile,
            2.0,
            2.0,
            samples(0.1, 3.0, 50),
        ),
        (
            catalog::catenoid(1.0)?.profile,
            0.0,
            0.0,
            samples(-1.9, 1.9, 50),
        ),
        (
            catalog::torus(3.0, 1.0)?.profile,
            2.0,
            2.0,
            samples(-1.4, 1.4, 50),
        ),
    ];
    for (p, l, m, s) in &cases {
        let r = reduced_residuals(p, *l, *m, s)?;
        let e = derivative_relation_check(p, *l, *m, s, 1e-8)?;
        println!(
            "{:<9} lambda={l} mu={m}: coordinate {:.1e}, reduced {:.1e} / {:.1e}, derivative relation {:.1e} (applicable: {})",
            p.name, r.coordinate, r.reduced_r, r.reduced_dr, e.defect, e.applicable
        );
    }
    Ok(())
}
