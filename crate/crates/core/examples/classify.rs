//! Fits Δ^III x = A x on each catalog surface and prints the verdict.
//!
//!     cargo run --release --example classify

use revtype::catalog;
use revtype::finite_type::{fit_matrix, FitThresholds};
use revtype::grid::Grid;

fn main() -> revtype::Result<()> {
    let grid = Grid::default();
    for (name, params) in catalog::list() {
        let entry = catalog::by_name(name, &params)?;
        let fit = fit_matrix(&entry.profile, &grid, FitThresholds::default())?;
        println!("{name} {params:?}");
        println!(
            "  verdict       {:?} (expected {:?})",
            fit.verdict, entry.known_truth.verdict
        );
        println!("  rel residual  {:.3e}", fit.rel_residual);
        for row in fit.a {
            println!("  A  [{:>10.6} {:>10.6} {:>10.6}]", row[0], row[1], row[2]);
        }
        println!(
            "  structure     offdiag {:.1e}, a11 - a22 {:.1e}",
            fit.structure.offdiag_max, fit.structure.diag_split
        );
    }
    Ok(())
}
