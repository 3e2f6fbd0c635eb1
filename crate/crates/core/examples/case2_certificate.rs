//! Scans (λ, μ) for a common root of the quartic coefficients and prints the
//! certificate.
//!
//!     cargo run --release --example case2_certificate

use revtype::finite_type::{case2_scan, elimination_check, ScanRange, DEFAULT_SCAN_THRESHOLD};

fn main() -> revtype::Result<()> {
    let cert = case2_scan(&ScanRange::default(), DEFAULT_SCAN_THRESHOLD)?;
    let best = cert.argmin.expect("nonempty scan");
    println!(
        "scanned {} points ({} on the diagonal skipped)",
        cert.points_scanned, cert.diagonal_skipped
    );
    println!(
        "min max(|c4|,|c2|,|c0|) = {} at lambda = {}, mu = {}",
        best.max_abs, best.lambda, best.mu
    );
    println!(
        "interval bound over the box: {} cells, {} leaves, certified = {}, min bound = {:.3e}",
        cert.reduced_box.cells,
        cert.reduced_box.leaves_examined,
        cert.reduced_box.certified,
        cert.reduced_box.min_lower_bound
    );
    println!(
        "mu = 0 forces lambda = 0, contradiction = {}",
        cert.mu_zero.contradiction
    );

    let phis: Vec<f64> = (1..50).map(|k| 1.5 * k as f64 / 50.0).collect();
    let e = elimination_check(1.0, -1.0, &phis)?;
    println!(
        "D sin(phi) cos(phi) / Q = {} (max deviation {:.1e}, zero-set mismatches {})",
        e.ratio, e.max_ratio_rel_deviation, e.zero_set_discrepancies
    );
    Ok(())
}
