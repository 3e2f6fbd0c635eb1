//! Fundamental forms and curvatures along the torus profile.
//!
//!     cargo run --example fundamental_forms

use revtype::catalog;
use revtype::geometry::{forms_at, point_at};

fn main() -> revtype::Result<()> {
    let torus = catalog::torus(3.0, 1.0)?.profile;
    println!(
        "{:>7} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "s", "h11", "h22", "e11", "e22", "H", "K", "2H/K"
    );
    for k in 0..=8 {
        let s = -1.2 + 0.3 * k as f64;
        let fc = forms_at(&torus, s)?;
        println!(
            "{s:>7.3} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
            fc.h11, fc.h22, fc.e11, fc.e22, fc.mean, fc.gauss, fc.r
        );
    }
    let pt = point_at(&torus, 0.0, 0.0)?;
    println!("x(0, 0) = {:?}, n = {:?}", pt.x.as_slice(), pt.n.as_slice());
    Ok(())
}
