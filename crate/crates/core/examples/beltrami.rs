//! Beltrami operators of the third fundamental form: the coordinate
//! Laplacian, the identity Δx = ∇(R, n) - R n, and two routes to Δu.
//!
//!     cargo run --example beltrami

use revtype::beltrami::{
    delta3_coords, delta3_general, delta3_scalar, nabla3, verify_position_identity, Harmonic,
    Radial, ScalarField,
};
use revtype::catalog;
use revtype::grid::Grid;

fn main() -> revtype::Result<()> {
    let torus = catalog::torus(3.0, 1.0)?.profile;
    let s = std::f64::consts::FRAC_PI_4;

    let lap = delta3_coords(&torus, s, 0.0)?;
    println!("P1 = {}, P2 = {} at s = pi/4", lap.p1, lap.p2);

    let rep = verify_position_identity(&torus, &Grid::default())?;
    println!(
        "lap x vs nabla(R, n) - R n: max residual {:.2e} over {} points",
        rep.max_residual, rep.n_points
    );

    let u = ScalarField::new(Radial::F, Harmonic::Cos(2))
        + 0.5 * ScalarField::expr("sin(s)", Harmonic::Sin(1))?;
    let theta = 0.7;
    println!("u = {u}");
    println!(
        "  specialized  lap u = {}",
        delta3_scalar(&torus, s, theta, &u)?
    );
    println!(
        "  general      lap u = {}",
        delta3_general(&torus, s, theta, &u)?
    );
    println!(
        "  nabla(u, u)        = {}",
        nabla3(&torus, s, theta, &u, &u)?
    );
    Ok(())
}
