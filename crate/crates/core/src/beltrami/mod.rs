//! First and second Beltrami operators with respect to the third fundamental
//! form.

mod field;
mod ops;

pub use field::{FieldPartials, Harmonic, Radial, RadialJet, ScalarField, Term};
pub use ops::{
    beltrami_general, delta3_coords, delta3_general, delta3_scalar, nabla3, p1_p2,
    verify_position_identity, CoordinateLaplacian, GaussMapMetric, IdentityReport, PointResidual,
};

pub(crate) use ops::{delta3_coords_at, p1_p2_at};
