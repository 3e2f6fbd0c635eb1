//! Profile curves, the induced surface of revolution, and its fundamental
//! forms.

mod forms;
mod profile;

pub use forms::{
    forms_at, phi_jet, point_at, FormsAndCurvature, PhiJet, ProfileState, SurfacePoint,
};
pub use profile::{validate_profile, ProfileCurve, ProfileFile, Tolerances, ValidationReport};
