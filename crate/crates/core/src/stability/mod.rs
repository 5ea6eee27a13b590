//! Numerical checks of the spectral inequalities.
//!
//! Every check returns a [`VerificationReport`] oriented as `lhs ≤ rhs`,
//! with a tolerance built from the Richardson error estimates of the
//! eigenvalues involved.

mod center;
mod checks;
mod report;
mod solved;
mod sweep;

pub use center::{
    center_of_mass, center_of_mass_points, CenterOfMass, LinearWeight, RadialWeight, RampWeight, UnitWeight,
};
pub use checks::{
    circumscribed_radius, compactness_constants, inradius_bound, lambda_bound, rectangle_chain,
    rectangle_diameter_ratio, rectangle_eigenvalue, verify_concentration, verify_continuity, verify_faber_krahn,
    verify_gap_bound, verify_gen_ppw, verify_inradius, verify_li_yau, verify_ppw, verify_splitting, volume_bound,
    CompactnessConstants, BALL_POLYGON_VERTICES,
};
pub use report::{ContextValue, VerificationReport};
pub use solved::{default_h_list, SolvedBody};
pub use sweep::{check_sweep, stability_sweep, sweep_point, SweepFamily, SweepPoint};
