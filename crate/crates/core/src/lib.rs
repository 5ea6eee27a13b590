//! Dirichlet spectra of convex domains in the constant-curvature space forms.
//!
//! The crate works in the three model geometries (hyperbolic plane, Euclidean
//! plane, round sphere) and provides:
//!
//! * [`spaceform`]: curvature tags, coordinate charts, distances, exponential
//!   and logarithm maps, ball volumes and radial dilations.
//! * [`convexbody`]: geodesic polygons, sampled support functions, the
//!   log-ratio metric between bodies, Hausdorff distance and in-radius.
//! * [`ballspec`]: a radial shooting solver for geodesic-ball spectra in any
//!   dimension and the inverse maps built on it.
//! * [`laplace2d`]: a P1 finite element Dirichlet eigensolver on conformal
//!   charts with Richardson extrapolation.
//! * [`rearrange`]: discrete Schwarz symmetrization.
//! * [`stability`]: numerical checks of the spectral inequalities, each
//!   producing a [`stability::VerificationReport`].
//!
//! Everything is `no_std` with `alloc`; file formats and the command line
//! live in the companion `spaceform-lab` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ballspec;
pub mod convexbody;
pub mod error;
pub mod laplace2d;
pub mod numeric;
pub mod rearrange;
pub mod spaceform;
pub mod stability;

pub use error::{Error, Result};

/// Items every module needs in a `no_std` build.
pub(crate) mod prelude {
    pub use alloc::format;
    pub use alloc::string::String;
    pub use alloc::vec;
    pub use alloc::vec::Vec;
    #[allow(unused_imports)]
    pub use num_traits::Float;
}
