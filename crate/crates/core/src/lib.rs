//! Convolution calculus for convex bodies in three dimensions.
//!
//! The toolkit represents convex bodies by their support functions and
//! surface area measures, realizes rotation-intertwining operators (projection
//! body, mean section, and general Blaschke-Minkowski homomorphisms) as zonal
//! spherical convolutions, exposes the induced spherical-harmonic multiplier
//! transforms, and reconstructs polytopes from prescribed surface area
//! measures (the Minkowski problem).
//!
//! Conventions used throughout:
//! * the sphere carries the rotation-invariant *probability* measure, so the
//!   degree-0 projection of a function is its spherical mean;
//! * surface area measures carry raw Hausdorff mass (the cube `[-1,1]^3` has
//!   total mass 24);
//! * zonal kernels are handled through their profile on `[-1,1]`, and
//!   Legendre coefficients are normalized so the constant kernel 1 has
//!   `c_0 = 1`.
//!
//! Bodies are concrete in dimension 3; the Legendre machinery keeps the
//! dimension as a parameter where the formulas are dimension-general.

pub mod bmh;
pub mod body;
pub mod ellipsoid;
pub mod error;
pub mod geom;
pub mod hull;
pub mod minkowski;
pub mod quad;
pub mod sample;
pub mod sphharm;
pub mod verify;
pub mod zonal;

pub use bmh::{BlaschkeEndomorphism, BmHomomorphism, MinkowskiEndomorphism};
pub use body::{BallBody, DiscreteSurfaceMeasure, Polytope3, SupportSampleBody};
pub use ellipsoid::Ellipsoid;
pub use error::{Error, Result};
pub use minkowski::{MinkowskiInstance, MinkowskiSolution};
pub use quad::SphereRule;
pub use sphharm::{HarmonicExpansion, SpectralBody};
pub use zonal::{MultiplierSequence, ZonalMeasureAtoms, ZonalProfile};

/// Volume of the Euclidean unit ball in R^3.
pub const KAPPA_3: f64 = 4.0 * std::f64::consts::PI / 3.0;

/// Surface area of the Euclidean unit ball in R^3.
pub const OMEGA_3: f64 = 4.0 * std::f64::consts::PI;
