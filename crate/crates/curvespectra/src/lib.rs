//! Spectral invariants of closed parametric curves.
//!
//! Given a closed curve in the plane, on the unit sphere, or in space,
//! this crate computes its differential-geometric invariants (length,
//! curvature, geodesic curvature, enclosed spherical area, rotation
//! number) and the low eigenvalues of three associated operators:
//!
//! * the periodic Sturm-Liouville operator `-4 d^2/ds^2 + kappa^2(s)`
//!   on the arc-length circle, solved by a Fourier-Galerkin method,
//! * the periodic Schrodinger operator on a flat torus built from the
//!   curve's length and enclosed area, reduced per circle mode,
//! * the squared Dirac eigenvalues of flat Hopf tori, minimized over
//!   the dual lattice.
//!
//! On top of these it verifies a family of eigenvalue inequalities
//! (isoperimetric lower bounds, a mean-square-curvature upper bound,
//! Fenchel's theorem, Cauchy-Schwarz) and reproduces a bundled
//! comparison table for five reference curves.

pub mod analysis;
pub mod catalog;
pub mod cli;
pub mod dirac;
pub mod eigensolve;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod schrodinger2d;
pub mod sturm1d;

pub use error::{Error, Result};
