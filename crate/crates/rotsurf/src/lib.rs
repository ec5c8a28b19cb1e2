//! Rotational surfaces of constant Gauss curvature in the 3-sphere and
//! in hyperbolic 3-space.
//!
//! The crate evaluates the closed-form profile curves of such surfaces
//! (built from Jacobi elliptic functions and elliptic integrals), embeds
//! them into the ambient quadrics, applies parallel transformations, and
//! cross-checks everything numerically: ODE residuals, quadric
//! constraints, finite-difference curvature, linear Weingarten fits and
//! closed-profile period conditions.
//!
//! Modules:
//! - [`elliptic`]: Jacobi elliptic functions, amplitude, elliptic
//!   integrals F/E/Pi and their transformation formulas.
//! - [`profile`]: classification of the curvature regimes and evaluation
//!   of the profile functions r, psi, d with analytic derivatives.
//! - [`geometry`]: ambient embeddings, projections to displayable
//!   models, normals, parallel offsets and the period equation.
//! - [`verify`]: independent numerical oracles and machine-readable
//!   verification reports.
//! - [`jobio`]: batch-job configuration and deterministic file emission
//!   (CSV, OBJ, PLY, JSON).

pub mod elliptic;
pub mod geometry;
pub mod jobio;
pub mod profile;
pub mod verify;
