//! Arrival-time computation for mean curvature flow of mean convex domains.
//!
//! The arrival time u of a domain Omega assigns to each interior point the
//! time at which the inward flow of the boundary sweeps past it. We compute u
//! by elliptic regularization: solve
//!
//!   div(Du / sqrt(eps^2 + |Du|^2)) = -1 / sqrt(eps^2 + |Du|^2),  u = 0 on dOmega,
//!
//! for a decreasing ladder of eps values with warm starts, then diagnose the
//! limit field with level-set measures (contour and coarea routes), Brakke-type
//! mass balance checks, and a variational minimality probe.
//!
//! Modules:
//! - [`grid`], [`domain`], [`shape`]: implicit geometry on cell-centered grids
//! - [`operator`], [`solver`]: the regularized operator and the eps-ladder Newton solver
//! - [`oracle`]: independent radial ODE reference solutions
//! - [`contour`], [`measures`]: level-set extraction and measures mu_t
//! - [`brakke`]: mass balance, mass-drop scans, the translating-graph identity
//! - [`variational`]: the arrival-time functional J and minimality probes
//! - [`report`]: deterministic JSON/CSV artifact writers

pub mod brakke;
pub mod contour;
pub mod domain;
pub mod error;
pub mod exec;
pub mod grid;
pub mod measures;
pub mod operator;
pub mod oracle;
pub mod report;
pub mod shape;
pub mod solver;
pub mod sparse;
pub mod variational;

pub use error::{Error, Result};
pub use grid::{Coords, Grid, GridSpec, ScalarField};
pub use shape::ShapeSpec;
