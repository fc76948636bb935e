//! Delayed Hopf bifurcation followed by a focus-node bifurcation.
//!
//! Tools for the linear-plus-forcing normal form
//! `eps^3 x' = t x + y + eps^3 c1`, `eps^3 y' = (t-b) x + t y + eps^3 c2`:
//! complex Airy functions, reliefs of the eigenvalues and their descending
//! domains, distinguished trajectories by integration and by contour
//! quadrature, asymptotic expansions, and input-output (entry-exit) maps.

pub mod cquad;
pub mod entryexit;
pub mod error;
pub mod flow;
pub mod logcomplex;
pub mod par;
pub mod quad;
pub mod reliefscape;
pub mod series;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
pub use logcomplex::LogComplex;
pub use spectrum::Params;

/// Library version, recorded in experiment manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
