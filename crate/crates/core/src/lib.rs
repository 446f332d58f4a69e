//! Orthospectrum identities on hyperbolic surfaces with totally geodesic
//! boundary, together with the special functions, kernels, quadrature and
//! geodesic-flow sampling they rely on.

pub mod error;
pub mod geom;
pub mod identities;
pub mod kernels;
pub mod mcflow;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
