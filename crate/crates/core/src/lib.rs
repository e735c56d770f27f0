//! Closed hyperbolic surfaces in Fenchel-Nielsen coordinates.

pub mod error;
pub mod hyptrig;
pub mod moebius;

pub use error::{Error, Result};
pub mod curves;
pub mod surface;
pub mod deform;
pub mod estimator;
pub mod optsearch;
