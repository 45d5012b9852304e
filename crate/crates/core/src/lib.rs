//! Numerical laboratory for the conformal Gauss map and Bryant's quartic of surfaces in R³.

pub mod cgm;
pub mod error;
pub mod geometry;
pub mod jet;
pub mod minkowski;
pub mod quartic;
pub mod real;
pub mod report;
pub mod surface;

pub use error::{Error, Result};
pub use jet::{ComplexJet2, Jet2};
pub use real::{Extended, Precision, Real};
