//! sublab — a numerical laboratory for Riemannian submersions.

pub mod bounds;
pub mod bundle;
pub mod error;
pub mod geometry;
pub mod report;
pub mod scenarios;
pub mod submersion;
pub mod transport;

pub use error::{Error, Result};
