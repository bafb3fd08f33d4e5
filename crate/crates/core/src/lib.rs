pub mod bound;
pub mod chern;
pub mod error;
pub mod geometry;
mod ode;
pub mod quadrature;
pub mod radial;
pub mod volume;

pub use error::{Error, Result};
