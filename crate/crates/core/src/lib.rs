pub mod cli;
pub mod error;
pub mod fft;
pub mod geometry;
pub mod ineq;
pub mod manybody;
pub mod params;
pub mod predictor;
pub mod quad;
pub mod report;
pub mod riesz;
pub mod variational;
pub mod special;

pub use error::{Error, Result};
pub use geometry::PointConfig;
pub use params::Params;
