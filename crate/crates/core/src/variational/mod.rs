pub mod functional;
pub mod kinetic;
pub mod optimize;

pub use functional::{
    bosonic_upper_bound, omega_objective, tau_objective, FunctionalSpec, GridSpec, Kind, RadialObjective, Spacing,
};
pub use kinetic::{cartesian_kinetic, fractional_kinetic, RadialKinetic};
pub use optimize::{minimize_functional, OptimizerOptions, OptimizerResult};
