//! Explicit fermionic trial states: mollified plane-wave Slater determinants and
//! coherent-state density matrices.

pub mod coherent;
pub mod dpp;
pub mod fractional;
pub mod interaction;
pub mod slater;

pub use coherent::{coherent_scale, gaussian_density_1d, CoherentDiagnostics, CoherentGamma};
pub use dpp::{sample_configuration, sample_configurations, slater_measure};
pub use interaction::{
    bessel_kernel, direct_term, exchange_lattice_bound, hardy_quotient, i_epsilon, slater_interaction, DirectTerm,
    ExchangeBound, IEpsilon, InteractionOptions, InteractionReport, QuotientReport,
};
pub use slater::{lieb_thirring_ratio, slater_kinetic, Mollifier, SlaterConfig, SlaterState, DEFAULT_ELL_RATIO};
