//! Path-integral and stochastic-representation toolkit: Feynman–Kac and
//! subordinated Monte Carlo, the Kac telegrapher walk, spectral Dirac and
//! relativistic semigroups, and diagnostics for oscillatory path "measures".

pub mod dirac;
pub mod error;
pub mod feynman_kac;
pub mod kg;
pub mod nogo;
pub mod paths;
pub mod profile;
pub mod quadrature;
pub mod rng;
pub mod spectral;
pub mod stats;
pub mod subordinator;
pub mod telegrapher;

pub use error::{Error, Result};
pub use profile::Profile;
pub use rng::RngStream;
pub use spectral::PeriodicGrid;
pub use stats::SummaryStat;
