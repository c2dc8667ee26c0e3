//! Numerical diagnostics for constructions that fail to define a measure.

pub mod bochner;
pub mod fresnel;
pub mod kernel_fit;
pub mod levy;
pub mod tv;

pub use bochner::{bochner_gram_min_eig, jacobi_eigen, GramReport};
pub use fresnel::{fresnel_limit, fresnel_panels, fresnel_truncated};
pub use kernel_fit::{nnls_kernel_fit, KernelFitReport, Propagator};
pub use levy::{levy_modulus_ratio, levy_seed_study, levy_statistics, LevyStats};
pub use tv::{tv_refinement, tv_regularized, tv_regularized_ladder, Bump, PhaseFunctional};
