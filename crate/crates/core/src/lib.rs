//! Semidiscrete Schrödinger schemes on the periodic grid `{j / (N+1)}`.
//!
//! The conservative scheme `i u' + Δ_h u = 0` and the viscous scheme
//! `u' = (i + a) Δ_h u` are diagonal in the discrete Fourier basis, so both
//! are propagated exactly per mode. The `L^4_t L^4_x` mixed norm on `[0, T]`
//! is computed in closed form from the resonant pair structure and checked
//! against quadrature.

pub mod error;
pub mod experiments;
pub mod norms;
pub mod schemes;
pub mod spectral;

pub use error::{Error, Result};
pub use norms::{l4_mixed_analytic, l4_mixed_quadrature, MixedNormResult, QuadratureRule};
pub use num_complex::Complex64;
pub use schemes::{propagate, solution_at_nodes, SchemeConfig, SchemeKind, ViscosityRule};
pub use spectral::{dft, idft, lp_norm, GridSpec, GridVector, SpectralVector};
