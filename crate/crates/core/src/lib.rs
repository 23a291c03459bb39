//! Numerical toolkit for the PT-symmetric cubic Dirac family
//!
//! ```text
//! i u_xi  + (1 - gamma) v + (A u v* + B v u*) v = 0
//! i v_eta + (1 + gamma) u + (A v u* + B u v*) u = 0
//! ```
//!
//! with `xi = (t - x)/2` light-cone coordinates (`d_xi = d_t - d_x`,
//! `d_eta = d_t + d_x`). Thirring is `(A, B) = (1, 0)`, Gross-Neveu is
//! `(1, 1)` and the new model is `(0, 1)`.
//!
//! * [`models`]: nonlinearities, stationary residuals, conserved densities.
//! * [`solitons`]: closed-form solitons.
//! * [`ptquad`]: new-model solitons at `gamma > 0` by quadrature in the
//!   hyperbolic angle `chi`.
//! * [`existence`]: the `(gamma, omega)` existence domain.
//! * [`stability`]: Chebyshev collocation spectra (feature `spectrum`).
//! * [`evolution`]: characteristic time stepping and conservation ledgers.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod existence;
pub mod evolution;
pub mod grid;
pub mod models;
pub mod ptquad;
pub mod roots;
pub mod solitons;
#[cfg(feature = "spectrum")]
pub mod stability;

mod gauss;

pub use error::{Error, Result};
pub use models::{ModelKind, ModelParams};
pub use num_complex::Complex64;
pub use solitons::SolitonProfile;
