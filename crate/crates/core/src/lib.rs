//! Numerical laboratory for K-theoretic central charges of rank-one GLSMs.
//!
//! The pieces:
//! - [`qseries`]: truncated `phi`, `theta`, Pochhammer symbols.
//! - [`glsm`]: model data, degrees, sectors, ages, Euler characteristics.
//! - [`branes`]: elliptic branes as theta-function products.
//! - [`integrals`]: the solid-torus integrand, residues and quadrature.
//! - [`central_charge`]: H-function coefficients, pairings and series.
//! - [`qde`]: q-difference operators and residuals.
//! - [`config`]: JSON model documents.

pub mod branes;
pub mod central_charge;
pub mod config;
pub mod error;
pub mod glsm;
pub mod integrals;
pub mod monomial;
pub mod qde;
pub mod qseries;
pub mod rat;

pub use error::{Error, Result};
pub use glsm::{GlsmModel, Phase};
pub use num_complex::Complex64 as C64;
pub use qseries::QContext;
