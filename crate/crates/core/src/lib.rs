//! Numerics for Brownian motion on compact Lie groups and spheres, principal
//! bundle holonomy over based loop spaces, and kernel-represented differential
//! forms on those loop spaces.
//!
//! The crate is organised bottom-up:
//!
//! - [`lie_group`]: SU(2)/SO(3) calculus, heat kernels, Brownian motion and bridges.
//! - [`manifold`]: the round spheres S² and S³, Levi-Civita transport, bridges.
//! - [`bundle`]: trivial SU(2) bundles with a connection, holonomy, horizontal and
//!   vertical fields on the loop bundle, brackets and divergences.
//! - [`stochastic`]: Ito/Stratonovich sums, divergences, anticipative integrals and
//!   the Monte Carlo integration-by-parts harness.
//! - [`forms`]: kernel forms, wedge/exterior derivative, the canonical 2-form,
//!   the iterated-integral form, Chern–Simons transgression and Nualart–Pardoux
//!   constant estimation.

pub mod bundle;
pub mod error;
pub mod forms;
pub mod lie_group;
pub mod manifold;
pub mod mc;
pub mod stochastic;

pub use error::{Error, Result};
