//! Compact Lie group calculus for SU(2) and SO(3).
//!
//! Both groups have three-dimensional Lie algebras; an [`AlgebraElement`] holds
//! coordinates in a fixed basis that is orthonormal for the bi-invariant metric
//! `⟨A, B⟩ = -c_G tr(AB)`:
//!
//! | group | basis          | c_G | bracket          | injectivity radius |
//! |-------|----------------|-----|------------------|--------------------|
//! | SU(2) | k_j = -i σ_j   | 1/2 | [a, b] = 2 a × b | π                  |
//! | SO(3) | (J_j)_{ik} = -ε_{jik} | 1/2 | [a, b] = a × b | π             |
//!
//! With this normalization SU(2) is isometric to the unit sphere S³ and the
//! logarithm on the principal branch has norm at most π in both groups.

mod algebra;
pub mod bridge;
pub mod brownian;
pub mod heat_kernel;
pub mod loop_transform;
pub mod quasi_invariance;
mod so3;
mod su2;

pub use algebra::AlgebraElement;
pub use bridge::sample_brownian_bridge;
pub use brownian::{sample_brownian_motion, GroupPath};
pub use heat_kernel::{HeatKernelModel, HeatKernelValue};
pub use loop_transform::{path_to_loop, Cutoff};
pub use quasi_invariance::{quasi_invariance_density, Side};
pub use so3::So3;
pub use su2::Su2;

use crate::Result;
use std::fmt::Debug;

/// Default margin on `tr g` away from the cut locus.
pub const DEFAULT_CUT_MARGIN: f64 = 1e-3;

pub trait LieGroup: Copy + Clone + Debug + PartialEq + Send + Sync + 'static {
    const NAME: &'static str;

    fn identity() -> Self;
    fn compose(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;

    /// Matrix exponential of an algebra element.
    fn exp(a: &AlgebraElement) -> Self;

    /// Principal logarithm; fails when `tr g` is within `margin` of its value on
    /// the cut locus.
    fn log_with_margin(&self, margin: f64) -> Result<AlgebraElement>;

    fn log(&self) -> Result<AlgebraElement> {
        self.log_with_margin(DEFAULT_CUT_MARGIN)
    }

    /// `Ad_g a = g a g⁻¹`.
    fn adjoint(&self, a: &AlgebraElement) -> AlgebraElement;

    fn bracket(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement;

    /// Geodesic distance to the identity, in `[0, π]`; the conjugacy-class parameter.
    fn angle(&self) -> f64;

    /// Real part of the trace in the defining representation.
    fn real_trace(&self) -> f64;

    /// Nearest group element (removes round-off drift).
    fn reproject(&self) -> Self;

    /// `‖g* g − I‖_F` in the defining representation.
    fn unitarity_defect(&self) -> f64;

    /// Real part of the determinant in the defining representation.
    fn determinant(&self) -> f64;

    /// `-c_G tr(AB)` computed from the defining matrices; equals the coordinate dot product.
    fn matrix_inner(a: &AlgebraElement, b: &AlgebraElement) -> f64;

    /// Geodesic distance between two elements.
    fn distance(&self, other: &Self) -> f64 {
        self.inverse().compose(other).angle()
    }

    // Representation data used by the heat kernel character series.
    fn irrep_dim(l: usize) -> f64;
    /// Eigenvalue of −Δ on the `l`-th irreducible character.
    fn casimir(l: usize) -> f64;
    fn character(l: usize, angle: f64) -> f64;
    /// Density of the class angle under normalized Haar measure.
    fn haar_angle_density(angle: f64) -> f64;

    /// `ln p_t` as a function of the class angle, accurate for all `t > 0`.
    fn log_heat_kernel(t: f64, angle: f64) -> f64;

    /// `d/dθ ln p_t(θ)`.
    fn log_heat_slope(t: f64, angle: f64) -> f64 {
        let h = 1e-6;
        let a = (angle - h).max(0.0);
        let b = (angle + h).min(std::f64::consts::PI);
        (Self::log_heat_kernel(t, b) - Self::log_heat_kernel(t, a)) / (b - a)
    }
}

/// Inner product of the algebra: `-c_G tr(AB)`, i.e. the coordinate dot product.
pub fn algebra_inner(a: &AlgebraElement, b: &AlgebraElement) -> f64 {
    a.dot(b)
}
