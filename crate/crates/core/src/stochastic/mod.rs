//! Stochastic integrals on discretized paths, divergences of path-space
//! vector fields and the Monte Carlo integration-by-parts harness.

pub mod anticipative;
pub mod divergence;
pub mod functional;
pub mod report;
pub mod transport;

pub use anticipative::{anticipative_stratonovich, anticipative_stratonovich_group};
pub use divergence::{divergence_base, divergence_left, divergence_right, AlgebraFieldK};
pub use functional::{functional_derivative, CylindricalFunctional};
pub use report::{ibp_check, McReport};
pub use transport::{transport_derivative, transport_derivative_dgamma};

use crate::lie_group::AlgebraElement;
use nalgebra::SVector;
use std::ops::{Add, Mul};

/// Values that can be integrated against increments of the same type.
pub trait Pairing: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn pair(&self, other: &Self) -> f64;
}

impl Pairing for f64 {
    fn pair(&self, other: &Self) -> f64 {
        self * other
    }
}

impl Pairing for AlgebraElement {
    fn pair(&self, other: &Self) -> f64 {
        self.dot(other)
    }
}

impl<const A: usize> Pairing for SVector<f64, A> {
    fn pair(&self, other: &Self) -> f64 {
        self.dot(other)
    }
}

/// Left-point sum `Σ ⟨f_k, Δx_k⟩`.
pub fn ito_integral<T: Pairing>(integrand: &[T], increments: &[T]) -> f64 {
    integrand.iter().zip(increments).map(|(f, dx)| f.pair(dx)).sum()
}

/// Midpoint sum `Σ ⟨½(f_k + f_{k+1}), Δx_k⟩`; `integrand` has one more entry than `increments`.
pub fn stratonovich_integral<T: Pairing>(integrand: &[T], increments: &[T]) -> f64 {
    debug_assert!(integrand.len() > increments.len());
    integrand
        .windows(2)
        .zip(increments)
        .map(|(f, dx)| ((f[0] + f[1]) * 0.5).pair(dx))
        .sum()
}
