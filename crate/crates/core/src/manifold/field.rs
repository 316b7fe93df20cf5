//! Tangent directions on path space: `X_s = τ_s H_s` with `H` a path in `T_x`.

use super::path::ManifoldPath;
use super::{Sphere, Vector};
use crate::{Error, Result};

/// Discretized `H: [0, 1] → T_x M` with `H_0 = H_1 = 0`.
#[derive(Clone, Debug)]
pub struct VectorFieldH<const A: usize> {
    pub values: Vec<Vector<A>>,
}

impl<const A: usize> VectorFieldH<A> {
    /// Samples `f` on the grid, projecting onto `T_x`. The endpoint values must vanish.
    pub fn from_fn(x: &Vector<A>, steps: usize, f: impl Fn(f64) -> Vector<A>) -> Result<Self> {
        for (which, s) in [(0u8, 0.0), (1u8, 1.0)] {
            let n = f(s).norm();
            if n > 1e-12 {
                return Err(Error::Endpoint { which, norm: n });
            }
        }
        let mut values: Vec<_> = (0..=steps)
            .map(|k| Sphere::<A>::project(x, &f(k as f64 / steps as f64)))
            .collect();
        values[0] = Vector::<A>::zeros();
        values[steps] = Vector::<A>::zeros();
        Ok(Self { values })
    }

    pub fn zero(steps: usize) -> Self {
        Self {
            values: vec![Vector::<A>::zeros(); steps + 1],
        }
    }

    pub fn steps(&self) -> usize {
        self.values.len() - 1
    }

    /// Forward difference `H'` on interval `k`.
    pub fn derivative(&self, k: usize) -> Vector<A> {
        (self.values[k + 1] - self.values[k]) * self.steps() as f64
    }

    /// Cameron–Martin norm squared `∫|H'|²`.
    pub fn energy(&self) -> f64 {
        let dt = 1.0 / self.steps() as f64;
        (0..self.steps()).map(|k| self.derivative(k).norm_squared() * dt).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }
}

/// `X_k = τ_k H_k ∈ T_{γ_k}`.
pub fn field_values<const A: usize>(h: &VectorFieldH<A>, path: &ManifoldPath<A>) -> Result<Vec<Vector<A>>> {
    if h.steps() != path.steps() {
        return Err(Error::InvalidArgument(format!(
            "field has {} steps, path has {}",
            h.steps(),
            path.steps()
        )));
    }
    Ok(path.transport.iter().zip(&h.values).map(|(t, v)| t * v).collect())
}
