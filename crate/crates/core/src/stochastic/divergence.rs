//! Divergences of tangent fields on path and loop spaces, as Ito sums.

use crate::lie_group::{AlgebraElement, GroupPath, LieGroup};
use crate::manifold::{ManifoldPath, Sphere, VectorFieldH};
use crate::{Error, Result};

/// Deterministic `K: [0, 1] → 𝔤` on the grid with `K_0 = K_1 = 0`.
#[derive(Clone, Debug)]
pub struct AlgebraFieldK {
    pub values: Vec<AlgebraElement>,
}

impl AlgebraFieldK {
    pub fn from_fn(steps: usize, f: impl Fn(f64) -> AlgebraElement) -> Result<Self> {
        for (which, s) in [(0u8, 0.0), (1u8, 1.0)] {
            let n = f(s).norm();
            if n > 1e-12 {
                return Err(Error::Endpoint { which, norm: n });
            }
        }
        let mut values: Vec<_> = (0..=steps).map(|k| f(k as f64 / steps as f64)).collect();
        values[0] = AlgebraElement::zero();
        values[steps] = AlgebraElement::zero();
        Ok(Self { values })
    }

    pub fn zero(steps: usize) -> Self {
        Self {
            values: vec![AlgebraElement::zero(); steps + 1],
        }
    }

    pub fn steps(&self) -> usize {
        self.values.len() - 1
    }

    /// Increment `K_{k+1} − K_k`.
    pub fn increment(&self, k: usize) -> AlgebraElement {
        self.values[k + 1] - self.values[k]
    }

    /// Forward difference quotient `(K_{k+1} − K_k) / Δt`.
    pub fn derivative(&self, k: usize) -> AlgebraElement {
        self.increment(k) * self.steps() as f64
    }

    pub fn energy(&self) -> f64 {
        let n = self.steps() as f64;
        (0..self.steps()).map(|k| self.increment(k).norm_squared() * n).sum()
    }
}

fn check_grid(field: usize, path: usize) -> Result<()> {
    if field != path {
        return Err(Error::InvalidArgument(format!(
            "field has {field} steps, path has {path}"
        )));
    }
    Ok(())
}

/// `∫⟨τ_s H'_s, δγ_s⟩ + ½∫⟨S_{X_s}, δγ_s⟩`, pulled back to `T_x` through the
/// antidevelopment: `Σ ⟨H'_k + ½(d−1) H_k, w_k⟩`.
pub fn divergence_base<const A: usize>(h: &VectorFieldH<A>, path: &ManifoldPath<A>) -> Result<f64> {
    check_grid(h.steps(), path.steps())?;
    let ric = Sphere::<A>::DIM as f64 - 1.0;
    Ok((0..path.steps())
        .map(|k| (h.derivative(k) + h.values[k] * (0.5 * ric)).dot(&path.antidevelopment[k]))
        .sum())
}

/// Divergence of the left field `K_s g_s`: `Σ ⟨K'_k, ΔB_k⟩`.
pub fn divergence_left<G: LieGroup>(k: &AlgebraFieldK, path: &GroupPath<G>) -> Result<f64> {
    check_grid(k.steps(), path.steps())?;
    Ok((0..path.steps())
        .map(|j| k.derivative(j).dot(&path.increments[j]))
        .sum())
}

/// Divergence of the right field `g_s K_s`: `Σ ⟨Ad_{g_k} K'_k, ΔB_k⟩`.
pub fn divergence_right<G: LieGroup>(k: &AlgebraFieldK, path: &GroupPath<G>) -> Result<f64> {
    check_grid(k.steps(), path.steps())?;
    Ok((0..path.steps())
        .map(|j| path.points[j].adjoint(&k.derivative(j)).dot(&path.increments[j]))
        .sum())
}
