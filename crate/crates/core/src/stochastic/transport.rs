//! Covariant derivative of the Levi-Civita transport along a path variation.

use crate::manifold::{Frame, ManifoldPath, Vector, VectorFieldH};
use crate::{Error, Result};

/// `∇_X τ_s = τ_s ∫₀^s τ_u⁻¹ R(dγ_u, X_u) τ_u` for `X = τH`, as ambient maps `T_x → T_{γ_s}`.
///
/// On the unit sphere `τ_u⁻¹ R(dγ_u, X_u) τ_u = w Hᵀ − H wᵀ` with `w` the
/// antidevelopment increment, so the Stratonovich sum only needs `H` at midpoints.
pub fn transport_derivative<const A: usize>(
    path: &ManifoldPath<A>,
    h: &VectorFieldH<A>,
) -> Result<Vec<Frame<A>>> {
    if h.steps() != path.steps() {
        return Err(Error::InvalidArgument(format!(
            "field has {} steps, path has {}",
            h.steps(),
            path.steps()
        )));
    }
    let mut acc = Frame::<A>::zeros();
    let mut out = Vec::with_capacity(path.steps() + 1);
    out.push(acc);
    for k in 0..path.steps() {
        let w = path.antidevelopment[k];
        let hm = (h.values[k] + h.values[k + 1]) * 0.5;
        acc += w * hm.transpose() - hm * w.transpose();
        out.push(path.transport[k + 1] * acc);
    }
    Ok(out)
}

/// `∇_X dγ_s = τ_s H'_s ds` per interval.
pub fn transport_derivative_dgamma<const A: usize>(path: &ManifoldPath<A>, h: &VectorFieldH<A>) -> Vec<Vector<A>> {
    let dt = path.dt();
    (0..path.steps())
        .map(|k| path.transport[k] * h.derivative(k) * dt)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{field_values, Sphere, S2};
    use std::f64::consts::PI;

    fn smooth_path(n: usize) -> ManifoldPath<3> {
        let pts = (0..=n)
            .map(|k| {
                let s = k as f64 / n as f64;
                Sphere::<3>::normalize(&Vector::<3>::new((2.0 * PI * s).sin() * 0.8, s * (1.0 - s) * 3.0, 1.0))
            })
            .collect();
        ManifoldPath::from_points(pts).unwrap()
    }

    #[test]
    fn zero_field() {
        let p = smooth_path(32);
        let d = transport_derivative(&p, &VectorFieldH::zero(32)).unwrap();
        assert!(d.iter().all(|m| m.norm() == 0.0));
    }

    #[test]
    fn matches_perturbed_path() {
        let n = 2000;
        let path = smooth_path(n);
        let x = *path.base();
        let h = VectorFieldH::from_fn(&x, n, |s| Vector::<3>::new((PI * s).sin(), 0.5 * (2.0 * PI * s).sin(), 0.0)).unwrap();
        let xs = field_values(&h, &path).unwrap();
        let moved = |e: f64| {
            let pts = path.points.iter().zip(&xs).map(|(p, v)| S2::geodesic_exp(p, &(v * e))).collect();
            ManifoldPath::from_points(pts).unwrap()
        };
        let e = 1e-5;
        let (pp, pm) = (moved(e), moved(-e));
        let d = transport_derivative(&path, &h).unwrap();
        for &k in &[n / 3, n / 2, n] {
            let g = path.points[k];
            let proj = Frame::<3>::identity() - g * g.transpose();
            let px = Frame::<3>::identity() - x * x.transpose();
            let fd = proj * (pp.transport[k] - pm.transport[k]) / (2.0 * e) * px;
            let an = d[k] * px;
            assert!((fd - an).norm() < 1e-3 * fd.norm().max(1e-2), "k={k}\n{fd}\n{an}");
        }
    }
}
