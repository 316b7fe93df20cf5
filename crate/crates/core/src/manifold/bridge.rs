//! Brownian bridge on the sphere by a geodesic random walk with Doob drift.

use super::path::ManifoldPath;
use super::{Sphere, Vector};
use crate::mc::{normal, Rng};
use crate::{Error, Result};

fn tangent_gaussian<const A: usize>(p: &Vector<A>, rng: &mut Rng, dt: f64) -> Vector<A> {
    let g = Vector::<A>::from_fn(|_, _| normal(rng));
    Sphere::<A>::project(p, &g) * dt.sqrt()
}

/// `∇ ln p_τ(·, target)` at `p`.
pub fn guiding_drift<const A: usize>(p: &Vector<A>, target: &Vector<A>, tau: f64) -> Vector<A> {
    let Ok(l) = Sphere::<A>::log(p, target) else {
        return Vector::<A>::zeros();
    };
    let theta = l.norm();
    if theta < 1e-12 {
        return Vector::<A>::zeros();
    }
    l * (-Sphere::<A>::log_heat_slope(tau, theta) / theta)
}

/// Brownian bridge from `start` to `target` on `[0, 1]` with `steps` steps.
pub fn sample_brownian_bridge_manifold<const A: usize>(
    start: &Vector<A>,
    target: &Vector<A>,
    steps: usize,
    rng: &mut Rng,
) -> Result<ManifoldPath<A>> {
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("grid size {steps} < 2")));
    }
    for (which, p) in [(0u8, start), (1u8, target)] {
        let n = p.norm();
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::Endpoint { which, norm: n });
        }
    }
    let dt = 1.0 / steps as f64;
    let mut points = Vec::with_capacity(steps + 1);
    let mut p = *start;
    points.push(p);
    for k in 0..steps - 1 {
        let tau = 1.0 - k as f64 * dt;
        let v = guiding_drift(&p, target, tau) * dt + tangent_gaussian(&p, rng, dt);
        p = Sphere::<A>::geodesic_exp(&p, &v);
        points.push(p);
    }
    let proposal = guiding_drift(&p, target, dt) * dt + tangent_gaussian(&p, rng, dt);
    let forcing_correction = Sphere::<A>::distance(&Sphere::<A>::geodesic_exp(&p, &proposal), target);
    points.push(*target);
    let mut path = ManifoldPath::from_points(points)?;
    path.forcing_correction = forcing_correction;
    Ok(path)
}

/// Unconditioned Brownian motion by the same geodesic random walk.
pub fn sample_brownian_motion_manifold<const A: usize>(
    start: &Vector<A>,
    steps: usize,
    rng: &mut Rng,
) -> Result<ManifoldPath<A>> {
    let dt = 1.0 / steps as f64;
    let mut points = vec![*start];
    let mut p = *start;
    for _ in 0..steps {
        p = Sphere::<A>::geodesic_exp(&p, &tangent_gaussian(&p, rng, dt));
        points.push(p);
    }
    ManifoldPath::from_points(points)
}
