//! Guided Brownian bridge: the left-increment scheme with the Doob drift
//! `∇ ln p_{1-t}(· , target)` and a forced final step.

use super::brownian::{gaussian_increment, GroupPath};
use super::{AlgebraElement, LieGroup};
use crate::mc::Rng;
use crate::{Error, Result};

/// Drift steering `g` towards `target` with remaining time `tau`.
///
/// With `Y = target g⁻¹` the remaining displacement is `Log Y`; the Riemannian
/// gradient of `ln p_τ(d(g, target))` points along `Log Y / |Log Y|` with
/// magnitude `-∂_θ ln p_τ`.
pub fn guiding_drift<G: LieGroup>(g: &G, target: &G, tau: f64) -> AlgebraElement {
    let y = target.compose(&g.inverse());
    let Ok(log) = y.log_with_margin(0.0) else {
        return AlgebraElement::zero();
    };
    let theta = log.norm();
    if theta < 1e-12 {
        return AlgebraElement::zero();
    }
    let slope = G::log_heat_slope(tau, theta);
    log * (-slope / theta)
}

pub fn sample_brownian_bridge<G: LieGroup>(
    target: &G,
    steps: usize,
    rng: &mut Rng,
) -> Result<GroupPath<G>> {
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("grid size {steps} < 2")));
    }
    let dt = 1.0 / steps as f64;
    let mut points = Vec::with_capacity(steps + 1);
    let mut increments = Vec::with_capacity(steps);
    let mut g = G::identity();
    points.push(g);
    for k in 0..steps - 1 {
        let tau = 1.0 - k as f64 * dt;
        let x = guiding_drift(&g, target, tau) * dt + gaussian_increment(rng, dt);
        g = G::exp(&x).compose(&g).reproject();
        points.push(g);
        increments.push(x);
    }
    let proposal = guiding_drift(&g, target, dt) * dt + gaussian_increment(rng, dt);
    let forced = target.compose(&g.inverse()).log()?;
    let forcing_correction = G::exp(&proposal).compose(&g).distance(target);
    increments.push(forced);
    points.push(*target);
    Ok(GroupPath {
        points,
        increments,
        forcing_correction,
    })
}
