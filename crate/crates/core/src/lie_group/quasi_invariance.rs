//! Girsanov densities for left and right translation of the group Brownian motion
//! by a deterministic C¹ path `k` with `k_0 = e`.
//!
//! Left: `d(kg) = (k' k⁻¹ ds + Ad_k dB)(kg)`, and `Ad_k B` is again a Brownian
//! motion, so the drift on the driving noise is `v = k' k⁻¹`.
//! Right: `d(gk) = (dB + Ad_g(k' k⁻¹) ds)(gk)`, drift `Ad_{g_s} v_s`.

use super::brownian::GroupPath;
use super::{AlgebraElement, LieGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Right-trivialized velocity `Log(k_{j+1} k_j⁻¹)/Δt` per interval.
pub fn right_velocity<G: LieGroup>(k: &[G]) -> Vec<AlgebraElement> {
    let dt = 1.0 / (k.len() - 1) as f64;
    k.windows(2)
        .map(|w| {
            w[1].compose(&w[0].inverse())
                .log_with_margin(0.0)
                .expect("translation path must be C¹ on the grid")
                * (1.0 / dt)
        })
        .collect()
}

/// `J(k) = exp(Σ ⟨u_j, ΔB_j⟩ − ½ Σ |v_j|² Δt)`, so that `E[F(k·g)] = E[F(g) J_l(k)]`
/// and `E[F(g·k)] = E[F(g) J_r(k)]`.
pub fn quasi_invariance_density<G: LieGroup>(k: &[G], path: &GroupPath<G>, side: Side) -> f64 {
    assert_eq!(k.len(), path.points.len(), "translation path must share the grid");
    let dt = path.dt();
    let v = right_velocity(k);
    let mut log_j = 0.0;
    for (j, (vj, db)) in v.iter().zip(&path.increments).enumerate() {
        let u = match side {
            Side::Left => *vj,
            Side::Right => path.points[j].adjoint(vj),
        };
        log_j += u.dot(db) - 0.5 * vj.norm_squared() * dt;
    }
    log_j.exp()
}
