//! Local sections of `P(G) → G`, `g ↦ g_1`, and connections on that bundle.
//!
//! Tangent vectors at `g_1` are right-trivialized: `v` stands for `v g_1`.

use crate::lie_group::{AlgebraElement, LieGroup, Su2, DEFAULT_CUT_MARGIN};
use crate::Result;
use std::f64::consts::PI;

/// `ad_L` on `su(2)`: `Y ↦ [L, Y] = 2 L × Y`.
fn ad(l: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
    Su2::bracket(l, y)
}

/// Right-trivialized differential of `exp`: `(d/dε exp(L + εY)) exp(−L) = ((e^{ad_L} − 1)/ad_L) Y`.
pub fn dexp(l: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
    let phi = 2.0 * l.norm();
    let (c1, c2) = if phi < 1e-4 {
        (0.5 - phi * phi / 24.0, 1.0 / 6.0 - phi * phi / 120.0)
    } else {
        ((1.0 - phi.cos()) / (phi * phi), (phi - phi.sin()) / phi.powi(3))
    };
    let sy = ad(l, y);
    *y + sy * c1 + ad(l, &sy) * c2
}

/// Inverse of [`dexp`]: `(ad_L / (e^{ad_L} − 1)) Y`.
pub fn dexp_inv(l: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
    let phi = 2.0 * l.norm();
    let c2 = if phi < 1e-4 {
        1.0 / 12.0 + phi * phi / 720.0
    } else {
        (1.0 - (phi / 2.0) / (phi / 2.0).tan()) / (phi * phi)
    };
    let sy = ad(l, y);
    *y - sy * 0.5 + ad(l, &sy) * c2
}

/// A connection on `P(G) → G` presented through a section
/// `σ_s(g_1) = exp(φ(s) Log g_1)` and the horizontal lift `v ↦ φ(s) v`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum InfinityConnection {
    /// `φ(s) = s`.
    #[default]
    Linear,
    /// `φ(s) = s − sin(2πs)/(4π)`, a smooth increasing bijection of `[0, 1]`.
    Reparametrized,
}

impl InfinityConnection {
    pub fn phi(&self, s: f64) -> f64 {
        match self {
            Self::Linear => s,
            Self::Reparametrized => s - (2.0 * PI * s).sin() / (4.0 * PI),
        }
    }

    pub fn section(&self, g1: &Su2, s: f64) -> Result<Su2> {
        let l = g1.log_with_margin(DEFAULT_CUT_MARGIN)?;
        Ok(Su2::exp(&(l * self.phi(s))))
    }

    /// `(∂_v σ_s) σ_s⁻¹`, from the derivative of `exp`.
    pub fn section_derivative(&self, g1: &Su2, v: &AlgebraElement, s: f64) -> Result<AlgebraElement> {
        let l = g1.log_with_margin(DEFAULT_CUT_MARGIN)?;
        let dl = dexp_inv(&l, v);
        let phi = self.phi(s);
        Ok(dexp(&(l * phi), &(dl * phi)))
    }

    /// Horizontal lift of `v`: the left fiber field `a_s g_s` with `a_s = φ(s) v`.
    pub fn horizontal_lift(&self, v: &AlgebraElement, s: f64) -> AlgebraElement {
        *v * self.phi(s)
    }

    /// Connection form in the chart of the section:
    /// `K_s(g_1)(v) = (∂_v σ_s) σ_s⁻¹ − φ(s) v`, a loop in the algebra.
    pub fn form(&self, g1: &Su2, v: &AlgebraElement, s: f64) -> Result<AlgebraElement> {
        Ok(self.section_derivative(g1, v, s)? - self.horizontal_lift(v, s))
    }
}

/// `g_{i,s}(g_1) = exp(s Log g_1)`.
pub fn local_section(g1: &Su2, s: f64) -> Result<Su2> {
    InfinityConnection::Linear.section(g1, s)
}

/// `K_{i,s}(g_1)(v)` for the given connection.
pub fn infinity_connection_form(
    conn: InfinityConnection,
    g1: &Su2,
    v: &AlgebraElement,
    s: f64,
) -> Result<AlgebraElement> {
    conn.form(g1, v, s)
}
