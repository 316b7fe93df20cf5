//! The loop bundle `L_e(Q) → L_x(M)`: sampling the total measure, horizontal and
//! vertical fields, and their divergences.
//!
//! Points are pairs `(γ, g)` with `g` a path from `e` to `T_1⁻¹(γ)`. Fiber
//! variations are right-trivialized: a horizontal field moves `g_s` by `a_s g_s`,
//! a vertical field by `g_s K_s`.

use super::connection::BundleSpec;
use super::section::InfinityConnection;
use super::transport::{bundle_transport, holonomy_derivative_path};
use crate::lie_group::{sample_brownian_bridge, AlgebraElement, GroupPath, LieGroup, Su2};
use crate::manifold::{field_values, sample_brownian_bridge_manifold, ManifoldPath, Vector, VectorFieldH};
use crate::mc::Rng;
use crate::stochastic::{divergence_base, divergence_right, AlgebraFieldK, Pairing};
use crate::{Error, Result};
use std::ops::{Add, Mul};

/// Attempts before giving up on a chart-admissible sample.
const MAX_REJECTIONS: usize = 1000;

/// A point `q = (γ, h)` of `Q = S^{A−1} × SU(2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TotalPoint<const A: usize> {
    pub base: Vector<A>,
    pub fiber: Su2,
}

/// A tangent vector to `Q`: ambient base part and right-trivialized fiber part `δh h⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TotalTangent<const A: usize> {
    pub base: Vector<A>,
    pub fiber: AlgebraElement,
}

impl<const A: usize> Add for TotalTangent<A> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            base: self.base + o.base,
            fiber: self.fiber + o.fiber,
        }
    }
}

impl<const A: usize> Mul<f64> for TotalTangent<A> {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        Self {
            base: self.base * c,
            fiber: self.fiber * c,
        }
    }
}

impl<const A: usize> Pairing for TotalTangent<A> {
    fn pair(&self, o: &Self) -> f64 {
        self.base.dot(&o.base) + self.fiber.dot(&o.fiber)
    }
}

#[derive(Clone, Debug)]
pub struct BundleLoop<const A: usize> {
    pub base: ManifoldPath<A>,
    /// Bridge from `e` to `T_1⁻¹`.
    pub fiber: GroupPath<Su2>,
    /// Horizontal lift `T_s` of the base loop.
    pub transport: Vec<Su2>,
    pub holonomy: Su2,
    /// Samples discarded because the holonomy fell outside the chart.
    pub rejections: usize,
}

impl<const A: usize> BundleLoop<A> {
    /// Assembles a loop from its parts, checking `g_1 = T_1⁻¹`.
    pub fn new(base: ManifoldPath<A>, fiber: GroupPath<Su2>, spec: &BundleSpec<A>) -> Result<Self> {
        let transport = bundle_transport(&base, spec);
        let holonomy = *transport.last().unwrap();
        let gap = fiber.endpoint().distance(&holonomy.inverse());
        if gap > 1e-6 {
            return Err(Error::Endpoint { which: 1, norm: gap });
        }
        Ok(Self {
            base,
            fiber,
            transport,
            holonomy,
            rejections: 0,
        })
    }

    pub fn steps(&self) -> usize {
        self.base.steps()
    }

    pub fn endpoint_fiber(&self) -> &Su2 {
        self.fiber.endpoint()
    }

    /// `q_k = (γ_k, T_k g_k)`.
    pub fn points(&self) -> Vec<TotalPoint<A>> {
        self.base
            .points
            .iter()
            .zip(self.transport.iter().zip(&self.fiber.points))
            .map(|(p, (t, g))| TotalPoint {
                base: *p,
                fiber: t.compose(g),
            })
            .collect()
    }
}

/// Samples `dP_{1,x}(γ) ⊗ dQ_{T_1⁻¹(γ)}(g)`; base and fiber draw from separate streams.
pub fn sample_total<const A: usize>(
    spec: &BundleSpec<A>,
    steps: usize,
    base_rng: &mut Rng,
    fiber_rng: &mut Rng,
) -> Result<BundleLoop<A>> {
    let x = spec.base_point();
    let mut rejections = 0;
    loop {
        let base = sample_brownian_bridge_manifold(&x, &x, steps, base_rng)?;
        let transport = bundle_transport(&base, spec);
        let holonomy = *transport.last().unwrap();
        let target = holonomy.inverse();
        let fiber = target
            .log()
            .and_then(|_| sample_brownian_bridge(&target, steps, fiber_rng));
        match fiber {
            Ok(fiber) => {
                return Ok(BundleLoop {
                    base,
                    fiber,
                    transport,
                    holonomy,
                    rejections,
                })
            }
            Err(Error::CutLocus { .. }) if rejections < MAX_REJECTIONS => rejections += 1,
            Err(e) => return Err(e),
        }
    }
}

/// `X^H(H)` in `(γ, g)` coordinates.
#[derive(Clone, Debug)]
pub struct HorizontalField<const A: usize> {
    /// `X_k = τ_k H_k`.
    pub base: Vec<Vector<A>>,
    /// `η_k = T_k⁻¹ δT_k`.
    pub eta: Vec<AlgebraElement>,
    /// Right-trivialized variation of `g_1 = T_1⁻¹`: `ξ = −η_1`.
    pub xi: AlgebraElement,
    /// `a_k`: the fiber moves by `a_k g_k`; `a_0 = 0`, `a_N = ξ`.
    pub fiber: Vec<AlgebraElement>,
    /// Fiber part in the chart `g = σ(g_1) l`: `δl l⁻¹ = −Ad_{σ⁻¹} K(ξ)`; vanishes at both ends.
    pub chart_fiber: Vec<AlgebraElement>,
}

impl<const A: usize> HorizontalField<A> {
    /// Tangents `(X_k, δh_k h_k⁻¹)` with `δh h⁻¹ = Ad_T(η + a)`.
    pub fn tangents(&self, lp: &BundleLoop<A>) -> Vec<TotalTangent<A>> {
        (0..self.base.len())
            .map(|k| TotalTangent {
                base: self.base[k],
                fiber: lp.transport[k].adjoint(&(self.eta[k] + self.fiber[k])),
            })
            .collect()
    }
}

/// Horizontal field for arbitrary base values `X_k ∈ T_{γ_k}`, e.g. a bracket.
pub fn horizontal_field_from_values<const A: usize>(
    xs: Vec<Vector<A>>,
    lp: &BundleLoop<A>,
    spec: &BundleSpec<A>,
    conn: InfinityConnection,
) -> Result<HorizontalField<A>> {
    let eta = holonomy_derivative_path(&lp.base, &lp.transport, spec, &xs)?;
    let xi = -*eta.last().unwrap();
    let n = lp.steps();
    let g1 = lp.endpoint_fiber();
    let mut fiber = Vec::with_capacity(n + 1);
    let mut chart_fiber = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let s = k as f64 / n as f64;
        fiber.push(conn.horizontal_lift(&xi, s));
        let sigma = conn.section(g1, s)?;
        chart_fiber.push(-sigma.inverse().adjoint(&conn.form(g1, &xi, s)?));
    }
    Ok(HorizontalField {
        base: xs,
        eta,
        xi,
        fiber,
        chart_fiber,
    })
}

/// `X^H(H)_s = τ_s H_s − K_s(⟨dT_1⁻¹, X⟩) ·` in the chart; stored in both presentations.
pub fn horizontal_field<const A: usize>(
    h: &VectorFieldH<A>,
    lp: &BundleLoop<A>,
    spec: &BundleSpec<A>,
    conn: InfinityConnection,
) -> Result<HorizontalField<A>> {
    horizontal_field_from_values(field_values(h, &lp.base)?, lp, spec, conn)
}

/// `X^V(K)_s = g_s K_s`.
#[derive(Clone, Debug)]
pub struct VerticalField {
    pub k: AlgebraFieldK,
}

impl VerticalField {
    pub fn norm_squared(&self) -> f64 {
        self.k.energy()
    }

    pub fn tangents<const A: usize>(&self, lp: &BundleLoop<A>) -> Vec<TotalTangent<A>> {
        lp.points()
            .iter()
            .zip(&self.k.values)
            .map(|(q, k)| TotalTangent {
                base: Vector::<A>::zeros(),
                fiber: q.fiber.adjoint(k),
            })
            .collect()
    }
}

pub fn vertical_field(k: &AlgebraFieldK) -> Result<VerticalField> {
    for (which, v) in [(0u8, k.values[0]), (1u8, k.values[k.steps()])] {
        if v.norm() > 0.0 {
            return Err(Error::Endpoint { which, norm: v.norm() });
        }
    }
    Ok(VerticalField { k: k.clone() })
}

/// Norm of `X^H(H) + X^V(K)` in the direct-sum metric.
pub fn mixed_norm_squared<const A: usize>(h: &VectorFieldH<A>, v: &VerticalField) -> f64 {
    h.energy() + v.norm_squared()
}

/// Right-trivialized gradient of `ln p_1` at `g`.
fn log_heat_gradient(g: &Su2) -> Result<AlgebraElement> {
    let l = g.log_with_margin(0.0)?;
    let theta = l.norm();
    if theta < 1e-12 {
        return Ok(AlgebraElement::zero());
    }
    Ok(l * (Su2::log_heat_slope(1.0, theta) / theta))
}

/// `div X^H(H) = Σ⟨H'_k + ½ Ric H_k, w_k⟩ + Σ⟨a'_k, ΔB_k⟩ + ⟨∇ ln p_1(g_1), ξ⟩`.
///
/// The first term is the base divergence; the second is the divergence of the
/// left fiber field `a g`; the last accounts for the fiber bridge being pinned
/// at the moving target `T_1⁻¹(γ)`.
pub fn divergence_horizontal<const A: usize>(
    h: &VectorFieldH<A>,
    field: &HorizontalField<A>,
    lp: &BundleLoop<A>,
) -> Result<f64> {
    let base = divergence_base(h, &lp.base)?;
    let n = lp.steps() as f64;
    let fiber: f64 = (0..lp.steps())
        .map(|k| ((field.fiber[k + 1] - field.fiber[k]) * n).dot(&lp.fiber.increments[k]))
        .sum();
    let pin = log_heat_gradient(lp.endpoint_fiber())?.dot(&field.xi);
    Ok(base + fiber + pin)
}

/// `div X^V(K) = Σ ⟨Ad_{g_k} K'_k, ΔB_k⟩`.
pub fn divergence_vertical<const A: usize>(k: &AlgebraFieldK, lp: &BundleLoop<A>) -> Result<f64> {
    divergence_right(k, &lp.fiber)
}
