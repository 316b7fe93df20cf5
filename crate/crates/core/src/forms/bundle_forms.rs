//! Forms on the loop bundle `L_e(Q)`: the pulled-back canonical form `(f*)*c`,
//! the iterated-integral form `μ`, the transgression `τ(ν)` of the Chern–Simons
//! form and the Carey–Murray form `F_Q = (f*)*c − π*(μ + τ(ν))`.
//!
//! Tangents are written in `(γ, g)` coordinates (see [`LoopTangent`]).

use super::canonical::{canonical_two_form, C_G};
use super::kernel::shuffles;
use crate::bundle::{
    bracket_horizontal, holonomy_derivative_path, horizontal_field, BundleLoop, BundleSpec, ConnectionForm,
    InfinityConnection, TotalTangent,
};
use crate::lie_group::{AlgebraElement, LieGroup, Su2};
use crate::manifold::{Sphere, Vector, VectorFieldH};
use crate::stochastic::AlgebraFieldK;
use crate::{Error, Result};
use std::sync::Arc;

/// A tangent vector to `L_e(Q)` at a loop `(γ, g)`: ambient base vectors `δγ_k`
/// and right-trivialized fiber variations `δg_k g_k⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopTangent<const A: usize> {
    pub base: Vec<Vector<A>>,
    pub fiber: Vec<AlgebraElement>,
}

impl<const A: usize> LoopTangent<A> {
    pub fn zero(steps: usize) -> Self {
        Self {
            base: vec![Vector::<A>::zeros(); steps + 1],
            fiber: vec![AlgebraElement::zero(); steps + 1],
        }
    }

    /// Left-trivialized fiber variation `g_k⁻¹ δg_k`.
    pub fn fiber_left(&self, lp: &BundleLoop<A>) -> Vec<AlgebraElement> {
        lp.fiber
            .points
            .iter()
            .zip(&self.fiber)
            .map(|(g, a)| g.inverse().adjoint(a))
            .collect()
    }

    /// Tangents to `Q` along `q_k = T_k g_k`: `δh h⁻¹ = Ad_T(η + δg g⁻¹)`.
    pub fn total_tangents(&self, lp: &BundleLoop<A>, spec: &BundleSpec<A>) -> Result<Vec<TotalTangent<A>>> {
        let eta = holonomy_derivative_path(&lp.base, &lp.transport, spec, &self.base)?;
        Ok((0..self.base.len())
            .map(|k| TotalTangent {
                base: self.base[k],
                fiber: lp.transport[k].adjoint(&(eta[k] + self.fiber[k])),
            })
            .collect())
    }
}

/// Generators of the tangent space: horizontal `X^H(H)` and vertical `X^V(K)` fields.
#[derive(Clone, Debug)]
pub enum TotalField<const A: usize> {
    Horizontal(VectorFieldH<A>),
    Vertical(AlgebraFieldK),
}

impl<const A: usize> TotalField<A> {
    pub fn tangent(&self, lp: &BundleLoop<A>, spec: &BundleSpec<A>, conn: InfinityConnection) -> Result<LoopTangent<A>> {
        match self {
            Self::Horizontal(h) => {
                let f = horizontal_field(h, lp, spec, conn)?;
                Ok(LoopTangent {
                    base: f.base,
                    fiber: f.fiber,
                })
            }
            Self::Vertical(k) => Ok(LoopTangent {
                base: vec![Vector::<A>::zeros(); k.values.len()],
                fiber: lp
                    .fiber
                    .points
                    .iter()
                    .zip(&k.values)
                    .map(|(g, k)| g.adjoint(k))
                    .collect(),
            }),
        }
    }
}

/// `[X, Y]` for generator fields: the horizontal–horizontal decomposition, zero for
/// mixed pairs, and `X^V([K¹, K²])` for vertical pairs.
pub fn field_bracket<const A: usize>(
    x: &TotalField<A>,
    y: &TotalField<A>,
    lp: &BundleLoop<A>,
    spec: &BundleSpec<A>,
    conn: InfinityConnection,
) -> Result<LoopTangent<A>> {
    match (x, y) {
        (TotalField::Horizontal(h1), TotalField::Horizontal(h2)) => {
            let d = bracket_horizontal(h1, h2, lp, spec, conn)?;
            Ok(LoopTangent {
                base: d.base().to_vec(),
                fiber: d.fiber(),
            })
        }
        (TotalField::Vertical(k1), TotalField::Vertical(k2)) => {
            let values = k1.values.iter().zip(&k2.values).map(|(a, b)| Su2::bracket(a, b)).collect();
            TotalField::Vertical(AlgebraFieldK { values }).tangent(lp, spec, conn)
        }
        _ => Ok(LoopTangent::zero(lp.steps())),
    }
}

/// `(f*)*c(U, V) = c(g⁻¹δ_U g, g⁻¹δ_V g)`.
pub fn fiber_canonical<const A: usize>(lp: &BundleLoop<A>, u: &LoopTangent<A>, v: &LoopTangent<A>) -> Result<f64> {
    canonical_two_form(&u.fiber_left(lp), &v.fiber_left(lp))
}

/// `α_k(X) = T⁻¹ F(Δγ_k, X) T` at the interval midpoints.
fn curvature_increments<const A: usize>(lp: &BundleLoop<A>, spec: &BundleSpec<A>, x: &[Vector<A>]) -> Vec<AlgebraElement> {
    let conn = spec.connection.as_ref();
    (0..lp.steps())
        .map(|k| {
            let (p, q) = (lp.base.points[k], lp.base.points[k + 1]);
            let m = Sphere::<A>::normalize(&(p + q));
            let dg = Sphere::<A>::project(&m, &(q - p));
            let xm = Sphere::<A>::project(&m, &((x[k] + x[k + 1]) * 0.5));
            let half = Su2::exp(&(conn.eval(&m, &(q - p)) * -0.5)).compose(&lp.transport[k]);
            half.inverse().adjoint(&conn.curvature(&m, &dg, &xm))
        })
        .collect()
}

/// `μ(X, Y) = c_G ∬_{u<s} ⟨α_s(X), α_u(Y)⟩ − ⟨α_s(Y), α_u(X)⟩`.
pub fn mu_form<const A: usize>(lp: &BundleLoop<A>, spec: &BundleSpec<A>, x: &[Vector<A>], y: &[Vector<A>]) -> f64 {
    if spec.connection.is_flat() {
        return 0.0;
    }
    let (ax, ay) = (curvature_increments(lp, spec, x), curvature_increments(lp, spec, y));
    let (mut px, mut py) = (AlgebraElement::zero(), AlgebraElement::zero());
    let mut total = 0.0;
    for k in 0..ax.len() {
        total += ax[k].dot(&py) - ay[k].dot(&px);
        px += ax[k];
        py += ay[k];
    }
    C_G * total
}

/// Chern–Simons 3-form `ν = c_G (⟨A ∧ dA⟩ + ⅓⟨A ∧ [A ∧ A]⟩)` at `p`, with
/// `dA(X, Y) = F(X, Y) − [AX, AY]` and `[A ∧ A](X, Y) = 2[AX, AY]`.
pub fn chern_simons<const A: usize>(
    conn: &dyn ConnectionForm<A>,
    p: &Vector<A>,
    a: &Vector<A>,
    b: &Vector<A>,
    c: &Vector<A>,
) -> f64 {
    let v = [a, b, c];
    let av: Vec<AlgebraElement> = v.iter().map(|x| conn.eval(p, x)).collect();
    let da = |i: usize, j: usize| conn.curvature(p, v[i], v[j]) - Su2::bracket(&av[i], &av[j]);
    let aa = |i: usize, j: usize| Su2::bracket(&av[i], &av[j]) * 2.0;
    // (α ∧ β)(X₀, X₁, X₂) = α(X₀)β(X₁, X₂) − α(X₁)β(X₀, X₂) + α(X₂)β(X₀, X₁)
    let wedge = |beta: &dyn Fn(usize, usize) -> AlgebraElement| {
        av[0].dot(&beta(1, 2)) - av[1].dot(&beta(0, 2)) + av[2].dot(&beta(0, 1))
    };
    C_G * (wedge(&da) + wedge(&aa) / 3.0)
}

/// First Pontryagin density `c_G ⟨F ∧ F⟩` on four vectors at `p`.
pub fn p1_density<const A: usize>(conn: &dyn ConnectionForm<A>, p: &Vector<A>, v: [&Vector<A>; 4]) -> f64 {
    shuffles(4, 2)
        .iter()
        .map(|(a, b, sign)| {
            let f1 = conn.curvature(p, v[a[0]], v[a[1]]);
            let f2 = conn.curvature(p, v[b[0]], v[b[1]]);
            sign * f1.dot(&f2)
        })
        .sum::<f64>()
        * C_G
}

/// `τ(ν)(X, Y) = ∫₀¹ ν(∘dγ_s, X_s, Y_s)`, midpoint rule.
pub fn transgression_tau_nu<const A: usize>(
    lp: &BundleLoop<A>,
    spec: &BundleSpec<A>,
    x: &[Vector<A>],
    y: &[Vector<A>],
) -> f64 {
    if spec.connection.is_flat() {
        return 0.0;
    }
    let conn = spec.connection.as_ref();
    (0..lp.steps())
        .map(|k| {
            let (p, q) = (lp.base.points[k], lp.base.points[k + 1]);
            let m = Sphere::<A>::normalize(&(p + q));
            let dg = Sphere::<A>::project(&m, &(q - p));
            let xm = Sphere::<A>::project(&m, &((x[k] + x[k + 1]) * 0.5));
            let ym = Sphere::<A>::project(&m, &((y[k] + y[k + 1]) * 0.5));
            chern_simons(conn, &m, &dg, &xm, &ym)
        })
        .sum()
}

/// `F_Q(U, V) = (f*)*c(U, V) − μ(δ_Uγ, δ_Vγ) − τ(ν)(δ_Uγ, δ_Vγ)`.
pub fn carey_murray<const A: usize>(
    lp: &BundleLoop<A>,
    spec: &BundleSpec<A>,
    u: &LoopTangent<A>,
    v: &LoopTangent<A>,
) -> Result<f64> {
    Ok(fiber_canonical(lp, u, v)? - mu_form(lp, spec, &u.base, &v.base) - transgression_tau_nu(lp, spec, &u.base, &v.base))
}

type LoopFormFn<const A: usize> = dyn Fn(&BundleLoop<A>, &[LoopTangent<A>]) -> Result<f64> + Send + Sync;

/// A form on `L_e(Q)` evaluated pointwise on tangent vectors.
#[derive(Clone)]
pub struct LoopForm<const A: usize> {
    pub name: String,
    pub degree: usize,
    eval: Arc<LoopFormFn<A>>,
}

impl<const A: usize> std::fmt::Debug for LoopForm<A> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LoopForm({}, {})", self.name, self.degree)
    }
}

impl<const A: usize> LoopForm<A> {
    pub fn new(
        name: impl Into<String>,
        degree: usize,
        eval: impl Fn(&BundleLoop<A>, &[LoopTangent<A>]) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            degree,
            eval: Arc::new(eval),
        }
    }

    pub fn eval(&self, lp: &BundleLoop<A>, t: &[LoopTangent<A>]) -> Result<f64> {
        if t.len() != self.degree {
            return Err(Error::DegreeMismatch {
                h: self.degree,
                v: 0,
                got_h: t.len(),
                got_v: 0,
            });
        }
        (self.eval)(lp, t)
    }

    pub fn fiber_canonical() -> Self {
        Self::new("(f*)*c", 2, |lp, t| fiber_canonical(lp, &t[0], &t[1]))
    }

    pub fn mu(spec: BundleSpec<A>) -> Self {
        Self::new("π*μ", 2, move |lp, t| Ok(mu_form(lp, &spec, &t[0].base, &t[1].base)))
    }

    pub fn tau_nu(spec: BundleSpec<A>) -> Self {
        Self::new("π*τ(ν)", 2, move |lp, t| Ok(transgression_tau_nu(lp, &spec, &t[0].base, &t[1].base)))
    }

    pub fn carey_murray(spec: BundleSpec<A>) -> Self {
        Self::new("F_Q", 2, move |lp, t| carey_murray(lp, &spec, &t[0], &t[1]))
    }

    /// `π*σ` for a form that only reads base components.
    pub fn pullback_base(
        name: impl Into<String>,
        degree: usize,
        sigma: impl Fn(&BundleLoop<A>, &[Vec<Vector<A>>]) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, degree, move |lp, t| {
            let base: Vec<Vec<Vector<A>>> = t.iter().map(|x| x.base.clone()).collect();
            sigma(lp, &base)
        })
    }

    /// `(f*)*σ` for a form on `P(G)` given on left-trivialized fiber variations.
    pub fn pullback_fiber(
        name: impl Into<String>,
        degree: usize,
        sigma: impl Fn(&[Su2], &[Vec<AlgebraElement>]) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, degree, move |lp, t| {
            let fiber: Vec<Vec<AlgebraElement>> = t.iter().map(|x| x.fiber_left(lp)).collect();
            sigma(&lp.fiber.points, &fiber)
        })
    }
}
