//! Exterior and covariant derivatives of forms on `L_e(Q)`.
//!
//! Derivatives of scalar functions along a generator field are taken along the
//! curve `ε ↦ (exp_γ(ε δγ), exp(ε δg g⁻¹) g)` with a fourth-order central stencil.
//! The exterior derivative then follows the invariant formula with the
//! generator brackets of [`field_bracket`].

use super::bundle_forms::{field_bracket, LoopForm, LoopTangent, TotalField};
use super::kernel::{evaluate, KernelForm, SlotField};
use crate::bundle::{bundle_transport, BundleLoop, BundleSpec, InfinityConnection};
use crate::lie_group::{GroupPath, LieGroup, Su2};
use crate::manifold::{ManifoldPath, Sphere};
use crate::{Error, Result};
use std::sync::Arc;

/// Bundle, connection on `P(G)` and finite-difference step.
#[derive(Clone, Debug)]
pub struct DerivativeContext<const A: usize> {
    pub spec: BundleSpec<A>,
    pub conn: InfinityConnection,
    pub step: f64,
}

impl<const A: usize> DerivativeContext<A> {
    pub fn new(spec: BundleSpec<A>, conn: InfinityConnection) -> Self {
        Self { spec, conn, step: 1e-4 }
    }

    pub fn tangent(&self, field: &TotalField<A>, lp: &BundleLoop<A>) -> Result<LoopTangent<A>> {
        field.tangent(lp, &self.spec, self.conn)
    }
}

/// The loop displaced by `ε t`.
pub fn flow_loop<const A: usize>(
    lp: &BundleLoop<A>,
    t: &LoopTangent<A>,
    eps: f64,
    spec: &BundleSpec<A>,
) -> Result<BundleLoop<A>> {
    let base = lp
        .base
        .points
        .iter()
        .zip(&t.base)
        .map(|(p, v)| Sphere::<A>::geodesic_exp(p, &(v * eps)))
        .collect();
    let fiber = lp
        .fiber
        .points
        .iter()
        .zip(&t.fiber)
        .map(|(g, a)| Su2::exp(&(*a * eps)).compose(g))
        .collect();
    let base = ManifoldPath::from_points(base)?;
    let transport = bundle_transport(&base, spec);
    Ok(BundleLoop {
        holonomy: *transport.last().unwrap(),
        transport,
        fiber: GroupPath::from_points(fiber)?,
        base,
        rejections: lp.rejections,
    })
}

/// `X(f)` at `lp` for a function on loops.
pub fn directional_derivative<const A: usize>(
    ctx: &DerivativeContext<A>,
    lp: &BundleLoop<A>,
    direction: &TotalField<A>,
    f: impl Fn(&BundleLoop<A>) -> Result<f64>,
) -> Result<f64> {
    let t = ctx.tangent(direction, lp)?;
    let h = ctx.step;
    let at = |e: f64| -> Result<f64> { f(&flow_loop(lp, &t, e, &ctx.spec)?) };
    Ok((8.0 * (at(h)? - at(-h)?) - (at(2.0 * h)? - at(-2.0 * h)?)) / (12.0 * h))
}

/// `dω(X₀, …, X_k) = Σ (−1)^i X_i ω(…X̂_i…) + Σ_{i<j} (−1)^{i+j} ω([X_i, X_j], …X̂_i…X̂_j…)`.
pub fn exterior_derivative<const A: usize>(
    ctx: &DerivativeContext<A>,
    form: &LoopForm<A>,
    lp: &BundleLoop<A>,
    fields: &[TotalField<A>],
) -> Result<f64> {
    let k = form.degree;
    if fields.len() != k + 1 {
        return Err(Error::DegreeMismatch {
            h: k + 1,
            v: 0,
            got_h: fields.len(),
            got_v: 0,
        });
    }
    let sign = |i: usize| if i.is_multiple_of(2) { 1.0 } else { -1.0 };
    let tangents = fields.iter().map(|f| ctx.tangent(f, lp)).collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    for i in 0..=k {
        let rest: Vec<&TotalField<A>> = fields.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, f)| f).collect();
        let value = |l: &BundleLoop<A>| -> Result<f64> {
            let t = rest.iter().map(|f| ctx.tangent(f, l)).collect::<Result<Vec<_>>>()?;
            form.eval(l, &t)
        };
        total += sign(i) * directional_derivative(ctx, lp, &fields[i], value)?;
    }
    for i in 0..=k {
        for j in i + 1..=k {
            let mut args = vec![field_bracket(&fields[i], &fields[j], lp, &ctx.spec, ctx.conn)?];
            args.extend(tangents.iter().enumerate().filter(|&(m, _)| m != i && m != j).map(|(_, t)| t.clone()));
            total += sign(i + j) * form.eval(lp, &args)?;
        }
    }
    Ok(total)
}

/// `dF_Q` on three generator fields.
pub fn closedness_defect<const A: usize>(
    ctx: &DerivativeContext<A>,
    lp: &BundleLoop<A>,
    fields: &[TotalField<A>],
) -> Result<f64> {
    exterior_derivative(ctx, &LoopForm::carey_murray(ctx.spec.clone()), lp, fields)
}

type FamilyFn<const A: usize> = dyn Fn(&BundleLoop<A>) -> Result<KernelForm> + Send + Sync;
type FamilyDerivativeFn<const A: usize> = dyn Fn(&BundleLoop<A>, &LoopTangent<A>) -> Result<KernelForm> + Send + Sync;

/// A kernel form whose kernel depends on the base point.
#[derive(Clone)]
pub struct KernelFamily<const A: usize> {
    pub name: String,
    family: Arc<FamilyFn<A>>,
    derivative: Option<Arc<FamilyDerivativeFn<A>>>,
}

impl<const A: usize> KernelFamily<A> {
    pub fn new(
        name: impl Into<String>,
        family: impl Fn(&BundleLoop<A>) -> Result<KernelForm> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            family: Arc::new(family),
            derivative: None,
        }
    }

    /// Attaches the kernel of `X ↦ ∇_X σ`.
    pub fn with_derivative(
        mut self,
        derivative: impl Fn(&BundleLoop<A>, &LoopTangent<A>) -> Result<KernelForm> + Send + Sync + 'static,
    ) -> Self {
        self.derivative = Some(Arc::new(derivative));
        self
    }

    pub fn at(&self, lp: &BundleLoop<A>) -> Result<KernelForm> {
        (self.family)(lp)
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }
}

/// `(∇_X σ)(H…, K…)`.
///
/// Generator fields are parallel, so this is `X(σ(H…, K…))`. The attached
/// derivative kernel is used when present; otherwise finite differences, if allowed.
pub fn covariant_derivative<const A: usize>(
    ctx: &DerivativeContext<A>,
    family: &KernelFamily<A>,
    lp: &BundleLoop<A>,
    direction: &TotalField<A>,
    h: &[&SlotField],
    v: &[&SlotField],
    allow_fd: bool,
) -> Result<f64> {
    match &family.derivative {
        Some(d) => evaluate(&d(lp, &ctx.tangent(direction, lp)?)?, h, v),
        None if allow_fd => directional_derivative(ctx, lp, direction, |l| evaluate(&family.at(l)?, h, v)),
        None => Err(Error::MissingDerivativeKernel(family.name.clone())),
    }
}
