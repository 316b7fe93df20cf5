//! Horizontal lift along a base path and the variation of the holonomy.

use super::connection::BundleSpec;
use crate::lie_group::{AlgebraElement, LieGroup, Su2};
use crate::manifold::{ManifoldPath, Sphere, Vector};
use crate::{Error, Result};

/// `T_k` solving `dT = −A(dγ) T` by exponential midpoint steps; `T_N` is the holonomy.
pub fn bundle_transport<const A: usize>(path: &ManifoldPath<A>, spec: &BundleSpec<A>) -> Vec<Su2> {
    let mut t = Su2::identity();
    let mut out = Vec::with_capacity(path.points.len());
    out.push(t);
    for w in path.points.windows(2) {
        let a = spec.connection.eval(&Sphere::<A>::normalize(&(w[0] + w[1])), &(w[1] - w[0]));
        t = Su2::exp(&(-a)).compose(&t).reproject();
        out.push(t);
    }
    out
}

/// `η_k = T_k⁻¹ δT_k` along the base variation `X` (ambient tangent values on the grid):
///
/// `η_s = ∫₀^s T⁻¹ F(∘dγ, X) T − T_s⁻¹ A(X_s) T_s`,
///
/// so that `δT_1 = T_1 η_1` when `X_0 = X_1 = 0`.
pub fn holonomy_derivative_path<const A: usize>(
    path: &ManifoldPath<A>,
    transport: &[Su2],
    spec: &BundleSpec<A>,
    x: &[Vector<A>],
) -> Result<Vec<AlgebraElement>> {
    if x.len() != path.points.len() || transport.len() != path.points.len() {
        return Err(Error::InvalidArgument("field, transport and path grids differ".into()));
    }
    let conn = spec.connection.as_ref();
    let mut acc = AlgebraElement::zero();
    let mut out = Vec::with_capacity(x.len());
    let boundary = |k: usize| transport[k].inverse().adjoint(&conn.eval(&path.points[k], &x[k]));
    out.push(-boundary(0));
    for k in 0..path.steps() {
        let (p, q) = (path.points[k], path.points[k + 1]);
        let m = Sphere::<A>::normalize(&(p + q));
        let dg = Sphere::<A>::project(&m, &(q - p));
        let xm = Sphere::<A>::project(&m, &((x[k] + x[k + 1]) * 0.5));
        let half = Su2::exp(&(conn.eval(&m, &(q - p)) * -0.5)).compose(&transport[k]);
        acc += half.inverse().adjoint(&conn.curvature(&m, &dg, &xm));
        out.push(acc - boundary(k + 1));
    }
    Ok(out)
}

/// `T_1⁻¹ ⟨dT_1, X⟩ = ∫₀¹ T⁻¹ F(∘dγ, X) T` for `X = τH`.
pub fn holonomy_derivative<const A: usize>(
    path: &ManifoldPath<A>,
    spec: &BundleSpec<A>,
    x: &[Vector<A>],
) -> Result<AlgebraElement> {
    let t = bundle_transport(path, spec);
    Ok(*holonomy_derivative_path(path, &t, spec, x)?.last().unwrap())
}
