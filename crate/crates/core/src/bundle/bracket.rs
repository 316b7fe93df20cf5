//! Lie brackets of horizontal and vertical fields on the loop bundle.
//!
//! In `(γ, g)` coordinates the bracket of two horizontal fields splits as
//! `X^H(τH̃) + R^∞ g`: a generalized horizontal field whose argument carries the
//! base curvature, and a left-vertical part coming from the curvature of the
//! connection on `P(G) → G`.

use super::connection::BundleSpec;
use super::section::InfinityConnection;
use super::total::{horizontal_field, horizontal_field_from_values, BundleLoop, HorizontalField, TotalTangent, VerticalField};
use crate::lie_group::{AlgebraElement, LieGroup, Su2};
use crate::manifold::{Sphere, Vector, VectorFieldH};
use crate::stochastic::AlgebraFieldK;
use crate::{Error, Result};

/// `H̃_k = Σ_{i<k} R(w_i, H̄¹_i) H²_k − R(w_i, H̄²_i) H¹_k` in the frame at the base point.
///
/// `w` are antidevelopment increments and `H̄` interval midpoints; `curvature(x, y, z)`
/// is `R(x, y)z`. The value at `k` is the `T_x` argument of the base bracket at time `k`.
pub fn bracket_argument<const A: usize>(
    w: &[Vector<A>],
    h1: &VectorFieldH<A>,
    h2: &VectorFieldH<A>,
    curvature: impl Fn(&Vector<A>, &Vector<A>, &Vector<A>) -> Vector<A>,
) -> Result<Vec<Vector<A>>> {
    let n = w.len();
    if h1.steps() != n || h2.steps() != n {
        return Err(Error::InvalidArgument(format!(
            "fields have {} and {} steps, path has {n}",
            h1.steps(),
            h2.steps()
        )));
    }
    // M^j_k = Σ_{i<k} w_i H̄^jᵀ − H̄^j w_iᵀ is the curvature operator accumulated along the path;
    // with a general R we carry the pair (M¹ H², M² H¹) by linearity in the last slot.
    let mut out = Vec::with_capacity(n + 1);
    let mut pairs: Vec<(Vector<A>, Vector<A>, Vector<A>)> = Vec::with_capacity(n);
    out.push(Vector::<A>::zeros());
    for k in 0..n {
        let m1 = (h1.values[k] + h1.values[k + 1]) * 0.5;
        let m2 = (h2.values[k] + h2.values[k + 1]) * 0.5;
        pairs.push((w[k], m1, m2));
        let (a, b) = (h1.values[k + 1], h2.values[k + 1]);
        let v = pairs
            .iter()
            .fold(Vector::<A>::zeros(), |acc, (w, m1, m2)| acc + curvature(w, m1, &b) - curvature(w, m2, &a));
        out.push(v);
    }
    Ok(out)
}

/// `[X^H(H¹), X^H(H²)] = X^H(τH̃) + R^∞ g`.
#[derive(Clone, Debug)]
pub struct BracketDecomposition<const A: usize> {
    /// `H̃` in the frame at the base point; `H̃_0 = 0` but `H̃_1` need not vanish.
    pub argument: Vec<Vector<A>>,
    /// The generalized horizontal field with base values `τ_k H̃_k`.
    pub horizontal: HorizontalField<A>,
    /// `R^∞_k`: the fiber additionally moves by `R^∞_k g_k`; zero at both ends.
    pub vertical: Vec<AlgebraElement>,
}

impl<const A: usize> BracketDecomposition<A> {
    /// Base part of the bracket: ambient vectors `τ_k H̃_k`.
    pub fn base(&self) -> &[Vector<A>] {
        &self.horizontal.base
    }

    /// Fiber part `δg g⁻¹ = a_k + R^∞_k` in `(γ, g)` coordinates.
    pub fn fiber(&self) -> Vec<AlgebraElement> {
        self.horizontal
            .fiber
            .iter()
            .zip(&self.vertical)
            .map(|(a, r)| *a + *r)
            .collect()
    }

    /// The bracket as tangents to `Q` along `q_k = T_k g_k`.
    pub fn tangents(&self, lp: &BundleLoop<A>) -> Vec<TotalTangent<A>> {
        self.horizontal
            .tangents(lp)
            .into_iter()
            .zip(lp.transport.iter().zip(&self.vertical))
            .map(|(t, (tr, r))| TotalTangent {
                base: t.base,
                fiber: t.fiber + tr.adjoint(r),
            })
            .collect()
    }
}

/// Bracket of two horizontal fields with deterministic arguments.
///
/// The fiber components are `a^i = φ ξ^i` with `ξ^i` the right-trivialized
/// variation of `T_1⁻¹`. Differentiating, `D_{X¹}a² − D_{X²}a¹ − [a¹, a²]`
/// has a `dK` part `φ(ξ(τH̃) + [ξ¹, ξ²])` and a `K ∧ K` part `−φ²[ξ¹, ξ²]`;
/// what is left after removing the horizontal lift `φ ξ(τH̃)` is
/// `R^∞ = φ(1 − φ)[ξ¹, ξ²]`.
pub fn bracket_horizontal<const A: usize>(
    h1: &VectorFieldH<A>,
    h2: &VectorFieldH<A>,
    lp: &BundleLoop<A>,
    spec: &BundleSpec<A>,
    conn: InfinityConnection,
) -> Result<BracketDecomposition<A>> {
    let argument = bracket_argument(&lp.base.antidevelopment, h1, h2, Sphere::<A>::curvature)?;
    let values = argument
        .iter()
        .zip(&lp.base.transport)
        .map(|(h, t)| t * h)
        .collect();
    let horizontal = horizontal_field_from_values(values, lp, spec, conn)?;
    let xi1 = horizontal_field(h1, lp, spec, conn)?.xi;
    let xi2 = horizontal_field(h2, lp, spec, conn)?.xi;
    let c = Su2::bracket(&xi1, &xi2);
    let n = lp.steps();
    let vertical = (0..=n)
        .map(|k| {
            let phi = conn.phi(k as f64 / n as f64);
            c * (phi * (1.0 - phi))
        })
        .collect();
    Ok(BracketDecomposition {
        argument,
        horizontal,
        vertical,
    })
}

/// `[X^V(K¹), X^V(K²)] = X^V([K¹, K²])`, pointwise.
pub fn bracket_vertical(k1: &VerticalField, k2: &VerticalField) -> Result<VerticalField> {
    if k1.k.steps() != k2.k.steps() {
        return Err(Error::InvalidArgument("vertical fields on different grids".into()));
    }
    let values = k1
        .k
        .values
        .iter()
        .zip(&k2.k.values)
        .map(|(a, b)| Su2::bracket(a, b))
        .collect();
    Ok(VerticalField {
        k: AlgebraFieldK { values },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{bundle_transport, vertical_field};
    use crate::lie_group::GroupPath;
    use crate::manifold::{field_values, ManifoldPath, S3};
    use nalgebra::Vector4;
    use std::f64::consts::PI;

    const EPS: f64 = 1e-4;

    fn smooth_base(n: usize) -> Vec<Vector<4>> {
        (0..=n)
            .map(|k| {
                let s = k as f64 / n as f64;
                let t = 2.0 * PI * s;
                S3::normalize(&Vector4::new(1.0, 0.7 * t.sin(), 0.6 * t.sin().powi(2), 0.5 * (2.0 * t).sin()))
            })
            .collect()
    }

    /// Smooth fiber path from `e` to `target`.
    fn smooth_fiber(target: &Su2, n: usize) -> Vec<Su2> {
        let l = target.log().unwrap();
        (0..=n)
            .map(|k| {
                let s = k as f64 / n as f64;
                let wiggle = AlgebraElement::new(0.3, -0.2, 0.4) * (PI * s).sin();
                Su2::exp(&(l * s)).compose(&Su2::exp(&wiggle))
            })
            .collect()
    }

    fn assemble(base: Vec<Vector<4>>, fiber: Vec<Su2>, spec: &BundleSpec<4>) -> BundleLoop<4> {
        let base = ManifoldPath::from_points(base).unwrap();
        let transport = bundle_transport(&base, spec);
        BundleLoop {
            holonomy: *transport.last().unwrap(),
            transport,
            fiber: GroupPath::from_points(fiber).unwrap(),
            base,
            rejections: 0,
        }
    }

    fn h(n: usize, which: usize) -> VectorFieldH<4> {
        VectorFieldH::from_fn(&S3::base_point(), n, move |s| match which {
            0 => Vector4::new(0.0, (PI * s).sin(), 0.5 * (2.0 * PI * s).sin(), 0.0),
            1 => Vector4::new(0.0, 0.0, (PI * s).sin().powi(2), 2.0 * s * (1.0 - s)),
            _ => Vector4::new(0.0, -(3.0 * PI * s).sin(), 0.0, (PI * s).sin()),
        })
        .unwrap()
    }

    /// A field on the loop bundle in `(γ, g)` coordinates, evaluated anywhere.
    type Field<'a> = dyn Fn(&BundleLoop<4>) -> (Vec<Vector<4>>, Vec<AlgebraElement>) + 'a;

    fn horizontal<'a>(hf: &'a VectorFieldH<4>, spec: &'a BundleSpec<4>, conn: InfinityConnection) -> Box<Field<'a>> {
        Box::new(move |lp| {
            let f = horizontal_field(hf, lp, spec, conn).unwrap();
            (f.base, f.fiber)
        })
    }

    fn vertical(k: &AlgebraFieldK) -> Box<Field<'_>> {
        Box::new(move |lp| {
            let fiber = lp
                .fiber
                .points
                .iter()
                .zip(&k.values)
                .map(|(g, k)| g.adjoint(k))
                .collect();
            (vec![Vector::<4>::zeros(); k.values.len()], fiber)
        })
    }

    /// Moves every point of the loop along the field by `ε`, geodesically in both factors.
    fn flow(lp: &BundleLoop<4>, f: &Field, eps: f64, spec: &BundleSpec<4>) -> BundleLoop<4> {
        let (b, a) = f(lp);
        let base = lp
            .base
            .points
            .iter()
            .zip(&b)
            .map(|(p, v)| S3::geodesic_exp(p, &(v * eps)))
            .collect();
        let fiber = lp
            .fiber
            .points
            .iter()
            .zip(&a)
            .map(|(g, a)| Su2::exp(&(*a * eps)).compose(g))
            .collect();
        assemble(base, fiber, spec)
    }

    /// `D_X Y` by central differences, as ambient vectors (fiber: quaternions `δ(a g)`).
    fn directional(lp: &BundleLoop<4>, x: &Field, y: &Field, spec: &BundleSpec<4>) -> (Vec<Vector<4>>, Vec<Vector4<f64>>) {
        let ambient = |l: &BundleLoop<4>| {
            let (b, a) = y(l);
            let f: Vec<_> = l.fiber.points.iter().zip(&a).map(|(g, a)| g.right_translate(a)).collect();
            (b, f)
        };
        let (bp, fp) = ambient(&flow(lp, x, EPS, spec));
        let (bm, fm) = ambient(&flow(lp, x, -EPS, spec));
        let d = 0.5 / EPS;
        (
            bp.iter().zip(&bm).map(|(p, m)| (p - m) * d).collect(),
            fp.iter().zip(&fm).map(|(p, m)| (p - m) * d).collect(),
        )
    }

    /// `[X, Y] = D_X Y − D_Y X`; fiber part right-trivialized.
    fn oracle(lp: &BundleLoop<4>, x: &Field, y: &Field, spec: &BundleSpec<4>) -> (Vec<Vector<4>>, Vec<AlgebraElement>) {
        let (bxy, fxy) = directional(lp, x, y, spec);
        let (byx, fyx) = directional(lp, y, x, spec);
        let base = bxy.iter().zip(&byx).map(|(a, b)| a - b).collect();
        let fiber = lp
            .fiber
            .points
            .iter()
            .zip(fxy.iter().zip(&fyx))
            .map(|(g, (a, b))| g.right_trivialize(&(a - b)))
            .collect();
        (base, fiber)
    }

    fn rel_error(base: &[Vector<4>], fiber: &[AlgebraElement], ob: &[Vector<4>], of: &[AlgebraElement]) -> (f64, f64) {
        let mut err = 0.0;
        let mut norm = 0.0;
        for k in 0..base.len() {
            err += (base[k] - ob[k]).norm_squared() + (fiber[k] - of[k]).norm_squared();
            norm += ob[k].norm_squared() + of[k].norm_squared();
        }
        (err.sqrt(), norm.sqrt())
    }

    #[test]
    fn horizontal_bracket_matches_flow_commutator() {
        let n = 1024;
        for (spec, conn) in [
            (BundleSpec::maurer_cartan(0.5), InfinityConnection::Linear),
            (BundleSpec::maurer_cartan(0.3), InfinityConnection::Reparametrized),
        ] {
            let base = smooth_base(n);
            let probe = assemble(base.clone(), vec![Su2::identity(); n + 1], &spec);
            let lp = assemble(base, smooth_fiber(&probe.holonomy.inverse(), n), &spec);
            let (h1, h2) = (h(n, 0), h(n, 1));
            let d = bracket_horizontal(&h1, &h2, &lp, &spec, conn).unwrap();
            let (ob, of) = oracle(&lp, &*horizontal(&h1, &spec, conn), &*horizontal(&h2, &spec, conn), &spec);
            let (err, norm) = rel_error(d.base(), &d.fiber(), &ob, &of);
            assert!(norm > 0.1, "degenerate test: {norm}");
            assert!(err / norm < 5e-2, "{}: rel error {}", spec.name, err / norm);
            assert!(d.vertical.iter().any(|r| r.norm() > 1e-3), "R^∞ should be live");
            assert!(d.vertical[0].norm() == 0.0 && d.vertical[n].norm() < 1e-15);
        }
    }

    #[test]
    fn flat_bundle_has_no_vertical_part() {
        let n = 256;
        let spec = BundleSpec::<4>::flat();
        let lp = assemble(smooth_base(n), smooth_fiber(&Su2::identity(), n), &spec);
        let d = bracket_horizontal(&h(n, 0), &h(n, 2), &lp, &spec, InfinityConnection::Linear).unwrap();
        assert!(d.vertical.iter().all(|r| r.norm() == 0.0));
        assert!(d.fiber().iter().all(|r| r.norm() == 0.0));
        assert!(d.base().iter().any(|v| v.norm() > 1e-3), "curved base still contributes");
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let n = 128;
        let spec = BundleSpec::maurer_cartan(0.5);
        let base = smooth_base(n);
        let probe = assemble(base.clone(), vec![Su2::identity(); n + 1], &spec);
        let lp = assemble(base, smooth_fiber(&probe.holonomy.inverse(), n), &spec);
        let c = InfinityConnection::Linear;
        let a = bracket_horizontal(&h(n, 0), &h(n, 1), &lp, &spec, c).unwrap();
        let b = bracket_horizontal(&h(n, 1), &h(n, 0), &lp, &spec, c).unwrap();
        for k in 0..=n {
            assert!((a.base()[k] + b.base()[k]).norm() < 1e-12);
            assert!((a.fiber()[k] + b.fiber()[k]).norm() < 1e-12);
        }
        let s = bracket_horizontal(&h(n, 0), &h(n, 0), &lp, &spec, c).unwrap();
        assert!(s.base().iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn euclidean_coordinate_fields_commute() {
        let n = 64;
        let w: Vec<Vector<4>> = (0..n).map(|k| Vector4::new(0.0, (k as f64).sin(), 0.1, -0.2) * 0.1).collect();
        let h1 = VectorFieldH::from_fn(&S3::base_point(), n, |s| Vector4::new(0.0, (PI * s).sin(), 0.0, 0.0)).unwrap();
        let h2 = VectorFieldH::from_fn(&S3::base_point(), n, |s| Vector4::new(0.0, 0.0, s * (1.0 - s), 0.0)).unwrap();
        let flat = bracket_argument(&w, &h1, &h2, |_, _, _| Vector::<4>::zeros()).unwrap();
        assert!(flat.iter().all(|v| v.norm() == 0.0));
        let curved = bracket_argument(&w, &h1, &h2, S3::curvature).unwrap();
        assert!(curved.iter().any(|v| v.norm() > 1e-3));
    }

    #[test]
    fn mixed_bracket_vanishes() {
        let n = 1024;
        let spec = BundleSpec::maurer_cartan(0.5);
        let base = smooth_base(n);
        let probe = assemble(base.clone(), vec![Su2::identity(); n + 1], &spec);
        let lp = assemble(base, smooth_fiber(&probe.holonomy.inverse(), n), &spec);
        let hf = h(n, 0);
        let k = AlgebraFieldK::from_fn(n, |s| AlgebraElement::new(1.0, -0.5, 0.25) * (2.0 * PI * s).sin()).unwrap();
        let (ob, of) = oracle(&lp, &*horizontal(&hf, &spec, InfinityConnection::Linear), &*vertical(&k), &spec);
        let size: f64 = k.values.iter().map(|v| v.norm_squared()).sum::<f64>().sqrt();
        let (err, _) = rel_error(&vec![Vector::<4>::zeros(); n + 1], &vec![AlgebraElement::zero(); n + 1], &ob, &of);
        assert!(err / size < 5e-3, "mixed bracket {}", err / size);
    }

    #[test]
    fn vertical_bracket_matches_flow_commutator_and_jacobi() {
        let n = 256;
        let spec = BundleSpec::maurer_cartan(0.5);
        let base = smooth_base(n);
        let probe = assemble(base.clone(), vec![Su2::identity(); n + 1], &spec);
        let lp = assemble(base, smooth_fiber(&probe.holonomy.inverse(), n), &spec);
        let k1 = AlgebraFieldK::from_fn(n, |s| AlgebraElement::new(1.0, 0.0, 0.5) * (PI * s).sin()).unwrap();
        let k2 = AlgebraFieldK::from_fn(n, |s| AlgebraElement::new(0.0, s, 1.0) * (2.0 * PI * s).sin()).unwrap();
        let v = bracket_vertical(&vertical_field(&k1).unwrap(), &vertical_field(&k2).unwrap()).unwrap();
        let (ob, of) = oracle(&lp, &*vertical(&k1), &*vertical(&k2), &spec);
        let fiber: Vec<_> = lp.fiber.points.iter().zip(&v.k.values).map(|(g, k)| g.adjoint(k)).collect();
        let (err, norm) = rel_error(&vec![Vector::<4>::zeros(); n + 1], &fiber, &ob, &of);
        assert!(err / norm < 1e-6, "{}", err / norm);

        let same = bracket_vertical(&vertical_field(&k1).unwrap(), &vertical_field(&k1).unwrap()).unwrap();
        assert!(same.k.values.iter().all(|v| v.norm() == 0.0));

        let mut rng = crate::mc::stream(11, 0);
        let mut rand = || AlgebraElement::new(crate::mc::normal(&mut rng), crate::mc::normal(&mut rng), crate::mc::normal(&mut rng));
        for _ in 0..20 {
            let (a, b, c) = (rand(), rand(), rand());
            let br = Su2::bracket;
            let j = br(&a, &br(&b, &c)) + br(&b, &br(&c, &a)) + br(&c, &br(&a, &b));
            assert!(j.norm() < 1e-12);
        }
    }

    #[test]
    fn bracket_on_sampled_loop_has_live_parts() {
        let spec = BundleSpec::maurer_cartan(0.5);
        let lp = crate::bundle::sample_total(&spec, 128, &mut crate::mc::stream(5, 0), &mut crate::mc::stream(5, 1)).unwrap();
        let d = bracket_horizontal(&h(128, 0), &h(128, 1), &lp, &spec, InfinityConnection::Linear).unwrap();
        let t = d.tangents(&lp);
        assert_eq!(t.len(), 129);
        let xs = field_values(&h(128, 0), &lp.base).unwrap();
        assert_eq!(xs.len(), 129);
        assert!(t[0].base.norm() == 0.0);
    }
}
