use crate::lie_group::{AlgebraElement, LieGroup, Su2};
use crate::manifold::{Sphere, Vector};
use nalgebra::SMatrix;
use std::fmt::Debug;
use std::sync::Arc;

/// An `su(2)`-valued 1-form on the ambient space of the base.
pub trait ConnectionForm<const A: usize>: Debug + Send + Sync {
    /// `A_p(v)`; defined for any ambient `v`.
    fn eval(&self, p: &Vector<A>, v: &Vector<A>) -> AlgebraElement;

    /// `F_p(X, Y)` for tangent vectors at `p`.
    fn curvature(&self, p: &Vector<A>, x: &Vector<A>, y: &Vector<A>) -> AlgebraElement;

    fn is_flat(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct FlatConnection;

impl<const A: usize> ConnectionForm<A> for FlatConnection {
    fn eval(&self, _: &Vector<A>, _: &Vector<A>) -> AlgebraElement {
        AlgebraElement::zero()
    }

    fn curvature(&self, _: &Vector<A>, _: &Vector<A>, _: &Vector<A>) -> AlgebraElement {
        AlgebraElement::zero()
    }

    fn is_flat(&self) -> bool {
        true
    }
}

/// `A = λ θ` on S³ = SU(2), with `θ_p(v) = Im(p̄ v)/|p|²` the left Maurer–Cartan form.
/// Curvature `(λ² − λ)[θX, θY]`; flat for `λ ∈ {0, 1}`.
#[derive(Clone, Copy, Debug)]
pub struct MaurerCartanConnection {
    pub lambda: f64,
}

impl MaurerCartanConnection {
    fn theta(p: &Vector<4>, v: &Vector<4>) -> AlgebraElement {
        Su2::imaginary(&Su2::qmul(&Su2::qconj(p), v)) * (1.0 / p.norm_squared())
    }
}

impl ConnectionForm<4> for MaurerCartanConnection {
    fn eval(&self, p: &Vector<4>, v: &Vector<4>) -> AlgebraElement {
        Self::theta(p, v) * self.lambda
    }

    fn curvature(&self, p: &Vector<4>, x: &Vector<4>, y: &Vector<4>) -> AlgebraElement {
        let l = self.lambda;
        Su2::bracket(&Self::theta(p, x), &Self::theta(p, y)) * (l * l - l)
    }

    fn is_flat(&self) -> bool {
        self.lambda == 0.0 || self.lambda == 1.0
    }
}

/// Abelian connection `A = (β/2)(p_x dp_y − p_y dp_x) k₃` with `F = β dp_x ∧ dp_y k₃`.
#[derive(Clone, Copy, Debug)]
pub struct U1Connection {
    pub beta: f64,
}

impl<const A: usize> ConnectionForm<A> for U1Connection {
    fn eval(&self, p: &Vector<A>, v: &Vector<A>) -> AlgebraElement {
        AlgebraElement::new(0.0, 0.0, 0.5 * self.beta * (p[0] * v[1] - p[1] * v[0]))
    }

    fn curvature(&self, _: &Vector<A>, x: &Vector<A>, y: &Vector<A>) -> AlgebraElement {
        AlgebraElement::new(0.0, 0.0, self.beta * (x[0] * y[1] - x[1] * y[0]))
    }

    fn is_flat(&self) -> bool {
        self.beta == 0.0
    }
}

/// `A^i_p(v) = ⟨L_i p + c_i, v⟩`: a generic non-abelian connection on the
/// ambient space whose curvature has no special symmetry.
#[derive(Clone, Debug)]
pub struct LinearConnection<const A: usize> {
    pub l: [SMatrix<f64, A, A>; 3],
    pub c: [Vector<A>; 3],
}

impl<const A: usize> ConnectionForm<A> for LinearConnection<A> {
    fn eval(&self, p: &Vector<A>, v: &Vector<A>) -> AlgebraElement {
        AlgebraElement::new(
            (self.l[0] * p + self.c[0]).dot(v),
            (self.l[1] * p + self.c[1]).dot(v),
            (self.l[2] * p + self.c[2]).dot(v),
        )
    }

    fn curvature(&self, p: &Vector<A>, x: &Vector<A>, y: &Vector<A>) -> AlgebraElement {
        let d = |i: usize| (self.l[i] * x).dot(y) - (self.l[i] * y).dot(x);
        AlgebraElement::new(d(0), d(1), d(2)) + Su2::bracket(&self.eval(p, x), &self.eval(p, y))
    }
}

/// A trivial SU(2) bundle over `S^{A−1}` with a global connection form.
#[derive(Clone, Debug)]
pub struct BundleSpec<const A: usize> {
    pub name: String,
    pub connection: Arc<dyn ConnectionForm<A>>,
}

impl<const A: usize> BundleSpec<A> {
    pub fn new(name: impl Into<String>, connection: impl ConnectionForm<A> + 'static) -> Self {
        Self {
            name: name.into(),
            connection: Arc::new(connection),
        }
    }

    pub fn flat() -> Self {
        Self::new("flat", FlatConnection)
    }

    /// Base point of the loop space.
    pub fn base_point(&self) -> Vector<A> {
        Sphere::<A>::base_point()
    }
}

impl BundleSpec<4> {
    pub fn maurer_cartan(lambda: f64) -> Self {
        Self::new(format!("maurer_cartan({lambda})"), MaurerCartanConnection { lambda })
    }
}

impl BundleSpec<3> {
    pub fn u1(beta: f64) -> Self {
        Self::new(format!("u1({beta})"), U1Connection { beta })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::{normal, stream};

    /// `∂_X A(Y) − ∂_Y A(X) + [AX, AY]` with `X, Y` extended as constant ambient fields.
    fn fd_curvature<const A: usize>(c: &dyn ConnectionForm<A>, p: &Vector<A>, x: &Vector<A>, y: &Vector<A>) -> AlgebraElement {
        let e = 1e-5;
        let dx = (c.eval(&(p + x * e), y) - c.eval(&(p - x * e), y)) * (0.5 / e);
        let dy = (c.eval(&(p + y * e), x) - c.eval(&(p - y * e), x)) * (0.5 / e);
        dx - dy + Su2::bracket(&c.eval(p, x), &c.eval(p, y))
    }

    fn random_tangent<const A: usize>(p: &Vector<A>, rng: &mut crate::mc::Rng) -> Vector<A> {
        Sphere::<A>::project(p, &Vector::<A>::from_fn(|_, _| normal(rng)))
    }

    #[test]
    fn curvature_matches_structure_equation() {
        let mut rng = stream(17, 0);
        let lin = LinearConnection::<4> {
            l: [0, 1, 2].map(|_| SMatrix::<f64, 4, 4>::from_fn(|_, _| normal(&mut rng))),
            c: [0, 1, 2].map(|_| Vector::<4>::from_fn(|_, _| normal(&mut rng))),
        };
        let conns: Vec<Box<dyn ConnectionForm<4>>> = vec![
            Box::new(FlatConnection),
            Box::new(MaurerCartanConnection { lambda: 0.5 }),
            Box::new(MaurerCartanConnection { lambda: 1.7 }),
            Box::new(U1Connection { beta: 2.0 }),
            Box::new(lin),
        ];
        for c in &conns {
            for _ in 0..20 {
                let p = Sphere::<4>::normalize(&Vector::<4>::from_fn(|_, _| normal(&mut rng)));
                let (x, y) = (random_tangent(&p, &mut rng), random_tangent(&p, &mut rng));
                let d = (c.curvature(&p, &x, &y) - fd_curvature(c.as_ref(), &p, &x, &y)).norm();
                assert!(d < 1e-6, "{c:?}: {d}");
            }
        }
    }

    #[test]
    fn maurer_cartan_flat_at_one() {
        assert!(MaurerCartanConnection { lambda: 1.0 }.is_flat());
        let p = Sphere::<4>::base_point();
        let x = Vector::<4>::new(0.0, 1.0, 0.0, 0.0);
        let y = Vector::<4>::new(0.0, 0.0, 1.0, 0.0);
        assert_eq!(MaurerCartanConnection { lambda: 1.0 }.curvature(&p, &x, &y).norm(), 0.0);
        assert!(MaurerCartanConnection { lambda: 0.5 }.curvature(&p, &x, &y).norm() > 0.1);
    }
}
