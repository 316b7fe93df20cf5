use super::{Frame, Sphere, Vector};
use crate::Result;

/// A path on the unit sphere on a uniform grid of `[0, 1]`, with Levi-Civita
/// transport frames `τ_k` (ambient rotations, `τ_k x = γ_k`) and the
/// antidevelopment increments `w_k = τ_k⁻¹ Log_{γ_k} γ_{k+1} ∈ T_x`.
#[derive(Clone, Debug)]
pub struct ManifoldPath<const A: usize> {
    pub points: Vec<Vector<A>>,
    pub transport: Vec<Frame<A>>,
    pub antidevelopment: Vec<Vector<A>>,
    /// Distance between the unforced last proposal and the target, for sampled bridges.
    pub forcing_correction: f64,
}

impl<const A: usize> ManifoldPath<A> {
    /// Builds transports by composing closed-form geodesic steps.
    pub fn from_points(points: Vec<Vector<A>>) -> Result<Self> {
        let mut transport = Vec::with_capacity(points.len());
        let mut antidevelopment = Vec::with_capacity(points.len().saturating_sub(1));
        let mut tau = Frame::<A>::identity();
        transport.push(tau);
        for w in points.windows(2) {
            let step = Sphere::<A>::step_transport(&w[0], &w[1])?;
            let v = Sphere::<A>::log(&w[0], &w[1])?;
            antidevelopment.push(tau.transpose() * v);
            tau = step * tau;
            transport.push(tau);
        }
        Ok(Self {
            points,
            transport,
            antidevelopment,
            forcing_correction: 0.0,
        })
    }

    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.steps() as f64
    }

    pub fn base(&self) -> &Vector<A> {
        &self.points[0]
    }

    pub fn is_loop(&self, tol: f64) -> bool {
        (self.points[0] - self.points[self.steps()]).norm() < tol
    }

    /// Holonomy of the Levi-Civita connection, `τ_N`.
    pub fn holonomy(&self) -> &Frame<A> {
        self.transport.last().unwrap()
    }

    /// `Σ d(γ_k, γ_{k+1})²`.
    pub fn quadratic_variation(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| Sphere::<A>::distance(&w[0], &w[1]).powi(2))
            .sum()
    }

    /// The same loop run backwards.
    pub fn reversed(&self) -> Result<Self> {
        let mut p = self.points.clone();
        p.reverse();
        Self::from_points(p)
    }

    /// Mid-interval point (normalized chord midpoint).
    pub fn midpoint(&self, k: usize) -> Vector<A> {
        Sphere::<A>::normalize(&(self.points[k] + self.points[k + 1]))
    }
}

/// Densely sampled piecewise geodesic through `corners`, with `per_edge` steps per edge.
pub fn geodesic_polygon<const A: usize>(corners: &[Vector<A>], per_edge: usize) -> Result<Vec<Vector<A>>> {
    let mut pts = vec![corners[0]];
    for w in corners.windows(2) {
        let v = Sphere::<A>::log(&w[0], &w[1])?;
        for j in 1..=per_edge {
            pts.push(Sphere::<A>::geodesic_exp(&w[0], &(v * (j as f64 / per_edge as f64))));
        }
    }
    Ok(pts)
}
