//! Cylindrical functionals `F(q_{s_1}, …, q_{s_r})` and their directional derivatives.

use super::Pairing;
use crate::{Error, Result};
use std::sync::Arc;

type Eval<P> = Arc<dyn Fn(&[P]) -> f64 + Send + Sync>;
type Grad<P, T> = Arc<dyn Fn(&[P]) -> Vec<T> + Send + Sync>;

/// A smooth function of the path sampled at fixed times, together with its
/// gradient in each slot. `T` is the tangent representation paired with fields.
#[derive(Clone)]
pub struct CylindricalFunctional<P, T> {
    pub times: Vec<f64>,
    eval: Eval<P>,
    grad: Grad<P, T>,
}

impl<P, T> std::fmt::Debug for CylindricalFunctional<P, T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CylindricalFunctional").field("times", &self.times).finish()
    }
}

impl<P: Copy, T: Pairing> CylindricalFunctional<P, T> {
    pub fn new(
        times: Vec<f64>,
        eval: impl Fn(&[P]) -> f64 + Send + Sync + 'static,
        grad: impl Fn(&[P]) -> Vec<T> + Send + Sync + 'static,
    ) -> Result<Self> {
        if times.windows(2).any(|w| w[0] >= w[1]) || times.iter().any(|&t| !(0.0..=1.0).contains(&t)) {
            return Err(Error::InvalidArgument("times must be increasing in [0, 1]".into()));
        }
        Ok(Self {
            times,
            eval: Arc::new(eval),
            grad: Arc::new(grad),
        })
    }

    /// Grid indices nearest to the sampling times.
    pub fn indices(&self, steps: usize) -> Vec<usize> {
        self.times
            .iter()
            .map(|t| ((t * steps as f64).round() as usize).min(steps))
            .collect()
    }

    fn sample(&self, path: &[P]) -> Vec<P> {
        self.indices(path.len() - 1).into_iter().map(|i| path[i]).collect()
    }

    pub fn eval_slots(&self, q: &[P]) -> f64 {
        (self.eval)(q)
    }

    pub fn grad_slots(&self, q: &[P]) -> Vec<T> {
        (self.grad)(q)
    }

    /// `F` on a full grid path.
    pub fn evaluate(&self, path: &[P]) -> f64 {
        self.eval_slots(&self.sample(path))
    }

    pub fn gradient(&self, path: &[P]) -> Vec<T> {
        self.grad_slots(&self.sample(path))
    }
}

/// `⟨dF, X⟩ = Σ_i ⟨∇_i F, X_{s_i}⟩`, with `field` given on the same grid as `path`.
pub fn functional_derivative<P: Copy, T: Pairing>(
    f: &CylindricalFunctional<P, T>,
    path: &[P],
    field: &[T],
) -> Result<f64> {
    if path.len() != field.len() {
        return Err(Error::InvalidArgument(format!(
            "path has {} points, field has {}",
            path.len(),
            field.len()
        )));
    }
    let idx = f.indices(path.len() - 1);
    Ok(f.gradient(path)
        .iter()
        .zip(idx)
        .map(|(g, i)| g.pair(&field[i]))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{Sphere, Vector, S2};

    fn bump() -> CylindricalFunctional<Vector<3>, Vector<3>> {
        CylindricalFunctional::new(
            vec![0.25, 0.5],
            |q: &[Vector<3>]| (q[0][0] * 2.0).sin() * q[1][1].exp(),
            |q: &[Vector<3>]| {
                let a = (q[0][0] * 2.0).sin();
                let b = q[1][1].exp();
                vec![
                    Vector::<3>::new(2.0 * (q[0][0] * 2.0).cos() * b, 0.0, 0.0),
                    Vector::<3>::new(0.0, a * b, 0.0),
                ]
            },
        )
        .unwrap()
    }

    #[test]
    fn constant_functional_has_zero_derivative() {
        let f = CylindricalFunctional::<f64, f64>::new(vec![0.5], |_| 3.0, |_| vec![0.0]).unwrap();
        assert_eq!(functional_derivative(&f, &[0.0, 1.0, 2.0], &[1.0, 1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn linear_functional_returns_coefficient() {
        let f = CylindricalFunctional::<f64, f64>::new(vec![0.5], |q| 2.5 * q[0], |_| vec![2.5]).unwrap();
        assert_eq!(functional_derivative(&f, &[0.0, 0.3, 0.0], &[0.0, 1.0, 0.0]).unwrap(), 2.5);
    }

    #[test]
    fn matches_flow_difference() {
        let f = bump();
        let n = 8;
        let path: Vec<Vector<3>> = (0..=n)
            .map(|k| Sphere::<3>::normalize(&Vector::<3>::new(0.3 * k as f64, 0.1, 1.0)))
            .collect();
        let field: Vec<Vector<3>> = path
            .iter()
            .enumerate()
            .map(|(k, p)| Sphere::<3>::project(p, &Vector::<3>::new(1.0, -(k as f64), 0.5)))
            .collect();
        let flow = |e: f64| -> Vec<Vector<3>> {
            path.iter().zip(&field).map(|(p, v)| S2::geodesic_exp(p, &(v * e))).collect()
        };
        let e = 1e-5;
        let fd = (f.evaluate(&flow(e)) - f.evaluate(&flow(-e))) / (2.0 * e);
        let an = functional_derivative(&f, &path, &field).unwrap();
        assert!((fd - an).abs() < 1e-5, "{fd} {an}");
    }
}
