use super::{AlgebraElement, LieGroup};
use crate::mc::{normal, Rng};
use crate::{Error, Result};

/// A path on a uniform grid of `[0, 1]` together with the algebra increments that
/// drive it: `points[k+1] = exp(increments[k]) · points[k]`.
#[derive(Clone, Debug)]
pub struct GroupPath<G> {
    pub points: Vec<G>,
    pub increments: Vec<AlgebraElement>,
    /// For bridges: distance between the unforced final proposal and the target.
    pub forcing_correction: f64,
}

impl<G: LieGroup> GroupPath<G> {
    pub fn steps(&self) -> usize {
        self.increments.len()
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.steps() as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 / self.steps() as f64
    }

    pub fn endpoint(&self) -> &G {
        self.points.last().unwrap()
    }

    /// Rebuild from points alone; increments become `Log(g_{k+1} g_k⁻¹)`.
    pub fn from_points(points: Vec<G>) -> Result<Self> {
        let increments = points
            .windows(2)
            .map(|w| w[1].compose(&w[0].inverse()).log_with_margin(0.0))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            points,
            increments,
            forcing_correction: 0.0,
        })
    }

    /// Value at the grid point nearest to `s`.
    pub fn at(&self, s: f64) -> &G {
        let k = (s * self.steps() as f64).round() as usize;
        &self.points[k.min(self.steps())]
    }
}

pub fn gaussian_increment(rng: &mut Rng, dt: f64) -> AlgebraElement {
    let s = dt.sqrt();
    AlgebraElement::new(s * normal(rng), s * normal(rng), s * normal(rng))
}

/// Geometric (left-increment exponential Euler) scheme for `dg = dB g`, `g_0 = e`,
/// read in the Stratonovich sense.
pub fn sample_brownian_motion<G: LieGroup>(steps: usize, rng: &mut Rng) -> Result<GroupPath<G>> {
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("grid size {steps} < 2")));
    }
    let dt = 1.0 / steps as f64;
    let mut points = Vec::with_capacity(steps + 1);
    let mut increments = Vec::with_capacity(steps);
    let mut g = G::identity();
    points.push(g);
    for _ in 0..steps {
        let db = gaussian_increment(rng, dt);
        g = G::exp(&db).compose(&g).reproject();
        points.push(g);
        increments.push(db);
    }
    Ok(GroupPath {
        points,
        increments,
        forcing_correction: 0.0,
    })
}
