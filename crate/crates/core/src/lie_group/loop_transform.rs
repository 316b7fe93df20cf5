//! Path-to-loop transform `g_s ↦ g_s exp(-s Log g_1)` with a smooth cutoff in `|Log g_1|`.

use super::brownian::GroupPath;
use super::LieGroup;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cutoff {
    pub r_in: f64,
    pub r_out: f64,
}

impl Default for Cutoff {
    fn default() -> Self {
        Self {
            r_in: PI / 2.0,
            r_out: 3.0 * PI / 4.0,
        }
    }
}

impl Cutoff {
    /// C^∞ bump: 1 on `[0, r_in]`, 0 on `[r_out, ∞)`.
    pub fn weight(&self, r: f64) -> f64 {
        if r <= self.r_in {
            return 1.0;
        }
        if r >= self.r_out {
            return 0.0;
        }
        let x = (self.r_out - r) / (self.r_out - self.r_in);
        let f = |y: f64| if y <= 0.0 { 0.0 } else { (-1.0 / y).exp() };
        f(x) / (f(x) + f(1.0 - x))
    }
}

/// Returns the loop and the cutoff weight `φ(g_1)`; a zero weight marks a sample
/// whose endpoint is too far out for the logarithm to be used.
pub fn path_to_loop<G: LieGroup>(path: &GroupPath<G>, cutoff: &Cutoff) -> (GroupPath<G>, f64) {
    let Ok(log) = path.endpoint().log_with_margin(0.0) else {
        return (path.clone(), 0.0);
    };
    let weight = cutoff.weight(log.norm());
    if weight == 0.0 {
        return (path.clone(), 0.0);
    }
    let points: Vec<G> = path
        .points
        .iter()
        .enumerate()
        .map(|(k, g)| g.compose(&G::exp(&(log * -path.time(k)))))
        .collect();
    match GroupPath::from_points(points) {
        Ok(l) => (l, weight),
        Err(_) => (path.clone(), 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_group::{sample_brownian_bridge, sample_brownian_motion, AlgebraElement, Su2};
    use crate::mc::stream;

    #[test]
    fn loop_is_unchanged() {
        let p = sample_brownian_bridge(&Su2::identity(), 64, &mut stream(1, 1)).unwrap();
        let (l, w) = path_to_loop(&p, &Cutoff::default());
        assert_eq!(w, 1.0);
        for (a, b) in p.points.iter().zip(&l.points) {
            assert!(a.distance(b) < 1e-9);
        }
    }

    #[test]
    fn closes_paths_inside_inner_radius() {
        for i in 0..50 {
            let p = sample_brownian_motion::<Su2>(64, &mut stream(8, i)).unwrap();
            let r = p.endpoint().log_with_margin(0.0).unwrap().norm();
            let (l, w) = path_to_loop(&p, &Cutoff::default());
            if r < PI / 2.0 {
                assert_eq!(w, 1.0);
                assert!(l.endpoint().distance(&Su2::identity()) < 1e-9);
            }
            if w > 0.0 {
                assert!(l.endpoint().distance(&Su2::identity()) < 1e-9);
            }
        }
    }

    #[test]
    fn cut_locus_weight_zero() {
        let mut p = sample_brownian_motion::<Su2>(8, &mut stream(0, 0)).unwrap();
        *p.points.last_mut().unwrap() = Su2::exp(&AlgebraElement::new(PI, 0.0, 0.0));
        let (_, w) = path_to_loop(&p, &Cutoff::default());
        assert_eq!(w, 0.0);
    }

    #[test]
    fn bump_is_monotone() {
        let c = Cutoff::default();
        let mut last = 1.0;
        for i in 0..=100 {
            let w = c.weight(c.r_in + (c.r_out - c.r_in) * i as f64 / 100.0);
            assert!(w <= last + 1e-15 && (0.0..=1.0).contains(&w));
            last = w;
        }
    }
}
