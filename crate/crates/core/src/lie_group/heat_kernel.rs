//! Truncated character series for the heat kernel of `½Δ` on SU(2) and SO(3).

use super::LieGroup;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatKernelModel {
    pub truncation: usize,
    pub time_floor: f64,
}

impl Default for HeatKernelModel {
    fn default() -> Self {
        Self {
            truncation: 30,
            time_floor: 0.01,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatKernelValue {
    pub value: f64,
    /// Upper bound on the discarded terms, `Σ_{l > L} d_l² e^{-c_l t/2}`.
    pub tail_bound: f64,
    pub truncation_warning: bool,
}

pub const TAIL_TOLERANCE: f64 = 1e-8;

impl HeatKernelModel {
    pub fn with_truncation(truncation: usize) -> Self {
        Self {
            truncation,
            ..Self::default()
        }
    }

    /// `p_t(g)` against normalized Haar measure.
    pub fn density<G: LieGroup>(&self, t: f64, g: &G) -> Result<HeatKernelValue> {
        self.density_at_angle::<G>(t, g.angle())
    }

    pub fn density_at_angle<G: LieGroup>(&self, t: f64, angle: f64) -> Result<HeatKernelValue> {
        if t.is_nan() || t < self.time_floor {
            return Err(Error::TimeBelowFloor {
                t,
                floor: self.time_floor,
            });
        }
        let value = (0..=self.truncation)
            .map(|l| G::irrep_dim(l) * G::character(l, angle) * (-G::casimir(l) * t / 2.0).exp())
            .sum();
        let mut tail_bound = 0.0;
        for l in self.truncation + 1.. {
            let term = G::irrep_dim(l).powi(2) * (-G::casimir(l) * t / 2.0).exp();
            tail_bound += term;
            if term < 1e-300 || l > self.truncation + 100_000 {
                break;
            }
        }
        Ok(HeatKernelValue {
            value,
            tail_bound,
            truncation_warning: tail_bound > TAIL_TOLERANCE,
        })
    }

    /// `∫ p_t dHaar` by composite Simpson quadrature over the class angle.
    pub fn total_mass<G: LieGroup>(&self, t: f64, panels: usize) -> Result<f64> {
        let n = panels + panels % 2;
        let h = std::f64::consts::PI / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let a = i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * self.density_at_angle::<G>(t, a)?.value * G::haar_angle_density(a);
        }
        Ok(acc * h / 3.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_group::{AlgebraElement, So3, Su2};

    #[test]
    fn stationary_for_large_time() {
        let m = HeatKernelModel::default();
        let g = Su2::exp(&AlgebraElement::new(0.4, 1.0, -0.3));
        assert!((m.density(40.0, &g).unwrap().value - 1.0).abs() < 1e-6);
        let r = So3::exp(&AlgebraElement::new(0.4, 1.0, -0.3));
        assert!((m.density(40.0, &r).unwrap().value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn class_function() {
        let m = HeatKernelModel::default();
        let g = Su2::exp(&AlgebraElement::new(0.4, 1.0, -0.3));
        let h = Su2::exp(&AlgebraElement::new(-2.0, 0.1, 0.5));
        let conj = h.compose(&g).compose(&h.inverse());
        let a = m.density(0.3, &g).unwrap().value;
        let b = m.density(0.3, &conj).unwrap().value;
        assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn matches_order_fifty_series_at_identity() {
        // Independent oracle: Σ_{l ≤ 50} (l+1)² e^{-l(l+2) t / 2} at θ = 0.
        let t = 0.5;
        let oracle: f64 = (0..=50)
            .map(|l| ((l + 1) * (l + 1)) as f64 * (-((l * (l + 2)) as f64) * t / 2.0).exp())
            .sum();
        let v = HeatKernelModel::default()
            .density(t, &Su2::identity())
            .unwrap();
        assert!((v.value - oracle).abs() < 1e-10);
        assert!(!v.truncation_warning);
    }

    #[test]
    fn integrates_to_one() {
        let m = HeatKernelModel::default();
        for &t in &[0.1, 0.5, 2.0] {
            assert!((m.total_mass::<Su2>(t, 2000).unwrap() - 1.0).abs() < 1e-6);
            assert!((m.total_mass::<So3>(t, 2000).unwrap() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn character_series_agrees_with_image_sum() {
        let m = HeatKernelModel::with_truncation(80);
        for &(t, th) in &[(0.05, 0.3), (0.5, 2.0), (1.0, 1.0)] {
            let series = m.density_at_angle::<Su2>(t, th).unwrap().value;
            let image = Su2::log_heat_kernel(t, th).exp();
            assert!((series - image).abs() < 1e-9 * series.max(1.0), "{series} {image}");
            let series = m.density_at_angle::<So3>(t, th).unwrap().value;
            let image = So3::log_heat_kernel(t, th).exp();
            assert!((series - image).abs() < 1e-9 * series.max(1.0), "{series} {image}");
        }
    }

    #[test]
    fn truncation_warning_at_small_time() {
        let m = HeatKernelModel::default();
        assert!(m.density_at_angle::<Su2>(0.011, 0.2).unwrap().truncation_warning);
        assert!(m.density_at_angle::<Su2>(0.001, 0.2).is_err());
    }
}
