//! Paired Monte Carlo estimates for integration-by-parts identities.

use crate::mc::{par_samples, Rng};

/// Outcome of a two-sided Monte Carlo check `E[lhs] = E[rhs]`.
#[derive(Clone, Debug, PartialEq)]
pub struct McReport {
    pub lhs: f64,
    pub rhs: f64,
    /// Standard error of the paired difference.
    pub se: f64,
    pub samples: usize,
    pub z: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl McReport {
    /// Builds a report from per-sample `(lhs, rhs)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)], threshold: f64) -> Self {
        let n = pairs.len() as f64;
        let lhs = pairs.iter().map(|p| p.0).sum::<f64>() / n;
        let rhs = pairs.iter().map(|p| p.1).sum::<f64>() / n;
        let d = lhs - rhs;
        let var = pairs.iter().map(|p| (p.0 - p.1 - d).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        let se = (var / n).sqrt();
        let z = if se > 0.0 {
            d / se
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY.copysign(d)
        };
        Self {
            lhs,
            rhs,
            se,
            samples: pairs.len(),
            z,
            threshold,
            pass: z.abs() <= threshold,
        }
    }
}

/// Runs `sample(i, rng) -> (⟨dF, X⟩, F · div X)` over `samples` seeded streams.
pub fn ibp_check<F>(seed: u64, samples: usize, threshold: f64, sample: F) -> McReport
where
    F: Fn(usize, &mut Rng) -> (f64, f64) + Sync + Send,
{
    McReport::from_pairs(&par_samples(seed, samples, sample), threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::normal;

    #[test]
    fn constant_functional() {
        let r = ibp_check(1, 5000, 3.0, |_, rng| (0.0, 2.0 * normal(rng)));
        assert_eq!(r.lhs, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn flat_wiener_gaussian_ibp() {
        // F = B_{1/2}, h(s) = min(s, 1 − s): ⟨dF, h⟩ = h(½) = ∫₀^{½} h' = ½, div h = ∫ h' dB
        let n = 64;
        let r = ibp_check(2, 100_000, 3.0, |_, rng| {
            let dt = 1.0 / n as f64;
            let db: Vec<f64> = (0..n).map(|_| normal(rng) * dt.sqrt()).collect();
            let b_half: f64 = db[..n / 2].iter().sum();
            let div: f64 = db.iter().enumerate().map(|(k, d)| if k < n / 2 { *d } else { -*d }).sum();
            (0.5, b_half * div)
        });
        assert!(r.pass, "{r:?}");
        assert_eq!(r.lhs, 0.5);
    }

    #[test]
    fn deterministic_given_seed() {
        let f = |_: usize, rng: &mut Rng| (normal(rng), normal(rng));
        assert_eq!(ibp_check(7, 100, 3.0, f), ibp_check(7, 100, 3.0, f));
    }
}
