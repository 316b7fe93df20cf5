//! The canonical 2-form on the path group `P(G)`, given on right vector fields
//! `g K` by `c(K_X, K_Y) = c_G ∫₀¹ ⟨X, dY⟩ − ⟨Y, dX⟩`.

use super::kernel::{KernelForm, Slot};
use crate::lie_group::{AlgebraElement, LieGroup, Su2};
use crate::{Error, Result};
use std::f64::consts::PI;

/// `c_G = 1/(8π²)` against the metric `⟨a, b⟩ = −½ tr(ab)` on `su(2)`.
pub const C_G: f64 = 1.0 / (8.0 * PI * PI);

/// Stratonovich (midpoint) sum `Σ ⟨X̄_k, ΔY_k⟩ − ⟨Ȳ_k, ΔX_k⟩` on every `stride`-th point.
fn midpoint_sum(x: &[AlgebraElement], y: &[AlgebraElement], stride: usize) -> f64 {
    let idx: Vec<usize> = (0..x.len()).step_by(stride).collect();
    idx.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let xm = (x[a] + x[b]) * 0.5;
            let ym = (y[a] + y[b]) * 0.5;
            xm.dot(&(y[b] - y[a])) - ym.dot(&(x[b] - x[a]))
        })
        .sum()
}

/// `c(K_X, K_Y)` for algebra paths sampled on a uniform grid of `[0, 1]`.
///
/// The midpoint sum has an `O(Δt²)` error; on an even number of steps it is
/// Richardson-extrapolated against the half-resolution sum.
pub fn canonical_two_form(kx: &[AlgebraElement], ky: &[AlgebraElement]) -> Result<f64> {
    if kx.len() != ky.len() || kx.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "paths of length {} and {}",
            kx.len(),
            ky.len()
        )));
    }
    let fine = midpoint_sum(kx, ky, 1);
    let n = kx.len() - 1;
    let value = if n.is_multiple_of(2) {
        (4.0 * fine - midpoint_sum(kx, ky, 2)) / 3.0
    } else {
        fine
    };
    Ok(C_G * value)
}

/// Kernel of `c` restricted to loops (`K_0 = K_1 = 0`), centred in each slot:
/// `c_G (sgn(t₂ − t₁) + 2(t₁ − t₂)) ⟨a, b⟩`.
pub fn canonical_kernel() -> KernelForm {
    KernelForm::new("c", 0, 2, |_, t, _, v| {
        let sgn = if t[0] < t[1] { 1.0 } else { -1.0 };
        C_G * (sgn + 2.0 * (t[0] - t[1])) * v[0].dot(&v[1])
    })
}

/// `c([X, Y], Z) + c([Y, Z], X) + c([Z, X], Y)` with the pointwise bracket.
///
/// Vanishes on loops; on paths with free endpoint it equals `−c_G ⟨[X₁, Y₁], Z₁⟩`.
pub fn cocycle_residual(x: &[AlgebraElement], y: &[AlgebraElement], z: &[AlgebraElement]) -> Result<f64> {
    let br = |a: &[AlgebraElement], b: &[AlgebraElement]| -> Vec<AlgebraElement> {
        a.iter().zip(b).map(|(p, q)| Su2::bracket(p, q)).collect()
    };
    Ok(canonical_two_form(&br(x, y), z)? + canonical_two_form(&br(y, z), x)? + canonical_two_form(&br(z, x), y)?)
}

/// Slot samples of `K'` at the cell midpoints, for kernel evaluation.
pub fn derivative_slots(k: &[AlgebraElement]) -> Vec<Slot> {
    let n = (k.len() - 1) as f64;
    k.windows(2).map(|w| (w[1] - w[0]).0 * n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::kernel::evaluate;

    fn path(n: usize, f: impl Fn(f64) -> AlgebraElement) -> Vec<AlgebraElement> {
        (0..=n).map(|k| f(k as f64 / n as f64)).collect()
    }

    #[test]
    fn analytic_value() {
        let a = AlgebraElement::new(1.0, 0.0, 0.0);
        let n = 4096;
        let kx = path(n, |s| a * (2.0 * PI * s).sin());
        let ky = path(n, |s| a * (1.0 - (2.0 * PI * s).cos()));
        let c = canonical_two_form(&kx, &ky).unwrap();
        assert!((c - 1.0 / (4.0 * PI)).abs() < 1e-8, "{}", c - 1.0 / (4.0 * PI));
        assert!(canonical_two_form(&kx, &kx).unwrap().abs() < 1e-15);
        let k2: Vec<_> = kx.iter().map(|v| *v * 2.0).collect();
        assert!((canonical_two_form(&k2, &ky).unwrap() - 2.0 * c).abs() < 1e-12);
    }

    #[test]
    fn cocycle_on_loops_and_boundary_on_paths() {
        let n = 2048;
        let x = path(n, |s| AlgebraElement::new((2.0 * PI * s).sin(), s * (1.0 - s), 0.3 * (4.0 * PI * s).sin()));
        let y = path(n, |s| AlgebraElement::new(1.0 - (2.0 * PI * s).cos(), (PI * s).sin().powi(3), -s * (1.0 - s)));
        let z = path(n, |s| AlgebraElement::new(0.2, 1.0, -0.5) * (6.0 * PI * s).sin() + AlgebraElement::new(s * (1.0 - s), 0.0, 0.0));
        assert!(cocycle_residual(&x, &y, &z).unwrap().abs() < 1e-6);

        let open = |p: &Vec<AlgebraElement>, c: AlgebraElement| -> Vec<AlgebraElement> {
            p.iter().enumerate().map(|(k, v)| *v + c * (k as f64 / n as f64)).collect()
        };
        let (xo, yo, zo) = (
            open(&x, AlgebraElement::new(1.0, 0.0, 0.0)),
            open(&y, AlgebraElement::new(0.0, 1.0, 0.0)),
            open(&z, AlgebraElement::new(0.0, 0.0, 1.0)),
        );
        let expected = -C_G * Su2::bracket(&xo[n], &yo[n]).dot(&zo[n]);
        assert!((cocycle_residual(&xo, &yo, &zo).unwrap() - expected).abs() < 1e-6);
    }

    #[test]
    fn kernel_matches_direct_formula_on_loops() {
        let n = 256;
        let x = path(n, |s| AlgebraElement::new((2.0 * PI * s).sin(), s * (1.0 - s), 0.0));
        let y = path(n, |s| AlgebraElement::new(1.0 - (2.0 * PI * s).cos(), 0.0, (PI * s).sin()));
        let direct = canonical_two_form(&x, &y).unwrap();
        let (dx, dy) = (derivative_slots(&x), derivative_slots(&y));
        let via_kernel = evaluate(&canonical_kernel(), &[], &[&dx, &dy]).unwrap();
        assert!((direct - via_kernel).abs() < 5e-4 * direct.abs(), "{direct} vs {via_kernel}");
    }
}
