//! Round unit spheres S² and S³ embedded in ℝ³ and ℝ⁴.
//!
//! Points and tangent vectors are ambient vectors; `A` is the ambient dimension.
//! S³ is identified with SU(2) through unit quaternions, which makes the
//! bi-invariant metric of the group the round metric of the sphere.

pub mod bridge;
pub mod field;
pub mod path;

pub use bridge::{sample_brownian_bridge_manifold, sample_brownian_motion_manifold};
pub use field::{field_values, VectorFieldH};
pub use path::ManifoldPath;

use crate::lie_group::{LieGroup, Su2};
use crate::{Error, Result};
use nalgebra::{SMatrix, SVector};
use std::f64::consts::PI;

pub type Vector<const A: usize> = SVector<f64, A>;
pub type Frame<const A: usize> = SMatrix<f64, A, A>;

/// Marker for the unit sphere in ℝ^A.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sphere<const A: usize>;

pub type S2 = Sphere<3>;
pub type S3 = Sphere<4>;

/// Below this remaining time the S² drift uses the small-time parametrix.
const S2_SERIES_MIN_TIME: f64 = 0.02;

impl<const A: usize> Sphere<A> {
    pub const DIM: usize = A - 1;

    pub fn north() -> Vector<A> {
        let mut v = Vector::<A>::zeros();
        v[A - 1] = 1.0;
        v
    }

    /// The base point used throughout: the last ambient axis for S², the
    /// quaternion identity `(1, 0, 0, 0)` for S³.
    pub fn base_point() -> Vector<A> {
        if A == 4 {
            let mut v = Vector::<A>::zeros();
            v[0] = 1.0;
            v
        } else {
            Self::north()
        }
    }

    pub fn normalize(p: &Vector<A>) -> Vector<A> {
        p / p.norm()
    }

    /// Orthogonal projection onto `T_p`.
    pub fn project(p: &Vector<A>, v: &Vector<A>) -> Vector<A> {
        v - p * p.dot(v)
    }

    pub fn distance(p: &Vector<A>, q: &Vector<A>) -> f64 {
        // atan2 form is accurate for both small and large angles
        let cross = (q - p * p.dot(q)).norm();
        cross.atan2(p.dot(q))
    }

    /// `cos|v| x + sin|v| v/|v|`.
    pub fn geodesic_exp(x: &Vector<A>, v: &Vector<A>) -> Vector<A> {
        let n = v.norm();
        if n == 0.0 {
            return *x;
        }
        Self::normalize(&(x * n.cos() + v * (n.sin() / n)))
    }

    /// Inverse of [`Self::geodesic_exp`]; fails at the antipode.
    pub fn log(p: &Vector<A>, q: &Vector<A>) -> Result<Vector<A>> {
        let w = q - p * p.dot(q);
        let s = w.norm();
        let theta = s.atan2(p.dot(q));
        if s < 1e-14 {
            if theta > 1.0 {
                return Err(Error::StepTooLarge { gap: 1.0 + p.dot(q) });
            }
            return Ok(Vector::<A>::zeros());
        }
        Ok(w * (theta / s))
    }

    /// Levi-Civita transport along the minimizing geodesic from `p` to `q`: the
    /// rotation in the plane of `p, q` carrying `p` to `q`, identity on the complement.
    pub fn step_transport(p: &Vector<A>, q: &Vector<A>) -> Result<Frame<A>> {
        let c = p.dot(q);
        if 1.0 + c < 1e-8 {
            return Err(Error::StepTooLarge { gap: 1.0 + c });
        }
        let s = p + q;
        Ok(Frame::<A>::identity() - s * s.transpose() / (1.0 + c) + q * p.transpose() * 2.0)
    }

    /// Riemann tensor of the unit sphere: `R(X, Y)Z = ⟨Y, Z⟩X − ⟨X, Z⟩Y`.
    pub fn curvature(x: &Vector<A>, y: &Vector<A>, z: &Vector<A>) -> Vector<A> {
        x * y.dot(z) - y * x.dot(z)
    }

    /// Ricci endomorphism `S_X = (dim − 1) X`.
    pub fn ricci(x: &Vector<A>) -> Vector<A> {
        x * (Self::DIM as f64 - 1.0)
    }

    /// `d/dθ ln p_τ(θ)` for the heat kernel of `½Δ` as a function of geodesic distance.
    pub fn log_heat_slope(tau: f64, theta: f64) -> f64 {
        match A {
            3 => s2_log_heat_slope(tau, theta),
            4 => Su2::log_heat_slope(tau, theta),
            _ => unimplemented!("only S² and S³ are supported"),
        }
    }

    /// Heat kernel of `½Δ` against the normalized volume measure.
    pub fn heat_kernel(tau: f64, theta: f64) -> f64 {
        match A {
            3 => s2_heat_kernel(tau, theta),
            4 => Su2::log_heat_kernel(tau, theta).exp(),
            _ => unimplemented!("only S² and S³ are supported"),
        }
    }

    /// Density of the geodesic distance from a fixed point under the normalized volume.
    pub fn distance_density(theta: f64) -> f64 {
        match A {
            3 => 0.5 * theta.sin(),
            4 => Su2::haar_angle_density(theta),
            _ => unimplemented!("only S² and S³ are supported"),
        }
    }
}

fn legendre_terms(tau: f64) -> usize {
    (((80.0 / tau).sqrt()).ceil() as usize + 8).min(2000)
}

/// `Σ (2l+1) P_l(cos θ) e^{-l(l+1)τ/2}`.
pub fn s2_heat_kernel(tau: f64, theta: f64) -> f64 {
    let x = theta.cos();
    let (mut p0, mut p1) = (1.0, x);
    let mut acc = 1.0 + 3.0 * x * (-tau).exp();
    for l in 1..legendre_terms(tau) {
        let p2 = ((2 * l + 1) as f64 * x * p1 - l as f64 * p0) / (l + 1) as f64;
        let m = (l + 1) as f64;
        acc += (2.0 * m + 1.0) * p2 * (-m * (m + 1.0) * tau / 2.0).exp();
        p0 = p1;
        p1 = p2;
    }
    acc
}

fn s2_log_heat_slope(tau: f64, theta: f64) -> f64 {
    let theta = theta.clamp(0.0, PI);
    if theta < 1e-9 || PI - theta < 1e-9 {
        return 0.0;
    }
    let s = theta.sin();
    // small-time parametrix p ≈ τ⁻¹ √(θ / sin θ) e^{-θ²/2τ}
    let parametrix = 0.5 * (1.0 / theta - theta.cos() / s) - theta / tau;
    if tau < S2_SERIES_MIN_TIME {
        return parametrix;
    }
    let x = theta.cos();
    let (mut p_prev, mut p) = (1.0, x);
    let mut val = 1.0 + 3.0 * x * (-tau).exp();
    // d/dθ P_1(cos θ) = -sin θ
    let mut dval = -3.0 * s * (-tau).exp();
    let mut magnitude = val.abs();
    for l in 1..legendre_terms(tau) {
        let m = (l + 1) as f64;
        let p_next = ((2 * l + 1) as f64 * x * p - l as f64 * p_prev) / m;
        // d/dθ P_m(cos θ) = m (x P_m − P_{m−1}) / sin θ
        let dp = m * (x * p_next - p) / s;
        let w = (2.0 * m + 1.0) * (-m * (m + 1.0) * tau / 2.0).exp();
        val += w * p_next;
        dval += w * dp;
        magnitude += (w * p_next).abs();
        p_prev = p;
        p = p_next;
    }
    if val < 1e-9 * magnitude {
        // the alternating series has cancelled to noise
        return parametrix;
    }
    dval / val
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geodesic_closed_forms() {
        let x = S2::north();
        assert_eq!(S2::geodesic_exp(&x, &Vector::<3>::zeros()), x);
        let v = Vector::<3>::new(PI / 2.0, 0.0, 0.0);
        let p = S2::geodesic_exp(&x, &v);
        assert!((p - Vector::<3>::new(1.0, 0.0, 0.0)).norm() < 1e-15);
        let v = Vector::<3>::new(0.0, PI, 0.0);
        assert!((S2::geodesic_exp(&x, &v) + x).norm() < 1e-15);
    }

    #[test]
    fn step_transport_is_rotation_carrying_p_to_q() {
        let p = S3::normalize(&Vector::<4>::new(0.3, -0.5, 0.7, 0.1));
        let q = S3::normalize(&Vector::<4>::new(0.2, -0.4, 0.8, 0.4));
        let r = S3::step_transport(&p, &q).unwrap();
        assert!((r * p - q).norm() < 1e-14);
        assert!((r.transpose() * r - Frame::<4>::identity()).norm() < 1e-14);
        assert!((r.determinant() - 1.0).abs() < 1e-12);
        assert!(S3::step_transport(&p, &(-p)).is_err());
    }

    #[test]
    fn curvature_identities() {
        let x = S2::north();
        let e1 = Vector::<3>::new(1.0, 0.0, 0.0);
        let e2 = Vector::<3>::new(0.0, 1.0, 0.0);
        let _ = x;
        assert!(S2::curvature(&e1, &e1, &e2).norm() < 1e-15);
        assert!((S2::curvature(&e1, &e2, &e2) - e1).norm() < 1e-15);
        assert_eq!(S2::ricci(&e1), e1);
        assert_eq!(S3::ricci(&Vector::<4>::new(0.0, 1.0, 0.0, 0.0)), Vector::<4>::new(0.0, 2.0, 0.0, 0.0));
    }

    #[test]
    fn s2_kernel_normalized_and_slope_consistent() {
        for &tau in &[0.05, 0.3, 1.0] {
            let n = 4000;
            let h = PI / n as f64;
            let mass: f64 = (0..n)
                .map(|i| {
                    let th = (i as f64 + 0.5) * h;
                    s2_heat_kernel(tau, th) * 0.5 * th.sin() * h
                })
                .sum();
            assert!((mass - 1.0).abs() < 1e-6, "τ={tau}: {mass}");
            for &th in &[0.2, 1.0, 2.0] {
                if s2_heat_kernel(tau, th) < 1e-6 {
                    continue;
                }
                let e = 1e-6;
                let fd = (s2_heat_kernel(tau, th + e).ln() - s2_heat_kernel(tau, th - e).ln()) / (2.0 * e);
                let an = s2_log_heat_slope(tau, th);
                assert!((fd - an).abs() < 1e-5 * (1.0 + fd.abs()), "τ={tau} θ={th}: {fd} {an}");
            }
        }
    }

    #[test]
    fn parametrix_close_to_series_at_switch() {
        for &th in &[0.05, 0.2, 0.5] {
            let tau = S2_SERIES_MIN_TIME;
            let series = s2_log_heat_slope(tau * 1.0000001, th);
            let asym = 0.5 * (1.0 / th - th.cos() / th.sin()) - th / tau;
            assert!((series - asym).abs() < 0.02 * asym.abs().max(1.0), "{series} {asym}");
        }
    }
}
