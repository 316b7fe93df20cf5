use super::{AlgebraElement, LieGroup};
use crate::{Error, Result};
use nalgebra::{Complex, Matrix2, Vector3, Vector4};
use std::f64::consts::PI;

/// Element of SU(2) stored as a unit quaternion `w + x k_1 + y k_2 + z k_3`,
/// where `k_j = -i σ_j` multiply like the quaternion units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2 {
    q: Vector4<f64>,
}

impl Su2 {
    /// From quaternion components `(w, x, y, z)`; normalizes.
    pub fn from_quaternion(q: Vector4<f64>) -> Self {
        Self { q: q / q.norm() }
    }

    pub fn quaternion(&self) -> Vector4<f64> {
        self.q
    }

    /// The 2×2 unitary matrix `w I + x k_1 + y k_2 + z k_3`.
    pub fn to_matrix(&self) -> Matrix2<Complex<f64>> {
        let [w, x, y, z] = [self.q[0], self.q[1], self.q[2], self.q[3]];
        Matrix2::new(
            Complex::new(w, -z),
            Complex::new(-y, -x),
            Complex::new(y, -x),
            Complex::new(w, z),
        )
    }

    /// Skew-hermitian matrix of an algebra element.
    pub fn algebra_matrix(a: &AlgebraElement) -> Matrix2<Complex<f64>> {
        let v = a.0;
        Matrix2::new(
            Complex::new(0.0, -v[2]),
            Complex::new(-v[1], -v[0]),
            Complex::new(v[1], -v[0]),
            Complex::new(0.0, v[2]),
        )
    }

    /// Quaternion product.
    pub fn qmul(a: &Vector4<f64>, b: &Vector4<f64>) -> Vector4<f64> {
        let (aw, av) = (a[0], Vector3::new(a[1], a[2], a[3]));
        let (bw, bv) = (b[0], Vector3::new(b[1], b[2], b[3]));
        let w = aw * bw - av.dot(&bv);
        let v = bv * aw + av * bw + av.cross(&bv);
        Vector4::new(w, v[0], v[1], v[2])
    }

    pub fn qconj(a: &Vector4<f64>) -> Vector4<f64> {
        Vector4::new(a[0], -a[1], -a[2], -a[3])
    }

    /// Pure quaternion of an algebra element.
    pub fn pure(a: &AlgebraElement) -> Vector4<f64> {
        Vector4::new(0.0, a.0[0], a.0[1], a.0[2])
    }

    pub fn imaginary(q: &Vector4<f64>) -> AlgebraElement {
        AlgebraElement::new(q[1], q[2], q[3])
    }

    /// Right-trivialized tangent `v g⁻¹` of an ambient tangent vector `v` at `g`.
    pub fn right_trivialize(&self, v: &Vector4<f64>) -> AlgebraElement {
        Self::imaginary(&Self::qmul(v, &Self::qconj(&self.q)))
    }

    /// Left-trivialized tangent `g⁻¹ v`.
    pub fn left_trivialize(&self, v: &Vector4<f64>) -> AlgebraElement {
        Self::imaginary(&Self::qmul(&Self::qconj(&self.q), v))
    }

    /// Ambient vector of the tangent `a g` (right-invariant representative).
    pub fn right_translate(&self, a: &AlgebraElement) -> Vector4<f64> {
        Self::qmul(&Self::pure(a), &self.q)
    }

    /// Ambient vector of the tangent `g a`.
    pub fn left_translate(&self, a: &AlgebraElement) -> Vector4<f64> {
        Self::qmul(&self.q, &Self::pure(a))
    }

    /// `ln` of the image-sum expression for the heat kernel on the unit S³,
    /// as a density against normalized Haar measure.
    fn image_log_kernel(t: f64, angle: f64) -> f64 {
        let theta = angle.clamp(0.0, PI);
        // Σ_n (θ + 2πn) exp(-(θ + 2πn)² / 2t), summed with a shifted exponent.
        let terms = image_terms(t, theta);
        let m = -theta * theta / (2.0 * t);
        let (num, den_ratio) = if theta < 1e-7 {
            // S(θ)/sin θ → Σ (1 - y²/t) e^{...} as θ → 0
            let s: f64 = terms.clone().map(|(y, e)| (1.0 - y * y / t) * (e - m).exp()).sum();
            (s, 1.0)
        } else if PI - theta < 1e-7 {
            // S(θ)/sin θ → -S'(π)
            let s: f64 = terms.clone().map(|(y, e)| (1.0 - y * y / t) * (e - m).exp()).sum();
            (-s, 1.0)
        } else {
            let s: f64 = terms.clone().map(|(y, e)| y * (e - m).exp()).sum();
            (s, theta.sin())
        };
        let log_vol = (2.0 * PI * PI).ln();
        log_vol - 1.5 * (2.0 * PI * t).ln() + t / 2.0 + m + (num / den_ratio).ln()
    }
}

/// Images `(y, −y²/2t)` with `y = θ + 2πn`, keeping the `n` whose weight is
/// within `e^{-40}` of the leading term.
fn image_terms(t: f64, theta: f64) -> impl Iterator<Item = (f64, f64)> + Clone {
    let reach = (((80.0 * t).sqrt() / (2.0 * PI)).ceil() as i32 + 1).min(12);
    (-reach..=reach).map(move |n| {
        let y = theta + 2.0 * PI * n as f64;
        (y, -y * y / (2.0 * t))
    })
}

impl LieGroup for Su2 {
    const NAME: &'static str = "SU(2)";

    fn identity() -> Self {
        Self {
            q: Vector4::new(1.0, 0.0, 0.0, 0.0),
        }
    }

    fn compose(&self, other: &Self) -> Self {
        Self {
            q: Self::qmul(&self.q, &other.q),
        }
    }

    fn inverse(&self) -> Self {
        Self {
            q: Self::qconj(&self.q),
        }
    }

    fn exp(a: &AlgebraElement) -> Self {
        let theta = a.norm();
        let s = if theta < 1e-8 {
            1.0 - theta * theta / 6.0
        } else {
            theta.sin() / theta
        };
        Self {
            q: Vector4::new(theta.cos(), s * a.0[0], s * a.0[1], s * a.0[2]),
        }
    }

    fn log_with_margin(&self, margin: f64) -> Result<AlgebraElement> {
        let distance = self.real_trace() + 2.0;
        if distance < margin || (margin <= 0.0 && distance <= 0.0) {
            return Err(Error::CutLocus { margin, distance });
        }
        let v = Vector3::new(self.q[1], self.q[2], self.q[3]);
        let s = v.norm();
        let theta = s.atan2(self.q[0]);
        let scale = if s < 1e-8 {
            1.0 + theta * theta / 6.0
        } else {
            theta / s
        };
        Ok(AlgebraElement(v * scale))
    }

    fn adjoint(&self, a: &AlgebraElement) -> AlgebraElement {
        Self::imaginary(&Self::qmul(
            &Self::qmul(&self.q, &Self::pure(a)),
            &Self::qconj(&self.q),
        ))
    }

    fn bracket(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        a.cross(b) * 2.0
    }

    fn angle(&self) -> f64 {
        let s = (self.q[1] * self.q[1] + self.q[2] * self.q[2] + self.q[3] * self.q[3]).sqrt();
        s.atan2(self.q[0])
    }

    fn real_trace(&self) -> f64 {
        2.0 * self.q[0]
    }

    fn reproject(&self) -> Self {
        Self {
            q: self.q / self.q.norm(),
        }
    }

    fn unitarity_defect(&self) -> f64 {
        let m = self.to_matrix();
        (m.adjoint() * m - Matrix2::identity()).norm()
    }

    fn determinant(&self) -> f64 {
        self.to_matrix().determinant().re
    }

    fn matrix_inner(a: &AlgebraElement, b: &AlgebraElement) -> f64 {
        -0.5 * (Self::algebra_matrix(a) * Self::algebra_matrix(b)).trace().re
    }

    fn irrep_dim(l: usize) -> f64 {
        (l + 1) as f64
    }

    fn casimir(l: usize) -> f64 {
        (l * (l + 2)) as f64
    }

    fn character(l: usize, angle: f64) -> f64 {
        let n = (l + 1) as f64;
        let s = angle.sin();
        if s.abs() < 1e-9 {
            // limits at θ = 0 and θ = π
            if angle < 1.0 || l.is_multiple_of(2) {
                n
            } else {
                -n
            }
        } else {
            (n * angle).sin() / s
        }
    }

    fn haar_angle_density(angle: f64) -> f64 {
        2.0 / PI * angle.sin().powi(2)
    }

    fn log_heat_kernel(t: f64, angle: f64) -> f64 {
        Self::image_log_kernel(t, angle)
    }

    fn log_heat_slope(t: f64, angle: f64) -> f64 {
        let theta = angle.clamp(0.0, PI);
        if theta < 1e-9 || PI - theta < 1e-9 {
            return 0.0;
        }
        let terms = image_terms(t, theta);
        let m = -theta * theta / (2.0 * t);
        let (s, ds) = terms.fold((0.0, 0.0), |(s, ds), (y, e)| {
            let w = (e - m).exp();
            (s + y * w, ds + (1.0 - y * y / t) * w)
        });
        ds / s - theta.cos() / theta.sin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_multiplies_like_quaternions() {
        let k = |i| Su2::algebra_matrix(&AlgebraElement::basis(i));
        assert!((k(0) * k(1) - k(2)).norm() < 1e-15);
        assert!((k(0) * k(0) + Matrix2::identity()).norm() < 1e-15);
    }

    #[test]
    fn matrix_matches_quaternion_product() {
        let a = Su2::exp(&AlgebraElement::new(0.3, -0.2, 0.9));
        let b = Su2::exp(&AlgebraElement::new(-1.1, 0.4, 0.2));
        let lhs = a.compose(&b).to_matrix();
        let rhs = a.to_matrix() * b.to_matrix();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn bracket_matches_commutator() {
        let a = AlgebraElement::new(0.3, -0.2, 0.9);
        let b = AlgebraElement::new(-1.1, 0.4, 0.2);
        let c = Su2::bracket(&a, &b);
        let (ma, mb) = (Su2::algebra_matrix(&a), Su2::algebra_matrix(&b));
        assert!((ma * mb - mb * ma - Su2::algebra_matrix(&c)).norm() < 1e-14);
    }

    #[test]
    fn slope_matches_finite_difference() {
        for &(t, th) in &[(0.01, 0.1), (0.3, 1.2), (1.0, 2.5), (0.002, 0.05)] {
            let h = 1e-6;
            let fd = (Su2::log_heat_kernel(t, th + h) - Su2::log_heat_kernel(t, th - h)) / (2.0 * h);
            let an = Su2::log_heat_slope(t, th);
            assert!((fd - an).abs() < 1e-5 * (1.0 + an.abs()), "t={t} θ={th}: {fd} vs {an}");
        }
    }
}
