use super::{AlgebraElement, LieGroup, Su2};
use crate::{Error, Result};
use nalgebra::{Matrix3, Vector3};
use std::f64::consts::PI;

/// Rotation matrix; the algebra basis is `J_j v = e_j × v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct So3 {
    m: Matrix3<f64>,
}

fn hat(a: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -a[2], a[1], a[2], 0.0, -a[0], -a[1], a[0], 0.0)
}

impl So3 {
    pub fn from_matrix(m: Matrix3<f64>) -> Self {
        Self { m }.reproject()
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn algebra_matrix(a: &AlgebraElement) -> Matrix3<f64> {
        hat(&a.0)
    }
}

impl LieGroup for So3 {
    const NAME: &'static str = "SO(3)";

    fn identity() -> Self {
        Self {
            m: Matrix3::identity(),
        }
    }

    fn compose(&self, other: &Self) -> Self {
        Self { m: self.m * other.m }
    }

    fn inverse(&self) -> Self {
        Self {
            m: self.m.transpose(),
        }
    }

    fn exp(a: &AlgebraElement) -> Self {
        let theta = a.norm();
        let k = hat(&a.0);
        let (s, c) = if theta < 1e-6 {
            (1.0 - theta * theta / 6.0, 0.5 - theta * theta / 24.0)
        } else {
            (theta.sin() / theta, (1.0 - theta.cos()) / (theta * theta))
        };
        Self {
            m: Matrix3::identity() + k * s + k * k * c,
        }
    }

    fn log_with_margin(&self, margin: f64) -> Result<AlgebraElement> {
        let tr = self.m.trace();
        let distance = tr + 1.0;
        if distance < margin || (margin <= 0.0 && distance <= 0.0) {
            return Err(Error::CutLocus { margin, distance });
        }
        let cos = ((tr - 1.0) / 2.0).clamp(-1.0, 1.0);
        let theta = cos.acos();
        let skew = (self.m - self.m.transpose()) * 0.5;
        let axis_sin = Vector3::new(skew[(2, 1)], skew[(0, 2)], skew[(1, 0)]);
        if theta < 1e-6 {
            return Ok(AlgebraElement(axis_sin * (1.0 + theta * theta / 6.0)));
        }
        if theta < PI - 1e-4 {
            return Ok(AlgebraElement(axis_sin * (theta / theta.sin())));
        }
        // Near π: (R + Rᵀ)/2 − cos θ I = (1 − cos θ) n nᵀ.
        let b = (self.m + self.m.transpose()) * 0.5 - Matrix3::identity() * cos;
        let i = (0..3)
            .max_by(|&i, &j| b[(i, i)].partial_cmp(&b[(j, j)]).unwrap())
            .unwrap();
        let mut n = b.column(i).into_owned();
        n /= n.norm();
        if n.dot(&axis_sin) < 0.0 {
            n = -n;
        }
        Ok(AlgebraElement(n * theta))
    }

    fn adjoint(&self, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(self.m * a.0)
    }

    fn bracket(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        a.cross(b)
    }

    fn angle(&self) -> f64 {
        ((self.m.trace() - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
    }

    fn real_trace(&self) -> f64 {
        self.m.trace()
    }

    fn reproject(&self) -> Self {
        // Gram–Schmidt on the columns keeps det = +1 for near-rotations.
        let c0 = self.m.column(0).normalize();
        let c1 = (self.m.column(1) - c0 * c0.dot(&self.m.column(1))).normalize();
        let c2 = c0.cross(&c1);
        Self {
            m: Matrix3::from_columns(&[c0, c1, c2]),
        }
    }

    fn unitarity_defect(&self) -> f64 {
        (self.m.transpose() * self.m - Matrix3::identity()).norm()
    }

    fn determinant(&self) -> f64 {
        self.m.determinant()
    }

    fn matrix_inner(a: &AlgebraElement, b: &AlgebraElement) -> f64 {
        -0.5 * (hat(&a.0) * hat(&b.0)).trace()
    }

    fn irrep_dim(l: usize) -> f64 {
        (2 * l + 1) as f64
    }

    fn casimir(l: usize) -> f64 {
        (l * (l + 1)) as f64
    }

    fn character(l: usize, angle: f64) -> f64 {
        let n = (2 * l + 1) as f64;
        let s = (angle / 2.0).sin();
        if s.abs() < 1e-9 {
            n
        } else {
            (n * angle / 2.0).sin() / s
        }
    }

    fn haar_angle_density(angle: f64) -> f64 {
        (1.0 - angle.cos()) / PI
    }

    /// Pushed forward from SU(2): the double cover halves angles and, with the
    /// normalizations above, runs at a quarter of the time.
    fn log_heat_kernel(t: f64, angle: f64) -> f64 {
        let a = Su2::log_heat_kernel(t / 4.0, angle / 2.0);
        let b = Su2::log_heat_kernel(t / 4.0, PI - angle / 2.0);
        let m = a.max(b);
        m + (0.5 * ((a - m).exp() + (b - m).exp())).ln()
    }
}
