//! Smooth fixtures shared by the form tests.

use crate::bundle::{bundle_transport, BundleLoop, BundleSpec};
use crate::lie_group::{AlgebraElement, GroupPath, LieGroup, Su2};
use crate::manifold::{ManifoldPath, Vector, VectorFieldH, S3};
use crate::stochastic::AlgebraFieldK;
use nalgebra::Vector4;
use std::f64::consts::PI;

pub fn assemble(base: Vec<Vector<4>>, fiber: Vec<Su2>, spec: &BundleSpec<4>) -> BundleLoop<4> {
    let base = ManifoldPath::from_points(base).unwrap();
    let transport = bundle_transport(&base, spec);
    BundleLoop {
        holonomy: *transport.last().unwrap(),
        transport,
        fiber: GroupPath::from_points(fiber).unwrap(),
        base,
        rejections: 0,
    }
}

pub fn smooth_loop(n: usize, spec: &BundleSpec<4>) -> BundleLoop<4> {
    let base: Vec<Vector<4>> = (0..=n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            S3::normalize(&Vector4::new(1.0, 0.7 * t.sin(), 0.6 * t.sin().powi(2), 0.5 * (2.0 * t).sin()))
        })
        .collect();
    let transport = bundle_transport(&ManifoldPath::from_points(base.clone()).unwrap(), spec);
    let l = transport.last().unwrap().inverse().log().unwrap();
    let fiber = (0..=n)
        .map(|k| {
            let s = k as f64 / n as f64;
            Su2::exp(&(l * s)).compose(&Su2::exp(&(AlgebraElement::new(0.3, -0.2, 0.4) * (PI * s).sin())))
        })
        .collect();
    assemble(base, fiber, spec)
}

pub fn h(n: usize, which: usize) -> VectorFieldH<4> {
    VectorFieldH::from_fn(&S3::base_point(), n, move |s| match which {
        0 => Vector4::new(0.0, (PI * s).sin(), 0.5 * (2.0 * PI * s).sin(), 0.0),
        1 => Vector4::new(0.0, 0.0, (PI * s).sin().powi(2), 2.0 * s * (1.0 - s)),
        _ => Vector4::new(0.0, -(3.0 * PI * s).sin(), 0.0, (PI * s).sin()),
    })
    .unwrap()
}

pub fn k(n: usize, which: usize) -> AlgebraFieldK {
    AlgebraFieldK::from_fn(n, move |s| match which {
        0 => AlgebraElement::new(1.0, 0.0, 0.5) * (PI * s).sin(),
        1 => AlgebraElement::new(0.0, 1.0, -1.0) * (2.0 * PI * s).sin(),
        _ => AlgebraElement::new(0.3, -0.4, 1.0) * (s * (1.0 - s) * 4.0),
    })
    .unwrap()
}
