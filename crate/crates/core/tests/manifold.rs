use loopspace_core::manifold::{
    s2_heat_kernel, sample_brownian_bridge_manifold, sample_brownian_motion_manifold, Vector, S2, S3,
};
use loopspace_core::mc::{mean_se, par_samples};
use nalgebra::{Vector3, Vector4};
use proptest::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

fn z_bound() -> f64 {
    Normal::standard().inverse_cdf(1.0 - 0.5e-6)
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let inner: f64 = (1..panels).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    h / 3.0 * (f(a) + f(b) + inner)
}

proptest! {
    #[test]
    fn exp_and_log_are_inverse_on_s2(x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0, v in -1.0f64..1.0, w in -1.0f64..1.0) {
        let p = S2::normalize(&Vector3::new(x, y, 1.5 + z));
        let t = S2::project(&p, &Vector3::new(v, w, 0.3));
        prop_assume!(t.norm() < 3.0);
        let q = S2::geodesic_exp(&p, &t);
        prop_assert!((q.norm() - 1.0).abs() < 1e-12);
        prop_assert!((S2::log(&p, &q).unwrap() - t).norm() < 1e-9);
        prop_assert!((S2::distance(&p, &q) - t.norm()).abs() < 1e-9);
    }

    #[test]
    fn step_transport_is_an_isometry_on_s3(a in -1.0f64..1.0, b in -1.0f64..1.0, c in -1.0f64..1.0) {
        let p = S3::base_point();
        let q = S3::normalize(&(p + Vector4::new(0.0, a, b, c) * 0.5));
        let f = S3::step_transport(&p, &q).unwrap();
        let u = S3::project(&p, &Vector4::new(0.2, 1.0, -0.5, 0.3));
        let v = S3::project(&p, &Vector4::new(-0.1, 0.4, 0.8, -1.0));
        prop_assert!(((f * u).dot(&(f * v)) - u.dot(&v)).abs() < 1e-12);
        prop_assert!((f * u).dot(&q).abs() < 1e-12);
    }
}

#[test]
fn s2_heat_kernel_is_a_probability_density() {
    for tau in [0.05, 0.3, 1.0] {
        let mass = simpson(|th| 0.5 * s2_heat_kernel(tau, th) * th.sin(), 0.0, std::f64::consts::PI, 4000);
        assert!((mass - 1.0).abs() < 1e-8, "tau {tau}: mass {mass}");
    }
}

/// `E[⟨x_t, x_0⟩] = e^{-λ₁ t/2}` with first eigenvalue `λ₁ = n` on `S^n`.
fn spectral_decay<const A: usize>(start: Vector<A>, seed: u64) {
    let xs = par_samples(seed, 20_000, |_, rng| {
        let p = sample_brownian_motion_manifold(&start, 128, rng).unwrap();
        p.points[128].dot(&start)
    });
    let (m, se) = mean_se(&xs);
    let expect = (-((A - 1) as f64) / 2.0).exp();
    assert!(((m - expect) / se).abs() < z_bound(), "A = {A}: mean {m} vs {expect}, se {se}");
}

#[test]
fn sphere_brownian_motion_has_the_spectral_decay() {
    spectral_decay(S2::north(), 11);
    spectral_decay(S3::base_point(), 12);
}

#[test]
fn bridges_are_loops_with_isometric_transport() {
    let o = S2::north();
    for i in 0..20 {
        let p = sample_brownian_bridge_manifold(&o, &o, 64, &mut loopspace_core::mc::stream(13, i)).unwrap();
        assert!(p.is_loop(1e-9));
        let last = p.transport.last().unwrap();
        let tangent = Vector3::new(1.0, 0.0, 0.0);
        assert!(((last * tangent).norm() - 1.0).abs() < 1e-10);
    }
}
