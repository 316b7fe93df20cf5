//! Nualart–Pardoux regularity of random kernels: Monte Carlo `L^p` Hölder and
//! sup constants, the Hölder exponent of kernel increments, and the comparison
//! of two connections on `P(G)`.

use super::canonical::C_G;
use super::kernel::{HalfLimit, KernelForm, Slot};
use crate::bundle::{BundleLoop, BundleSpec, InfinityConnection};
use crate::lie_group::{AlgebraElement, LieGroup, Su2};
use crate::manifold::{Sphere, Vector};
use crate::mc::{regression_slope, stream};
use crate::stochastic::AlgebraFieldK;
use crate::{Error, Result};
use rand::Rng as _;
use rayon::prelude::*;

/// Estimated constants for one ordering component `k` and one tensor component.
#[derive(Clone, Debug, PartialEq)]
pub struct NpConstants {
    pub form: String,
    pub p: u32,
    /// Ordering of the arguments (index into the permutations of the slots).
    pub k: usize,
    /// Basis tensor index of the slot vectors, base 3.
    pub component: usize,
    /// Hölder constant: `max ‖σ(x) − σ(x′)‖_p / Σ √|x_i − x′_i|`.
    pub c: f64,
    /// Sup constant: `max ‖σ(x)‖_p`.
    pub c_prime: f64,
    pub samples: usize,
    pub pairs: usize,
}

impl NpConstants {
    pub const CSV_HEADER: &'static str = "form,p,k,component,C,C_prime,samples,pairs";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:e},{:e},{},{}",
            self.form, self.p, self.k, self.component, self.c, self.c_prime, self.samples, self.pairs
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NpOptions {
    /// Even moment order.
    pub p: u32,
    pub pairs: usize,
    pub seed: u64,
}

impl Default for NpOptions {
    fn default() -> Self {
        Self {
            p: 2,
            pairs: 2000,
            seed: 0,
        }
    }
}

fn lp_norm(xs: impl Iterator<Item = f64>, p: u32) -> f64 {
    let (mut sum, mut n) = (0.0, 0usize);
    for x in xs {
        sum += x.abs().powi(p as i32);
        n += 1;
    }
    (sum / n as f64).powf(1.0 / p as f64)
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(d - 1) {
        for i in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(i, d - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

fn basis_slots(component: usize, d: usize) -> Vec<Slot> {
    let mut c = component;
    (0..d)
        .map(|_| {
            let mut v = Slot::zeros();
            v[c % 3] = 1.0;
            c /= 3;
            v
        })
        .collect()
}

/// Argument pairs inside the ordering component `perm`: a uniform point and a
/// perturbation at a log-uniform scale in `[10⁻³, 1]`.
fn sample_pairs(perm: &[usize], pairs: usize, seed: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let d = perm.len();
    let mut rng = stream(seed, perm.iter().fold(0, |a, &i| a * 8 + i as u64 + 1));
    let in_component = |x: &[f64]| {
        x.iter().all(|&v| v > 0.0 && v < 1.0) && perm.windows(2).all(|w| x[w[0]] < x[w[1]])
    };
    let mut out = Vec::with_capacity(pairs);
    while out.len() < pairs {
        let mut u: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
        u.sort_by(f64::total_cmp);
        let mut x = vec![0.0; d];
        for (rank, &slot) in perm.iter().enumerate() {
            x[slot] = u[rank];
        }
        let scale = 10f64.powf(-3.0 * rng.random::<f64>());
        let y: Vec<f64> = x.iter().map(|v| v + scale * (2.0 * rng.random::<f64>() - 1.0)).collect();
        if in_component(&x) && in_component(&y) && x != y {
            out.push((x, y));
        }
    }
    out
}

/// NP constants of the random kernel whose realizations are `kernels`, for every
/// ordering component and tensor component. Pair sets are nested in `pairs`.
pub fn np_estimate(name: &str, kernels: &[KernelForm], opts: &NpOptions) -> Result<Vec<NpConstants>> {
    if opts.p < 2 || !opts.p.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("moment order {} must be even and at least 2", opts.p)));
    }
    let first = kernels.first().ok_or_else(|| Error::InvalidArgument("no kernel samples".into()))?;
    let (nh, nv) = (first.horizontal, first.vertical);
    if kernels.iter().any(|k| k.horizontal != nh || k.vertical != nv) {
        return Err(Error::InvalidArgument("kernel samples of different degrees".into()));
    }
    let d = nh + nv;
    let mut out = Vec::new();
    for (k, perm) in permutations(d).iter().enumerate() {
        let pairs = sample_pairs(perm, opts.pairs, opts.seed);
        for component in 0..3usize.pow(d as u32) {
            let slots = basis_slots(component, d);
            let (hs, vs) = slots.split_at(nh);
            let value = |kern: &KernelForm, x: &[f64]| -> Result<f64> {
                let (s, t) = x.split_at(nh);
                kern.kernel_at(s, t, hs, vs, HalfLimit::Ascending)
            };
            let per_pair = pairs
                .par_iter()
                .map(|(x, y)| -> Result<(f64, f64)> {
                    let vx = kernels.iter().map(|kern| value(kern, x)).collect::<Result<Vec<_>>>()?;
                    let vy = kernels.iter().map(|kern| value(kern, y)).collect::<Result<Vec<_>>>()?;
                    let diff = lp_norm(vx.iter().zip(&vy).map(|(a, b)| a - b), opts.p);
                    let gap: f64 = x.iter().zip(y).map(|(a, b)| (a - b).abs().sqrt()).sum();
                    Ok((diff / gap, lp_norm(vx.into_iter(), opts.p).max(lp_norm(vy.into_iter(), opts.p))))
                })
                .collect::<Result<Vec<_>>>()?;
            let (c, c_prime) = per_pair.iter().fold((0.0f64, 0.0f64), |(c, cp), &(a, b)| (c.max(a), cp.max(b)));
            out.push(NpConstants {
                form: name.to_string(),
                p: opts.p,
                k,
                component,
                c,
                c_prime,
                samples: kernels.len(),
                pairs: opts.pairs,
            });
        }
    }
    Ok(out)
}

/// Exponent of `‖σ(r + δ) − σ(r)‖_{L²} ∝ δ^β` for a 1-slot kernel sampled at the
/// nodes of a grid with `grid` cells. Lags are in cells; anchors are spread
/// over the nodes. The increment norm sums all tensor components.
/// Returns `(β, norms)`.
pub fn holder_slope(kernels: &[KernelForm], grid: usize, lags: &[usize], anchors: usize) -> Result<(f64, Vec<f64>)> {
    if kernels.iter().any(|k| k.degree() != 1) {
        return Err(Error::InvalidArgument("Hölder slope needs one-slot kernels".into()));
    }
    if lags.iter().any(|&l| l == 0 || l >= grid) {
        return Err(Error::InvalidArgument(format!("lags must lie in 1..{grid}")));
    }
    let eval = |kern: &KernelForm, r: f64, e: Slot| -> Result<f64> {
        if kern.horizontal == 1 {
            kern.kernel_at(&[r], &[], &[e], &[], HalfLimit::Ascending)
        } else {
            kern.kernel_at(&[], &[r], &[], &[e], HalfLimit::Ascending)
        }
    };
    let node = |j: usize| j as f64 / grid as f64;
    let norms = lags
        .iter()
        .map(|&lag| -> Result<f64> {
            let span = grid - lag;
            let mut total = 0.0;
            for a in 0..anchors {
                let j = a * span / anchors;
                for kern in kernels {
                    for i in 0..3 {
                        let e = Slot::ith(i, 1.0);
                        total += (eval(kern, node(j + lag), e)? - eval(kern, node(j), e)?).powi(2);
                    }
                }
            }
            Ok((total / (anchors * kernels.len()) as f64).sqrt())
        })
        .collect::<Result<Vec<_>>>()?;
    let x: Vec<f64> = lags.iter().map(|&l| (l as f64 / grid as f64).ln()).collect();
    let y: Vec<f64> = norms.iter().map(|n| n.ln()).collect();
    Ok((regression_slope(&x, &y), norms))
}

/// Ratio of estimates under two connections, per (p, k, component).
#[derive(Clone, Debug, PartialEq)]
pub struct IndependenceRatio {
    pub p: u32,
    pub k: usize,
    pub component: usize,
    pub c_ratio: f64,
    pub c_prime_ratio: f64,
}

/// `C_a / C_b` and `C′_a / C′_b` for estimates from [`np_estimate`] on the same
/// options; components where both constants vanish are reported as ratio 1.
pub fn connection_independence_check(a: &[NpConstants], b: &[NpConstants]) -> Result<Vec<IndependenceRatio>> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument("estimate sets differ in size".into()));
    }
    let ratio = |x: f64, y: f64| if x == 0.0 && y == 0.0 { 1.0 } else { x / y };
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            if (x.p, x.k, x.component) != (y.p, y.k, y.component) {
                return Err(Error::InvalidArgument("estimate sets are not aligned".into()));
            }
            Ok(IndependenceRatio {
                p: x.p,
                k: x.k,
                component: x.component,
                c_ratio: ratio(x.c, y.c),
                c_prime_ratio: ratio(x.c_prime, y.c_prime),
            })
        })
        .collect()
}

/// Orthonormal frame of `T_x S^{A−1}` used for slot coordinates.
pub fn tangent_frame<const A: usize>(x: &Vector<A>) -> Vec<Vector<A>> {
    let mut frame: Vec<Vector<A>> = Vec::new();
    for i in 0..A {
        let mut v = Sphere::<A>::project(x, &Vector::<A>::from_fn(|j, _| if j == i { 1.0 } else { 0.0 }));
        for f in &frame {
            v -= f * f.dot(&v);
        }
        if v.norm() > 1e-8 {
            frame.push(v.normalize());
        }
    }
    frame
}

/// Slot coordinates of `H′` at the cell midpoints.
pub fn horizontal_slots<const A: usize>(values: &[Vector<A>], x: &Vector<A>) -> Vec<Slot> {
    let frame = tangent_frame(x);
    let n = (values.len() - 1) as f64;
    values
        .windows(2)
        .map(|w| {
            let d = (w[1] - w[0]) * n;
            Slot::from_fn(|i, _| frame.get(i).map_or(0.0, |f| f.dot(&d)))
        })
        .collect()
}

/// Piecewise-linear kernel through values `w_j` at the grid nodes `j / n`.
fn node_kernel(name: &str, w: Vec<Slot>) -> KernelForm {
    let n = w.len() - 1;
    KernelForm::new(name, 1, 0, move |s, _, h, _| {
        let x = (s[0] * n as f64).clamp(0.0, n as f64);
        let j = (x.floor() as usize).min(n - 1);
        let f = x - j as f64;
        (w[j] * (1.0 - f) + w[j + 1] * f).dot(&h[0])
    })
}

/// Kernel of the battery 1-form `X^H(H) ↦ (f*)*c(X^H(H), X^V(K₀))` on one loop.
///
/// With `ξ = −T_1⁻¹δT_1` and the lift `φ(s)ξ`, integrating by parts gives
/// `⟨ξ, Z⟩` with `Z = 2c_G ∫ φ Ad_g K₀′ ds`, whose kernel in `r` is
/// `−(∫_r^1 T⁻¹F(∘dγ_u, τ_u ·)T)ᵀ Z`, a Stratonovich integral in `r`, stored at
/// the grid nodes. Values are centred so that the kernel has mean zero.
pub fn contraction_kernel<const A: usize>(
    lp: &BundleLoop<A>,
    spec: &BundleSpec<A>,
    conn: InfinityConnection,
    k0: &AlgebraFieldK,
) -> Result<KernelForm> {
    let n = lp.steps();
    if k0.steps() != n {
        return Err(Error::InvalidArgument(format!("field has {} steps, loop has {n}", k0.steps())));
    }
    let g = &lp.fiber.points;
    let mut z = AlgebraElement::zero();
    for k in 0..n {
        let s = (k as f64 + 0.5) / n as f64;
        let dk = k0.values[k + 1] - k0.values[k];
        z += (g[k].adjoint(&dk) + g[k + 1].adjoint(&dk)) * (0.5 * conn.phi(s));
    }
    let z = z * (2.0 * C_G);

    let frame = tangent_frame(&spec.base_point());
    let connection = spec.connection.as_ref();
    let path = &lp.base;
    // a_k = α_kᵀ Z in slot coordinates.
    let a: Vec<Slot> = (0..n)
        .map(|k| {
            let (p, q) = (path.points[k], path.points[k + 1]);
            let m = Sphere::<A>::normalize(&(p + q));
            let dg = Sphere::<A>::project(&m, &(q - p));
            let half = Su2::exp(&(connection.eval(&m, &(q - p)) * -0.5)).compose(&lp.transport[k]);
            Slot::from_fn(|i, _| {
                frame.get(i).map_or(0.0, |e| {
                    let xm = Sphere::<A>::project(&m, &((path.transport[k] * e + path.transport[k + 1] * e) * 0.5));
                    half.inverse().adjoint(&connection.curvature(&m, &dg, &xm)).dot(&z)
                })
            })
        })
        .collect();
    let mut w = vec![Slot::zeros(); n + 1];
    for j in (0..n).rev() {
        w[j] = w[j + 1] - a[j];
    }
    let mean = (w.iter().sum::<Slot>() - (w[0] + w[n]) * 0.5) / n as f64;
    w.iter_mut().for_each(|v| *v -= mean);
    Ok(node_kernel("contraction", w))
}
