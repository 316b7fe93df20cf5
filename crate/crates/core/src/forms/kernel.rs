//! Forms represented by kernels against the derivatives of their arguments:
//!
//! `σ(X^H(H_1), …, X^V(K_m)) = ∫…∫ σ(s_1…s_n; t_1…t_m)[H'_1(s_1), …, K'_m(t_m)] ds dt`.
//!
//! Slot vectors are 3-vectors: coordinates of `T_x` in a fixed frame for horizontal
//! slots, `su(2)` coordinates for vertical ones. Kernels are multilinear in them.

use crate::{Error, Result};
use nalgebra::Vector3;
use std::fmt;
use std::sync::Arc;

pub type Slot = Vector3<f64>;

type KernelFn = dyn Fn(&[f64], &[f64], &[Slot], &[Slot]) -> f64 + Send + Sync;

/// Which side of a diagonal `s_i = s_j` a kernel is evaluated from.
///
/// Kernels are only defined on the open components where all arguments of a block
/// are distinct; at a tie the caller picks the component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfLimit {
    /// Tied arguments are ordered by slot index: `s_i < s_j` for `i < j`.
    Ascending,
    /// Tied arguments are ordered against slot index.
    Descending,
}

/// Offset used to resolve ties; far below any quadrature spacing in use.
const TIE: f64 = 1e-12;

fn has_tie(x: &[f64]) -> bool {
    (0..x.len()).any(|i| (i + 1..x.len()).any(|j| x[i] == x[j]))
}

fn resolve(x: &[f64], limit: HalfLimit) -> Vec<f64> {
    let sign = match limit {
        HalfLimit::Ascending => 1.0,
        HalfLimit::Descending => -1.0,
    };
    x.iter().enumerate().map(|(i, v)| v + sign * TIE * i as f64).collect()
}

#[derive(Clone)]
pub struct KernelForm {
    pub name: String,
    /// Number of horizontal slots.
    pub horizontal: usize,
    /// Number of vertical slots.
    pub vertical: usize,
    kernel: Arc<KernelFn>,
}

impl fmt::Debug for KernelForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KernelForm({}, {}, {})", self.name, self.horizontal, self.vertical)
    }
}

impl KernelForm {
    pub fn new(
        name: impl Into<String>,
        horizontal: usize,
        vertical: usize,
        kernel: impl Fn(&[f64], &[f64], &[Slot], &[Slot]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            horizontal,
            vertical,
            kernel: Arc::new(kernel),
        }
    }

    pub fn zero(horizontal: usize, vertical: usize) -> Self {
        Self::new("0", horizontal, vertical, |_, _, _, _| 0.0)
    }

    /// The degree-0 form with constant value `c`.
    pub fn constant(c: f64) -> Self {
        Self::new(format!("{c}"), 0, 0, move |_, _, _, _| c)
    }

    pub fn degree(&self) -> usize {
        self.horizontal + self.vertical
    }

    /// `c σ`.
    pub fn scaled(&self, c: f64) -> Self {
        let k = self.kernel.clone();
        Self::new(format!("{c}·{}", self.name), self.horizontal, self.vertical, move |s, t, h, v| {
            c * k(s, t, h, v)
        })
    }

    /// Kernel value at `(s; t)` against slot vectors, ties resolved by `limit`.
    pub fn kernel_at(&self, s: &[f64], t: &[f64], h: &[Slot], v: &[Slot], limit: HalfLimit) -> Result<f64> {
        self.check(s.len(), t.len())?;
        self.check(h.len(), v.len())?;
        Ok(self.raw(s, t, h, v, limit))
    }

    fn raw(&self, s: &[f64], t: &[f64], h: &[Slot], v: &[Slot], limit: HalfLimit) -> f64 {
        match (has_tie(s), has_tie(t)) {
            (false, false) => (self.kernel)(s, t, h, v),
            (ts, tt) => {
                let s = if ts { resolve(s, limit) } else { s.to_vec() };
                let t = if tt { resolve(t, limit) } else { t.to_vec() };
                (self.kernel)(&s, &t, h, v)
            }
        }
    }

    /// Kernel value with ties averaged over both half-limits.
    fn symmetric(&self, s: &[f64], t: &[f64], h: &[Slot], v: &[Slot]) -> f64 {
        if has_tie(s) || has_tie(t) {
            0.5 * (self.raw(s, t, h, v, HalfLimit::Ascending) + self.raw(s, t, h, v, HalfLimit::Descending))
        } else {
            (self.kernel)(s, t, h, v)
        }
    }

    fn check(&self, got_h: usize, got_v: usize) -> Result<()> {
        if got_h != self.horizontal || got_v != self.vertical {
            return Err(Error::DegreeMismatch {
                h: self.horizontal,
                v: self.vertical,
                got_h,
                got_v,
            });
        }
        Ok(())
    }

    /// Tensor norm of the kernel at `(s; t)`: Euclidean norm over all basis slot vectors.
    pub fn kernel_norm(&self, s: &[f64], t: &[f64], limit: HalfLimit) -> f64 {
        let d = self.degree();
        let mut idx = vec![0usize; d];
        let mut total = 0.0;
        loop {
            let slot = |i: usize| Slot::ith(idx[i], 1.0);
            let h: Vec<Slot> = (0..self.horizontal).map(slot).collect();
            let v: Vec<Slot> = (self.horizontal..d).map(slot).collect();
            total += self.raw(s, t, &h, &v, limit).powi(2);
            // odometer over {0,1,2}^d
            let mut i = 0;
            while i < d {
                idx[i] += 1;
                if idx[i] < 3 {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
        total.sqrt()
    }
}

/// Derivative samples of a field argument at the midpoints of a uniform grid on `[0, 1]`.
pub type SlotField = [Slot];

/// `∫…∫ σ(s; t)[H'…; K'…]` by the midpoint rule on the grid of the field samples.
///
/// Ties on the diagonals are averaged over both half-limits.
pub fn evaluate(form: &KernelForm, h: &[&SlotField], v: &[&SlotField]) -> Result<f64> {
    form.check(h.len(), v.len())?;
    let d = form.degree();
    if d == 0 {
        return Ok((form.kernel)(&[], &[], &[], &[]));
    }
    let n = h.iter().chain(v).map(|f| f.len()).next().unwrap();
    if h.iter().chain(v).any(|f| f.len() != n) {
        return Err(Error::InvalidArgument("field samples on different grids".into()));
    }
    let dt = 1.0 / n as f64;
    let mid = |i: usize| (i as f64 + 0.5) * dt;
    let mut idx = vec![0usize; d];
    let mut sum = 0.0;
    let (nh, _) = (form.horizontal, form.vertical);
    let mut s = vec![0.0; nh];
    let mut t = vec![0.0; d - nh];
    let mut hv = vec![Slot::zeros(); nh];
    let mut vv = vec![Slot::zeros(); d - nh];
    loop {
        for j in 0..d {
            if j < nh {
                s[j] = mid(idx[j]);
                hv[j] = h[j][idx[j]];
            } else {
                t[j - nh] = mid(idx[j]);
                vv[j - nh] = v[j - nh][idx[j]];
            }
        }
        sum += form.symmetric(&s, &t, &hv, &vv);
        let mut i = 0;
        while i < d {
            idx[i] += 1;
            if idx[i] < n {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == d {
            break;
        }
    }
    Ok(sum * dt.powi(d as i32))
}

const GAUSS5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// `∫₀¹ σ(…)ds` over one slot (`slot < horizontal` picks an `s`, otherwise a `t`),
/// with the remaining arguments fixed. Composite Gauss–Legendre, split at the
/// diagonals so that the jumps between components are integrated exactly.
pub fn slot_mean(form: &KernelForm, slot: usize, s: &[f64], t: &[f64], h: &[Slot], v: &[Slot]) -> Result<f64> {
    form.check(s.len(), t.len())?;
    let horizontal = slot < form.horizontal;
    let others = if horizontal { s } else { t };
    let j = if horizontal { slot } else { slot - form.horizontal };
    let mut cuts: Vec<f64> = others
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, &x)| x)
        .chain([0.0, 1.0])
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let (mut s, mut t) = (s.to_vec(), t.to_vec());
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let pieces = 64;
        let len = (w[1] - w[0]) / pieces as f64;
        for p in 0..pieces {
            let c = w[0] + (p as f64 + 0.5) * len;
            for &(x, wt) in &GAUSS5 {
                let u = c + 0.5 * len * x;
                if horizontal {
                    s[j] = u;
                } else {
                    t[j] = u;
                }
                total += 0.5 * len * wt * (form.kernel)(&s, &t, h, v);
            }
        }
    }
    Ok(total)
}

/// Subsets of size `k` of `0..n` in lexicographic order, with the sign of the
/// shuffle permutation `(A, Aᶜ)`.
pub(crate) fn shuffles(n: usize, k: usize) -> Vec<(Vec<usize>, Vec<usize>, f64)> {
    let mut out = Vec::new();
    let mut a: Vec<usize> = (0..k).collect();
    loop {
        let rest: Vec<usize> = (0..n).filter(|i| !a.contains(i)).collect();
        let inversions: usize = a.iter().enumerate().map(|(i, &x)| x - i).sum();
        out.push((a.clone(), rest, if inversions.is_multiple_of(2) { 1.0 } else { -1.0 }));
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if a[i] < n - k + i {
                a[i] += 1;
                for j in i + 1..k {
                    a[j] = a[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn pick<T: Copy>(x: &[T], idx: &[usize]) -> Vec<T> {
    idx.iter().map(|&i| x[i]).collect()
}

/// `σ ∧ σ'` with `(α ∧ β)(X…) = Σ_shuffles sgn · α(X_A) β(X_{Aᶜ})`.
///
/// Fields are ordered horizontal block first; the wedge of degrees `(n, m)` and
/// `(n', m')` has degree `(n + n', m + m')` and picks up `(−1)^{m n'}` from moving
/// the vertical block of `σ` past the horizontal block of `σ'`.
pub fn wedge(a: &KernelForm, b: &KernelForm) -> KernelForm {
    let (n, m) = (a.horizontal, a.vertical);
    let (n2, m2) = (b.horizontal, b.vertical);
    let hs = shuffles(n + n2, n);
    let vs = shuffles(m + m2, m);
    let block = if (m * n2) % 2 == 0 { 1.0 } else { -1.0 };
    let (ka, kb) = (a.kernel.clone(), b.kernel.clone());
    KernelForm::new(format!("{}∧{}", a.name, b.name), n + n2, m + m2, move |s, t, h, v| {
        let mut total = 0.0;
        for (ha, hb, sh) in &hs {
            for (va, vb, sv) in &vs {
                let x = ka(&pick(s, ha), &pick(t, va), &pick(h, ha), &pick(v, va));
                if x == 0.0 {
                    continue;
                }
                let y = kb(&pick(s, hb), &pick(t, vb), &pick(h, hb), &pick(v, vb));
                total += block * sh * sv * x * y;
            }
        }
        total
    })
}

/// `π*σ`: the same kernel, seen on the total space. Vertical fields are annihilated
/// because the form has no vertical slots.
pub fn pullback_base(form: &KernelForm) -> KernelForm {
    assert_eq!(form.vertical, 0, "a base form has horizontal slots only");
    let mut f = form.clone();
    f.name = format!("π*{}", form.name);
    f
}

/// Evaluates `π*σ` on a mixed list of fields: zero as soon as one is vertical.
pub fn evaluate_pullback_base(form: &KernelForm, h: &[&SlotField], v: &[&SlotField]) -> Result<f64> {
    if h.len() + v.len() != form.horizontal {
        return Err(Error::DegreeMismatch {
            h: form.horizontal,
            v: 0,
            got_h: h.len(),
            got_v: v.len(),
        });
    }
    if !v.is_empty() {
        return Ok(0.0);
    }
    evaluate(form, h, &[])
}
