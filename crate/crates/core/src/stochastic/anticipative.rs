//! Anticipative Stratonovich integrals by Riemann sums with interval averages:
//! `Σ_i (1/|I_i|) ∫_{I_i} u_v dv · ΔB_i` on a coarse partition of a fine grid.

use super::Pairing;
use crate::lie_group::{AlgebraElement, GroupPath, LieGroup};
use crate::{Error, Result};

/// `I(s, t)` for an integrand sampled on a fine grid (`u_fine.len() = M + 1`)
/// against fine increments (`db_fine.len() = M`), using `coarse` intervals on
/// `[0, 1]`; `s` and `t` are snapped to the coarse grid.
///
/// The integrand may depend on the whole path, e.g. `u_v = B_{s̃} + B_v`.
pub fn anticipative_stratonovich<T: Pairing>(
    u_fine: &[T],
    db_fine: &[T],
    coarse: usize,
    s: f64,
    t: f64,
) -> Result<f64> {
    let m = db_fine.len();
    if u_fine.len() != m + 1 {
        return Err(Error::InvalidArgument(format!(
            "integrand has {} values for {m} increments",
            u_fine.len()
        )));
    }
    if coarse == 0 || !m.is_multiple_of(coarse) {
        return Err(Error::InvalidArgument(format!(
            "coarse grid {coarse} does not divide fine grid {m}"
        )));
    }
    if !(0.0..=1.0).contains(&s) || !(s..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!("bad interval [{s}, {t}]")));
    }
    let r = m / coarse;
    let (i0, i1) = ((s * coarse as f64).round() as usize, (t * coarse as f64).round() as usize);
    let mut acc = 0.0;
    for i in i0..i1 {
        let lo = i * r;
        let mut avg = (u_fine[lo] + u_fine[lo + r]) * 0.5;
        let mut db = db_fine[lo];
        for j in lo + 1..lo + r {
            avg = avg + u_fine[j];
            db = db + db_fine[j];
        }
        acc += (avg * (1.0 / r as f64)).pair(&db);
    }
    Ok(acc)
}

/// `∫⟨g_v u_v, dg_v⟩` with `dg = dB g`: equals the scalar scheme for `Ad_{g_v} u_v`
/// against the driving increments.
pub fn anticipative_stratonovich_group<G: LieGroup>(
    u_fine: &[AlgebraElement],
    path: &GroupPath<G>,
    coarse: usize,
    s: f64,
    t: f64,
) -> Result<f64> {
    if u_fine.len() != path.points.len() {
        return Err(Error::InvalidArgument(format!(
            "integrand has {} values, path has {} points",
            u_fine.len(),
            path.points.len()
        )));
    }
    let adjusted: Vec<AlgebraElement> = path
        .points
        .iter()
        .zip(u_fine)
        .map(|(g, u)| g.adjoint(u))
        .collect();
    anticipative_stratonovich(&adjusted, &path.increments, coarse, s, t)
}
