use alloc::vec::Vec;

use super::{CellContext, SearchData};

/// Candidate thresholds along `dim`: midpoints between consecutive distinct
/// validation values in the cell, thinned to at most `cap` by quantile.
pub fn candidate_cuts(data: SearchData<'_>, ctx: &CellContext, dim: usize, cap: usize) -> Vec<f64> {
    cuts_for(data, &ctx.val_idx, dim, cap)
}

pub(super) fn cuts_for(data: SearchData<'_>, val_idx: &[usize], dim: usize, cap: usize) -> Vec<f64> {
    thin_midpoints(val_idx.iter().map(|&i| data.val[i].x[dim]).collect(), cap)
}

/// Midpoints of the distinct sorted `values`; when there are `m > cap` of
/// them, keeps those at positions `floor((i + 0.5) * m / cap)`.
pub fn thin_midpoints(mut values: Vec<f64>, cap: usize) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    values.dedup();
    let mids: Vec<f64> = values.windows(2).map(|w| midpoint(w[0], w[1])).collect();
    let m = mids.len();
    if m <= cap {
        return mids;
    }
    (0..cap).map(|i| mids[((2 * i + 1) * m) / (2 * cap)]).collect()
}

/// A threshold `t` with `a < t <= b`, so `a` goes left and `b` right.
fn midpoint(a: f64, b: f64) -> f64 {
    let t = 0.5 * a + 0.5 * b;
    if t > a && t <= b {
        t
    } else {
        b
    }
}
