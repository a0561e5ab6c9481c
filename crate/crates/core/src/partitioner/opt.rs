use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::cuts::cuts_for;
use super::{objective_of, select_unchecked, split_idx, CellContext, GlobalState, SearchData, Selection};
use crate::cube::Hypercube;
use crate::{par, FitConfig, Pool, Result};

/// One guillotine cut: rows with `x[dim] < threshold` go left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub dim: usize,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    Keep,
    /// `cuts` in the order they were applied; `children` replace the cell.
    Split {
        cuts: Vec<Cut>,
        children: Vec<CellContext>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptOutcome {
    pub decision: Decision,
    /// Refinements that satisfied the size minima and were scored.
    pub candidates: usize,
    /// Global objective with the cell kept whole.
    pub before: f64,
    /// Global objective after the decision.
    pub after: f64,
}

struct Sub {
    cell: Hypercube,
    train_idx: Vec<usize>,
    val_idx: Vec<usize>,
}

impl Sub {
    fn split(&self, data: SearchData<'_>, cut: Cut) -> Result<(Sub, Sub)> {
        let (l_cell, r_cell) = self.cell.split(cut.dim, cut.threshold)?;
        let (lt, rt) = split_idx(data.train, &self.train_idx, cut.dim, cut.threshold);
        let (lv, rv) = split_idx(data.val, &self.val_idx, cut.dim, cut.threshold);
        Ok((Sub { cell: l_cell, train_idx: lt, val_idx: lv }, Sub { cell: r_cell, train_idx: rt, val_idx: rv }))
    }

    fn feasible(&self, config: &FitConfig) -> bool {
        self.train_idx.len() >= config.s_min && self.val_idx.len() >= config.v_min
    }

    fn divisible(&self, config: &FitConfig) -> bool {
        self.train_idx.len() >= 2 * config.s_min && self.val_idx.len() >= 2 * config.v_min
    }
}

struct Candidate {
    cuts: Vec<Cut>,
    parts: Vec<(Sub, Selection)>,
    objective: f64,
}

struct Search<'a> {
    data: SearchData<'a>,
    pool: &'a Pool,
    config: &'a FitConfig,
    seed: u64,
}

impl Search<'_> {
    fn cuts(&self, sub: &Sub) -> Vec<Cut> {
        (0..self.data.dim)
            .flat_map(|dim| {
                cuts_for(self.data, &sub.val_idx, dim, self.config.max_cuts_per_dim)
                    .into_iter()
                    .map(move |threshold| Cut { dim, threshold })
            })
            .collect()
    }

    fn select(&self, sub: &Sub) -> Result<Selection> {
        select_unchecked(self.data, &sub.train_idx, &sub.val_idx, self.pool, self.config.loss, self.seed)
    }

    /// Best split of `sub` into two feasible halves by loss sum, plus the
    /// number of halvings scored.
    fn best_halving(&self, sub: &Sub) -> Result<(usize, Option<Halving>)> {
        let mut scored = 0;
        let mut best: Option<Halving> = None;
        for cut in self.cuts(sub) {
            let (a, b) = sub.split(self.data, cut)?;
            if !(a.feasible(self.config) && b.feasible(self.config)) {
                continue;
            }
            scored += 1;
            let (sa, sb) = (self.select(&a)?, self.select(&b)?);
            let loss = sa.val_loss + sb.val_loss;
            if best.as_ref().is_none_or(|h| loss < h.loss) {
                best = Some(Halving { cut, parts: [(a, sa), (b, sb)], loss });
            }
        }
        Ok((scored, best))
    }

    /// Best refinement whose first cut is `cut`, and the number scored.
    fn refine_with(
        &self,
        root: &Sub,
        cut: Cut,
        max_parts: usize,
        objective: &Objective<'_>,
    ) -> Result<(usize, Option<Candidate>)> {
        let config = self.config;
        let (l, r) = root.split(self.data, cut)?;
        let sl = if l.feasible(config) { Some(self.select(&l)?) } else { None };
        let sr = if r.feasible(config) { Some(self.select(&r)?) } else { None };
        let mut scored = 0;
        let mut best: Option<(Variant, f64)> = None;
        let mut offer = |v: Variant, obj: f64| {
            if best.is_none_or(|(_, b)| obj < b) {
                best = Some((v, obj));
            }
        };

        if let (Some(a), Some(b)) = (&sl, &sr) {
            scored += 1;
            offer(Variant::Two, objective(a.val_loss + b.val_loss, 2)?);
        }
        let mut left = None;
        if max_parts >= 3 && sr.is_some() && l.divisible(config) {
            let (n, h) = self.best_halving(&l)?;
            scored += n;
            if let (Some(h), Some(s)) = (&h, &sr) {
                offer(Variant::Left, objective(h.loss + s.val_loss, 3)?);
            }
            left = h;
        }
        let mut right = None;
        if max_parts >= 3 && sl.is_some() && r.divisible(config) {
            let (n, h) = self.best_halving(&r)?;
            scored += n;
            if let (Some(h), Some(s)) = (&h, &sl) {
                offer(Variant::Right, objective(s.val_loss + h.loss, 3)?);
            }
            right = h;
        }

        let Some((variant, objective)) = best else { return Ok((scored, None)) };
        let candidate = match variant {
            Variant::Two => Candidate { cuts: vec![cut], parts: vec![(l, unwrap(sl)?), (r, unwrap(sr)?)], objective },
            Variant::Left => {
                let h = unwrap(left)?;
                let [a, b] = h.parts;
                Candidate { cuts: vec![cut, h.cut], parts: vec![a, b, (r, unwrap(sr)?)], objective }
            }
            Variant::Right => {
                let h = unwrap(right)?;
                let [a, b] = h.parts;
                Candidate { cuts: vec![cut, h.cut], parts: vec![(l, unwrap(sl)?), a, b], objective }
            }
        };
        Ok((scored, Some(candidate)))
    }
}

struct Halving {
    cut: Cut,
    parts: [(Sub, Selection); 2],
    loss: f64,
}

#[derive(Clone, Copy)]
enum Variant {
    Two,
    Left,
    Right,
}

type Objective<'a> = dyn Fn(f64, usize) -> Result<f64> + Sync + 'a;

fn unwrap<T>(v: Option<T>) -> Result<T> {
    v.ok_or_else(|| crate::Error::Invariant("refinement part missing".into()))
}

/// Searches guillotine refinements of `ctx` into at most `gamma` subcells
/// and returns the one minimizing the global penalized objective, or
/// [`Decision::Keep`] when none improves it by more than the tolerance.
///
/// Subcells below the size minima are discarded. Enumeration runs over the
/// first cut (dimension, then threshold), then over the 2-cell refinement,
/// a further cut of the left half and a further cut of the right half; the
/// first strict minimum wins, so the result does not depend on threading.
pub fn opt_partition(
    data: SearchData<'_>,
    ctx: &CellContext,
    state: GlobalState,
    pool: &Pool,
    config: &FitConfig,
    alpha: f64,
    seed: u64,
) -> Result<OptOutcome> {
    let m = pool.len();
    let before = state.objective(m, alpha)?;
    let keep = |candidates| OptOutcome { decision: Decision::Keep, candidates, before, after: before };
    let room = config.max_leaves.map_or(usize::MAX, |cap| cap.saturating_sub(state.leaves));
    let max_parts = config.gamma.min(room.saturating_add(1));
    let root = Sub { cell: ctx.cell.clone(), train_idx: ctx.train_idx.clone(), val_idx: ctx.val_idx.clone() };
    if max_parts < 2 || !root.divisible(config) {
        return Ok(keep(0));
    }
    let search = Search { data, pool, config, seed };
    let rest = state.loss_sum - ctx.incumbent.val_loss;
    let objective =
        move |loss: f64, parts: usize| objective_of(rest + loss, state.leaves + parts - 1, state.n_val, m, alpha);

    let first_cuts = search.cuts(&root);
    let results = par::map(&first_cuts, |&cut| search.refine_with(&root, cut, max_parts, &objective));
    let mut candidates = 0;
    let mut best: Option<Candidate> = None;
    for r in results {
        let (n, c) = r?;
        candidates += n;
        if let Some(c) = c {
            if best.as_ref().is_none_or(|b| c.objective < b.objective) {
                best = Some(c);
            }
        }
    }
    match best {
        Some(c) if c.objective < before - config.improvement_tol => {
            let children = c
                .parts
                .into_iter()
                .map(|(sub, incumbent)| CellContext {
                    cell: sub.cell,
                    train_idx: sub.train_idx,
                    val_idx: sub.val_idx,
                    incumbent,
                })
                .collect();
            Ok(OptOutcome {
                decision: Decision::Split { cuts: c.cuts, children },
                candidates,
                before,
                after: c.objective,
            })
        }
        _ => Ok(keep(candidates)),
    }
}
