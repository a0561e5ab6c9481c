//! CART classification tree with Gini impurity and optional row weights.
//!
//! A split sends `x[feature] < threshold` left, matching the half-open cell
//! convention. Leaves store the Laplace-smoothed success rate.

use alloc::vec::Vec;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use super::smoothed_rate;
use crate::data::Rows;
use crate::math::Rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_leaf: usize,
    /// Features sampled per split; `None` uses all of them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_features: Option<usize>,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self { max_depth: 4, min_leaf: 5, max_features: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Node {
    Leaf { p: f64 },
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub nodes: Vec<Node>,
}

impl TreeModel {
    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { p } => return p,
                Node::Split { feature, threshold, left, right } => {
                    i = if x[feature] < threshold { left } else { right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, left).max(go(nodes, right)),
            }
        }
        go(&self.nodes, 0)
    }

    pub fn leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count()
    }
}

#[inline]
fn gini_mass(w_pos: f64, w_tot: f64) -> f64 {
    // w_tot * gini(node) = w_tot * 2 p (1 - p)
    if w_tot <= 0.0 {
        0.0
    } else {
        2.0 * w_pos * (w_tot - w_pos) / w_tot
    }
}

struct Builder<'a, 'r> {
    params: &'a TreeParams,
    rows: Rows<'r>,
    weights: Option<&'a [f64]>,
    dim: usize,
    rng: Option<&'a mut Rng>,
    nodes: Vec<Node>,
}

impl Builder<'_, '_> {
    fn weight(&self, i: usize) -> f64 {
        self.weights.map_or(1.0, |w| w[i])
    }

    fn build(&mut self, idx: &mut [usize], depth: usize) -> usize {
        let (mut w_pos, mut w_tot) = (0.0, 0.0);
        for &i in idx.iter() {
            let w = self.weight(i);
            w_tot += w;
            if self.rows.get(i).y == 1 {
                w_pos += w;
            }
        }
        let count = idx.len();
        let frac = if w_tot > 0.0 { w_pos / w_tot } else { 0.5 };
        let leaf = Node::Leaf { p: smoothed_rate(frac, count) };
        let id = self.nodes.len();
        self.nodes.push(leaf);
        let pure = w_pos <= 0.0 || w_pos >= w_tot;
        if depth >= self.params.max_depth || count < 2 * self.params.min_leaf.max(1) || pure {
            return id;
        }
        let features: Vec<usize> = match (self.params.max_features, self.rng.as_deref_mut()) {
            (Some(m), Some(rng)) if m < self.dim => {
                let mut f = index::sample(rng, self.dim, m.max(1)).into_vec();
                f.sort_unstable();
                f
            }
            _ => (0..self.dim).collect(),
        };
        let parent = gini_mass(w_pos, w_tot);
        let min_leaf = self.params.min_leaf.max(1);
        let mut best: Option<(usize, f64, f64)> = None;
        let mut order: Vec<usize> = idx.to_vec();
        for &f in &features {
            let rows = self.rows;
            order.sort_by(|&a, &b| rows.get(a).x[f].total_cmp(&rows.get(b).x[f]).then(a.cmp(&b)));
            let (mut lp, mut lt) = (0.0, 0.0);
            for k in 0..count - 1 {
                let i = order[k];
                let w = self.weight(i);
                lt += w;
                if rows.get(i).y == 1 {
                    lp += w;
                }
                let (a, b) = (rows.get(i).x[f], rows.get(order[k + 1]).x[f]);
                if a == b || k + 1 < min_leaf || count - (k + 1) < min_leaf {
                    continue;
                }
                let gain = parent - gini_mass(lp, lt) - gini_mass(w_pos - lp, w_tot - lt);
                if best.map_or(gain > 1e-12, |(_, _, g)| gain > g + 1e-12) {
                    let mut t = a + (b - a) / 2.0;
                    if t <= a {
                        t = b;
                    }
                    best = Some((f, t, gain));
                }
            }
        }
        let Some((feature, threshold, _)) = best else {
            return id;
        };
        let rows = self.rows;
        let mut split = 0;
        for k in 0..count {
            if rows.get(idx[k]).x[feature] < threshold {
                idx.swap(k, split);
                split += 1;
            }
        }
        let (l, r) = idx.split_at_mut(split);
        let left = self.build(l, depth + 1);
        let right = self.build(r, depth + 1);
        self.nodes[id] = Node::Split { feature, threshold, left, right };
        id
    }
}

pub(crate) fn fit_tree(
    params: &TreeParams,
    rows: Rows<'_>,
    weights: Option<&[f64]>,
    dim: usize,
    rng: Option<&mut Rng>,
) -> TreeModel {
    let mut b = Builder { params, rows, weights, dim, rng, nodes: Vec::new() };
    let mut idx: Vec<usize> = (0..rows.len()).collect();
    b.build(&mut idx, 0);
    TreeModel { nodes: b.nodes }
}
