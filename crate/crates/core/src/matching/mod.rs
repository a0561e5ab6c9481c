//! Stable assignment of recipients to donors from one shared score matrix.
//!
//! Both sides rank partners by descending score, lower index first on ties,
//! and recipients propose (deferred acceptance). Donors may accept up to
//! their capacity.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Recipients by donors; entries in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreMatrix {
    scores: Vec<Vec<f64>>,
    capacities: Vec<usize>,
}

impl ScoreMatrix {
    /// Unit capacity for every donor.
    pub fn new(scores: Vec<Vec<f64>>) -> Result<Self> {
        let donors = scores.first().map_or(0, Vec::len);
        Self::with_capacities(scores, vec![1; donors])
    }

    pub fn with_capacities(scores: Vec<Vec<f64>>, capacities: Vec<usize>) -> Result<Self> {
        let donors = capacities.len();
        for (r, row) in scores.iter().enumerate() {
            if row.len() != donors {
                return Err(Error::InvalidArgument(format!(
                    "recipient {r} has {} scores, expected {donors}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::InvalidArgument(format!("score {v} of recipient {r} lies outside [0, 1]")));
            }
        }
        if capacities.contains(&0) {
            return Err(Error::InvalidArgument("donor capacities must be >= 1".into()));
        }
        Ok(Self { scores, capacities })
    }

    pub fn recipients(&self) -> usize {
        self.scores.len()
    }

    pub fn donors(&self) -> usize {
        self.capacities.len()
    }

    pub fn score(&self, r: usize, d: usize) -> f64 {
        self.scores[r][d]
    }

    pub fn capacity(&self, d: usize) -> usize {
        self.capacities[d]
    }

    /// Donors in recipient `r`'s order of preference.
    pub fn recipient_order(&self, r: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.donors()).collect();
        order.sort_by(|&a, &b| self.scores[r][b].total_cmp(&self.scores[r][a]).then(a.cmp(&b)));
        order
    }

    /// `rank[r][d]`: position of donor `d` in recipient `r`'s order.
    fn recipient_ranks(&self) -> Vec<Vec<usize>> {
        (0..self.recipients())
            .map(|r| {
                let mut rank = vec![0; self.donors()];
                for (pos, d) in self.recipient_order(r).into_iter().enumerate() {
                    rank[d] = pos;
                }
                rank
            })
            .collect()
    }

    /// `rank[d][r]`: position of recipient `r` in donor `d`'s order.
    fn donor_ranks(&self) -> Vec<Vec<usize>> {
        (0..self.donors())
            .map(|d| {
                let mut order: Vec<usize> = (0..self.recipients()).collect();
                order.sort_by(|&a, &b| self.scores[b][d].total_cmp(&self.scores[a][d]).then(a.cmp(&b)));
                let mut rank = vec![0; self.recipients()];
                for (pos, r) in order.into_iter().enumerate() {
                    rank[r] = pos;
                }
                rank
            })
            .collect()
    }
}

/// Donor assigned to each recipient, if any.
pub type Assignment = Vec<Option<usize>>;

/// Recipient-proposing deferred acceptance.
pub fn stable_match(scores: &ScoreMatrix) -> Assignment {
    let d_rank = scores.donor_ranks();
    let orders: Vec<Vec<usize>> = (0..scores.recipients()).map(|r| scores.recipient_order(r)).collect();
    let mut next = vec![0usize; scores.recipients()];
    let mut held: Vec<Vec<usize>> = vec![Vec::new(); scores.donors()];
    let mut assignment: Assignment = vec![None; scores.recipients()];
    let mut free: VecDeque<usize> = (0..scores.recipients()).collect();
    while let Some(r) = free.pop_front() {
        let Some(&d) = orders[r].get(next[r]) else { continue };
        next[r] += 1;
        held[d].push(r);
        assignment[r] = Some(d);
        if held[d].len() > scores.capacity(d) {
            let (pos, &worst) = held[d]
                .iter()
                .enumerate()
                .max_by_key(|&(_, &x)| d_rank[d][x])
                .expect("donor holds at least one recipient");
            held[d].swap_remove(pos);
            assignment[worst] = None;
            free.push_back(worst);
        }
    }
    assignment
}

/// Pairs that both strictly prefer each other to what `assignment` gives
/// them. A donor with spare capacity prefers any recipient to the vacancy.
pub fn blocking_pairs(scores: &ScoreMatrix, assignment: &Assignment) -> Vec<(usize, usize)> {
    let r_rank = scores.recipient_ranks();
    let d_rank = scores.donor_ranks();
    let mut held: Vec<Vec<usize>> = vec![Vec::new(); scores.donors()];
    for (r, a) in assignment.iter().enumerate() {
        if let Some(d) = *a {
            held[d].push(r);
        }
    }
    let mut out = Vec::new();
    for r in 0..scores.recipients() {
        for d in 0..scores.donors() {
            if assignment[r] == Some(d) {
                continue;
            }
            let r_wants = assignment[r].is_none_or(|cur| r_rank[r][d] < r_rank[r][cur]);
            let d_wants = held[d].len() < scores.capacity(d) || held[d].iter().any(|&x| d_rank[d][r] < d_rank[d][x]);
            if r_wants && d_wants {
                out.push((r, d));
            }
        }
    }
    out
}

/// Whether `assignment` respects capacities and has no blocking pair.
pub fn is_stable(scores: &ScoreMatrix, assignment: &Assignment) -> bool {
    let mut load = vec![0usize; scores.donors()];
    for d in assignment.iter().flatten() {
        load[*d] += 1;
    }
    assignment.len() == scores.recipients()
        && load.iter().zip(&scores.capacities).all(|(l, c)| l <= c)
        && blocking_pairs(scores, assignment).is_empty()
}

/// Position of `d` in recipient `r`'s preference order.
pub fn recipient_rank(scores: &ScoreMatrix, r: usize, d: usize) -> usize {
    scores.recipient_order(r).iter().position(|&x| x == d).unwrap_or(usize::MAX)
}

#[cfg(test)]
mod tests;
