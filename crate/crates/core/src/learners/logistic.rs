//! Logistic regression on standardized features: L2 by gradient descent
//! with backtracking, L1 (lasso) by proximal gradient.
//!
//! Coefficients live in standardized coordinates; `center` and `scale` are
//! the training statistics. The intercept is never penalized.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::standardization;
use crate::data::Rows;
use crate::math::{self, Rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogisticParams {
    pub l2: f64,
    pub max_iter: usize,
    /// Stop once the gradient norm falls below this.
    pub tol: f64,
}

impl Default for LogisticParams {
    fn default() -> Self {
        Self { l2: 1e-3, max_iter: 2000, tol: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LassoParams {
    /// Fixed L1 weight; `None` selects one from `grid` on a held-out split.
    pub lambda: Option<f64>,
    pub grid: Vec<f64>,
    pub max_iter: usize,
    pub tol: f64,
    pub selection_fraction: f64,
}

impl Default for LassoParams {
    fn default() -> Self {
        Self {
            lambda: None,
            // half-decade steps from 1e-4 to 1e-1
            grid: vec![
                1e-4,
                3.162_277_660_168_379e-4,
                1e-3,
                3.162_277_660_168_379e-3,
                1e-2,
                3.162_277_660_168_379e-2,
                1e-1,
            ],
            max_iter: 2000,
            tol: 1e-6,
            selection_fraction: 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub center: Vec<f64>,
    pub scale: Vec<f64>,
    pub weights: Vec<f64>,
    pub intercept: f64,
    /// Regularization weight the model was fitted with.
    pub penalty: f64,
    pub iterations: usize,
}

impl LinearModel {
    pub fn margin(&self, x: &[f64]) -> f64 {
        self.intercept
            + self
                .weights
                .iter()
                .zip(x)
                .zip(self.center.iter().zip(&self.scale))
                .map(|((w, v), (c, s))| w * (v - c) / s)
                .sum::<f64>()
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        math::sigmoid(self.margin(x))
    }
}

/// Standardized design matrix, row-major.
struct Design {
    z: Vec<f64>,
    y: Vec<f64>,
    n: usize,
    d: usize,
}

impl Design {
    fn new(rows: Rows<'_>, center: &[f64], scale: &[f64]) -> Self {
        let d = center.len();
        let mut z = Vec::with_capacity(rows.len() * d);
        let mut y = Vec::with_capacity(rows.len());
        for r in rows.iter() {
            z.extend(r.x.iter().zip(center.iter().zip(scale)).map(|(v, (c, s))| (v - c) / s));
            y.push(r.y as f64);
        }
        Self { z, y, n: rows.len(), d }
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.z[i * self.d..(i + 1) * self.d]
    }

    fn eta(&self, i: usize, w: &[f64], b: f64) -> f64 {
        b + self.row(i).iter().zip(w).map(|(z, w)| z * w).sum::<f64>()
    }

    /// Mean log-loss.
    fn loss(&self, w: &[f64], b: f64) -> f64 {
        (0..self.n)
            .map(|i| {
                let e = self.eta(i, w, b);
                math::softplus(e) - self.y[i] * e
            })
            .sum::<f64>()
            / self.n as f64
    }

    /// Mean log-loss and its gradient; `grad` holds `d` weights then the intercept.
    fn loss_grad(&self, w: &[f64], b: f64, grad: &mut [f64]) -> f64 {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut loss = 0.0;
        for i in 0..self.n {
            let e = self.eta(i, w, b);
            loss += math::softplus(e) - self.y[i] * e;
            let r = math::sigmoid(e) - self.y[i];
            for (g, z) in grad[..self.d].iter_mut().zip(self.row(i)) {
                *g += r * z;
            }
            grad[self.d] += r;
        }
        let inv = 1.0 / self.n as f64;
        grad.iter_mut().for_each(|g| *g *= inv);
        loss * inv
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn l2_value(design: &Design, theta: &[f64], l2: f64) -> f64 {
    let d = design.d;
    design.loss(&theta[..d], theta[d]) + 0.5 * l2 * dot(&theta[..d], &theta[..d])
}

fn l2_grad(design: &Design, theta: &[f64], l2: f64, grad: &mut [f64]) -> f64 {
    let d = design.d;
    let loss = design.loss_grad(&theta[..d], theta[d], grad);
    for j in 0..d {
        grad[j] += l2 * theta[j];
    }
    loss + 0.5 * l2 * dot(&theta[..d], &theta[..d])
}

/// L2-regularized mean log-loss of `(weights, intercept)` in the model's
/// standardized coordinates.
pub fn l2_objective(model: &LinearModel, rows: Rows<'_>, weights: &[f64], intercept: f64) -> f64 {
    let design = Design::new(rows, &model.center, &model.scale);
    let mut theta = weights.to_vec();
    theta.push(intercept);
    l2_value(&design, &theta, model.penalty)
}

/// Analytic gradient of [`l2_objective`] at the model's own coefficients,
/// weights first, intercept last.
pub fn l2_gradient(model: &LinearModel, rows: Rows<'_>) -> Vec<f64> {
    let design = Design::new(rows, &model.center, &model.scale);
    let mut theta = model.weights.clone();
    theta.push(model.intercept);
    let mut grad = vec![0.0; theta.len()];
    l2_grad(&design, &theta, model.penalty, &mut grad);
    grad
}

pub(crate) fn fit_logistic(params: &LogisticParams, rows: Rows<'_>, dim: usize) -> LinearModel {
    let (center, scale) = standardization(rows, dim);
    let design = Design::new(rows, &center, &scale);
    let p = dim + 1;
    let mut theta = vec![0.0; p];
    let mut grad = vec![0.0; p];
    let mut f = l2_grad(&design, &theta, params.l2, &mut grad);
    let mut step = 1.0;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut trial = vec![0.0; p];
    let mut iterations = 0;
    for it in 0..params.max_iter {
        iterations = it;
        let gnorm2 = dot(&grad, &grad);
        if math::sqrt(gnorm2) < params.tol {
            break;
        }
        // Barzilai-Borwein guess for the first trial step, then Armijo halving.
        if let Some((ref t_prev, ref g_prev)) = prev {
            let s: Vec<f64> = theta.iter().zip(t_prev).map(|(a, b)| a - b).collect();
            let q: Vec<f64> = grad.iter().zip(g_prev).map(|(a, b)| a - b).collect();
            let sq = dot(&s, &q);
            if sq > 0.0 {
                step = (dot(&s, &s) / sq).clamp(1e-8, 1e8);
            } else {
                step = (step * 2.0).min(1e8);
            }
        }
        let mut accepted = false;
        for _ in 0..60 {
            for j in 0..p {
                trial[j] = theta[j] - step * grad[j];
            }
            if l2_value(&design, &trial, params.l2) <= f - 0.5 * step * gnorm2 {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        prev = Some((theta.clone(), grad.clone()));
        theta.copy_from_slice(&trial);
        f = l2_grad(&design, &theta, params.l2, &mut grad);
        iterations = it + 1;
    }
    let intercept = theta[dim];
    theta.truncate(dim);
    LinearModel { center, scale, weights: theta, intercept, penalty: params.l2, iterations }
}

fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

/// Proximal gradient for mean log-loss + `lambda * |w|_1`.
fn lasso_solve(design: &Design, lambda: f64, max_iter: usize, tol: f64) -> (Vec<f64>, usize) {
    let d = design.d;
    let p = d + 1;
    let mut theta = vec![0.0; p];
    let mut grad = vec![0.0; p];
    let mut trial = vec![0.0; p];
    let mut step: f64 = 1.0;
    let mut iterations = 0;
    for it in 0..max_iter {
        iterations = it + 1;
        let f = design.loss_grad(&theta[..d], theta[d], &mut grad);
        step = (step * 2.0).min(1e4);
        let mut moved = 0.0;
        for _ in 0..60 {
            for j in 0..d {
                trial[j] = soft_threshold(theta[j] - step * grad[j], step * lambda);
            }
            trial[d] = theta[d] - step * grad[d];
            let diff: Vec<f64> = trial.iter().zip(&theta).map(|(a, b)| a - b).collect();
            let bound = f + dot(&grad, &diff) + dot(&diff, &diff) / (2.0 * step);
            if design.loss(&trial[..d], trial[d]) <= bound + 1e-15 {
                moved = math::sqrt(dot(&diff, &diff)) / step;
                break;
            }
            step *= 0.5;
        }
        theta.copy_from_slice(&trial);
        if moved < tol {
            break;
        }
    }
    (theta, iterations)
}

pub(crate) fn fit_lasso(params: &LassoParams, rows: Rows<'_>, dim: usize, rng: &mut Rng) -> LinearModel {
    let lambda = match params.lambda {
        Some(l) => l,
        None => select_lambda(params, rows, dim, rng),
    };
    let (center, scale) = standardization(rows, dim);
    let design = Design::new(rows, &center, &scale);
    let (mut theta, iterations) = lasso_solve(&design, lambda, params.max_iter, params.tol);
    let intercept = theta[dim];
    theta.truncate(dim);
    LinearModel { center, scale, weights: theta, intercept, penalty: lambda, iterations }
}

/// Picks the grid value with the lowest held-out log-loss (first wins ties).
fn select_lambda(params: &LassoParams, rows: Rows<'_>, dim: usize, rng: &mut Rng) -> f64 {
    let fallback = params.grid.get(params.grid.len() / 2).copied().unwrap_or(1e-3);
    let n = rows.len();
    let n_hold = math::round(n as f64 * params.selection_fraction) as usize;
    if params.grid.is_empty() || n_hold < 2 || n - n_hold < 4 {
        return fallback;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let (hold, fit_part) = order.split_at(n_hold);
    let all: Vec<_> = rows.iter().cloned().collect();
    let fit_rows = Rows::indexed(&all, fit_part);
    let hold_rows = Rows::indexed(&all, hold);
    let (center, scale) = standardization(fit_rows, dim);
    let fit_design = Design::new(fit_rows, &center, &scale);
    let hold_design = Design::new(hold_rows, &center, &scale);
    let mut best = (f64::INFINITY, fallback);
    for &lambda in &params.grid {
        let (theta, _) = lasso_solve(&fit_design, lambda, params.max_iter, params.tol);
        let loss = hold_design.loss(&theta[..dim], theta[dim]);
        if loss < best.0 {
            best = (loss, lambda);
        }
    }
    best.1
}
