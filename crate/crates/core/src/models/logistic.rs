//! L2-regularised logistic regression on standardised features, fitted with L-BFGS.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;

use super::standardize::Standardizer;
use super::{check_binary, Classifier};

/// Rows per partial sum; partials are added in chunk order so results do not
/// depend on the thread count.
const CHUNK_ROWS: usize = 256;
const LBFGS_MEMORY: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub l2: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for LogisticParams {
    fn default() -> Self {
        Self {
            l2: 1e-4,
            max_iter: 500,
            tol: 1e-6,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct LinearModel<T> {
    pub weights: Vec<T>,
    pub bias: T,
    pub standardizer: Standardizer<T>,
    pub params: LogisticParams,
    pub iterations: usize,
    pub converged: bool,
}

/// Regularised mean log-loss and its gradient with respect to `(weights, bias)`.
///
/// `(1/n) sum log(1 + exp(-s_i (w.z_i + b))) + (l2/2) |w|^2` with `s_i = 2 y_i - 1`
/// and `z_i` the standardised row.
pub fn logistic_objective<T: Real>(
    x: &Matrix<T>,
    y: &[u8],
    standardizer: &Standardizer<T>,
    weights: &[T],
    bias: T,
    l2: T,
) -> (T, Vec<T>, T) {
    let d = x.n_cols();
    let inv_sigma: Vec<T> = standardizer.sigma.iter().map(|&s| T::one() / s).collect();
    let partials: Vec<(T, Vec<T>, T)> = (0..x.n_rows())
        .step_by(CHUNK_ROWS)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|start| {
            let end = (start + CHUNK_ROWS).min(x.n_rows());
            let mut loss = T::zero();
            let mut grad = vec![T::zero(); d];
            let mut gbias = T::zero();
            let mut z = vec![T::zero(); d];
            #[allow(clippy::needless_range_loop)]
            for i in start..end {
                for (j, zj) in z.iter_mut().enumerate() {
                    *zj = (x.get(i, j) - standardizer.mu[j]) * inv_sigma[j];
                }
                let margin = z.iter().zip(weights).map(|(&a, &w)| a * w).sum::<T>() + bias;
                let sign = if y[i] == 1 { T::one() } else { -T::one() };
                let m = sign * margin;
                loss += (-m).softplus();
                // d/dmargin of softplus(-s*margin) = -s * sigmoid(-s*margin)
                let r = -sign * (-m).sigmoid();
                gbias += r;
                for (g, &zj) in grad.iter_mut().zip(&z) {
                    *g += r * zj;
                }
            }
            (loss, grad, gbias)
        })
        .collect();

    let n = T::of_usize(x.n_rows());
    let mut loss = T::zero();
    let mut grad = vec![T::zero(); d];
    let mut gbias = T::zero();
    for (l, g, b) in partials {
        loss += l;
        gbias += b;
        for (acc, v) in grad.iter_mut().zip(g) {
            *acc += v;
        }
    }
    let half = T::of(0.5);
    let reg = weights.iter().map(|&w| w * w).sum::<T>() * half * l2;
    for (g, &w) in grad.iter_mut().zip(weights) {
        *g = *g / n + l2 * w;
    }
    (loss / n + reg, grad, gbias / n)
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn max_abs<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}

impl<T: Real> LinearModel<T> {
    pub fn fit(x: &Matrix<T>, y: &[u8], params: LogisticParams) -> Result<Self> {
        check_binary(x, y)?;
        if x.n_rows() < 2 {
            return Err(Error::SingleClass);
        }
        let standardizer = Standardizer::fit(x);
        let d = x.n_cols();
        let l2 = T::of(params.l2);
        let tol = T::of(params.tol);

        // theta = [weights..., bias]
        let eval = |theta: &[T]| {
            let (f, mut g, gb) = logistic_objective(x, y, &standardizer, &theta[..d], theta[d], l2);
            g.push(gb);
            (f, g)
        };

        let mut theta = vec![T::zero(); d + 1];
        let (mut f, mut g) = eval(&theta);
        let mut history: Vec<(Vec<T>, Vec<T>, T)> = Vec::with_capacity(LBFGS_MEMORY);
        let mut iterations = 0;
        let mut converged = max_abs(&g) < tol;

        while !converged && iterations < params.max_iter {
            iterations += 1;
            let mut dir = two_loop(&g, &history);
            let mut slope = dot(&g, &dir);
            if slope >= T::zero() {
                history.clear();
                dir = g.iter().map(|&v| -v).collect();
                slope = dot(&g, &dir);
            }
            let mut step = if history.is_empty() {
                T::one() / max_abs(&g).max(T::one())
            } else {
                T::one()
            };
            let c1 = T::of(1e-4);
            let mut accepted = None;
            for _ in 0..60 {
                let trial: Vec<T> = theta.iter().zip(&dir).map(|(&t, &p)| t + step * p).collect();
                let (ft, gt) = eval(&trial);
                if ft.is_finite() && ft <= f + c1 * step * slope {
                    accepted = Some((trial, ft, gt));
                    break;
                }
                step *= T::of(0.5);
            }
            let Some((next, f_next, g_next)) = accepted else {
                break;
            };
            let s: Vec<T> = next.iter().zip(&theta).map(|(&a, &b)| a - b).collect();
            let yv: Vec<T> = g_next.iter().zip(&g).map(|(&a, &b)| a - b).collect();
            let sy = dot(&s, &yv);
            if sy > T::of(1e-12) * dot(&yv, &yv).sqrt() * dot(&s, &s).sqrt() {
                if history.len() == LBFGS_MEMORY {
                    history.remove(0);
                }
                history.push((s, yv, T::one() / sy));
            }
            theta = next;
            f = f_next;
            g = g_next;
            converged = max_abs(&g) < tol;
        }

        let bias = theta[d];
        theta.truncate(d);
        Ok(Self {
            weights: theta,
            bias,
            standardizer,
            params,
            iterations,
            converged,
        })
    }

    pub fn decision_function(&self, x: &[T]) -> T {
        x.iter()
            .zip(&self.weights)
            .zip(self.standardizer.mu.iter().zip(&self.standardizer.sigma))
            .map(|((&v, &w), (&m, &s))| w * ((v - m) / s))
            .sum::<T>()
            + self.bias
    }
}

/// L-BFGS two-loop recursion: returns the search direction `-H g`.
fn two_loop<T: Real>(g: &[T], history: &[(Vec<T>, Vec<T>, T)]) -> Vec<T> {
    let mut q: Vec<T> = g.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let a = *rho * dot(s, &q);
        for (qi, &yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = history.last() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for ((s, y, rho), a) in history.iter().zip(alphas.into_iter().rev()) {
        let b = *rho * dot(y, &q);
        for (qi, &si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    q.into_iter().map(|v| -v).collect()
}

impl<T: Real> Classifier<T> for LinearModel<T> {
    fn n_features(&self) -> usize {
        self.weights.len()
    }

    fn predict_row(&self, x: &[T]) -> T {
        self.decision_function(x).sigmoid()
    }
}
