use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::scalar::Real;

/// Smallest standard deviation used when scaling a column.
pub const SIGMA_FLOOR: f64 = 1e-12;

/// Per-column z-scoring with population standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Standardizer<T> {
    pub mu: Vec<T>,
    pub sigma: Vec<T>,
}

impl<T: Real> Standardizer<T> {
    pub fn fit(x: &Matrix<T>) -> Self {
        let (n, d) = (x.n_rows(), x.n_cols());
        let nf = T::of_usize(n.max(1));
        let mut mu = vec![T::zero(); d];
        for row in x.rows() {
            for (m, &v) in mu.iter_mut().zip(row) {
                *m += v;
            }
        }
        mu.iter_mut().for_each(|m| *m /= nf);
        let mut var = vec![T::zero(); d];
        for row in x.rows() {
            for ((s, &v), &m) in var.iter_mut().zip(row).zip(&mu) {
                *s += (v - m) * (v - m);
            }
        }
        let floor = T::of(SIGMA_FLOOR);
        let sigma = var.into_iter().map(|s| (s / nf).sqrt().max(floor)).collect();
        Self { mu, sigma }
    }

    /// Identity transform over `d` columns.
    pub fn identity(d: usize) -> Self {
        Self {
            mu: vec![T::zero(); d],
            sigma: vec![T::one(); d],
        }
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn apply(&self, x: &Matrix<T>) -> Matrix<T> {
        let mut out = x.clone();
        for i in 0..out.n_rows() {
            for ((v, &m), &s) in out.row_mut(i).iter_mut().zip(&self.mu).zip(&self.sigma) {
                *v = (*v - m) / s;
            }
        }
        out
    }
}
