//! C-SVC on a precomputed kernel, solved in the dual by sequential minimal
//! optimization with maximal-violating-pair working-set selection.
//!
//! The dual is `max sum(a) - 1/2 a'Qa` with `Q_ij = y_i y_j K_ij`, subject to
//! `0 <= a_i <= C` and `sum(a_i y_i) = 0`. The solver keeps the gradient of
//! the equivalent minimization `1/2 a'Qa - sum(a)` and stops once the
//! maximal violation drops below the tolerance.

use crate::error::LearnError;
use crate::kernels::GramMatrix;

pub const DEFAULT_TOLERANCE: f64 = 1e-3;
pub const DEFAULT_MAX_ITER: u64 = 10_000_000;
const TAU: f64 = 1e-12;

/// Read access to a square kernel matrix.
pub trait KernelAccess {
    fn size(&self) -> usize;
    fn at(&self, i: usize, j: usize) -> f64;
}

/// Row-major `n x n` slice.
pub struct DenseKernel<'a> {
    n: usize,
    values: &'a [f64],
}

impl<'a> DenseKernel<'a> {
    pub fn new(n: usize, values: &'a [f64]) -> Result<Self, LearnError> {
        if values.len() != n * n {
            return Err(LearnError::Dimension {
                expected: n * n,
                got: values.len(),
            });
        }
        Ok(DenseKernel { n, values })
    }
}

impl KernelAccess for DenseKernel<'_> {
    fn size(&self) -> usize {
        self.n
    }
    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}

/// Principal submatrix of a Gram matrix on the given indices.
pub struct GramView<'a> {
    gram: &'a GramMatrix,
    index: &'a [usize],
}

impl<'a> GramView<'a> {
    pub fn new(gram: &'a GramMatrix, index: &'a [usize]) -> Self {
        GramView { gram, index }
    }
}

impl KernelAccess for GramView<'_> {
    fn size(&self) -> usize {
        self.index.len()
    }
    fn at(&self, i: usize, j: usize) -> f64 {
        self.gram.get(self.index[i], self.index[j])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    pub c: f64,
    pub tolerance: f64,
    pub max_iter: u64,
}

impl SvmParams {
    pub fn new(c: f64) -> Self {
        SvmParams {
            c,
            tolerance: DEFAULT_TOLERANCE,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub alphas: Vec<f64>,
    pub labels: Vec<i8>,
    pub bias: f64,
    /// Training indices with a positive multiplier.
    pub support: Vec<usize>,
    pub c: f64,
    pub iterations: u64,
    /// Dual objective at the solution.
    pub objective: f64,
}

impl SvmModel {
    /// `sum a_i y_i k(x, x_i) + bias` for a kernel row against the training set.
    pub fn decision_value(&self, kernel_row: &[f64]) -> Result<f64, LearnError> {
        if kernel_row.len() != self.alphas.len() {
            return Err(LearnError::Dimension {
                expected: self.alphas.len(),
                got: kernel_row.len(),
            });
        }
        let s: f64 = self
            .support
            .iter()
            .map(|&i| self.alphas[i] * self.labels[i] as f64 * kernel_row[i])
            .sum();
        Ok(s + self.bias)
    }
}

/// Sign of the decision value; an exact zero counts as `+1`.
pub fn svm_predict(model: &SvmModel, kernel_row: &[f64]) -> Result<i8, LearnError> {
    Ok(if model.decision_value(kernel_row)? >= 0.0 { 1 } else { -1 })
}

fn check_labels(labels: &[i8]) -> Result<(), LearnError> {
    if labels.iter().any(|&y| y != 1 && y != -1) {
        return Err(LearnError::Multiclass(3));
    }
    if !(labels.contains(&1) && labels.contains(&-1)) {
        return Err(LearnError::SingleClass);
    }
    Ok(())
}

/// Dual objective `sum(a) - 1/2 sum_ij a_i a_j y_i y_j K_ij`.
pub fn dual_objective<K: KernelAccess>(kernel: &K, labels: &[i8], alphas: &[f64]) -> f64 {
    let n = kernel.size();
    let mut quad = 0.0;
    for i in 0..n {
        if alphas[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            quad += alphas[i] * alphas[j] * (labels[i] * labels[j]) as f64 * kernel.at(i, j);
        }
    }
    alphas.iter().sum::<f64>() - 0.5 * quad
}

/// Trains with the default tolerance and iteration cap.
pub fn svm_train<K: KernelAccess>(kernel: &K, labels: &[i8], c: f64) -> Result<SvmModel, LearnError> {
    svm_train_with(kernel, labels, &SvmParams::new(c), None)
}

/// Trains a C-SVC. When `trace` is given, the dual objective after every
/// iteration is appended to it.
pub fn svm_train_with<K: KernelAccess>(
    kernel: &K,
    labels: &[i8],
    params: &SvmParams,
    mut trace: Option<&mut Vec<f64>>,
) -> Result<SvmModel, LearnError> {
    let n = kernel.size();
    if labels.len() != n {
        return Err(LearnError::Dimension {
            expected: n,
            got: labels.len(),
        });
    }
    check_labels(labels)?;
    for i in 0..n {
        for j in 0..n {
            if !kernel.at(i, j).is_finite() {
                return Err(LearnError::NonFinite(i, j));
            }
        }
    }
    let c = params.c;
    let y: Vec<f64> = labels.iter().map(|&l| l as f64).collect();
    let diag: Vec<f64> = (0..n).map(|i| kernel.at(i, i)).collect();
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let mut col_i = vec![0.0; n];
    let mut col_j = vec![0.0; n];

    let up = |a: f64, y: f64| (y > 0.0 && a < c) || (y < 0.0 && a > 0.0);
    let low = |a: f64, y: f64| (y > 0.0 && a > 0.0) || (y < 0.0 && a < c);

    let mut iterations = 0u64;
    loop {
        // maximal violating pair
        let mut gmax = f64::NEG_INFINITY;
        let mut gmin = f64::INFINITY;
        let (mut i, mut j) = (usize::MAX, usize::MAX);
        for t in 0..n {
            let v = -y[t] * grad[t];
            if up(alpha[t], y[t]) && v > gmax {
                gmax = v;
                i = t;
            }
            if low(alpha[t], y[t]) && v < gmin {
                gmin = v;
                j = t;
            }
        }
        if i == usize::MAX || j == usize::MAX || gmax - gmin < params.tolerance {
            break;
        }
        if iterations >= params.max_iter {
            return Err(LearnError::NoConvergence(params.max_iter));
        }
        iterations += 1;

        for t in 0..n {
            col_i[t] = y[i] * y[t] * kernel.at(i, t);
            col_j[t] = y[j] * y[t] * kernel.at(j, t);
        }
        let (old_i, old_j) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            let mut quad = diag[i] + diag[j] + 2.0 * col_i[j];
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let mut quad = diag[i] + diag[j] - 2.0 * col_i[j];
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += col_i[t] * di + col_j[t] * dj;
        }
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(objective_from_gradient(&alpha, &grad));
        }
    }

    let bias = -rho(&alpha, &grad, &y, c);
    let support = (0..n).filter(|&t| alpha[t] > 0.0).collect();
    Ok(SvmModel {
        objective: objective_from_gradient(&alpha, &grad),
        alphas: alpha,
        labels: labels.to_vec(),
        bias,
        support,
        c,
        iterations,
    })
}

// With grad = Qa - 1, the dual objective is 1/2 sum a_i (1 - grad_i).
fn objective_from_gradient(alpha: &[f64], grad: &[f64]) -> f64 {
    0.5 * alpha.iter().zip(grad).map(|(a, g)| a * (1.0 - g)).sum::<f64>()
}

// Offset from free multipliers, or the midpoint of the feasible interval
// when every multiplier sits at a bound.
fn rho(alpha: &[f64], grad: &[f64], y: &[f64], c: f64) -> f64 {
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut sum_free, mut n_free) = (0.0, 0usize);
    for t in 0..alpha.len() {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            n_free += 1;
            sum_free += yg;
        }
    }
    if n_free > 0 {
        sum_free / n_free as f64
    } else {
        (ub + lb) / 2.0
    }
}
