#![allow(dead_code)]

use dummygraph::rng::SplitMix64;

/// Small C-SVC dual problem with a PSD kernel.
pub struct Problem {
    pub n: usize,
    pub kernel: Vec<f64>,
    pub labels: Vec<i8>,
    pub c: f64,
    /// Kernel rows of extra probe points against the training points.
    pub probes: Vec<Vec<f64>>,
    /// Gaussian kernels on distinct points are strictly positive definite,
    /// which makes the optimal multipliers unique.
    pub gaussian: bool,
}

fn gaussian(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    (-gamma * d).exp()
}

fn linear(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Random points in 1 to 4 dimensions under a Gaussian or linear kernel,
/// with both classes present.
pub fn random_problem(rng: &mut SplitMix64) -> Problem {
    let n = rng.range(2, 8) as usize;
    let dim = rng.range(1, 4) as usize;
    let point = |rng: &mut SplitMix64| -> Vec<f64> { (0..dim).map(|_| rng.unit() * 4.0 - 2.0).collect() };
    let xs: Vec<Vec<f64>> = (0..n).map(|_| point(rng)).collect();
    let mut labels: Vec<i8> = (0..n).map(|_| if rng.chance(0.5) { 1 } else { -1 }).collect();
    labels[0] = 1;
    labels[1] = -1;
    let use_gaussian = rng.chance(0.5);
    let gamma = 0.2 + rng.unit();
    let k = |a: &[f64], b: &[f64]| if use_gaussian { gaussian(a, b, gamma) } else { linear(a, b) };
    let kernel = (0..n * n).map(|p| k(&xs[p / n], &xs[p % n])).collect();
    let probes = (0..6)
        .map(|_| {
            let p = point(rng);
            xs.iter().map(|x| k(&p, x)).collect()
        })
        .collect();
    let c = [0.1, 1.0, 10.0][rng.below(3) as usize];
    Problem {
        n,
        kernel,
        labels,
        c,
        probes,
        gaussian: use_gaussian,
    }
}

/// Multipliers, bias and dual objective found by projected gradient ascent.
pub struct OracleSolution {
    pub alphas: Vec<f64>,
    pub bias: f64,
    pub objective: f64,
}

// Euclidean projection onto {0 <= a <= c, sum a_i y_i = 0}: a = clip(z - t y)
// with t found by bisection, since sum y_i clip(z_i - t y_i) falls with t.
fn project(z: &[f64], y: &[f64], c: f64) -> Vec<f64> {
    let at = |t: f64| -> Vec<f64> { z.iter().zip(y).map(|(zi, yi)| (zi - t * yi).clamp(0.0, c)).collect() };
    let excess = |t: f64| -> f64 { at(t).iter().zip(y).map(|(a, yi)| a * yi).sum() };
    let (mut lo, mut hi) = (-1.0, 1.0);
    while excess(lo) < 0.0 {
        lo *= 2.0;
    }
    while excess(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

pub fn dual(q: &[f64], alpha: &[f64]) -> f64 {
    let n = alpha.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += alpha[i] * alpha[j] * q[i * n + j];
        }
    }
    alpha.iter().sum::<f64>() - 0.5 * quad
}

pub fn solve_by_projected_gradient(p: &Problem) -> OracleSolution {
    let n = p.n;
    let y: Vec<f64> = p.labels.iter().map(|&l| l as f64).collect();
    let q: Vec<f64> = (0..n * n).map(|k| y[k / n] * y[k % n] * p.kernel[k]).collect();
    // step 1/L with L bounded by the trace of Q
    let trace: f64 = (0..n).map(|i| q[i * n + i]).sum();
    let step = 1.0 / trace.max(1e-12);
    let mut alpha = vec![0.0; n];
    for _ in 0..2_000_000 {
        let grad: Vec<f64> = (0..n)
            .map(|i| 1.0 - (0..n).map(|j| q[i * n + j] * alpha[j]).sum::<f64>())
            .collect();
        let z: Vec<f64> = alpha.iter().zip(&grad).map(|(a, g)| a + step * g).collect();
        let next = project(&z, &y, p.c);
        let moved: f64 = next.iter().zip(&alpha).map(|(a, b)| (a - b).abs()).sum();
        alpha = next;
        if moved < 1e-15 {
            break;
        }
    }

    // bias from the KKT conditions: average over free multipliers, or the
    // middle of the feasible interval when none is free
    let margin = |i: usize| -> f64 { (0..n).map(|j| alpha[j] * y[j] * p.kernel[i * n + j]).sum() };
    let tol = 1e-7 * p.c;
    let free: Vec<usize> = (0..n).filter(|&i| alpha[i] > tol && alpha[i] < p.c - tol).collect();
    let bias = if free.is_empty() {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..n {
            let r = y[i] - margin(i);
            let at_upper = alpha[i] >= p.c - tol;
            // at zero, y f >= 1; at C, y f <= 1
            if (y[i] > 0.0) != at_upper {
                lo = lo.max(r);
            } else {
                hi = hi.min(r);
            }
        }
        0.5 * (lo + hi)
    } else {
        free.iter().map(|&i| y[i] - margin(i)).sum::<f64>() / free.len() as f64
    };
    OracleSolution {
        objective: dual(&q, &alpha),
        alphas: alpha,
        bias,
    }
}

pub fn decision(alphas: &[f64], labels: &[i8], bias: f64, row: &[f64]) -> f64 {
    alphas
        .iter()
        .zip(labels)
        .zip(row)
        .map(|((a, &l), k)| a * l as f64 * k)
        .sum::<f64>()
        + bias
}
