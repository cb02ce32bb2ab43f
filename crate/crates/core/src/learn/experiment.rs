//! Split, select, evaluate: the repeated random-split protocol for
//! precomputed-kernel graph classification.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use super::smo::{svm_train, GramView, SvmModel};
use super::split::{make_splits, SplitPlan};
use crate::error::LearnError;
use crate::graph::LabeledDigraph;
use crate::kernels::{normalize_gram, GramMatrix, KernelFeatures, KernelSpec};

/// `10^-7, 10^-6, ..., 10^3`.
pub fn default_c_grid() -> Vec<f64> {
    (-7..=3).map(|e| 10f64.powi(e)).collect()
}

/// WL round counts searched on validation data.
pub const DEFAULT_H_GRID: [usize; 6] = [0, 1, 2, 3, 4, 5];

/// Seeds 2020 through 2029.
pub fn default_seeds() -> Vec<u64> {
    (2020..=2029).collect()
}

/// Maps two distinct class values to -1 (smaller) and +1 (larger).
pub fn binary_labels(classes: &[i64]) -> Result<Vec<i8>, LearnError> {
    let mut distinct: Vec<i64> = classes.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    match distinct.len() {
        2 => Ok(classes
            .iter()
            .map(|&c| if c == distinct[0] { -1 } else { 1 })
            .collect()),
        0 | 1 => Err(LearnError::SingleClass),
        k => Err(LearnError::Multiclass(k)),
    }
}

/// Hyperparameters chosen on validation data. Accuracies are percentages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub c: f64,
    pub h: Option<usize>,
    pub valid_accuracy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    selection: Selection,
    test_accuracy: f64,
}

// Better validation accuracy first, then smaller C, then smaller h.
fn prefer(a: &Selection, b: &Selection) -> Ordering {
    b.valid_accuracy
        .total_cmp(&a.valid_accuracy)
        .then(a.c.total_cmp(&b.c))
        .then(a.h.cmp(&b.h))
}

fn percent_correct(model: &SvmModel, gram: &GramMatrix, train: &[usize], eval: &[usize], labels: &[i8]) -> f64 {
    if eval.is_empty() {
        return 0.0;
    }
    let mut row = vec![0.0; train.len()];
    let mut hits = 0usize;
    for &i in eval {
        let full = gram.row(i);
        for (slot, &t) in row.iter_mut().zip(train) {
            *slot = full[t];
        }
        let value = model.decision_value(&row).expect("row sized to training set");
        let predicted = if value >= 0.0 { 1 } else { -1 };
        hits += (predicted == labels[i]) as usize;
    }
    100.0 * hits as f64 / eval.len() as f64
}

fn train_labels(labels: &[i8], plan: &SplitPlan) -> Result<Vec<i8>, LearnError> {
    let y: Vec<i8> = plan.train.iter().map(|&i| labels[i]).collect();
    if !(y.contains(&1) && y.contains(&-1)) {
        return Err(LearnError::DegenerateSplit {
            seed: plan.seed,
            reason: "training part holds a single class".into(),
        });
    }
    Ok(y)
}

fn candidates(
    gram: &GramMatrix,
    h: Option<usize>,
    labels: &[i8],
    plan: &SplitPlan,
    c_grid: &[f64],
) -> Result<Vec<Candidate>, LearnError> {
    let y = train_labels(labels, plan)?;
    let view = GramView::new(gram, &plan.train);
    c_grid
        .iter()
        .map(|&c| {
            let model = svm_train(&view, &y, c)?;
            Ok(Candidate {
                selection: Selection {
                    c,
                    h,
                    valid_accuracy: percent_correct(&model, gram, &plan.train, &plan.valid, labels),
                },
                test_accuracy: percent_correct(&model, gram, &plan.train, &plan.test, labels),
            })
        })
        .collect()
}

fn best(mut all: Vec<Candidate>) -> Option<Candidate> {
    all.sort_by(|a, b| prefer(&a.selection, &b.selection));
    all.into_iter().next()
}

/// Trains on the training part for every `(h, C)` and returns the setting
/// with the best validation accuracy. Ties go to smaller C, then smaller h.
pub fn model_select(
    grams: &[(Option<usize>, &GramMatrix)],
    labels: &[i8],
    plan: &SplitPlan,
    c_grid: &[f64],
) -> Result<Selection, LearnError> {
    if grams.is_empty() || c_grid.is_empty() {
        return Err(LearnError::EmptyGrid);
    }
    let mut all = Vec::new();
    for &(h, gram) in grams {
        all.extend(candidates(gram, h, labels, plan, c_grid)?);
    }
    Ok(best(all).expect("non-empty grid").selection)
}

/// Test accuracy (percent) of the model trained on the training part with `c`.
pub fn evaluate(gram: &GramMatrix, labels: &[i8], plan: &SplitPlan, c: f64) -> Result<f64, LearnError> {
    let y = train_labels(labels, plan)?;
    let model = svm_train(&GramView::new(gram, &plan.train), &y, c)?;
    Ok(percent_correct(&model, gram, &plan.train, &plan.test, labels))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedResult {
    pub seed: u64,
    pub c: f64,
    pub h: Option<usize>,
    pub valid_accuracy: f64,
    pub test_accuracy: f64,
}

/// Per-seed outcomes and their aggregate; accuracies in percent, `std` is
/// the sample standard deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub spec: KernelSpec,
    pub per_seed: Vec<SeedResult>,
    pub mean: f64,
    pub std: f64,
}

impl EvalReport {
    fn from_results(spec: KernelSpec, per_seed: Vec<SeedResult>) -> Self {
        let k = per_seed.len() as f64;
        let mean = per_seed.iter().map(|r| r.test_accuracy).sum::<f64>() / k;
        let std = if per_seed.len() > 1 {
            (per_seed.iter().map(|r| (r.test_accuracy - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
        } else {
            0.0
        };
        EvalReport {
            spec,
            per_seed,
            mean,
            std,
        }
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.spec)?;
        for r in &self.per_seed {
            write!(f, "seed={} C={:e}", r.seed, r.c)?;
            if let Some(h) = r.h {
                write!(f, " h={h}")?;
            }
            writeln!(f, " valid={:.4} test={:.4}", r.valid_accuracy, r.test_accuracy)?;
        }
        writeln!(f, "mean={:.4} std={:.4}", self.mean, self.std)
    }
}

/// Runs the protocol on precomputed features. WL-type kernels search
/// `h_grid` (capped at the extracted rounds); others ignore it.
pub fn run_with_features(
    features: &KernelFeatures,
    classes: &[i64],
    seeds: &[u64],
    c_grid: &[f64],
    h_grid: &[usize],
) -> Result<EvalReport, LearnError> {
    if features.len() != classes.len() {
        return Err(LearnError::Dimension {
            expected: features.len(),
            got: classes.len(),
        });
    }
    if seeds.is_empty() || c_grid.is_empty() {
        return Err(LearnError::EmptyGrid);
    }
    let labels = binary_labels(classes)?;
    let plans: Vec<SplitPlan> = seeds
        .iter()
        .map(|&s| make_splits(classes.len(), s))
        .collect::<Result<_, _>>()?;

    let hs: Vec<Option<usize>> = if features.spec().base.rounds().is_some() {
        let hs: Vec<_> = h_grid
            .iter()
            .copied()
            .filter(|&h| h <= features.max_rounds())
            .map(Some)
            .collect();
        if hs.is_empty() {
            return Err(LearnError::EmptyGrid);
        }
        hs
    } else {
        vec![None]
    };

    let mut running: Vec<Option<Candidate>> = vec![None; plans.len()];
    for &h in &hs {
        let gram = normalize_gram(&features.gram(h.unwrap_or(0)));
        let found: Vec<Candidate> = plans
            .par_iter()
            .map(|plan| {
                let all = candidates(&gram, h, &labels, plan, c_grid)?;
                Ok(best(all).expect("non-empty grid"))
            })
            .collect::<Result<_, LearnError>>()?;
        for (slot, cand) in running.iter_mut().zip(found) {
            *slot = match slot.take() {
                Some(prev) if prefer(&prev.selection, &cand.selection) != Ordering::Greater => Some(prev),
                _ => Some(cand),
            };
        }
    }

    let per_seed = plans
        .iter()
        .zip(running)
        .map(|(plan, cand)| {
            let cand = cand.expect("at least one h");
            SeedResult {
                seed: plan.seed,
                c: cand.selection.c,
                h: cand.selection.h,
                valid_accuracy: cand.selection.valid_accuracy,
                test_accuracy: cand.test_accuracy,
            }
        })
        .collect();
    Ok(EvalReport::from_results(*features.spec(), per_seed))
}

/// Runs the protocol on one precomputed Gram matrix (normalized first).
pub fn run_with_gram(gram: &GramMatrix, classes: &[i64], seeds: &[u64], c_grid: &[f64]) -> Result<EvalReport, LearnError> {
    if gram.len() != classes.len() {
        return Err(LearnError::Dimension {
            expected: gram.len(),
            got: classes.len(),
        });
    }
    if seeds.is_empty() || c_grid.is_empty() {
        return Err(LearnError::EmptyGrid);
    }
    for (i, &v) in gram.values().iter().enumerate() {
        if !v.is_finite() {
            return Err(LearnError::NonFinite(i / gram.len(), i % gram.len()));
        }
    }
    let labels = binary_labels(classes)?;
    let gram = if gram.is_normalized() { gram.clone() } else { normalize_gram(gram) };
    let h = gram.spec().base.rounds();
    let per_seed = seeds
        .par_iter()
        .map(|&seed| {
            let plan = make_splits(classes.len(), seed)?;
            let cand = best(candidates(&gram, h, &labels, &plan, c_grid)?).expect("non-empty grid");
            Ok(SeedResult {
                seed,
                c: cand.selection.c,
                h,
                valid_accuracy: cand.selection.valid_accuracy,
                test_accuracy: cand.test_accuracy,
            })
        })
        .collect::<Result<Vec<_>, LearnError>>()?;
    Ok(EvalReport::from_results(*gram.spec(), per_seed))
}

/// Extracts features for `spec` and runs the protocol with the default h grid.
pub fn run_experiment(
    dataset: &[LabeledDigraph],
    classes: &[i64],
    spec: &KernelSpec,
    seeds: &[u64],
    c_grid: &[f64],
) -> Result<EvalReport, LearnError> {
    binary_labels(classes)?;
    let features = KernelFeatures::extract(dataset, spec)?;
    run_with_features(&features, classes, seeds, c_grid, &DEFAULT_H_GRID)
}
