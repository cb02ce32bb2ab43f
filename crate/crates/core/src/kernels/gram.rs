use std::borrow::Borrow;

use rayon::prelude::*;

use super::features::{FeatureDictionary, FeatureVector};
use super::graphlet::gr_features;
use super::sp::sp_features_many;
use super::wl::wl_blocks;
use super::{prepare, AddendScaling, BaseKernel, KernelSpec};
use crate::error::KernelError;
use crate::graph::LabeledDigraph;

/// Symmetric matrix of pairwise kernel values, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    n: usize,
    values: Vec<f64>,
    normalized: bool,
    spec: KernelSpec,
}

impl GramMatrix {
    /// Wraps row-major values; fails unless `values.len() == n * n`.
    pub fn from_values(n: usize, values: Vec<f64>, normalized: bool, spec: KernelSpec) -> Result<Self, KernelError> {
        if values.len() != n * n {
            return Err(KernelError::Spec(format!(
                "{} values cannot form a {n}x{n} matrix",
                values.len()
            )));
        }
        Ok(GramMatrix {
            n,
            values,
            normalized,
            spec,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Entry-wise sum with another matrix of the same size.
    pub fn add(&self, other: &GramMatrix) -> GramMatrix {
        GramMatrix {
            n: self.n,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
            normalized: false,
            spec: self.spec,
        }
    }

    /// Multiplies every entry by `factor`.
    pub fn scaled(&self, factor: f64) -> GramMatrix {
        GramMatrix {
            values: self.values.iter().map(|v| v * factor).collect(),
            normalized: false,
            ..self.clone()
        }
    }

    /// `rows x cols` block, row-major.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Vec<f64> {
        let mut out = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            let r = self.row(i);
            out.extend(cols.iter().map(|&j| r[j]));
        }
        out
    }
}

/// `M[i][j] / sqrt(M[i][i] * M[j][j])`; rows and columns with a zero
/// diagonal become zero.
pub fn normalize_gram(m: &GramMatrix) -> GramMatrix {
    let n = m.n;
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
    let mut values = vec![0.0; n * n];
    values
        .par_chunks_mut(n.max(1))
        .enumerate()
        .for_each(|(i, row)| {
            for (j, slot) in row.iter_mut().enumerate() {
                let d = diag[i] * diag[j];
                *slot = if diag[i] > 0.0 && diag[j] > 0.0 {
                    if i == j {
                        1.0
                    } else {
                        m.get(i, j) / d.sqrt()
                    }
                } else {
                    0.0
                };
            }
        });
    GramMatrix {
        n,
        values,
        normalized: true,
        spec: m.spec,
    }
}

/// Per-graph features of one addend: one block per WL round, or a single
/// block for the other kernels.
#[derive(Debug, Clone)]
struct FeatureTable {
    base: BaseKernel,
    blocks: Vec<Vec<FeatureVector>>,
}

impl FeatureTable {
    fn extract<G: Borrow<LabeledDigraph> + Sync>(
        graphs: &[G],
        spec: &KernelSpec,
        variant: super::Variant,
    ) -> Result<Self, KernelError> {
        let prepared: Vec<_> = graphs
            .par_iter()
            .enumerate()
            .map(|(index, g)| {
                prepare(g.borrow(), variant)
                    .map(|c| c.into_owned())
                    .map_err(|source| KernelError::Graph { index, source })
            })
            .collect::<Result<_, _>>()?;
        let refs: Vec<&LabeledDigraph> = prepared.iter().collect();
        let mut dict = FeatureDictionary::new();
        let blocks = match spec.base {
            BaseKernel::Wl { h } | BaseKernel::Wloa { h } => wl_blocks(&refs, h, &mut dict),
            BaseKernel::ShortestPath => sp_features_many(&refs, &mut dict)
                .into_iter()
                .map(|f| vec![f])
                .collect(),
            BaseKernel::Graphlet => refs.iter().map(|g| vec![gr_features(g, &mut dict)]).collect(),
        };
        Ok(FeatureTable {
            base: spec.base,
            blocks,
        })
    }

    fn pair(&self, i: usize, j: usize, h: usize) -> u128 {
        let (a, b) = (&self.blocks[i], &self.blocks[j]);
        match self.base {
            BaseKernel::Wl { .. } => (0..=h).map(|t| a[t].dot(&b[t]).expect("shared dictionary")).sum(),
            BaseKernel::Wloa { .. } => (0..=h)
                .map(|t| a[t].intersection(&b[t]).expect("shared dictionary"))
                .sum(),
            _ => a[0].dot(&b[0]).expect("shared dictionary"),
        }
    }

    fn gram(&self, h: usize, spec: KernelSpec) -> GramMatrix {
        let n = self.blocks.len();
        let upper: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| (i..n).map(|j| self.pair(i, j, h) as f64).collect())
            .collect();
        let mut values = vec![0.0; n * n];
        for (i, row) in upper.iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                let j = i + k;
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        GramMatrix {
            n,
            values,
            normalized: false,
            spec,
        }
    }
}

/// Features of a dataset under a kernel spec, computed once; Gram matrices
/// for any number of WL rounds up to the extracted maximum can be derived from them.
#[derive(Debug, Clone)]
pub struct KernelFeatures {
    spec: KernelSpec,
    primary: FeatureTable,
    // variant addend of an extended kernel
    secondary: Option<FeatureTable>,
}

impl KernelFeatures {
    pub fn extract<G: Borrow<LabeledDigraph> + Sync>(graphs: &[G], spec: &KernelSpec) -> Result<Self, KernelError> {
        if graphs.is_empty() {
            return Err(KernelError::EmptyDataset);
        }
        if spec.extended {
            Ok(KernelFeatures {
                spec: *spec,
                primary: FeatureTable::extract(graphs, spec, super::Variant::Plain)?,
                secondary: Some(FeatureTable::extract(graphs, spec, spec.variant)?),
            })
        } else {
            Ok(KernelFeatures {
                spec: *spec,
                primary: FeatureTable::extract(graphs, spec, spec.variant)?,
                secondary: None,
            })
        }
    }

    pub fn len(&self) -> usize {
        self.primary.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    /// Largest round count a Gram matrix can be derived for.
    pub fn max_rounds(&self) -> usize {
        self.spec.base.rounds().unwrap_or(0)
    }

    /// Unnormalized Gram matrix for `h` rounds (ignored by non-WL kernels).
    ///
    /// # Panics
    /// If `h` exceeds [`KernelFeatures::max_rounds`] for a WL kernel.
    pub fn gram(&self, h: usize) -> GramMatrix {
        let spec = self.spec.with_rounds(h);
        if self.spec.base.rounds().is_some() {
            assert!(h <= self.max_rounds(), "h={h} exceeds extracted rounds");
        }
        let first = self.primary.gram(h, spec);
        match &self.secondary {
            None => first,
            Some(second) => {
                let second = second.gram(h, spec);
                match spec.scaling {
                    AddendScaling::PerAddend => normalize_gram(&first).add(&normalize_gram(&second)),
                    AddendScaling::RawSum => first.add(&second),
                }
            }
        }
    }
}

/// Gram matrix of `spec` over a dataset (unnormalized).
pub fn gram_matrix<G: Borrow<LabeledDigraph> + Sync>(dataset: &[G], spec: &KernelSpec) -> Result<GramMatrix, KernelError> {
    let feats = KernelFeatures::extract(dataset, spec)?;
    Ok(feats.gram(spec.base.rounds().unwrap_or(0)))
}
