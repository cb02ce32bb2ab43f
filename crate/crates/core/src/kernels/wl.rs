//! Directed Weisfeiler-Lehman color refinement.
//!
//! Round 0 colors a vertex by its label set. Round `t + 1` colors it by its
//! round-`t` color together with the sorted multisets of `(edge labels,
//! neighbor color)` over in-neighbors and over out-neighbors. Colors are
//! interned in graph order and vertex order, so ids are deterministic for a
//! given input sequence regardless of thread count.

use rayon::prelude::*;

use super::features::{FeatureDictionary, FeatureKey, FeatureVector};
use crate::error::KernelError;
use crate::graph::LabeledDigraph;

/// Color histograms for rounds `0..=h`, one block per round, for each graph.
pub fn wl_blocks(
    graphs: &[&LabeledDigraph],
    h: usize,
    dict: &mut FeatureDictionary,
) -> Vec<Vec<FeatureVector>> {
    let dict_id = dict.id();
    let mut colors: Vec<Vec<u32>> = graphs
        .iter()
        .map(|g| {
            g.vertices()
                .iter()
                .map(|v| dict.intern(FeatureKey::WlInitial(v.labels.clone())))
                .collect()
        })
        .collect();
    let mut blocks: Vec<Vec<FeatureVector>> = colors
        .iter()
        .map(|c| vec![FeatureVector::tally(dict_id, c.iter().copied())])
        .collect();

    let adjacency: Vec<_> = graphs.par_iter().map(|g| g.adjacency()).collect();
    for round in 1..=h {
        let keys: Vec<Vec<FeatureKey>> = graphs
            .par_iter()
            .zip(adjacency.par_iter())
            .zip(colors.par_iter())
            .map(|((g, adj), col)| {
                let edges = g.edges();
                (0..g.vertex_count())
                    .map(|v| {
                        let mut incoming: Vec<_> = adj.inc[v]
                            .iter()
                            .map(|&(u, e)| (edges[e].labels.clone(), col[u]))
                            .collect();
                        let mut outgoing: Vec<_> = adj.out[v]
                            .iter()
                            .map(|&(u, e)| (edges[e].labels.clone(), col[u]))
                            .collect();
                        incoming.sort_unstable();
                        outgoing.sort_unstable();
                        FeatureKey::WlRefined {
                            round: round as u32,
                            own: col[v],
                            incoming,
                            outgoing,
                        }
                    })
                    .collect()
            })
            .collect();
        for ((graph_keys, col), block) in keys.into_iter().zip(colors.iter_mut()).zip(blocks.iter_mut()) {
            *col = graph_keys.into_iter().map(|k| dict.intern(k)).collect();
            block.push(FeatureVector::tally(dict_id, col.iter().copied()));
        }
    }
    blocks
}

/// Concatenated color histograms of rounds `0..=h`.
pub fn wl_features(g: &LabeledDigraph, h: usize, dict: &mut FeatureDictionary) -> FeatureVector {
    let blocks = wl_blocks(&[g], h, dict);
    FeatureVector::concat(&blocks[0])
}

/// Subtree kernel value: the dot product of WL feature vectors.
pub fn wl_kernel(f1: &FeatureVector, f2: &FeatureVector) -> Result<f64, KernelError> {
    super::features::dot_kernel(f1, f2)
}

/// Optimal-assignment kernel: histogram intersection summed over rounds `0..=h`.
pub fn wloa_kernel(g1: &LabeledDigraph, g2: &LabeledDigraph, h: usize) -> f64 {
    let mut dict = FeatureDictionary::new();
    let blocks = wl_blocks(&[g1, g2], h, &mut dict);
    blocks[0]
        .iter()
        .zip(&blocks[1])
        .map(|(a, b)| a.intersection(b).expect("shared dictionary"))
        .sum::<u128>() as f64
}
