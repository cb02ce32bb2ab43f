//! Shortest-path kernel on directed, unweighted distances.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;

use super::features::{FeatureDictionary, FeatureKey, FeatureVector};
use crate::graph::{LabelSet, LabeledDigraph};

/// Counts `(from labels, to labels, distance)` over every ordered pair of
/// distinct vertices with a finite directed distance.
fn sp_keys(g: &LabeledDigraph) -> Vec<(FeatureKey, u64)> {
    let n = g.vertex_count();
    let adj = g.adjacency();
    // dense class per distinct label set, so the BFS loop never clones labels
    let mut classes: Vec<&LabelSet> = g.vertices().iter().map(|v| &v.labels).collect();
    classes.sort();
    classes.dedup();
    let class_of: Vec<usize> = g
        .vertices()
        .iter()
        .map(|v| classes.binary_search(&&v.labels).expect("present"))
        .collect();

    let mut counts: HashMap<(usize, usize, u32), u64> = HashMap::new();
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        dist.fill(u32::MAX);
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &(u, _) in &adj.out[v] {
                if dist[u] == u32::MAX {
                    dist[u] = dist[v] + 1;
                    *counts.entry((class_of[s], class_of[u], dist[u])).or_default() += 1;
                    queue.push_back(u);
                }
            }
        }
    }
    let mut keys: Vec<_> = counts
        .into_iter()
        .map(|((a, b, d), c)| {
            (
                FeatureKey::ShortestPath {
                    from: classes[a].clone(),
                    to: classes[b].clone(),
                    distance: d,
                },
                c,
            )
        })
        .collect();
    // deterministic interning order
    keys.sort_by(|a, b| sp_order(&a.0).cmp(&sp_order(&b.0)));
    keys
}

fn sp_order(k: &FeatureKey) -> (u32, &LabelSet, &LabelSet) {
    match k {
        FeatureKey::ShortestPath { from, to, distance } => (*distance, from, to),
        _ => unreachable!("only shortest-path keys"),
    }
}

/// Shortest-path feature vectors for a sequence of graphs.
pub fn sp_features_many(graphs: &[&LabeledDigraph], dict: &mut FeatureDictionary) -> Vec<FeatureVector> {
    let keyed: Vec<_> = graphs.par_iter().map(|g| sp_keys(g)).collect();
    keyed
        .into_iter()
        .map(|keys| {
            let entries = keys.into_iter().map(|(k, c)| (dict.intern(k), c)).collect();
            FeatureVector::from_entries(dict.id(), entries)
        })
        .collect()
}

pub fn sp_features(g: &LabeledDigraph, dict: &mut FeatureDictionary) -> FeatureVector {
    sp_features_many(&[g], dict).pop().expect("one graph")
}

/// Shortest-path kernel between two graphs.
pub fn sp_kernel(g1: &LabeledDigraph, g2: &LabeledDigraph) -> f64 {
    let mut dict = FeatureDictionary::new();
    let f = sp_features_many(&[g1, g2], &mut dict);
    f[0].dot(&f[1]).expect("shared dictionary") as f64
}
