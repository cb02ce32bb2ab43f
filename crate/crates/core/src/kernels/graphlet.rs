//! Exact size-3 graphlet counts on the underlying undirected simple graph.

use std::collections::BTreeSet;

use super::features::{FeatureDictionary, FeatureKey, FeatureVector};
use crate::graph::LabeledDigraph;

/// Induced 3-vertex subgraph counts: `[no edge, one edge, two-edge path, triangle]`.
pub fn graphlet_counts(g: &LabeledDigraph) -> [u64; 4] {
    let n = g.vertex_count();
    let mut nbrs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for e in g.edges() {
        let s = g.index_of(e.src).expect("valid graph");
        let d = g.index_of(e.dst).expect("valid graph");
        nbrs[s].insert(d);
        nbrs[d].insert(s);
    }
    let m: u64 = nbrs.iter().map(|s| s.len() as u64).sum::<u64>() / 2;
    let mut triangles = 0u64;
    for u in 0..n {
        for &v in nbrs[u].range(u + 1..) {
            triangles += nbrs[u]
                .range(v + 1..)
                .filter(|w| nbrs[v].contains(w))
                .count() as u64;
        }
    }
    // pairs of edges sharing an endpoint: each path once, each triangle three times
    let wedges: u64 = nbrs
        .iter()
        .map(|s| {
            let d = s.len() as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    let paths = wedges - 3 * triangles;
    // each edge sits in n - 2 triples
    let incidences = m * (n as u64).saturating_sub(2);
    let single = incidences - 2 * paths - 3 * triangles;
    let n = n as u64;
    let triples = if n < 3 { 0 } else { n * (n - 1) * (n - 2) / 6 };
    let empty = triples - single - paths - triangles;
    [empty, single, paths, triangles]
}

pub fn gr_features(g: &LabeledDigraph, dict: &mut FeatureDictionary) -> FeatureVector {
    let counts = graphlet_counts(g);
    let entries = (0..4u8)
        .map(|t| (dict.intern(FeatureKey::Graphlet(t)), counts[t as usize]))
        .collect();
    FeatureVector::from_entries(dict.id(), entries)
}

/// Graphlet kernel: dot product of graphlet count vectors.
pub fn gr_kernel(g1: &LabeledDigraph, g2: &LabeledDigraph) -> f64 {
    let mut dict = FeatureDictionary::new();
    let a = gr_features(g1, &mut dict);
    let b = gr_features(g2, &mut dict);
    a.dot(&b).expect("shared dictionary") as f64
}
