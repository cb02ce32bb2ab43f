//! Seeded random graphs and the structural property checks run by the
//! `selftest` command and the integration suites.

use std::collections::BTreeMap;

use crate::graph::{GraphBuilder, Id, Label, LabelSet, LabeledDigraph};
use crate::iso::{is_isomorphic, is_witness};
use crate::rng::SplitMix64;
use crate::transform::{
    augment_dummy, edge_to_vertex, inverse_edge_to_vertex, line_graph, transform_stats,
    vertex_copies, TransformStats,
};

/// Shape of the random weakly connected digraphs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphSampler {
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// Largest vertex and edge alphabet; each graph draws its own size in `1..=max_alphabet`.
    pub max_alphabet: u32,
    /// Upper bound on the probability of each extra edge beyond the spanning tree.
    pub max_density: f64,
}

impl Default for GraphSampler {
    fn default() -> Self {
        GraphSampler {
            min_vertices: 2,
            max_vertices: 10,
            max_alphabet: 4,
            max_density: 0.35,
        }
    }
}

impl GraphSampler {
    /// A weakly connected digraph without isolated vertices. Vertex and edge
    /// ids are sparse and shuffled; labels start at [`Label::FIRST_FREE`].
    pub fn sample(&self, rng: &mut SplitMix64) -> LabeledDigraph {
        let n = rng.range(self.min_vertices as u64, self.max_vertices as u64) as usize;
        let vertex_alphabet = rng.range(1, self.max_alphabet as u64) as u32;
        let edge_alphabet = rng.range(1, self.max_alphabet as u64) as u32;
        let density = rng.unit() * self.max_density;

        let mut ids: Vec<Id> = (0..3 * n as Id).collect();
        rng.shuffle(&mut ids);
        let ids = &ids[..n];

        let mut present = vec![vec![false; n]; n];
        let mut pairs = Vec::new();
        for i in 1..n {
            let j = rng.below(i as u64) as usize;
            let (s, d) = if rng.chance(0.5) { (i, j) } else { (j, i) };
            present[s][d] = true;
            pairs.push((s, d));
        }
        for s in 0..n {
            for d in 0..n {
                if s != d && !present[s][d] && rng.chance(density) {
                    present[s][d] = true;
                    pairs.push((s, d));
                }
            }
        }
        let mut edge_ids: Vec<Id> = (0..3 * pairs.len() as Id).collect();
        rng.shuffle(&mut edge_ids);

        let pick = |alphabet: u32, rng: &mut SplitMix64| -> LabelSet {
            let first = Label(Label::FIRST_FREE + rng.below(alphabet as u64) as u32);
            if rng.chance(0.2) {
                let second = Label(Label::FIRST_FREE + rng.below(alphabet as u64) as u32);
                LabelSet::new([first, second])
            } else {
                LabelSet::single(first)
            }
        };
        let mut b = GraphBuilder::new();
        for &id in ids {
            let l = pick(vertex_alphabet, rng);
            b.vertex(id, l);
        }
        for (k, &(s, d)) in pairs.iter().enumerate() {
            let l = if rng.chance(0.1) {
                LabelSet::empty()
            } else {
                // edge labels live above the vertex alphabet
                LabelSet::new(pick(edge_alphabet, rng).iter().map(|l| Label(l.0 + self.max_alphabet)))
            };
            b.edge(edge_ids[k], ids[s], ids[d], l);
        }
        b.build().expect("sampled graph is valid")
    }
}

/// `count` graphs from one SplitMix64 stream.
pub fn random_graphs(count: usize, seed: u64, sampler: &GraphSampler) -> Vec<LabeledDigraph> {
    let mut rng = SplitMix64::new(seed);
    (0..count).map(|_| sampler.sample(&mut rng)).collect()
}

/// Uniformly random bijection of the vertex ids of `g` onto themselves.
pub fn random_permutation(g: &LabeledDigraph, rng: &mut SplitMix64) -> BTreeMap<Id, Id> {
    let ids: Vec<Id> = g.vertices().iter().map(|v| v.id).collect();
    let mut image = ids.clone();
    rng.shuffle(&mut image);
    ids.into_iter().zip(image).collect()
}

/// The four directed 3-claws: center 0, leaves 1..=3. Leaves listed in
/// `inward` point at the center; the others are pointed at.
pub fn claw(inward: usize, center: Label, leaf: Label, edge: Label) -> LabeledDigraph {
    let mut b = GraphBuilder::new();
    b.vertex(0, LabelSet::single(center));
    for i in 1..=3u32 {
        b.vertex(i, LabelSet::single(leaf));
        if (i as usize) <= inward {
            b.edge(i - 1, i, 0, LabelSet::single(edge));
        } else {
            b.edge(i - 1, 0, i, LabelSet::single(edge));
        }
    }
    b.build().expect("claw is valid")
}

/// Claws with 1, 0, 2 and 3 inward leaves, in figure order (a) to (d).
pub fn claw_variants() -> Vec<LabeledDigraph> {
    let (c, l, e) = (Label(2), Label(3), Label(4));
    [1, 0, 2, 3].iter().map(|&k| claw(k, c, l, e)).collect()
}

/// Pairs whose plain line graphs coincide while their edge-to-vertex images
/// do not: two single-edge graphs with different vertex labels, and the
/// out-claw against the in-claw.
pub fn line_graph_witnesses() -> Vec<(LabeledDigraph, LabeledDigraph)> {
    let edge = |a: u32, b: u32| {
        let mut g = GraphBuilder::new();
        g.vertex(0, LabelSet::single(Label(a))).vertex(1, LabelSet::single(Label(b)));
        g.edge(0, 0, 1, LabelSet::single(Label(9)));
        g.build().expect("valid")
    };
    let (c, l, e) = (Label(2), Label(3), Label(4));
    vec![
        (edge(5, 6), edge(7, 8)),
        (claw(0, c, l, e), claw(3, c, l, e)),
    ]
}

pub fn check_round_trip(g: &LabeledDigraph) -> Result<(), String> {
    let h = edge_to_vertex(g).map_err(|e| format!("transform: {e}"))?;
    let back = inverse_edge_to_vertex(&h).map_err(|e| format!("inverse: {e}"))?;
    if &back != g {
        return Err("inverse image differs from the input".into());
    }
    Ok(())
}

pub fn check_sizes(g: &LabeledDigraph) -> Result<TransformStats, String> {
    transform_stats(g).map_err(|e| e.to_string())
}

/// Each vertex label set appears `(d- + 1)(d+ + 1)` times on edges of the
/// augmented line graph and `d- d+ + d- + d+` times on the transformed graph.
pub fn check_copy_counts(g: &LabeledDigraph) -> Result<(), String> {
    let hphi = augment_dummy(g)
        .and_then(|a| line_graph(&a))
        .map_err(|e| e.to_string())?;
    let big = edge_to_vertex(g).map_err(|e| e.to_string())?;
    for (v, d) in g.vertices().iter().zip(g.degree_profiles()) {
        let (i, o) = (d.indegree, d.outdegree);
        let got = vertex_copies(&hphi, v.id, &v.labels);
        if got != (i + 1) * (o + 1) {
            return Err(format!("vertex {}: {got} copies in the augmented line graph", v.id));
        }
        let got = vertex_copies(&big, v.id, &v.labels);
        if got != i * o + i + o {
            return Err(format!("vertex {}: {got} copies in the transformed graph", v.id));
        }
    }
    Ok(())
}

/// Transforms of `g` and of `g` relabeled by `pi` must be isomorphic.
pub fn check_isomorphism(g: &LabeledDigraph, pi: &BTreeMap<Id, Id>) -> Result<(), String> {
    let moved = g.permute(pi).map_err(|e| e.to_string())?;
    let f = is_isomorphic(g, &moved).map_err(|e| e.to_string())?;
    if !f.is_some_and(|f| is_witness(g, &moved, &f)) {
        return Err("permuted input not recognized as isomorphic".into());
    }
    let a = edge_to_vertex(g).map_err(|e| e.to_string())?;
    let b = edge_to_vertex(&moved).map_err(|e| e.to_string())?;
    match is_isomorphic(&a, &b).map_err(|e| e.to_string())? {
        Some(f) if is_witness(&a, &b, &f) => Ok(()),
        _ => Err("transformed graphs are not isomorphic".into()),
    }
}

/// Pass/fail tally of one property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: usize,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        CheckOutcome {
            name,
            passed: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, case: usize, r: Result<(), String>) {
        match r {
            Ok(()) => self.passed += 1,
            Err(e) => self.failures.push(format!("case {case}: {e}")),
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs round trip, size, copy-count and isomorphism checks on `count`
/// random graphs plus the claw variants. Isomorphism uses graphs of at most
/// 8 vertices.
pub fn run_selftest(count: usize, seed: u64) -> Vec<CheckOutcome> {
    let mut graphs = random_graphs(count, seed, &GraphSampler::default());
    graphs.extend(claw_variants());
    let mut round = CheckOutcome::new("round-trip");
    let mut sizes = CheckOutcome::new("size-formulas");
    let mut copies = CheckOutcome::new("copy-counts");
    for (k, g) in graphs.iter().enumerate() {
        round.record(k, check_round_trip(g));
        sizes.record(k, check_sizes(g).map(|_| ()));
        copies.record(k, check_copy_counts(g));
    }
    let mut iso = CheckOutcome::new("isomorphism");
    let small = GraphSampler {
        max_vertices: 8,
        ..GraphSampler::default()
    };
    let mut rng = SplitMix64::new(seed ^ 0x5EED);
    for k in 0..count.min(200) {
        let g = small.sample(&mut rng);
        let pi = random_permutation(&g, &mut rng);
        iso.record(k, check_isomorphism(&g, &pi));
    }
    vec![round, sizes, copies, iso]
}
