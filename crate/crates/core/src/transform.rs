//! Dummy augmentation, line graphs, and the lossless edge-to-vertex transform
//! with its inverse.
//!
//! The transform `e2v` maps a graph `G` with `m` edges to a graph `H` with one
//! vertex per edge of `G` plus a single dummy vertex. Edges of `H` carry the id
//! and label set of the `G` vertex they pass through, which is what makes the
//! inverse exact.

use std::collections::{BTreeMap, HashMap};

use log::warn;

use crate::error::TransformError;
use crate::graph::{
    Edge, GraphParts, Id, Label, LabelSet, LabeledDigraph, Vertex,
};

fn dummy_vertex_labels() -> LabelSet {
    LabelSet::single(Label::DUMMY_VERTEX)
}

fn dummy_edge_labels() -> LabelSet {
    LabelSet::single(Label::DUMMY_EDGE)
}

fn next_edge_id(g: &LabeledDigraph) -> Id {
    g.edges().iter().map(|e| e.id + 1).max().unwrap_or(0)
}

/// Adds a dummy vertex joined to every vertex by a pair of opposite dummy edges.
///
/// The dummy gets the next free vertex id. Dummy edges get fresh ids above all
/// existing edge ids: `(v, dummy)` then `(dummy, v)` for each `v` in id order.
pub fn augment_dummy(g: &LabeledDigraph) -> Result<LabeledDigraph, TransformError> {
    if let Some(d) = g.dummy_vertex() {
        return Err(TransformError::DummyPresent(d));
    }
    let phi = g.next_vertex_id();
    let mut next = next_edge_id(g);
    let mut parts = g.to_parts();
    for v in g.vertices() {
        for (src, dst) in [(v.id, phi), (phi, v.id)] {
            parts.edges.push(Edge {
                id: next,
                src,
                dst,
                labels: dummy_edge_labels(),
            });
            next += 1;
        }
    }
    parts.vertices.push(Vertex {
        id: phi,
        labels: dummy_vertex_labels(),
    });
    Ok(LabeledDigraph::from_parts_unchecked(parts))
}

/// Classical directed line graph.
///
/// Vertex `e.id` per input edge `e`, labeled with `e`'s labels; an edge
/// `d -> e` whenever `d` ends where `e` starts, carrying the id and labels of
/// that shared vertex. Input edge ids must be distinct.
pub fn line_graph(g: &LabeledDigraph) -> Result<LabeledDigraph, TransformError> {
    let mut seen = HashMap::with_capacity(g.edge_count());
    for e in g.edges() {
        if seen.insert(e.id, ()).is_some() {
            return Err(TransformError::DuplicateEdgeId(e.id));
        }
    }
    let adj = g.adjacency();
    let edges = g.edges();
    let mut parts = GraphParts {
        vertices: edges
            .iter()
            .map(|e| Vertex {
                id: e.id,
                labels: e.labels.clone(),
            })
            .collect(),
        edges: Vec::new(),
    };
    for (x, vx) in g.vertices().iter().enumerate() {
        for &(_, d) in &adj.inc[x] {
            for &(_, e) in &adj.out[x] {
                parts.edges.push(Edge {
                    id: vx.id,
                    src: edges[d].id,
                    dst: edges[e].id,
                    labels: vx.labels.clone(),
                });
            }
        }
    }
    Ok(LabeledDigraph::from_parts_unchecked(parts))
}

fn check_e2v_input(g: &LabeledDigraph) -> Result<(), TransformError> {
    if g.edge_count() == 0 {
        return Err(TransformError::EmptyEdgeSet);
    }
    if let Some(d) = g.dummy_vertex() {
        return Err(TransformError::DummyPresent(d));
    }
    if let Some(&v) = g.isolated_vertices().first() {
        return Err(TransformError::IsolatedVertex(v));
    }
    Ok(())
}

/// Id given to the merged dummy of an edge-to-vertex image.
fn transformed_dummy_id(g: &LabeledDigraph) -> Id {
    next_edge_id(g)
}

/// The lossless edge-to-vertex transform.
///
/// Requires at least one edge, no dummy vertex, and no isolated vertices.
pub fn edge_to_vertex(g: &LabeledDigraph) -> Result<LabeledDigraph, TransformError> {
    check_e2v_input(g)?;
    Ok(edge_to_vertex_unchecked(g))
}

/// Applies the transform without the isolation and emptiness checks.
///
/// Isolated vertices have no edge to carry them and vanish from the image,
/// which is exactly what the stepwise construction does to them. A graph
/// without edges maps to the lone dummy vertex.
pub fn edge_to_vertex_lossy(g: &LabeledDigraph) -> Result<LabeledDigraph, TransformError> {
    if let Some(d) = g.dummy_vertex() {
        return Err(TransformError::DummyPresent(d));
    }
    if g.edge_count() == 0 {
        warn!("edge-to-vertex image of an edgeless graph is a lone dummy vertex");
    }
    Ok(edge_to_vertex_unchecked(g))
}

// Direct construction: line graph edges plus, per original edge (u, v), the
// pair dummy -> e (through u) and e -> dummy (through v).
fn edge_to_vertex_unchecked(g: &LabeledDigraph) -> LabeledDigraph {
    let dummy = transformed_dummy_id(g);
    let adj = g.adjacency();
    let edges = g.edges();
    let verts = g.vertices();
    let mut parts = GraphParts {
        vertices: Vec::with_capacity(edges.len() + 1),
        edges: Vec::new(),
    };
    parts.vertices.push(Vertex {
        id: dummy,
        labels: dummy_vertex_labels(),
    });
    for e in edges {
        parts.vertices.push(Vertex {
            id: e.id,
            labels: e.labels.clone(),
        });
        let src = &verts[g.index_of(e.src).expect("valid graph")];
        let dst = &verts[g.index_of(e.dst).expect("valid graph")];
        parts.edges.push(Edge {
            id: src.id,
            src: dummy,
            dst: e.id,
            labels: src.labels.clone(),
        });
        parts.edges.push(Edge {
            id: dst.id,
            src: e.id,
            dst: dummy,
            labels: dst.labels.clone(),
        });
    }
    for (x, vx) in verts.iter().enumerate() {
        for &(_, d) in &adj.inc[x] {
            for &(_, e) in &adj.out[x] {
                parts.edges.push(Edge {
                    id: vx.id,
                    src: edges[d].id,
                    dst: edges[e].id,
                    labels: vx.labels.clone(),
                });
            }
        }
    }
    LabeledDigraph::from_parts_unchecked(parts)
}

/// Intermediate graphs of the stepwise edge-to-vertex construction.
#[derive(Debug, Clone)]
pub struct EdgeToVertexTrace {
    /// `G` with the dummy vertex and dummy edges added.
    pub augmented: LabeledDigraph,
    /// Line graph of `augmented`.
    pub augmented_line: LabeledDigraph,
    /// Final image after pruning dummy-to-dummy edges and merging the dummy-edge vertices.
    pub image: LabeledDigraph,
}

/// Stepwise construction: augment, take the line graph, then prune.
///
/// Edges between two dummy-edge vertices are dropped; edges with exactly one
/// dummy-edge endpoint are redirected to a single merged dummy, keeping their
/// id and labels; dummy-edge vertices are then removed.
pub fn edge_to_vertex_traced(g: &LabeledDigraph) -> Result<EdgeToVertexTrace, TransformError> {
    check_e2v_input(g)?;
    let augmented = augment_dummy(g)?;
    let augmented_line = line_graph(&augmented)?;
    let dummy = transformed_dummy_id(g);
    let is_dummy_edge = |id: Id| {
        augmented_line
            .vertex(id)
            .is_some_and(|v| v.labels.contains(Label::DUMMY_EDGE))
    };

    let mut parts = GraphParts::default();
    for e in augmented_line.edges() {
        match (is_dummy_edge(e.src), is_dummy_edge(e.dst)) {
            (true, true) => {}
            (true, false) => parts.edges.push(Edge {
                src: dummy,
                ..e.clone()
            }),
            (false, true) => parts.edges.push(Edge {
                dst: dummy,
                ..e.clone()
            }),
            (false, false) => parts.edges.push(e.clone()),
        }
    }
    parts.vertices.push(Vertex {
        id: dummy,
        labels: dummy_vertex_labels(),
    });
    parts.vertices.extend(
        augmented_line
            .vertices()
            .iter()
            .filter(|v| !v.labels.contains(Label::DUMMY_EDGE))
            .cloned(),
    );
    let image = LabeledDigraph::from_parts(parts)
        .map_err(|e| TransformError::Malformed(e.to_string()))?;
    Ok(EdgeToVertexTrace {
        augmented,
        augmented_line,
        image,
    })
}

/// Inverts [`edge_to_vertex`] exactly.
///
/// Takes the line graph of `h` (one provisional vertex per `h` edge, carrying
/// that edge's id and labels), merges provisional vertices sharing an id onto
/// the first one encountered, redirects edges onto the representatives, drops
/// every edge that passed through the dummy, and merges what remains.
pub fn inverse_edge_to_vertex(h: &LabeledDigraph) -> Result<LabeledDigraph, TransformError> {
    let dummies = h
        .vertices()
        .iter()
        .filter(|v| v.labels.contains(Label::DUMMY_VERTEX))
        .count();
    if dummies != 1 {
        return Err(TransformError::DummyCount(dummies));
    }

    // Step 1: line graph of h, where provisional vertex k is h edge k.
    let adj = h.adjacency();
    let h_edges = h.edges();
    struct Link<'a> {
        src: usize,
        dst: usize,
        id: Id,
        labels: &'a LabelSet,
    }
    let mut links = Vec::new();
    for (x, vx) in h.vertices().iter().enumerate() {
        for &(_, a) in &adj.inc[x] {
            for &(_, b) in &adj.out[x] {
                links.push(Link {
                    src: a,
                    dst: b,
                    id: vx.id,
                    labels: &vx.labels,
                });
            }
        }
    }
    links.sort_by_key(|l| (h_edges[l.src].id, h_edges[l.dst].id, l.src, l.dst));

    // Step 2: the first provisional vertex seen with a given id represents it.
    let mut rep: BTreeMap<Id, usize> = BTreeMap::new();
    let mut rewired: Vec<(Id, Id, Id, &LabelSet)> = Vec::with_capacity(links.len());
    for l in &links {
        let u = *rep.entry(h_edges[l.src].id).or_insert(l.src);
        let v = *rep.entry(h_edges[l.dst].id).or_insert(l.dst);
        rewired.push((h_edges[u].id, h_edges[v].id, l.id, l.labels));
    }
    for (k, e) in h_edges.iter().enumerate() {
        rep.entry(e.id).or_insert(k);
    }
    for e in h_edges {
        if e.labels != h_edges[rep[&e.id]].labels {
            return Err(TransformError::InconsistentLabels(e.id));
        }
    }

    // Step 3: drop edges routed through the dummy, then merge parallel copies.
    let mut merged: BTreeMap<(Id, Id), (Id, LabelSet)> = BTreeMap::new();
    for (src, dst, id, labels) in rewired {
        if labels.contains(Label::DUMMY_VERTEX) {
            continue;
        }
        match merged.get_mut(&(src, dst)) {
            Some((prev, l)) => {
                if *prev != id {
                    return Err(TransformError::Malformed(format!(
                        "edge ({src}, {dst}) recovered with ids {prev} and {id}"
                    )));
                }
                *l = l.union(labels);
            }
            None => {
                merged.insert((src, dst), (id, labels.clone()));
            }
        }
    }
    let parts = GraphParts {
        vertices: rep
            .iter()
            .map(|(&id, &k)| Vertex {
                id,
                labels: h_edges[k].labels.clone(),
            })
            .collect(),
        edges: merged
            .into_iter()
            .map(|((src, dst), (id, labels))| Edge {
                id,
                src,
                dst,
                labels,
            })
            .collect(),
    };
    LabeledDigraph::from_parts(parts).map_err(|e| TransformError::Malformed(e.to_string()))
}

/// Vertex and edge counts of a graph and its derived graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TransformStats {
    pub n: usize,
    pub m: usize,
    /// Augmented graph.
    pub v_g_phi: usize,
    pub e_g_phi: usize,
    /// Line graph of the augmented graph.
    pub v_h_phi: usize,
    pub e_h_phi: usize,
    /// Edge-to-vertex image.
    pub v_h_big_phi: usize,
    pub e_h_big_phi: usize,
}

impl TransformStats {
    /// Sizes from degrees alone.
    pub fn closed_form(g: &LabeledDigraph) -> Self {
        let n = g.vertex_count();
        let m = g.edge_count();
        let degs = g.degree_profiles();
        let e_h_phi = n * n
            + degs
                .iter()
                .map(|d| (d.indegree + 1) * (d.outdegree + 1))
                .sum::<usize>();
        let e_h_big_phi = degs
            .iter()
            .map(|d| d.indegree * d.outdegree + d.indegree + d.outdegree)
            .sum();
        TransformStats {
            n,
            m,
            v_g_phi: n + 1,
            e_g_phi: m + 2 * n,
            v_h_phi: m + 2 * n,
            e_h_phi,
            v_h_big_phi: m + 1,
            e_h_big_phi,
        }
    }

    /// Sizes read off the materialized graphs.
    pub fn materialized(g: &LabeledDigraph) -> Result<Self, TransformError> {
        let gphi = augment_dummy(g)?;
        let hphi = line_graph(&gphi)?;
        let big = edge_to_vertex_lossy(g)?;
        Ok(TransformStats {
            n: g.vertex_count(),
            m: g.edge_count(),
            v_g_phi: gphi.vertex_count(),
            e_g_phi: gphi.edge_count(),
            v_h_phi: hphi.vertex_count(),
            e_h_phi: hphi.edge_count(),
            v_h_big_phi: big.vertex_count(),
            e_h_big_phi: big.edge_count(),
        })
    }
}

/// Computes sizes both ways and fails if they disagree.
pub fn transform_stats(g: &LabeledDigraph) -> Result<TransformStats, TransformError> {
    let closed = TransformStats::closed_form(g);
    let built = TransformStats::materialized(g)?;
    if closed != built {
        return Err(TransformError::Malformed(format!(
            "size formulas disagree with materialized graphs: {closed:?} vs {built:?}"
        )));
    }
    Ok(closed)
}

/// Number of edges of `h` whose provenance id is `v`, i.e. copies of the
/// original vertex `v` stored on edges.
pub fn vertex_copies(h: &LabeledDigraph, v: Id, labels: &LabelSet) -> usize {
    h.edges()
        .iter()
        .filter(|e| e.id == v && &e.labels == labels)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::iso::is_isomorphic;

    fn ls(ids: &[u32]) -> LabelSet {
        LabelSet::new(ids.iter().map(|&i| Label(i)))
    }

    // labels: a=10 b=11 c=12, edge labels A=20 B=21
    fn single_edge() -> LabeledDigraph {
        let mut b = GraphBuilder::new();
        b.vertex(0, ls(&[10])).vertex(1, ls(&[11]));
        b.edge(0, 0, 1, ls(&[20]));
        b.build().unwrap()
    }

    fn out_claw() -> LabeledDigraph {
        let mut b = GraphBuilder::new();
        b.vertex(0, ls(&[10]));
        for i in 1..=3 {
            b.vertex(i, ls(&[11]));
            b.edge(i - 1, 0, i, ls(&[20]));
        }
        b.build().unwrap()
    }

    fn in_claw() -> LabeledDigraph {
        let mut b = GraphBuilder::new();
        b.vertex(0, ls(&[10]));
        for i in 1..=3 {
            b.vertex(i, ls(&[11]));
            b.edge(i - 1, i, 0, ls(&[20]));
        }
        b.build().unwrap()
    }

    #[test]
    fn augment_sizes() {
        let mut b = GraphBuilder::new();
        b.vertex(0, ls(&[10]));
        let g = augment_dummy(&b.build().unwrap()).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 2));
        assert!(g.weakly_connected());

        let g = augment_dummy(&out_claw()).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 11));
        assert_eq!(g.dummy_vertex(), Some(4));
        for v in 0..4 {
            assert_eq!(g.edge(v, 4).unwrap().labels, dummy_edge_labels());
            assert_eq!(g.edge(4, v).unwrap().labels, dummy_edge_labels());
        }
        assert!(matches!(
            augment_dummy(&g),
            Err(TransformError::DummyPresent(4))
        ));
    }

    #[test]
    fn line_graph_examples() {
        let l = line_graph(&single_edge()).unwrap();
        assert_eq!(l.vertex_count(), 1);
        assert_eq!(l.edge_count(), 0);
        assert_eq!(l.vertex(0).unwrap().labels, ls(&[20]));

        // s -> c -> t with labels a, b, c and edges A, B
        let mut b = GraphBuilder::new();
        b.vertex(0, ls(&[10])).vertex(1, ls(&[11])).vertex(2, ls(&[12]));
        b.edge(0, 0, 1, ls(&[20])).edge(1, 1, 2, ls(&[21]));
        let l = line_graph(&b.build().unwrap()).unwrap();
        assert_eq!(l.vertex(0).unwrap().labels, ls(&[20]));
        assert_eq!(l.vertex(1).unwrap().labels, ls(&[21]));
        assert_eq!(l.edge_count(), 1);
        let e = l.edge(0, 1).unwrap();
        assert_eq!((e.id, &e.labels), (1, &ls(&[11])));

        let l = line_graph(&out_claw()).unwrap();
        assert_eq!((l.vertex_count(), l.edge_count()), (3, 0));
    }

    #[test]
    fn e2v_single_edge_by_hand() {
        let h = edge_to_vertex(&single_edge()).unwrap();
        assert_eq!(h.vertex_count(), 2);
        let dummy = h.dummy_vertex().unwrap();
        assert_eq!(dummy, 1);
        assert_eq!(h.vertex(0).unwrap().labels, ls(&[20]));
        let into = h.edge(dummy, 0).unwrap();
        assert_eq!((into.id, &into.labels), (0, &ls(&[10])));
        let out = h.edge(0, dummy).unwrap();
        assert_eq!((out.id, &out.labels), (1, &ls(&[11])));
        assert_eq!(h.edge_count(), 2);

        assert_eq!(inverse_edge_to_vertex(&h).unwrap(), single_edge());
    }

    #[test]
    fn e2v_claw() {
        let h = edge_to_vertex(&out_claw()).unwrap();
        assert_eq!((h.vertex_count(), h.edge_count()), (4, 6));
        assert_eq!(inverse_edge_to_vertex(&h).unwrap(), out_claw());
        assert_eq!(
            inverse_edge_to_vertex(&edge_to_vertex(&in_claw()).unwrap()).unwrap(),
            in_claw()
        );
    }

    #[test]
    fn e2v_rejections() {
        assert_eq!(
            edge_to_vertex(&LabeledDigraph::empty()),
            Err(TransformError::EmptyEdgeSet)
        );
        let mut b = GraphBuilder::new();
        b.vertex(0, ls(&[10])).vertex(1, ls(&[10])).vertex(2, ls(&[10]));
        b.edge(0, 0, 1, ls(&[]));
        let g = b.build().unwrap();
        assert_eq!(edge_to_vertex(&g), Err(TransformError::IsolatedVertex(2)));
        let aug = augment_dummy(&single_edge()).unwrap();
        assert_eq!(edge_to_vertex(&aug), Err(TransformError::DummyPresent(2)));

        // lossy variant drops the isolated vertex
        let lossy = edge_to_vertex_lossy(&g).unwrap();
        assert_eq!((lossy.vertex_count(), lossy.edge_count()), (2, 2));
        let lone = edge_to_vertex_lossy(&LabeledDigraph::empty()).unwrap();
        assert_eq!((lone.vertex_count(), lone.edge_count()), (1, 0));
    }

    #[test]
    fn inverse_rejects_malformed() {
        assert_eq!(
            inverse_edge_to_vertex(&single_edge()),
            Err(TransformError::DummyCount(0))
        );
        // two edges claim vertex 0 with different labels
        let mut b = GraphBuilder::new();
        b.vertex(9, dummy_vertex_labels()).vertex(0, ls(&[20])).vertex(1, ls(&[20]));
        b.edge(0, 9, 0, ls(&[10]))
            .edge(1, 0, 9, ls(&[11]))
            .edge(0, 9, 1, ls(&[12]))
            .edge(1, 1, 9, ls(&[11]));
        let h = b.build().unwrap();
        assert_eq!(
            inverse_edge_to_vertex(&h),
            Err(TransformError::InconsistentLabels(0))
        );
    }

    #[test]
    fn traced_matches_direct() {
        for g in [single_edge(), out_claw(), in_claw()] {
            let t = edge_to_vertex_traced(&g).unwrap();
            assert_eq!(t.image, edge_to_vertex(&g).unwrap());
        }
    }

    #[test]
    fn stats_claw_and_edge() {
        let s = transform_stats(&out_claw()).unwrap();
        assert_eq!((s.v_h_big_phi, s.e_h_big_phi, s.e_h_phi), (4, 6, 26));
        let s = transform_stats(&single_edge()).unwrap();
        assert_eq!((s.v_h_big_phi, s.e_h_big_phi), (2, 2));
    }

    #[test]
    fn two_path_collision() {
        // a -> b and c -> d with the same edge label, different vertex labels
        let mut b = GraphBuilder::new();
        b.vertex(0, ls(&[10])).vertex(1, ls(&[11]));
        b.edge(0, 0, 1, ls(&[20]));
        let g1 = b.build().unwrap();
        let mut b = GraphBuilder::new();
        b.vertex(0, ls(&[12])).vertex(1, ls(&[13]));
        b.edge(0, 0, 1, ls(&[20]));
        let g2 = b.build().unwrap();
        let l1 = line_graph(&g1).unwrap();
        let l2 = line_graph(&g2).unwrap();
        assert!(is_isomorphic(&l1, &l2).unwrap().is_some());
        let h1 = edge_to_vertex(&g1).unwrap();
        let h2 = edge_to_vertex(&g2).unwrap();
        assert!(is_isomorphic(&h1, &h2).unwrap().is_none());
    }
}
