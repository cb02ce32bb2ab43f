//! Labeled directed graphs with label *sets* on vertices and edges.
//!
//! Vertices are keyed by a stable integer id. Edges are keyed by their ordered
//! endpoint pair, so parallel edges cannot exist; an edge additionally carries
//! an integer id that records provenance (the transforms in [`crate::transform`]
//! move ids between the vertex and edge roles). Edge ids are therefore not
//! required to be unique: in an edge-to-vertex image every edge through the
//! same original vertex carries that vertex's id.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::GraphError;

/// Identifier of a vertex, or provenance id of an edge.
pub type Id = u32;

/// A label drawn from a per-run label universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

impl Label {
    /// Label of the dummy vertex in augmented and transformed graphs.
    pub const DUMMY_VERTEX: Label = Label(0);
    /// Label of the dummy edges incident to the dummy vertex of an augmented graph.
    pub const DUMMY_EDGE: Label = Label(1);
    /// First id available for dataset labels.
    pub const FIRST_FREE: u32 = 2;

    pub fn is_reserved(self) -> bool {
        self.0 < Self::FIRST_FREE
    }
}

/// Sorted, duplicate-free set of labels. The empty set stands for "no label".
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelSet(Vec<Label>);

impl LabelSet {
    pub fn empty() -> Self {
        LabelSet(Vec::new())
    }

    pub fn single(label: Label) -> Self {
        LabelSet(vec![label])
    }

    pub fn new(labels: impl IntoIterator<Item = Label>) -> Self {
        let mut v: Vec<Label> = labels.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        LabelSet(v)
    }

    pub fn contains(&self, label: Label) -> bool {
        self.0.binary_search(&label).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = Label> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Label] {
        &self.0
    }

    /// Union with another set (multiedge merging).
    pub fn union(&self, other: &LabelSet) -> LabelSet {
        LabelSet::new(self.iter().chain(other.iter()))
    }
}

impl FromIterator<Label> for LabelSet {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        LabelSet::new(iter)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: Id,
    pub labels: LabelSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: Id,
    pub src: Id,
    pub dst: Id,
    pub labels: LabelSet,
}

/// Unvalidated vertex and edge lists. This is what parsers and builders
/// produce and what [`validate`] inspects.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphParts {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

/// A broken [`LabeledDigraph`] invariant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    SelfLoop { vertex: Id },
    ParallelEdge { src: Id, dst: Id },
    DuplicateVertex { vertex: Id },
    DanglingEndpoint { vertex: Id },
    MultipleDummies { vertices: Vec<Id> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            Violation::ParallelEdge { src, dst } => {
                write!(f, "parallel edges between {src} and {dst}")
            }
            Violation::DuplicateVertex { vertex } => write!(f, "duplicate vertex id {vertex}"),
            Violation::DanglingEndpoint { vertex } => write!(f, "dangling endpoint {vertex}"),
            Violation::MultipleDummies { vertices } => {
                write!(f, "more than one dummy vertex: {vertices:?}")
            }
        }
    }
}

/// Checks every graph invariant; an empty result means the parts form a valid graph.
pub fn validate(parts: &GraphParts) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut dup_reported = BTreeSet::new();
    for v in &parts.vertices {
        if !seen.insert(v.id) && dup_reported.insert(v.id) {
            out.push(Violation::DuplicateVertex { vertex: v.id });
        }
    }
    let mut pairs = BTreeSet::new();
    let mut dangling = BTreeSet::new();
    for e in &parts.edges {
        if e.src == e.dst {
            out.push(Violation::SelfLoop { vertex: e.src });
        }
        for end in [e.src, e.dst] {
            if !seen.contains(&end) && dangling.insert(end) {
                out.push(Violation::DanglingEndpoint { vertex: end });
            }
        }
        if !pairs.insert((e.src, e.dst)) {
            out.push(Violation::ParallelEdge {
                src: e.src,
                dst: e.dst,
            });
        }
    }
    let dummies: Vec<Id> = parts
        .vertices
        .iter()
        .filter(|v| v.labels.contains(Label::DUMMY_VERTEX))
        .map(|v| v.id)
        .collect();
    if dummies.len() > 1 {
        out.push(Violation::MultipleDummies { vertices: dummies });
    }
    out
}

/// In- and outdegree of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DegreeProfile {
    pub indegree: usize,
    pub outdegree: usize,
}

/// Dense adjacency lists. Neighbor entries are `(vertex index, edge index)`
/// into [`LabeledDigraph::vertices`] and [`LabeledDigraph::edges`].
#[derive(Debug, Clone)]
pub struct Adjacency {
    pub out: Vec<Vec<(usize, usize)>>,
    pub inc: Vec<Vec<(usize, usize)>>,
}

/// Immutable labeled digraph. Vertices are stored in ascending id order,
/// edges in ascending `(src, dst)` order.
#[derive(Debug, Clone)]
pub struct LabeledDigraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    index: HashMap<Id, usize>,
    dummy: Option<Id>,
}

impl PartialEq for LabeledDigraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for LabeledDigraph {}

impl LabeledDigraph {
    pub fn empty() -> Self {
        LabeledDigraph {
            vertices: Vec::new(),
            edges: Vec::new(),
            index: HashMap::new(),
            dummy: None,
        }
    }

    /// Builds a graph, rejecting the parts if any invariant is violated.
    pub fn from_parts(parts: GraphParts) -> Result<Self, GraphError> {
        let violations = validate(&parts);
        if !violations.is_empty() {
            return Err(GraphError::Invalid(violations));
        }
        Ok(Self::from_parts_unchecked(parts))
    }

    pub(crate) fn from_parts_unchecked(parts: GraphParts) -> Self {
        let GraphParts {
            mut vertices,
            mut edges,
        } = parts;
        vertices.sort_by_key(|v| v.id);
        edges.sort_by_key(|e| (e.src, e.dst));
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id, i))
            .collect();
        let dummy = vertices
            .iter()
            .find(|v| v.labels.contains(Label::DUMMY_VERTEX))
            .map(|v| v.id);
        LabeledDigraph {
            vertices,
            edges,
            index,
            dummy,
        }
    }

    pub fn to_parts(&self) -> GraphParts {
        GraphParts {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Id of the vertex labeled [`Label::DUMMY_VERTEX`], if any.
    pub fn dummy_vertex(&self) -> Option<Id> {
        self.dummy
    }

    pub fn index_of(&self, id: Id) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn vertex(&self, id: Id) -> Option<&Vertex> {
        self.index_of(id).map(|i| &self.vertices[i])
    }

    pub fn contains_vertex(&self, id: Id) -> bool {
        self.index.contains_key(&id)
    }

    pub fn edge(&self, src: Id, dst: Id) -> Option<&Edge> {
        self.edges
            .binary_search_by(|e| (e.src, e.dst).cmp(&(src, dst)))
            .ok()
            .map(|i| &self.edges[i])
    }

    /// Next id above every vertex id in use.
    pub fn next_vertex_id(&self) -> Id {
        self.vertices.last().map_or(0, |v| v.id + 1)
    }

    pub fn adjacency(&self) -> Adjacency {
        let n = self.vertices.len();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (k, e) in self.edges.iter().enumerate() {
            let s = self.index[&e.src];
            let d = self.index[&e.dst];
            out[s].push((d, k));
            inc[d].push((s, k));
        }
        Adjacency { out, inc }
    }

    /// Degree profile of every vertex, in vertex order.
    pub fn degree_profiles(&self) -> Vec<DegreeProfile> {
        let mut deg = vec![
            DegreeProfile {
                indegree: 0,
                outdegree: 0
            };
            self.vertices.len()
        ];
        for e in &self.edges {
            deg[self.index[&e.src]].outdegree += 1;
            deg[self.index[&e.dst]].indegree += 1;
        }
        deg
    }

    pub fn degrees(&self, v: Id) -> Result<DegreeProfile, GraphError> {
        if !self.contains_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        let outdegree = self.edges.iter().filter(|e| e.src == v).count();
        let indegree = self.edges.iter().filter(|e| e.dst == v).count();
        Ok(DegreeProfile {
            indegree,
            outdegree,
        })
    }

    /// Vertices with indegree zero (S), outdegree zero (T), and both
    /// nonzero (U). Isolated vertices belong to both S and T.
    pub fn degree_partition(&self) -> DegreePartition {
        let mut part = DegreePartition::default();
        for (v, d) in self.vertices.iter().zip(self.degree_profiles()) {
            if d.indegree == 0 {
                part.sources.insert(v.id);
            }
            if d.outdegree == 0 {
                part.sinks.insert(v.id);
            }
            if d.indegree > 0 && d.outdegree > 0 {
                part.inner.insert(v.id);
            }
        }
        part
    }

    pub fn isolated_vertices(&self) -> Vec<Id> {
        self.vertices
            .iter()
            .zip(self.degree_profiles())
            .filter(|(_, d)| d.indegree == 0 && d.outdegree == 0)
            .map(|(v, _)| v.id)
            .collect()
    }

    /// Renames vertices through `pi`. Labels travel with their vertices and
    /// edge ids are preserved.
    pub fn permute(&self, pi: &BTreeMap<Id, Id>) -> Result<LabeledDigraph, GraphError> {
        if pi.len() != self.vertices.len() || self.vertices.iter().any(|v| !pi.contains_key(&v.id)) {
            return Err(GraphError::NotABijection(
                "domain differs from the vertex set".into(),
            ));
        }
        let image: BTreeSet<Id> = pi.values().copied().collect();
        if image.len() != pi.len() {
            return Err(GraphError::NotABijection("mapping is not injective".into()));
        }
        let parts = GraphParts {
            vertices: self
                .vertices
                .iter()
                .map(|v| Vertex {
                    id: pi[&v.id],
                    labels: v.labels.clone(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    id: e.id,
                    src: pi[&e.src],
                    dst: pi[&e.dst],
                    labels: e.labels.clone(),
                })
                .collect(),
        };
        Ok(Self::from_parts_unchecked(parts))
    }

    /// True iff undirected reachability spans all vertices; the empty graph is connected.
    pub fn weakly_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &(u, _) in adj.out[v].iter().chain(adj.inc[v].iter()) {
                if !seen[u] {
                    seen[u] = true;
                    reached += 1;
                    queue.push_back(u);
                }
            }
        }
        reached == n
    }
}

/// Result of [`LabeledDigraph::degree_partition`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DegreePartition {
    pub sources: BTreeSet<Id>,
    pub sinks: BTreeSet<Id>,
    pub inner: BTreeSet<Id>,
}

/// Incremental construction that merges parallel edges into label-set unions.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    vertices: BTreeMap<Id, LabelSet>,
    edges: BTreeMap<(Id, Id), (Id, LabelSet)>,
    duplicates: Vec<Id>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, id: Id, labels: LabelSet) -> &mut Self {
        if self.vertices.insert(id, labels).is_some() {
            self.duplicates.push(id);
        }
        self
    }

    /// Adds an edge; a repeated `(src, dst)` pair extends the existing label
    /// set and keeps the first id.
    pub fn edge(&mut self, id: Id, src: Id, dst: Id, labels: LabelSet) -> &mut Self {
        self.edges
            .entry((src, dst))
            .and_modify(|(_, l)| *l = l.union(&labels))
            .or_insert((id, labels));
        self
    }

    pub fn parts(&self) -> GraphParts {
        let mut vertices: Vec<Vertex> = self
            .vertices
            .iter()
            .map(|(&id, l)| Vertex {
                id,
                labels: l.clone(),
            })
            .collect();
        vertices.extend(self.duplicates.iter().map(|&id| Vertex {
            id,
            labels: LabelSet::empty(),
        }));
        GraphParts {
            vertices,
            edges: self
                .edges
                .iter()
                .map(|(&(src, dst), (id, l))| Edge {
                    id: *id,
                    src,
                    dst,
                    labels: l.clone(),
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<LabeledDigraph, GraphError> {
        LabeledDigraph::from_parts(self.parts())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ls(ids: &[u32]) -> LabelSet {
        LabelSet::new(ids.iter().map(|&i| Label(i)))
    }

    fn claw_out() -> LabeledDigraph {
        let mut b = GraphBuilder::new();
        b.vertex(0, ls(&[2]))
            .vertex(1, ls(&[3]))
            .vertex(2, ls(&[3]))
            .vertex(3, ls(&[3]));
        b.edge(0, 0, 1, ls(&[10])).edge(1, 0, 2, ls(&[10])).edge(2, 0, 3, ls(&[10]));
        b.build().unwrap()
    }

    #[test]
    fn label_set_is_canonical() {
        assert_eq!(ls(&[5, 2, 5, 3]).as_slice(), &[Label(2), Label(3), Label(5)]);
        assert!(ls(&[]).is_empty());
    }

    #[test]
    fn validate_reports_each_invariant() {
        let v = |id| Vertex {
            id,
            labels: ls(&[2]),
        };
        let e = |id, src, dst| Edge {
            id,
            src,
            dst,
            labels: ls(&[]),
        };
        let loops = GraphParts {
            vertices: vec![v(1)],
            edges: vec![e(0, 1, 1)],
        };
        assert_eq!(validate(&loops), vec![Violation::SelfLoop { vertex: 1 }]);

        let single = GraphParts {
            vertices: vec![v(1)],
            edges: vec![],
        };
        assert!(validate(&single).is_empty());

        let dangling = GraphParts {
            vertices: vec![v(1)],
            edges: vec![e(0, 1, 9)],
        };
        assert_eq!(
            validate(&dangling),
            vec![Violation::DanglingEndpoint { vertex: 9 }]
        );

        let dup = GraphParts {
            vertices: vec![v(1), v(1), v(2)],
            edges: vec![e(0, 1, 2), e(1, 1, 2)],
        };
        assert_eq!(
            validate(&dup),
            vec![
                Violation::DuplicateVertex { vertex: 1 },
                Violation::ParallelEdge { src: 1, dst: 2 }
            ]
        );

        let dummies = GraphParts {
            vertices: vec![
                Vertex {
                    id: 0,
                    labels: LabelSet::single(Label::DUMMY_VERTEX),
                },
                Vertex {
                    id: 1,
                    labels: LabelSet::single(Label::DUMMY_VERTEX),
                },
            ],
            edges: vec![],
        };
        assert_eq!(
            validate(&dummies),
            vec![Violation::MultipleDummies {
                vertices: vec![0, 1]
            }]
        );
    }

    #[test]
    fn degrees_of_claw_and_isolated() {
        let g = claw_out();
        assert_eq!(
            g.degrees(0).unwrap(),
            DegreeProfile {
                indegree: 0,
                outdegree: 3
            }
        );
        assert_eq!(
            g.degrees(1).unwrap(),
            DegreeProfile {
                indegree: 1,
                outdegree: 0
            }
        );
        assert!(matches!(g.degrees(7), Err(GraphError::UnknownVertex(7))));

        let mut b = GraphBuilder::new();
        b.vertex(4, ls(&[2]));
        let iso = b.build().unwrap();
        assert_eq!(
            iso.degrees(4).unwrap(),
            DegreeProfile {
                indegree: 0,
                outdegree: 0
            }
        );
    }

    #[test]
    fn partition_examples() {
        let p = claw_out().degree_partition();
        assert_eq!(p.sources, BTreeSet::from([0]));
        assert_eq!(p.sinks, BTreeSet::from([1, 2, 3]));
        assert!(p.inner.is_empty());

        let mut b = GraphBuilder::new();
        for i in 0..3 {
            b.vertex(i, ls(&[2]));
        }
        b.edge(0, 0, 1, ls(&[])).edge(1, 1, 2, ls(&[])).edge(2, 2, 0, ls(&[]));
        let p = b.build().unwrap().degree_partition();
        assert!(p.sources.is_empty() && p.sinks.is_empty());
        assert_eq!(p.inner, BTreeSet::from([0, 1, 2]));

        let mut b = GraphBuilder::new();
        b.vertex(5, ls(&[2]));
        let p = b.build().unwrap().degree_partition();
        assert_eq!(p.sources, BTreeSet::from([5]));
        assert_eq!(p.sinks, BTreeSet::from([5]));
    }

    #[test]
    fn builder_merges_parallel_edges() {
        let mut b = GraphBuilder::new();
        b.vertex(0, ls(&[2])).vertex(1, ls(&[2]));
        b.edge(3, 0, 1, ls(&[4])).edge(8, 0, 1, ls(&[5]));
        let g = b.build().unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edge(0, 1).unwrap().labels, ls(&[4, 5]));
        assert_eq!(g.edge(0, 1).unwrap().id, 3);
    }

    #[test]
    fn permute_moves_labels() {
        let mut b = GraphBuilder::new();
        b.vertex(0, ls(&[2])).vertex(1, ls(&[3]));
        b.edge(0, 0, 1, ls(&[4]));
        let g = b.build().unwrap();
        let id: BTreeMap<Id, Id> = [(0, 0), (1, 1)].into();
        assert_eq!(g.permute(&id).unwrap(), g);
        let swap: BTreeMap<Id, Id> = [(0, 1), (1, 0)].into();
        let p = g.permute(&swap).unwrap();
        assert_eq!(p.vertex(1).unwrap().labels, ls(&[2]));
        assert_eq!(p.vertex(0).unwrap().labels, ls(&[3]));
        assert_eq!(p.edge(1, 0).unwrap().labels, ls(&[4]));
        let bad: BTreeMap<Id, Id> = [(0, 1), (1, 1)].into();
        assert!(g.permute(&bad).is_err());
        let short: BTreeMap<Id, Id> = [(0, 1)].into();
        assert!(g.permute(&short).is_err());
    }

    #[test]
    fn connectivity() {
        assert!(claw_out().weakly_connected());
        assert!(LabeledDigraph::empty().weakly_connected());
        let mut b = GraphBuilder::new();
        for i in 0..4 {
            b.vertex(i, ls(&[2]));
        }
        b.edge(0, 0, 1, ls(&[])).edge(1, 2, 3, ls(&[]));
        assert!(!b.build().unwrap().weakly_connected());
    }
}
