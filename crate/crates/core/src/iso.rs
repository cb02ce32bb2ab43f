//! Exact isomorphism test for small labeled digraphs.
//!
//! Backtracking over the vertices of the first graph. Candidates come from
//! color refinement run jointly on both graphs, vertices are visited so that
//! each one touches already mapped ones where possible, and every partial
//! map is checked against both edge directions. Ids are ignored; only
//! structure and labels count.

use std::collections::{BTreeMap, HashMap};

use crate::error::GraphError;
use crate::graph::{Id, LabelSet, LabeledDigraph};

/// Largest vertex count accepted by [`is_isomorphic`].
pub const MAX_ISO_VERTICES: usize = 128;

struct Side<'a> {
    labels: Vec<&'a LabelSet>,
    // edge label set between dense indices, if an edge exists
    adj: Vec<Vec<Option<&'a LabelSet>>>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl<'a> Side<'a> {
    fn new(g: &'a LabeledDigraph) -> Self {
        let n = g.vertex_count();
        let mut adj = vec![vec![None; n]; n];
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for e in g.edges() {
            let s = g.index_of(e.src).expect("valid graph");
            let d = g.index_of(e.dst).expect("valid graph");
            adj[s][d] = Some(&e.labels);
            out[s].push(d);
            inc[d].push(s);
        }
        Side {
            labels: g.vertices().iter().map(|v| &v.labels).collect(),
            adj,
            out,
            inc,
        }
    }
}

type Signature<'a> = (usize, Vec<(&'a LabelSet, usize)>, Vec<(&'a LabelSet, usize)>);

fn initial_colors<'a>(s: &Side<'a>, ids: &mut HashMap<&'a LabelSet, usize>) -> Vec<usize> {
    s.labels
        .iter()
        .map(|&l| {
            let k = ids.len();
            *ids.entry(l).or_insert(k)
        })
        .collect()
}

fn refine_step<'a>(s: &Side<'a>, c: &[usize], table: &mut HashMap<Signature<'a>, usize>) -> Vec<usize> {
    (0..c.len())
        .map(|v| {
            let mut o: Vec<_> = s.out[v].iter().map(|&w| (s.adj[v][w].unwrap(), c[w])).collect();
            let mut i: Vec<_> = s.inc[v].iter().map(|&w| (s.adj[w][v].unwrap(), c[w])).collect();
            o.sort();
            i.sort();
            let k = table.len();
            *table.entry((c[v], o, i)).or_insert(k)
        })
        .collect()
}

// Stable colors over the disjoint union of both graphs.
fn refine(a: &Side, b: &Side) -> (Vec<usize>, Vec<usize>) {
    let mut ids = HashMap::new();
    let mut ca = initial_colors(a, &mut ids);
    let mut cb = initial_colors(b, &mut ids);
    let mut classes = ids.len();
    loop {
        let mut table = HashMap::new();
        let na = refine_step(a, &ca, &mut table);
        let nb = refine_step(b, &cb, &mut table);
        ca = na;
        cb = nb;
        if table.len() == classes {
            return (ca, cb);
        }
        classes = table.len();
    }
}

/// Returns a vertex bijection `f` from `g1` onto `g2` preserving vertex
/// labels, edges, edge labels and non-edges, or `None` if none exists.
pub fn is_isomorphic(
    g1: &LabeledDigraph,
    g2: &LabeledDigraph,
) -> Result<Option<BTreeMap<Id, Id>>, GraphError> {
    for g in [g1, g2] {
        if g.vertex_count() > MAX_ISO_VERTICES {
            return Err(GraphError::TooLarge {
                limit: MAX_ISO_VERTICES,
                got: g.vertex_count(),
            });
        }
    }
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let a = Side::new(g1);
    let b = Side::new(g2);
    let n = g1.vertex_count();

    let (ca, cb) = refine(&a, &b);
    let (mut ha, mut hb) = (ca.clone(), cb.clone());
    ha.sort_unstable();
    hb.sort_unstable();
    if ha != hb {
        return Ok(None);
    }
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| ca[i] == cb[j]).collect())
        .collect();

    // Fewest candidates first, preferring vertices adjacent to chosen ones.
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| (usize::MAX - links[v], candidates[v].len(), v))
            .expect("unplaced vertex");
        placed[v] = true;
        order.push(v);
        for &w in a.out[v].iter().chain(&a.inc[v]) {
            links[w] += 1;
        }
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(&a, &b, &order, &candidates, 0, &mut map, &mut used) {
        let f = (0..n)
            .map(|i| (g1.vertices()[i].id, g2.vertices()[map[i]].id))
            .collect();
        Ok(Some(f))
    } else {
        Ok(None)
    }
}

fn extend(
    a: &Side,
    b: &Side,
    order: &[usize],
    candidates: &[Vec<usize>],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for &w in &candidates[v] {
        if used[w] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| {
            let x = map[u];
            a.adj[v][u] == b.adj[w][x] && a.adj[u][v] == b.adj[x][w]
        });
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend(a, b, order, candidates, depth + 1, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}

/// Checks that `f` satisfies every isomorphism condition between `g1` and `g2`.
pub fn is_witness(g1: &LabeledDigraph, g2: &LabeledDigraph, f: &BTreeMap<Id, Id>) -> bool {
    if g1.vertex_count() != g2.vertex_count() || f.len() != g1.vertex_count() {
        return false;
    }
    let mut inverse = BTreeMap::new();
    for (&x, &y) in f {
        if inverse.insert(y, x).is_some() {
            return false;
        }
    }
    let labels_fwd = g1.vertices().iter().all(|v| {
        f.get(&v.id)
            .and_then(|&w| g2.vertex(w))
            .is_some_and(|w| w.labels == v.labels)
    });
    let labels_back = g2.vertices().iter().all(|v| {
        inverse
            .get(&v.id)
            .and_then(|&w| g1.vertex(w))
            .is_some_and(|w| w.labels == v.labels)
    });
    let edges_fwd = g1.edges().iter().all(|e| {
        g2.edge(f[&e.src], f[&e.dst])
            .is_some_and(|e2| e2.labels == e.labels)
    });
    let edges_back = g2.edges().iter().all(|e| {
        match (inverse.get(&e.src), inverse.get(&e.dst)) {
            (Some(&s), Some(&d)) => g1.edge(s, d).is_some_and(|e1| e1.labels == e.labels),
            _ => false,
        }
    });
    labels_fwd && labels_back && edges_fwd && edges_back
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GraphBuilder, Label};

    fn uni() -> LabelSet {
        LabelSet::single(Label(2))
    }

    fn digraph(n: u32, edges: &[(u32, u32)]) -> LabeledDigraph {
        let mut b = GraphBuilder::new();
        for i in 0..n {
            b.vertex(i, uni());
        }
        for (k, &(s, d)) in edges.iter().enumerate() {
            b.edge(k as u32, s, d, LabelSet::empty());
        }
        b.build().unwrap()
    }

    #[test]
    fn triangle_rotation() {
        let t = digraph(3, &[(0, 1), (1, 2), (2, 0)]);
        let r = digraph(3, &[(1, 2), (2, 0), (0, 1)]).permute(&[(0, 1), (1, 2), (2, 0)].into()).unwrap();
        let f = is_isomorphic(&t, &r).unwrap().expect("isomorphic");
        assert!(is_witness(&t, &r, &f));
    }

    #[test]
    fn out_star_vs_in_star() {
        let out = digraph(4, &[(0, 1), (0, 2), (0, 3)]);
        let inn = digraph(4, &[(1, 0), (2, 0), (3, 0)]);
        assert!(is_isomorphic(&out, &inn).unwrap().is_none());
    }

    #[test]
    fn edge_labels_matter() {
        let mut b = GraphBuilder::new();
        b.vertex(0, uni()).vertex(1, uni());
        b.edge(0, 0, 1, LabelSet::single(Label(5)));
        let g1 = b.build().unwrap();
        let mut b = GraphBuilder::new();
        b.vertex(0, uni()).vertex(1, uni());
        b.edge(0, 0, 1, LabelSet::single(Label(6)));
        let g2 = b.build().unwrap();
        assert!(is_isomorphic(&g1, &g2).unwrap().is_none());
    }

    #[test]
    fn size_limit() {
        let g = digraph(MAX_ISO_VERTICES as u32 + 1, &[]);
        assert!(matches!(
            is_isomorphic(&g, &g),
            Err(GraphError::TooLarge { .. })
        ));
    }

    #[test]
    fn regular_graphs_need_search() {
        // one 6-cycle vs two 3-cycles: identical stable colors
        let six = digraph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let two = digraph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert!(is_isomorphic(&six, &two).unwrap().is_none());
        let shifted = six.permute(&(0..6).map(|i| (i, (i + 2) % 6)).collect()).unwrap();
        assert!(is_isomorphic(&six, &shifted).unwrap().is_some());
    }

    #[test]
    fn larger_permuted_graph() {
        let n = 60u32;
        let edges: Vec<(u32, u32)> = (0..n)
            .flat_map(|i| [(i, (i + 1) % n), (i, (i * 7 + 3) % n)])
            .filter(|(s, d)| s != d)
            .collect();
        let mut b = GraphBuilder::new();
        for i in 0..n {
            b.vertex(i, uni());
        }
        for (k, &(s, d)) in edges.iter().enumerate() {
            b.edge(k as u32, s, d, LabelSet::empty());
        }
        let g = b.build().unwrap();
        let pi: BTreeMap<Id, Id> = (0..n).map(|i| (i, (i * 17 + 5) % n)).collect();
        let h = g.permute(&pi).unwrap();
        let f = is_isomorphic(&g, &h).unwrap().expect("isomorphic");
        assert!(is_witness(&g, &h, &f));
    }
}
