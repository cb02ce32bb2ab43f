//! TUDataset benchmark layout: `{name}_A.txt` (1-indexed vertex pairs),
//! `{name}_graph_indicator.txt`, `{name}_graph_labels.txt`, and optional
//! `{name}_node_labels.txt` / `{name}_edge_labels.txt`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{Dataset, LabelDictionary, DEFAULT_EDGE_NAME, DEFAULT_NODE_NAME};
use crate::error::IoError;
use crate::graph::{Edge, GraphParts, Id, Label, LabelSet, LabeledDigraph, Vertex};
use crate::learn::binary_labels;

const NODE_PREFIX: &str = "node:";
const EDGE_PREFIX: &str = "edge:";

/// Expands undirected pairs into both orientations, merging repeated
/// directed pairs by label union. Output is sorted by `(src, dst)`.
pub fn to_directed(pairs: &[(Id, Id, LabelSet)]) -> Vec<(Id, Id, LabelSet)> {
    let mut merged: BTreeMap<(Id, Id), LabelSet> = BTreeMap::new();
    for (u, v, l) in pairs {
        for key in [(*u, *v), (*v, *u)] {
            let slot = merged.entry(key).or_default();
            *slot = slot.union(l);
        }
    }
    merged.into_iter().map(|((u, v), l)| (u, v, l)).collect()
}

struct Table {
    path: String,
    // (line number, trimmed content) for non-blank lines
    rows: Vec<(usize, String)>,
}

impl Table {
    fn read(path: &Path) -> Result<Self, IoError> {
        let shown = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|source| IoError::Io {
            path: shown.clone(),
            source,
        })?;
        let rows = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| (i + 1, l.trim().to_string()))
            .collect();
        Ok(Table { path: shown, rows })
    }

    fn read_optional(path: &Path) -> Result<Option<Self>, IoError> {
        if path.exists() {
            Self::read(path).map(Some)
        } else {
            Ok(None)
        }
    }

    fn err(&self, line: usize, reason: String) -> IoError {
        IoError::Parse {
            path: self.path.clone(),
            line,
            reason,
        }
    }

    fn ints(&self) -> Result<Vec<i64>, IoError> {
        self.rows
            .iter()
            .map(|(line, s)| {
                s.parse::<i64>()
                    .map_err(|_| self.err(*line, format!("`{s}` is not an integer")))
            })
            .collect()
    }

    fn expect_len(&self, len: usize, what: &str) -> Result<(), IoError> {
        if self.rows.len() != len {
            return Err(IoError::Format {
                path: self.path.clone(),
                reason: format!("{} rows, expected one per {what} ({len})", self.rows.len()),
            });
        }
        Ok(())
    }
}

fn file(dir: &Path, name: &str, part: &str) -> PathBuf {
    dir.join(format!("{name}_{part}.txt"))
}

// Distinct raw values, numerically ordered when they are all integers.
fn sorted_distinct(raw: &[String]) -> Vec<String> {
    let set: BTreeSet<&String> = raw.iter().collect();
    let mut out: Vec<String> = set.into_iter().cloned().collect();
    if out.iter().all(|s| s.parse::<i64>().is_ok()) {
        out.sort_by_key(|s| s.parse::<i64>().unwrap());
    }
    out
}

fn intern_column(raw: Option<Vec<String>>, prefix: &str, default: &str, dict: &mut LabelDictionary) -> Box<dyn Fn(usize) -> Label> {
    match raw {
        None => {
            let l = dict.intern(default);
            Box::new(move |_| l)
        }
        Some(raw) => {
            let mut map = BTreeMap::new();
            for v in sorted_distinct(&raw) {
                map.insert(v.clone(), dict.intern(&format!("{prefix}{v}")));
            }
            let labels: Vec<Label> = raw.iter().map(|v| map[v]).collect();
            Box::new(move |i| labels[i])
        }
    }
}

pub fn load_tudataset(dir: &Path, name: &str) -> Result<Dataset, IoError> {
    let indicator_t = Table::read(&file(dir, name, "graph_indicator"))?;
    let classes_t = Table::read(&file(dir, name, "graph_labels"))?;
    let a_t = Table::read(&file(dir, name, "A"))?;
    let node_t = Table::read_optional(&file(dir, name, "node_labels"))?;
    let edge_t = Table::read_optional(&file(dir, name, "edge_labels"))?;

    let indicator = indicator_t.ints()?;
    let classes = classes_t.ints()?;
    let graph_count = classes.len();
    for (k, &g) in indicator.iter().enumerate() {
        if g < 1 || g as usize > graph_count {
            return Err(indicator_t.err(
                indicator_t.rows[k].0,
                format!("graph id {g} outside 1..={graph_count}"),
            ));
        }
    }
    if let Some(t) = &node_t {
        t.expect_len(indicator.len(), "vertex")?;
    }
    if let Some(t) = &edge_t {
        t.expect_len(a_t.rows.len(), "row of the A file")?;
    }

    let mut dict = LabelDictionary::new();
    let column = |t: &Option<Table>| t.as_ref().map(|t| t.rows.iter().map(|(_, s)| s.clone()).collect());
    let node_label = intern_column(column(&node_t), NODE_PREFIX, DEFAULT_NODE_NAME, &mut dict);
    let edge_label = intern_column(column(&edge_t), EDGE_PREFIX, DEFAULT_EDGE_NAME, &mut dict);

    // global vertex index -> (graph, local id)
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); graph_count];
    let mut local = vec![0 as Id; indicator.len()];
    for (v, &g) in indicator.iter().enumerate() {
        let slot = &mut members[g as usize - 1];
        local[v] = slot.len() as Id;
        slot.push(v);
    }

    let mut pairs: Vec<Vec<(Id, Id, LabelSet)>> = vec![Vec::new(); graph_count];
    for (k, (line, row)) in a_t.rows.iter().enumerate() {
        let (s, d) = row
            .split_once(',')
            .ok_or_else(|| a_t.err(*line, format!("expected `u, v`, got `{row}`")))?;
        let parse = |x: &str| -> Result<usize, IoError> {
            let x = x.trim();
            let v: usize = x
                .parse()
                .map_err(|_| a_t.err(*line, format!("`{x}` is not a vertex index")))?;
            if v < 1 || v > indicator.len() {
                return Err(a_t.err(*line, format!("vertex {v} outside 1..={}", indicator.len())));
            }
            Ok(v - 1)
        };
        let (u, v) = (parse(s)?, parse(d)?);
        if u == v {
            return Err(a_t.err(*line, format!("self-loop at vertex {}", u + 1)));
        }
        if indicator[u] != indicator[v] {
            return Err(a_t.err(
                *line,
                format!(
                    "edge {}-{} joins graphs {} and {}",
                    u + 1,
                    v + 1,
                    indicator[u],
                    indicator[v]
                ),
            ));
        }
        pairs[indicator[u] as usize - 1].push((local[u], local[v], LabelSet::single(edge_label(k))));
    }

    let mut graphs = Vec::with_capacity(graph_count);
    for (g, verts) in members.iter().enumerate() {
        let parts = GraphParts {
            vertices: verts
                .iter()
                .map(|&v| Vertex {
                    id: local[v],
                    labels: LabelSet::single(node_label(v)),
                })
                .collect(),
            edges: to_directed(&pairs[g])
                .into_iter()
                .enumerate()
                .map(|(i, (src, dst, labels))| Edge {
                    id: i as Id,
                    src,
                    dst,
                    labels,
                })
                .collect(),
        };
        graphs.push(LabeledDigraph::from_parts(parts).map_err(|e| IoError::Format {
            path: a_t.path.clone(),
            reason: format!("graph {}: {e}", g + 1),
        })?);
    }

    let class_labels = match binary_labels(&classes) {
        Ok(signs) => signs.into_iter().map(i64::from).collect(),
        Err(_) => classes,
    };
    Ok(Dataset {
        name: name.to_string(),
        graphs,
        class_labels,
        dictionary: dict,
    })
}

// Raw value behind a singleton label with the given prefix, or `None` for
// the default label.
fn raw_value<'a>(labels: &LabelSet, dict: &'a LabelDictionary, prefix: &str, default: &str) -> Result<Option<&'a str>, String> {
    let [l] = labels.as_slice() else {
        return Err(format!("expected a single label, found {}", labels.len()));
    };
    let name = dict.name(*l).ok_or_else(|| format!("label {} not in dictionary", l.0))?;
    if name == default {
        return Ok(None);
    }
    name.strip_prefix(prefix)
        .map(Some)
        .ok_or_else(|| format!("label `{name}` has no `{prefix}` prefix"))
}

/// Writes a dataset in the TUDataset layout. Each directed edge becomes one
/// row of the A file. Label files are omitted when every label is the
/// default one.
pub fn write_tudataset(dir: &Path, dataset: &Dataset) -> Result<(), IoError> {
    let name = &dataset.name;
    let fail = |reason: String| IoError::Format {
        path: dir.display().to_string(),
        reason,
    };
    if dataset.graphs.len() != dataset.class_labels.len() {
        return Err(fail("graph and class label counts differ".into()));
    }
    let dict = &dataset.dictionary;
    let (mut a, mut ind, mut nodes, mut edges, mut classes) =
        (String::new(), String::new(), String::new(), String::new(), String::new());
    let (mut any_node, mut any_edge) = (false, false);
    let mut offset = 0usize;
    for (g, (graph, class)) in dataset.graphs.iter().zip(&dataset.class_labels).enumerate() {
        writeln!(classes, "{class}").unwrap();
        for (i, v) in graph.vertices().iter().enumerate() {
            if v.id as usize != i {
                return Err(fail(format!("graph {}: vertex ids must be 0..n", g + 1)));
            }
            writeln!(ind, "{}", g + 1).unwrap();
            let raw = raw_value(&v.labels, dict, NODE_PREFIX, DEFAULT_NODE_NAME)
                .map_err(|r| fail(format!("graph {} vertex {}: {r}", g + 1, v.id)))?;
            any_node |= raw.is_some();
            writeln!(nodes, "{}", raw.unwrap_or(DEFAULT_NODE_NAME)).unwrap();
        }
        for e in graph.edges() {
            writeln!(a, "{}, {}", offset + e.src as usize + 1, offset + e.dst as usize + 1).unwrap();
            let raw = raw_value(&e.labels, dict, EDGE_PREFIX, DEFAULT_EDGE_NAME)
                .map_err(|r| fail(format!("graph {} edge {}: {r}", g + 1, e.id)))?;
            any_edge |= raw.is_some();
            writeln!(edges, "{}", raw.unwrap_or(DEFAULT_EDGE_NAME)).unwrap();
        }
        offset += graph.vertex_count();
    }
    let put = |part: &str, body: &str| {
        let p = file(dir, name, part);
        fs::write(&p, body).map_err(|source| IoError::Io {
            path: p.display().to_string(),
            source,
        })
    };
    put("A", &a)?;
    put("graph_indicator", &ind)?;
    put("graph_labels", &classes)?;
    if any_node {
        put("node_labels", &nodes)?;
    }
    if any_edge {
        put("edge_labels", &edges)?;
    }
    Ok(())
}
