//! Line-oriented graph format.
//!
//! ```text
//! g <n> <m>
//! v <id> <label>[,<label>...]
//! e <id> <src> <dst> <label>[,<label>...]
//! ```
//!
//! A file holds any number of graphs, each a `g` header followed by exactly
//! `n` vertex lines and `m` edge lines. Labels are dictionary spellings; `-`
//! stands for the empty set. Blank lines and lines starting with `#` are
//! skipped.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::LabelDictionary;
use crate::error::IoError;
use crate::graph::{Edge, GraphParts, Id, LabelSet, LabeledDigraph, Vertex};

pub const EMPTY_LABELS: &str = "-";

fn format_err(path: &str, reason: String) -> IoError {
    IoError::Format {
        path: path.to_string(),
        reason,
    }
}

fn render_labels(out: &mut String, labels: &LabelSet, dict: &LabelDictionary, path: &str) -> Result<(), IoError> {
    if labels.is_empty() {
        out.push_str(EMPTY_LABELS);
        return Ok(());
    }
    for (k, l) in labels.iter().enumerate() {
        let name = dict
            .name(l)
            .ok_or_else(|| format_err(path, format!("label {} is not in the dictionary", l.0)))?;
        if name.is_empty() || name == EMPTY_LABELS || name.contains(',') || name.contains(char::is_whitespace) {
            return Err(format_err(path, format!("label spelling `{name}` cannot be written")));
        }
        if k > 0 {
            out.push(',');
        }
        out.push_str(name);
    }
    Ok(())
}

/// Serializes graphs; `path` only names the destination in errors.
pub fn render_graphs(graphs: &[LabeledDigraph], dict: &LabelDictionary, path: &str) -> Result<String, IoError> {
    let mut out = String::new();
    for g in graphs {
        writeln!(out, "g {} {}", g.vertex_count(), g.edge_count()).unwrap();
        for v in g.vertices() {
            write!(out, "v {} ", v.id).unwrap();
            render_labels(&mut out, &v.labels, dict, path)?;
            out.push('\n');
        }
        for e in g.edges() {
            write!(out, "e {} {} {} ", e.id, e.src, e.dst).unwrap();
            render_labels(&mut out, &e.labels, dict, path)?;
            out.push('\n');
        }
    }
    Ok(out)
}

pub fn write_graphs(path: &Path, graphs: &[LabeledDigraph], dict: &LabelDictionary) -> Result<(), IoError> {
    let shown = path.display().to_string();
    let text = render_graphs(graphs, dict, &shown)?;
    fs::write(path, text).map_err(|source| IoError::Io { path: shown, source })
}

pub fn read_graphs(path: &Path, dict: &mut LabelDictionary) -> Result<Vec<LabeledDigraph>, IoError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| IoError::Io {
        path: shown.clone(),
        source,
    })?;
    parse_graphs(&text, dict, &shown)
}

enum Pending {
    Idle,
    Reading {
        header: usize,
        n: usize,
        m: usize,
        parts: GraphParts,
    },
}

/// Parses graph text; unknown label spellings are added to `dict`.
pub fn parse_graphs(text: &str, dict: &mut LabelDictionary, path: &str) -> Result<Vec<LabeledDigraph>, IoError> {
    let err = |line: usize, reason: String| IoError::Parse {
        path: path.to_string(),
        line,
        reason,
    };
    let mut graphs = Vec::new();
    let mut state = Pending::Idle;

    let finish = |state: Pending, graphs: &mut Vec<LabeledDigraph>, at: usize| -> Result<(), IoError> {
        if let Pending::Reading { header, n, m, parts } = state {
            if parts.vertices.len() != n || parts.edges.len() != m {
                return Err(err(
                    at,
                    format!(
                        "graph declared at line {header} has {} vertices and {} edges, header says {n} and {m}",
                        parts.vertices.len(),
                        parts.edges.len()
                    ),
                ));
            }
            let g = LabeledDigraph::from_parts(parts).map_err(|e| err(header, e.to_string()))?;
            graphs.push(g);
        }
        Ok(())
    };

    let mut last = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let num = |s: &str, what: &str| -> Result<u64, IoError> {
            s.parse::<u64>().map_err(|_| err(line, format!("{what} `{s}` is not a non-negative integer")))
        };
        let id = |s: &str, what: &str| -> Result<Id, IoError> {
            let v = num(s, what)?;
            Id::try_from(v).map_err(|_| err(line, format!("{what} {v} out of range")))
        };
        let mut labels = |s: &str| -> Result<LabelSet, IoError> {
            if s == EMPTY_LABELS {
                return Ok(LabelSet::empty());
            }
            if s.split(',').any(|name| name.is_empty() || name == EMPTY_LABELS) {
                return Err(err(line, format!("malformed label list `{s}`")));
            }
            Ok(s.split(',').map(|name| dict.intern(name)).collect())
        };
        match fields[0] {
            "g" => {
                if fields.len() != 3 {
                    return Err(err(line, "expected `g <n> <m>`".into()));
                }
                let n = num(fields[1], "vertex count")? as usize;
                let m = num(fields[2], "edge count")? as usize;
                finish(std::mem::replace(&mut state, Pending::Idle), &mut graphs, line)?;
                state = Pending::Reading {
                    header: line,
                    n,
                    m,
                    parts: GraphParts::default(),
                };
            }
            "v" => {
                let Pending::Reading { n, parts, .. } = &mut state else {
                    return Err(err(line, "vertex line before any `g` header".into()));
                };
                if fields.len() != 3 {
                    return Err(err(line, "expected `v <id> <labels>`".into()));
                }
                if !parts.edges.is_empty() {
                    return Err(err(line, "vertex line after edge lines".into()));
                }
                if parts.vertices.len() == *n {
                    return Err(err(line, format!("more than the declared {n} vertices")));
                }
                let vid = id(fields[1], "vertex id")?;
                if parts.vertices.iter().any(|v| v.id == vid) {
                    return Err(err(line, format!("duplicate vertex id {vid}")));
                }
                parts.vertices.push(Vertex {
                    id: vid,
                    labels: labels(fields[2])?,
                });
            }
            "e" => {
                let Pending::Reading { m, parts, .. } = &mut state else {
                    return Err(err(line, "edge line before any `g` header".into()));
                };
                if fields.len() != 5 {
                    return Err(err(line, "expected `e <id> <src> <dst> <labels>`".into()));
                }
                if parts.edges.len() == *m {
                    return Err(err(line, format!("more than the declared {m} edges")));
                }
                let eid = id(fields[1], "edge id")?;
                let src = id(fields[2], "source")?;
                let dst = id(fields[3], "target")?;
                parts.edges.push(Edge {
                    id: eid,
                    src,
                    dst,
                    labels: labels(fields[4])?,
                });
            }
            other => return Err(err(line, format!("unknown record type `{other}`"))),
        }
    }
    finish(state, &mut graphs, last)?;
    Ok(graphs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GraphBuilder, Label};
    use crate::transform::edge_to_vertex;

    fn dict() -> (LabelDictionary, Label, Label) {
        let mut d = LabelDictionary::new();
        let a = d.intern("a");
        let b = d.intern("b");
        (d, a, b)
    }

    #[test]
    fn round_trip() {
        let (mut d, a, b) = dict();
        let mut g = GraphBuilder::new();
        g.vertex(5, LabelSet::new([a, b])).vertex(9, LabelSet::empty()).vertex(2, LabelSet::single(b));
        g.edge(7, 5, 9, LabelSet::single(a)).edge(3, 9, 2, LabelSet::empty());
        let g = g.build().unwrap();
        let text = render_graphs(&[g.clone(), LabeledDigraph::empty()], &d, "mem").unwrap();
        let back = parse_graphs(&text, &mut d, "mem").unwrap();
        assert_eq!(back, vec![g, LabeledDigraph::empty()]);
        assert!(text.contains("v 9 -\n"));
    }

    #[test]
    fn single_edge_image() {
        let (d, a, b) = dict();
        let mut g = GraphBuilder::new();
        g.vertex(0, LabelSet::single(a)).vertex(1, LabelSet::single(b));
        g.edge(0, 0, 1, LabelSet::single(a));
        let h = edge_to_vertex(&g.build().unwrap()).unwrap();
        let text = render_graphs(&[h], &d, "mem").unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "g 2 2");
        assert_eq!(lines.iter().filter(|l| l.starts_with("v ")).count(), 2);
        assert_eq!(lines.iter().filter(|l| l.starts_with("e ")).count(), 2);
        assert!(text.contains("__DUMMY_V__"));
    }

    #[test]
    fn rejects_bad_input() {
        let (mut d, _, _) = dict();
        let e = parse_graphs("g 2 0\nv 1 a\nv 1 b\n", &mut d, "f").unwrap_err();
        assert!(matches!(e, IoError::Parse { line: 3, .. }), "{e}");
        assert!(e.to_string().contains("duplicate vertex id 1"));
        assert!(parse_graphs("g 2 0\nv 1 a\n", &mut d, "f").is_err());
        assert!(parse_graphs("v 1 a\n", &mut d, "f").is_err());
        assert!(parse_graphs("g 1 1\nv 1 a\ne 0 1 1 a\n", &mut d, "f").is_err());
        assert!(parse_graphs("g 1 0\nv x a\n", &mut d, "f").is_err());
        assert!(parse_graphs("g 1 0\nq\n", &mut d, "f").is_err());
        assert!(parse_graphs("g 1 0\nv 1 a,,b\n", &mut d, "f").is_err());
    }
}
