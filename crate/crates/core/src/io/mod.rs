//! Dataset ingestion and the crate's own file formats.

mod gram;
mod text;
mod tu;

use std::collections::HashMap;

pub use gram::{read_gram, write_gram, GRAM_MAGIC};
pub use text::{parse_graphs, read_graphs, render_graphs, write_graphs, EMPTY_LABELS};
pub use tu::{load_tudataset, to_directed, write_tudataset};

use crate::error::TransformError;
use crate::graph::{Label, LabeledDigraph};
use crate::transform::{transform_stats, TransformStats};

pub const DUMMY_VERTEX_NAME: &str = "__DUMMY_V__";
pub const DUMMY_EDGE_NAME: &str = "__DUMMY_E__";
/// Vertex label used when a dataset has no node label file.
pub const DEFAULT_NODE_NAME: &str = "NODE";
/// Edge label used when a dataset has no edge label file.
pub const DEFAULT_EDGE_NAME: &str = "BOND";

/// Bidirectional map between label spellings and [`Label`] values. The two
/// reserved dummy labels are always present with their fixed values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelDictionary {
    names: Vec<String>,
    index: HashMap<String, Label>,
}

impl Default for LabelDictionary {
    fn default() -> Self {
        Self::new()
    }
}

impl LabelDictionary {
    pub fn new() -> Self {
        let mut d = LabelDictionary {
            names: Vec::new(),
            index: HashMap::new(),
        };
        assert_eq!(d.intern(DUMMY_VERTEX_NAME), Label::DUMMY_VERTEX);
        assert_eq!(d.intern(DUMMY_EDGE_NAME), Label::DUMMY_EDGE);
        d
    }

    pub fn intern(&mut self, name: &str) -> Label {
        if let Some(&l) = self.index.get(name) {
            return l;
        }
        let l = Label(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), l);
        l
    }

    pub fn get(&self, name: &str) -> Option<Label> {
        self.index.get(name).copied()
    }

    pub fn name(&self, label: Label) -> Option<&str> {
        self.names.get(label.0 as usize).map(String::as_str)
    }

    /// Number of labels, reserved ones included.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, &str)> {
        self.names.iter().enumerate().map(|(i, n)| (Label(i as u32), n.as_str()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub graphs: Vec<LabeledDigraph>,
    /// One class per graph; binary datasets use -1 and +1.
    pub class_labels: Vec<i64>,
    pub dictionary: LabelDictionary,
}

/// Dataset-wide means of the per-graph sizes of G, G_phi and H_Phi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageSizes {
    pub graphs: usize,
    pub v_g: f64,
    pub e_g: f64,
    pub v_g_phi: f64,
    pub e_g_phi: f64,
    pub v_h_big_phi: f64,
    pub e_h_big_phi: f64,
}

/// Averages [`TransformStats`] over graphs. Every graph is transformed and
/// its sizes checked against the closed forms.
pub fn average_sizes(graphs: &[LabeledDigraph]) -> Result<AverageSizes, (usize, TransformError)> {
    use rayon::prelude::*;
    let stats: Vec<TransformStats> = graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| transform_stats(g).map_err(|e| (i, e)))
        .collect::<Result<_, _>>()?;
    let k = stats.len().max(1) as f64;
    let mean = |f: fn(&TransformStats) -> usize| stats.iter().map(|s| f(s) as f64).sum::<f64>() / k;
    Ok(AverageSizes {
        graphs: stats.len(),
        v_g: mean(|s| s.n),
        e_g: mean(|s| s.m),
        v_g_phi: mean(|s| s.v_g_phi),
        e_g_phi: mean(|s| s.e_g_phi),
        v_h_big_phi: mean(|s| s.v_h_big_phi),
        e_h_big_phi: mean(|s| s.e_h_big_phi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reserved_labels_first() {
        let mut d = LabelDictionary::new();
        assert_eq!(d.get(DUMMY_VERTEX_NAME), Some(Label::DUMMY_VERTEX));
        assert_eq!(d.get(DUMMY_EDGE_NAME), Some(Label::DUMMY_EDGE));
        let a = d.intern("node:1");
        assert_eq!(a, Label(Label::FIRST_FREE));
        assert_eq!(d.intern("node:1"), a);
        assert_eq!(d.name(a), Some("node:1"));
        assert_eq!(d.len(), 3);
    }
}
