//! Command-line arguments. The same structures are (de)serialized as the
//! TOML configuration file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dummygraph::kernels::{AddendScaling, BaseKernel, KernelSpec, Variant, DEFAULT_WL_ROUNDS};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Parser, Serialize, Deserialize)]
#[command(name = "dummygraph", version, about = "Dummy-node graph transforms, graph kernels and SVM evaluation")]
#[serde(deny_unknown_fields)]
pub struct Cli {
    /// Worker threads (0 uses all cores)
    #[arg(long, global = true, env = "DUMMYGRAPH_THREADS")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,

    /// Read the run configuration from a TOML file
    #[arg(long, global = true, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Print the resolved configuration as TOML and exit
    #[arg(long, global = true)]
    #[serde(skip)]
    pub dump_config: bool,

    #[command(subcommand)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Apply a transform to every graph of a graph file
    Transform(TransformArgs),
    /// Print average sizes of graphs and their derived graphs
    Stats(StatsArgs),
    /// Compute a Gram matrix and write it in binary form
    Gram(GramArgs),
    /// Run model selection and evaluation over seeded splits
    Classify(ClassifyArgs),
    /// Check that the edge-to-vertex transform inverts exactly on every graph
    Roundtrip(RoundtripArgs),
    /// Run the built-in randomized transform checks
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Op {
    /// Add the dummy vertex
    Dummy,
    /// Directed line graph
    Line,
    /// Edge-to-vertex transform
    E2v,
    /// Inverse of the edge-to-vertex transform
    InvE2v,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformArgs {
    #[arg(long, value_enum)]
    pub op: Op,
    /// Input graph file
    #[arg(long = "in", value_name = "FILE")]
    #[serde(rename = "in")]
    pub input: PathBuf,
    /// Output graph file (stdout when absent)
    #[arg(long, value_name = "FILE")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

/// A graph file or a dataset directory in benchmark layout.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Source {
    /// Graph file
    #[arg(long = "in", value_name = "FILE", conflicts_with_all = ["dataset", "name"])]
    #[serde(rename = "in", default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// Directory holding <NAME>_A.txt and friends
    #[arg(long, value_name = "DIR", requires = "name")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<PathBuf>,
    /// Dataset name
    #[arg(long, requires = "dataset")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphVariant {
    /// The graph itself
    #[value(alias = "plain")]
    G,
    /// Dummy-augmented graph
    #[value(alias = "dummy")]
    Gphi,
    /// Edge-to-vertex image
    #[value(alias = "e2v")]
    Hphi,
}

impl From<GraphVariant> for Variant {
    fn from(v: GraphVariant) -> Self {
        match v {
            GraphVariant::G => Variant::Plain,
            GraphVariant::Gphi => Variant::DummyAug,
            GraphVariant::Hphi => Variant::EdgeToVertex,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsArgs {
    #[command(flatten)]
    #[serde(default)]
    pub source: Source,
    /// Report only one graph family
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<GraphVariant>,
    /// Also print one line per graph
    #[arg(long)]
    #[serde(default)]
    pub per_graph: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelName {
    /// Weisfeiler-Lehman subtree
    Wl,
    /// Weisfeiler-Lehman optimal assignment
    Wloa,
    /// Shortest path
    Sp,
    /// Size-3 graphlets
    Gr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    /// Normalize each addend before summing
    PerAddend,
    /// Sum raw kernel values
    RawSum,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelArgs {
    #[arg(long, value_enum, default_value = "wl")]
    pub kernel: KernelName,
    /// Refinement rounds of WL-type kernels
    #[arg(long, default_value_t = DEFAULT_WL_ROUNDS)]
    pub h: usize,
    /// Graph the kernel is computed on
    #[arg(long, value_enum, default_value = "g")]
    pub variant: GraphVariant,
    /// Add the kernel on the original graph
    #[arg(long)]
    #[serde(default)]
    pub extended: bool,
    /// How the addends of an extended kernel are combined
    #[arg(long, value_enum, default_value = "per-addend")]
    pub scaling: Scaling,
}

impl KernelArgs {
    pub fn spec(&self) -> Result<KernelSpec, dummygraph::KernelError> {
        let base = match self.kernel {
            KernelName::Wl => BaseKernel::Wl { h: self.h },
            KernelName::Wloa => BaseKernel::Wloa { h: self.h },
            KernelName::Sp => BaseKernel::ShortestPath,
            KernelName::Gr => BaseKernel::Graphlet,
        };
        let scaling = match self.scaling {
            Scaling::PerAddend => AddendScaling::PerAddend,
            Scaling::RawSum => AddendScaling::RawSum,
        };
        Ok(KernelSpec::new(base, self.variant.into(), self.extended)?.with_scaling(scaling))
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GramArgs {
    #[command(flatten)]
    #[serde(default)]
    pub source: Source,
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Cosine-normalize the matrix
    #[arg(long)]
    #[serde(default)]
    pub normalize: bool,
    /// Output file
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyArgs {
    /// Directory holding <NAME>_A.txt and friends
    #[arg(long, value_name = "DIR")]
    pub dataset: PathBuf,
    /// Dataset name
    #[arg(long)]
    pub name: String,
    /// Use a precomputed Gram matrix instead of computing one
    #[arg(long, value_name = "FILE")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<PathBuf>,
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Inclusive seed range
    #[arg(long, default_value = "2020..2029", value_parser = parse_seed_range)]
    pub seeds: String,
    /// Comma-separated values of C (default 1e-7,1e-6,...,1e3)
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub c_grid: Vec<f64>,
    /// Comma-separated WL rounds to search (default 0..=h)
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub h_grid: Vec<usize>,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "FILE")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundtripArgs {
    #[command(flatten)]
    #[serde(default)]
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelftestArgs {
    /// Number of random graphs
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, default_value_t = 2020)]
    pub seed: u64,
}

/// Parses `A..B` (inclusive) or a single seed.
pub fn seed_range(s: &str) -> Result<Vec<u64>, String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("bad seed `{t}`: {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty seed range `{s}`"));
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![num(s)?]),
    }
}

fn parse_seed_range(s: &str) -> Result<String, String> {
    seed_range(s).map(|_| s.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn seed_ranges() {
        assert_eq!(seed_range("2020..2029").unwrap().len(), 10);
        assert_eq!(seed_range("3..=4").unwrap(), vec![3, 4]);
        assert_eq!(seed_range("7").unwrap(), vec![7]);
        assert!(seed_range("5..4").is_err());
        assert!(seed_range("x..4").is_err());
    }

    #[test]
    fn config_round_trip() {
        let cli = Cli::try_parse_from([
            "dummygraph", "--threads", "3", "classify", "--dataset", "d", "--name", "X", "--kernel", "sp",
            "--variant", "gphi", "--extended", "--c-grid", "0.1,1",
        ])
        .unwrap();
        let text = toml::to_string(&cli).unwrap();
        let back: Cli = toml::from_str(&text).unwrap();
        assert_eq!(back, cli);
    }

    #[test]
    fn extended_needs_a_variant() {
        let cli = Cli::try_parse_from(["dummygraph", "gram", "--in", "f", "--extended", "--out", "o"]).unwrap();
        let Some(Command::Gram(g)) = cli.command else { panic!() };
        assert!(g.kernel.spec().is_err());
    }
}
