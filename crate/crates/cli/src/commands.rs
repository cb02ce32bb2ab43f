use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use dummygraph::io::{
    average_sizes, load_tudataset, read_gram, read_graphs, render_graphs, write_gram, LabelDictionary,
};
use dummygraph::kernels::{gram_matrix, normalize_gram, KernelFeatures};
use dummygraph::learn::{default_c_grid, run_with_features, run_with_gram};
use dummygraph::selftest::run_selftest;
use dummygraph::transform::transform_stats;
use dummygraph::{
    augment_dummy, edge_to_vertex, inverse_edge_to_vertex, line_graph, LabeledDigraph, TransformError,
};
use rayon::prelude::*;

use crate::args::{
    seed_range, ClassifyArgs, Command, GramArgs, GraphVariant, Op, RoundtripArgs, SelftestArgs, Source,
    StatsArgs, TransformArgs,
};

/// Bad invocation rather than bad data; reported with exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn run(command: &Command) -> Result<()> {
    match command {
        Command::Transform(a) => transform(a),
        Command::Stats(a) => stats(a),
        Command::Gram(a) => gram(a),
        Command::Classify(a) => classify(a),
        Command::Roundtrip(a) => roundtrip(a),
        Command::Selftest(a) => selftest(a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

struct Loaded {
    name: String,
    graphs: Vec<LabeledDigraph>,
}

fn load(source: &Source) -> Result<Loaded> {
    match (&source.input, &source.dataset, &source.name) {
        (Some(path), None, None) => {
            let graphs = read_graphs(path, &mut LabelDictionary::new())?;
            Ok(Loaded {
                name: path.display().to_string(),
                graphs,
            })
        }
        (None, Some(dir), Some(name)) => {
            let ds = load_tudataset(dir, name)?;
            Ok(Loaded {
                name: ds.name,
                graphs: ds.graphs,
            })
        }
        _ => Err(usage("give either --in FILE or both --dataset DIR and --name NAME")),
    }
}

fn transform(a: &TransformArgs) -> Result<()> {
    let mut dict = LabelDictionary::new();
    let graphs = read_graphs(&a.input, &mut dict)?;
    let op: fn(&LabeledDigraph) -> Result<LabeledDigraph, TransformError> = match a.op {
        Op::Dummy => augment_dummy,
        Op::Line => line_graph,
        Op::E2v => edge_to_vertex,
        Op::InvE2v => inverse_edge_to_vertex,
    };
    let out: Vec<LabeledDigraph> = graphs
        .par_iter()
        .enumerate()
        .map(|(k, g)| op(g).with_context(|| format!("{}: graph {k}", a.input.display())))
        .collect::<Result<_>>()?;
    let shown = a.out.as_ref().map_or("stdout".to_string(), |p| p.display().to_string());
    let text = render_graphs(&out, &dict, &shown)?;
    emit(a.out.as_deref(), &text)
}

fn stats(a: &StatsArgs) -> Result<()> {
    let data = load(&a.source)?;
    let avg = average_sizes(&data.graphs).map_err(|(k, e)| anyhow!("{}: graph {k}: {e}", data.name))?;
    let show = |v: GraphVariant| a.variant.is_none_or(|w| w == v);
    let mut out = String::new();
    writeln!(out, "# {} graphs={}", data.name, avg.graphs)?;
    if show(GraphVariant::G) {
        writeln!(out, "g    avg_v={:.2} avg_e={:.2}", avg.v_g, avg.e_g)?;
    }
    if show(GraphVariant::Gphi) {
        writeln!(out, "gphi avg_v={:.2} avg_e={:.2}", avg.v_g_phi, avg.e_g_phi)?;
    }
    if show(GraphVariant::Hphi) {
        writeln!(out, "hphi avg_v={:.2} avg_e={:.2}", avg.v_h_big_phi, avg.e_h_big_phi)?;
    }
    if a.per_graph {
        for (k, g) in data.graphs.iter().enumerate() {
            let s = transform_stats(g)?;
            write!(out, "graph={k}")?;
            if show(GraphVariant::G) {
                write!(out, " g={}/{}", s.n, s.m)?;
            }
            if show(GraphVariant::Gphi) {
                write!(out, " gphi={}/{}", s.v_g_phi, s.e_g_phi)?;
            }
            if show(GraphVariant::Hphi) {
                write!(out, " hphi={}/{}", s.v_h_big_phi, s.e_h_big_phi)?;
            }
            out.push('\n');
        }
    }
    emit(None, &out)
}

fn gram(a: &GramArgs) -> Result<()> {
    let spec = a.kernel.spec().map_err(|e| usage(e.to_string()))?;
    let data = load(&a.source)?;
    let raw = gram_matrix(&data.graphs, &spec)?;
    let m = if a.normalize { normalize_gram(&raw) } else { raw };
    write_gram(&a.out, &m)?;
    println!("wrote {n}x{n} matrix ({spec}) to {}", a.out.display(), n = m.len());
    Ok(())
}

fn classify(a: &ClassifyArgs) -> Result<()> {
    let seeds = seed_range(&a.seeds).map_err(usage)?;
    let c_grid = if a.c_grid.is_empty() { default_c_grid() } else { a.c_grid.clone() };
    if let Some(c) = c_grid.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
        return Err(usage(format!("C must be positive and finite, got {c}")));
    }
    let ds = load_tudataset(&a.dataset, &a.name)?;
    let report = match &a.gram {
        Some(path) => {
            let m = read_gram(path)?;
            run_with_gram(&m, &ds.class_labels, &seeds, &c_grid)?
        }
        None => {
            let spec = a.kernel.spec().map_err(|e| usage(e.to_string()))?;
            let h_grid: Vec<usize> = if a.h_grid.is_empty() { (0..=a.kernel.h).collect() } else { a.h_grid.clone() };
            if let Some(h) = h_grid.iter().find(|&&h| h > a.kernel.h) {
                return Err(usage(format!("h grid value {h} exceeds --h {}", a.kernel.h)));
            }
            let features = KernelFeatures::extract(&ds.graphs, &spec)?;
            run_with_features(&features, &ds.class_labels, &seeds, &c_grid, &h_grid)?
        }
    };
    let text = format!("# dataset={} graphs={}\n{report}", ds.name, ds.graphs.len());
    emit(a.report.as_deref(), &text)
}

enum Outcome {
    Exact,
    Skipped,
    Mismatch(String),
}

fn roundtrip(a: &RoundtripArgs) -> Result<()> {
    let data = load(&a.source)?;
    let outcomes: Vec<Outcome> = data
        .graphs
        .par_iter()
        .map(|g| match edge_to_vertex(g) {
            Err(TransformError::EmptyEdgeSet | TransformError::IsolatedVertex(_)) => Outcome::Skipped,
            Err(e) => Outcome::Mismatch(e.to_string()),
            Ok(h) => match inverse_edge_to_vertex(&h) {
                Ok(back) if &back == g => Outcome::Exact,
                Ok(_) => Outcome::Mismatch("inverse differs from the original".into()),
                Err(e) => Outcome::Mismatch(e.to_string()),
            },
        })
        .collect();
    let mut exact = 0;
    let mut skipped = 0;
    let mut mismatches = 0;
    for (k, o) in outcomes.iter().enumerate() {
        match o {
            Outcome::Exact => exact += 1,
            Outcome::Skipped => skipped += 1,
            Outcome::Mismatch(why) => {
                mismatches += 1;
                eprintln!("graph {k}: {why}");
            }
        }
    }
    println!(
        "# {} graphs={} exact={exact} skipped={skipped} mismatches={mismatches}",
        data.name,
        outcomes.len()
    );
    if mismatches > 0 {
        bail!("{mismatches} graphs failed the round trip");
    }
    Ok(())
}

fn selftest(a: &SelftestArgs) -> Result<()> {
    let outcomes = run_selftest(a.count, a.seed);
    let mut failed = 0;
    for o in &outcomes {
        println!("{} passed={} failed={}", o.name, o.passed, o.failures.len());
        for f in o.failures.iter().take(5) {
            println!("  {f}");
        }
        failed += o.failures.len();
    }
    if failed > 0 {
        bail!("{failed} self-test cases failed");
    }
    Ok(())
}
