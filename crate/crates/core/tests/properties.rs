mod common;

use dummygraph::io::{
    load_tudataset, parse_graphs, read_gram, render_graphs, write_gram, write_tudataset, Dataset,
    LabelDictionary,
};
use dummygraph::kernels::{
    kernel, normalize_gram, wl_blocks, BaseKernel, FeatureDictionary, KernelFeatures, KernelSpec,
    Variant,
};
use dummygraph::learn::{
    dual_objective, make_splits, svm_predict, svm_train, svm_train_with, DenseKernel, SvmParams,
};
use dummygraph::rng::SplitMix64;
use dummygraph::selftest::{check_round_trip, random_permutation, GraphSampler};
use dummygraph::{edge_to_vertex, inverse_edge_to_vertex, GraphBuilder, Label, LabelSet, LabeledDigraph};
use proptest::prelude::*;

fn graph(seed: u64) -> LabeledDigraph {
    GraphSampler::default().sample(&mut SplitMix64::new(seed))
}

// Two sampled graphs side by side, ids of the second shifted past the first.
fn disjoint_union(a: &LabeledDigraph, b: &LabeledDigraph) -> LabeledDigraph {
    let shift = 1000;
    let mut g = GraphBuilder::new();
    for v in a.vertices() {
        g.vertex(v.id, v.labels.clone());
    }
    for v in b.vertices() {
        g.vertex(v.id + shift, v.labels.clone());
    }
    for e in a.edges() {
        g.edge(e.id, e.src, e.dst, e.labels.clone());
    }
    for e in b.edges() {
        g.edge(e.id + shift, e.src + shift, e.dst + shift, e.labels.clone());
    }
    g.build().unwrap()
}

fn spec_strategy() -> impl Strategy<Value = KernelSpec> {
    let base = prop_oneof![
        (0usize..4).prop_map(|h| BaseKernel::Wl { h }),
        (0usize..4).prop_map(|h| BaseKernel::Wloa { h }),
        Just(BaseKernel::ShortestPath),
        Just(BaseKernel::Graphlet),
    ];
    let variant = prop_oneof![Just(Variant::Plain), Just(Variant::DummyAug), Just(Variant::EdgeToVertex)];
    (base, variant, any::<bool>()).prop_map(|(b, v, x)| KernelSpec::new(b, v, x && v != Variant::Plain).unwrap())
}

fn dictionary() -> LabelDictionary {
    let mut d = LabelDictionary::new();
    for k in Label::FIRST_FREE..Label::FIRST_FREE + 16 {
        assert_eq!(d.intern(&format!("l{k}")), Label(k));
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn round_trip_holds(seed in any::<u64>()) {
        prop_assert_eq!(check_round_trip(&graph(seed)), Ok(()));
    }

    #[test]
    fn round_trip_on_disconnected_graphs(a in any::<u64>(), b in any::<u64>()) {
        let g = disjoint_union(&graph(a), &graph(b));
        prop_assert!(!g.weakly_connected());
        let h = edge_to_vertex(&g).unwrap();
        prop_assert_eq!(inverse_edge_to_vertex(&h).unwrap(), g);
    }

    #[test]
    fn kernels_ignore_vertex_ids(a in any::<u64>(), b in any::<u64>(), spec in spec_strategy()) {
        let (g1, g2) = (graph(a), graph(b));
        let pi = random_permutation(&g2, &mut SplitMix64::new(a ^ b));
        let moved = g2.permute(&pi).unwrap();
        prop_assert_eq!(kernel(&spec, &g1, &g2).unwrap(), kernel(&spec, &g1, &moved).unwrap());
        prop_assert_eq!(kernel(&spec, &g1, &g2).unwrap(), kernel(&spec, &g2, &g1).unwrap());
    }

    #[test]
    fn wl_refinement_is_incremental(seeds in prop::collection::vec(any::<u64>(), 1..6), h in 0usize..4) {
        let graphs: Vec<LabeledDigraph> = seeds.iter().map(|&s| graph(s)).collect();
        let refs: Vec<&LabeledDigraph> = graphs.iter().collect();
        let short = wl_blocks(&refs, h, &mut FeatureDictionary::new());
        let long = wl_blocks(&refs, h + 1, &mut FeatureDictionary::new());
        for (s, l) in short.iter().zip(&long) {
            prop_assert_eq!(s.len(), h + 1);
            for (x, y) in s.iter().zip(l) {
                prop_assert_eq!(x.entries(), y.entries());
            }
        }
    }

    #[test]
    fn normalized_entries_within_unit_interval(seeds in prop::collection::vec(any::<u64>(), 2..8), spec in spec_strategy()) {
        let graphs: Vec<LabeledDigraph> = seeds.iter().map(|&s| graph(s)).collect();
        let m = normalize_gram(&KernelFeatures::extract(&graphs, &spec).unwrap().gram(spec.base.rounds().unwrap_or(0)));
        prop_assert!(m.is_symmetric());
        for &v in m.values() {
            prop_assert!((0.0..=1.0 + 1e-12).contains(&v), "{}", v);
        }
    }

    #[test]
    fn svm_solution_is_feasible_and_monotone(seed in any::<u64>()) {
        let p = common::random_problem(&mut SplitMix64::new(seed));
        let k = DenseKernel::new(p.n, &p.kernel).unwrap();
        let mut trace = Vec::new();
        let m = svm_train_with(&k, &p.labels, &SvmParams::new(p.c), Some(&mut trace)).unwrap();
        let balance: f64 = m.alphas.iter().zip(&p.labels).map(|(a, &y)| a * y as f64).sum();
        prop_assert!(balance.abs() <= 1e-9);
        prop_assert!(m.alphas.iter().all(|&a| (0.0..=p.c).contains(&a)));
        for w in trace.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12);
        }
        prop_assert!((m.objective - dual_objective(&k, &p.labels, &m.alphas)).abs() < 1e-9);
        prop_assert_eq!(m.clone(), svm_train(&k, &p.labels, p.c).unwrap());
    }

    #[test]
    fn svm_scale_robustness(seed in any::<u64>(), scale in 0.1f64..10.0) {
        let p = common::random_problem(&mut SplitMix64::new(seed));
        let tight = |c: f64| SvmParams { tolerance: 1e-10, ..SvmParams::new(c) };
        let base = svm_train_with(&DenseKernel::new(p.n, &p.kernel).unwrap(), &p.labels, &tight(p.c), None).unwrap();
        let scaled_k: Vec<f64> = p.kernel.iter().map(|v| v * scale).collect();
        let scaled = svm_train_with(&DenseKernel::new(p.n, &scaled_k).unwrap(), &p.labels, &tight(p.c / scale), None).unwrap();
        // alphas scale by 1/scale, so a * scale must match where they are unique
        if p.gaussian {
            for (a, b) in base.alphas.iter().zip(&scaled.alphas) {
                prop_assert!((a - b * scale).abs() <= 1e-5 * p.c.max(1.0), "{} vs {}", a, b * scale);
            }
        }
        for row in &p.probes {
            let d = base.decision_value(row).unwrap();
            if d.abs() > 1e-6 {
                let srow: Vec<f64> = row.iter().map(|v| v * scale).collect();
                prop_assert_eq!(svm_predict(&base, row).unwrap(), svm_predict(&scaled, &srow).unwrap());
            }
        }
    }

    #[test]
    fn splits_partition_indices(n in 10usize..400, seed in any::<u64>()) {
        let p = make_splits(n, seed).unwrap();
        let mut all: Vec<usize> = p.train.iter().chain(&p.valid).chain(&p.test).copied().collect();
        all.sort();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        prop_assert!(p.train.len() >= p.valid.len() && p.valid.len() >= p.test.len());
        prop_assert_eq!(p, make_splits(n, seed).unwrap());
    }

    #[test]
    fn graph_text_round_trip(seeds in prop::collection::vec(any::<u64>(), 0..5)) {
        let mut graphs: Vec<LabeledDigraph> = seeds.iter().map(|&s| graph(s)).collect();
        graphs.extend(graphs.clone().iter().map(|g| edge_to_vertex(g).unwrap()));
        let d = dictionary();
        let text = render_graphs(&graphs, &d, "mem").unwrap();
        let mut d2 = d.clone();
        prop_assert_eq!(parse_graphs(&text, &mut d2, "mem").unwrap(), graphs);
        prop_assert_eq!(d2, d);
    }

    #[test]
    fn graph_parser_never_panics(text in "[gve0-9 ,\\-a-z_\n#]{0,200}") {
        let _ = parse_graphs(&text, &mut LabelDictionary::new(), "fuzz");
    }

    #[test]
    fn gram_file_round_trip(seeds in prop::collection::vec(any::<u64>(), 1..6), spec in spec_strategy(), normalize in any::<bool>()) {
        let graphs: Vec<LabeledDigraph> = seeds.iter().map(|&s| graph(s)).collect();
        let raw = KernelFeatures::extract(&graphs, &spec).unwrap().gram(spec.base.rounds().unwrap_or(0));
        let m = if normalize { normalize_gram(&raw) } else { raw };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.gram");
        write_gram(&path, &m).unwrap();
        prop_assert_eq!(read_gram(&path).unwrap(), m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tudataset_load_write_load(seed in any::<u64>(), count in 1usize..6) {
        // a random dataset written in benchmark layout, then loaded twice
        let mut rng = SplitMix64::new(seed);
        let sampler = GraphSampler { max_alphabet: 3, ..GraphSampler::default() };
        let mut dict = LabelDictionary::new();
        let node: Vec<Label> = (0..3).map(|k| dict.intern(&format!("node:{k}"))).collect();
        let edge: Vec<Label> = (0..2).map(|k| dict.intern(&format!("edge:{k}"))).collect();
        let graphs: Vec<LabeledDigraph> = (0..count)
            .map(|_| {
                let g = sampler.sample(&mut rng);
                let mut b = GraphBuilder::new();
                let ids: Vec<u32> = g.vertices().iter().map(|v| v.id).collect();
                for (i, _) in ids.iter().enumerate() {
                    b.vertex(i as u32, LabelSet::single(node[rng.below(3) as usize]));
                }
                for e in g.edges() {
                    let s = ids.iter().position(|&x| x == e.src).unwrap() as u32;
                    let d = ids.iter().position(|&x| x == e.dst).unwrap() as u32;
                    // one label per unordered pair, so both orientations agree
                    let l = LabelSet::single(edge[((s + d) % 2) as usize]);
                    b.edge(0, s, d, l.clone());
                    b.edge(0, d, s, l);
                }
                b.build().unwrap()
            })
            .collect();
        let classes = (0..count).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect();
        let ds = Dataset { name: "RAND".into(), graphs, class_labels: classes, dictionary: dict };
        let a = tempfile::tempdir().unwrap();
        write_tudataset(a.path(), &ds).unwrap();
        let first = load_tudataset(a.path(), "RAND").unwrap();
        let b = tempfile::tempdir().unwrap();
        write_tudataset(b.path(), &first).unwrap();
        let second = load_tudataset(b.path(), "RAND").unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(first.graphs.len(), count);
    }
}
