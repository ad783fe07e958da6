//! Property tests for the invariants each module promises.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use skeinlab::eval::{eval_element, eval_gamma_tensor, eval_plucker, eval_trace_word, random_sl2, Sl2, Sl2Point};
use skeinlab::graph::{standard_graph, End};
use skeinlab::skein::rewrite::applicable;
use skeinlab::skein::{
    expand_diagram, expand_diagram_with, expand_to_planar, multiply, trace_word_tensor, truncate_to_stratum,
    ArcDiagram, GammaTensor, SkeinElement, Word,
};
use skeinlab::strata::{classify_strata, stratum_dimension};
use skeinlab::weights::{enumerate_level, hilbert_function, is_admissible, min_level, verlinde_dim, Variant};
use skeinlab::{Rational, RibbonGraph};

const SKEIN_GRAPHS: &[&str] = &["theta", "dumbbell", "trinode", "gamma:1,1", "gamma:0,4", "k4"];

fn graph(name: &str) -> RibbonGraph {
    name.parse::<skeinlab::StandardGraph>().unwrap().build().unwrap()
}

fn pick<T: Clone>(items: &[T], i: usize) -> T {
    items[i % items.len()].clone()
}

fn point(graph: &RibbonGraph, seed: u64) -> Sl2Point {
    Sl2Point::random(graph, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Two planar diagrams at levels `l1`, `l2`, superposed into a generic arc diagram.
fn mixed(graph: &RibbonGraph, l1: u32, i: usize, l2: u32, j: usize) -> ArcDiagram {
    let a = pick(&enumerate_level(graph, l1, Variant::Full), i);
    let b = pick(&enumerate_level(graph, l2, Variant::Full), j);
    ArcDiagram::planar(graph, &a).unwrap().mix(&ArcDiagram::planar(graph, &b).unwrap(), graph)
}

// graph-core

#[test]
fn constructed_graphs_have_declared_type() {
    for g in 0..=4 {
        for n in 0..=5 {
            if 2 * g + n < 3 {
                continue;
            }
            let gr = standard_graph("gamma", &[g, n]).unwrap();
            let beta1 = gr.edge_count() + 1 - gr.vertex_count();
            assert_eq!((beta1, gr.genus(), gr.leaf_count()), (g, g, n), "gamma:{g},{n}");
            assert!(gr.is_trivalent());
        }
    }
    for g in 2..=6 {
        let gr = standard_graph("upsilon", &[g]).unwrap();
        assert_eq!((gr.genus(), gr.leaf_count()), (g, 0));
    }
}

/// Breadth-first distances in the graph whose vertices are the mutation class
/// and whose edges are single resolutions.
fn mutation_distances(class: &[RibbonGraph]) -> Vec<Vec<usize>> {
    let index = |g: &RibbonGraph| class.iter().position(|c| c.is_isomorphic(g)).expect("class is closed");
    let adj: Vec<Vec<usize>> = class
        .iter()
        .map(|c| {
            let mut out = Vec::new();
            for e in c.mutable_edges() {
                out.extend(c.resolutions(e).unwrap().iter().map(index));
                out.push(index(&c.mutate(e).unwrap()));
            }
            out
        })
        .collect();
    (0..class.len())
        .map(|s| {
            let mut dist = vec![usize::MAX; class.len()];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            dist
        })
        .collect()
}

#[test]
fn same_type_graphs_are_few_moves_apart() {
    for g in 0..=3usize {
        for n in 0..=2usize {
            if 2 * g + n < 3 {
                continue;
            }
            let base = standard_graph("gamma", &[g, n]).unwrap();
            let class = base.mutation_class();
            let dist = mutation_distances(&class);
            let bound = base.edge_count();
            for row in &dist {
                assert!(row.iter().all(|&d| d <= bound), "gamma:{g},{n} has members more than {bound} moves apart");
            }
            let named: &[&str] = match (g, n) {
                (2, 0) => &["theta", "dumbbell", "upsilon:2"],
                (3, 0) => &["k4", "upsilon:3"],
                _ => &[],
            };
            for name in named {
                let other = graph(name);
                assert!(class.iter().any(|c| c.is_isomorphic(&other)), "{name} in the class of gamma:{g},{n}");
            }
        }
    }
}

#[test]
fn mutation_is_a_resolution() {
    for name in ["theta", "dumbbell", "k4", "gamma:1,2", "gamma:2,1"] {
        let gr = graph(name);
        for e in gr.mutable_edges() {
            let [a, b] = gr.resolutions(e).unwrap();
            let m = gr.mutate(e).unwrap();
            assert!(m == a || m == b);
            // the move only stays put when both resolutions do
            let stays = m.is_isomorphic(&gr);
            assert_eq!(stays, a.is_isomorphic(&gr) && b.is_isomorphic(&gr), "{name} edge {e}");
            assert_eq!((m.genus(), m.leaf_count()), (gr.genus(), gr.leaf_count()));
        }
    }
}

// weights

#[test]
fn hilbert_matches_verlinde_summed_over_labels() {
    for (g, n) in [(2, 0), (3, 0), (0, 3), (1, 1), (1, 2), (2, 1), (0, 4), (3, 1)] {
        let gr = standard_graph("gamma", &[g, n]).unwrap();
        for level in 0..=4u32 {
            if g == 3 && n == 1 && level > 3 {
                continue;
            }
            let (mut full, mut unip) = (0u64, 0u64);
            let mut labels = vec![0u32; n];
            loop {
                let v = verlinde_dim(g, &labels, level).unwrap();
                unip += v;
                full += v * labels.iter().map(|&l| u64::from(l) + 1).product::<u64>();
                // odometer over labels in 0..=level
                let Some(k) = labels.iter().position(|&l| l < level) else { break };
                labels[k] += 1;
                labels[..k].iter_mut().for_each(|l| *l = 0);
            }
            assert_eq!(hilbert_function(&gr, level, Variant::Full), full, "gamma:{g},{n} L={level}");
            assert_eq!(hilbert_function(&gr, level, Variant::Unipotent), unip, "gamma:{g},{n} L={level}");
            if n == 0 {
                assert_eq!(full, verlinde_dim(g, &[], level).unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn semigroup_is_closed(gi in 0usize..6, l1 in 0u32..=3, l2 in 0u32..=3, i in any::<usize>(), j in any::<usize>()) {
        let gr = graph(["theta", "dumbbell", "trinode", "gamma:1,2", "gamma:0,4", "k4"][gi]);
        let a = pick(&enumerate_level(&gr, l1, Variant::Full), i);
        let b = pick(&enumerate_level(&gr, l2, Variant::Full), j);
        let s = a.add(&b);
        prop_assert!(is_admissible(&gr, &s).unwrap());
        prop_assert!(min_level(&gr, &s).unwrap() <= l1 + l2);
    }
}

// skein

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn expansion_is_confluent(gi in 0usize..SKEIN_GRAPHS.len(), i in any::<usize>(), j in any::<usize>(), seed in any::<u64>()) {
        let gr = graph(SKEIN_GRAPHS[gi]);
        let d = mixed(&gr, 1, i, 2, j);
        let reference = expand_diagram(&gr, &d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let mut choose = |g: &RibbonGraph, d: &ArcDiagram| {
                let options = applicable(g, d);
                (!options.is_empty()).then(|| options[rand::Rng::gen_range(&mut rng, 0..options.len())])
            };
            prop_assert_eq!(&expand_diagram_with(&gr, &d, &mut choose), &reference);
        }
    }

    #[test]
    fn products_have_a_unit_leading_term(gi in 0usize..SKEIN_GRAPHS.len(), l1 in 1u32..=2, l2 in 1u32..=2, i in any::<usize>(), j in any::<usize>()) {
        let gr = graph(SKEIN_GRAPHS[gi]);
        let a = pick(&enumerate_level(&gr, l1, Variant::Full), i);
        let b = pick(&enumerate_level(&gr, l2, Variant::Full), j);
        let x = SkeinElement::basis(&gr, a.clone()).unwrap().with_level(Some(l1));
        let y = SkeinElement::basis(&gr, b.clone()).unwrap().with_level(Some(l2));
        let p = multiply(&gr, &x, &y).unwrap();
        let top = a.add(&b);
        prop_assert!(p.coefficient(&top).abs().is_one());
        let maximal = p.maximal_terms();
        prop_assert_eq!(maximal.len(), 1);
        prop_assert_eq!(&maximal[0].diagram, &top);
        for (d, _) in p.iter() {
            prop_assert!(d.le_weights(&top));
        }

        let all: Vec<usize> = (0..gr.vertex_count()).collect();
        let level = l1 + l2;
        let toric = truncate_to_stratum(&gr, &p, level, &all).unwrap();
        let saturated = |w: &skeinlab::weights::WeightDiagram, l: u32| w.vertex_sums(&gr).iter().all(|&s| s == 2 * l);
        if saturated(&a, l1) && saturated(&b, l2) {
            prop_assert_eq!(toric.len(), 1);
            prop_assert!(toric.coefficient(&top).abs().is_one());
        } else {
            prop_assert!(toric.is_empty());
        }
    }

    #[test]
    fn unipotent_elements_are_closed(gi in 0usize..3, i in any::<usize>(), j in any::<usize>()) {
        let gr = graph(["trinode", "gamma:1,1", "gamma:0,4"][gi]);
        let a = pick(&enumerate_level(&gr, 2, Variant::Unipotent), i);
        let b = pick(&enumerate_level(&gr, 2, Variant::Unipotent), j);
        let p = multiply(&gr, &SkeinElement::basis(&gr, a).unwrap(), &SkeinElement::basis(&gr, b).unwrap()).unwrap();
        for (d, _) in p.iter() {
            prop_assert!(d.is_unipotent(), "{}", d);
        }
    }

    #[test]
    fn reversing_a_path(gi in 0usize..SKEIN_GRAPHS.len(), i in any::<usize>(), j in any::<usize>(), k in any::<usize>(), seed in any::<u64>()) {
        let gr = graph(SKEIN_GRAPHS[gi]);
        let t = GammaTensor::from_diagram(&gr, &mixed(&gr, 1, i, 1, j));
        let arcs: Vec<(usize, usize)> = (0..gr.vertex_count())
            .flat_map(|v| (0..t.arcs[v].len()).map(move |a| (v, a)))
            .collect();
        prop_assume!(!arcs.is_empty());
        let (v, a) = pick(&arcs, k);
        let r = t.reverse_path(&gr, v, a);
        // the path is open iff one of its flipped arcs ends on a leaf slot
        let open = (0..gr.vertex_count()).any(|u| {
            t.arcs[u].iter().zip(&r.arcs[u]).any(|(x, y)| {
                x != y && x.iter().any(|p| matches!(gr.incidence(gr.vertex(u)[p[0]]).end, End::Leaf(_)))
            })
        });
        let p = point(&gr, seed);
        let before = eval_gamma_tensor(&gr, &t, &p).unwrap();
        let after = eval_gamma_tensor(&gr, &r, &p).unwrap();
        prop_assert_eq!(after, if open { -before } else { before });
    }
}

// eval

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evaluation_is_gauge_invariant(gi in 0usize..SKEIN_GRAPHS.len(), i in any::<usize>(), j in any::<usize>(), seed in any::<u64>(), g_seed in any::<u64>(), target in any::<usize>()) {
        let gr = graph(SKEIN_GRAPHS[gi]);
        let t = GammaTensor::from_diagram(&gr, &mixed(&gr, 1, i, 2, j));
        let p = point(&gr, seed);
        let value = eval_gamma_tensor(&gr, &t, &p).unwrap();
        let g = random_sl2(g_seed);
        let v = target % gr.vertex_count();
        prop_assert_eq!(&eval_gamma_tensor(&gr, &t, &p.left_act(v, &g)).unwrap(), &value);
        if gr.edge_count() > 0 {
            let e = target % gr.edge_count();
            prop_assert_eq!(&eval_gamma_tensor(&gr, &t, &p.glue_act(&gr, e, &g)).unwrap(), &value);
        }
    }

    #[test]
    fn expansion_preserves_value(gi in 0usize..SKEIN_GRAPHS.len(), i in any::<usize>(), j in any::<usize>(), seed in any::<u64>()) {
        let gr = graph(SKEIN_GRAPHS[gi]);
        let t = GammaTensor::from_diagram(&gr, &mixed(&gr, 2, i, 1, j));
        let e = expand_to_planar(&gr, &t).unwrap();
        for s in 0..3 {
            let p = point(&gr, seed.wrapping_add(s));
            prop_assert_eq!(eval_gamma_tensor(&gr, &t, &p).unwrap(), eval_element(&gr, &e, &p).unwrap());
        }
    }

    #[test]
    fn trace_words_are_class_functions(word in "x[12](\\^-1)?(\\*x[12](\\^-1)?){0,4}", seed in any::<u64>()) {
        let theta = graph("theta");
        let w: Word = word.parse().unwrap();
        prop_assume!(w.check_reduced().is_ok());
        let t = trace_word_tensor(&theta, &w).unwrap();
        let m = [random_sl2(seed), random_sl2(seed ^ 0x5eed)];
        let p = Sl2Point::phi_lift(&theta, &m).unwrap();
        let value = eval_trace_word(&w, &m).unwrap();
        prop_assert_eq!(&eval_gamma_tensor(&theta, &t, &p).unwrap(), &value);
        // a closed tensor read backwards is the trace of the inverse word
        prop_assert_eq!(&eval_gamma_tensor(&theta, &t.reversed(), &p).unwrap(), &value);
        // conjugating every matrix by one element fixes every trace
        let h = random_sl2(seed.rotate_left(7));
        let conj: Vec<Sl2> = m.iter().map(|a| h.mul(a).mul(&h.inverse())).collect();
        prop_assert_eq!(&eval_trace_word(&w, &conj).unwrap(), &value);
    }
}

#[test]
fn plucker_relation_on_random_triples() {
    for s in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let triple = [Sl2::random(&mut rng), Sl2::random(&mut rng), Sl2::random(&mut rng)];
        let p = |a: usize, b: usize| eval_plucker(&triple, a, b).unwrap();
        for i in 1..=6 {
            for j in i + 1..=6 {
                for k in j + 1..=6 {
                    for l in k + 1..=6 {
                        let r = p(i, j) * p(k, l) - p(i, k) * p(j, l) + p(i, l) * p(j, k);
                        assert!(r.is_zero(), "seed {s}, indices {i}{j}{k}{l}");
                    }
                }
            }
        }
        // columns of one matrix have determinant 1
        for m in 0..3 {
            assert!(p(2 * m + 1, 2 * m + 2).is_one());
        }
    }
}

// strata

const STRATA_GRAPHS: &[&str] = &["theta", "dumbbell", "k4", "trinode", "gamma:1,1", "gamma:1,2", "gamma:0,4", "gamma:2,1", "upsilon:3"];

/// The genus-4 cubic bipartite graph `K_{3,3}`: parts {0,1,2} and {3,4,5}.
fn k33() -> RibbonGraph {
    let mut edges = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            edges.push([3 * a + b, 9 + 3 * b + a]);
        }
    }
    let vertices = (0..6).map(|v| (3 * v..3 * v + 3).collect()).collect();
    RibbonGraph::new(vertices, edges, vec![]).unwrap()
}

#[test]
fn distinctness_is_heritable() {
    let mut graphs: Vec<RibbonGraph> = STRATA_GRAPHS.iter().map(|n| graph(n)).collect();
    graphs.push(k33());
    for gr in &graphs {
        let poset = classify_strata(gr).unwrap();
        let nv = gr.vertex_count();
        let subset = |mask: u32| -> Vec<usize> { (0..nv).filter(|v| mask >> v & 1 == 1).collect() };
        let full = (1u32 << nv) - 1;
        for mask in 0..=full {
            let s = subset(mask);
            // collapse is compatible with enlarging
            for t in 0..=full {
                let union = subset(mask | t);
                let via_class: Vec<usize> = {
                    let mut c = poset.canonical(&s);
                    c.extend(subset(t));
                    c.sort_unstable();
                    c.dedup();
                    c
                };
                assert_eq!(poset.canonical(&union), poset.canonical(&via_class));
            }
            if mask != full && poset.is_distinct(&s) {
                for sub in 0..=mask {
                    if sub & !mask == 0 {
                        assert!(poset.is_distinct(&subset(sub)), "{s:?} distinct but {:?} is not", subset(sub));
                    }
                }
            }
        }
    }
}

#[test]
fn dimension_drops_by_one_along_covers() {
    let mut graphs: Vec<(String, RibbonGraph, u32)> =
        STRATA_GRAPHS.iter().map(|n| (n.to_string(), graph(n), 4)).collect();
    graphs.push(("k33".into(), k33(), 2));
    for (name, gr, probe) in &graphs {
        let poset = classify_strata(gr).unwrap();
        let dims: Vec<usize> = poset
            .classes
            .iter()
            .map(|c| stratum_dimension(gr, &c.canonical_class, *probe).unwrap())
            .collect();
        for &[a, b] in &poset.covers {
            let (ca, cb) = (&poset.classes[a], &poset.classes[b]);
            assert_eq!(dims[a], dims[b] + 1, "{name}: {:?} -> {:?}", ca.canonical_class, cb.canonical_class);
        }
        let by_class: BTreeMap<usize, usize> = poset.classes.iter().zip(&dims).map(|(c, &d)| (c.codim, d)).collect();
        assert!(by_class.keys().all(|&c| c <= 2 * gr.genus() + gr.leaf_count()));
    }
}

#[test]
fn scalar_rees_unit_is_neutral() {
    let theta = graph("theta");
    let x = SkeinElement::basis(&theta, enumerate_level(&theta, 1, Variant::Full)[1].clone()).unwrap();
    let one = SkeinElement::rees_unit(&theta);
    let p = point(&theta, 3);
    let prod = multiply(&theta, &x, &one).unwrap();
    assert_eq!(eval_element(&theta, &prod, &p).unwrap(), eval_element(&theta, &x, &p).unwrap());
    assert!(eval_element(&theta, &one, &p).unwrap() == Rational::one());
}
