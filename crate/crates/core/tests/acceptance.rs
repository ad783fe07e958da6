//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero on any failure.
//!
//! Every identity below is checked in exact rational arithmetic, so the only
//! pinned tolerance is the wall-clock bound of criterion 1.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use skeinlab::eval::{eval_element, eval_trace_word, rank_check, Sl2, Sl2Point};
use skeinlab::graph::{RibbonGraph, StandardGraph};
use skeinlab::skein::{expand_to_planar, multiply, trace_word_tensor, ArcDiagram, GammaTensor, SkeinElement};
use skeinlab::strata::{classify_strata, saturated_vertices, witness_weighting, Witness};
use skeinlab::weights::{
    enumerate_level, exact_level_count, hilbert_function, minimal_generators, verlinde_dim, visit_level, GradedWeight,
    Variant, WeightDiagram,
};
use skeinlab::Rational;

/// Wall-clock bound for criterion 1.
const VERLINDE_BUDGET: Duration = Duration::from_secs(10);
/// Random points for the numeric identities of criteria 4 and 5.
const POINTS: usize = 100;
/// Highest level scanned by the enumeration oracle of criterion 6. Level 4 is
/// not enough: on a genus-4 graph with six vertices some saturation profiles
/// first occur at level 5.
const SCAN_LEVEL: u32 = 6;

type Outcome = Result<String, String>;

fn std_graph(name: &str) -> RibbonGraph {
    name.parse::<StandardGraph>().unwrap().build().unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn verlinde_agreement() -> Outcome {
    let start = Instant::now();
    for (g, graph) in [(2, std_graph("theta")), (3, std_graph("k4"))] {
        for level in 1..=4 {
            let h = hilbert_function(&graph, level, Variant::Full);
            let v = verlinde_dim(g, &[], level).map_err(|e| e.to_string())?;
            ensure(h == v, || format!("g={g} L={level}: hilbert {h} != verlinde {v}"))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < VERLINDE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("g=2,3 L=1..4 agree in {} ms", elapsed.as_millis()))
}

fn mutation_invariance() -> Outcome {
    let theta = std_graph("theta");
    let dumbbell = std_graph("dumbbell");
    ensure(theta.mutate(0).unwrap().is_isomorphic(&dumbbell), || "theta does not mutate to dumbbell".into())?;
    let genus3 = std_graph("k4").mutation_class();
    ensure(genus3.len() >= 2, || "genus-3 class is a single graph".into())?;
    for level in 1..=4 {
        for variant in [Variant::Full, Variant::Unipotent] {
            let a = hilbert_function(&theta, level, variant);
            let b = hilbert_function(&dumbbell, level, variant);
            ensure(a == b, || format!("theta/dumbbell L={level}: {a} != {b}"))?;
        }
        let counts: BTreeSet<u64> = genus3
            .iter()
            .map(|g| hilbert_function(g, level, Variant::Full))
            .collect();
        ensure(counts.len() == 1, || format!("genus 3 L={level}: counts {counts:?}"))?;
    }
    Ok(format!("theta/dumbbell and {} genus-3 graphs, L<=4", genus3.len()))
}

fn basis_rank() -> Outcome {
    let mut notes = Vec::new();
    for name in ["theta", "trinode"] {
        let graph = std_graph(name);
        for level in 1..=2 {
            let tensors: Vec<GammaTensor> = enumerate_level(&graph, level, Variant::Full)
                .iter()
                .map(|w| GammaTensor::from_diagram(&graph, &ArcDiagram::planar(&graph, w).unwrap()))
                .collect();
            let h = hilbert_function(&graph, level, Variant::Full);
            let r = rank_check(&graph, &tensors, tensors.len() + 4, 17).map_err(|e| e.to_string())?;
            ensure(r as u64 == h, || format!("{name} L={level}: rank {r} != hilbert {h}"))?;
            notes.push(format!("{name} L={level} rank {r}"));
        }
    }
    Ok(notes.join(", "))
}

fn basis(graph: &RibbonGraph, edges: &[u32]) -> SkeinElement {
    SkeinElement::basis(graph, WeightDiagram::new(edges.to_vec(), vec![])).unwrap()
}

fn theta_trace_identity() -> Outcome {
    let theta = std_graph("theta");
    let trace = |w: &str| expand_to_planar(&theta, &trace_word_tensor(&theta, &w.parse().unwrap()).unwrap()).unwrap();
    let (m, n) = (trace("x1"), trace("x2"));
    let product = multiply(&theta, &m, &n).map_err(|e| e.to_string())?;
    let sum = trace("x1*x2").add(&trace("x1*x2^-1"));
    ensure(product == sum, || format!("tr(M)tr(N) = {product}, tr(MN)+tr(MN^-1) = {sum}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..POINTS {
        let ms = [Sl2::random(&mut rng), Sl2::random(&mut rng)];
        let p = Sl2Point::phi_lift(&theta, &ms).unwrap();
        let lhs = eval_element(&theta, &product, &p).unwrap();
        let tr = |w: &str| eval_trace_word(&w.parse().unwrap(), &ms).unwrap();
        ensure(lhs == tr("x1") * tr("x2"), || "product does not evaluate to tr(M)tr(N)".into())?;
        ensure(lhs == tr("x1*x2") + tr("x1*x2^-1"), || "trace identity fails".into())?;
    }
    Ok(format!("{} terms, exact and on {POINTS} points", product.len()))
}

fn k4_relation() -> Outcome {
    let k4 = std_graph("k4");
    let weight = |name: &str| -> Vec<u32> {
        match name {
            "111" => vec![1, 1, 1, 0, 0, 0],
            "100" => vec![1, 0, 0, 1, 1, 0],
            "010" => vec![0, 1, 0, 1, 0, 1],
            "001" => vec![0, 0, 1, 0, 1, 1],
            "110" => vec![1, 1, 0, 0, 1, 1],
            "101" => vec![1, 0, 1, 1, 0, 1],
            "011" => vec![0, 1, 1, 1, 1, 0],
            "000" => vec![0; 6],
            _ => unreachable!(),
        }
    };
    let sum = |names: [&str; 4]| -> Vec<u32> {
        names
            .iter()
            .map(|n| weight(n))
            .fold(vec![0; 6], |acc, w| acc.iter().zip(&w).map(|(a, b)| a + b).collect())
    };
    let odd = ["111", "100", "010", "001"];
    let even = ["110", "101", "011", "000"];
    ensure(sum(odd) == sum(even), || "weight identity fails".into())?;

    let p = |n: &str| basis(&k4, &weight(n)).with_level(Some(1));
    let prod = |names: [&str; 4]| {
        names
            .iter()
            .skip(1)
            .fold(p(names[0]), |acc, n| multiply(&k4, &acc, &p(n)).unwrap())
    };
    let difference = prod(even).sub(&prod(odd));
    let top = WeightDiagram::new(sum(odd), vec![]);
    ensure(difference.coefficient(&top).is_zero(), || "leading terms do not cancel".into())?;
    ensure(difference.iter().all(|(w, _)| w.le_weights(&top) && w != &top), || {
        "difference has terms outside the lower order ideal".into()
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let identity = Sl2Point::identity(&k4);
    let value = |n: &str, pt: &Sl2Point| eval_element(&k4, &p(n), pt).unwrap();
    for _ in 0..POINTS {
        let pt = Sl2Point::random(&k4, &mut rng);
        let direct: Rational = even.iter().map(|n| value(n, &pt)).product::<Rational>()
            - odd.iter().map(|n| value(n, &pt)).product::<Rational>();
        ensure(eval_element(&k4, &difference, &pt).unwrap() == direct, || {
            "expansion disagrees with the product of values".into()
        })?;
    }

    // The published relation uses x = -tr(loop) and x000 = 1. Each planar loop
    // evaluates to s * tr with a fixed sign s, read off at the identity.
    let x = |n: &str| -> SkeinElement {
        if n == "000" {
            return SkeinElement::rees_unit(&k4);
        }
        let s = value(n, &identity) / Rational::from_integer(2.into());
        p(n).scale(&-s)
    };
    let mono = |names: &[&str]| {
        names
            .iter()
            .skip(1)
            .fold(x(names[0]), |acc, n| multiply(&k4, &acc, &x(n)).unwrap())
    };
    let q = |k: i64| Rational::from_integer(k.into());
    let mut relation = mono(&["111", "100", "010", "001"]).sub(&mono(&["110", "101", "011", "000"]));
    for n in ["110", "101", "011", "100", "010", "001", "111"] {
        relation = relation.add(&mono(&[n, n, "000", "000"]));
    }
    relation = relation.sub(&mono(&["000", "000", "000", "000"]).scale(&q(4)));
    for t in [
        ["111", "100", "011", "000"],
        ["111", "010", "101", "000"],
        ["111", "001", "110", "000"],
        ["100", "010", "110", "000"],
        ["100", "001", "101", "000"],
        ["010", "001", "011", "000"],
    ] {
        relation = relation.add(&mono(&t));
    }
    ensure(relation.is_empty(), || format!("15-term relation leaves {relation}"))?;
    for _ in 0..POINTS {
        let pt = Sl2Point::random(&k4, &mut rng);
        ensure(eval_element(&k4, &relation, &pt).unwrap().is_zero(), || "relation fails numerically".into())?;
    }
    Ok(format!(
        "weights balance; difference has {} lower terms; 15-term relation vanishes with x = -tr",
        difference.len()
    ))
}

/// Saturation profiles of unipotent diagrams of level `1..=SCAN_LEVEL`,
/// stopping early once `expected` distinct profiles have been seen.
fn scanned_profiles(graph: &RibbonGraph, expected: usize) -> BTreeSet<Vec<usize>> {
    let mut seen = BTreeSet::new();
    for level in 1..=SCAN_LEVEL {
        visit_level(graph, level, Variant::Unipotent, &mut |d| {
            seen.insert(saturated_vertices(graph, &GradedWeight { level, diagram: d.clone() }));
            seen.len() < expected
        });
        if seen.len() >= expected {
            break;
        }
    }
    seen
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
}

fn strata_posets() -> Outcome {
    let dumbbell = classify_strata(&std_graph("dumbbell")).unwrap();
    ensure(dumbbell.codims() == vec![0, 1, 1, 2], || format!("dumbbell codims {:?}", dumbbell.codims()))?;
    let theta = classify_strata(&std_graph("theta")).unwrap();
    ensure(theta.codims() == vec![0, 1], || format!("theta codims {:?}", theta.codims()))?;
    let one_leaf = std_graph("gamma:2,1").mutation_class();
    for g in &one_leaf {
        let p = classify_strata(g).unwrap();
        ensure(p.boolean && p.classes.len() == 1 << g.vertex_count(), || "1-leaf genus 2 not Boolean".into())?;
        ensure(p.classes.iter().all(|c| c.codim == c.defining_set.len()), || "codim != |S|".into())?;
    }

    let mut graphs: Vec<RibbonGraph> = Vec::new();
    for (g, n) in [(2, 0), (3, 0), (4, 0), (2, 1), (1, 2), (0, 4)] {
        graphs.extend(std_graph(&format!("gamma:{g},{n}")).mutation_class());
    }
    for (g, n) in [(0, 3), (1, 1), (0, 5), (1, 3), (2, 2), (0, 6), (1, 4), (2, 3), (3, 1), (3, 2), (0, 8)] {
        graphs.push(std_graph(&format!("gamma:{g},{n}")));
    }
    let mut checked = 0;
    for graph in graphs.iter().filter(|g| g.vertex_count() <= 6) {
        let poset = classify_strata(graph).unwrap();
        let expected = subsets(graph.vertex_count()).filter(|s| poset.is_distinct(s)).count();
        let profiles = scanned_profiles(graph, expected);
        for s in subsets(graph.vertex_count()) {
            let distinct = poset.is_distinct(&s);
            let scanned = profiles.contains(&s);
            let witness = witness_weighting(graph, &s, SCAN_LEVEL);
            if let Witness::Found(w) = &witness {
                ensure(w.is_valid(graph) && saturated_vertices(graph, w) == s, || {
                    format!("bad witness for {s:?}")
                })?;
            }
            let found = matches!(witness, Witness::Found(_));
            ensure(distinct == scanned && scanned == found, || {
                format!("{:?} S={s:?}: classify {distinct}, scan {scanned}, witness {found}", graph.to_file())
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "dumbbell (0,1,1,2), theta (0,1), {} one-leaf genus-2 graphs Boolean, {checked} subsets over {} graphs agree",
        one_leaf.len(),
        graphs.iter().filter(|g| g.vertex_count() <= 6).count()
    ))
}

fn generation_bound() -> Outcome {
    let mut graphs: Vec<(String, RibbonGraph)> = Vec::new();
    for (g, n) in [(0, 3), (0, 4), (1, 1), (1, 2), (2, 0), (2, 1), (3, 0)] {
        for (i, graph) in std_graph(&format!("gamma:{g},{n}")).mutation_class().into_iter().enumerate() {
            graphs.push((format!("({g},{n})#{i}"), graph));
        }
    }
    let mut notes = Vec::new();
    for (name, graph) in &graphs {
        let gens = minimal_generators(graph, Variant::Full).map_err(|e| format!("{name}: {e}"))?;
        let top = gens.iter().map(|w| w.level).max().unwrap_or(0);
        let bound = graph.genus() as u32 + 1;
        ensure(top <= bound.max(1), || format!("{name}: generator at level {top}"))?;
        notes.push(top);
    }
    Ok(format!("{} graphs with g<=3, top generator levels {:?}", graphs.len(), notes))
}

fn exact_levels() -> Outcome {
    let theta = std_graph("theta");
    let mut counts = Vec::new();
    for level in 1..=4 {
        let exact = exact_level_count(&theta, level, Variant::Full);
        let h = hilbert_function(&theta, level, Variant::Full);
        let prev = hilbert_function(&theta, level - 1, Variant::Full);
        ensure(exact == h - prev, || format!("L={level}: {exact} != {h} - {prev}"))?;
        counts.push(exact);
    }
    Ok(format!("theta exact-level counts {counts:?}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("verlinde", verlinde_agreement),
        ("mutation invariance", mutation_invariance),
        ("basis rank", basis_rank),
        ("theta trace identity", theta_trace_identity),
        ("k4 relation", k4_relation),
        ("strata", strata_posets),
        ("generation bound", generation_bound),
        ("exact levels", exact_levels),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} [{ms} ms]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why} [{ms} ms]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

