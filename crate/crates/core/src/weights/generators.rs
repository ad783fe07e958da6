//! Minimal generators of the graded semigroup `H_Γ*` and toric binomial relations.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{enumerate_level_with, min_level, GradedWeight, Variant, WeightDiagram, WeightError};
use crate::exec::Exec;
use crate::graph::RibbonGraph;

/// More variables than this makes the level `g + 2` sieve impractical.
const MAX_VARIABLES: usize = 12;
/// Cap on multisets examined by the relation search.
const MAX_MULTISETS: u128 = 4_000_000;

/// Indecomposable elements `(w, L)` of `H_Γ*` (or `U_Γ*`), sorted by level then
/// diagram. Levels `1..=g+2` are sieved; finding one at `g + 2` is an error.
pub fn minimal_generators(graph: &RibbonGraph, variant: Variant) -> Result<Vec<GradedWeight>, WeightError> {
    minimal_generators_with(graph, variant, Exec::default())
}

pub fn minimal_generators_with(
    graph: &RibbonGraph,
    variant: Variant,
    exec: Exec,
) -> Result<Vec<GradedWeight>, WeightError> {
    let vars = graph.edge_count() + graph.leaf_count();
    if vars > MAX_VARIABLES {
        return Err(WeightError::ScaleLimit(format!(
            "{vars} weight variables (limit {MAX_VARIABLES})"
        )));
    }
    let window = graph.genus() as u32 + 2;
    let mut generators: Vec<GradedWeight> = enumerate_level_with(graph, 1, variant, exec)
        .into_iter()
        .map(|diagram| GradedWeight { level: 1, diagram })
        .collect();
    for level in 2..=window {
        let candidates: Vec<WeightDiagram> = enumerate_level_with(graph, level, variant, exec)
            .into_iter()
            .filter(|d| min_level(graph, d) == Ok(level))
            .collect();
        let found = &generators;
        let flags = exec.map(&candidates, |w| {
            !found.iter().any(|g| {
                w.checked_sub(&g.diagram)
                    .is_some_and(|rest| min_level(graph, &rest).is_ok_and(|l| l <= level - g.level))
            })
        });
        let new: Vec<GradedWeight> = candidates
            .into_iter()
            .zip(flags)
            .filter(|(_, indecomposable)| *indecomposable)
            .map(|(diagram, _)| GradedWeight { level, diagram })
            .collect();
        if level == window && !new.is_empty() {
            return Err(WeightError::GenerationBound { level });
        }
        generators.extend(new);
    }
    Ok(generators)
}

/// A toric binomial: two disjoint multisets of generator indices with equal sums.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Relation {
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
}

impl Relation {
    pub fn degree(&self) -> usize {
        self.lhs.len()
    }
}

/// All pairs of disjoint generator multisets of equal size in `2..=degree_bound`
/// whose graded sums agree. Pairs sharing a factor are omitted since they follow
/// from a lower-degree relation.
pub fn find_binomial_relations(
    graph: &RibbonGraph,
    generators: &[GradedWeight],
    degree_bound: usize,
) -> Result<Vec<Relation>, WeightError> {
    for g in generators {
        g.diagram.check_keys(graph)?;
    }
    if degree_bound > 4 {
        return Err(WeightError::ScaleLimit(format!(
            "degree bound {degree_bound} (limit 4)"
        )));
    }
    let k = generators.len() as u128;
    let mut total = 0u128;
    for d in 2..=degree_bound as u128 {
        // multisets of size d from k items
        let mut c = 1u128;
        for i in 0..d {
            c = c * (k + d - 1 - i) / (i + 1);
        }
        total += c;
    }
    if total > MAX_MULTISETS {
        return Err(WeightError::ScaleLimit(format!(
            "{total} generator multisets (limit {MAX_MULTISETS})"
        )));
    }
    let mut relations = Vec::new();
    for degree in 2..=degree_bound {
        let mut groups: HashMap<GradedWeight, Vec<Vec<usize>>> = HashMap::new();
        let mut current = Vec::with_capacity(degree);
        multisets(generators.len(), degree, 0, &mut current, &mut |m| {
            let sum = m
                .iter()
                .skip(1)
                .fold(generators[m[0]].clone(), |acc, &i| acc.add(&generators[i]));
            groups.entry(sum).or_default().push(m.to_vec());
        });
        for members in groups.into_values() {
            for (i, a) in members.iter().enumerate() {
                for b in &members[i + 1..] {
                    if a.iter().all(|x| !b.contains(x)) {
                        let (lhs, rhs) = if a < b { (a, b) } else { (b, a) };
                        relations.push(Relation {
                            lhs: lhs.clone(),
                            rhs: rhs.clone(),
                        });
                    }
                }
            }
        }
    }
    relations.sort();
    relations.dedup();
    Ok(relations)
}

fn multisets(n: usize, size: usize, start: usize, current: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    if current.len() == size {
        visit(current);
        return;
    }
    for i in start..n {
        current.push(i);
        multisets(n, size, i, current, visit);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::StandardGraph;

    #[test]
    fn theta_is_a_polynomial_ring() {
        let theta = StandardGraph::Theta.build().unwrap();
        let gens = minimal_generators_with(&theta, Variant::Full, Exec::Sequential).unwrap();
        let level1: Vec<String> = gens.iter().map(|g| format!("{};{}", g.diagram, g.level)).collect();
        assert_eq!(level1, ["(0,0,0);1", "(0,1,1);1", "(1,0,1);1", "(1,1,0);1"]);
        let rels = find_binomial_relations(&theta, &gens, 4).unwrap();
        assert!(rels.is_empty());
    }

    #[test]
    fn trinode_generators_are_level_one() {
        let tri = StandardGraph::Trinode.build().unwrap();
        let gens = minimal_generators_with(&tri, Variant::Full, Exec::Parallel).unwrap();
        assert_eq!(gens.len(), 13);
        assert!(gens.iter().all(|g| g.level == 1));
        let rels = find_binomial_relations(&tri, &gens, 2).unwrap();
        assert!(!rels.is_empty());
        for r in &rels {
            let sum = |m: &[usize]| {
                m.iter()
                    .skip(1)
                    .fold(gens[m[0]].clone(), |acc, &i| acc.add(&gens[i]))
            };
            assert_eq!(sum(&r.lhs), sum(&r.rhs));
        }
    }

    #[test]
    fn relation_search_rejects_large_bounds() {
        let theta = StandardGraph::Theta.build().unwrap();
        let gens = minimal_generators_with(&theta, Variant::Full, Exec::Sequential).unwrap();
        assert!(matches!(
            find_binomial_relations(&theta, &gens, 5),
            Err(WeightError::ScaleLimit(_))
        ));
    }
}
