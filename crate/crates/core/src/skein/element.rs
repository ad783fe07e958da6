use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rewrite::expand_diagram;
use super::{ArcDiagram, GammaTensor, Orient, SkeinError};
use crate::exec::Exec;
use crate::graph::RibbonGraph;
use crate::weights::{min_level, WeightDiagram, WeightError};
use crate::Rational;

/// The planar lift of a weight diagram, with its routing spelled out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarTensor {
    pub diagram: WeightDiagram,
    /// Per vertex `[x01, x12, x02]`: paths between each pair of slots.
    pub routing: Vec<[u32; 3]>,
    pub leaf_words: Vec<Vec<Orient>>,
}

impl PlanarTensor {
    pub fn to_arc_diagram(&self, graph: &RibbonGraph) -> ArcDiagram {
        ArcDiagram::planar(graph, &self.diagram).expect("planar tensors are admissible")
    }
}

pub fn planar_lift(graph: &RibbonGraph, diagram: &WeightDiagram) -> Result<PlanarTensor, WeightError> {
    let d = ArcDiagram::planar(graph, diagram)?;
    let routing = graph
        .vertices()
        .iter()
        .map(|hs| {
            let [a, b, c] = [0, 1, 2].map(|s| diagram.half_edge_weight(graph, hs[s]));
            [(a + b - c) / 2, (b + c - a) / 2, (a + c - b) / 2]
        })
        .collect();
    Ok(PlanarTensor {
        diagram: diagram.clone(),
        routing,
        leaf_words: d.words,
    })
}

/// A rational combination of planar tensors, keyed by weight diagram, with an
/// optional Rees level.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SkeinElement {
    level: Option<u32>,
    terms: BTreeMap<WeightDiagram, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coefficient: Rational,
    pub diagram: WeightDiagram,
}

impl SkeinElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// A single planar basis element.
    pub fn basis(graph: &RibbonGraph, diagram: WeightDiagram) -> Result<Self, WeightError> {
        min_level(graph, &diagram)?;
        let mut terms = BTreeMap::new();
        terms.insert(diagram, Rational::one());
        Ok(Self { level: None, terms })
    }

    /// The empty tensor at level 1: the Rees parameter.
    pub fn rees_unit(graph: &RibbonGraph) -> Self {
        Self::basis(graph, WeightDiagram::zero(graph))
            .expect("zero diagram is admissible")
            .with_level(Some(1))
    }

    pub fn from_integers(map: BTreeMap<WeightDiagram, BigInt>) -> Self {
        Self {
            level: None,
            terms: map
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(w, c)| (w, Rational::from_integer(c)))
                .collect(),
        }
    }

    pub fn with_level(mut self, level: Option<u32>) -> Self {
        self.level = level;
        self
    }

    pub fn level(&self) -> Option<u32> {
        self.level
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, diagram: &WeightDiagram) -> Rational {
        self.terms.get(diagram).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms sorted by total edge weight, then diagram.
    pub fn terms(&self) -> Vec<Term> {
        let mut out: Vec<Term> = self
            .terms
            .iter()
            .map(|(d, c)| Term {
                coefficient: c.clone(),
                diagram: d.clone(),
            })
            .collect();
        out.sort_by(|a, b| {
            (a.diagram.total_weight(), &a.diagram).cmp(&(b.diagram.total_weight(), &b.diagram))
        });
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&WeightDiagram, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, diagram: WeightDiagram, coefficient: Rational) {
        let entry = self.terms.entry(diagram).or_insert_with(Rational::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        out.level = match (self.level, other.level) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        out
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero().with_level(self.level);
        }
        Self {
            level: self.level,
            terms: self.terms.iter().map(|(d, c)| (d.clone(), c * factor)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Terms maximal in the edge-weight partial order.
    pub fn maximal_terms(&self) -> Vec<Term> {
        self.terms()
            .into_iter()
            .filter(|t| {
                !self
                    .terms
                    .keys()
                    .any(|o| o != &t.diagram && t.diagram.le_weights(o))
            })
            .collect()
    }

    fn check_graph(&self, graph: &RibbonGraph) -> Result<(), SkeinError> {
        for d in self.terms.keys() {
            d.check_keys(graph).map_err(|_| SkeinError::GraphMismatch)?;
        }
        Ok(())
    }
}

impl fmt::Display for SkeinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*P{}", t.coefficient, t.diagram)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    level: Option<u32>,
    terms: Vec<TermFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    coefficient: String,
    diagram: WeightDiagram,
}

impl Serialize for SkeinElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ElementFile {
            level: self.level,
            terms: self
                .terms()
                .into_iter()
                .map(|t| TermFile {
                    coefficient: t.coefficient.to_string(),
                    diagram: t.diagram,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SkeinElement {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let file = ElementFile::deserialize(deserializer)?;
        let mut out = SkeinElement::zero().with_level(file.level);
        for t in file.terms {
            let c: Rational = t
                .coefficient
                .parse()
                .map_err(|_| serde::de::Error::custom(format!("bad coefficient `{}`", t.coefficient)))?;
            out.add_term(t.diagram, c);
        }
        Ok(out)
    }
}

/// Expands a Γ-tensor into the planar basis.
pub fn expand_to_planar(graph: &RibbonGraph, tensor: &GammaTensor) -> Result<SkeinElement, SkeinError> {
    let (d, sign) = tensor.to_diagram(graph)?;
    let e = SkeinElement::from_integers(expand_diagram(graph, &d));
    Ok(if sign < 0 { e.scale(&-Rational::one()) } else { e })
}

/// Bilinear product; levels add when both operands carry one.
pub fn multiply(graph: &RibbonGraph, a: &SkeinElement, b: &SkeinElement) -> Result<SkeinElement, SkeinError> {
    multiply_with(graph, a, b, Exec::default())
}

pub fn multiply_with(
    graph: &RibbonGraph,
    a: &SkeinElement,
    b: &SkeinElement,
    exec: Exec,
) -> Result<SkeinElement, SkeinError> {
    a.check_graph(graph)?;
    b.check_graph(graph)?;
    let pairs: Vec<(&WeightDiagram, &Rational, &WeightDiagram, &Rational)> = a
        .terms
        .iter()
        .flat_map(|(da, ca)| b.terms.iter().map(move |(db, cb)| (da, ca, db, cb)))
        .collect();
    let parts = exec.map(&pairs, |&(da, ca, db, cb)| {
        let pa = ArcDiagram::planar(graph, da).expect("checked");
        let pb = ArcDiagram::planar(graph, db).expect("checked");
        (ca * cb, expand_diagram(graph, &pa.mix(&pb, graph)))
    });
    let mut out = SkeinElement::zero();
    for (c, map) in parts {
        for (d, k) in map {
            out.add_term(d, &c * Rational::from_integer(k));
        }
    }
    out.level = match (a.level, b.level) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    };
    Ok(out)
}

/// Drops every term with fewer than `level` paths through some vertex of `stratum`.
pub fn truncate_to_stratum(
    graph: &RibbonGraph,
    a: &SkeinElement,
    level: u32,
    stratum: &[usize],
) -> Result<SkeinElement, SkeinError> {
    a.check_graph(graph)?;
    let mut out = SkeinElement::zero().with_level(a.level);
    for (d, c) in &a.terms {
        let found = min_level(graph, d)?;
        if found > level {
            return Err(SkeinError::LevelExceeded { found, level });
        }
        let sums = d.vertex_sums(graph);
        if stratum.iter().all(|&v| sums[v] == 2 * level) {
            out.add_term(d.clone(), c.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::StandardGraph;

    fn w(edges: &[u32], leaves: &[[u32; 2]]) -> WeightDiagram {
        WeightDiagram::new(edges.to_vec(), leaves.to_vec())
    }

    #[test]
    fn planar_lift_routing() {
        let tri = StandardGraph::Trinode.build().unwrap();
        let p = planar_lift(&tri, &w(&[], &[[1, 0], [1, 0], [0, 0]])).unwrap();
        assert_eq!(p.routing, vec![[1, 0, 0]]);
        let p = planar_lift(&tri, &w(&[], &[[2, 0], [2, 0], [2, 0]])).unwrap();
        assert_eq!(p.routing, vec![[1, 1, 1]]);
        assert!(planar_lift(&tri, &w(&[], &[[1, 0], [1, 0], [1, 0]])).is_err());
    }

    #[test]
    fn parallel_paths_multiply_without_relations() {
        let tri = StandardGraph::Trinode.build().unwrap();
        let x = SkeinElement::basis(&tri, w(&[], &[[1, 0], [1, 0], [0, 0]])).unwrap();
        let sq = multiply(&tri, &x, &x).unwrap();
        assert_eq!(sq.len(), 1);
        assert_eq!(sq.coefficient(&w(&[], &[[2, 0], [2, 0], [0, 0]])), Rational::one());
    }

    #[test]
    fn rees_unit_raises_level_only() {
        let theta = StandardGraph::Theta.build().unwrap();
        let x = SkeinElement::basis(&theta, w(&[1, 1, 0], &[])).unwrap().with_level(Some(1));
        let y = multiply(&theta, &x, &SkeinElement::rees_unit(&theta)).unwrap();
        assert_eq!(y.level(), Some(2));
        assert_eq!(y.terms(), x.terms());
    }

    #[test]
    fn crossing_product_has_leading_and_lower_term() {
        let theta = StandardGraph::Theta.build().unwrap();
        let a = SkeinElement::basis(&theta, w(&[1, 1, 0], &[])).unwrap();
        let b = SkeinElement::basis(&theta, w(&[1, 0, 1], &[])).unwrap();
        let p = multiply(&theta, &a, &b).unwrap();
        let top = p.maximal_terms();
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].diagram, w(&[2, 1, 1], &[]));
        assert_eq!(p.len(), 2);
        let truncated = truncate_to_stratum(&theta, &p.clone().with_level(Some(2)), 2, &[0, 1]).unwrap();
        assert_eq!(truncated.len(), 1);
        let same = truncate_to_stratum(&theta, &p, 2, &[]).unwrap();
        assert_eq!(same, p);
    }

    #[test]
    fn json_round_trip() {
        let theta = StandardGraph::Theta.build().unwrap();
        let mut e = SkeinElement::basis(&theta, w(&[1, 1, 0], &[])).unwrap();
        e.add_term(w(&[0, 1, 1], &[]), Rational::new(BigInt::from(-3), BigInt::from(2)));
        let text = serde_json::to_string(&e.clone().with_level(Some(2))).unwrap();
        let back: SkeinElement = serde_json::from_str(&text).unwrap();
        assert_eq!(back, e.with_level(Some(2)));
    }
}
