//! Weight diagrams, the semigroups `H_Γ` / `U_Γ` and their level filtration.
//!
//! A diagram assigns a non-negative weight to every internal edge and an
//! `[up, down]` split to every leaf; the leaf edge carries `up + down`. At each
//! vertex the three incident weights form a triangle with even perimeter, and a
//! diagram has level `L` when every perimeter is at most `2L`.

mod generators;
mod verlinde;

pub use generators::{find_binomial_relations, minimal_generators, minimal_generators_with, Relation};
pub use verlinde::{verlinde_dim, verlinde_formula, VerlindeValue};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::graph::{End, GraphError, RibbonGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("diagram has {found_edges} edge weights and {found_leaves} leaf splits, graph has {edges} edges and {leaves} leaves")]
    KeyMismatch {
        edges: usize,
        leaves: usize,
        found_edges: usize,
        found_leaves: usize,
    },
    #[error("diagram violates the triangle or parity condition at vertex {vertex}")]
    NotAdmissible { vertex: usize },
    #[error("leaf label {label} exceeds level {level}")]
    LabelExceedsLevel { label: u32, level: u32 },
    #[error("input too large: {0}")]
    ScaleLimit(String),
    #[error("Verlinde formula gives {formula} but the fusion count is {count}")]
    OracleMismatch { formula: String, count: u64 },
    #[error("indecomposable element found at level {level}, above the generation bound")]
    GenerationBound { level: u32 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `Full` is `H_Γ`; `Unipotent` is `U_Γ`, the diagrams with every leaf split `[w, 0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Full,
    Unipotent,
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(Variant::Full),
            "unipotent" => Ok(Variant::Unipotent),
            _ => Err(format!("unknown variant `{s}` (expected full or unipotent)")),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Full => "full",
            Variant::Unipotent => "unipotent",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightDiagram {
    /// Indexed by internal edge id.
    pub edges: Vec<u32>,
    /// Indexed by leaf id: `[up, down]`.
    #[serde(default)]
    pub leaves: Vec<[u32; 2]>,
}

impl WeightDiagram {
    pub fn zero(graph: &RibbonGraph) -> Self {
        Self {
            edges: vec![0; graph.edge_count()],
            leaves: vec![[0, 0]; graph.leaf_count()],
        }
    }

    pub fn new(edges: Vec<u32>, leaves: Vec<[u32; 2]>) -> Self {
        Self { edges, leaves }
    }

    pub fn check_keys(&self, graph: &RibbonGraph) -> Result<(), WeightError> {
        if self.edges.len() != graph.edge_count() || self.leaves.len() != graph.leaf_count() {
            return Err(WeightError::KeyMismatch {
                edges: graph.edge_count(),
                leaves: graph.leaf_count(),
                found_edges: self.edges.len(),
                found_leaves: self.leaves.len(),
            });
        }
        Ok(())
    }

    /// Weight carried by a half-edge: its edge weight or its leaf total.
    pub fn half_edge_weight(&self, graph: &RibbonGraph, h: usize) -> u32 {
        match graph.incidence(h).end {
            End::Edge { edge, .. } => self.edges[edge],
            End::Leaf(l) => self.leaves[l][0] + self.leaves[l][1],
        }
    }

    /// Sum of incident weights at every vertex; loops count twice.
    pub fn vertex_sums(&self, graph: &RibbonGraph) -> Vec<u32> {
        graph
            .vertices()
            .iter()
            .map(|hs| hs.iter().map(|&h| self.half_edge_weight(graph, h)).sum())
            .collect()
    }

    pub fn is_unipotent(&self) -> bool {
        self.leaves.iter().all(|s| s[1] == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.edges.iter().all(|&w| w == 0) && self.leaves.iter().all(|s| s == &[0, 0])
    }

    /// Sum of internal edge weights and leaf totals.
    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|&w| u64::from(w)).sum::<u64>()
            + self
                .leaves
                .iter()
                .map(|s| u64::from(s[0] + s[1]))
                .sum::<u64>()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            edges: self.edges.iter().zip(&other.edges).map(|(a, b)| a + b).collect(),
            leaves: self
                .leaves
                .iter()
                .zip(&other.leaves)
                .map(|(a, b)| [a[0] + b[0], a[1] + b[1]])
                .collect(),
        }
    }

    /// Componentwise difference, `None` if any entry would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let edges = self
            .edges
            .iter()
            .zip(&other.edges)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()?;
        let leaves = self
            .leaves
            .iter()
            .zip(&other.leaves)
            .map(|(a, b)| Some([a[0].checked_sub(b[0])?, a[1].checked_sub(b[1])?]))
            .collect::<Option<Vec<_>>>()?;
        Some(Self { edges, leaves })
    }

    /// Edge-weight partial order: every internal weight and leaf total at most
    /// the other's.
    pub fn le_weights(&self, other: &Self) -> bool {
        self.edges.iter().zip(&other.edges).all(|(a, b)| a <= b)
            && self
                .leaves
                .iter()
                .zip(&other.leaves)
                .all(|(a, b)| a[0] + a[1] <= b[0] + b[1])
    }
}

impl fmt::Display for WeightDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        if !self.leaves.is_empty() {
            write!(f, "|")?;
            for (i, [u, d]) in self.leaves.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{u}+{d}")?;
            }
        }
        write!(f, ")")
    }
}

/// An element `(w, L)` of the graded semigroup `H_Γ*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GradedWeight {
    pub level: u32,
    pub diagram: WeightDiagram,
}

impl GradedWeight {
    pub fn add(&self, other: &Self) -> Self {
        Self {
            level: self.level + other.level,
            diagram: self.diagram.add(&other.diagram),
        }
    }

    pub fn is_valid(&self, graph: &RibbonGraph) -> bool {
        min_level(graph, &self.diagram).is_ok_and(|l| l <= self.level)
    }
}

fn triangle_even(a: u32, b: u32, c: u32) -> bool {
    a <= b + c && b <= a + c && c <= a + b && (a + b + c).is_multiple_of(2)
}

fn first_violation(graph: &RibbonGraph, diagram: &WeightDiagram) -> Option<usize> {
    graph.vertices().iter().position(|hs| {
        let w: Vec<u32> = hs.iter().map(|&h| diagram.half_edge_weight(graph, h)).collect();
        !triangle_even(w[0], w[1], w[2])
    })
}

pub fn is_admissible(graph: &RibbonGraph, diagram: &WeightDiagram) -> Result<bool, WeightError> {
    diagram.check_keys(graph)?;
    Ok(first_violation(graph, diagram).is_none())
}

/// Least `L` with every vertex sum at most `2L`.
pub fn min_level(graph: &RibbonGraph, diagram: &WeightDiagram) -> Result<u32, WeightError> {
    diagram.check_keys(graph)?;
    if let Some(vertex) = first_violation(graph, diagram) {
        return Err(WeightError::NotAdmissible { vertex });
    }
    Ok(diagram
        .vertex_sums(graph)
        .into_iter()
        .map(|s| s / 2)
        .max()
        .unwrap_or(0))
}

/// Depth-first lattice-point search over the variables "internal edges, then
/// leaf totals", checking each vertex once its last variable is fixed.
struct Search {
    level: u32,
    /// Variable indices of each vertex's three half-edges.
    vertex_vars: Vec<[usize; 3]>,
    /// Vertices whose last variable is `k`, per `k`.
    closes: Vec<Vec<usize>>,
    /// Vertices touching variable `k`, per `k`.
    touches: Vec<Vec<usize>>,
    domains: Vec<(u32, u32)>,
}

impl Search {
    fn new(graph: &RibbonGraph, level: u32, leaf_totals: Option<&[u32]>) -> Self {
        let edges = graph.edge_count();
        let var_of = |h: usize| match graph.incidence(h).end {
            End::Edge { edge, .. } => edge,
            End::Leaf(l) => edges + l,
        };
        let nvars = edges + graph.leaf_count();
        let mut closes = vec![Vec::new(); nvars];
        let mut touches = vec![Vec::new(); nvars];
        let vertex_vars: Vec<[usize; 3]> = graph
            .vertices()
            .iter()
            .map(|hs| [var_of(hs[0]), var_of(hs[1]), var_of(hs[2])])
            .collect();
        for (v, vars) in vertex_vars.iter().enumerate() {
            closes[*vars.iter().max().expect("trivalent")].push(v);
            for &k in vars {
                if !touches[k].contains(&v) {
                    touches[k].push(v);
                }
            }
        }
        let mut domains = vec![(0, level); nvars];
        if let Some(totals) = leaf_totals {
            for (l, &t) in totals.iter().enumerate() {
                domains[edges + l] = (t, t);
            }
        }
        Self {
            level,
            vertex_vars,
            closes,
            touches,
            domains,
        }
    }

    fn nvars(&self) -> usize {
        self.domains.len()
    }

    fn feasible(&self, k: usize, values: &[u32]) -> bool {
        for &v in &self.touches[k] {
            let vars = self.vertex_vars[v];
            let complete = vars.iter().all(|&x| x <= k);
            let sum: u32 = vars.iter().filter(|&&x| x <= k).map(|&x| values[x]).sum();
            if sum > 2 * self.level {
                return false;
            }
            if complete {
                let [a, b, c] = vars.map(|x| values[x]);
                if !triangle_even(a, b, c) {
                    return false;
                }
            }
        }
        debug_assert!(self.closes[k].iter().all(|&v| {
            let [a, b, c] = self.vertex_vars[v].map(|x| values[x]);
            triangle_even(a, b, c)
        }));
        true
    }

    /// Calls `visit` on every admissible assignment whose first variable is `first`.
    fn run(&self, first: Option<u32>, visit: &mut dyn FnMut(&[u32])) {
        let mut values = vec![0u32; self.nvars()];
        self.descend(0, first, &mut values, visit);
    }

    fn descend(&self, k: usize, first: Option<u32>, values: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
        if k == self.nvars() {
            visit(values);
            return;
        }
        let (lo, hi) = match (k, first) {
            (0, Some(x)) if x >= self.domains[0].0 && x <= self.domains[0].1 => (x, x),
            (0, Some(_)) => return,
            _ => self.domains[k],
        };
        for x in lo..=hi {
            values[k] = x;
            if self.feasible(k, values) {
                self.descend(k + 1, None, values, visit);
            }
        }
    }
}

fn split_count(graph: &RibbonGraph, values: &[u32], variant: Variant) -> u64 {
    match variant {
        Variant::Unipotent => 1,
        Variant::Full => values[graph.edge_count()..]
            .iter()
            .map(|&t| u64::from(t) + 1)
            .product(),
    }
}

fn expand_splits(graph: &RibbonGraph, values: &[u32], variant: Variant, out: &mut Vec<WeightDiagram>) {
    let edges = values[..graph.edge_count()].to_vec();
    let totals = &values[graph.edge_count()..];
    let mut leaves = vec![[0u32, 0u32]; totals.len()];
    fn rec(
        i: usize,
        totals: &[u32],
        variant: Variant,
        edges: &[u32],
        leaves: &mut Vec<[u32; 2]>,
        out: &mut Vec<WeightDiagram>,
    ) {
        if i == totals.len() {
            out.push(WeightDiagram::new(edges.to_vec(), leaves.clone()));
            return;
        }
        let t = totals[i];
        let ups: Vec<u32> = match variant {
            Variant::Full => (0..=t).collect(),
            Variant::Unipotent => vec![t],
        };
        for up in ups {
            leaves[i] = [up, t - up];
            rec(i + 1, totals, variant, edges, leaves, out);
        }
    }
    rec(0, totals, variant, &edges, &mut leaves, out);
}

/// All diagrams of level at most `level`, sorted lexicographically (edge
/// weights by edge id, then leaf splits).
pub fn enumerate_level(graph: &RibbonGraph, level: u32, variant: Variant) -> Vec<WeightDiagram> {
    enumerate_level_with(graph, level, variant, Exec::default())
}

pub fn enumerate_level_with(
    graph: &RibbonGraph,
    level: u32,
    variant: Variant,
    exec: Exec,
) -> Vec<WeightDiagram> {
    let search = Search::new(graph, level, None);
    if search.nvars() == 0 {
        return vec![WeightDiagram::zero(graph)];
    }
    let parts = exec.map_range(level as usize + 1, |first| {
        let mut out = Vec::new();
        search.run(Some(first as u32), &mut |values| {
            expand_splits(graph, values, variant, &mut out)
        });
        out
    });
    let mut all: Vec<WeightDiagram> = parts.into_iter().flatten().collect();
    all.sort_unstable();
    all
}

/// Streams the diagrams of level at most `level` in search order, sequentially.
/// Returning `false` from `visit` stops the search.
pub fn visit_level(graph: &RibbonGraph, level: u32, variant: Variant, visit: &mut dyn FnMut(&WeightDiagram) -> bool) {
    let search = Search::new(graph, level, None);
    if search.nvars() == 0 {
        visit(&WeightDiagram::zero(graph));
        return;
    }
    let mut go = true;
    let mut batch = Vec::new();
    search.run(None, &mut |values| {
        if go {
            expand_splits(graph, values, variant, &mut batch);
            for d in batch.drain(..) {
                if go && !visit(&d) {
                    go = false;
                }
            }
        }
    });
}

/// `|H_Γ(L)|` (or `|U_Γ(L)|`), counted without materialising the diagrams.
pub fn hilbert_function(graph: &RibbonGraph, level: u32, variant: Variant) -> u64 {
    hilbert_function_with(graph, level, variant, Exec::default())
}

pub fn hilbert_function_with(graph: &RibbonGraph, level: u32, variant: Variant, exec: Exec) -> u64 {
    let search = Search::new(graph, level, None);
    if search.nvars() == 0 {
        return 1;
    }
    exec.map_range(level as usize + 1, |first| {
        let mut count = 0u64;
        search.run(Some(first as u32), &mut |values| {
            count += split_count(graph, values, variant)
        });
        count
    })
    .into_iter()
    .sum()
}

/// Number of diagrams whose level is exactly `level`.
pub fn exact_level_count(graph: &RibbonGraph, level: u32, variant: Variant) -> u64 {
    let search = Search::new(graph, level, None);
    if search.nvars() == 0 {
        return u64::from(level == 0);
    }
    let mut count = 0u64;
    search.run(None, &mut |values| {
        let top = search
            .vertex_vars
            .iter()
            .map(|vars| vars.iter().map(|&x| values[x]).sum::<u32>())
            .max()
            .unwrap_or(0);
        if top / 2 == level {
            count += split_count(graph, values, variant);
        }
    });
    count
}

/// Number of internal-edge labelings of level at most `level` with every leaf
/// edge carrying the prescribed total: the fusion-rule count of conformal blocks.
pub fn count_with_leaf_totals(graph: &RibbonGraph, level: u32, totals: &[u32]) -> u64 {
    assert_eq!(totals.len(), graph.leaf_count());
    let search = Search::new(graph, level, Some(totals));
    if search.nvars() == 0 {
        return 1;
    }
    let mut count = 0u64;
    search.run(None, &mut |_| count += 1);
    count
}
