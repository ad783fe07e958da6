//! Boundary strata of the toric degeneration attached to a graph.
//!
//! The stratum `D_S` of a vertex set `S` is cut out by saturating every vertex
//! of `S` (vertex sum `2L` at level `L`). With a leaf or an odd cycle every `S`
//! is realised exactly, so the poset is the Boolean lattice with codimension
//! `|S|`. On a leafless bipartite graph with parts `A`, `B` the sums over `A`
//! and over `B` agree, so saturating one whole part saturates everything:
//! every `S` whose complement lies in one part collapses to `D_V`, which has
//! codimension `2g - 3`.

use std::collections::{BTreeSet, VecDeque};

use num_integer::Integer;
use serde::Serialize;

use crate::exec::Exec;
use crate::graph::{End, RibbonGraph};
use crate::linalg;
use crate::weights::{enumerate_level, hilbert_function, GradedWeight, Variant, WeightDiagram, WeightError};

/// Subsets are enumerated as bitmasks; above this many vertices the poset is
/// not built.
pub const MAX_VERTICES: usize = 20;

/// Largest `|U_Γ(L)|` that [`stratum_dimension`] will enumerate.
pub const MAX_PROBE_POINTS: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub defining_set: Vec<usize>,
    pub canonical_class: Vec<usize>,
    pub codim: usize,
}

/// Distinct strata ordered by codimension, with the cover relation of the
/// containment order (`[i, j]`: stratum `j` is a maximal proper substratum of `i`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratPoset {
    pub vertex_count: usize,
    pub genus: usize,
    pub boolean: bool,
    /// The two parts of a leafless bipartite graph; `None` when Boolean.
    pub bipartition: Option<[Vec<usize>; 2]>,
    pub classes: Vec<Stratum>,
    pub covers: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HasseNode {
    pub id: usize,
    pub class: Vec<usize>,
    pub codim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hasse {
    pub nodes: Vec<HasseNode>,
    pub edges: Vec<[usize; 2]>,
}

/// Structural rule deciding which subset represents `S`'s stratum.
#[derive(Debug, Clone)]
struct Collapse {
    n: usize,
    genus: usize,
    /// Bitmasks of the two parts when the graph is leafless and bipartite.
    parts: Option<[u64; 2]>,
}

impl Collapse {
    fn new(graph: &RibbonGraph) -> Self {
        let parts = if graph.leaf_count() == 0 {
            graph.bipartition().map(|colour| {
                let mut p = [0u64; 2];
                for (v, &c) in colour.iter().enumerate() {
                    p[c as usize] |= 1 << v;
                }
                p
            })
        } else {
            None
        };
        Self {
            n: graph.vertex_count(),
            genus: graph.genus(),
            parts,
        }
    }

    fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    fn canonical(&self, s: u64) -> u64 {
        match self.parts {
            Some([a, b]) => {
                let rest = self.full() & !s;
                if rest & a == 0 || rest & b == 0 {
                    self.full()
                } else {
                    s
                }
            }
            None => s,
        }
    }

    fn codim(&self, canonical: u64) -> usize {
        match self.parts {
            Some(_) if canonical == self.full() => 2 * self.genus - 3,
            _ => canonical.count_ones() as usize,
        }
    }
}

fn mask_of(s: &[usize]) -> u64 {
    s.iter().fold(0, |m, &v| m | 1 << v)
}

fn set_of(m: u64) -> Vec<usize> {
    (0..64).filter(|&v| m >> v & 1 == 1).collect()
}

impl StratPoset {
    /// Index of the class containing `S`.
    pub fn class_of(&self, s: &[usize]) -> usize {
        let c = self.canonical(s);
        self.classes
            .iter()
            .position(|k| k.canonical_class == c)
            .expect("every canonical set is a class")
    }

    /// The representative of `S`'s class.
    pub fn canonical(&self, s: &[usize]) -> Vec<usize> {
        let rule = Collapse {
            n: self.vertex_count,
            genus: self.genus,
            parts: self.bipartition.as_ref().map(|[a, b]| [mask_of(a), mask_of(b)]),
        };
        set_of(rule.canonical(mask_of(s)))
    }

    /// `S` represents its own class.
    pub fn is_distinct(&self, s: &[usize]) -> bool {
        let mut sorted = s.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        self.canonical(&sorted) == sorted
    }

    pub fn codims(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.codim).collect()
    }

    pub fn hasse(&self) -> Hasse {
        Hasse {
            nodes: self
                .classes
                .iter()
                .enumerate()
                .map(|(id, c)| HasseNode {
                    id,
                    class: c.canonical_class.clone(),
                    codim: c.codim,
                })
                .collect(),
            edges: self.covers.clone(),
        }
    }
}

/// The stratification poset; `ScaleLimit` above [`MAX_VERTICES`] vertices.
pub fn classify_strata(graph: &RibbonGraph) -> Result<StratPoset, WeightError> {
    classify_strata_with(graph, Exec::default())
}

pub fn classify_strata_with(graph: &RibbonGraph, exec: Exec) -> Result<StratPoset, WeightError> {
    let n = graph.vertex_count();
    if n > MAX_VERTICES {
        return Err(WeightError::ScaleLimit(format!(
            "{n} vertices; strata are enumerated for at most {MAX_VERTICES}"
        )));
    }
    let rule = Collapse::new(graph);
    let distinct: Vec<u64> = exec
        .map_range(1 << n, |s| {
            let s = s as u64;
            (rule.canonical(s) == s).then_some(s)
        })
        .into_iter()
        .flatten()
        .collect();
    let mut order: Vec<u64> = distinct;
    order.sort_by_key(|&s| (rule.codim(s), set_of(s)));
    let index = |s: u64| order.binary_search_by_key(&(rule.codim(s), set_of(s)), |&t| (rule.codim(t), set_of(t)));
    let covers_of = |i: usize| -> Vec<[usize; 2]> {
        let s = order[i];
        let above: BTreeSet<u64> = (0..n)
            .filter(|&v| s >> v & 1 == 0)
            .map(|v| rule.canonical(s | 1 << v))
            .filter(|&t| t != s)
            .collect();
        above
            .iter()
            .filter(|&&t| !above.iter().any(|&u| u != t && u & t == u))
            .map(|&t| [i, index(t).expect("canonical sets are classes")])
            .collect()
    };
    let mut covers: Vec<[usize; 2]> = exec.map_range(order.len(), covers_of).into_iter().flatten().collect();
    covers.sort_unstable();
    let classes = order
        .iter()
        .map(|&s| Stratum {
            defining_set: set_of(s),
            canonical_class: set_of(s),
            codim: rule.codim(s),
        })
        .collect();
    Ok(StratPoset {
        vertex_count: n,
        genus: rule.genus,
        boolean: rule.parts.is_none(),
        bipartition: rule.parts.map(|[a, b]| [set_of(a), set_of(b)]),
        classes,
        covers,
    })
}

/// Every subset with its class, in bitmask order.
pub fn all_strata(graph: &RibbonGraph) -> Result<Vec<Stratum>, WeightError> {
    let n = graph.vertex_count();
    if n > MAX_VERTICES {
        return Err(WeightError::ScaleLimit(format!("{n} vertices")));
    }
    let rule = Collapse::new(graph);
    Ok((0..1u64 << n)
        .map(|s| {
            let c = rule.canonical(s);
            Stratum {
                defining_set: set_of(s),
                canonical_class: set_of(c),
                codim: rule.codim(c),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "status", content = "witness")]
pub enum Witness {
    Found(GradedWeight),
    Infeasible,
}

/// Vertices whose sum is exactly `2L`.
pub fn saturated_vertices(graph: &RibbonGraph, w: &GradedWeight) -> Vec<usize> {
    w.diagram
        .vertex_sums(graph)
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s == 2 * w.level)
        .map(|(v, _)| v)
        .collect()
}

/// A unipotent weighting saturated exactly on `S`, built by perturbing the
/// uniform weighting along paths; `base_level` bounds the fallback scan.
/// `Infeasible` exactly when the bipartite obstruction applies.
pub fn witness_weighting(graph: &RibbonGraph, s: &[usize], base_level: u32) -> Witness {
    let rule = Collapse::new(graph);
    let mut target: Vec<usize> = s.to_vec();
    target.sort_unstable();
    target.dedup();
    let mask = mask_of(&target);
    if rule.canonical(mask) != mask {
        return Witness::Infeasible;
    }
    if let Some(w) = perturbation_witness(graph, &target, rule.parts) {
        if w.is_valid(graph) && saturated_vertices(graph, &w) == target {
            return Witness::Found(w);
        }
    }
    (1..=base_level)
        .flat_map(|level| {
            enumerate_level(graph, level, Variant::Unipotent)
                .into_iter()
                .map(move |diagram| GradedWeight { level, diagram })
        })
        .find(|w| saturated_vertices(graph, w) == target)
        .map_or(Witness::Infeasible, Witness::Found)
}

/// Adjacency as `(neighbour, edge)` per vertex.
fn neighbours(graph: &RibbonGraph) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); graph.vertex_count()];
    for e in 0..graph.edge_count() {
        let (u, v) = graph.edge_vertices(e);
        adj[u].push((v, e));
        if u != v {
            adj[v].push((u, e));
        }
    }
    adj
}

/// Shortest path from `from` to the first vertex satisfying `goal`, as the
/// visited vertices and the edges between them.
fn bfs_path(
    adj: &[Vec<(usize, usize)>],
    from: usize,
    goal: impl Fn(usize) -> bool,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if goal(u) {
            let (mut verts, mut edges) = (vec![u], Vec::new());
            let mut x = u;
            while let Some((p, e)) = prev[x] {
                verts.push(p);
                edges.push(e);
                x = p;
            }
            verts.reverse();
            edges.reverse();
            return Some((verts, edges));
        }
        for &(w, e) in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((u, e));
                queue.push_back(w);
            }
        }
    }
    None
}

/// An odd cycle as its vertices and edges in order; edge `i` joins vertex `i`
/// to vertex `i + 1` (cyclically).
fn odd_cycle(graph: &RibbonGraph, adj: &[Vec<(usize, usize)>]) -> Option<(Vec<usize>, Vec<usize>)> {
    if let Some(e) = (0..graph.edge_count()).find(|&e| graph.is_loop(e)) {
        return Some((vec![graph.edge_vertices(e).0], vec![e]));
    }
    let n = graph.vertex_count();
    let mut depth = vec![usize::MAX; n];
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
    depth[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &(w, e) in &adj[u] {
            if depth[w] == usize::MAX {
                depth[w] = depth[u] + 1;
                prev[w] = Some((u, e));
                queue.push_back(w);
            }
        }
    }
    // breadth-first layers only have same-layer edges when a cycle is odd
    let e = (0..graph.edge_count()).find(|&e| {
        let (u, w) = graph.edge_vertices(e);
        depth[u] == depth[w]
    })?;
    let (u, w) = graph.edge_vertices(e);
    let (mut a, mut b) = (u, w);
    let (mut down, mut up) = (Vec::new(), Vec::new());
    while a != b {
        let (pa, ea) = prev[a].expect("non-root");
        let (pb, eb) = prev[b].expect("non-root");
        down.push((a, ea));
        up.push((b, eb));
        a = pa;
        b = pb;
    }
    down.reverse();
    let mut verts = vec![a];
    let mut edges = Vec::new();
    for &(x, ex) in &down {
        verts.push(x);
        edges.push(ex);
    }
    edges.push(e);
    for &(x, ex) in &up {
        verts.push(x);
        edges.push(ex);
    }
    Some((verts, edges))
}

fn perturbation_witness(graph: &RibbonGraph, s: &[usize], parts: Option<[u64; 2]>) -> Option<GradedWeight> {
    let n = graph.vertex_count();
    let ne = graph.edge_count();
    let k = 3 * n as i64;
    // variables: edges, then leaf totals
    let mut w = vec![2 * k; ne + graph.leaf_count()];
    let adj = neighbours(graph);
    let in_s = |v: usize| s.contains(&v);
    let outside: Vec<usize> = (0..n).filter(|&v| !in_s(v)).collect();
    // adds `first, -first, ...` along `edges`; returns the last sign applied,
    // or `-first` for an empty path
    let alternate = |w: &mut Vec<i64>, edges: &[usize], first: i64| -> i64 {
        let mut sign = first;
        for &e in edges {
            w[e] += sign;
            sign = -sign;
        }
        -sign
    };
    if graph.leaf_count() > 0 {
        let leaf_at = |v: usize| {
            graph
                .vertex(v)
                .iter()
                .find_map(|&h| match graph.incidence(h).end {
                    End::Leaf(l) => Some(l),
                    End::Edge { .. } => None,
                })
        };
        for &v in &outside {
            let (verts, edges) = bfs_path(&adj, v, |u| leaf_at(u).is_some())?;
            let last = alternate(&mut w, &edges, -2);
            let leaf = leaf_at(*verts.last().expect("nonempty"))?;
            w[ne + leaf] += -last;
        }
    } else if let Some((cycle_verts, cycle_edges)) = odd_cycle(graph, &adj) {
        for &v in &outside {
            let (verts, edges) = bfs_path(&adj, v, |u| cycle_verts.contains(&u))?;
            // the cycle vertex must absorb the last path sign; with no path it is `v`
            let need = -alternate(&mut w, &edges, -2);
            let c = *verts.last().expect("nonempty");
            let start = cycle_verts.iter().position(|&x| x == c).expect("on cycle");
            let m = cycle_edges.len();
            let rotated: Vec<usize> = (0..m).map(|i| cycle_edges[(start + i) % m]).collect();
            alternate(&mut w, &rotated, need / 2);
        }
    } else {
        let [a, _] = parts?;
        let side = |v: usize| a >> v & 1;
        for &v in &outside {
            let (_, edges) = bfs_path(&adj, v, |u| !in_s(u) && side(u) != side(v))?;
            alternate(&mut w, &edges, -2);
        }
    }
    if w.iter().any(|&x| x < 0) {
        return None;
    }
    let level = 3 * k;
    let divisor = w.iter().fold(level, |g, &x| g.gcd(&x));
    let build = |d: i64| {
        let diagram = WeightDiagram::new(
            w[..ne].iter().map(|&x| (x / d) as u32).collect(),
            w[ne..].iter().map(|&x| [(x / d) as u32, 0]).collect(),
        );
        GradedWeight {
            level: (level / d) as u32,
            diagram,
        }
    };
    (1..=divisor)
        .rev()
        .filter(|d| divisor % d == 0)
        .map(build)
        .find(|g| g.is_valid(graph) && saturated_vertices(graph, g) == s)
}

/// Affine dimension of the level-`probe_level` unipotent diagrams saturating
/// at least `S`.
pub fn stratum_dimension(graph: &RibbonGraph, s: &[usize], probe_level: u32) -> Result<usize, WeightError> {
    let count = hilbert_function(graph, probe_level, Variant::Unipotent);
    if count > MAX_PROBE_POINTS {
        return Err(WeightError::ScaleLimit(format!(
            "{count} points at level {probe_level} exceed {MAX_PROBE_POINTS}"
        )));
    }
    let points: Vec<Vec<i64>> = enumerate_level(graph, probe_level, Variant::Unipotent)
        .into_iter()
        .filter(|d| {
            let sums = d.vertex_sums(graph);
            s.iter().all(|&v| sums[v] == 2 * probe_level)
        })
        .map(|d| {
            d.edges
                .iter()
                .map(|&x| i64::from(x))
                .chain(d.leaves.iter().map(|l| i64::from(l[0])))
                .collect()
        })
        .collect();
    Ok(linalg::affine_dimension(&points).unwrap_or(0))
}
