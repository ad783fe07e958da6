//! Trivalent ribbon graphs encoded as rotation systems on half-edges.
//!
//! A vertex is the cyclic list of its half-edges; the list order is the ribbon
//! structure. Internal edges pair two half-edges (possibly at the same vertex,
//! which makes a loop) and the remaining half-edges are leaves. Half-edge ids
//! are the contiguous range `0..half_edge_count()`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type HalfEdge = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} has valence {valence}, expected 3")]
    NotTrivalent { vertex: usize, valence: usize },
    #[error("graph is disconnected: vertex {vertex} is unreachable from vertex 0")]
    Disconnected { vertex: usize },
    #[error("bad pairing at half-edge {half_edge}: {reason}")]
    BadPairing { half_edge: HalfEdge, reason: String },
    #[error("edge {edge} is a loop and cannot be contracted")]
    LoopContraction { edge: usize },
    #[error("no internal edge with id {0}")]
    UnknownEdge(usize),
    #[error("unknown standard graph `{0}`")]
    UnknownName(String),
    #[error("no trivalent graph of genus {g} with {n} leaves")]
    Unstable { g: usize, n: usize },
    #[error("graph has no vertices")]
    Empty,
}

/// Where a half-edge ends up once it leaves its vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    /// `side` is 0 for the first half-edge listed in the edge pair, 1 for the second.
    Edge { edge: usize, side: usize },
    Leaf(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub vertex: usize,
    pub slot: usize,
    pub end: End,
}

/// On-disk form: `{"vertices": [[h,h,h],...], "edges": [[h,h],...], "leaves": [h,...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<Vec<HalfEdge>>,
    pub edges: Vec<[HalfEdge; 2]>,
    #[serde(default)]
    pub leaves: Vec<HalfEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RibbonGraph {
    vertices: Vec<Vec<HalfEdge>>,
    edges: Vec<[HalfEdge; 2]>,
    leaves: Vec<HalfEdge>,
    incidence: Vec<Incidence>,
}

impl RibbonGraph {
    /// Builds and fully validates a trivalent connected graph.
    pub fn new(
        vertices: Vec<Vec<HalfEdge>>,
        edges: Vec<[HalfEdge; 2]>,
        leaves: Vec<HalfEdge>,
    ) -> Result<Self, GraphError> {
        let graph = Self::from_parts(vertices, edges, leaves)?;
        graph.validate()?;
        Ok(graph)
    }

    /// Checks only the half-edge bookkeeping, so partially collapsed graphs with
    /// higher-valence vertices are representable.
    pub fn from_parts(
        vertices: Vec<Vec<HalfEdge>>,
        edges: Vec<[HalfEdge; 2]>,
        leaves: Vec<HalfEdge>,
    ) -> Result<Self, GraphError> {
        let count: usize = vertices.iter().map(Vec::len).sum();
        let mut located: Vec<Option<(usize, usize)>> = vec![None; count];
        for (v, hs) in vertices.iter().enumerate() {
            for (slot, &h) in hs.iter().enumerate() {
                if h >= count {
                    return Err(GraphError::BadPairing {
                        half_edge: h,
                        reason: format!("id out of range 0..{count}"),
                    });
                }
                if located[h].is_some() {
                    return Err(GraphError::BadPairing {
                        half_edge: h,
                        reason: "listed at more than one vertex slot".into(),
                    });
                }
                located[h] = Some((v, slot));
            }
        }
        let mut ends: Vec<Option<End>> = vec![None; count];
        let mut claim = |h: HalfEdge, end: End| -> Result<(), GraphError> {
            if h >= count {
                return Err(GraphError::BadPairing {
                    half_edge: h,
                    reason: "not incident to any vertex".into(),
                });
            }
            if ends[h].is_some() {
                return Err(GraphError::BadPairing {
                    half_edge: h,
                    reason: "used by more than one edge or leaf".into(),
                });
            }
            ends[h] = Some(end);
            Ok(())
        };
        for (e, &[a, b]) in edges.iter().enumerate() {
            if a == b {
                return Err(GraphError::BadPairing {
                    half_edge: a,
                    reason: "paired with itself".into(),
                });
            }
            claim(a, End::Edge { edge: e, side: 0 })?;
            claim(b, End::Edge { edge: e, side: 1 })?;
        }
        for (l, &h) in leaves.iter().enumerate() {
            claim(h, End::Leaf(l))?;
        }
        let mut incidence = Vec::with_capacity(count);
        for h in 0..count {
            let (vertex, slot) = located[h].ok_or_else(|| GraphError::BadPairing {
                half_edge: h,
                reason: "not incident to any vertex".into(),
            })?;
            let end = ends[h].ok_or_else(|| GraphError::BadPairing {
                half_edge: h,
                reason: "neither paired nor a leaf".into(),
            })?;
            incidence.push(Incidence { vertex, slot, end });
        }
        Ok(Self {
            vertices,
            edges,
            leaves,
            incidence,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        let file: GraphFile = serde_json::from_str(text)?;
        Ok(Self::new(file.vertices, file.edges, file.leaves)?)
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            leaves: self.leaves.clone(),
        }
    }

    /// Succeeds iff every vertex is trivalent and the graph is connected.
    pub fn validate(&self) -> Result<(), GraphError> {
        if self.vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        for (vertex, hs) in self.vertices.iter().enumerate() {
            if hs.len() != 3 {
                return Err(GraphError::NotTrivalent {
                    vertex,
                    valence: hs.len(),
                });
            }
        }
        let seen = self.reachable_from(0);
        if let Some(vertex) = seen.iter().position(|&s| !s) {
            return Err(GraphError::Disconnected { vertex });
        }
        debug_assert_eq!(
            3 * self.vertex_count(),
            2 * self.edge_count() + self.leaf_count()
        );
        Ok(())
    }

    pub fn is_trivalent(&self) -> bool {
        self.vertices.iter().all(|hs| hs.len() == 3)
    }

    fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            for &h in &self.vertices[v] {
                if let Some(p) = self.partner(h) {
                    let w = self.incidence[p].vertex;
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        seen
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn half_edge_count(&self) -> usize {
        self.incidence.len()
    }

    pub fn vertices(&self) -> &[Vec<HalfEdge>] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &[HalfEdge] {
        &self.vertices[v]
    }

    pub fn edges(&self) -> &[[HalfEdge; 2]] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> [HalfEdge; 2] {
        self.edges[e]
    }

    pub fn leaves(&self) -> &[HalfEdge] {
        &self.leaves
    }

    pub fn leaf(&self, l: usize) -> HalfEdge {
        self.leaves[l]
    }

    pub fn incidence(&self, h: HalfEdge) -> Incidence {
        self.incidence[h]
    }

    pub fn partner(&self, h: HalfEdge) -> Option<HalfEdge> {
        match self.incidence[h].end {
            End::Edge { edge, side } => Some(self.edges[edge][1 - side]),
            End::Leaf(_) => None,
        }
    }

    pub fn edge_vertices(&self, e: usize) -> (usize, usize) {
        let [a, b] = self.edges[e];
        (self.incidence[a].vertex, self.incidence[b].vertex)
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (u, v) = self.edge_vertices(e);
        u == v
    }

    /// First Betti number of the (connected) graph.
    pub fn genus(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Contracts a non-loop internal edge. The merged vertex lists the first
    /// endpoint's remaining half-edges (cyclically after the edge) followed by the
    /// second endpoint's, and half-edge ids are compacted.
    pub fn contract_edge(&self, e: usize) -> Result<RibbonGraph, GraphError> {
        let [h0, h1] = *self.edges.get(e).ok_or(GraphError::UnknownEdge(e))?;
        let (u, v) = self.edge_vertices(e);
        if u == v {
            return Err(GraphError::LoopContraction { edge: e });
        }
        let merged: Vec<HalfEdge> = self
            .cyclic_after(h0)
            .into_iter()
            .chain(self.cyclic_after(h1))
            .collect();
        let mut vertices = Vec::with_capacity(self.vertices.len() - 1);
        for (w, hs) in self.vertices.iter().enumerate() {
            if w == u {
                vertices.push(merged.clone());
            } else if w != v {
                vertices.push(hs.clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, &pair)| pair)
            .collect();
        compact(vertices, edges, self.leaves.clone())
    }

    /// Half-edges at the same vertex, in cyclic order starting just after `h`.
    fn cyclic_after(&self, h: HalfEdge) -> Vec<HalfEdge> {
        let Incidence { vertex, slot, .. } = self.incidence[h];
        let hs = &self.vertices[vertex];
        (1..hs.len()).map(|k| hs[(slot + k) % hs.len()]).collect()
    }

    /// The two trivalent re-expansions of `contract_edge(e)` other than `self`.
    ///
    /// With the contracted vertex read cyclically as `(a, b, c, d)` (`a, b` from
    /// the first endpoint), the first resolution pairs `{b, c} | {d, a}` (the
    /// ribbon-compatible one) and the second pairs `{a, c} | {b, d}`. Vertex,
    /// edge and half-edge ids are preserved.
    pub fn resolutions(&self, e: usize) -> Result<[RibbonGraph; 2], GraphError> {
        let [h0, h1] = *self.edges.get(e).ok_or(GraphError::UnknownEdge(e))?;
        let (u, v) = self.edge_vertices(e);
        if u == v {
            return Err(GraphError::LoopContraction { edge: e });
        }
        if self.vertices[u].len() != 3 || self.vertices[v].len() != 3 {
            return Err(GraphError::NotTrivalent {
                vertex: if self.vertices[u].len() != 3 { u } else { v },
                valence: self.vertices[u].len().max(self.vertices[v].len()),
            });
        }
        let [a, b] = <[HalfEdge; 2]>::try_from(self.cyclic_after(h0)).expect("trivalent");
        let [c, d] = <[HalfEdge; 2]>::try_from(self.cyclic_after(h1)).expect("trivalent");
        let build = |x: [HalfEdge; 2], y: [HalfEdge; 2]| {
            let mut vertices = self.vertices.clone();
            vertices[u] = vec![x[0], x[1], h0];
            vertices[v] = vec![y[0], y[1], h1];
            RibbonGraph::from_parts(vertices, self.edges.clone(), self.leaves.clone())
        };
        Ok([build([b, c], [d, a])?, build([a, c], [b, d])?])
    }

    /// Whitehead move along `e`: the first resolution not isomorphic to `self`
    /// (falling back to the ribbon-compatible one when both are).
    pub fn mutate(&self, e: usize) -> Result<RibbonGraph, GraphError> {
        let [planar, twisted] = self.resolutions(e)?;
        if !self.is_isomorphic(&planar) || self.is_isomorphic(&twisted) {
            Ok(planar)
        } else {
            Ok(twisted)
        }
    }

    /// Two-colouring of the vertices if one exists. Loops make a graph non-bipartite.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut colour: Vec<Option<u8>> = vec![None; self.vertices.len()];
        for start in 0..self.vertices.len() {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(0);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let cv = colour[v].expect("coloured");
                for &h in &self.vertices[v] {
                    let Some(p) = self.partner(h) else { continue };
                    let w = self.incidence[p].vertex;
                    match colour[w] {
                        None => {
                            colour[w] = Some(1 - cv);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cv => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(colour.into_iter().map(|c| c.expect("coloured")).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    pub fn has_odd_cycle(&self) -> bool {
        !self.is_bipartite()
    }

    /// Breadth-first spanning tree from vertex 0, scanning half-edges in slot order.
    pub fn spanning_tree(&self) -> SpanningTree {
        let n = self.vertices.len();
        let mut parent: Vec<Option<(HalfEdge, HalfEdge)>> = vec![None; n];
        let mut depth = vec![0usize; n];
        let mut seen = vec![false; n];
        let mut tree = vec![false; self.edges.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &h in &self.vertices[v] {
                let Some(p) = self.partner(h) else { continue };
                let w = self.incidence[p].vertex;
                if !seen[w] {
                    seen[w] = true;
                    // (half-edge at the parent, half-edge at the child)
                    parent[w] = Some((h, p));
                    depth[w] = depth[v] + 1;
                    if let End::Edge { edge, .. } = self.incidence[h].end {
                        tree[edge] = true;
                    }
                    queue.push_back(w);
                }
            }
        }
        let cotree = (0..self.edges.len()).filter(|&e| !tree[e]).collect();
        SpanningTree {
            parent,
            depth,
            tree,
            cotree,
        }
    }

    /// Vertex multigraph adjacency counts (a loop counts once at `[v][v]`).
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut adj = vec![vec![0; n]; n];
        for e in 0..self.edges.len() {
            let (u, v) = self.edge_vertices(e);
            adj[u][v] += 1;
            if u != v {
                adj[v][u] += 1;
            }
        }
        adj
    }

    /// Isomorphism of the underlying multigraphs with leaves matched by index;
    /// ribbon orders are ignored. Backtracking search, intended for small graphs.
    pub fn is_isomorphic(&self, other: &RibbonGraph) -> bool {
        let n = self.vertices.len();
        if n != other.vertices.len()
            || self.edges.len() != other.edges.len()
            || self.leaves.len() != other.leaves.len()
        {
            return false;
        }
        let (a, b) = (self.adjacency(), other.adjacency());
        let leaf_sig = |g: &RibbonGraph| {
            let mut sig = vec![BTreeSet::new(); g.vertices.len()];
            for (l, &h) in g.leaves.iter().enumerate() {
                sig[g.incidence[h].vertex].insert(l);
            }
            sig
        };
        let (la, lb) = (leaf_sig(self), leaf_sig(other));
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        // Assign in BFS order so each new vertex is adjacent to an assigned one.
        let order = self.bfs_order();
        fn search(
            k: usize,
            order: &[usize],
            a: &[Vec<usize>],
            b: &[Vec<usize>],
            la: &[BTreeSet<usize>],
            lb: &[BTreeSet<usize>],
            map: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if k == order.len() {
                return true;
            }
            let v = order[k];
            for w in 0..b.len() {
                if used[w] || la[v] != lb[w] || a[v][v] != b[w][w] {
                    continue;
                }
                let consistent = order[..k]
                    .iter()
                    .all(|&u| a[v][u] == b[w][map[u]]);
                if !consistent {
                    continue;
                }
                map[v] = w;
                used[w] = true;
                if search(k + 1, order, a, b, la, lb, map, used) {
                    return true;
                }
                used[w] = false;
                map[v] = usize::MAX;
            }
            false
        }
        search(0, &order, &a, &b, &la, &lb, &mut map, &mut used)
    }

    fn bfs_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.vertices.len());
        let mut seen = vec![false; self.vertices.len()];
        for start in 0..self.vertices.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for &h in &self.vertices[v] {
                    if let Some(p) = self.partner(h) {
                        let w = self.incidence[p].vertex;
                        if !seen[w] {
                            seen[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        order
    }

    /// All internal edges joining two distinct vertices.
    pub fn mutable_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| !self.is_loop(e)).collect()
    }

    /// Isomorphism classes reachable by resolutions, `self` first. Every
    /// connected trivalent graph of the same type is reached.
    pub fn mutation_class(&self) -> Vec<RibbonGraph> {
        let mut class = vec![self.clone()];
        let mut next = 0;
        while next < class.len() {
            let g = class[next].clone();
            next += 1;
            for e in g.mutable_edges() {
                for r in g.resolutions(e).expect("non-loop edge") {
                    if r.validate().is_ok() && !class.iter().any(|c| c.is_isomorphic(&r)) {
                        class.push(r);
                    }
                }
            }
        }
        class
    }
}

impl Serialize for RibbonGraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_file().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RibbonGraph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let file = GraphFile::deserialize(deserializer)?;
        RibbonGraph::new(file.vertices, file.edges, file.leaves).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Relabels half-edges to `0..count` in order of first appearance at the vertices.
fn compact(
    vertices: Vec<Vec<HalfEdge>>,
    edges: Vec<[HalfEdge; 2]>,
    leaves: Vec<HalfEdge>,
) -> Result<RibbonGraph, GraphError> {
    let max = vertices.iter().flatten().copied().max().unwrap_or(0);
    let mut relabel = vec![usize::MAX; max + 1];
    for (next, &h) in vertices.iter().flatten().enumerate() {
        relabel[h] = next;
    }
    let map = |h: HalfEdge| relabel.get(h).copied().unwrap_or(usize::MAX);
    RibbonGraph::from_parts(
        vertices
            .iter()
            .map(|hs| hs.iter().map(|&h| map(h)).collect())
            .collect(),
        edges.iter().map(|&[a, b]| [map(a), map(b)]).collect(),
        leaves.iter().map(|&h| map(h)).collect(),
    )
}

#[derive(Debug, Clone)]
pub struct SpanningTree {
    /// For each non-root vertex, the tree edge to its parent as
    /// (half-edge at the parent, half-edge at the vertex).
    pub parent: Vec<Option<(HalfEdge, HalfEdge)>>,
    pub depth: Vec<usize>,
    /// Indexed by edge id.
    pub tree: Vec<bool>,
    /// Non-tree edges in increasing id order; these index free-group generators.
    pub cotree: Vec<usize>,
}

impl SpanningTree {
    /// Steps of the unique tree path from `from` to `to`, each as
    /// (half-edge leaving the current vertex, half-edge entering the next).
    pub fn path(&self, graph: &RibbonGraph, from: usize, to: usize) -> Vec<(HalfEdge, HalfEdge)> {
        let (mut a, mut b) = (from, to);
        let mut up = Vec::new();
        let mut down = Vec::new();
        while self.depth[a] > self.depth[b] {
            let (hp, hc) = self.parent[a].expect("non-root");
            up.push((hc, hp));
            a = graph.incidence(hp).vertex;
        }
        while self.depth[b] > self.depth[a] {
            let (hp, hc) = self.parent[b].expect("non-root");
            down.push((hp, hc));
            b = graph.incidence(hp).vertex;
        }
        while a != b {
            let (hp, hc) = self.parent[a].expect("non-root");
            up.push((hc, hp));
            a = graph.incidence(hp).vertex;
            let (hp, hc) = self.parent[b].expect("non-root");
            down.push((hp, hc));
            b = graph.incidence(hp).vertex;
        }
        down.reverse();
        up.extend(down);
        up
    }
}

/// Named constructors with a fixed half-edge numbering and ribbon order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardGraph {
    /// Two vertices joined by three edges; both vertices list edges 0, 1, 2.
    Theta,
    /// Two loops joined by a bridge; edges 0 and 1 are the loops, 2 the bridge.
    Dumbbell,
    /// Complete graph on four vertices: outer triangle edges a, b, c are edges
    /// 0, 1, 2 and the spokes to the centre are 3, 4, 5; planar ribbon order.
    K4,
    /// One vertex with three leaves.
    Trinode,
    /// Loop, then `g - 2` digons, then loop, joined in a chain by bridges.
    Upsilon { g: usize },
    /// Caterpillar with `n` leaf pendants followed by `g` loop pendants.
    Gamma { g: usize, n: usize },
}

impl StandardGraph {
    pub fn build(self) -> Result<RibbonGraph, GraphError> {
        match self {
            StandardGraph::Theta => {
                RibbonGraph::new(vec![vec![0, 1, 2], vec![3, 4, 5]], vec![[0, 3], [1, 4], [2, 5]], vec![])
            }
            StandardGraph::Dumbbell => RibbonGraph::new(
                vec![vec![0, 1, 2], vec![3, 4, 5]],
                vec![[0, 1], [3, 4], [2, 5]],
                vec![],
            ),
            StandardGraph::K4 => RibbonGraph::new(
                vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8], vec![9, 10, 11]],
                vec![[0, 5], [2, 6], [3, 8], [1, 10], [4, 11], [7, 9]],
                vec![],
            ),
            StandardGraph::Trinode => RibbonGraph::new(vec![vec![0, 1, 2]], vec![], vec![0, 1, 2]),
            StandardGraph::Upsilon { g } => upsilon(g),
            StandardGraph::Gamma { g, n } => caterpillar(g, n),
        }
    }
}

impl FromStr for StandardGraph {
    type Err = GraphError;

    /// Accepts `theta`, `dumbbell`, `k4`, `trinode`, `upsilon:G` and `gamma:G,N`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || GraphError::UnknownName(s.to_string());
        let (name, params) = match s.split_once(':') {
            Some((name, rest)) => (name, Some(rest)),
            None => (s, None),
        };
        let nums: Vec<usize> = match params {
            Some(p) => p
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| unknown()))
                .collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        match (name.to_ascii_lowercase().as_str(), nums.as_slice()) {
            ("theta", []) => Ok(StandardGraph::Theta),
            ("dumbbell", []) => Ok(StandardGraph::Dumbbell),
            ("k4", []) => Ok(StandardGraph::K4),
            ("trinode", []) => Ok(StandardGraph::Trinode),
            ("upsilon", [g]) => Ok(StandardGraph::Upsilon { g: *g }),
            ("gamma", [g, n]) => Ok(StandardGraph::Gamma { g: *g, n: *n }),
            _ => Err(unknown()),
        }
    }
}

impl fmt::Display for StandardGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardGraph::Theta => write!(f, "theta"),
            StandardGraph::Dumbbell => write!(f, "dumbbell"),
            StandardGraph::K4 => write!(f, "k4"),
            StandardGraph::Trinode => write!(f, "trinode"),
            StandardGraph::Upsilon { g } => write!(f, "upsilon:{g}"),
            StandardGraph::Gamma { g, n } => write!(f, "gamma:{g},{n}"),
        }
    }
}

/// `standard_graph("upsilon", &[4])`, `standard_graph("theta", &[])`, ...
pub fn standard_graph(name: &str, params: &[usize]) -> Result<RibbonGraph, GraphError> {
    let spec = if params.is_empty() {
        name.to_string()
    } else {
        let p: Vec<String> = params.iter().map(ToString::to_string).collect();
        format!("{name}:{}", p.join(","))
    };
    spec.parse::<StandardGraph>()?.build()
}

#[derive(Default)]
struct Builder {
    vertices: Vec<Vec<HalfEdge>>,
    edges: Vec<[HalfEdge; 2]>,
    leaves: Vec<HalfEdge>,
    next: HalfEdge,
}

impl Builder {
    fn vertex(&mut self) -> usize {
        self.vertices.push(Vec::new());
        self.vertices.len() - 1
    }

    fn half(&mut self, v: usize) -> HalfEdge {
        let h = self.next;
        self.next += 1;
        self.vertices[v].push(h);
        h
    }

    fn edge(&mut self, a: HalfEdge, b: HalfEdge) {
        self.edges.push([a, b]);
    }

    /// New vertex carrying a loop; returns the half-edge left for attaching it.
    fn loop_vertex(&mut self) -> HalfEdge {
        let c = self.vertex();
        let stem = self.half(c);
        let a = self.half(c);
        let b = self.half(c);
        self.edge(a, b);
        stem
    }

    fn finish(self) -> Result<RibbonGraph, GraphError> {
        // Half-edges were numbered in creation order; renumber by vertex so ids
        // read left to right in the vertex lists.
        compact(self.vertices, self.edges, self.leaves).and_then(|g| {
            g.validate()?;
            Ok(g)
        })
    }
}

fn upsilon(g: usize) -> Result<RibbonGraph, GraphError> {
    if g < 2 {
        return Err(GraphError::Unstable { g, n: 0 });
    }
    let mut b = Builder::default();
    let mut tail = b.loop_vertex();
    for _ in 0..g - 2 {
        let p = b.vertex();
        let q = b.vertex();
        let p_in = b.half(p);
        let p_top = b.half(p);
        let p_bot = b.half(p);
        let q_bot = b.half(q);
        let q_top = b.half(q);
        let q_out = b.half(q);
        b.edge(tail, p_in);
        b.edge(p_top, q_top);
        b.edge(p_bot, q_bot);
        tail = q_out;
    }
    let end = b.loop_vertex();
    b.edge(tail, end);
    b.finish()
}

fn caterpillar(g: usize, n: usize) -> Result<RibbonGraph, GraphError> {
    let mut b = Builder::default();
    match (g, n) {
        (2, 0) => {
            let left = b.loop_vertex();
            let right = b.loop_vertex();
            b.edge(left, right);
            return b.finish();
        }
        (1, 1) => {
            let v = b.vertex();
            let leaf = b.half(v);
            let x = b.half(v);
            let y = b.half(v);
            b.edge(x, y);
            b.leaves.push(leaf);
            return b.finish();
        }
        _ if g + n < 3 => return Err(GraphError::Unstable { g, n }),
        _ => {}
    }
    let spine_len = g + n - 2;
    let spine: Vec<usize> = (0..spine_len).map(|_| b.vertex()).collect();
    // Each spine vertex: pendant slots, with spine links in between.
    let mut pendant_slots = Vec::new();
    let mut links = Vec::new();
    for (i, &v) in spine.iter().enumerate() {
        if i > 0 {
            let h = b.half(v);
            links.push(h);
        }
        let count = if spine_len == 1 {
            3
        } else if i == 0 || i + 1 == spine_len {
            2
        } else {
            1
        };
        for _ in 0..count {
            let h = b.half(v);
            pendant_slots.push(h);
        }
        if i + 1 < spine_len {
            let h = b.half(v);
            links.push(h);
        }
    }
    for pair in links.chunks(2) {
        b.edge(pair[0], pair[1]);
    }
    for (k, h) in pendant_slots.into_iter().enumerate() {
        if k < n {
            b.leaves.push(h);
        } else {
            let stem = b.loop_vertex();
            b.edge(h, stem);
        }
    }
    b.finish()
}
