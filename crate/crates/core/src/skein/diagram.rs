use std::collections::BTreeSet;

use super::{Orient, SkeinError};
use crate::graph::{End, RibbonGraph};
use crate::weights::{min_level, WeightDiagram, WeightError};

/// A Γ-tensor in normal form; see the module docs for the numbering.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcDiagram {
    /// Strand ends per half-edge; partner half-edges have equal widths.
    pub(crate) widths: Vec<u32>,
    /// Per vertex, `mates[v][i]` is the linear index matched to `i`.
    pub(crate) mates: Vec<Vec<u32>>,
    /// Per leaf, one orientation per position.
    pub(crate) words: Vec<Vec<Orient>>,
}

/// One pass of a path through a vertex, entering at `from` and leaving at `to`
/// (both `(slot, linear index)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Visit {
    pub vertex: usize,
    pub from_slot: usize,
    pub to_slot: usize,
}

/// A path in canonical direction. Open paths carry their end orientations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Traversal {
    pub visits: Vec<Visit>,
    pub ends: Option<[Orient; 2]>,
}

impl ArcDiagram {
    pub fn empty(graph: &RibbonGraph) -> Self {
        Self {
            widths: vec![0; graph.half_edge_count()],
            mates: vec![Vec::new(); graph.vertex_count()],
            words: vec![Vec::new(); graph.leaf_count()],
        }
    }

    /// Checks widths, matchings and words against the graph.
    pub fn from_parts(
        graph: &RibbonGraph,
        widths: Vec<u32>,
        mates: Vec<Vec<u32>>,
        words: Vec<Vec<Orient>>,
    ) -> Result<Self, SkeinError> {
        let bad = |m: String| Err(SkeinError::BadTensor(m));
        if widths.len() != graph.half_edge_count()
            || mates.len() != graph.vertex_count()
            || words.len() != graph.leaf_count()
        {
            return bad("shape does not match the graph".into());
        }
        for (e, &[a, b]) in graph.edges().iter().enumerate() {
            if widths[a] != widths[b] {
                return bad(format!("edge {e} has unequal widths {} and {}", widths[a], widths[b]));
            }
        }
        for (l, &h) in graph.leaves().iter().enumerate() {
            if widths[h] as usize != words[l].len() {
                return bad(format!("leaf {l} word length differs from its width"));
            }
        }
        for (v, m) in mates.iter().enumerate() {
            let n: u32 = graph.vertex(v).iter().map(|&h| widths[h]).sum();
            if m.len() != n as usize {
                return bad(format!("vertex {v} matches {} of {n} points", m.len()));
            }
            for (i, &j) in m.iter().enumerate() {
                if j as usize >= m.len() || j as usize == i || m[j as usize] as usize != i {
                    return bad(format!("vertex {v} matching is not a fixed-point-free involution"));
                }
            }
        }
        Ok(Self { widths, mates, words })
    }

    /// The planar tensor of an admissible diagram: the unique non-crossing
    /// matching at each vertex with no arc returning to its own slot, and leaf
    /// words `UP^up DOWN^down`.
    pub fn planar(graph: &RibbonGraph, diagram: &WeightDiagram) -> Result<Self, WeightError> {
        min_level(graph, diagram)?;
        let widths: Vec<u32> = (0..graph.half_edge_count())
            .map(|h| diagram.half_edge_weight(graph, h))
            .collect();
        let mates = graph
            .vertices()
            .iter()
            .map(|hs| {
                let [a, b, c] = [widths[hs[0]], widths[hs[1]], widths[hs[2]]];
                let x01 = (a + b - c) / 2;
                let x12 = (b + c - a) / 2;
                let x02 = (a + c - b) / 2;
                let n = a + b + c;
                let mut m = vec![0u32; n as usize];
                let mut join = |i: u32, j: u32| {
                    m[i as usize] = j;
                    m[j as usize] = i;
                };
                for i in 0..x02 {
                    join(i, n - 1 - i);
                }
                for i in 0..x01 {
                    join(a - 1 - i, a + i);
                }
                for i in 0..x12 {
                    join(a + b - 1 - i, a + b + i);
                }
                m
            })
            .collect();
        let words = diagram
            .leaves
            .iter()
            .map(|&[up, down]| {
                std::iter::repeat_n(Orient::Up, up as usize)
                    .chain(std::iter::repeat_n(Orient::Down, down as usize))
                    .collect()
            })
            .collect();
        Ok(Self { widths, mates, words })
    }

    pub fn widths(&self) -> &[u32] {
        &self.widths
    }

    pub fn mates(&self, v: usize) -> &[u32] {
        &self.mates[v]
    }

    pub fn word(&self, leaf: usize) -> &[Orient] {
        &self.words[leaf]
    }

    /// Linear index of the first point of each slot, plus the total.
    pub fn offsets(&self, graph: &RibbonGraph, v: usize) -> [u32; 4] {
        let hs = graph.vertex(v);
        let mut o = [0u32; 4];
        for s in 0..3 {
            o[s + 1] = o[s] + self.widths[hs[s]];
        }
        o
    }

    /// `(slot, position)` of a linear index.
    pub fn locate(&self, graph: &RibbonGraph, v: usize, lin: u32) -> (usize, u32) {
        let o = self.offsets(graph, v);
        let slot = (0..3).find(|&s| lin < o[s + 1]).expect("index in range");
        (slot, lin - o[slot])
    }

    /// The glued point across the strand at `(v, lin)`, or `None` on a leaf.
    pub fn far(&self, graph: &RibbonGraph, v: usize, lin: u32) -> Option<(usize, u32)> {
        let (slot, pos) = self.locate(graph, v, lin);
        let h = graph.vertex(v)[slot];
        let p = graph.partner(h)?;
        let inc = graph.incidence(p);
        let width = self.widths[h];
        Some((inc.vertex, self.offsets(graph, inc.vertex)[inc.slot] + width - 1 - pos))
    }

    /// Edge weights and leaf splits of the diagram.
    pub fn weight_diagram(&self, graph: &RibbonGraph) -> WeightDiagram {
        WeightDiagram {
            edges: graph.edges().iter().map(|&[a, _]| self.widths[a]).collect(),
            leaves: self
                .words
                .iter()
                .map(|w| {
                    let up = w.iter().filter(|&&o| o == Orient::Up).count() as u32;
                    [up, w.len() as u32 - up]
                })
                .collect(),
        }
    }

    pub fn strands(&self) -> u32 {
        self.widths.iter().sum()
    }

    pub fn crossings(&self) -> usize {
        self.mates.iter().map(|m| crossing_pairs(m).len()).sum()
    }

    pub fn inversions(&self) -> usize {
        self.words
            .iter()
            .map(|w| {
                let mut downs = 0;
                let mut inv = 0;
                for &o in w {
                    match o {
                        Orient::Down => downs += 1,
                        Orient::Up => inv += downs,
                    }
                }
                inv
            })
            .sum()
    }

    /// Strictly decreases along every rewrite.
    pub fn measure(&self) -> (u32, usize, usize) {
        (self.strands(), self.crossings(), self.inversions())
    }

    pub fn is_planar(&self, graph: &RibbonGraph) -> bool {
        Self::planar(graph, &self.weight_diagram(graph)).is_ok_and(|p| &p == self)
    }

    /// Paths in canonical direction and the number of pieces disagreeing with
    /// the reference orientation.
    pub fn traversals(&self, graph: &RibbonGraph) -> (Vec<Traversal>, u32) {
        let mut seen: Vec<Vec<bool>> = self.mates.iter().map(|m| vec![false; m.len()]).collect();
        let mut paths = Vec::new();
        let mut disagree = 0u32;
        let side_of = |v: usize, lin: u32| -> (usize, Option<usize>) {
            let (slot, _) = self.locate(graph, v, lin);
            let h = graph.vertex(v)[slot];
            match graph.incidence(h).end {
                End::Edge { side, .. } => (slot, Some(side)),
                End::Leaf(_) => (slot, None),
            }
        };
        // open paths from their smaller leaf endpoint
        for (l, &h) in graph.leaves().iter().enumerate() {
            let inc = graph.incidence(h);
            let base = self.offsets(graph, inc.vertex)[inc.slot];
            for pos in 0..self.widths[h] {
                let (mut v, mut lin) = (inc.vertex, base + pos);
                if seen[v][lin as usize] {
                    continue;
                }
                let start = self.words[l][pos as usize];
                let mut visits = Vec::new();
                let end = loop {
                    let to = self.mates[v][lin as usize];
                    seen[v][lin as usize] = true;
                    seen[v][to as usize] = true;
                    disagree += u32::from(lin > to);
                    let (from_slot, _) = side_of(v, lin);
                    let (to_slot, side) = side_of(v, to);
                    visits.push(Visit { vertex: v, from_slot, to_slot });
                    match side {
                        None => {
                            let leaf = match graph.incidence(graph.vertex(v)[to_slot]).end {
                                End::Leaf(leaf) => leaf,
                                End::Edge { .. } => unreachable!(),
                            };
                            let (_, p) = self.locate(graph, v, to);
                            break self.words[leaf][p as usize];
                        }
                        Some(side) => {
                            disagree += u32::from(side == 1);
                            (v, lin) = self.far(graph, v, to).expect("internal");
                        }
                    }
                };
                paths.push(Traversal {
                    visits,
                    ends: Some([start, end]),
                });
            }
        }
        // closed paths
        for v0 in 0..self.mates.len() {
            for lin0 in 0..self.mates[v0].len() as u32 {
                if seen[v0][lin0 as usize] {
                    continue;
                }
                let (mut v, mut lin) = (v0, lin0);
                let mut visits = Vec::new();
                loop {
                    let to = self.mates[v][lin as usize];
                    seen[v][lin as usize] = true;
                    seen[v][to as usize] = true;
                    disagree += u32::from(lin > to);
                    let (from_slot, _) = side_of(v, lin);
                    let (to_slot, side) = side_of(v, to);
                    visits.push(Visit { vertex: v, from_slot, to_slot });
                    disagree += u32::from(side == Some(1));
                    (v, lin) = self.far(graph, v, to).expect("closed paths avoid leaves");
                    if (v, lin) == (v0, lin0) {
                        break;
                    }
                }
                paths.push(Traversal { visits, ends: None });
            }
        }
        (paths, disagree)
    }

    /// Superimposes two diagrams: on the first side of each edge `self`'s strands
    /// come first, on the second side last; at leaves `self`'s positions come
    /// first. The reference value of the result is the product of the factors'.
    pub fn mix(&self, other: &Self, graph: &RibbonGraph) -> Self {
        let widths: Vec<u32> = self.widths.iter().zip(&other.widths).map(|(a, b)| a + b).collect();
        // shift of each factor's positions on each half-edge
        let shift = |h: usize, first: bool| -> u32 {
            let on_first_side = match graph.incidence(h).end {
                End::Edge { side, .. } => side == 0,
                End::Leaf(_) => true,
            };
            match (first, on_first_side) {
                (true, true) | (false, false) => 0,
                (true, false) => other.widths[h],
                (false, true) => self.widths[h],
            }
        };
        let mates = (0..graph.vertex_count())
            .map(|v| {
                let hs = graph.vertex(v);
                let mut o = [0u32; 4];
                for s in 0..3 {
                    o[s + 1] = o[s] + widths[hs[s]];
                }
                let map = |d: &ArcDiagram, first: bool, lin: u32| {
                    let (slot, pos) = d.locate(graph, v, lin);
                    o[slot] + shift(hs[slot], first) + pos
                };
                let mut m = vec![0u32; o[3] as usize];
                for (d, first) in [(self, true), (other, false)] {
                    for (i, &j) in d.mates[v].iter().enumerate() {
                        m[map(d, first, i as u32) as usize] = map(d, first, j);
                    }
                }
                m
            })
            .collect();
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a.iter().chain(b).copied().collect())
            .collect();
        Self { widths, mates, words }
    }

    /// Drops the listed points (which must be closed under "far" for internal
    /// slots) after adding the given arcs, all in current linear indices.
    pub(crate) fn edit(&self, graph: &RibbonGraph, drops: &[(usize, u32)], arcs: &[(usize, u32, u32)]) -> Self {
        let mut mates = self.mates.clone();
        for &(v, a, b) in arcs {
            mates[v][a as usize] = b;
            mates[v][b as usize] = a;
        }
        let dropped: BTreeSet<(usize, u32)> = drops.iter().copied().collect();
        let mut widths = self.widths.clone();
        let mut words = self.words.clone();
        let mut removed_positions: Vec<Vec<u32>> = vec![Vec::new(); graph.half_edge_count()];
        for &(v, lin) in &dropped {
            let (slot, pos) = self.locate(graph, v, lin);
            removed_positions[graph.vertex(v)[slot]].push(pos);
        }
        for (h, positions) in removed_positions.iter_mut().enumerate() {
            widths[h] -= positions.len() as u32;
            if let End::Leaf(l) = graph.incidence(h).end {
                positions.sort_unstable();
                for &p in positions.iter().rev() {
                    words[l].remove(p as usize);
                }
            }
        }
        let mates = mates
            .iter()
            .enumerate()
            .map(|(v, m)| {
                let mut renumber = vec![u32::MAX; m.len()];
                let mut next = 0;
                for (i, slot) in renumber.iter_mut().enumerate() {
                    if !dropped.contains(&(v, i as u32)) {
                        *slot = next;
                        next += 1;
                    }
                }
                let mut out = vec![0u32; next as usize];
                for (i, &j) in m.iter().enumerate() {
                    if renumber[i] != u32::MAX {
                        debug_assert_ne!(renumber[j as usize], u32::MAX, "mate of kept point dropped");
                        out[renumber[i] as usize] = renumber[j as usize];
                    }
                }
                out
            })
            .collect();
        let out = Self { widths, mates, words };
        debug_assert!(graph.edges().iter().all(|&[a, b]| out.widths[a] == out.widths[b]));
        out
    }
}

/// Crossing arc pairs `((i,k),(j,l))` with `i<j<k<l` in a matching.
pub(crate) fn crossing_pairs(m: &[u32]) -> Vec<((u32, u32), (u32, u32))> {
    let arcs: Vec<(u32, u32)> = m
        .iter()
        .enumerate()
        .filter(|&(i, &j)| (i as u32) < j)
        .map(|(i, &j)| (i as u32, j))
        .collect();
    let mut out = Vec::new();
    for (x, &(i, k)) in arcs.iter().enumerate() {
        for &(j, l) in &arcs[x + 1..] {
            if i < j && j < k && k < l {
                out.push(((i, k), (j, l)));
            }
        }
    }
    out
}
