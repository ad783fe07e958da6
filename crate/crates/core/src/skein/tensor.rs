use serde::{Deserialize, Serialize};

use super::{ArcDiagram, Orient, SkeinError};
use crate::graph::{End, RibbonGraph};

/// A boundary point of a vertex: `[slot, position]`.
pub type Endpoint = [usize; 2];

/// A directed Γ-tensor with arbitrary gluings.
///
/// Each vertex carries directed arcs between its boundary points. Edge `e` of
/// width `W` glues position `k` on its first half-edge to position `gluings[e][k]`
/// on its second. Directions must be coherent: a path leaving a vertex through
/// a glued point enters the neighbouring vertex at the partner point. Its value
/// is the product of its path values in the given directions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaTensor {
    pub arcs: Vec<Vec<[Endpoint; 2]>>,
    pub gluings: Vec<Vec<usize>>,
    #[serde(default)]
    pub leaves: Vec<Vec<Orient>>,
}

impl GammaTensor {
    /// Converts to normal form. Returns the diagram and the sign `s` with
    /// `value(self) = s * reference_value(diagram)`.
    pub fn to_diagram(&self, graph: &RibbonGraph) -> Result<(ArcDiagram, i32), SkeinError> {
        let bad = |m: String| Err(SkeinError::BadTensor(m));
        if self.arcs.len() != graph.vertex_count()
            || self.gluings.len() != graph.edge_count()
            || self.leaves.len() != graph.leaf_count()
        {
            return bad(format!(
                "expected {} vertices, {} edges and {} leaves",
                graph.vertex_count(),
                graph.edge_count(),
                graph.leaf_count()
            ));
        }
        let mut widths = vec![0u32; graph.half_edge_count()];
        for (e, perm) in self.gluings.iter().enumerate() {
            let mut seen = vec![false; perm.len()];
            for &p in perm {
                if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                    return bad(format!("gluing of edge {e} is not a permutation"));
                }
            }
            let [a, b] = graph.edge(e);
            widths[a] = perm.len() as u32;
            widths[b] = perm.len() as u32;
        }
        for (l, word) in self.leaves.iter().enumerate() {
            widths[graph.leaf(l)] = word.len() as u32;
        }
        // Renumber second-side positions so the gluing becomes the planar reversal.
        let normal_pos = |h: usize, pos: usize| -> usize {
            match graph.incidence(h).end {
                End::Edge { edge, side: 1 } => {
                    let perm = &self.gluings[edge];
                    let k = perm.iter().position(|&p| p == pos).expect("permutation");
                    perm.len() - 1 - k
                }
                _ => pos,
            }
        };
        let mut mates = Vec::with_capacity(graph.vertex_count());
        let mut disagree = 0u32;
        // direction[h][pos]: Some(true) if a path leaves through this point
        let mut leaves_through: Vec<Vec<Option<bool>>> =
            widths.iter().map(|&w| vec![None; w as usize]).collect();
        for (v, arcs) in self.arcs.iter().enumerate() {
            let hs = graph.vertex(v);
            let mut o = [0usize; 4];
            for s in 0..3 {
                o[s + 1] = o[s] + widths[hs[s]] as usize;
            }
            let mut m = vec![u32::MAX; o[3]];
            for &[from, to] in arcs {
                let mut lin = [0usize; 2];
                for (k, &[slot, pos]) in [from, to].iter().enumerate() {
                    if slot > 2 || pos >= widths[hs[slot]] as usize {
                        return bad(format!("vertex {v} has no point [{slot}, {pos}]"));
                    }
                    let np = normal_pos(hs[slot], pos);
                    lin[k] = o[slot] + np;
                    if leaves_through[hs[slot]][np].replace(k == 1).is_some() {
                        return bad(format!("point [{slot}, {pos}] at vertex {v} is used twice"));
                    }
                }
                if lin[0] == lin[1] {
                    return bad(format!("arc at vertex {v} joins a point to itself"));
                }
                m[lin[0]] = lin[1] as u32;
                m[lin[1]] = lin[0] as u32;
                disagree += u32::from(lin[0] > lin[1]);
            }
            if m.contains(&u32::MAX) {
                return bad(format!("vertex {v} has unmatched points"));
            }
            mates.push(m);
        }
        for (e, &[a, b]) in graph.edges().iter().enumerate() {
            for k in 0..widths[a] as usize {
                let out_first = leaves_through[a][k].expect("matched");
                let out_second = leaves_through[b][widths[b] as usize - 1 - k].expect("matched");
                if out_first == out_second {
                    return bad(format!("incoherent directions on edge {e}"));
                }
                disagree += u32::from(out_second);
            }
        }
        let words = self.leaves.clone();
        let diagram = ArcDiagram::from_parts(graph, widths, mates, words)?;
        Ok((diagram, if disagree.is_multiple_of(2) { 1 } else { -1 }))
    }

    /// The tensor with every path in canonical direction and planar gluings;
    /// its value is the reference value of `d`'s traversal product.
    pub fn from_diagram(graph: &RibbonGraph, d: &ArcDiagram) -> Self {
        let mut arcs = vec![Vec::new(); graph.vertex_count()];
        let mut seen: Vec<Vec<bool>> = d.mates.iter().map(|m| vec![false; m.len()]).collect();
        let point = |v: usize, lin: u32| -> Endpoint {
            let (slot, pos) = d.locate(graph, v, lin);
            [slot, pos as usize]
        };
        let walk = |v0: usize, lin0: u32, arcs: &mut Vec<Vec<[Endpoint; 2]>>, seen: &mut Vec<Vec<bool>>| {
            let (mut v, mut lin) = (v0, lin0);
            loop {
                let to = d.mates[v][lin as usize];
                seen[v][lin as usize] = true;
                seen[v][to as usize] = true;
                arcs[v].push([point(v, lin), point(v, to)]);
                match d.far(graph, v, to) {
                    Some(next) if next != (v0, lin0) => (v, lin) = next,
                    _ => break,
                }
            }
        };
        for &h in graph.leaves() {
            let inc = graph.incidence(h);
            let base = d.offsets(graph, inc.vertex)[inc.slot];
            for pos in 0..d.widths[h] {
                if !seen[inc.vertex][(base + pos) as usize] {
                    walk(inc.vertex, base + pos, &mut arcs, &mut seen);
                }
            }
        }
        for v in 0..graph.vertex_count() {
            for lin in 0..d.mates[v].len() as u32 {
                if !seen[v][lin as usize] {
                    walk(v, lin, &mut arcs, &mut seen);
                }
            }
        }
        let gluings = graph
            .edges()
            .iter()
            .map(|&[a, _]| (0..d.widths[a] as usize).rev().collect())
            .collect();
        Self {
            arcs,
            gluings,
            leaves: d.words.clone(),
        }
    }

    /// The same tensor with every arc direction reversed.
    pub fn reversed(&self) -> Self {
        Self {
            arcs: self
                .arcs
                .iter()
                .map(|a| a.iter().map(|&[x, y]| [y, x]).collect())
                .collect(),
            gluings: self.gluings.clone(),
            leaves: self.leaves.clone(),
        }
    }

    /// Reverses only the path starting at arc `index` of vertex `vertex`.
    pub fn reverse_path(&self, graph: &RibbonGraph, vertex: usize, index: usize) -> Self {
        let mut out = self.clone();
        // follow the path forward and backward via gluings, flipping arcs
        let glued = |v: usize, p: Endpoint| -> Option<(usize, Endpoint)> {
            let h = graph.vertex(v)[p[0]];
            match graph.incidence(h).end {
                End::Edge { edge, side } => {
                    let perm = &self.gluings[edge];
                    let other = graph.edge(edge)[1 - side];
                    let pos = if side == 0 {
                        perm[p[1]]
                    } else {
                        perm.iter().position(|&x| x == p[1]).expect("permutation")
                    };
                    let inc = graph.incidence(other);
                    Some((inc.vertex, [inc.slot, pos]))
                }
                End::Leaf(_) => None,
            }
        };
        let mut stack = vec![(vertex, index)];
        let mut flipped = std::collections::BTreeSet::new();
        while let Some((v, i)) = stack.pop() {
            if !flipped.insert((v, i)) {
                continue;
            }
            let [from, to] = self.arcs[v][i];
            out.arcs[v][i] = [to, from];
            for p in [from, to] {
                if let Some((w, q)) = glued(v, p) {
                    let j = self.arcs[w]
                        .iter()
                        .position(|a| a[0] == q || a[1] == q)
                        .expect("every point is on an arc");
                    stack.push((w, j));
                }
            }
        }
        out
    }
}
