//! The rewriting system that expands any arc diagram into planar tensors.
//!
//! All rules are stated in reference values (module docs of [`crate::skein`]),
//! so coefficients are integers. For a cap `(p, q)` on an internal slot with far
//! points `p'`, `q'` joined to `x`, `y` at the other end of the edge, the
//! replacement arc `{x, y}` carries `σ1 σ2 σ3` where `σ1 = sgn(x - p')`,
//! `σ2 = sgn(y - q')`, `σ3 = sgn(y - x)` on linear indices. For a leaf pair
//! `DOWN, UP` at points `p, p+1` joined to `x`, `y`, the joined term carries
//! `-σ1 σ2 σ3` with `σ1 = sgn(x - p)`, `σ2 = sgn(y - p - 1)`, `σ3 = sgn(y - x)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::diagram::crossing_pairs;
use super::{ArcDiagram, Orient, SkeinError};
use crate::graph::{End, RibbonGraph};
use crate::weights::WeightDiagram;

/// Integer combination of (not necessarily planar) diagrams.
pub type Combination = Vec<(BigInt, ArcDiagram)>;

/// A single applicable rewrite; indices are linear indices at `vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rewrite {
    LeafCap { vertex: usize, p: u32, q: u32 },
    InternalCap { vertex: usize, p: u32, q: u32 },
    Crossing { vertex: usize, first: (u32, u32), second: (u32, u32) },
    Inversion { leaf: usize, position: u32 },
}

fn sgn(lo: u32, hi: u32) -> i32 {
    if lo < hi {
        1
    } else {
        -1
    }
}

/// Every cap, crossing and leaf inversion present in the diagram.
pub fn applicable(graph: &RibbonGraph, d: &ArcDiagram) -> Vec<Rewrite> {
    let mut out = caps(graph, d, false);
    for (vertex, m) in d.mates.iter().enumerate() {
        for (first, second) in crossing_pairs(m) {
            out.push(Rewrite::Crossing { vertex, first, second });
        }
    }
    out.extend(inversions(graph, d, false));
    out
}

fn caps(graph: &RibbonGraph, d: &ArcDiagram, first_only: bool) -> Vec<Rewrite> {
    let mut out = Vec::new();
    for (vertex, m) in d.mates.iter().enumerate() {
        let o = d.offsets(graph, vertex);
        for slot in 0..3 {
            for p in o[slot]..o[slot + 1] {
                let q = m[p as usize];
                if q > p && q < o[slot + 1] {
                    let leaf = matches!(graph.incidence(graph.vertex(vertex)[slot]).end, End::Leaf(_));
                    out.push(if leaf {
                        Rewrite::LeafCap { vertex, p, q }
                    } else {
                        Rewrite::InternalCap { vertex, p, q }
                    });
                    if first_only {
                        return out;
                    }
                }
            }
        }
    }
    out
}

/// Adjacent `DOWN, UP` leaf pairs not joined to each other (those are caps).
fn inversions(graph: &RibbonGraph, d: &ArcDiagram, first_only: bool) -> Vec<Rewrite> {
    let mut out = Vec::new();
    for (leaf, w) in d.words.iter().enumerate() {
        let inc = graph.incidence(graph.leaf(leaf));
        let base = d.offsets(graph, inc.vertex)[inc.slot];
        for position in 0..w.len().saturating_sub(1) {
            let p = base + position as u32;
            let joined = d.mates[inc.vertex][p as usize] == p + 1;
            if w[position] == Orient::Down && w[position + 1] == Orient::Up && !joined {
                out.push(Rewrite::Inversion {
                    leaf,
                    position: position as u32,
                });
                if first_only {
                    return out;
                }
            }
        }
    }
    out
}

/// Deterministic choice: caps first; then the innermost crossing at the lowest
/// vertex (shortest inner span, then lowest endpoint); then the first inversion.
pub fn preferred(graph: &RibbonGraph, d: &ArcDiagram) -> Option<Rewrite> {
    if let Some(&cap) = caps(graph, d, true).first() {
        return Some(cap);
    }
    for (vertex, m) in d.mates.iter().enumerate() {
        let best = crossing_pairs(m)
            .into_iter()
            .min_by_key(|&((i, k), (j, _))| (k - j, i));
        if let Some((first, second)) = best {
            return Some(Rewrite::Crossing { vertex, first, second });
        }
    }
    inversions(graph, d, true).first().copied()
}

/// Applies one rewrite, returning the equivalent combination.
pub fn apply(graph: &RibbonGraph, d: &ArcDiagram, rewrite: Rewrite) -> Combination {
    match rewrite {
        Rewrite::LeafCap { vertex, p, q } => {
            let (slot, pp) = d.locate(graph, vertex, p);
            let (_, pq) = d.locate(graph, vertex, q);
            let leaf = match graph.incidence(graph.vertex(vertex)[slot]).end {
                End::Leaf(l) => l,
                End::Edge { .. } => unreachable!("leaf cap on an internal slot"),
            };
            let c = Orient::det(d.words[leaf][pp as usize], d.words[leaf][pq as usize]);
            if c == 0 {
                return Vec::new();
            }
            vec![(BigInt::from(c), d.edit(graph, &[(vertex, p), (vertex, q)], &[]))]
        }
        Rewrite::InternalCap { vertex, p, q } => {
            let (w, fp) = d.far(graph, vertex, p).expect("internal slot");
            let (_, fq) = d.far(graph, vertex, q).expect("internal slot");
            let drops = [(vertex, p), (vertex, q), (w, fp), (w, fq)];
            let x = d.mates[w][fp as usize];
            if x == fq {
                return vec![(BigInt::from(-2), d.edit(graph, &drops, &[]))];
            }
            let y = d.mates[w][fq as usize];
            let c = sgn(fp, x) * sgn(fq, y) * sgn(x, y);
            vec![(BigInt::from(c), d.edit(graph, &drops, &[(w, x, y)]))]
        }
        Rewrite::Crossing { vertex, first: (i, k), second: (j, l) } => {
            debug_assert!(i < j && j < k && k < l);
            vec![
                (BigInt::one(), d.edit(graph, &[], &[(vertex, i, j), (vertex, k, l)])),
                (BigInt::one(), d.edit(graph, &[], &[(vertex, i, l), (vertex, j, k)])),
            ]
        }
        Rewrite::Inversion { leaf, position } => {
            let h = graph.leaf(leaf);
            let inc = graph.incidence(h);
            let v = inc.vertex;
            let p = d.offsets(graph, v)[inc.slot] + position;
            let x = d.mates[v][p as usize];
            let y = d.mates[v][p as usize + 1];
            debug_assert!(x != p + 1, "caps are resolved before inversions");
            let mut swapped = d.clone();
            swapped.words[leaf].swap(position as usize, position as usize + 1);
            let c = -(sgn(p, x) * sgn(p + 1, y) * sgn(x, y));
            vec![
                (BigInt::one(), swapped),
                (BigInt::from(c), d.edit(graph, &[(v, p), (v, p + 1)], &[(v, x, y)])),
            ]
        }
    }
}

/// Crossing resolution at `vertex` (the preferred crossing there).
pub fn resolve_crossing(graph: &RibbonGraph, d: &ArcDiagram, vertex: usize) -> Result<Combination, SkeinError> {
    let m = d.mates.get(vertex).ok_or(SkeinError::NoCrossing { vertex })?;
    let (first, second) = crossing_pairs(m)
        .into_iter()
        .min_by_key(|&((i, k), (j, _))| (k - j, i))
        .ok_or(SkeinError::NoCrossing { vertex })?;
    Ok(apply(graph, d, Rewrite::Crossing { vertex, first, second }))
}

/// Retracts the first cap at `vertex`.
pub fn retract_cap(graph: &RibbonGraph, d: &ArcDiagram, vertex: usize) -> Result<Combination, SkeinError> {
    let cap = caps(graph, d, false)
        .into_iter()
        .find(|r| matches!(r, Rewrite::LeafCap { vertex: v, .. } | Rewrite::InternalCap { vertex: v, .. } if *v == vertex))
        .ok_or(SkeinError::NotACap { vertex })?;
    Ok(apply(graph, d, cap))
}

/// Expands into the planar basis using the deterministic rule order.
pub fn expand_diagram(graph: &RibbonGraph, d: &ArcDiagram) -> BTreeMap<WeightDiagram, BigInt> {
    expand_diagram_with(graph, d, &mut |g, d| preferred(g, d))
}

/// Expands using `choose` to pick the next rewrite of a non-planar diagram; it
/// must return `Some` whenever [`applicable`] is non-empty.
pub fn expand_diagram_with(
    graph: &RibbonGraph,
    d: &ArcDiagram,
    choose: &mut dyn FnMut(&RibbonGraph, &ArcDiagram) -> Option<Rewrite>,
) -> BTreeMap<WeightDiagram, BigInt> {
    // Rewrites strictly decrease the measure, so popping the largest key sees
    // every contribution to a diagram before the diagram itself is rewritten.
    let mut work: BTreeMap<((u32, usize, usize), ArcDiagram), BigInt> = BTreeMap::new();
    work.insert((d.measure(), d.clone()), BigInt::one());
    let mut out: BTreeMap<WeightDiagram, BigInt> = BTreeMap::new();
    while let Some(((measure, diagram), coeff)) = work.pop_last() {
        if coeff.is_zero() {
            continue;
        }
        match choose(graph, &diagram) {
            None => {
                debug_assert!(diagram.is_planar(graph), "terminal diagram is planar");
                *out.entry(diagram.weight_diagram(graph)).or_default() += coeff;
            }
            Some(rewrite) => {
                for (c, child) in apply(graph, &diagram, rewrite) {
                    let key = (child.measure(), child);
                    debug_assert!(key.0 < measure, "rewrite must decrease the measure");
                    *work.entry(key).or_default() += &coeff * c;
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}
