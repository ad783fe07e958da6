//! Exact evaluation on rational SL2 points.
//!
//! A point assigns a matrix `M` to every half-edge. A leaf point with
//! orientation `o` reads the column `M e_o`. A path entering a vertex through
//! slot `i` and leaving through slot `j` contributes `M_i^{-1} M_j`; an open
//! path evaluates to `det(M_first e_o0, M_exit ... M_last e_o1)` and a closed
//! path to the trace of its product. Both are invariant under `M -> g M` at a
//! vertex and `M -> M h` at both ends of an edge.

mod matrix;

pub use matrix::{det2, random_sl2, sample_rng, Sl2, Sl2Point, Vec2};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exec::Exec;
use crate::graph::{End, RibbonGraph};
use crate::linalg;
use crate::skein::{ArcDiagram, GammaTensor, Orient, SkeinElement, SkeinError, Word};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("Plücker index ({i}, {j}) must be two distinct values in 1..=6")]
    BadIndex { i: usize, j: usize },
    #[error("matrix {0} does not have determinant 1")]
    NotUnimodular(String),
    #[error("point does not match the graph")]
    GraphMismatch,
    #[error("expected {expected} matrices, found {found}")]
    WrongTupleLength { expected: usize, found: usize },
    #[error("need at least as many samples ({samples}) as tensors ({tensors})")]
    TooFewSamples { samples: usize, tensors: usize },
    #[error(transparent)]
    Skein(#[from] SkeinError),
}

/// The `(i, j)` minor of the 2x6 matrix formed by the columns of the triple.
pub fn eval_plucker(triple: &[Sl2; 3], i: usize, j: usize) -> Result<Rational, EvalError> {
    if i == j || !(1..=6).contains(&i) || !(1..=6).contains(&j) {
        return Err(EvalError::BadIndex { i, j });
    }
    let col = |k: usize| {
        let o = if (k - 1).is_multiple_of(2) { Orient::Up } else { Orient::Down };
        triple[(k - 1) / 2].column(o)
    };
    Ok(det2(&col(i), &col(j)))
}

/// One pass through a vertex, as `(vertex, entry slot, exit slot)`.
type Step = (usize, usize, usize);

fn path_value(point: &Sl2Point, steps: &[Step], ends: Option<[Orient; 2]>) -> Rational {
    let m = |v: usize, s: usize| &point.slots[v][s];
    match ends {
        Some([o0, o1]) => {
            let (v0, from0, to0) = steps[0];
            let start = m(v0, from0).column(o0);
            let mut p = m(v0, to0).clone();
            for &(v, from, to) in &steps[1..] {
                p = p.mul(&m(v, from).inverse()).mul(m(v, to));
            }
            det2(&start, &p.column(o1))
        }
        None => {
            let mut p = Sl2::identity();
            for &(v, from, to) in steps {
                p = p.mul(&m(v, from).inverse()).mul(m(v, to));
            }
            p.trace()
        }
    }
}

fn check_point(graph: &RibbonGraph, point: &Sl2Point) -> Result<(), EvalError> {
    if point.slots.len() != graph.vertex_count() {
        return Err(EvalError::GraphMismatch);
    }
    Ok(())
}

/// The reference value of a normal-form diagram.
pub fn eval_diagram(graph: &RibbonGraph, d: &ArcDiagram, point: &Sl2Point) -> Rational {
    let (paths, disagree) = d.traversals(graph);
    let mut value = Rational::one();
    for t in &paths {
        let steps: Vec<Step> = t.visits.iter().map(|v| (v.vertex, v.from_slot, v.to_slot)).collect();
        value *= path_value(point, &steps, t.ends);
        if value.is_zero() {
            return value;
        }
    }
    if disagree % 2 == 1 {
        -value
    } else {
        value
    }
}

/// Independent oracle for [`eval_diagram`]: sums over orientations of every
/// strand, `Σ_o Π_strands s(o) Π_arcs det(M e_o(lo), M e_o(hi))`, with
/// `s = +1` iff the first side of the strand is `Down`. Exponential in the
/// number of strands.
pub fn eval_orientation_sum(graph: &RibbonGraph, d: &ArcDiagram, point: &Sl2Point) -> Rational {
    let widths = d.widths();
    let strands: Vec<(usize, u32)> = graph
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(e, &[a, _])| (0..widths[a]).map(move |k| (e, k)))
        .collect();
    assert!(strands.len() < 24, "orientation sum over {} strands", strands.len());
    let mut total = Rational::zero();
    for mask in 0u32..(1 << strands.len()) {
        // orientation of every boundary point, per half-edge
        let mut orient: Vec<Vec<Orient>> = widths.iter().map(|&w| vec![Orient::Up; w as usize]).collect();
        for (l, &h) in graph.leaves().iter().enumerate() {
            orient[h] = d.word(l).to_vec();
        }
        let mut sign = 1i32;
        for (bit, &(e, k)) in strands.iter().enumerate() {
            let first = if mask >> bit & 1 == 1 { Orient::Down } else { Orient::Up };
            if first == Orient::Up {
                sign = -sign;
            }
            let [a, b] = graph.edge(e);
            orient[a][k as usize] = first;
            orient[b][(widths[b] - 1 - k) as usize] = first.flip();
        }
        let mut term = Rational::from_integer(sign.into());
        'vertices: for v in 0..graph.vertex_count() {
            let mates = d.mates(v);
            for (i, &j) in mates.iter().enumerate() {
                if (i as u32) < j {
                    let vec_at = |lin: u32| {
                        let (slot, pos) = d.locate(graph, v, lin);
                        let h = graph.vertex(v)[slot];
                        point.slots[v][slot].column(orient[h][pos as usize])
                    };
                    term *= det2(&vec_at(i as u32), &vec_at(j));
                    if term.is_zero() {
                        break 'vertices;
                    }
                }
            }
        }
        total += term;
    }
    total
}

/// Product of the tensor's path values in the given directions, computed by
/// following its arcs and gluings directly.
pub fn eval_gamma_tensor(graph: &RibbonGraph, tensor: &GammaTensor, point: &Sl2Point) -> Result<Rational, EvalError> {
    check_point(graph, point)?;
    // validates shape and coherence
    tensor.to_diagram(graph)?;
    // arc leaving each point: start[v][(slot, pos)] = arc index
    let mut start = vec![std::collections::BTreeMap::new(); graph.vertex_count()];
    for (v, arcs) in tensor.arcs.iter().enumerate() {
        for (i, &[from, _]) in arcs.iter().enumerate() {
            start[v].insert(from, i);
        }
    }
    let glued = |v: usize, p: [usize; 2]| -> Option<(usize, [usize; 2])> {
        let h = graph.vertex(v)[p[0]];
        match graph.incidence(h).end {
            End::Edge { edge, side } => {
                let perm = &tensor.gluings[edge];
                let pos = if side == 0 {
                    perm[p[1]]
                } else {
                    perm.iter().position(|&x| x == p[1]).expect("permutation")
                };
                let inc = graph.incidence(graph.edge(edge)[1 - side]);
                Some((inc.vertex, [inc.slot, pos]))
            }
            End::Leaf(_) => None,
        }
    };
    let leaf_orient = |v: usize, p: [usize; 2]| -> Option<Orient> {
        match graph.incidence(graph.vertex(v)[p[0]]).end {
            End::Leaf(l) => Some(tensor.leaves[l][p[1]]),
            End::Edge { .. } => None,
        }
    };
    let mut used: Vec<Vec<bool>> = tensor.arcs.iter().map(|a| vec![false; a.len()]).collect();
    let mut value = Rational::one();
    let follow = |v0: usize, i0: usize, used: &mut Vec<Vec<bool>>| -> Rational {
        let (mut v, mut i) = (v0, i0);
        let mut steps = Vec::new();
        let o0 = leaf_orient(v0, tensor.arcs[v0][i0][0]);
        loop {
            used[v][i] = true;
            let [from, to] = tensor.arcs[v][i];
            steps.push((v, from[0], to[0]));
            match glued(v, to) {
                None => {
                    let o1 = leaf_orient(v, to).expect("leaf");
                    return path_value(point, &steps, Some([o0.expect("open path"), o1]));
                }
                Some((w, q)) => {
                    (v, i) = (w, start[w][&q]);
                    if (v, i) == (v0, i0) {
                        return path_value(point, &steps, None);
                    }
                }
            }
        }
    };
    for v in 0..tensor.arcs.len() {
        for i in 0..tensor.arcs[v].len() {
            if leaf_orient(v, tensor.arcs[v][i][0]).is_some() && !used[v][i] {
                value *= follow(v, i, &mut used);
            }
        }
    }
    for v in 0..tensor.arcs.len() {
        for i in 0..tensor.arcs[v].len() {
            if !used[v][i] {
                value *= follow(v, i, &mut used);
            }
        }
    }
    Ok(value)
}

/// Sum of coefficients times reference values of planar tensors.
pub fn eval_element(graph: &RibbonGraph, element: &SkeinElement, point: &Sl2Point) -> Result<Rational, EvalError> {
    check_point(graph, point)?;
    let mut total = Rational::zero();
    for (w, c) in element.iter() {
        let d = ArcDiagram::planar(graph, w).map_err(SkeinError::from)?;
        total += c * eval_diagram(graph, &d, point);
    }
    Ok(total)
}

/// `tr(word(matrices))`; generator `x_i` reads `matrices[i - 1]`.
pub fn eval_trace_word(word: &Word, matrices: &[Sl2]) -> Result<Rational, EvalError> {
    if word.letters().is_empty() {
        return Err(SkeinError::EmptyWord.into());
    }
    let mut p = Sl2::identity();
    for l in word.letters() {
        let m = matrices.get(l.generator - 1).ok_or(SkeinError::UnknownGenerator {
            generator: l.generator,
            genus: matrices.len(),
        })?;
        p = if l.inverse { p.mul(&m.inverse()) } else { p.mul(m) };
    }
    Ok(p.trace())
}

/// Exact rank of the evaluation matrix of `tensors` at `samples` random points.
pub fn rank_check(graph: &RibbonGraph, tensors: &[GammaTensor], samples: usize, seed: u64) -> Result<usize, EvalError> {
    rank_check_with(graph, tensors, samples, seed, Exec::default())
}

pub fn rank_check_with(
    graph: &RibbonGraph,
    tensors: &[GammaTensor],
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<usize, EvalError> {
    if samples < tensors.len() {
        return Err(EvalError::TooFewSamples {
            samples,
            tensors: tensors.len(),
        });
    }
    if tensors.is_empty() {
        return Ok(0);
    }
    for t in tensors {
        t.to_diagram(graph)?;
    }
    let rows = exec.map_range(samples, |i| {
        let point = Sl2Point::random(graph, &mut sample_rng(seed, i));
        tensors
            .iter()
            .map(|t| eval_gamma_tensor(graph, t, &point).expect("validated"))
            .collect::<Vec<_>>()
    });
    Ok(linalg::rank(rows))
}
