use std::fmt;
use std::str::FromStr;

use super::{GammaTensor, SkeinError};
use crate::graph::{End, HalfEdge, RibbonGraph};

/// `x_generator` or its inverse; generators are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

/// A word in the free group on the cotree edges of a spanning tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Fails at the first letter followed by its inverse.
    pub fn check_reduced(&self) -> Result<(), SkeinError> {
        if self.0.is_empty() {
            return Err(SkeinError::EmptyWord);
        }
        for (i, w) in self.0.windows(2).enumerate() {
            if w[0].generator == w[1].generator && w[0].inverse != w[1].inverse {
                return Err(SkeinError::NotReduced { position: i + 1 });
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = SkeinError;

    /// Accepts `x1*x2^-1`, `x1 x2^-1` and powers such as `x1^3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SkeinError::Parse(s.to_string());
        let mut letters = Vec::new();
        for token in s.split(|c: char| c == '*' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let body = token.strip_prefix('x').ok_or_else(err)?;
            let (gen, power) = match body.split_once('^') {
                Some((g, p)) => (g, p.parse::<i64>().map_err(|_| err())?),
                None => (body, 1),
            };
            let generator: usize = gen.parse().map_err(|_| err())?;
            if generator == 0 || power == 0 {
                return Err(err());
            }
            for _ in 0..power.unsigned_abs() {
                letters.push(Letter {
                    generator,
                    inverse: power < 0,
                });
            }
        }
        if letters.is_empty() {
            return Err(SkeinError::EmptyWord);
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "x{}", l.generator)?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// The closed path of `word` as a directed Γ-tensor.
///
/// Generators are the cotree edges of the breadth-first spanning tree from
/// vertex 0, in edge order. `x_i` crosses its edge from the second half-edge to
/// the first; tree paths connect consecutive letters and immediate backtracks
/// are cancelled. Under the lift that puts `A_i` on the second half-edge of
/// cotree edge `i` and the identity elsewhere, the tensor evaluates to
/// `tr(word(A))`.
pub fn trace_word_tensor(graph: &RibbonGraph, word: &Word) -> Result<GammaTensor, SkeinError> {
    word.check_reduced()?;
    let tree = graph.spanning_tree();
    let genus = tree.cotree.len();
    let mut steps: Vec<(HalfEdge, HalfEdge)> = Vec::new();
    let mut here = 0usize;
    for l in word.letters() {
        if l.generator > genus {
            return Err(SkeinError::UnknownGenerator {
                generator: l.generator,
                genus,
            });
        }
        let [a, b] = graph.edge(tree.cotree[l.generator - 1]);
        let (out, into) = if l.inverse { (a, b) } else { (b, a) };
        push_steps(&mut steps, tree.path(graph, here, graph.incidence(out).vertex));
        push_steps(&mut steps, vec![(out, into)]);
        here = graph.incidence(into).vertex;
    }
    push_steps(&mut steps, tree.path(graph, here, 0));
    // cyclic cancellation
    while steps.len() >= 2 {
        let (first, last) = (steps[0], steps[steps.len() - 1]);
        if last == (first.1, first.0) {
            steps.remove(0);
            steps.pop();
        } else {
            break;
        }
    }
    let edge_of = |h: HalfEdge| match graph.incidence(h).end {
        End::Edge { edge, .. } => edge,
        End::Leaf(_) => unreachable!("paths avoid leaves"),
    };
    let mut used = vec![0usize; graph.edge_count()];
    let positions: Vec<usize> = steps
        .iter()
        .map(|&(out, _)| {
            let e = edge_of(out);
            used[e] += 1;
            used[e] - 1
        })
        .collect();
    let mut arcs = vec![Vec::new(); graph.vertex_count()];
    let n = steps.len();
    for k in 0..n {
        let (_, into) = steps[k];
        let (out, _) = steps[(k + 1) % n];
        let (i, o) = (graph.incidence(into), graph.incidence(out));
        debug_assert_eq!(i.vertex, o.vertex);
        arcs[i.vertex].push([[i.slot, positions[k]], [o.slot, positions[(k + 1) % n]]]);
    }
    Ok(GammaTensor {
        arcs,
        gluings: used.iter().map(|&w| (0..w).collect()).collect(),
        leaves: vec![Vec::new(); graph.leaf_count()],
    })
}

fn push_steps(steps: &mut Vec<(HalfEdge, HalfEdge)>, more: Vec<(HalfEdge, HalfEdge)>) {
    for s in more {
        if steps.last() == Some(&(s.1, s.0)) {
            steps.pop();
        } else {
            steps.push(s);
        }
    }
}
