//! Γ-tensors as arc diagrams, the planar basis, and the skein rewriting system.
//!
//! # Normal form
//!
//! An [`ArcDiagram`] records, for every half-edge, how many strand ends sit on
//! it (its width), and for every vertex a perfect matching on its boundary
//! points. Boundary points at a vertex are numbered linearly: slot 0 positions,
//! then slot 1, then slot 2. Position `k` on the first half-edge of an edge of
//! width `W` is glued to position `W - 1 - k` on the second half-edge, which is
//! the planar gluing along a ribbon. Leaves carry an orientation word.
//!
//! # Sign convention
//!
//! Every arc is referenced from its lower to its higher linear index and every
//! strand from the first half-edge of its edge to the second. The reference
//! value of a diagram is the product of its path values taken in canonical
//! directions, times `-1` for every arc or strand whose canonical direction
//! disagrees with the reference. Open paths run from their smaller leaf endpoint
//! `(leaf, position)`; closed paths may be read either way. With this sign the
//! value is the orientation sum
//!
//! ```text
//! Σ_o Π_strands s(o) Π_arcs det(M e_o(lo), M e_o(hi)),  s = +1 iff the first side is DOWN,
//! ```
//!
//! so every rewrite below is a local Plücker identity with integer coefficients:
//!
//! - crossing `(i,k),(j,l)`, `i<j<k<l`: `(i,j),(k,l)` plus `(i,l),(j,k)`;
//! - cap on a leaf: `det(e_p, e_q)`;
//! - cap on an internal slot: `-2` when it closes a trivial loop, otherwise it is
//!   pulled through the edge with sign `σ1 σ2 σ3` (see [`rewrite`]);
//! - `DOWN, UP` at a leaf: swap to `UP, DOWN` and subtract the joined term.

mod diagram;
mod element;
pub mod rewrite;
mod tensor;
mod trace;

pub use diagram::{ArcDiagram, Traversal, Visit};
pub use element::{expand_to_planar, multiply, multiply_with, planar_lift, truncate_to_stratum, PlanarTensor, SkeinElement, Term};
pub use rewrite::{expand_diagram, expand_diagram_with, resolve_crossing, retract_cap, Combination, Rewrite};
pub use tensor::{Endpoint, GammaTensor};
pub use trace::{trace_word_tensor, Letter, Word};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::weights::WeightError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeinError {
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("operands live on different graphs")]
    GraphMismatch,
    #[error("no crossing at vertex {vertex}")]
    NoCrossing { vertex: usize },
    #[error("no cap at vertex {vertex}")]
    NotACap { vertex: usize },
    #[error("empty word")]
    EmptyWord,
    #[error("word is not reduced at letter {position}")]
    NotReduced { position: usize },
    #[error("generator x{generator} does not exist; the graph has genus {genus}")]
    UnknownGenerator { generator: usize, genus: usize },
    #[error("term of level {found} exceeds level {level}")]
    LevelExceeded { found: u32, level: u32 },
    #[error("invalid tensor: {0}")]
    BadTensor(String),
    #[error("cannot parse word `{0}`")]
    Parse(String),
}

/// Leaf orientation: `Up` selects the first column of the leaf matrix, `Down` the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Orient {
    #[serde(rename = "U")]
    Up,
    #[serde(rename = "D")]
    Down,
}

impl Orient {
    pub fn flip(self) -> Self {
        match self {
            Orient::Up => Orient::Down,
            Orient::Down => Orient::Up,
        }
    }

    /// `det(e_a, e_b)` for the standard basis vectors.
    pub fn det(a: Orient, b: Orient) -> i32 {
        match (a, b) {
            (Orient::Up, Orient::Down) => 1,
            (Orient::Down, Orient::Up) => -1,
            _ => 0,
        }
    }
}
