//! Randomised identity suites. Each check compares two exact rationals, so a
//! single mismatch is a genuine failure, never noise.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use skeinlab::eval::{
    eval_element, eval_gamma_tensor, eval_plucker, eval_trace_word, rank_check, sample_rng, Sl2, Sl2Point,
};
use skeinlab::skein::rewrite::applicable;
use skeinlab::skein::{
    expand_diagram, expand_diagram_with, expand_to_planar, multiply, planar_lift, trace_word_tensor, ArcDiagram,
    GammaTensor, Letter, SkeinElement, Word,
};
use skeinlab::weights::{enumerate_level, hilbert_function, Variant};
use skeinlab::{Integer, Rational, RibbonGraph};

use crate::input::InputError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Plucker,
    Skein,
    Trace,
    Rank,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Plucker => "plucker",
            Suite::Skein => "skein",
            Suite::Trace => "trace",
            Suite::Rank => "rank",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Outcome {
    pub suite: &'static str,
    pub seed: u64,
    pub samples: usize,
    pub checks: usize,
    pub failures: usize,
    /// The first failing check, if any.
    pub detail: Option<String>,
}

impl Outcome {
    fn new(suite: Suite, seed: u64, samples: usize) -> Self {
        Self {
            suite: suite.name(),
            seed,
            samples,
            checks: 0,
            failures: 0,
            detail: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            self.detail.get_or_insert_with(what);
        }
    }
}

pub fn run(graph: &RibbonGraph, suite: Suite, seed: u64, samples: usize, level: u32) -> Result<Outcome, InputError> {
    let mut out = Outcome::new(suite, seed, samples);
    match suite {
        Suite::Plucker => plucker(&mut out),
        Suite::Skein => skein(graph, level.max(1), &mut out)?,
        Suite::Trace => trace(graph, &mut out)?,
        Suite::Rank => rank(graph, level, &mut out)?,
    }
    Ok(out)
}

fn rational(n: i64) -> Rational {
    Rational::from_integer(Integer::from(n))
}

/// Every three-term relation among the six columns, and unit determinants.
fn plucker(out: &mut Outcome) {
    for i in 0..out.samples {
        let mut rng = sample_rng(out.seed, i);
        let triple = [Sl2::random(&mut rng), Sl2::random(&mut rng), Sl2::random(&mut rng)];
        let p = |a, b| eval_plucker(&triple, a, b).expect("indices in range");
        for a in 1..=6 {
            for b in a + 1..=6 {
                for c in b + 1..=6 {
                    for d in c + 1..=6 {
                        let r = p(a, b) * p(c, d) - p(a, c) * p(b, d) + p(a, d) * p(b, c);
                        out.check(r == rational(0), || format!("sample {i}: relation {a}{b}{c}{d} gives {r}"));
                    }
                }
            }
        }
        for m in 0..3 {
            out.check(p(2 * m + 1, 2 * m + 2) == rational(1), || format!("sample {i}: det of matrix {m}"));
        }
    }
}

/// Products evaluate to products of values, and a random rewrite order reaches
/// the same planar expansion as the fixed one.
fn skein(graph: &RibbonGraph, level: u32, out: &mut Outcome) -> Result<(), InputError> {
    let pool: Vec<_> = (1..=level).flat_map(|l| enumerate_level(graph, l, Variant::Full)).collect();
    if pool.is_empty() {
        return Err(InputError::new("the graph has no diagrams to multiply"));
    }
    for i in 0..out.samples {
        let mut rng = sample_rng(out.seed, i);
        let a = pool.choose(&mut rng).expect("non-empty").clone();
        let b = pool.choose(&mut rng).expect("non-empty").clone();
        let point = Sl2Point::random(graph, &mut rng);
        let basis = |w| SkeinElement::basis(graph, w).expect("enumerated diagrams are admissible");
        let (x, y) = (basis(a.clone()), basis(b.clone()));
        let p = multiply(graph, &x, &y).expect("same graph");
        let value = |e: &SkeinElement| eval_element(graph, e, &point).expect("same graph");
        let (vp, vx, vy) = (value(&p), value(&x), value(&y));
        out.check(vp == &vx * &vy, || format!("sample {i}: P{a} * P{b} evaluates wrongly"));

        let planar = |w| ArcDiagram::planar(graph, w).expect("admissible");
        let mixed = planar(&a).mix(&planar(&b), graph);
        let mut choose = |g: &RibbonGraph, d: &ArcDiagram| {
            let options = applicable(g, d);
            options.choose(&mut rng).copied()
        };
        let random_order = expand_diagram_with(graph, &mixed, &mut choose);
        out.check(random_order == expand_diagram(graph, &mixed), || {
            format!("sample {i}: rewrite order changes the expansion of P{a} * P{b}")
        });
    }
    Ok(())
}

/// Trace-word tensors evaluate to traces at lifted points, before and after expansion.
fn trace(graph: &RibbonGraph, out: &mut Outcome) -> Result<(), InputError> {
    let genus = graph.genus();
    if genus == 0 {
        return Err(InputError::new("trace words need a graph of positive genus"));
    }
    for i in 0..out.samples {
        let mut rng = sample_rng(out.seed, i);
        let len = rng.gen_range(1..=4);
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        while letters.len() < len {
            let next = Letter {
                generator: rng.gen_range(1..=genus),
                inverse: rng.gen(),
            };
            let cancels = |l: &Letter| l.generator == next.generator && l.inverse != next.inverse;
            if letters.last().is_some_and(cancels) || (letters.len() + 1 == len && letters.first().is_some_and(cancels)) {
                continue;
            }
            letters.push(next);
        }
        let word = Word(letters);
        let matrices: Vec<Sl2> = (0..genus).map(|_| Sl2::random(&mut rng)).collect();
        let point = Sl2Point::phi_lift(graph, &matrices).expect("one matrix per generator");
        let tensor = trace_word_tensor(graph, &word).expect("generated words are reduced");
        let expected = eval_trace_word(&word, &matrices).expect("matching tuple");
        let direct = eval_gamma_tensor(graph, &tensor, &point).expect("valid tensor");
        out.check(direct == expected, || format!("sample {i}: tensor of {word} is not its trace"));
        let expanded = expand_to_planar(graph, &tensor).expect("valid tensor");
        let via_basis = eval_element(graph, &expanded, &point).expect("same graph");
        out.check(via_basis == expected, || format!("sample {i}: expansion of {word} changes its value"));
    }
    Ok(())
}

/// Planar tensors up to `level` are independent and as many as the Hilbert function says.
fn rank(graph: &RibbonGraph, level: u32, out: &mut Outcome) -> Result<(), InputError> {
    for l in 0..=level {
        let tensors: Vec<GammaTensor> = enumerate_level(graph, l, Variant::Full)
            .iter()
            .map(|w| {
                let lift = planar_lift(graph, w).expect("admissible");
                GammaTensor::from_diagram(graph, &lift.to_arc_diagram(graph))
            })
            .collect();
        // a few spare points make an accidental rank drop unlikely
        let points = out.samples.max(tensors.len() + 4);
        let r = rank_check(graph, &tensors, points, out.seed.wrapping_add(u64::from(l)))
            .map_err(|e| InputError::new(e.to_string()))?;
        let h = hilbert_function(graph, l, Variant::Full);
        out.check(r as u64 == h, || format!("level {l}: rank {r} but hilbert {h}"));
    }
    Ok(())
}
