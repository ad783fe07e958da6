use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use super::EvalError;
use crate::graph::RibbonGraph;
use crate::skein::Orient;
use crate::Rational;

pub type Vec2 = [Rational; 2];

/// `u0 w1 - u1 w0`.
pub fn det2(u: &Vec2, w: &Vec2) -> Rational {
    &u[0] * &w[1] - &u[1] * &w[0]
}

/// An exact rational 2x2 matrix of determinant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sl2 {
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
}

impl Sl2 {
    /// Rows `[a, b]`, `[c, d]`.
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self, EvalError> {
        let m = Self { a, b, c, d };
        if !m.det().is_one() {
            return Err(EvalError::NotUnimodular(m.to_string()));
        }
        Ok(m)
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self, EvalError> {
        let r = |x: i64| Rational::from_integer(BigInt::from(x));
        Self::new(r(a), r(b), r(c), r(d))
    }

    pub fn identity() -> Self {
        Self {
            a: Rational::one(),
            b: Rational::zero(),
            c: Rational::zero(),
            d: Rational::one(),
        }
    }

    /// `[[1,a],[0,1]] [[1,0],[b,1]] [[1,c],[0,1]]`.
    pub fn elementary_product(a: &Rational, b: &Rational, c: &Rational) -> Self {
        let one = Rational::one();
        let ab1 = &one + a * b;
        Self {
            a: ab1.clone(),
            b: a + c * &ab1,
            c: b.clone(),
            d: &one + b * c,
        }
    }

    /// An elementary product with numerators in `-10..=10` and denominators in `1..=10`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let a = small_rational(rng);
        let b = small_rational(rng);
        let c = small_rational(rng);
        Self::elementary_product(&a, &b, &c)
    }

    pub fn entries(&self) -> [&Rational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.d
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        [&self.a * &v[0] + &self.b * &v[1], &self.c * &v[0] + &self.d * &v[1]]
    }

    /// First column for `Up`, second for `Down`.
    pub fn column(&self, o: Orient) -> Vec2 {
        match o {
            Orient::Up => [self.a.clone(), self.c.clone()],
            Orient::Down => [self.b.clone(), self.d.clone()],
        }
    }
}

impl fmt::Display for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl Serialize for Sl2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let e = self.entries().map(|x| x.to_string());
        [[&e[0], &e[1]], [&e[2], &e[3]]].serialize(s)
    }
}

fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(-10i64..=10)), BigInt::from(rng.gen_range(1i64..=10)))
}

/// Deterministic per seed.
pub fn random_sl2(seed: u64) -> Sl2 {
    Sl2::random(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// The generator for sample `index` of a seeded run; independent of thread layout.
pub fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// One matrix per half-edge, grouped by vertex slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sl2Point {
    pub slots: Vec<[Sl2; 3]>,
}

impl Sl2Point {
    pub fn identity(graph: &RibbonGraph) -> Self {
        Self {
            slots: vec![[Sl2::identity(), Sl2::identity(), Sl2::identity()]; graph.vertex_count()],
        }
    }

    pub fn random<R: Rng + ?Sized>(graph: &RibbonGraph, rng: &mut R) -> Self {
        Self {
            slots: (0..graph.vertex_count())
                .map(|_| [Sl2::random(rng), Sl2::random(rng), Sl2::random(rng)])
                .collect(),
        }
    }

    /// Lifts a character-variety point: cotree edge `i` carries `matrices[i]` on
    /// its second half-edge, every other slot the identity.
    pub fn phi_lift(graph: &RibbonGraph, matrices: &[Sl2]) -> Result<Self, EvalError> {
        let tree = graph.spanning_tree();
        if matrices.len() != tree.cotree.len() {
            return Err(EvalError::WrongTupleLength {
                expected: tree.cotree.len(),
                found: matrices.len(),
            });
        }
        let mut p = Self::identity(graph);
        for (m, &e) in matrices.iter().zip(&tree.cotree) {
            let inc = graph.incidence(graph.edge(e)[1]);
            p.slots[inc.vertex][inc.slot] = m.clone();
        }
        Ok(p)
    }

    pub fn matrix(&self, graph: &RibbonGraph, h: usize) -> &Sl2 {
        let inc = graph.incidence(h);
        &self.slots[inc.vertex][inc.slot]
    }

    /// `M -> g M` on every slot of `vertex`.
    pub fn left_act(&self, vertex: usize, g: &Sl2) -> Self {
        let mut p = self.clone();
        for m in p.slots[vertex].iter_mut() {
            *m = g.mul(m);
        }
        p
    }

    /// `M -> M h` on both half-edges of `edge`.
    pub fn glue_act(&self, graph: &RibbonGraph, edge: usize, h: &Sl2) -> Self {
        let mut p = self.clone();
        for he in graph.edge(edge) {
            let inc = graph.incidence(he);
            let m = &mut p.slots[inc.vertex][inc.slot];
            *m = m.mul(h);
        }
        p
    }
}
