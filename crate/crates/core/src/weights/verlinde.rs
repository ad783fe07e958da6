//! SL2 Verlinde numbers, computed twice: from the trigonometric sum in
//! fixed-point arithmetic and from fusion-rule labelings of a comb graph.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{count_with_leaf_totals, WeightError};
use crate::graph::StandardGraph;

/// Fractional bits carried by the fixed-point evaluation (about 115 digits).
const BITS: u32 = 384;

/// Result of the trigonometric formula: nearest integer and distance to it.
#[derive(Debug, Clone, PartialEq)]
pub struct VerlindeValue {
    pub rounded: BigInt,
    pub deviation: f64,
}

/// Dimension of the level-`level` SL2 conformal block space on a genus-`g`
/// curve with the given leaf labels. Errors if the two computations disagree.
pub fn verlinde_dim(g: usize, labels: &[u32], level: u32) -> Result<u64, WeightError> {
    for &label in labels {
        if label > level {
            return Err(WeightError::LabelExceedsLevel { label, level });
        }
    }
    let count = fusion_count(g, labels, level)?;
    let formula = verlinde_formula(g, labels, level);
    let target = BigInt::from(count);
    if formula.rounded != target || formula.deviation > 1e-10 {
        return Err(WeightError::OracleMismatch {
            formula: format!("{} (off by {:e})", formula.rounded, formula.deviation),
            count,
        });
    }
    Ok(count)
}

/// Labelings of the standard comb of type `(g, n)`, padding unstable types with
/// label-zero leaves (which do not change the count).
fn fusion_count(g: usize, labels: &[u32], level: u32) -> Result<u64, WeightError> {
    let mut padded = labels.to_vec();
    while 2 * g + padded.len() < 3 {
        padded.push(0);
    }
    let graph = StandardGraph::Gamma { g, n: padded.len() }.build()?;
    Ok(count_with_leaf_totals(&graph, level, &padded))
}

/// `((L+2)/2)^(g-1) Σ_j s_j(0)^(2-2g-n) Π_i s_j(λ_i)`, `s_j(λ) = sin(π(λ+1)(j+1)/(L+2))`.
pub fn verlinde_formula(g: usize, labels: &[u32], level: u32) -> VerlindeValue {
    let one = BigInt::one() << BITS;
    let pi = pi_fixed();
    let big_n = u64::from(level) + 2;
    let exponent = 2 - 2 * g as i64 - labels.len() as i64;
    let mut sum = BigInt::zero();
    for j in 0..=u64::from(level) {
        let s0 = sin_pi_fraction(j + 1, big_n, &pi);
        let mut term = one.clone();
        for &label in labels {
            term = mul(&term, &sin_pi_fraction((u64::from(label) + 1) * (j + 1), big_n, &pi));
        }
        for _ in 0..exponent.unsigned_abs() {
            term = if exponent > 0 { mul(&term, &s0) } else { div(&term, &s0) };
        }
        sum += term;
    }
    // prefactor ((L+2)/2)^(g-1)
    if g >= 1 {
        sum *= BigInt::from(big_n).pow((g - 1) as u32);
        sum >>= g - 1;
    } else {
        sum <<= 1;
        sum = sum.div_floor(&BigInt::from(big_n));
    }
    let half = BigInt::one() << (BITS - 1);
    let rounded = (&sum + &half) >> BITS;
    let diff = (&sum - (&rounded << BITS)).abs();
    let deviation = diff.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(BITS as i32);
    VerlindeValue { rounded, deviation }
}

fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> BITS
}

fn div(a: &BigInt, b: &BigInt) -> BigInt {
    (a << BITS).div_floor(b)
}

/// `atan(1/x)` scaled by `2^BITS`.
fn atan_inv(x: u64) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << (BITS + 16)) / &x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum >> 16
}

/// Machin: `π = 16 atan(1/5) − 4 atan(1/239)`.
fn pi_fixed() -> BigInt {
    BigInt::from(16) * atan_inv(5) - BigInt::from(4) * atan_inv(239)
}

/// `sin(π m / n)` scaled by `2^BITS`, reduced exactly to an angle in `[0, π/2]`.
fn sin_pi_fraction(m: u64, n: u64, pi: &BigInt) -> BigInt {
    let mut m = m % (2 * n);
    let mut sign = 1;
    if m > n {
        m -= n;
        sign = -1;
    }
    if 2 * m > n {
        m = n - m;
    }
    let x = (pi * BigInt::from(m)) / BigInt::from(n);
    let x2 = mul(&x, &x);
    let mut term = x.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    while !term.is_zero() {
        sum += &term;
        term = -mul(&term, &x2) / BigInt::from((2 * k) * (2 * k + 1));
        k += 1;
    }
    sum * sign
}
