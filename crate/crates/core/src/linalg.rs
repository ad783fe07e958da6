//! Exact rank over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::Rational;

/// Rank of a rational matrix: rows are scaled to integers, then reduced by
/// fraction-free (Bareiss) elimination, which keeps every entry a minor of the
/// input instead of letting fractions grow.
pub fn rank(rows: Vec<Vec<Rational>>) -> usize {
    let rows = rows
        .into_iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            row.into_iter().map(|x| (x * &lcm).to_integer()).collect()
        })
        .collect();
    integer_rank(rows)
}

pub fn integer_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                // exact by Sylvester's identity
                row[j] = (pivot * &row[j] - &lead * &pivot_row[j]) / &prev;
            }
        }
        prev = pivot.clone();
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Dimension of the affine hull of integer points; `None` for no points.
pub fn affine_dimension(points: &[Vec<i64>]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let rows = rest
        .iter()
        .map(|p| {
            p.iter()
                .zip(first)
                .map(|(a, b)| Rational::from_integer((a - b).into()))
                .collect()
        })
        .collect();
    Some(rank(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_rows(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(vec![]), 0);
        assert_eq!(rank(int_rows(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(int_rows(&[&[0, 1, 0], &[1, 0, 0], &[1, 1, 0]])), 2);
        assert_eq!(rank(int_rows(&[&[2, 0, 1], &[0, 3, 1], &[1, 1, 5]])), 3);
    }

    /// Plain rational elimination as an oracle for the fraction-free version.
    fn naive_rank(mut rows: Vec<Vec<Rational>>) -> usize {
        let cols = rows.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            for i in r + 1..rows.len() {
                let f = &rows[i][c] / &rows[r][c];
                for j in c..cols {
                    let d = &f * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
            r += 1;
        }
        r
    }

    proptest::proptest! {
        #[test]
        fn bareiss_matches_naive(entries in proptest::collection::vec((-3i64..=3, 1i64..=3), 30), rows in 1usize..=6) {
            let cols = 30 / rows;
            let m: Vec<Vec<Rational>> = (0..rows)
                .map(|i| (0..cols).map(|j| {
                    let (n, d) = entries[i * cols + j];
                    Rational::new(n.into(), d.into())
                }).collect())
                .collect();
            proptest::prop_assert_eq!(rank(m.clone()), naive_rank(m.clone()));
            // a combination of existing rows never raises the rank
            let mut extended = m.clone();
            let combo: Vec<Rational> = m[0].iter().zip(&m[m.len() - 1]).map(|(a, b)| a * Rational::from_integer(3.into()) - b).collect();
            extended.push(combo);
            proptest::prop_assert_eq!(rank(extended), rank(m));
        }
    }

    #[test]
    fn affine_hull() {
        assert_eq!(affine_dimension(&[]), None);
        assert_eq!(affine_dimension(&[vec![1, 1]]), Some(0));
        assert_eq!(affine_dimension(&[vec![0, 0], vec![1, 1], vec![2, 2]]), Some(1));
        assert_eq!(affine_dimension(&[vec![0, 0], vec![1, 0], vec![0, 1]]), Some(2));
    }
}
