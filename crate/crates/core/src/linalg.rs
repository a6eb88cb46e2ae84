//! Exact linear algebra over the rationals.
//!
//! Rank is computed by fraction-free (Bareiss) elimination after clearing
//! denominators row by row; solving and null spaces use rational
//! Gauss-Jordan reduction. Nothing here uses tolerances.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Scales a rational row by the lcm of its denominators.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
}

/// Rank of the matrix whose rows are given.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    let ncols = a[0].len();
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pivot) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pivot);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                // Bareiss: the division is exact
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(a: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in c..a[i].len() {
                    let delta = &factor * &a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `rows · x = rhs` when the solution exists and is unique.
///
/// Extra (dependent but consistent) rows are allowed. Returns `None` for an
/// inconsistent or underdetermined system.
pub fn solve_unique(rows: &[Vec<Rational>], rhs: &[Rational], ncols: usize) -> Option<Vec<Rational>> {
    assert_eq!(rows.len(), rhs.len());
    let mut aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) || pivots.len() != ncols {
        return None;
    }
    Some((0..ncols).map(|i| aug[i][ncols].clone()).collect())
}

/// A basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let pivots = rref(&mut a, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); ncols];
            x[f] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                x[p] = -a[row][f].clone();
            }
            x
        })
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Rescales a nonzero direction by a positive factor so that its first
/// nonzero entry has absolute value one.
pub fn normalize_direction(d: &[Rational]) -> Vec<Rational> {
    match d.iter().find(|q| !q.is_zero()) {
        None => d.to_vec(),
        Some(lead) => {
            let scale = lead.abs().recip();
            d.iter().map(|q| q * &scale).collect()
        }
    }
}
