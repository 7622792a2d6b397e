//! Exact Gaussian elimination over the rationals.

use num_traits::Zero;
use thiserror::Error;

use super::rational::Rational;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("system has {rows} rows and {cols} unknowns; need rows >= cols")]
    Underdetermined { rows: usize, cols: usize },
    #[error("rank {rank} < {cols} unknowns")]
    RankDeficient { rank: usize, cols: usize },
    #[error("inconsistent equation at row {row}")]
    Inconsistent { row: usize },
    #[error("ragged matrix")]
    Shape,
}

/// Solves `A x = b` exactly for a full-column-rank `A` with `rows >= cols`.
///
/// Every row must be satisfied exactly; surplus rows act as consistency
/// checks. The reported row of an inconsistency indexes the original system.
pub fn solve_exact(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>, SolveError> {
    let rows = a.len();
    if b.len() != rows {
        return Err(SolveError::Shape);
    }
    let cols = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != cols) {
        return Err(SolveError::Shape);
    }
    if rows < cols {
        return Err(SolveError::Underdetermined { rows, cols });
    }
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut origin: Vec<usize> = (0..rows).collect();
    let mut rank = 0;
    let mut pivots = Vec::with_capacity(cols);
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        origin.swap(rank, p);
        let inv = m[rank][c].recip();
        for x in m[rank][c..].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    if let Some(r) = (rank..rows).find(|&r| !m[r][cols].is_zero()) {
        return Err(SolveError::Inconsistent { row: origin[r] });
    }
    if rank < cols {
        return Err(SolveError::RankDeficient { rank, cols });
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Ok(x)
}

/// Rank of a rational matrix.
pub fn rank(a: &[Vec<Rational>]) -> usize {
    let mut m = a.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot_row[c];
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn identity() {
        let v = vec![rat(1, 2), int(-3), int(7)];
        assert_eq!(solve_exact(&m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), &v).unwrap(), v);
    }

    #[test]
    fn inconsistent_column() {
        let r = solve_exact(&m(&[&[1], &[1]]), &[int(2), int(3)]);
        assert_eq!(r, Err(SolveError::Inconsistent { row: 1 }));
    }

    #[test]
    fn overdetermined_consistent_has_zero_residual() {
        let a = m(&[&[1, 2], &[3, 4], &[5, 6], &[7, 9]]);
        let x = vec![rat(2, 3), rat(-5, 7)];
        let b: Vec<Rational> =
            a.iter().map(|r| r.iter().zip(&x).map(|(p, q)| p * q).sum()).collect();
        let got = solve_exact(&a, &b).unwrap();
        assert_eq!(got, x);
        for (row, bi) in a.iter().zip(&b) {
            let lhs: Rational = row.iter().zip(&got).map(|(p, q)| p * q).sum();
            assert_eq!(&lhs, bi);
        }
    }

    #[test]
    fn rank_problems() {
        assert_eq!(
            solve_exact(&m(&[&[1, 2], &[2, 4], &[3, 6]]), &[int(1), int(2), int(3)]),
            Err(SolveError::RankDeficient { rank: 1, cols: 2 })
        );
        assert_eq!(
            solve_exact(&m(&[&[1, 2]]), &[int(1)]),
            Err(SolveError::Underdetermined { rows: 1, cols: 2 })
        );
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
    }
}
