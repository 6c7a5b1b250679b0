use num_traits::{One, Zero};

use super::matrix::QMatrix;
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Particular(Vec<Rational>),
    NoSolution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rref {
    pub echelon: QMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
    /// Present only when a right-hand side was supplied.
    pub solution: Option<Solution>,
    pub kernel: Vec<Vec<Rational>>,
}

/// Reduces `rows` (each of length `ncols`) to reduced row echelon form in place,
/// dropping zero rows. Returns the pivot columns.
pub fn rref_in_place(rows: &mut Vec<Vec<Rational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        if !inv.is_one() {
            for x in rows[r][col..].iter_mut() {
                *x *= &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (c, pv) in pivot_row.iter().enumerate().skip(col) {
                if !pv.is_zero() {
                    row[c] -= &factor * pv;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Null space basis of an RREF system given its pivots: one vector per free column.
pub fn kernel_from_rref(rows: &[Vec<Rational>], pivots: &[usize], ncols: usize) -> Vec<Vec<Rational>> {
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (row, &p) in rows.iter().zip(pivots) {
                if !row[free].is_zero() {
                    v[p] = -row[free].clone();
                }
            }
            v
        })
        .collect()
}

/// Exact reduced row echelon form of `a`, its null space, and optionally a
/// particular solution of a·x = b with free variables set to zero.
pub fn rref_solve(a: &QMatrix, b: Option<&[Rational]>) -> Result<Rref> {
    let (m, n) = (a.rows(), a.cols());
    if let Some(b) = b {
        if b.len() != m {
            return Err(Error::DimensionMismatch(format!("rhs of length {} for {m} rows", b.len())));
        }
    }
    let mut rows: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            if let Some(b) = b {
                r.push(b[i].clone());
            }
            r
        })
        .collect();
    let width = if b.is_some() { n + 1 } else { n };
    let all_pivots = rref_in_place(&mut rows, width);
    let solution = b.map(|_| {
        if all_pivots.last() == Some(&n) {
            Solution::NoSolution
        } else {
            let mut x = vec![Rational::zero(); n];
            for (row, &p) in rows.iter().zip(&all_pivots) {
                x[p] = row[n].clone();
            }
            Solution::Particular(x)
        }
    });
    let pivots: Vec<usize> = all_pivots.into_iter().filter(|&p| p < n).collect();
    let mut coeff_rows: Vec<Vec<Rational>> =
        rows.into_iter().take(pivots.len()).map(|mut r| {
            r.truncate(n);
            r
        }).collect();
    coeff_rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let kernel = kernel_from_rref(&coeff_rows, &pivots, n);
    let echelon = if coeff_rows.is_empty() {
        QMatrix::zeros(0, n)
    } else {
        QMatrix::from_rows(coeff_rows)?
    };
    Ok(Rref { rank: pivots.len(), echelon, pivots, solution, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::rational::q;

    #[test]
    fn identity_solve() {
        let r = rref_solve(&QMatrix::identity(3), Some(&[q(1), q(2), q(3)])).unwrap();
        assert_eq!(r.rank, 3);
        assert_eq!(r.solution, Some(Solution::Particular(vec![q(1), q(2), q(3)])));
        assert!(r.kernel.is_empty());
    }

    #[test]
    fn rank_one_kernel() {
        let r = rref_solve(&QMatrix::from_i64(&[&[1, 2], &[2, 4]]), None).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.kernel, vec![vec![q(-2), q(1)]]);
        assert_eq!(r.solution, None);
        assert_eq!(r.echelon, QMatrix::from_i64(&[&[1, 2]]));
    }

    #[test]
    fn inconsistent() {
        let r = rref_solve(&QMatrix::from_i64(&[&[1, 0], &[0, 0]]), Some(&[q(0), q(1)])).unwrap();
        assert_eq!(r.solution, Some(Solution::NoSolution));
    }

    #[test]
    fn rhs_length_checked() {
        assert!(rref_solve(&QMatrix::identity(2), Some(&[q(1)])).is_err());
    }
}
