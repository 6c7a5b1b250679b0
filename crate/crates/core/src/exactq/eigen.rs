use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::QMatrix;
use super::rational::Rational;
use super::subspace::Subspace;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub value: Rational,
    pub space: Subspace,
}

/// Characteristic polynomial det(xI - M), coefficients from the constant term up.
pub fn charpoly(m: &QMatrix) -> Result<Vec<Rational>> {
    let n = m.require_square()?;
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut mk = QMatrix::zeros(n, n);
    for k in 1..=n {
        mk = &(m * &mk) + &QMatrix::scalar(n, &c[n - k + 1]);
        let am = m * &mk;
        c[n - k] = -am.trace() / Rational::from_integer(BigInt::from(k));
    }
    Ok(c)
}

fn eval(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn deflate(coeffs: &[Rational], root: &Rational) -> Vec<Rational> {
    // synthetic division by (x - root)
    let n = coeffs.len() - 1;
    let mut out = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for i in (1..=n).rev() {
        carry = &coeffs[i] + carry * root;
        out[i - 1] = carry.clone();
    }
    out
}

fn divisors(x: &BigInt) -> Vec<BigInt> {
    let mut m = x.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0;
        while m.is_multiple_of(&p) {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            factors.push((p.clone(), e));
        }
        p += 1;
    }
    if m > BigInt::one() {
        factors.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs
}

/// Distinct rational roots with multiplicities, found by rational-root enumeration.
pub fn rational_roots(coeffs: &[Rational]) -> Vec<(Rational, usize)> {
    let mut poly: Vec<Rational> = coeffs.to_vec();
    while poly.len() > 1 && poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
    let mut roots: BTreeMap<Rational, usize> = BTreeMap::new();
    let zero = Rational::zero();
    while poly.len() > 1 && poly[0].is_zero() {
        poly.remove(0);
        *roots.entry(zero.clone()).or_default() += 1;
    }
    if poly.len() > 1 {
        let lcm = poly.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = poly.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let lead = divisors(ints.last().expect("nonconstant"));
        let constant = divisors(&ints[0]);
        let mut candidates: Vec<Rational> = Vec::new();
        for p in &constant {
            for q in &lead {
                let r = Rational::new(p.clone(), q.clone());
                candidates.push(r.clone());
                candidates.push(-r);
            }
        }
        candidates.sort();
        candidates.dedup();
        for r in candidates {
            while poly.len() > 1 && eval(&poly, &r).is_zero() {
                poly = deflate(&poly, &r);
                *roots.entry(r.clone()).or_default() += 1;
            }
        }
    }
    roots.into_iter().rev().collect()
}

/// Eigenvalues (descending) with eigenspaces; fails unless M is diagonalizable over Q.
pub fn rational_eigenvalues(m: &QMatrix) -> Result<Vec<Eigen>> {
    let n = m.require_square()?;
    let values: Vec<Rational> = if m.is_diagonal() {
        let mut d = m.diagonal();
        d.sort();
        d.dedup();
        d.reverse();
        d
    } else {
        rational_roots(&charpoly(m)?).into_iter().map(|(r, _)| r).collect()
    };
    let mut out = Vec::with_capacity(values.len());
    let mut total = 0;
    for value in values {
        let shifted = m - &QMatrix::scalar(n, &value);
        let space = Subspace::span(n, shifted.kernel())?;
        total += space.dim();
        out.push(Eigen { value, space });
    }
    if total != n {
        return Err(Error::NotRationalSplit);
    }
    Ok(out)
}

/// A common eigenbasis of commuting rational semisimple matrices.
#[derive(Debug, Clone)]
pub struct EigenFrame {
    /// Columns are joint eigenvectors.
    pub p: QMatrix,
    pub p_inv: QMatrix,
    /// values[k][i]: eigenvalue of the k-th input matrix on column i.
    pub values: Vec<Vec<Rational>>,
}

pub fn eigenframe(mats: &[&QMatrix]) -> Result<EigenFrame> {
    let n = match mats.first() {
        Some(m) => m.require_square()?,
        None => return Err(Error::PreconditionViolation("no matrices".into())),
    };
    let mut cells: Vec<(Vec<Rational>, Subspace)> = vec![(Vec::new(), Subspace::full(n))];
    for m in mats {
        if m.require_square()? != n {
            return Err(Error::DimensionMismatch("matrices of different sizes".into()));
        }
        let eig = rational_eigenvalues(m)
            .map_err(|_| Error::NotRationalSemisimple(format!("{m} has no rational eigenbasis")))?;
        let mut next = Vec::new();
        for (vals, space) in &cells {
            for e in &eig {
                let meet = space.intersect(&e.space)?;
                if !meet.is_zero() {
                    let mut v = vals.clone();
                    v.push(e.value.clone());
                    next.push((v, meet));
                }
            }
        }
        cells = next;
    }
    let total: usize = cells.iter().map(|(_, s)| s.dim()).sum();
    if total != n {
        return Err(Error::NotCommuting("no common eigenbasis".into()));
    }
    let mut columns = Vec::with_capacity(n);
    let mut values = vec![Vec::with_capacity(n); mats.len()];
    for (vals, space) in &cells {
        for b in space.basis() {
            columns.push(b.clone());
            for (k, v) in vals.iter().enumerate() {
                values[k].push(v.clone());
            }
        }
    }
    let p = QMatrix::from_columns(&columns)?;
    let p_inv = p.inverse()?;
    Ok(EigenFrame { p, p_inv, values })
}

impl EigenFrame {
    pub fn size(&self) -> usize {
        self.p.rows()
    }

    /// p_i q_j^T where p_i is the i-th column of P and q_j the j-th row of P^{-1}.
    pub fn unit(&self, i: usize, j: usize) -> QMatrix {
        let n = self.size();
        let mut out = QMatrix::zeros(n, n);
        for a in 0..n {
            let pa = &self.p[(a, i)];
            if pa.is_zero() {
                continue;
            }
            for b in 0..n {
                let qb = &self.p_inv[(j, b)];
                if !qb.is_zero() {
                    out[(a, b)] = pa * qb;
                }
            }
        }
        out
    }

    /// Coordinates of M in the basis {p_i q_j^T}: P^{-1} M P.
    pub fn coords(&self, m: &QMatrix) -> QMatrix {
        &(&self.p_inv * m) * &self.p
    }

    /// Adjoint weight of the (i, j) unit for the k-th matrix.
    pub fn weight(&self, k: usize, i: usize, j: usize) -> Rational {
        &self.values[k][i] - &self.values[k][j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::rational::{q, qf};

    #[test]
    fn diagonal_eigenvalues() {
        let e = rational_eigenvalues(&QMatrix::diag_i64(&[3, 1, -1, -3])).unwrap();
        let vals: Vec<_> = e.iter().map(|x| x.value.clone()).collect();
        assert_eq!(vals, vec![q(3), q(1), q(-1), q(-3)]);
        assert!(e.iter().all(|x| x.space.dim() == 1));
    }

    #[test]
    fn jordan_block_rejected() {
        let j = QMatrix::unit(2, 1, 0);
        assert_eq!(rational_eigenvalues(&j), Err(Error::NotRationalSplit));
    }

    #[test]
    fn zero_matrix() {
        let e = rational_eigenvalues(&QMatrix::zeros(2, 2)).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].value, q(0));
        assert_eq!(e[0].space.dim(), 2);
    }

    #[test]
    fn non_split_rejected() {
        let rot = QMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        assert_eq!(rational_eigenvalues(&rot), Err(Error::NotRationalSplit));
        let sqrt2 = QMatrix::from_i64(&[&[0, 2], &[1, 0]]);
        assert_eq!(rational_eigenvalues(&sqrt2), Err(Error::NotRationalSplit));
    }

    #[test]
    fn conjugated_rational_spectrum() {
        let g = QMatrix::from_i64(&[&[1, 2, 0], &[0, 1, 3], &[1, 0, 1]]);
        let d = QMatrix::diag(&[qf(1, 2), qf(-7, 3), qf(1, 2)]);
        let m = d.conjugate(&g).unwrap();
        let e = rational_eigenvalues(&m).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].value, qf(1, 2));
        assert_eq!(e[0].space.dim(), 2);
        assert_eq!(e[1].value, qf(-7, 3));
    }

    #[test]
    fn charpoly_of_companion() {
        // x^2 - 3x + 2
        let m = QMatrix::from_i64(&[&[0, -2], &[1, 3]]);
        assert_eq!(charpoly(&m).unwrap(), vec![q(2), q(-3), q(1)]);
        assert_eq!(rational_roots(&charpoly(&m).unwrap()), vec![(q(2), 1), (q(1), 1)]);
    }

    #[test]
    fn joint_frame() {
        let h = QMatrix::diag_i64(&[1, -1, 1, -1]);
        let z = QMatrix::diag_i64(&[2, 2, -2, -2]);
        let fr = eigenframe(&[&h, &z]).unwrap();
        for i in 0..4 {
            let col = fr.p.column(i);
            assert_eq!(h.mul_vec(&col), col.iter().map(|x| x * &fr.values[0][i]).collect::<Vec<_>>());
            assert_eq!(z.mul_vec(&col), col.iter().map(|x| x * &fr.values[1][i]).collect::<Vec<_>>());
        }
        let bad = QMatrix::from_i64(&[&[1, 1, 0, 0], &[0, 2, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(matches!(eigenframe(&[&h, &bad]), Err(Error::NotCommuting(_))));
    }
}
