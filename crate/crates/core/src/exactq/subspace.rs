use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::matrix::QMatrix;
use super::rational::{fmt_q, Rational};
use super::rref::{kernel_from_rref, rref_in_place};
use crate::error::{Error, Result};

/// Subspace of Q^ambient held as a reduced row echelon basis, so equality is syntactic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

#[derive(Debug, Clone)]
pub enum SubspaceOp<'a> {
    Intersect,
    Sum,
    Contains,
    Equals,
    Member(&'a [Rational]),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SubspaceResult {
    Space(Subspace),
    Bool(bool),
}

/// Single entry point over the binary subspace operations.
pub fn subspace_algebra(u: &Subspace, v: &Subspace, op: SubspaceOp<'_>) -> Result<SubspaceResult> {
    Ok(match op {
        SubspaceOp::Intersect => SubspaceResult::Space(u.intersect(v)?),
        SubspaceOp::Sum => SubspaceResult::Space(u.sum(v)?),
        SubspaceOp::Contains => SubspaceResult::Bool(u.contains(v)?),
        SubspaceOp::Equals => {
            u.check_ambient(v)?;
            SubspaceResult::Bool(u == v)
        }
        SubspaceOp::Member(x) => SubspaceResult::Bool(u.contains_vector(x)?),
    })
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![Rational::zero(); ambient];
                v[i] = num_traits::One::one();
                v
            })
            .collect();
        Subspace { ambient, basis, pivots: (0..ambient).collect() }
    }

    pub fn span<I>(ambient: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<Rational>>,
    {
        let mut rows: Vec<Vec<Rational>> = vectors.into_iter().collect();
        if let Some(v) = rows.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!("vector of length {} in Q^{ambient}", v.len())));
        }
        let pivots = rref_in_place(&mut rows, ambient);
        Ok(Subspace { ambient, basis: rows, pivots })
    }

    /// Span of matrices, flattened row-major.
    pub fn span_matrices<'a, I>(ambient: usize, mats: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a QMatrix>,
    {
        Self::span(ambient, mats.into_iter().map(QMatrix::flat))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors read back as square matrices.
    pub fn basis_matrices(&self) -> Vec<QMatrix> {
        self.basis.iter().map(|v| QMatrix::from_flat(v).expect("square ambient")).collect()
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of Q^{} and Q^{}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    /// Remainder of `v` after elimination against the echelon basis.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let c = r[p].clone();
            for (x, b) in r.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x -= &c * b;
                }
            }
        }
        r
    }

    pub fn contains_vector(&self, v: &[Rational]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch(format!("vector of length {} in Q^{}", v.len(), self.ambient)));
        }
        Ok(self.reduce(v).iter().all(Zero::is_zero))
    }

    pub fn contains_matrix(&self, m: &QMatrix) -> bool {
        m.entries().len() == self.ambient && self.reduce(m.entries()).iter().all(Zero::is_zero)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Subspace::span(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn sum_all<'a, I>(ambient: usize, spaces: I) -> Result<Subspace>
    where
        I: IntoIterator<Item = &'a Subspace>,
    {
        let mut rows = Vec::new();
        for s in spaces {
            if s.ambient != ambient {
                return Err(Error::DimensionMismatch("sum of subspaces in different ambients".into()));
            }
            rows.extend(s.basis.iter().cloned());
        }
        Subspace::span(ambient, rows)
    }

    /// Standard annihilator {y : y·x = 0 for all x in self}.
    pub fn annihilator(&self) -> Subspace {
        let kernel = kernel_from_rref(&self.basis, &self.pivots, self.ambient);
        Subspace::span(self.ambient, kernel).expect("same ambient")
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        let ann = other.annihilator();
        // coefficients c with sum c_a u_a annihilated by every row of ann
        let m: Vec<Vec<Rational>> = ann
            .basis
            .iter()
            .map(|y| self.basis.iter().map(|u| dot(y, u)).collect())
            .collect();
        let k = self.basis.len();
        let mut rows = m;
        let pivots = rref_in_place(&mut rows, k);
        let coeffs = kernel_from_rref(&rows, &pivots, k);
        Subspace::span(self.ambient, coeffs.iter().map(|c| self.combine(c)))
    }

    /// Linear combination of the basis with the given coefficients.
    pub fn combine(&self, c: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.ambient];
        for (ci, b) in c.iter().zip(&self.basis) {
            if ci.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(b) {
                if !x.is_zero() {
                    *o += ci * x;
                }
            }
        }
        out
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(other.basis.iter().all(|v| self.reduce(v).iter().all(Zero::is_zero)))
    }

    /// True when self and other meet trivially.
    pub fn independent_of(&self, other: &Subspace) -> Result<bool> {
        Ok(self.sum(other)?.dim() == self.dim() + other.dim())
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = (self.ambient as f64).sqrt().round() as usize;
        let as_mats = n * n == self.ambient;
        write!(f, "span{{")?;
        for (i, v) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if as_mats {
                write!(f, "{}", QMatrix::from_flat(v).expect("square"))?;
            } else {
                let s: Vec<String> = v.iter().map(fmt_q).collect();
                write!(f, "({})", s.join(","))?;
            }
        }
        write!(f, "}}")
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.basis.iter().map(|v| v.iter().map(fmt_q).collect()).collect();
        rows.serialize(s)
    }
}
