use super::matrix::QMatrix;
use super::rational::Rational;
use super::rref::{kernel_from_rref, rref_in_place};
use super::subspace::{dot, Subspace};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkewTask {
    Gram,
    Radical,
    Lagrangian,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SkewOutput {
    Gram(QMatrix),
    Space(Subspace),
}

pub fn skew_tools(f: &QMatrix, w: &Subspace, task: SkewTask) -> Result<SkewOutput> {
    let form = SkewForm::new(f)?;
    form.check(w)?;
    Ok(match task {
        SkewTask::Gram => SkewOutput::Gram(form.gram(w)),
        SkewTask::Radical => SkewOutput::Space(form.radical(w)),
        SkewTask::Lagrangian => SkewOutput::Space(form.lagrangian(w)?),
    })
}

/// The form (X, Y) -> tr(f [X, Y]) on gl_n, in flattened coordinates.
#[derive(Debug, Clone)]
pub struct SkewForm {
    f: QMatrix,
    n: usize,
}

impl SkewForm {
    pub fn new(f: &QMatrix) -> Result<Self> {
        let n = f.require_square()?;
        Ok(SkewForm { f: f.clone(), n })
    }

    fn check(&self, w: &Subspace) -> Result<()> {
        if w.ambient_dim() != self.n * self.n {
            return Err(Error::DimensionMismatch(format!(
                "subspace of Q^{} for gl_{}",
                w.ambient_dim(),
                self.n
            )));
        }
        Ok(())
    }

    /// Linear functional X -> omega(X, y), as a coordinate vector.
    fn functional(&self, y: &[Rational]) -> Vec<Rational> {
        // omega(X, Y) = tr([Y, f] X) = sum_ij [Y, f]_ji X_ij
        let ym = QMatrix::from_flat(y).expect("square");
        ym.bracket(&self.f).transpose().flat()
    }

    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Rational {
        dot(&self.functional(y), x)
    }

    pub fn gram(&self, w: &Subspace) -> QMatrix {
        let funcs: Vec<Vec<Rational>> = w.basis().iter().map(|y| self.functional(y)).collect();
        let rows = w.basis().iter().map(|x| funcs.iter().map(|fy| dot(fy, x)).collect()).collect();
        if w.is_zero() {
            return QMatrix::zeros(0, 0);
        }
        QMatrix::from_rows(rows).expect("square gram")
    }

    /// {x in W : omega(x, v) = 0 for all v in V}.
    pub fn orthogonal_in(&self, w: &Subspace, v: &Subspace) -> Subspace {
        if v.is_zero() {
            return w.clone();
        }
        let k = w.dim();
        let mut rows: Vec<Vec<Rational>> = v
            .basis()
            .iter()
            .map(|y| {
                let fy = self.functional(y);
                w.basis().iter().map(|x| dot(&fy, x)).collect()
            })
            .collect();
        let pivots = rref_in_place(&mut rows, k);
        let coeffs = kernel_from_rref(&rows, &pivots, k);
        Subspace::span(w.ambient_dim(), coeffs.iter().map(|c| w.combine(c))).expect("same ambient")
    }

    pub fn radical(&self, w: &Subspace) -> Subspace {
        self.orthogonal_in(w, w)
    }

    pub fn is_isotropic(&self, l: &Subspace) -> bool {
        self.radical(l).dim() == l.dim()
    }

    /// Maximal isotropic subspace of W containing its radical. Starting from the
    /// radical, repeatedly adjoins the first echelon vector of L^perp (inside W)
    /// not already in L.
    pub fn lagrangian(&self, w: &Subspace) -> Result<Subspace> {
        let rad = self.radical(w);
        let mut l = rad.clone();
        loop {
            let perp = self.orthogonal_in(w, &l);
            if perp.dim() == l.dim() {
                break;
            }
            let next = perp
                .basis()
                .iter()
                .find(|v| !l.contains_vector(v).unwrap_or(true))
                .cloned()
                .ok_or_else(|| Error::InternalCheckFailure("isotropic extension stalled".into()))?;
            l = Subspace::span(w.ambient_dim(), l.basis().iter().cloned().chain(std::iter::once(next)))?;
        }
        if 2 * l.dim() != w.dim() + rad.dim() || !self.is_isotropic(&l) {
            return Err(Error::InternalCheckFailure(format!(
                "lagrangian of dim {} in W of dim {} with radical of dim {}",
                l.dim(),
                w.dim(),
                rad.dim()
            )));
        }
        Ok(l)
    }
}
