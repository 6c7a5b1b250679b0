use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::chain::brackets_within;
use super::grading::bigrading;
use super::{centralizer, WhittakerPair, WhittakerTriple};
use crate::error::{Error, Result};
use crate::exactq::{rational_eigenvalues, QMatrix, Rational, SkewForm, Subspace};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelData {
    pub u: Subspace,
    pub n_rad: Subspace,
    pub n_prime: Subspace,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiModelData {
    pub u: Subspace,
    pub v: Subspace,
    pub z: Subspace,
    pub k: Subspace,
    pub checks: BTreeMap<String, bool>,
}

fn s_weight_space(s: &QMatrix, pred: impl Fn(&Rational) -> bool) -> Result<Subspace> {
    let n = s.rows();
    Ok(bigrading(s, &QMatrix::zeros(n, n))?.sum_where(|a, _| pred(a)))
}

/// {X in W : tr(m X) = 0}.
fn kernel_of_trace(m: &QMatrix, w: &Subspace) -> Result<Subspace> {
    let n = m.rows();
    let hyper = Subspace::span(n * n, [m.transpose().flat()])?.annihilator();
    w.intersect(&hyper)
}

pub fn model_data(pair: &WhittakerPair) -> Result<ModelData> {
    let one = Rational::one();
    let u = s_weight_space(&pair.s, |x| *x >= one)?;
    let n_rad = SkewForm::new(&pair.f)?.radical(&u);
    let n_prime = kernel_of_trace(&pair.f, &n_rad)?;
    Ok(ModelData { u, n_rad, n_prime })
}

fn shape(clause: &str, ok: bool, detail: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::ShapeViolation { clause: clause.into(), detail: detail.into() })
    }
}

pub fn quasi_model_data(triple: &WhittakerTriple) -> Result<QuasiModelData> {
    let pair = &triple.pair;
    let one = Rational::one();
    let u = s_weight_space(&pair.s, |x| *x >= one)?;
    let v = s_weight_space(&pair.s, |x| *x > one)?;
    let w = s_weight_space(&pair.s, |x| *x == one)?;
    let z = v.sum(&w.intersect(&centralizer(&pair.f))?)?;
    let total = &pair.f + &triple.f_prime;
    let k = kernel_of_trace(&total, &z)?;

    shape("u_bracket_in_z", brackets_within(&u, &u, &z), "[u, u] is not inside z")?;
    shape("u_z_bracket_in_k", brackets_within(&u, &z, &k), "[u, z] is not inside k")?;
    let rad = SkewForm::new(&total)?.radical(&u);
    shape("nondegenerate_on_quotient", rad == z, "form of f + f' on u has radical different from z")?;
    let uu = u.basis_matrices();
    let vanishes = uu.iter().all(|x| uu.iter().all(|y| triple.f_prime.trace_product(&x.bracket(y)).is_zero()));
    shape("f_prime_vanishes_on_u_bracket", vanishes, "f' is nonzero on [u, u]")?;

    // rescaling S by its first ad-eigenvalue above 1 leaves v unchanged
    let n = pair.n;
    let eig = rational_eigenvalues(&pair.s)?;
    let first = eig
        .iter()
        .flat_map(|a| eig.iter().map(move |b| &a.value - &b.value))
        .filter(|d| *d > one)
        .min();
    if let Some(a) = first {
        let rescaled = s_weight_space(&pair.s.scale(&a.recip()), |x| *x >= one)?;
        shape("rescaled_v", rescaled == v, "g^{S/a}_{>=1} differs from v")?;
    } else {
        shape("rescaled_v", v == Subspace::zero(n * n), "v is nonzero without eigenvalues above 1")?;
    }

    let checks = [
        "u_bracket_in_z",
        "u_z_bracket_in_k",
        "nondegenerate_on_quotient",
        "f_prime_vanishes_on_u_bracket",
        "rescaled_v",
    ]
    .into_iter()
    .map(|c| (c.to_string(), true))
    .collect();
    Ok(QuasiModelData { u, v, z, k, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize, j: usize) -> QMatrix {
        QMatrix::unit(n, i - 1, j - 1)
    }

    #[test]
    fn principal_model() {
        let s = QMatrix::diag_i64(&[3, 1, -1, -3]);
        let f = &(&e(4, 2, 1) + &e(4, 4, 3)) + &e(4, 3, 2);
        let md = model_data(&WhittakerPair::new(s, f).unwrap()).unwrap();
        assert_eq!(md.u.dim(), 6);
        assert_eq!(md.n_rad, md.u);
        assert_eq!(md.n_prime.dim(), 5);
    }

    #[test]
    fn zero_functional() {
        let s = QMatrix::diag_i64(&[2, 0, -2]);
        let md = model_data(&WhittakerPair::new(s, QMatrix::zeros(3, 3)).unwrap()).unwrap();
        assert_eq!((md.n_rad.clone(), md.n_prime.clone()), (md.u.clone(), md.u));
    }

    #[test]
    fn glsame_endpoint() {
        let s = QMatrix::diag_i64(&[3, 1, -1, -3]);
        let f = &e(4, 2, 1) + &e(4, 4, 3);
        let md = model_data(&WhittakerPair::new(s, f).unwrap()).unwrap();
        assert_eq!((md.u.dim(), md.n_rad.dim(), md.n_prime.dim()), (6, 6, 5));
    }

    #[test]
    fn quasi_gl4() {
        let s = QMatrix::diag_i64(&[1, -1, 4, 2]);
        let f = &e(4, 2, 1) + &e(4, 4, 3);
        let pair = WhittakerPair::new(s, f.clone()).unwrap();
        let qm = quasi_model_data(&WhittakerTriple::new(pair.clone(), e(4, 1, 4)).unwrap()).unwrap();
        assert!(qm.checks.values().all(|b| *b));
        let plain = quasi_model_data(&WhittakerTriple::new(pair.clone(), QMatrix::zeros(4, 4)).unwrap()).unwrap();
        assert_eq!(plain.k, kernel_of_trace(&f, &plain.z).unwrap());
        let md = model_data(&pair).unwrap();
        assert_eq!((plain.u, plain.z), (md.u, md.n_rad));
    }
}
