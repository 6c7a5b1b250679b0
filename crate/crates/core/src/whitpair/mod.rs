//! Whittaker pairs and triples, neutral elements, bi-gradings and the
//! deformation chain S_t = h + tZ with its isotropic subalgebras.
//!
//! Functionals are carried as matrices through the trace form
//! phi(X) = tr(f X), so functional weights are ad-weights of f.

mod chain;
mod grading;
mod model;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactq::{eigenframe, rational_eigenvalues, QMatrix, Rational, Subspace};
use crate::orbits::{bracket_is, require_nilpotent};

pub use chain::{chain, snapshot, ChainCertificate, ChainContext, DeformationSnapshot, Obstruction, StepRecord};
pub use grading::{bigrading, critical_numbers, quasi_criticals, BiGrading, QuasiCriticals, WeightPair};
pub use model::{model_data, quasi_model_data, ModelData, QuasiModelData};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WhittakerPair {
    pub n: usize,
    #[serde(rename = "S")]
    pub s: QMatrix,
    pub f: QMatrix,
}

impl WhittakerPair {
    pub fn new(s: QMatrix, f: QMatrix) -> Result<Self> {
        let n = s.require_square()?;
        if f.require_square()? != n {
            return Err(Error::DimensionMismatch("S and f differ in size".into()));
        }
        rational_eigenvalues(&s).map_err(|_| Error::NotRationalSemisimple(format!("S = {s}")))?;
        if !bracket_is(&s, &f, -2) {
            return Err(Error::PreconditionViolation("f is not in the -2 eigenspace of ad(S)".into()));
        }
        require_nilpotent(&f)?;
        Ok(WhittakerPair { n, s, f })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WhittakerTriple {
    pub pair: WhittakerPair,
    pub f_prime: QMatrix,
}

impl WhittakerTriple {
    pub fn new(pair: WhittakerPair, f_prime: QMatrix) -> Result<Self> {
        if f_prime.require_square()? != pair.n {
            return Err(Error::DimensionMismatch("f' has the wrong size".into()));
        }
        let low = Rational::from_integer((-2).into());
        if let Some(w) = weight_components(&pair.s, &f_prime)?.keys().find(|w| **w <= low) {
            return Err(Error::PreconditionViolation(format!("f' has a component of S-weight {w} <= -2")));
        }
        Ok(WhittakerTriple { pair, f_prime })
    }
}

/// Matrix of ad(x) on gl_n in flattened coordinates.
pub fn ad_matrix(x: &QMatrix) -> QMatrix {
    let n = x.rows();
    let mut out = QMatrix::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            let col = a * n + b;
            // [x, E_ab] = sum_i x_ia E_ib - sum_j x_bj E_aj
            for i in 0..n {
                if !x[(i, a)].is_zero() {
                    out[(i * n + b, col)] += x[(i, a)].clone();
                }
            }
            for j in 0..n {
                if !x[(b, j)].is_zero() {
                    out[(a * n + j, col)] -= x[(b, j)].clone();
                }
            }
        }
    }
    out
}

pub fn ad_image(x: &QMatrix) -> Subspace {
    let n = x.rows();
    Subspace::span(n * n, ad_matrix(x).transpose().to_rows()).expect("flattened columns")
}

/// Matrix centralizer {X : [x, X] = 0}.
pub fn centralizer(x: &QMatrix) -> Subspace {
    let n = x.rows();
    Subspace::span(n * n, ad_matrix(x).kernel()).expect("kernel vectors")
}

/// Decomposes M into ad(S)-eigencomponents.
pub fn weight_components(s: &QMatrix, m: &QMatrix) -> Result<BTreeMap<Rational, QMatrix>> {
    let frame = eigenframe(&[s])?;
    if m.rows() != frame.size() || !m.is_square() {
        return Err(Error::DimensionMismatch("S and M differ in size".into()));
    }
    let c = frame.coords(m);
    let n = frame.size();
    let mut masked: BTreeMap<Rational, QMatrix> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if c[(i, j)].is_zero() {
                continue;
            }
            let w = frame.weight(0, i, j);
            masked.entry(w).or_insert_with(|| QMatrix::zeros(n, n))[(i, j)] = c[(i, j)].clone();
        }
    }
    Ok(masked.into_iter().map(|(w, cm)| (w, &(&frame.p * &cm) * &frame.p_inv)).collect())
}

/// Both characterizations of "h is a neutral element for f", evaluated separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NeutralReport {
    /// [h, f] = -2f
    pub bracket: bool,
    /// h lies in the image of ad(f)
    pub image_membership: bool,
    /// h is rational semisimple with integer spectrum splitting into sl2-strings
    pub nil_positive: bool,
    /// ad(f) maps the 0-eigenspace of ad(h) onto the -2-eigenspace
    pub surjective: bool,
}

impl NeutralReport {
    pub fn by_image(&self) -> bool {
        self.bracket && self.image_membership
    }

    pub fn by_surjectivity(&self) -> bool {
        self.bracket && self.nil_positive && self.surjective
    }

    pub fn agree(&self) -> bool {
        self.by_image() == self.by_surjectivity()
    }

    pub fn neutral(&self) -> bool {
        self.by_image() && self.by_surjectivity()
    }
}

fn string_spectrum(h: &QMatrix) -> bool {
    let Ok(eig) = rational_eigenvalues(h) else { return false };
    let mut mult: BTreeMap<i64, usize> = BTreeMap::new();
    for e in &eig {
        if !e.value.is_integer() {
            return false;
        }
        let Ok(v) = i64::try_from(e.value.to_integer()) else { return false };
        mult.insert(v, e.space.dim());
    }
    let m = |j: i64| mult.get(&j).copied().unwrap_or(0);
    let top = mult.keys().map(|k| k.abs()).max().unwrap_or(0);
    (0..=top).all(|j| m(j) == m(-j) && m(j) >= m(j + 2))
}

pub fn neutral_report(h: &QMatrix, f: &QMatrix) -> Result<NeutralReport> {
    let n = h.require_square()?;
    if f.require_square()? != n {
        return Err(Error::DimensionMismatch("h and f differ in size".into()));
    }
    let bracket = bracket_is(h, f, -2);
    let image_membership = ad_image(f).contains_matrix(h);
    let nil_positive = string_spectrum(h);
    let surjective = match eigenframe(&[h]) {
        Ok(frame) => {
            let zero = Rational::zero();
            let minus_two = Rational::from_integer((-2).into());
            let mut images = Vec::new();
            let mut target_dim = 0;
            for i in 0..n {
                for j in 0..n {
                    let w = frame.weight(0, i, j);
                    if w == zero {
                        images.push(f.bracket(&frame.unit(i, j)));
                    } else if w == minus_two {
                        target_dim += 1;
                    }
                }
            }
            Subspace::span_matrices(n * n, &images)?.dim() == target_dim
        }
        Err(_) => false,
    };
    Ok(NeutralReport { bracket, image_membership, nil_positive, surjective })
}

pub fn is_neutral_pair(h: &QMatrix, f: &QMatrix) -> bool {
    neutral_report(h, f).map(|r| r.neutral()).unwrap_or(false)
}

/// Particular solution h0 and homogeneous directions of the system
/// {h in Im ad f, [S, h] = 0, [h, f] = -2f}.
pub fn find_z_solutions(pair: &WhittakerPair) -> Result<(QMatrix, Vec<QMatrix>)> {
    let n = pair.n;
    let image = ad_image(&pair.f);
    let basis = image.basis_matrices();
    let mut cols = Vec::with_capacity(basis.len());
    for b in &basis {
        let mut col = pair.s.bracket(b).flat();
        col.extend(b.bracket(&pair.f).flat());
        cols.push(col);
    }
    let mut rhs = vec![Rational::zero(); n * n];
    rhs.extend(pair.f.scale(&Rational::from_integer((-2).into())).flat());
    let combine = |c: &[Rational]| {
        basis.iter().zip(c).fold(QMatrix::zeros(n, n), |acc, (b, ci)| &acc + &b.scale(ci))
    };
    if basis.is_empty() {
        // f = 0: the only candidate is h = 0
        return if pair.f.is_zero() {
            Ok((QMatrix::zeros(n, n), Vec::new()))
        } else {
            Err(Error::NoSolution("ad(f) has zero image".into()))
        };
    }
    let system = QMatrix::from_columns(&cols)?;
    let rref = crate::exactq::rref_solve(&system, Some(&rhs))?;
    let Some(crate::exactq::Solution::Particular(c)) = rref.solution else {
        return Err(Error::NoSolution("no neutral element commuting with S".into()));
    };
    let h0 = combine(&c);
    let dirs = rref.kernel.iter().map(|k| combine(k)).collect();
    Ok((h0, dirs))
}

/// Splits S = h + Z with h neutral for f and Z commuting with h and f.
pub fn find_z(pair: &WhittakerPair) -> Result<(QMatrix, QMatrix)> {
    let (h, _) = find_z_solutions(pair)?;
    let z = &pair.s - &h;
    if !z.bracket(&pair.f).is_zero() {
        return Err(Error::check("z_commutes_f", "[Z, f] != 0"));
    }
    if !z.bracket(&h).is_zero() {
        return Err(Error::check("z_commutes_h", "[Z, h] != 0"));
    }
    if !is_neutral_pair(&h, &pair.f) {
        return Err(Error::check("h_neutral", format!("{h} is not neutral for {}", pair.f)));
    }
    Ok((h, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::{q, qf};

    fn e(n: usize, i: usize, j: usize) -> QMatrix {
        QMatrix::unit(n, i - 1, j - 1)
    }

    fn sum(ms: &[QMatrix]) -> QMatrix {
        ms.iter().skip(1).fold(ms[0].clone(), |a, b| &a + b)
    }

    #[test]
    fn ad_matrix_matches_bracket() {
        let x = QMatrix::from_i64(&[&[1, 2, 0], &[0, -1, 3], &[4, 0, 2]]);
        let y = QMatrix::from_i64(&[&[0, 1, 5], &[2, 0, 0], &[1, 1, 1]]);
        assert_eq!(ad_matrix(&x).mul_vec(&y.flat()), x.bracket(&y).flat());
    }

    #[test]
    fn weight_component_examples() {
        let s = QMatrix::diag_i64(&[3, 1, -1, -3]);
        let f = &e(4, 2, 1) + &e(4, 4, 3);
        let w = weight_components(&s, &f).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[&q(-2)], f);
        let ws = weight_components(&s, &s).unwrap();
        assert_eq!(ws.keys().cloned().collect::<Vec<_>>(), vec![q(0)]);
        let s6 = QMatrix::diag(&[q(1), q(-1), q(5), q(3), qf(13, 3), qf(7, 3)]);
        let w45 = weight_components(&s6, &e(6, 4, 5)).unwrap();
        assert_eq!(w45.keys().cloned().collect::<Vec<_>>(), vec![qf(-4, 3)]);
        assert!(weight_components(&e(2, 2, 1), &e(2, 1, 2)).is_err());
    }

    #[test]
    fn weight_components_reassemble() {
        let g = QMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 2], &[1, 0, 1]]);
        let s = QMatrix::diag_i64(&[2, 0, -1]).conjugate(&g).unwrap();
        let m = QMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        let comps = weight_components(&s, &m).unwrap();
        let total = comps.values().fold(QMatrix::zeros(3, 3), |a, b| &a + b);
        assert_eq!(total, m);
        for (w, c) in &comps {
            assert_eq!(s.bracket(c), c.scale(w));
        }
    }

    #[test]
    fn neutral_examples() {
        let f = sum(&[e(4, 2, 1), e(4, 4, 3), e(4, 3, 2)]);
        assert!(is_neutral_pair(&QMatrix::diag_i64(&[3, 1, -1, -3]), &f));
        let f2 = sum(&[e(4, 2, 1), e(4, 4, 3), e(4, 3, 1), e(4, 4, 2)]);
        assert!(is_neutral_pair(&QMatrix::diag_i64(&[2, 0, 0, -2]), &f2));
        assert!(is_neutral_pair(&QMatrix::zeros(3, 3), &QMatrix::zeros(3, 3)));
        // bracket holds but h is not neutral
        let r = neutral_report(&QMatrix::diag_i64(&[2, 0]), &e(2, 2, 1)).unwrap();
        assert!(r.bracket && !r.neutral() && r.agree());
        let c = neutral_report(&QMatrix::diag_i64(&[1, -1, 5]), &e(3, 2, 1)).unwrap();
        assert!(!c.neutral() && c.agree());
    }

    #[test]
    fn find_z_examples() {
        let s = QMatrix::diag_i64(&[3, 1, -1, -3]);
        let f = &e(4, 2, 1) + &e(4, 4, 3);
        let pair = WhittakerPair::new(s.clone(), f.clone()).unwrap();
        let (h, z) = find_z(&pair).unwrap();
        assert!(is_neutral_pair(&h, &f));
        assert_eq!(&h + &z, s);

        let f = sum(&[e(4, 2, 1), e(4, 4, 3), e(4, 3, 2)]);
        let (h, z) = find_z(&WhittakerPair::new(s.clone(), f).unwrap()).unwrap();
        assert_eq!((h, z.is_zero()), (s, true));

        let s6 = QMatrix::diag(&[q(1), q(-1), q(5), q(3), qf(13, 3), qf(7, 3)]);
        let f6 = sum(&[e(6, 2, 1), e(6, 4, 3), e(6, 6, 5), e(6, 1, 4)]);
        let (h6, z6) = find_z(&WhittakerPair::new(s6, f6.clone()).unwrap()).unwrap();
        assert!(is_neutral_pair(&h6, &f6));
        assert!(z6.bracket(&f6).is_zero() && z6.bracket(&h6).is_zero());
    }

    #[test]
    fn pair_validation() {
        assert!(WhittakerPair::new(QMatrix::diag_i64(&[1, -1]), e(2, 1, 2)).is_err());
        assert!(WhittakerPair::new(e(2, 2, 1), QMatrix::zeros(2, 2)).is_err());
        let pair = WhittakerPair::new(QMatrix::diag_i64(&[1, -1]), e(2, 2, 1)).unwrap();
        assert!(WhittakerTriple::new(pair.clone(), e(2, 2, 1)).is_err());
        assert!(WhittakerTriple::new(pair, e(2, 1, 2)).is_ok());
    }
}
