//! Nilpotent orbits in gl_n and sl_n: Jordan types, conjugators to standard
//! representatives, sl2-triples, neutral elements and SL power classes.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactq::rational::{power_class, serde_q};
use crate::exactq::{q, QMatrix, Rational, Subspace};
use crate::partitions::{transpose, Composition, Partition};

pub use crate::exactq::is_dth_power;

/// Lower-triangular Jordan block of size k: e_t -> e_{t+1}.
pub fn jordan_block(k: usize) -> QMatrix {
    let mut j = QMatrix::zeros(k, k);
    for t in 0..k.saturating_sub(1) {
        j[(t + 1, t)] = Rational::one();
    }
    j
}

/// diag(k-1, k-3, ..., 1-k)
pub fn h_block(k: usize) -> Vec<i64> {
    (0..k).map(|t| k as i64 - 1 - 2 * t as i64).collect()
}

pub fn block_diag(blocks: &[QMatrix]) -> QMatrix {
    let n: usize = blocks.iter().map(QMatrix::rows).sum();
    let mut out = QMatrix::zeros(n, n);
    let mut o = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out[(o + i, o + j)] = b[(i, j)].clone();
            }
        }
        o += b.rows();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StandardRep {
    pub eta: Composition,
    #[serde(rename = "J")]
    pub j: QMatrix,
    pub h: QMatrix,
}

impl StandardRep {
    pub fn new(eta: &Composition) -> Self {
        let j = block_diag(&eta.parts().iter().map(|&k| jordan_block(k)).collect::<Vec<_>>());
        let h = QMatrix::diag_i64(&eta.parts().iter().flat_map(|&k| h_block(k)).collect::<Vec<_>>());
        StandardRep { eta: eta.clone(), j, h }
    }
}

pub fn require_nilpotent(m: &QMatrix) -> Result<usize> {
    let n = m.require_square()?;
    if !m.pow(n as u32).is_zero() {
        return Err(Error::NotNilpotent);
    }
    Ok(n)
}

pub fn jordan_partition(m: &QMatrix) -> Result<Partition> {
    let n = require_nilpotent(m)?;
    let mut ranks = vec![n];
    let mut power = QMatrix::identity(n);
    while *ranks.last().expect("nonempty") > 0 {
        power = &power * m;
        ranks.push(power.rank());
    }
    // ranks[k-1] - ranks[k] counts parts of size >= k
    let dual: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let dual = Partition::new(dual).map_err(|e| Error::InternalCheckFailure(e.to_string()))?;
    Ok(transpose(&dual))
}

/// Order in which kernel basis vectors are tried as Jordan chain tops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TopOrder {
    #[default]
    Forward,
    Reverse,
}

fn kernel_space(m: &QMatrix) -> Subspace {
    Subspace::span(m.cols(), m.kernel()).expect("kernel vectors")
}

/// g with g N g^{-1} = J_eta.
pub fn jordan_conjugator(m: &QMatrix, eta: &Composition) -> Result<QMatrix> {
    jordan_conjugator_with(m, eta, TopOrder::Forward)
}

pub fn jordan_conjugator_with(m: &QMatrix, eta: &Composition, order: TopOrder) -> Result<QMatrix> {
    let found = jordan_partition(m)?;
    if found != eta.sorted() {
        return Err(Error::WrongPartition { found: found.parts().to_vec(), requested: eta.parts().to_vec() });
    }
    let n = m.rows();
    let maxlen = found.parts().first().copied().unwrap_or(0);
    // kernels[k] = ker N^k
    let mut kernels = vec![Subspace::zero(n)];
    let mut power = QMatrix::identity(n);
    for _ in 0..=maxlen {
        power = &power * m;
        kernels.push(kernel_space(&power));
    }
    let mut chains: Vec<Vec<(usize, Vec<Rational>)>> = vec![Vec::new(); maxlen + 1];
    for k in (1..=maxlen).rev() {
        let image = Subspace::span(n, kernels[k + 1].basis().iter().map(|v| m.mul_vec(v)))?;
        let mut covered = kernels[k - 1].sum(&image)?;
        let mut candidates: Vec<Vec<Rational>> = kernels[k].basis().to_vec();
        if order == TopOrder::Reverse {
            candidates.reverse();
        }
        for v in candidates {
            if chains[k].len() == found.multiplicity(k) {
                break;
            }
            if !covered.contains_vector(&v)? {
                covered = Subspace::span(n, covered.basis().iter().cloned().chain([v.clone()]))?;
                chains[k].push((k, v));
            }
        }
        if chains[k].len() != found.multiplicity(k) {
            return Err(Error::InternalCheckFailure(format!("found {} chain tops of length {k}", chains[k].len())));
        }
    }
    let mut next = vec![0usize; maxlen + 1];
    let mut columns = Vec::with_capacity(n);
    for &s in eta.parts() {
        let (_, top) = &chains[s][next[s]];
        next[s] += 1;
        let mut v = top.clone();
        for _ in 0..s {
            columns.push(v.clone());
            v = m.mul_vec(&v);
        }
    }
    let b = QMatrix::from_columns(&columns)?;
    let g = b.inverse()?;
    let target = StandardRep::new(eta).j;
    if &(&g * m) * &b != target {
        return Err(Error::InternalCheckFailure("conjugator does not reach the Jordan form".into()));
    }
    Ok(g)
}

pub fn bracket_is(h: &QMatrix, f: &QMatrix, c: i64) -> bool {
    h.bracket(f) == f.scale(&q(c))
}

/// e with [h, e] = 2e and [e, f] = h.
pub fn sl2_complete(f: &QMatrix, h: &QMatrix) -> Result<QMatrix> {
    let n = f.require_square()?;
    if h.require_square()? != n {
        return Err(Error::DimensionMismatch("h and f differ in size".into()));
    }
    if !bracket_is(h, f, -2) {
        return Err(Error::PreconditionViolation("[h, f] != -2f".into()));
    }
    let nn = n * n;
    let mut cols = Vec::with_capacity(nn);
    for a in 0..n {
        for b in 0..n {
            let e = QMatrix::unit(n, a, b);
            let mut col = (&h.bracket(&e) - &e.scale(&q(2))).flat();
            col.extend(e.bracket(f).flat());
            cols.push(col);
        }
    }
    let system = QMatrix::from_columns(&cols)?;
    let mut rhs = vec![Rational::zero(); nn];
    rhs.extend(h.flat());
    let x = system
        .solve(&rhs)?
        .ok_or_else(|| Error::NoSolution("no e completes (h, f) to an sl2-triple".into()))?;
    let e = QMatrix::from_data(n, n, x)?;
    if !bracket_is(h, &e, 2) || e.bracket(f) != *h {
        return Err(Error::InternalCheckFailure("sl2 relations fail".into()));
    }
    Ok(e)
}

pub fn neutral_for(f: &QMatrix) -> Result<QMatrix> {
    neutral_for_with(f, TopOrder::Forward)
}

pub fn neutral_for_with(f: &QMatrix, order: TopOrder) -> Result<QMatrix> {
    let eta = jordan_partition(f)?.as_composition();
    let g = jordan_conjugator_with(f, &eta, order)?;
    let h_eta = StandardRep::new(&eta).h;
    let h = &(&g.inverse()? * &h_eta) * &g;
    if !bracket_is(&h, f, -2) {
        return Err(Error::InternalCheckFailure("transported h fails [h, f] = -2f".into()));
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlOrbitClass {
    pub lambda: Partition,
    pub d: u64,
    #[serde(with = "serde_q")]
    pub a_class: Rational,
}

/// Jordan type and the raw scalar a with N in the SL-orbit of D_a J_lambda D_a^{-1}.
pub fn sl_scalar(m: &QMatrix) -> Result<(Partition, Rational)> {
    let lambda = jordan_partition(m)?;
    let g = jordan_conjugator(m, &lambda.as_composition())?;
    Ok((lambda, g.det()?.recip()))
}

pub fn sl_class(m: &QMatrix) -> Result<SlOrbitClass> {
    let (lambda, a) = sl_scalar(m)?;
    let d = lambda.gcd().max(1) as u64;
    Ok(SlOrbitClass { a_class: power_class(&a, d)?, d, lambda })
}

/// diag(a, 1, ..., 1)
pub fn d_matrix(n: usize, a: &Rational) -> QMatrix {
    let mut m = QMatrix::identity(n);
    if n > 0 {
        m[(0, 0)] = a.clone();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::qf;

    fn e(n: usize, i: usize, j: usize) -> QMatrix {
        QMatrix::unit(n, i - 1, j - 1)
    }

    fn comp(v: &[usize]) -> Composition {
        Composition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn standard_rep_bracket() {
        let r = StandardRep::new(&comp(&[3, 1, 2]));
        assert!(bracket_is(&r.h, &r.j, -2));
        assert_eq!(r.h.diagonal(), [2, 0, -2, 0, 1, -1].map(q).to_vec());
    }

    #[test]
    fn partitions_of_examples() {
        let j = StandardRep::new(&comp(&[3, 1])).j;
        assert_eq!(jordan_partition(&j).unwrap().parts(), &[3, 1]);
        let m = &(&e(4, 2, 1) + &e(4, 4, 3)) + &e(4, 4, 2);
        assert_eq!(jordan_partition(&m).unwrap().parts(), &[3, 1]);
        assert_eq!(jordan_partition(&QMatrix::zeros(3, 3)).unwrap().parts(), &[1, 1, 1]);
        assert_eq!(jordan_partition(&QMatrix::identity(2)), Err(Error::NotNilpotent));
    }

    #[test]
    fn conjugator_examples() {
        let eta = comp(&[2, 1, 3]);
        let j = StandardRep::new(&eta).j;
        assert_eq!(jordan_conjugator(&j, &eta).unwrap(), QMatrix::identity(6));
        let g = jordan_conjugator(&e(2, 1, 2), &comp(&[2])).unwrap();
        assert_eq!(e(2, 1, 2).conjugate(&g).unwrap(), e(2, 2, 1));
        let m = &(&e(4, 2, 1) + &e(4, 4, 3)) + &e(4, 4, 2);
        for order in [TopOrder::Forward, TopOrder::Reverse] {
            let g = jordan_conjugator_with(&m, &comp(&[1, 3]), order).unwrap();
            assert_eq!(m.conjugate(&g).unwrap(), StandardRep::new(&comp(&[1, 3])).j);
        }
        assert!(matches!(jordan_conjugator(&m, &comp(&[2, 2])), Err(Error::WrongPartition { .. })));
    }

    #[test]
    fn sl2_examples() {
        let e2 = sl2_complete(&e(2, 2, 1), &QMatrix::diag_i64(&[1, -1])).unwrap();
        assert_eq!(e2, e(2, 1, 2));
        let f = &e(4, 2, 1) + &e(4, 4, 3);
        let e4 = sl2_complete(&f, &QMatrix::diag_i64(&[1, -1, 1, -1])).unwrap();
        assert!(bracket_is(&QMatrix::diag_i64(&[1, -1, 1, -1]), &e4, 2));
        assert_eq!(e4.bracket(&f), QMatrix::diag_i64(&[1, -1, 1, -1]));
        assert_eq!(sl2_complete(&QMatrix::zeros(3, 3), &QMatrix::zeros(3, 3)).unwrap(), QMatrix::zeros(3, 3));
        // a non-neutral h: bracket holds but no e exists
        let h_bad = QMatrix::diag_i64(&[2, 0]);
        assert!(matches!(sl2_complete(&e(2, 2, 1), &h_bad), Err(Error::NoSolution(_))));
    }

    #[test]
    fn neutral_examples() {
        let eta = comp(&[3, 2]);
        let r = StandardRep::new(&eta);
        assert_eq!(neutral_for(&r.j).unwrap(), r.h);
        let f = &(&e(4, 2, 1) + &e(4, 4, 3)) + &e(4, 3, 2);
        let h = neutral_for(&f).unwrap();
        assert!(bracket_is(&h, &f, -2));
        assert_eq!(neutral_for(&QMatrix::zeros(2, 2)).unwrap(), QMatrix::zeros(2, 2));
    }

    #[test]
    fn sl_class_examples() {
        let j = StandardRep::new(&comp(&[2, 2])).j;
        assert_eq!(sl_class(&j).unwrap().a_class, q(1));
        let four = e(2, 2, 1).scale(&q(4));
        let c4 = sl_class(&four).unwrap();
        assert_eq!((c4.d, c4.a_class.clone()), (2, q(1)));
        let c2 = sl_class(&e(2, 2, 1).scale(&q(2))).unwrap();
        assert_eq!(c2.a_class, q(2));
        let half = sl_class(&e(2, 2, 1).scale(&qf(1, 2))).unwrap();
        assert_eq!(half.a_class, q(2));
    }
}
