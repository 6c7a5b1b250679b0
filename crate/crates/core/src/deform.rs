//! Orbit-raising deformations: given mu <= lambda, a neutral pair (h, f) with
//! f of type mu together with Z and psi such that f + psi has type lambda.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactq::rational::{ext_gcd, pow_q, power_class, serde_q};
use crate::exactq::{dth_root, is_dth_power, QMatrix, Rational};
use crate::orbits::{block_diag, h_block, jordan_block, jordan_partition, sl_class, sl_scalar, StandardRep};
use crate::partitions::{dominance_leq, strip_common, Partition};
use crate::whitpair::{is_neutral_pair, weight_components};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoBlocks {
    #[serde(rename = "Z")]
    pub z: QMatrix,
    #[serde(rename = "Y")]
    pub y: QMatrix,
    #[serde(rename = "X")]
    pub x: QMatrix,
    #[serde(rename = "S")]
    pub s: QMatrix,
}

fn weights_all(s: &QMatrix, m: &QMatrix, pred: impl Fn(&Rational) -> bool) -> Result<bool> {
    Ok(weight_components(s, m)?.keys().all(pred))
}

/// Two Jordan blocks (p, q + r) glued by Y = E_{p+r+1, p} into type (p + q, r).
pub fn two_blocks(p: usize, q: usize, r: usize) -> Result<TwoBlocks> {
    if p <= r || q == 0 {
        return Err(Error::PreconditionViolation(format!("two_blocks needs p > r >= 0 and q > 0, got ({p}, {q}, {r})")));
    }
    let n = p + q + r;
    let c = (p + q - r) as i64;
    let z = QMatrix::diag_i64(&(0..n).map(|i| if i < p { c } else { 0 }).collect::<Vec<_>>());
    let y = QMatrix::unit(n, p + r, p - 1);
    let j = block_diag(&[jordan_block(p), jordan_block(q + r)]);
    let x = &j + &y;
    let h = QMatrix::diag_i64(&[h_block(p), h_block(q + r)].concat());
    let s = &h + &z;
    let m2 = Rational::from_integer((-2).into());
    let zero = Rational::zero();
    let checks = [
        ("x_weight", weights_all(&s, &x, |w| *w == m2)?),
        ("y_weight", weights_all(&s, &y, |w| *w == m2)?),
        ("y_z_negative", weights_all(&z, &y, |w| *w < zero)?),
        ("x_type", jordan_partition(&x)? == Partition::sorted([p + q, r].into_iter().filter(|&k| k > 0).collect())?),
    ];
    if let Some((clause, _)) = checks.iter().find(|(_, ok)| !ok) {
        return Err(Error::InternalCheckFailure(format!("two_blocks({p}, {q}, {r}): {clause}")));
    }
    Ok(TwoBlocks { z, y, x, s })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeformationCertificate {
    pub n: usize,
    pub mu: Partition,
    pub lambda: Partition,
    pub h: QMatrix,
    pub f: QMatrix,
    #[serde(rename = "Z")]
    pub z: QMatrix,
    pub psi: QMatrix,
    pub checks: BTreeMap<String, bool>,
}

impl DeformationCertificate {
    /// Recomputes every invariant from the matrices alone.
    pub fn verify(&self) -> Result<BTreeMap<String, bool>> {
        let zero = Rational::zero();
        let m2 = Rational::from_integer((-2).into());
        let s = &self.h + &self.z;
        let mut out = BTreeMap::new();
        out.insert("h_neutral".to_string(), is_neutral_pair(&self.h, &self.f));
        out.insert("f_weight".to_string(), weights_all(&self.h, &self.f, |w| *w == m2)?);
        out.insert("psi_Z_negative".to_string(), weights_all(&self.z, &self.psi, |w| *w < zero)?);
        out.insert("psi_S_minus2".to_string(), weights_all(&s, &self.psi, |w| *w == m2)?);
        out.insert("jordan_source".to_string(), jordan_partition(&self.f)? == self.mu);
        out.insert("jordan_target".to_string(), jordan_partition(&(&self.f + &self.psi))? == self.lambda);
        out.insert("z_commutes_h".to_string(), self.z.bracket(&self.h).is_zero());
        out.insert("z_commutes_f".to_string(), self.z.bracket(&self.f).is_zero());
        Ok(out)
    }
}

fn require_all(checks: &BTreeMap<String, bool>, what: &str) -> Result<()> {
    match checks.iter().find(|(_, ok)| !**ok) {
        Some((clause, _)) => Err(Error::InternalCheckFailure(format!("{what}: {clause} failed"))),
        None => Ok(()),
    }
}

type Vector = BTreeMap<usize, i64>;

/// Construction state: f is the block-diagonal lower Jordan matrix of `blocks`,
/// and each chain is (top vector, length) for a Jordan chain of f + psi.
#[derive(Debug, Clone)]
struct Build {
    blocks: Vec<usize>,
    h: Vec<i64>,
    z: Vec<i64>,
    psi: BTreeMap<(usize, usize), i64>,
    chains: Vec<(Vector, usize)>,
}

impl Build {
    fn base(sizes: &[usize]) -> Self {
        let mut b = Build { blocks: sizes.to_vec(), h: Vec::new(), z: Vec::new(), psi: BTreeMap::new(), chains: Vec::new() };
        for &s in sizes {
            b.chains.push((Vector::from([(b.h.len(), 1)]), s));
            b.h.extend(h_block(s));
            b.z.extend(std::iter::repeat_n(0, s));
        }
        b
    }

    /// (f + psi) v
    fn apply(&self, v: &Vector) -> Vector {
        let mut ends = Vec::new();
        let mut o = 0;
        for s in &self.blocks {
            o += s;
            ends.push(o - 1);
        }
        let mut out = Vector::new();
        for (&x, &c) in v {
            if !ends.contains(&x) {
                *out.entry(x + 1).or_default() += c;
            }
        }
        for (&(r, col), &val) in &self.psi {
            if let Some(c) = v.get(&col) {
                *out.entry(r).or_default() += val * c;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    /// Prepends a Jordan block of size `mui` and glues its bottom to X^k of
    /// the top of a chain of length p.
    fn attach(&self, mui: usize, k: usize, p: usize) -> Result<Build> {
        let (ci, w) = self
            .chains
            .iter()
            .enumerate()
            .filter(|(_, (_, len))| *len == p)
            .find_map(|(ci, (top, _))| {
                let mut w = top.clone();
                for _ in 0..k {
                    w = self.apply(&w);
                }
                w.keys().all(|&x| self.h[x] >= -(mui as i64)).then_some((ci, w))
            })
            .ok_or_else(|| Error::InternalCheckFailure(format!("no chain of length {p} to attach a block of size {mui}")))?;
        let mut weights = w.keys().map(|&x| self.h[x] + self.z[x]);
        let sw = weights.next().ok_or_else(|| Error::InternalCheckFailure("empty attachment vector".into()))?;
        if weights.any(|x| x != sw) {
            return Err(Error::InternalCheckFailure("attachment vector is not homogeneous".into()));
        }
        let c = sw + mui as i64 + 1;
        let shift = |v: &Vector| v.iter().map(|(&x, &c)| (x + mui, c)).collect::<Vector>();
        let mut next = Build {
            blocks: std::iter::once(mui).chain(self.blocks.iter().copied()).collect(),
            h: h_block(mui).into_iter().chain(self.h.iter().copied()).collect(),
            z: std::iter::repeat_n(c, mui).chain(self.z.iter().copied()).collect(),
            psi: self.psi.iter().map(|(&(r, col), &v)| ((r + mui, col + mui), v)).collect(),
            chains: Vec::new(),
        };
        for (&x, &v) in &w {
            *next.psi.entry((x + mui, mui - 1)).or_default() += v;
        }
        next.psi.retain(|_, v| *v != 0);
        for (cj, (top, len)) in self.chains.iter().enumerate() {
            if cj != ci {
                next.chains.push((shift(top), *len));
            }
        }
        next.chains.push((Vector::from([(0, 1)]), mui + p - k));
        if k > 0 {
            let mut top = shift(&self.chains[ci].0);
            *top.entry(mui - k).or_default() -= 1;
            top.retain(|_, v| *v != 0);
            next.chains.push((top, k));
        }
        Ok(next)
    }

    /// Reorders blocks by decreasing size (stable).
    fn sorted(self) -> Build {
        let mut starts = Vec::new();
        let mut o = 0;
        for s in &self.blocks {
            starts.push(o);
            o += s;
        }
        let mut order: Vec<usize> = (0..self.blocks.len()).collect();
        order.sort_by(|a, b| self.blocks[*b].cmp(&self.blocks[*a]));
        let mut new_of = vec![0; o];
        let mut pos = 0;
        for &bi in &order {
            for t in 0..self.blocks[bi] {
                new_of[starts[bi] + t] = pos;
                pos += 1;
            }
        }
        let mut h = vec![0; o];
        let mut z = vec![0; o];
        for x in 0..o {
            h[new_of[x]] = self.h[x];
            z[new_of[x]] = self.z[x];
        }
        Build {
            blocks: order.iter().map(|&bi| self.blocks[bi]).collect(),
            h,
            z,
            psi: self.psi.iter().map(|(&(r, c), &v)| ((new_of[r], new_of[c]), v)).collect(),
            chains: Vec::new(),
        }
    }
}

fn build(mu: &Partition, lambda: &Partition) -> Result<Build> {
    let (m, l, common) = strip_common(mu, lambda);
    if m.is_empty() {
        return Ok(Build::base(&common));
    }
    let (m, l) = (m.parts(), l.parts());
    let at = |i: usize| l.get(i).copied().unwrap_or(0);
    let i = (0..m.len())
        .find(|&i| at(i) > m[i] && m[i] > at(i + 1))
        .ok_or_else(|| Error::InternalCheckFailure(format!("no splitting index for {mu} and {lambda}")))?;
    let p = at(i) + at(i + 1) - m[i];
    let mut sub_mu: Vec<usize> = m.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &x)| x).collect();
    let mut sub_lambda: Vec<usize> = l.iter().enumerate().filter(|(j, _)| *j != i && *j != i + 1).map(|(_, &x)| x).collect();
    sub_lambda.push(p);
    sub_mu.extend(&common);
    sub_lambda.extend(&common);
    let (sub_mu, sub_lambda) = (Partition::sorted(sub_mu)?, Partition::sorted(sub_lambda)?);
    if !dominance_leq(&sub_mu, &sub_lambda)? {
        return Err(Error::InternalCheckFailure(format!("recursion lost dominance: {sub_mu} vs {sub_lambda}")));
    }
    build(&sub_mu, &sub_lambda)?.attach(m[i], at(i + 1), p)
}

pub fn deform_gl(mu: &Partition, lambda: &Partition) -> Result<DeformationCertificate> {
    if !dominance_leq(mu, lambda)? {
        return Err(Error::NotDominated { mu: mu.parts().to_vec(), lambda: lambda.parts().to_vec() });
    }
    let b = build(mu, lambda)?.sorted();
    let n = mu.n();
    let rep = StandardRep::new(&mu.as_composition());
    let mut psi = QMatrix::zeros(n, n);
    for (&(r, c), &v) in &b.psi {
        psi[(r, c)] = Rational::from_integer(v.into());
    }
    let mut cert = DeformationCertificate {
        n,
        mu: mu.clone(),
        lambda: lambda.clone(),
        h: QMatrix::diag_i64(&b.h),
        f: rep.j,
        z: QMatrix::diag_i64(&b.z),
        psi,
        checks: BTreeMap::new(),
    };
    if cert.h != rep.h {
        return Err(Error::InternalCheckFailure("reassembled h is not the standard neutral element".into()));
    }
    cert.checks = cert.verify()?;
    require_all(&cert.checks, "deform_gl")?;
    Ok(cert)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SlDeformation {
    Certificate(DeformationCertificate),
    ConditionNotMet {
        d: u64,
        #[serde(with = "serde_q")]
        class: Rational,
    },
}

/// SL_n version: f in the SL-orbit labelled b of type mu, f + psi in the one
/// labelled a of type lambda.
pub fn deform_sl(mu: &Partition, lambda: &Partition, a: &Rational, b: &Rational) -> Result<SlDeformation> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !dominance_leq(mu, lambda)? {
        return Err(Error::NotDominated { mu: mu.parts().to_vec(), lambda: lambda.parts().to_vec() });
    }
    let (dl, dm) = (lambda.gcd() as i64, mu.gcd() as i64);
    let (d, _, ym) = ext_gcd(dl, dm);
    let d_u = d as u64;
    let ratio = a / b;
    if !is_dth_power(&ratio, d_u)? {
        return Ok(SlDeformation::ConditionNotMet { d: d_u, class: power_class(&ratio, d_u)? });
    }
    let mut cert = deform_gl(mu, lambda)?;
    let (_, c) = sl_scalar(&(&cert.f + &cert.psi))?;
    let (_, c0) = sl_scalar(&cert.f)?;
    if !c0.is_one() {
        return Err(Error::InternalCheckFailure("standard representative has a nontrivial SL class".into()));
    }
    let u = dth_root(&(&ratio / &c), d_u)?
        .ok_or_else(|| Error::InternalCheckFailure("target class is not reachable by a diagonal twist".into()))?;
    // conjugation by diag(y, 1, ..., 1) multiplies both raw classes by y
    let y = b * pow_q(&u, ym * dm);
    let n = cert.n;
    let mut dy = QMatrix::identity(n);
    dy[(0, 0)] = y;
    cert.f = cert.f.conjugate(&dy)?;
    cert.psi = cert.psi.conjugate(&dy)?;
    let shift = cert.z.trace() / Rational::from_integer((n as i64).into());
    cert.z = &cert.z - &QMatrix::scalar(n, &shift);
    let mut checks = cert.verify()?;
    let src = sl_class(&cert.f)?;
    let tgt = sl_class(&(&cert.f + &cert.psi))?;
    checks.insert("sl_source_class".into(), src.a_class == power_class(b, dm as u64)?);
    checks.insert("sl_target_class".into(), tgt.a_class == power_class(a, dl as u64)?);
    checks.insert("traceless".into(), cert.z.trace().is_zero() && cert.h.trace().is_zero());
    cert.checks = checks;
    require_all(&cert.checks, "deform_sl")?;
    Ok(SlDeformation::Certificate(cert))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparCertificate {
    pub h: QMatrix,
    pub f: QMatrix,
    #[serde(rename = "S")]
    pub s: QMatrix,
    #[serde(rename = "F")]
    pub big_f: QMatrix,
    pub checks: BTreeMap<String, bool>,
}

/// Whittaker pair (S, F) with F of type lambda, f in g^S_{-2}, [h, S] = 0 and
/// F - f negative for S - h, each condition recomputed from weight components.
pub fn compar_certificate(mu: &Partition, lambda: &Partition) -> Result<ComparCertificate> {
    let cert = deform_gl(mu, lambda)?;
    let s = &cert.h + &cert.z;
    let big_f = &cert.f + &cert.psi;
    let m2 = Rational::from_integer((-2).into());
    let zero = Rational::zero();
    let diff = &big_f - &cert.f;
    let mut checks = BTreeMap::new();
    checks.insert("target_orbit".to_string(), jordan_partition(&big_f)? == *lambda);
    checks.insert("f_weight".to_string(), weights_all(&s, &cert.f, |w| *w == m2)?);
    checks.insert("h_commutes_S".to_string(), cert.h.bracket(&s).is_zero());
    checks.insert("difference_negative".to_string(), weights_all(&(&s - &cert.h), &diff, |w| *w < zero)?);
    checks.insert("pair_weight".to_string(), weights_all(&s, &big_f, |w| *w == m2)?);
    require_all(&checks, "compar_certificate")?;
    Ok(ComparCertificate { h: cert.h, f: cert.f, s, big_f, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::q;

    fn e(n: usize, i: usize, j: usize) -> QMatrix {
        QMatrix::unit(n, i - 1, j - 1)
    }

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn two_block_examples() {
        let t = two_blocks(2, 1, 1).unwrap();
        assert_eq!(t.z, QMatrix::diag_i64(&[2, 2, 0, 0]));
        assert_eq!(t.y, e(4, 4, 2));
        assert_eq!(t.x, &(&e(4, 2, 1) + &e(4, 4, 3)) + &e(4, 4, 2));
        let t = two_blocks(1, 1, 0).unwrap();
        assert_eq!((t.z, t.x), (QMatrix::diag_i64(&[2, 0]), e(2, 2, 1)));
        assert_eq!(two_blocks(2, 1, 0).unwrap().x, &e(3, 2, 1) + &e(3, 3, 2));
        assert!(two_blocks(1, 1, 1).is_err());
        assert!(two_blocks(2, 0, 1).is_err());
    }

    #[test]
    fn gl_examples() {
        let c = deform_gl(&p(&[2, 2]), &p(&[3, 1])).unwrap();
        assert_eq!(c.h, QMatrix::diag_i64(&[1, -1, 1, -1]));
        assert_eq!(c.z, QMatrix::diag_i64(&[2, 2, 0, 0]));
        assert_eq!(c.psi, e(4, 4, 2));
        let c = deform_gl(&p(&[1, 1]), &p(&[2])).unwrap();
        assert_eq!((c.h.is_zero(), c.f.is_zero()), (true, true));
        assert_eq!((c.z, c.psi), (QMatrix::diag_i64(&[2, 0]), e(2, 2, 1)));
        let c = deform_gl(&p(&[3, 2, 1]), &p(&[3, 2, 1])).unwrap();
        assert!(c.z.is_zero() && c.psi.is_zero());
        assert!(matches!(deform_gl(&p(&[3]), &p(&[2, 1])), Err(Error::NotDominated { .. })));
    }

    #[test]
    fn hard_cases() {
        for (m, l) in [(vec![2, 2, 2], vec![3, 3]), (vec![1, 1, 1, 1], vec![4]), (vec![2, 2, 1, 1], vec![3, 3])] {
            let c = deform_gl(&p(&m), &p(&l)).unwrap();
            assert!(c.checks.values().all(|b| *b));
        }
    }

    #[test]
    fn sl_examples() {
        let ok = |a: i64| deform_sl(&p(&[2, 2]), &p(&[4]), &q(a), &q(1)).unwrap();
        match ok(1) {
            SlDeformation::Certificate(c) => {
                let cls = sl_class(&(&c.f + &c.psi)).unwrap();
                assert_eq!((cls.lambda, cls.a_class), (p(&[4]), q(1)));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(ok(2), SlDeformation::ConditionNotMet { d: 2, class: q(2) });
        assert!(matches!(ok(4), SlDeformation::Certificate(_)));
    }

    #[test]
    fn compar_examples() {
        let c = compar_certificate(&p(&[2, 2]), &p(&[3, 1])).unwrap();
        assert_eq!(c.s, QMatrix::diag_i64(&[3, 1, 1, -1]));
        assert_eq!(c.big_f, &(&e(4, 2, 1) + &e(4, 4, 3)) + &e(4, 4, 2));
        let c = compar_certificate(&p(&[1, 1]), &p(&[2])).unwrap();
        assert_eq!((c.s, c.big_f), (QMatrix::diag_i64(&[2, 0]), e(2, 2, 1)));
        let c = compar_certificate(&p(&[2, 1]), &p(&[2, 1])).unwrap();
        assert_eq!(c.s, c.h);
    }
}
