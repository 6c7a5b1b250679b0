use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactq::rational::{fmt_q, serde_qvec};
use crate::exactq::{eigenframe, EigenFrame, QMatrix, Rational, Subspace};
use crate::orbits::bracket_is;

/// (alpha, beta): ad(h)-weight and ad(Z)-weight; the S_t-weight is alpha + t*beta.
pub type WeightPair = (Rational, Rational);

/// Joint eigenspace decomposition of gl_n under ad(h) and ad(Z).
#[derive(Debug, Clone)]
pub struct BiGrading {
    pub h: QMatrix,
    pub z: QMatrix,
    frame: EigenFrame,
    components: BTreeMap<WeightPair, Subspace>,
}

pub fn bigrading(h: &QMatrix, z: &QMatrix) -> Result<BiGrading> {
    let n = h.require_square()?;
    if z.require_square()? != n {
        return Err(Error::DimensionMismatch("h and Z differ in size".into()));
    }
    if !h.bracket(z).is_zero() {
        return Err(Error::NotCommuting("[h, Z] != 0".into()));
    }
    let frame = eigenframe(&[h, z])?;
    let mut units: BTreeMap<WeightPair, Vec<Vec<Rational>>> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let key = (frame.weight(0, i, j), frame.weight(1, i, j));
            units.entry(key).or_default().push(frame.unit(i, j).flat());
        }
    }
    let components = units
        .into_iter()
        .map(|(k, v)| Ok((k, Subspace::span(n * n, v)?)))
        .collect::<Result<_>>()?;
    Ok(BiGrading { h: h.clone(), z: z.clone(), frame, components })
}

impl BiGrading {
    pub fn n(&self) -> usize {
        self.h.rows()
    }

    pub fn components(&self) -> &BTreeMap<WeightPair, Subspace> {
        &self.components
    }

    pub fn frame(&self) -> &EigenFrame {
        &self.frame
    }

    /// Sum of the components whose weight pair satisfies `pred`.
    pub fn sum_where(&self, pred: impl Fn(&Rational, &Rational) -> bool) -> Subspace {
        let n = self.n();
        Subspace::sum_all(n * n, self.components.iter().filter(|((a, b), _)| pred(a, b)).map(|(_, s)| s))
            .expect("common ambient")
    }

    /// Weight pair of a matrix lying in a single component.
    pub fn weight_of(&self, m: &QMatrix) -> Option<WeightPair> {
        if m.is_zero() {
            return None;
        }
        self.components.iter().find(|(_, s)| s.contains_matrix(m)).map(|(k, _)| k.clone())
    }
}

impl Serialize for BiGrading {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Component<'a> {
            alpha: String,
            beta: String,
            space: &'a Subspace,
        }
        let comps: Vec<Component<'_>> = self
            .components
            .iter()
            .map(|((a, b), space)| Component { alpha: fmt_q(a), beta: fmt_q(b), space })
            .collect();
        let mut st = s.serialize_struct("BiGrading", 3)?;
        st.serialize_field("h", &self.h)?;
        st.serialize_field("Z", &self.z)?;
        st.serialize_field("components", &comps)?;
        st.end()
    }
}

fn check_triple(h: &QMatrix, z: &QMatrix, f: &QMatrix) -> Result<()> {
    if !bracket_is(h, f, -2) {
        return Err(Error::PreconditionViolation("[h, f] != -2f".into()));
    }
    if !z.bracket(f).is_zero() {
        return Err(Error::PreconditionViolation("[Z, f] != 0".into()));
    }
    Ok(())
}

/// 0 together with every t > 0 where some nonzero component reaches S_t-weight 1.
/// Only [h, f] = -2f is enforced; the set itself depends on (h, Z) alone.
pub fn critical_numbers(h: &QMatrix, z: &QMatrix, f: &QMatrix) -> Result<Vec<Rational>> {
    if !bracket_is(h, f, -2) {
        return Err(Error::PreconditionViolation("[h, f] != -2f".into()));
    }
    let g = bigrading(h, z)?;
    Ok(criticals_of(&g))
}

pub(crate) fn criticals_of(g: &BiGrading) -> Vec<Rational> {
    let one = Rational::one();
    let mut out: BTreeSet<Rational> = BTreeSet::new();
    out.insert(Rational::zero());
    for (a, b) in g.components.keys() {
        if b.is_zero() {
            continue;
        }
        let t = (&one - a) / b;
        if t > Rational::zero() {
            out.insert(t);
        }
    }
    out.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasiCriticals {
    #[serde(with = "serde_qvec")]
    pub values: Vec<Rational>,
    #[serde(rename = "in")]
    pub in_invariant: usize,
}

/// Every t > 1 at which a component outside g^Z_0 has S_t-weight 1 or 2.
pub fn quasi_criticals(s: &QMatrix, f: &QMatrix, h: &QMatrix) -> Result<QuasiCriticals> {
    let z = s - h;
    check_triple(h, &z, f)?;
    let g = bigrading(h, &z)?;
    let one = Rational::one();
    let mut out: BTreeSet<Rational> = BTreeSet::new();
    for (a, b) in g.components.keys() {
        if b.is_zero() {
            continue;
        }
        for c in [Rational::one(), Rational::from_integer(2.into())] {
            let t = (c - a) / b;
            if t > one {
                out.insert(t);
            }
        }
    }
    let values: Vec<Rational> = out.into_iter().collect();
    Ok(QuasiCriticals { in_invariant: values.len(), values })
}
