//! Partitions, compositions, the dominance order and partition-level orbit classifiers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

/// Sequence of positive integers in any order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Composition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidInput("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    /// Sorts the input into a partition.
    pub fn sorted(mut parts: Vec<usize>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// gcd of the parts (0 for the empty partition).
    pub fn gcd(&self) -> usize {
        self.parts.iter().fold(0, |g, &p| num_integer::gcd(g, p))
    }

    pub fn multiplicity(&self, part: usize) -> usize {
        self.parts.iter().filter(|&&p| p == part).count()
    }

    pub fn as_composition(&self) -> Composition {
        Composition { parts: self.parts.clone() }
    }
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidInput("composition parts must be positive".into()));
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn sorted(&self) -> Partition {
        Partition::sorted(self.parts.clone()).expect("positive parts")
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl TryFrom<Vec<usize>> for Composition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Composition::new(v)
    }
}

impl From<Composition> for Vec<usize> {
    fn from(c: Composition) -> Self {
        c.parts
    }
}

fn parse_parts(s: &str) -> Result<Vec<usize>> {
    s.trim()
        .trim_start_matches(['(', '['])
        .trim_end_matches([')', ']'])
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidInput(format!("bad part {t:?}"))))
        .collect()
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Partition::new(parse_parts(s)?)
    }
}

impl FromStr for Composition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Composition::new(parse_parts(s)?)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupTag {
    GL,
    SL,
    Sp,
    O,
    SO,
    U,
    SU,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldFlavor {
    Real,
    Padic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupType {
    pub tag: GroupTag,
    pub field: FieldFlavor,
}

impl GroupType {
    pub fn new(tag: GroupTag, field: FieldFlavor) -> Self {
        GroupType { tag, field }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = match self.field {
            FieldFlavor::Real => "real",
            FieldFlavor::Padic => "padic",
        };
        write!(f, "{:?}/{field}", self.tag)
    }
}

impl FromStr for GroupTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "GL" => GroupTag::GL,
            "SL" => GroupTag::SL,
            "SP" => GroupTag::Sp,
            "O" => GroupTag::O,
            "SO" => GroupTag::SO,
            "U" => GroupTag::U,
            "SU" => GroupTag::SU,
            _ => return Err(Error::InvalidInput(format!("unknown group tag {s:?}"))),
        })
    }
}

impl FromStr for FieldFlavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "real" | "r" => Ok(FieldFlavor::Real),
            "padic" | "p-adic" | "nonarchimedean" => Ok(FieldFlavor::Padic),
            _ => Err(Error::InvalidInput(format!("unknown field flavor {s:?}"))),
        }
    }
}

fn same_size(mu: &Partition, lambda: &Partition) -> Result<()> {
    if mu.n() != lambda.n() {
        return Err(Error::SizeMismatch(mu.n(), lambda.n()));
    }
    Ok(())
}

/// mu <= lambda in the dominance order.
pub fn dominance_leq(mu: &Partition, lambda: &Partition) -> Result<bool> {
    same_size(mu, lambda)?;
    let (mut a, mut b) = (0, 0);
    for j in 0..mu.len().max(lambda.len()) {
        a += lambda.parts.get(j).copied().unwrap_or(0);
        b += mu.parts.get(j).copied().unwrap_or(0);
        if a < b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Orbit closure order on compositions: compare the sorted partitions.
pub fn closure_leq(eta: &Composition, gamma: &Composition) -> Result<bool> {
    dominance_leq(&eta.sorted(), &gamma.sorted())
}

pub fn transpose(lambda: &Partition) -> Partition {
    let first = lambda.parts.first().copied().unwrap_or(0);
    let parts = (1..=first).map(|k| lambda.parts.iter().filter(|&&p| p >= k).count()).collect();
    Partition { parts }
}

pub fn is_type_valid(g: GroupType, lambda: &Partition) -> bool {
    let even_mult = |odd: bool| {
        lambda
            .parts
            .iter()
            .filter(|&&p| (p % 2 == 1) == odd)
            .all(|&p| lambda.multiplicity(p).is_multiple_of(2))
    };
    match g.tag {
        GroupTag::Sp => even_mult(true),
        GroupTag::O | GroupTag::SO => even_mult(false),
        _ => true,
    }
}

/// Each even row has an even number of strictly shorter odd rows, and each odd
/// row has an even number of strictly longer even rows.
pub fn oht_admissible(lambda: &Partition) -> bool {
    let p = &lambda.parts;
    let evens_ok = p
        .iter()
        .filter(|&&e| e % 2 == 0)
        .all(|&e| p.iter().filter(|&&o| o % 2 == 1 && o < e).count() % 2 == 0);
    let odds_ok = p
        .iter()
        .filter(|&&o| o % 2 == 1)
        .all(|&o| p.iter().filter(|&&e| e % 2 == 0 && e > o).count() % 2 == 0);
    evens_ok && odds_ok
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitClasses {
    pub special: bool,
    pub admissible: bool,
    pub quasi_admissible: bool,
}

pub fn classify(g: GroupType, lambda: &Partition) -> Result<OrbitClasses> {
    if !is_type_valid(g, lambda) {
        return Err(Error::InvalidPartitionForType { group: g.to_string(), lambda: lambda.parts.clone() });
    }
    let all = |b: bool| OrbitClasses { special: b, admissible: b, quasi_admissible: b };
    Ok(match (g.tag, g.field) {
        (GroupTag::Sp | GroupTag::O | GroupTag::SO, _) => all(oht_admissible(lambda)),
        (GroupTag::GL | GroupTag::SL, _) => all(true),
        (GroupTag::U, FieldFlavor::Real) => {
            OrbitClasses { special: true, admissible: oht_admissible(lambda), quasi_admissible: true }
        }
        // over p-adic fields admissible coincides with special, and every unitary orbit is special
        (GroupTag::U | GroupTag::SU, FieldFlavor::Padic) => all(true),
        (GroupTag::SU, FieldFlavor::Real) => {
            return Err(Error::UnsupportedQuery("admissibility for real SU(p,q)".into()))
        }
    })
}

/// Distinguishedness, available for GL and SL only.
pub fn distinguished(g: GroupType, lambda: &Partition) -> Result<bool> {
    match g.tag {
        GroupTag::GL | GroupTag::SL => Ok(distinguished_gl(lambda)),
        other => Err(Error::UnsupportedQuery(format!("distinguished orbits for {other:?}"))),
    }
}

pub fn distinguished_gl(lambda: &Partition) -> bool {
    lambda.len() == 1
}

/// Smallest 1-based index i with lambda_i >= mu_i >= lambda_{i+1} (lambda padded by 0).
pub fn lemma_part_index(lambda: &Partition, mu: &Partition) -> Result<usize> {
    if !dominance_leq(mu, lambda)? {
        return Err(Error::NotDominated { mu: mu.parts.clone(), lambda: lambda.parts.clone() });
    }
    let l = |i: usize| lambda.parts.get(i).copied().unwrap_or(0);
    (0..lambda.len().max(1))
        .find(|&i| {
            let m = mu.parts.get(i).copied().unwrap_or(0);
            l(i) >= m && m >= l(i + 1)
        })
        .map(|i| i + 1)
        .ok_or_else(|| Error::InternalCheckFailure(format!("no index for {lambda} and {mu}")))
}

/// Every partition of n, lexicographically descending.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn enumerate_orbits(g: GroupType, n: usize) -> Vec<Partition> {
    partitions_of(n).into_iter().filter(|p| is_type_valid(g, p)).collect()
}

/// Removes the parts common to both partitions (as multisets).
pub fn strip_common(mu: &Partition, lambda: &Partition) -> (Partition, Partition, Vec<usize>) {
    let mut lam = lambda.parts.clone();
    let mut m = Vec::new();
    let mut common = Vec::new();
    for &x in &mu.parts {
        if let Some(pos) = lam.iter().position(|&y| y == x) {
            lam.remove(pos);
            common.push(x);
        } else {
            m.push(x);
        }
    }
    (Partition { parts: m }, Partition { parts: lam }, common)
}
