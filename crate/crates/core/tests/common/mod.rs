#![allow(dead_code)]

use rand::Rng;
use whitforge_core::exactq::{q, QMatrix, Rational};
use whitforge_core::orbits::StandardRep;
use whitforge_core::partitions::{dominance_leq, partitions_of, Partition};
use whitforge_core::whitpair::WhittakerPair;

pub fn e(n: usize, i: usize, j: usize) -> QMatrix {
    QMatrix::unit(n, i - 1, j - 1)
}

pub fn sum(ms: &[QMatrix]) -> QMatrix {
    ms.iter().skip(1).fold(ms[0].clone(), |a, b| &a + b)
}

pub fn p(v: &[usize]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

/// Product of random elementary transvections: integer entries, det 1.
pub fn random_unimodular<R: Rng>(n: usize, rng: &mut R) -> QMatrix {
    let mut g = QMatrix::identity(n);
    if n < 2 {
        return g;
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = q(rng.gen_range(-2..=2));
        let mut t = QMatrix::identity(n);
        t[(i, j)] = c;
        g = &g * &t;
    }
    g
}

/// Random invertible rational matrix with a nontrivial determinant.
pub fn random_invertible<R: Rng>(n: usize, rng: &mut R) -> QMatrix {
    let mut d = QMatrix::identity(n);
    for i in 0..n {
        let v: i64 = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        d[(i, i)] = q(v);
    }
    &random_unimodular(n, rng) * &d
}

pub fn random_partition<R: Rng>(n: usize, rng: &mut R) -> Partition {
    let all = partitions_of(n);
    all[rng.gen_range(0..all.len())].clone()
}

/// (S = h + Z, f) conjugated by a random unimodular matrix, with Z a random
/// block scalar for the Jordan decomposition of f.
pub fn random_pair<R: Rng>(n: usize, rng: &mut R) -> WhittakerPair {
    let mu = random_partition(n, rng);
    let rep = StandardRep::new(&mu.as_composition());
    let mut z = Vec::new();
    for &k in mu.parts() {
        let c = Rational::new(rng.gen_range(-4..=4).into(), rng.gen_range(1..=2).into());
        z.extend(std::iter::repeat_n(c, k));
    }
    let s = &rep.h + &QMatrix::diag(&z);
    let g = random_unimodular(n, rng);
    WhittakerPair::new(s.conjugate(&g).unwrap(), rep.j.conjugate(&g).unwrap()).unwrap()
}

/// Every dominated pair mu <= lambda of size 1..=max_n.
pub fn dominated_pairs(max_n: usize) -> Vec<(Partition, Partition)> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let parts = partitions_of(n);
        for l in &parts {
            for m in &parts {
                if dominance_leq(m, l).unwrap() {
                    out.push((m.clone(), l.clone()));
                }
            }
        }
    }
    out
}
