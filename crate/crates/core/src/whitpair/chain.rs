use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::grading::{bigrading, criticals_of, BiGrading};
use super::{ad_matrix, centralizer, find_z, WhittakerPair};
use crate::error::{Error, Result};
use crate::exactq::rational::{fmt_q, serde_q, serde_qvec};
use crate::exactq::{QMatrix, Rational, SkewForm, Subspace};
use crate::orbits::{bracket_is, sl2_complete};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeformationSnapshot {
    #[serde(with = "serde_q")]
    pub t: Rational,
    pub u: Subspace,
    pub v: Subspace,
    pub w: Subspace,
    pub rad: Subspace,
    pub l: Subspace,
    pub r: Subspace,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepRecord {
    #[serde(with = "serde_q")]
    pub from: Rational,
    #[serde(with = "serde_q")]
    pub to: Rational,
    pub r_from_dim: usize,
    pub l_to_dim: usize,
    pub obstruction_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Obstruction {
    #[serde(with = "serde_q")]
    pub t: Rational,
    pub space: Subspace,
    pub dual: Subspace,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainCertificate {
    pub pair: WhittakerPair,
    pub h: QMatrix,
    #[serde(rename = "Z")]
    pub z: QMatrix,
    #[serde(with = "serde_qvec")]
    pub criticals: Vec<Rational>,
    pub snapshots: Vec<DeformationSnapshot>,
    pub inclusions: Vec<StepRecord>,
    pub obstructions: Vec<Obstruction>,
    /// Every clause verified while building, all true.
    pub checks: BTreeMap<String, bool>,
}

/// Data shared by all snapshots of one deformation h + tZ.
#[derive(Debug, Clone)]
pub struct ChainContext {
    pub h: QMatrix,
    pub z: QMatrix,
    pub f: QMatrix,
    pub grading: BiGrading,
    pub centralizer: Subspace,
    pub form: SkewForm,
    /// Lagrangian of the weight-(1, 0) component, shared by every t.
    pub m: Subspace,
}

fn ensure(clause: &str, ok: bool, detail: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::check(clause, detail()))
    }
}

/// [A, B] is contained in C.
pub fn brackets_within(a: &Subspace, b: &Subspace, c: &Subspace) -> bool {
    let bm = b.basis_matrices();
    a.basis_matrices().iter().all(|x| bm.iter().all(|y| c.contains_matrix(&x.bracket(y))))
}

fn direct_sum_is(parts: (&Subspace, &Subspace), whole: &Subspace) -> Result<bool> {
    Ok(parts.0.independent_of(parts.1)? && parts.0.sum(parts.1)? == *whole)
}

impl ChainContext {
    pub fn new(h: &QMatrix, z: &QMatrix, f: &QMatrix) -> Result<Self> {
        if !bracket_is(h, f, -2) {
            return Err(Error::PreconditionViolation("[h, f] != -2f".into()));
        }
        if !z.bracket(f).is_zero() {
            return Err(Error::PreconditionViolation("[Z, f] != 0".into()));
        }
        let grading = bigrading(h, z)?;
        let form = SkewForm::new(f)?;
        let one = Rational::one();
        let m_space = grading.sum_where(|a, b| *a == one && b.is_zero());
        let m = form.lagrangian(&m_space)?;
        Ok(ChainContext { h: h.clone(), z: z.clone(), f: f.clone(), centralizer: centralizer(f), grading, form, m })
    }

    fn n(&self) -> usize {
        self.h.rows()
    }

    pub fn weight_space(&self, t: &Rational, pred: impl Fn(&Rational) -> bool) -> Subspace {
        self.grading.sum_where(|a, b| pred(&(a + t * b)))
    }

    pub fn snapshot(&self, t: &Rational) -> Result<DeformationSnapshot> {
        if *t < Rational::zero() {
            return Err(Error::PreconditionViolation("t must be nonnegative".into()));
        }
        let one = Rational::one();
        let u = self.weight_space(t, |x| *x >= one);
        let v = self.weight_space(t, |x| *x > one);
        let w = self.weight_space(t, |x| *x == one);
        let wf = w.intersect(&self.centralizer)?;
        let rad = v.sum(&wf)?;
        let zneg = self.grading.sum_where(|a, b| *b < Rational::zero() && a + t * b >= one);
        let zpos = self.grading.sum_where(|a, b| *b > Rational::zero() && a + t * b >= one);
        let l = Subspace::sum_all(u.ambient_dim(), [&self.m, &zneg, &rad])?;
        let r = Subspace::sum_all(u.ambient_dim(), [&self.m, &zpos, &rad])?;
        Ok(DeformationSnapshot { t: t.clone(), u, v, w, rad, l, r })
    }

    /// Per-snapshot clauses: radical structure, isotropy and maximality of l and r.
    pub fn verify_snapshot(&self, s: &DeformationSnapshot, checks: &mut BTreeMap<String, bool>) -> Result<()> {
        let at = || format!("t = {}", fmt_q(&s.t));
        let wf = s.w.intersect(&self.centralizer)?;
        ensure("u_splits", direct_sum_is((&s.v, &s.w), &s.u)?, || format!("u != v + w at {}", at()))?;
        ensure("rad_w_is_centralizer_slice", self.form.radical(&s.w) == wf, || {
            format!("radical of the form on w differs from w meet ker ad f at {}", at())
        })?;
        ensure("rad_u_splits", self.form.radical(&s.u) == s.rad, || {
            format!("radical of the form on u differs from v + (w meet ker ad f) at {}", at())
        })?;
        for (name, x) in [("l", &s.l), ("r", &s.r)] {
            ensure(&format!("{name}_within_u"), s.u.contains(x)?, || format!("{name} not inside u at {}", at()))?;
            ensure(&format!("{name}_contains_rad"), x.contains(&s.rad)?, || {
                format!("{name} misses part of the radical at {}", at())
            })?;
            ensure(&format!("{name}_isotropic"), self.form.is_isotropic(x), || {
                format!("{name} is not isotropic at {}", at())
            })?;
            ensure(&format!("{name}_maximal"), 2 * x.dim() == s.u.dim() + s.rad.dim(), || {
                format!("2 dim {name} = {} but dim u + dim rad = {} at {}", 2 * x.dim(), s.u.dim() + s.rad.dim(), at())
            })?;
        }
        for key in [
            "u_splits",
            "rad_w_is_centralizer_slice",
            "rad_u_splits",
            "l_within_u",
            "r_within_u",
            "l_contains_rad",
            "r_contains_rad",
            "l_isotropic",
            "r_isotropic",
            "l_maximal",
            "r_maximal",
        ] {
            checks.insert(key.to_string(), true);
        }
        Ok(())
    }

    /// Global clauses: ad(Z)-invariance of the form and radical = centralizer of f.
    pub fn verify_form(&self, checks: &mut BTreeMap<String, bool>) -> Result<()> {
        let n = self.n();
        let f = &self.f;
        let mut g = QMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        // tr(f [E_ij, E_kl]) = d_jk f_li - d_li f_jk
                        let mut v = Rational::zero();
                        if j == k {
                            v += &f[(l, i)];
                        }
                        if l == i {
                            v -= &f[(j, k)];
                        }
                        g[(i * n + j, k * n + l)] = v;
                    }
                }
            }
        }
        let a = ad_matrix(&self.z);
        let inv = &(&a.transpose() * &g) + &(&g * &a);
        ensure("omega_adz_invariant", inv.is_zero(), || "form is not ad(Z)-invariant".into())?;
        let rad = self.form.radical(&Subspace::full(n * n));
        ensure("radical_is_centralizer", rad == self.centralizer, || {
            format!("radical has dim {} but the centralizer has dim {}", rad.dim(), self.centralizer.dim())
        })?;
        checks.insert("omega_adz_invariant".into(), true);
        checks.insert("radical_is_centralizer".into(), true);
        Ok(())
    }

    /// Clauses relating consecutive nodes t < T.
    pub fn verify_step(
        &self,
        a: &DeformationSnapshot,
        b: &DeformationSnapshot,
        e: &QMatrix,
        checks: &mut BTreeMap<String, bool>,
    ) -> Result<(StepRecord, Obstruction)> {
        let span = || format!("step {} -> {}", fmt_q(&a.t), fmt_q(&b.t));
        let wf_a = a.w.intersect(&self.centralizer)?;
        let obs = b.w.intersect(&self.centralizer)?;
        ensure("w_centralizer_in_next_u", b.u.contains(&wf_a)?, || {
            format!("w meet ker ad f escapes the next u in {}", span())
        })?;
        ensure("r_in_next_l", b.l.contains(&a.r)?, || format!("r_t not inside l_T in {}", span()))?;
        ensure("l_direct_sum", direct_sum_is((&a.r, &obs), &b.l)?, || {
            format!("l_T != r_t + (w_T meet ker ad f) as a direct sum in {}", span())
        })?;
        ensure("obstruction_dimension", b.l.dim() == a.r.dim() + obs.dim(), || {
            format!("dim l_T = {} but dim r_t + dim obstruction = {}", b.l.dim(), a.r.dim() + obs.dim())
        })?;
        ensure("l_bracket_in_r", brackets_within(&b.l, &b.l, &a.r), || {
            format!("[l_T, l_T] not inside r_t in {}", span())
        })?;
        ensure("r_ideal_in_l", brackets_within(&b.l, &a.r, &a.r), || {
            format!("[l_T, r_t] not inside r_t in {}", span())
        })?;
        ensure("v_in_r", a.r.contains(&b.v)?, || format!("v_T not inside r_t in {}", span()))?;
        ensure("v_ideal_in_r", brackets_within(&a.r, &b.v, &b.v), || {
            format!("[r_t, v_T] not inside v_T in {}", span())
        })?;
        ensure("r_bracket_in_v", brackets_within(&a.r, &a.r, &b.v), || {
            format!("[r_t, r_t] not inside v_T in {}", span())
        })?;
        let minus_one = -Rational::one();
        let low = self.weight_space(&b.t, |x| *x == minus_one);
        let dual = low.intersect(&centralizer(e))?;
        let pairing: Vec<Vec<Rational>> = obs
            .basis_matrices()
            .iter()
            .map(|o| dual.basis_matrices().iter().map(|d| o.trace_product(d)).collect())
            .collect();
        let nondegenerate = obs.dim() == dual.dim()
            && (obs.is_zero() || QMatrix::from_rows(pairing)?.rank() == obs.dim());
        ensure("obstruction_duality", nondegenerate, || {
            format!("trace pairing between obstruction and its dual is degenerate in {}", span())
        })?;
        for key in [
            "w_centralizer_in_next_u",
            "r_in_next_l",
            "l_direct_sum",
            "obstruction_dimension",
            "l_bracket_in_r",
            "r_ideal_in_l",
            "v_in_r",
            "v_ideal_in_r",
            "r_bracket_in_v",
            "obstruction_duality",
        ] {
            checks.insert(key.to_string(), true);
        }
        Ok((
            StepRecord {
                from: a.t.clone(),
                to: b.t.clone(),
                r_from_dim: a.r.dim(),
                l_to_dim: b.l.dim(),
                obstruction_dim: obs.dim(),
            },
            Obstruction { t: b.t.clone(), space: obs, dual },
        ))
    }
}

/// Snapshot of the filtration at a single t >= 0, verified.
pub fn snapshot(h: &QMatrix, z: &QMatrix, f: &QMatrix, t: &Rational) -> Result<DeformationSnapshot> {
    let ctx = ChainContext::new(h, z, f)?;
    let s = ctx.snapshot(t)?;
    ctx.verify_snapshot(&s, &mut BTreeMap::new())?;
    Ok(s)
}

/// Full certificate for the deformation from h (t = 0) to S (t = 1).
pub fn chain(pair: &WhittakerPair) -> Result<ChainCertificate> {
    let (h, z) = find_z(pair)?;
    let ctx = ChainContext::new(&h, &z, &pair.f)?;
    let mut checks = BTreeMap::new();
    checks.insert("h_neutral".to_string(), true);
    checks.insert("z_commutes".to_string(), true);
    ctx.verify_form(&mut checks)?;
    let one = Rational::one();
    let criticals: Vec<Rational> = criticals_of(&ctx.grading).into_iter().filter(|t| *t <= one).collect();
    let mut nodes = criticals.clone();
    if nodes.last() != Some(&one) {
        nodes.push(one);
    }
    let snapshots = nodes.iter().map(|t| ctx.snapshot(t)).collect::<Result<Vec<_>>>()?;
    for s in &snapshots {
        ctx.verify_snapshot(s, &mut checks)?;
    }
    let e = sl2_complete(&pair.f, &h)?;
    let mut inclusions = Vec::new();
    let mut obstructions = Vec::new();
    for w in snapshots.windows(2) {
        let (step, obs) = ctx.verify_step(&w[0], &w[1], &e, &mut checks)?;
        inclusions.push(step);
        obstructions.push(obs);
    }
    Ok(ChainCertificate { pair: pair.clone(), h, z, criticals, snapshots, inclusions, obstructions, checks })
}
