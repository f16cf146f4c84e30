//! Half-integral peeling data (Delta, Upsilon, D-flat), minimalization-step
//! bookkeeping, and the named numeric identities and inequalities of the
//! boundary analysis.

use crate::graph::{
    canonical_dot, intersection_number, CompId, Component, DivisorGraph, FractionalDivisor,
};
use crate::twig::{bark, bark_prime};
use crate::{rat, rat_from_str, rat_to_string, Error, Rat};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// The one-step peeling decomposition of a boundary graph.
#[derive(Debug, Clone)]
pub struct PeelingData {
    /// Maximal (-2)-twigs, each ordered from the tip of the divisor inward.
    pub delta: Vec<Vec<CompId>>,
    /// Qualifying (-1)-curves.
    pub upsilon: BTreeSet<CompId>,
    /// Components of the (-2)-twigs meeting Upsilon.
    pub delta_plus: BTreeSet<CompId>,
    /// Components of the remaining (-2)-twigs.
    pub delta_minus: BTreeSet<CompId>,
    pub bark_prime_minus: FractionalDivisor,
    /// `D - Upsilon - Delta^+ - Bk' Delta^-`.
    pub d_flat: FractionalDivisor,
}

fn is_tip(g: &DivisorGraph, id: CompId) -> bool {
    g.incident_multiplicity(id) <= 1
}

/// Maximal (-2)-twigs of the divisor: chains of (-2)-components growing from
/// a tip inward, stopped by anything that is not a simple crossing with the
/// next (-2)-curve.
fn minus_two_twigs(g: &DivisorGraph) -> Result<Vec<Vec<CompId>>, Error> {
    let mut seen: BTreeSet<CompId> = BTreeSet::new();
    let mut out = Vec::new();
    for tip in g.ids().filter(|id| is_tip(g, *id)) {
        if g.component(tip)?.self_int != -2 {
            continue;
        }
        let mut twig = vec![tip];
        let mut prev: Option<CompId> = None;
        let mut cur = tip;
        loop {
            let next: Vec<(CompId, u32)> = g
                .neighbors(cur)
                .into_iter()
                .filter(|(n, _)| Some(*n) != prev)
                .collect();
            if next.len() != 1 || next[0].1 != 1 {
                break;
            }
            let (n, _) = next[0];
            let c = g.component(n)?;
            if c.self_int != -2 || g.incident_multiplicity(n) != 2 {
                break;
            }
            twig.push(n);
            prev = Some(cur);
            cur = n;
        }
        if twig.iter().any(|id| seen.contains(id)) {
            return Err(Error::NotATree(
                "degenerate boundary: a (-2)-chain is a whole connected component".into(),
            ));
        }
        seen.extend(twig.iter().copied());
        out.push(twig);
    }
    Ok(out)
}

/// Computes the peeling data of a boundary graph and verifies its structural
/// invariants, including the orthogonality `(K + D_flat/2) . R = 0` for every
/// component `R` of `Delta + Upsilon`.
pub fn compute_peeling(g: &DivisorGraph) -> Result<PeelingData, Error> {
    let delta = minus_two_twigs(g)?;
    let delta_all: BTreeSet<CompId> = delta.iter().flatten().copied().collect();

    let mut upsilon: BTreeSet<CompId> = BTreeSet::new();
    for c in g.components() {
        if c.self_int != -1 {
            continue;
        }
        let beta = g.incident_multiplicity(c.id) as i64;
        let nb = g.neighbors(c.id);
        let meets_delta: u32 = nb
            .iter()
            .filter(|(n, _)| delta_all.contains(n))
            .map(|(_, m)| m)
            .sum();
        let clause_branch = beta == 3 && meets_delta == 1;
        let clause_tangent = beta == 2 && nb.len() == 1;
        if clause_branch || clause_tangent {
            upsilon.insert(c.id);
        }
    }
    for u in &upsilon {
        for (n, _) in g.neighbors(*u) {
            if upsilon.contains(&n) {
                return Err(Error::Internal(format!(
                    "components {u} and {n} of Upsilon meet"
                )));
            }
        }
    }

    let mut delta_plus: BTreeSet<CompId> = BTreeSet::new();
    let mut delta_minus: BTreeSet<CompId> = BTreeSet::new();
    for twig in &delta {
        let touching: BTreeSet<CompId> = twig
            .iter()
            .flat_map(|id| g.neighbors(*id))
            .map(|(n, _)| n)
            .filter(|n| upsilon.contains(n))
            .collect();
        match touching.len() {
            0 => delta_minus.extend(twig.iter().copied()),
            1 => delta_plus.extend(twig.iter().copied()),
            k => {
                return Err(Error::Internal(format!(
                    "(-2)-twig starting at {} meets {k} components of Upsilon",
                    twig[0]
                )))
            }
        }
    }

    let bp = bark_prime(g, &delta_minus)?;
    let mut d_flat = g.reduced_divisor();
    for id in upsilon.iter().chain(delta_plus.iter()) {
        d_flat.coeffs.remove(id);
    }
    let d_flat = d_flat.sub(&bp);

    // orthogonality shadow of the pullback identity
    for id in delta_all.iter().chain(upsilon.iter()) {
        let e = FractionalDivisor::single(*id, rat(1));
        let v = canonical_dot(g, &e)? + intersection_number(g, &d_flat, &e)? / rat(2);
        if !v.is_zero() {
            return Err(Error::Internal(format!(
                "(K + D_flat/2) . R = {v} != 0 on component {id}"
            )));
        }
    }

    Ok(PeelingData {
        delta,
        upsilon,
        delta_plus,
        delta_minus,
        bark_prime_minus: bp,
        d_flat,
    })
}

/// An external `(-1)`-curve described by its intersections with the boundary
/// components (it lives off the graph).
#[derive(Debug, Clone)]
pub struct ACandidate {
    pub meets: Vec<(CompId, u32)>,
}

impl ACandidate {
    fn dot(&self, support: &BTreeSet<CompId>) -> i64 {
        self.meets
            .iter()
            .filter(|(id, _)| support.contains(id))
            .map(|(_, m)| *m as i64)
            .sum()
    }

    fn dot_fractional(&self, d: &FractionalDivisor) -> Rat {
        let mut t = rat(0);
        for (id, m) in &self.meets {
            t += d.coeff(*id) * rat(*m as i64);
        }
        t
    }
}

/// Verdict on an A-curve candidate with the reasons for rejection collected.
#[derive(Debug, Clone)]
pub struct CandidateReport {
    pub ok: bool,
    pub reasons: Vec<String>,
}

/// Necessary conditions for a contractible extremal curve: disjoint from
/// `Upsilon + Delta^+`, meeting `D - Delta^-` once and `Delta^-` once in a
/// tip of `Delta^-`, with `(K + D_flat/2) . A < 0`.
pub fn check_a_candidate(
    g: &DivisorGraph,
    peel: &PeelingData,
    a: &ACandidate,
) -> Result<CandidateReport, Error> {
    for (id, _) in &a.meets {
        g.check_id(*id)?;
    }
    let mut reasons = Vec::new();
    let ups_plus: BTreeSet<CompId> =
        peel.upsilon.union(&peel.delta_plus).copied().collect();
    if a.dot(&ups_plus) != 0 {
        reasons.push("A meets Upsilon + Delta^+".into());
    }
    let rest: BTreeSet<CompId> = g
        .ids()
        .filter(|id| !peel.delta_minus.contains(id))
        .collect();
    if a.dot(&rest) != 1 {
        reasons.push(format!("A . (D - Delta^-) = {}, expected 1", a.dot(&rest)));
    }
    if a.dot(&peel.delta_minus) != 1 {
        reasons.push(format!(
            "A . Delta^- = {}, expected 1",
            a.dot(&peel.delta_minus)
        ));
    } else {
        let met = a
            .meets
            .iter()
            .find(|(id, m)| *m > 0 && peel.delta_minus.contains(id))
            .map(|(id, _)| *id)
            .expect("nonzero intersection with Delta^-");
        let fine = peel
            .delta
            .iter()
            .filter(|tw| peel.delta_minus.contains(&tw[0]))
            .any(|tw| tw.first() == Some(&met) || tw.last() == Some(&met));
        if !fine {
            reasons.push(format!("component {met} is not a tip of Delta^-"));
        }
    }
    // K.A = -1 for a (-1)-curve
    let v = rat(-1) + a.dot_fractional(&peel.d_flat) / rat(2);
    if !v.is_negative() {
        reasons.push(format!("(K + D_flat/2) . A = {v} is not negative"));
    }
    Ok(CandidateReport { ok: reasons.is_empty(), reasons })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepType {
    I,
    II,
}

/// Result of one minimalization step.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub graph: DivisorGraph,
    pub step_type: StepType,
    /// A met the tip of a `Delta^-` twig whose inner attachment is the same
    /// component A meets in `D - Delta^-` (the borderline configuration is
    /// reported rather than folded into the type).
    pub minor_exception: bool,
    /// Boundary components contracted (the A-curve itself not counted).
    pub contracted: Vec<CompId>,
    pub kd_square_before: Rat,
    pub kd_square_after: Rat,
}

fn kd_square(g: &DivisorGraph) -> Result<Rat, Error> {
    let k2 = g.ksq.ok_or(Error::MissingKsq)?;
    let d = g.reduced_divisor();
    let kd = canonical_dot(g, &d)?;
    let dd = intersection_number(g, &d, &d)?;
    Ok(rat(k2) + rat(2) * kd + dd)
}

/// Applies the contraction `psi` attached to an accepted A-curve: contract A,
/// then successively every superfluous `(-1)`-curve of the image (smallest id
/// first), and verify the square identity `(K'+D')^2 = (K+D+A)^2 =
/// (K+D)^2 + 1` exactly.
pub fn minimalization_step(
    g: &DivisorGraph,
    peel: &PeelingData,
    a: &ACandidate,
) -> Result<StepOutcome, Error> {
    let report = check_a_candidate(g, peel, a)?;
    if !report.ok {
        return Err(Error::BadCandidate(report.reasons.join("; ")));
    }
    let before = kd_square(g)?;

    let mut work = g.clone();
    let a_id = work.next_id();
    work.add_component(Component::new(a_id, -1))?;
    for (id, m) in &a.meets {
        if *m > 0 {
            work.add_edge(a_id, *id, *m)?;
        }
    }
    let touched: Vec<CompId> = a.meets.iter().filter(|(_, m)| *m > 0).map(|(id, _)| *id).collect();

    // exact square of K + D + A on the augmented surface
    let with_a = kd_square(&work)?;
    if with_a != before.clone() + rat(1) {
        return Err(Error::Internal(format!(
            "(K+D+A)^2 = {with_a} but (K+D)^2 + 1 = {}",
            before.clone() + rat(1)
        )));
    }

    let mut contracted = Vec::new();
    work = crate::birational::contract_minus_one(&work, a_id)?;
    loop {
        let next = work.ids().find(|id| {
            let c = work.component(*id).unwrap();
            let nb = work.neighbors(*id);
            c.self_int == -1 && nb.len() <= 2 && nb.iter().all(|(_, m)| *m == 1)
        });
        match next {
            Some(id) => {
                work = crate::birational::contract_minus_one(&work, id)?;
                contracted.push(id);
            }
            None => break,
        }
    }

    let after = kd_square(&work)?;
    if after != with_a {
        return Err(Error::Internal(format!(
            "(K'+D')^2 = {after} but (K+D+A)^2 = {with_a}"
        )));
    }

    let step_type = if touched.iter().all(|id| contracted.contains(id)) {
        StepType::II
    } else {
        StepType::I
    };

    // the borderline case: A meets a Delta^- twig tip of D whose inner
    // attachment is the other component met by A
    let mut minor_exception = false;
    if let Some(dm) = touched.iter().find(|id| peel.delta_minus.contains(id)) {
        if is_tip(g, *dm) {
            if let Some(twig) = peel.delta.iter().find(|tw| tw.contains(dm)) {
                let attach: BTreeSet<CompId> = twig
                    .iter()
                    .flat_map(|t| g.neighbors(*t))
                    .map(|(n, _)| n)
                    .filter(|n| !twig.contains(n))
                    .collect();
                minor_exception = touched
                    .iter()
                    .any(|id| !peel.delta_minus.contains(id) && attach.contains(id));
            }
        }
    }

    Ok(StepOutcome {
        graph: work,
        step_type,
        minor_exception,
        contracted,
        kd_square_before: before,
        kd_square_after: after,
    })
}

/// Picard-rank bookkeeping: `rho = 10 - K^2` on the tracked rational surface
/// and the minimalization index implied by `#D = rho + i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoetherReport {
    pub ksq: i64,
    pub rho: i64,
    pub sharp_d: i64,
    pub index: i64,
}

pub fn noether_check(g: &DivisorGraph) -> Result<NoetherReport, Error> {
    let ksq = g.ksq.ok_or(Error::MissingKsq)?;
    let rho = 10 - ksq;
    let sharp_d = g.len() as i64;
    Ok(NoetherReport { ksq, rho, sharp_d, index: sharp_d - rho })
}

/// Exact two-sided evaluation of an inequality.
#[derive(Debug, Clone)]
pub struct BmyReport {
    pub lhs: Rat,
    pub rhs: Rat,
    pub slack: Rat,
    pub satisfied: bool,
}

impl BmyReport {
    fn new(lhs: Rat, rhs: Rat) -> Self {
        let slack = rhs.clone() - lhs.clone();
        let satisfied = !slack.is_negative();
        BmyReport { lhs, rhs, slack, satisfied }
    }
}

/// The log Bogomolov-Miyaoka-Yau inequality in its general form:
/// `(K + D - Bk D)^2 / 3 <= chi + sum 1/|Gamma_i|`. Quotient-group orders are
/// caller-supplied; see [`quotient_order_of_chain`] for the chain case.
pub fn bmy_general(
    g: &DivisorGraph,
    chi: i64,
    quotient_orders: &[u64],
) -> Result<BmyReport, Error> {
    let k2 = g.ksq.ok_or(Error::MissingKsq)?;
    let b = bark(g)?;
    let d = g.reduced_divisor();
    let dmb = d.sub(&b);
    let sq = rat(k2)
        + rat(2) * canonical_dot(g, &dmb)?
        + intersection_number(g, &dmb, &dmb)?;
    let mut rhs = rat(chi);
    for q in quotient_orders {
        if *q == 0 {
            return Err(Error::Format("quotient-group order must be positive".into()));
        }
        rhs += Rat::new(1.into(), (*q).into());
    }
    Ok(BmyReport::new(sq / rat(3), rhs))
}

/// `|Gamma|` of the cyclic quotient singularity obtained by contracting a
/// negative definite chain: the chain's discriminant. Refuses non-chains.
pub fn quotient_order_of_chain(
    g: &DivisorGraph,
    ids: &BTreeSet<CompId>,
) -> Result<num_bigint::BigInt, Error> {
    if !ids.is_empty() {
        let degs: Vec<usize> = ids
            .iter()
            .map(|id| g.neighbors(*id).iter().filter(|(n, _)| ids.contains(n)).count())
            .collect();
        let tips = degs.iter().filter(|d| **d <= 1).count();
        if degs.iter().any(|d| *d > 2) || (ids.len() > 1 && tips != 2) {
            return Err(Error::NotAChain(
                "quotient order is only computed for chains".into(),
            ));
        }
    }
    if !crate::graph::is_negative_definite(g, ids)? {
        return Err(Error::NotNegativeDefinite);
    }
    crate::twig::discriminant(g, ids)
}

/// The specialized BMY form: `P^2 = p_2 + i - 2 + ind(D') <= 3`.
pub fn bmy_specialized(p2: i64, i: i64, ind: &Rat) -> BmyReport {
    BmyReport::new(rat(p2 + i - 2) + ind.clone(), rat(3))
}

fn de_string<'de, D>(deserializer: D) -> Result<Option<Rat>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    let s: Option<String> = Option::deserialize(deserializer)?;
    match s {
        None => Ok(None),
        Some(s) => rat_from_str(&s).map(Some).map_err(serde::de::Error::custom),
    }
}

fn ser_string<S>(v: &Option<Rat>, serializer: S) -> Result<S::Ok, S::Error>
where
    S: serde::Serializer,
{
    match v {
        None => serializer.serialize_none(),
        Some(r) => serializer.serialize_some(&rat_to_string(r)),
    }
}

/// The scalar parameters of the minimalization bookkeeping. Required fields
/// describe every run; the optional ones are only needed by the checks that
/// mention them and are reported as missing by name otherwise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MmpParams {
    pub p2: i64,
    pub zeta: i64,
    pub gamma_n: i64,
    pub tau_star: i64,
    pub n0: i64,
    pub n1: i64,
    pub eta0: i64,
    pub eta1: i64,
    pub c: i64,
    pub s: i64,
    pub n_exc: i64,
    pub k_dot_rn: i64,
    pub sharp_c_plus: i64,
    #[serde(default)]
    pub k_dot_cplus: i64,
    #[serde(default)]
    pub rho_n: Option<i64>,
    #[serde(default)]
    pub sharp_d_n: Option<i64>,
    #[serde(default)]
    pub step_index: Option<i64>,
    #[serde(default, deserialize_with = "de_string", serialize_with = "ser_string")]
    pub ind: Option<Rat>,
    #[serde(default, deserialize_with = "de_string", serialize_with = "ser_string")]
    pub delta: Option<Rat>,
    #[serde(default)]
    pub twig_count: Option<i64>,
    #[serde(default)]
    pub m_e: Option<i64>,
    #[serde(default)]
    pub n1_i: Option<i64>,
    #[serde(default)]
    pub measured_k_kd: Option<i64>,
    #[serde(default)]
    pub measured_e_kd: Option<i64>,
}

impl MmpParams {
    pub fn n(&self) -> i64 {
        self.n0 + self.n1
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.eta0 > self.n0 || self.eta1 > self.n1 {
            return Err(Error::Inadmissible(format!(
                "eta_k <= n_k fails: eta = ({}, {}), n = ({}, {})",
                self.eta0, self.eta1, self.n0, self.n1
            )));
        }
        Ok(())
    }
}

/// Residuals of the two push-forward identities
/// `K_n.(K_n+D_n) = p_2 - c - tau^* - n` and
/// `E_n.(K_n+D_n) = 2c - 2 + tau^* + n_1`.
pub fn identity_eqs_4_5(
    params: &MmpParams,
    measured_k: i64,
    measured_e: i64,
) -> (i64, i64) {
    let r4 = measured_k - (params.p2 - params.c - params.tau_star - params.n());
    let r5 = measured_e - (2 * params.c - 2 + params.tau_star + params.n1);
    (r4, r5)
}

/// One named inequality with its exact evaluation.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub name: &'static str,
    pub lhs: Rat,
    pub rhs: Rat,
    pub slack: Rat,
    pub satisfied: bool,
    pub is_equality: bool,
}

impl Verdict {
    fn le(name: &'static str, lhs: Rat, rhs: Rat) -> Self {
        let slack = rhs.clone() - lhs.clone();
        let satisfied = !slack.is_negative();
        Verdict { name, lhs, rhs, slack, satisfied, is_equality: false }
    }

    fn eq(name: &'static str, lhs: Rat, rhs: Rat) -> Self {
        let slack = rhs.clone() - lhs.clone();
        let satisfied = slack.is_zero();
        Verdict { name, lhs, rhs, slack, satisfied, is_equality: true }
    }
}

fn need<T: Copy>(v: Option<T>, name: &'static str) -> Result<T, Error> {
    v.ok_or(Error::MissingField(name))
}

fn need_rat(v: &Option<Rat>, name: &'static str) -> Result<Rat, Error> {
    v.clone().ok_or(Error::MissingField(name))
}

/// Evaluates every named inequality the parameters allow; each verdict
/// carries the exact slack. Checks that require an absent optional field
/// fail with that field's name.
pub fn inequality_suite(params: &MmpParams) -> Result<Vec<Verdict>, Error> {
    params.validate()?;
    let p = params;
    let n = p.n();
    let mut out = Vec::new();

    out.push(Verdict::le(
        "minimal-model-bound",
        rat(p.gamma_n + p.tau_star + (p.n1 - p.eta1) + 2 * (p.n0 - p.eta0)),
        rat(2 * p.zeta + 2 * p.p2),
    ));
    out.push(Verdict::eq(
        "contraction-ledger",
        rat(p.k_dot_cplus + p.sharp_c_plus + p.tau_star + (n - p.n_exc) + p.k_dot_rn),
        rat(p.p2 - p.zeta),
    ));
    let half_gt = Rat::new((p.gamma_n + p.tau_star).into(), 2.into());
    out.push(Verdict::le("gamma-window-lower", rat(2), half_gt.clone()));
    out.push(Verdict::le("gamma-window-mid", half_gt, rat(p.zeta + p.p2)));
    out.push(Verdict::le("gamma-window-upper", rat(p.zeta + p.p2), rat(2 * p.p2)));
    out.push(Verdict::le("eta-le-n0", rat(p.eta0), rat(p.n0)));
    out.push(Verdict::le("eta-le-n1", rat(p.eta1), rat(p.n1)));
    if let Some(rho) = p.rho_n {
        out.push(Verdict::le(
            "picard-bound",
            rat(rho),
            rat(8 + 2 * p.p2 + p.c + p.s + p.zeta),
        ));
        out.push(Verdict::le("picard-bound-coarse", rat(rho), rat(20 + 2 * p.c)));
    }
    if let Some(sd) = p.sharp_d_n {
        out.push(Verdict::le(
            "component-bound",
            rat(sd),
            rat(8 + 2 * p.p2 + p.c + p.s + p.zeta + n),
        ));
        out.push(Verdict::le("component-bound-coarse", rat(sd), rat(24 + 2 * p.c)));
    }
    if p.step_index.is_some() || p.ind.is_some() {
        let i = need(p.step_index, "step_index")?;
        let ind = need_rat(&p.ind, "ind")?;
        out.push(Verdict::le("index-budget", rat(p.p2 + i) + ind.clone(), rat(5)));
        out.push(Verdict::le(
            "positive-part-budget",
            rat(p.p2 + i - 2) + ind.clone(),
            rat(3),
        ));
        if let Some(t) = p.twig_count {
            let m_e = need(p.m_e, "m_e")?;
            if m_e < 2 {
                return Err(Error::Inadmissible(format!("m_e = {m_e} but m_e >= 2 is required")));
            }
            let delta = need_rat(&p.delta, "delta")?;
            let n1_i = need(p.n1_i, "n1_i")?;
            let extra = Rat::new(std::cmp::max(n1_i + p.c - 2, 0).into(), m_e.into());
            out.push(Verdict::le(
                "twig-count-bound",
                rat(t + i),
                rat(p.p2) + ind + delta + extra,
            ));
        }
    }
    if let (Some(mk), Some(me)) = (p.measured_k_kd, p.measured_e_kd) {
        let (r4, r5) = identity_eqs_4_5(p, mk, me);
        out.push(Verdict::eq("k-pushforward", rat(mk), rat(mk - r4)));
        out.push(Verdict::eq("e-pushforward", rat(me), rat(me - r5)));
    }
    Ok(out)
}
