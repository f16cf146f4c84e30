//! Blowup/blowdown calculus on dual graphs and the classification of chains
//! contracting to a smooth point.

use crate::graph::{CompId, Component, DivisorGraph};
use crate::par::par_flat_map;
use crate::Error;
use std::collections::BTreeSet;

/// Where a blowup is centered relative to the tracked divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowupSpec {
    /// Center on the intersection of two components (mu = 1 for each).
    Inner(CompId, CompId),
    /// Center on a single component, off its intersections.
    Outer(CompId),
    /// Center off the divisor entirely.
    Free,
}

/// Performs one blowup, returning the new graph and the id of the
/// exceptional `(-1)`-component. `ksq`, when tracked, drops by one.
pub fn blow_up(g: &DivisorGraph, spec: BlowupSpec) -> Result<(DivisorGraph, CompId), Error> {
    let mut out = g.clone();
    let new_id = out.next_id();
    match spec {
        BlowupSpec::Inner(a, b) => {
            let m = out.edge_mult(a, b);
            out.check_id(a)?;
            out.check_id(b)?;
            if a == b || m == 0 {
                return Err(Error::BadBlowupTarget(format!(
                    "inner blowup requires an edge, none between {a} and {b}"
                )));
            }
            out.component_mut(a)?.self_int -= 1;
            out.component_mut(b)?.self_int -= 1;
            out.set_edge(a, b, m - 1);
            out.add_component(Component::new(new_id, -1))?;
            out.add_edge(new_id, a, 1)?;
            out.add_edge(new_id, b, 1)?;
        }
        BlowupSpec::Outer(a) => {
            out.check_id(a)?;
            out.component_mut(a)?.self_int -= 1;
            out.add_component(Component::new(new_id, -1))?;
            out.add_edge(new_id, a, 1)?;
        }
        BlowupSpec::Free => {
            out.add_component(Component::new(new_id, -1))?;
        }
    }
    if let Some(k) = out.ksq {
        out.ksq = Some(k - 1);
    }
    Ok((out, new_id))
}

/// Contracts a `(-1)`-component with total incident multiplicity at most 2.
/// Neighbors `A`, `B` gain `(A.C)(B.C)` on their mutual edge and `(A.C)^2`
/// on their self-intersection; `ksq` rises by one.
pub fn contract_minus_one(g: &DivisorGraph, id: CompId) -> Result<DivisorGraph, Error> {
    let c = g.component(id)?;
    if c.self_int != -1 {
        return Err(Error::NotMinusOne(id));
    }
    let nb = g.neighbors(id);
    let total: u32 = nb.iter().map(|(_, m)| m).sum();
    if total > 2 {
        return Err(Error::TooManyBranches(id, total));
    }
    let mut out = g.clone();
    out.remove_component(id);
    for (i, (a, ma)) in nb.iter().enumerate() {
        out.component_mut(*a)?.self_int += (*ma as i64) * (*ma as i64);
        for (b, mb) in nb.iter().skip(i + 1) {
            let cur = out.edge_mult(*a, *b);
            out.set_edge(*a, *b, cur + ma * mb);
        }
    }
    if let Some(k) = out.ksq {
        out.ksq = Some(k + 1);
    }
    Ok(out)
}

/// Iterated contraction test on the induced subgraph of `t`. Returns the
/// contraction trace when `t` empties; the `(-1)`-curve of smallest id is
/// contracted first, so traces are deterministic.
///
/// Unlike [`contract_minus_one`] this is a purely numerical oracle: it
/// applies the projection-formula bookkeeping `A.B += (A.C)(B.C)` with no
/// cap on the incidences, since intermediate stages of a contraction to a
/// smooth point may leave the snc category (several components through one
/// point). Chains never do, so on chains the two notions agree.
pub fn contracts_to_smooth_point(
    g: &DivisorGraph,
    t: &BTreeSet<CompId>,
) -> Result<(bool, Vec<CompId>), Error> {
    let mut sub = DivisorGraph::new();
    for id in t {
        let c = g.component(*id)?;
        sub.add_component(c.clone())?;
    }
    for (a, b, m) in g.edges() {
        if t.contains(&a) && t.contains(&b) {
            sub.add_edge(a, b, m)?;
        }
    }
    let mut trace = Vec::new();
    loop {
        if sub.is_empty() {
            return Ok((true, trace));
        }
        let pick = sub.ids().find(|id| sub.component(*id).unwrap().self_int == -1);
        match pick {
            Some(id) => {
                let nb = sub.neighbors(id);
                sub.remove_component(id);
                for (i, (a, ma)) in nb.iter().enumerate() {
                    sub.component_mut(*a)?.self_int += (*ma as i64) * (*ma as i64);
                    for (b, mb) in nb.iter().skip(i + 1) {
                        let cur = sub.edge_mult(*a, *b);
                        sub.set_edge(*a, *b, cur + ma * mb);
                    }
                }
                trace.push(id);
            }
            None => return Ok((false, trace)),
        }
    }
}

// --- fast weight-list versions used by the exhaustive sweeps ---------------

/// Contraction oracle on a chain given by its bracket weights. Pure i64, no graph
/// allocation; used by the brute-force sweeps.
pub fn chain_contracts(weights: &[i64]) -> bool {
    let mut w: Vec<i64> = weights.to_vec();
    loop {
        if w.is_empty() {
            return true;
        }
        match w.iter().position(|x| *x == 1) {
            None => return false,
            Some(i) => {
                // contract: neighbors each gain +1 and become adjacent
                if i > 0 {
                    w[i - 1] -= 1;
                }
                if i + 1 < w.len() {
                    w[i + 1] -= 1;
                }
                w.remove(i);
            }
        }
    }
}

/// Leading principal minors of `-Q` of a chain; negative definite iff all
/// are positive, and the full determinant is the last entry.
pub fn chain_minors(weights: &[i64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(weights.len());
    let mut prev2 = 0i64; // d of the (-1)-st minor
    let mut prev = 1i64; // d of empty

    for w in weights {
        let d = w * prev - prev2;
        out.push(d);
        prev2 = prev;
        prev = d;
    }
    out
}

pub fn chain_is_negdef(weights: &[i64]) -> bool {
    chain_minors(weights).iter().all(|m| *m > 0)
}

pub fn chain_det(weights: &[i64]) -> i64 {
    chain_minors(weights).last().copied().unwrap_or(1)
}

/// The exact chain families with small `K.Q` among chains contracting to a
/// smooth point with a unique `(-1)`-curve, printed with the `(2)` run
/// leading. Supported `kq` range is -1..=2; `k` is the number of leading
/// `(2)`s, swept over `0..=k_max`.
pub fn classify_chains_by_k(kq: i64, k_max: usize) -> Result<Vec<Vec<i64>>, Error> {
    let heads: Vec<Vec<i64>> = match kq {
        -1 => vec![vec![1]],
        0 => vec![vec![3, 1, 2]],
        1 => vec![vec![4, 1, 2, 2], vec![3, 2, 1, 3]],
        2 => vec![
            vec![5, 1, 2, 2, 2],
            vec![4, 2, 1, 3, 2],
            vec![3, 3, 1, 2, 3],
            vec![3, 2, 2, 1, 4],
        ],
        other => {
            return Err(Error::Format(format!(
                "classify_chains_by_k supports kq in -1..=2, got {other}"
            )))
        }
    };
    let mut out = Vec::new();
    for k in 0..=k_max {
        for head in &heads {
            let mut chain = vec![2i64; k];
            chain.extend_from_slice(head);
            out.push(chain);
        }
    }
    Ok(out)
}

fn unique_minus_one(weights: &[i64]) -> bool {
    weights.iter().filter(|w| **w == 1).count() == 1
}

/// Which of the two parameter families of contractible unique-(-1) chains a
/// chain matches, up to reversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyMatch {
    pub first: bool,
    pub second: bool,
    /// Matched only through the `[3,(2)_{-1}] = empty` convention (x = -1).
    pub only_via_empty_convention: bool,
}

impl FamilyMatch {
    pub fn matched(&self) -> bool {
        self.first || self.second
    }
}

fn family_first(k: usize, m: &[usize], x: i64) -> Vec<i64> {
    // [m_{2k}+3,(2)_{m_{2k-1}},...,m_2+3,(2)_{m_1},1,m_1+2,(2)_{m_2},m_3+3,
    //  ...,m_{2k-1}+3,(2)_{m_{2k}},3,(2)_x]; x = -1 drops the trailing 3.
    let mi = |j: usize| m[j - 1] as i64;
    let reps = |j: usize| m[j - 1];
    let mut out: Vec<i64> = Vec::new();
    for j in (1..=k).rev() {
        out.push(mi(2 * j) + 3);
        out.extend(std::iter::repeat_n(2, reps(2 * j - 1)));
    }
    out.push(1);
    out.push(mi(1) + 2);
    for j in 1..=k {
        out.extend(std::iter::repeat_n(2, reps(2 * j)));
        if j < k {
            out.push(mi(2 * j + 1) + 3);
        }
    }
    if x >= 0 {
        out.push(3);
        out.extend(std::iter::repeat_n(2, x as usize));
    }
    out
}

fn family_second(k: usize, m: &[usize], x: usize) -> Vec<i64> {
    // [(2)_{m_{2k}},m_{2k-1}+3,...,m_3+3,(2)_{m_2},m_1+2,1,(2)_{m_1},m_2+3,
    //  ...,(2)_{m_{2k-1}},m_{2k}+3,(2)_x]; k = 0 degenerates to [1,(2)_x].
    let mi = |j: usize| m[j - 1] as i64;
    let reps = |j: usize| m[j - 1];
    let mut out: Vec<i64> = Vec::new();
    if k >= 1 {
        out.extend(std::iter::repeat_n(2, reps(2 * k)));
        for j in (2..=k).rev() {
            out.push(mi(2 * j - 1) + 3);
            out.extend(std::iter::repeat_n(2, reps(2 * j - 2)));
        }
        out.push(mi(1) + 2);
    }
    out.push(1);
    for j in 1..=k {
        out.extend(std::iter::repeat_n(2, reps(2 * j - 1)));
        out.push(mi(2 * j) + 3);
    }
    out.extend(std::iter::repeat_n(2, x));
    out
}

fn compositions(total: usize, parts: usize, cap: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total.min(cap) {
        for mut rest in compositions(total - first, parts - 1, cap) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// All chains of both families with length <= `max_len`, as canonical
/// (chain, family-index, used-empty-convention) entries.
fn generate_families(max_len: usize) -> Vec<(Vec<i64>, u8, bool)> {
    let mut out = Vec::new();
    // family lengths grow with k and the m_i; everything beyond these caps
    // exceeds max_len
    for k in 1..=max_len / 2 {
        if 2 * k + 1 > max_len {
            break;
        }
        for msum in 0..=max_len {
            for m in compositions(msum, 2 * k, max_len) {
                for x in -1..=(max_len as i64) {
                    let chain = family_first(k, &m, x);
                    if chain.len() <= max_len {
                        out.push((chain, 1u8, x == -1));
                    }
                }
            }
        }
    }
    for k in 0..=max_len / 2 {
        if 2 * k + 1 > max_len {
            break;
        }
        for msum in 0..=max_len {
            for m in compositions(msum, 2 * k, max_len) {
                for x in 0..=max_len {
                    let chain = family_second(k, &m, x);
                    if chain.len() <= max_len {
                        out.push((chain, 2u8, false));
                    }
                }
            }
        }
    }
    out
}

fn canon_chain(w: &[i64]) -> Vec<i64> {
    let rev: Vec<i64> = w.iter().rev().copied().collect();
    if rev.as_slice() < w {
        rev
    } else {
        w.to_vec()
    }
}

/// Report for one enumerated contractible chain.
#[derive(Debug, Clone)]
pub struct ChainReport {
    pub weights: Vec<i64>,
    pub family: FamilyMatch,
}

/// Brute-force enumeration of all chains up to `max_len` with weights in
/// `[1, max_weight]` that contract to a smooth point and contain a unique
/// `(-1)`-curve, de-duplicated up to reversal and matched against the two
/// parameter families. Negative definiteness and determinant 1 are used as a
/// pre-filter before the contraction oracle (the equivalence is itself under
/// test elsewhere, so the oracle still runs on every survivor).
pub fn enumerate_contractible_chains(
    max_len: usize,
    max_weight: i64,
) -> Result<Vec<ChainReport>, Error> {
    if max_len > 12 {
        return Err(Error::BoundTooLarge(max_len as u64, 12));
    }
    let families = generate_families(max_len);
    let mut matched_first: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut matched_second: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut via_convention: BTreeSet<Vec<i64>> = BTreeSet::new();
    for (chain, fam, conv) in families {
        let c = canon_chain(&chain);
        if fam == 1 {
            if conv {
                // remember chains reachable only with x = -1 separately
                via_convention.insert(c.clone());
            } else {
                matched_first.insert(c);
            }
        } else {
            matched_second.insert(c);
        }
    }

    let mut hits: Vec<Vec<i64>> = Vec::new();
    for len in 1..=max_len {
        let found = sweep_chains(len, max_weight, |w| {
            unique_minus_one(w) && chain_is_negdef(w) && chain_det(w) == 1 && chain_contracts(w)
        });
        hits.extend(found);
    }
    let unique: BTreeSet<Vec<i64>> = hits.iter().map(|w| canon_chain(w)).collect();
    Ok(unique
        .into_iter()
        .map(|weights| {
            let first = matched_first.contains(&weights);
            let second = matched_second.contains(&weights);
            let only_conv = !first && !second && via_convention.contains(&weights);
            ChainReport {
                weights,
                family: FamilyMatch {
                    first: first || only_conv,
                    second,
                    only_via_empty_convention: only_conv,
                },
            }
        })
        .collect())
}

/// Sweeps every weight vector of the given length with entries in
/// `[1, max_weight]`, collecting those accepted by `pred`. Partitioned on
/// the leading coordinates for the parallel build; the merged result is
/// sorted, so output is independent of the execution schedule.
pub fn sweep_chains<F>(len: usize, max_weight: i64, pred: F) -> Vec<Vec<i64>>
where
    F: Fn(&[i64]) -> bool + Sync,
{
    // fix enough leading coordinates to give the scheduler real chunks
    let fixed = if len >= 3 { 2 } else { len.min(1) };
    let mut heads: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..fixed {
        heads = heads
            .into_iter()
            .flat_map(|h| {
                (1..=max_weight).map(move |w| {
                    let mut h2 = h.clone();
                    h2.push(w);
                    h2
                })
            })
            .collect();
    }
    let mut res = par_flat_map(&heads, |head| {
        let mut out = Vec::new();
        let mut w = vec![1i64; len];
        w[..fixed].copy_from_slice(head);
        loop {
            if pred(&w) {
                out.push(w.clone());
            }
            // odometer over positions fixed..len
            let mut pos = len;
            loop {
                if pos == fixed {
                    return out;
                }
                pos -= 1;
                if w[pos] < max_weight {
                    w[pos] += 1;
                    break;
                }
                w[pos] = 1;
            }
        }
    });
    res.sort_unstable();
    res
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blow_up_outer_and_ksq() {
        let mut g = DivisorGraph::chain(&[2]);
        g.ksq = Some(9);
        let (h, e) = blow_up(&g, BlowupSpec::Outer(0)).unwrap();
        assert_eq!(h.component(0).unwrap().self_int, -3);
        assert_eq!(h.component(e).unwrap().self_int, -1);
        assert_eq!(h.edge_mult(0, e), 1);
        assert_eq!(h.ksq, Some(8));
    }

    #[test]
    fn blow_up_inner_resolves_tangency() {
        // [1] meeting E with multiplicity 2
        let mut g = DivisorGraph::new();
        g.add_component(Component::new(0, -1)).unwrap();
        g.add_component(Component { id: 1, self_int: 1, label: None, is_e: true }).unwrap();
        g.add_edge(0, 1, 2).unwrap();
        let (h, e) = blow_up(&g, BlowupSpec::Inner(0, 1)).unwrap();
        assert_eq!(h.edge_mult(0, 1), 1);
        assert_eq!(h.edge_mult(e, 0), 1);
        assert_eq!(h.edge_mult(e, 1), 1);
        assert_eq!(h.component(0).unwrap().self_int, -2);
        assert_eq!(h.component(1).unwrap().self_int, 0);
    }

    #[test]
    fn contract_chain_213_to_empty() {
        let g = DivisorGraph::chain(&[2, 1, 3]);
        let h = contract_minus_one(&g, 1).unwrap();
        let mut ws: Vec<i64> = h.components().map(|c| -c.self_int).collect();
        ws.sort_unstable();
        assert_eq!(ws, vec![1, 2]);
        assert_eq!(h.edge_mult(0, 2), 1);
        let all: BTreeSet<CompId> = g.ids().collect();
        let (ok, trace) = contracts_to_smooth_point(&g, &all).unwrap();
        assert!(ok);
        assert_eq!(trace.len(), 3);
    }

    #[test]
    fn contract_tangential_adds_four() {
        let mut g = DivisorGraph::new();
        g.add_component(Component::new(0, -1)).unwrap();
        g.add_component(Component { id: 1, self_int: 1, label: None, is_e: true }).unwrap();
        g.add_edge(0, 1, 2).unwrap();
        let h = contract_minus_one(&g, 0).unwrap();
        assert_eq!(h.component(1).unwrap().self_int, 5);
    }

    #[test]
    fn contract_refuses_branching() {
        let mut g = DivisorGraph::chain(&[2, 1, 3]);
        g.add_component(Component::new(3, -2)).unwrap();
        g.add_edge(1, 3, 1).unwrap();
        assert!(matches!(contract_minus_one(&g, 1), Err(Error::TooManyBranches(1, 3))));
        assert!(matches!(contract_minus_one(&g, 0), Err(Error::NotMinusOne(0))));
    }

    #[test]
    fn blow_up_then_contract_is_identity() {
        let mut g = DivisorGraph::chain(&[2, 1, 3]);
        g.ksq = Some(7);
        for spec in [BlowupSpec::Inner(0, 1), BlowupSpec::Outer(2), BlowupSpec::Free] {
            let (h, e) = blow_up(&g, spec).unwrap();
            let back = contract_minus_one(&h, e).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn pullback_rule_matches_matrix_conjugation() {
        // after an inner blowup on edge (a,b), strict transforms pair as
        // A.B - mu_A mu_B with mu = 1 on the two centers, mu = 0 elsewhere,
        // and the exceptional curve pairs as (mu_i, -1)
        let g = DivisorGraph::chain(&[2, 3, 4]);
        let (h, e) = blow_up(&g, BlowupSpec::Inner(0, 1)).unwrap();
        let mu = [1i64, 1, 0];
        for i in 0..3u32 {
            for j in 0..3u32 {
                let before = g.pairing(i, j);
                let expect = before - mu[i as usize] * mu[j as usize];
                assert_eq!(h.pairing(i, j), expect, "pairing {i}.{j}");
            }
            assert_eq!(h.pairing(i, e), mu[i as usize]);
        }
        assert_eq!(h.pairing(e, e), -1);
    }

    #[test]
    fn chains_by_k_examples() {
        let v = classify_chains_by_k(2, 0).unwrap();
        assert_eq!(
            v,
            vec![
                vec![5, 1, 2, 2, 2],
                vec![4, 2, 1, 3, 2],
                vec![3, 3, 1, 2, 3],
                vec![3, 2, 2, 1, 4],
            ]
        );
        let v = classify_chains_by_k(-1, 3).unwrap();
        assert_eq!(v[3], vec![2, 2, 2, 1]);
        assert!(classify_chains_by_k(3, 1).is_err());
    }

    #[test]
    fn emitted_chains_contract_and_have_stated_k() {
        for kq in -1..=2i64 {
            for chain in classify_chains_by_k(kq, 5).unwrap() {
                assert!(chain_contracts(&chain), "{chain:?} must contract");
                assert!(unique_minus_one(&chain));
                assert_eq!(chain_det(&chain), 1);
                let k: i64 = chain.iter().map(|w| w - 2).sum();
                assert_eq!(k, kq, "K.Q of {chain:?}");
            }
        }
    }

    #[test]
    fn enumerate_small_chains() {
        let reports = enumerate_contractible_chains(3, 4).unwrap();
        let chains: Vec<Vec<i64>> = reports.iter().map(|r| r.weights.clone()).collect();
        assert!(chains.contains(&vec![1]));
        assert!(chains.contains(&canon_chain(&[2, 1, 3])));
        assert!(chains.contains(&vec![1, 2]) || chains.contains(&vec![2, 1]));
        for r in &reports {
            assert_eq!(chain_det(&r.weights), 1);
            assert!(r.family.matched(), "{:?} unmatched", r.weights);
        }
    }

    #[test]
    fn family_generators_spot_checks() {
        // family 2, k = 1, m = (0,0), x = 0 gives [2,1,3]
        assert_eq!(family_second(1, &[0, 0], 0), vec![2, 1, 3]);
        // family 2, k = 1, m = (1,0), x = 0 gives [3,1,2,3]
        assert_eq!(family_second(1, &[1, 0], 0), vec![3, 1, 2, 3]);
        // family 2, k = 0 gives [1,(2)_x]
        assert_eq!(family_second(0, &[], 2), vec![1, 2, 2]);
        // family 1, k = 1, m = (0,0), x = -1 gives [3,1,2]
        assert_eq!(family_first(1, &[0, 0], -1), vec![3, 1, 2]);
        for (chain, _, _) in generate_families(8) {
            assert!(chain_contracts(&chain), "family chain {chain:?} must contract");
            assert!(unique_minus_one(&chain), "family chain {chain:?} unique -1");
        }
    }
}
