//! Characteristic (Hamburger-Noether) pairs: expansion to multiplicity
//! sequences, blowup simulation of germ resolutions, inversion from graphs,
//! and the degree/genus equations.

use crate::birational::{blow_up, contract_minus_one, BlowupSpec};
use crate::graph::{self, CompId, DivisorGraph};
use crate::twig::chain_discriminant;
use crate::Error;
use num_integer::Integer;
use std::collections::BTreeSet;
use std::fmt;

/// One characteristic pair `(c, p)` with `p <= c`. The smooth germ is the
/// single pair `(1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CharPair {
    pub c: u64,
    pub p: u64,
}

impl CharPair {
    pub fn new(c: u64, p: u64) -> Result<Self, Error> {
        if c == 0 || p > c {
            return Err(Error::Inadmissible(format!("pair ({c},{p}) needs 0 < p <= c")));
        }
        Ok(CharPair { c, p })
    }
}

/// An admissible sequence of characteristic pairs describing one cusp's
/// resolution: `c_{i+1} = gcd(c_i, p_i)`, `p_{i+1} <= c_{i+1}`, and the last
/// pair is coprime.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CharPairSeq {
    pairs: Vec<CharPair>,
}

impl CharPairSeq {
    pub fn new(pairs: Vec<CharPair>) -> Result<Self, Error> {
        let seq = CharPairSeq { pairs };
        seq.validate()?;
        Ok(seq)
    }

    pub fn from_list(list: &[(u64, u64)]) -> Result<Self, Error> {
        Self::new(list.iter().map(|(c, p)| CharPair { c: *c, p: *p }).collect())
    }

    pub fn smooth() -> Self {
        CharPairSeq { pairs: vec![CharPair { c: 1, p: 0 }] }
    }

    pub fn pairs(&self) -> &[CharPair] {
        &self.pairs
    }

    pub fn is_smooth(&self) -> bool {
        self.pairs.len() == 1 && self.pairs[0] == CharPair { c: 1, p: 0 }
    }

    /// Singular means some blowup is forced: either a first pair with
    /// `p >= 2` or any `(1,1)` blocks.
    pub fn is_singular_germ(&self) -> bool {
        !self.is_smooth()
    }

    fn validate(&self) -> Result<(), Error> {
        if self.pairs.is_empty() {
            return Err(Error::Inadmissible("empty sequence".into()));
        }
        if self.is_smooth() {
            return Ok(());
        }
        for (i, pr) in self.pairs.iter().enumerate() {
            if pr.p == 0 || pr.p > pr.c {
                return Err(Error::Inadmissible(format!(
                    "pair {} is ({},{}); need 0 < p <= c",
                    i + 1,
                    pr.c,
                    pr.p
                )));
            }
            if i + 1 < self.pairs.len() {
                let g = pr.c.gcd(&pr.p);
                if self.pairs[i + 1].c != g {
                    return Err(Error::Inadmissible(format!(
                        "c_{} = {} but gcd(c_{},p_{}) = {}",
                        i + 2,
                        self.pairs[i + 1].c,
                        i + 1,
                        i + 1,
                        g
                    )));
                }
            }
        }
        let last = self.pairs.last().unwrap();
        if last.c.gcd(&last.p) != 1 {
            return Err(Error::Inadmissible(format!(
                "last pair ({},{}) is not coprime",
                last.c, last.p
            )));
        }
        Ok(())
    }

    /// Parses `(c1,p1)(c2,p2)...`, whitespace-insensitive.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pairs = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| Error::Format(format!("expected (c,p) at {rest:?}")))?;
            let (body, tail) = inner;
            let (c, p) = body
                .split_once(',')
                .ok_or_else(|| Error::Format(format!("expected c,p in ({body})")))?;
            let c: u64 = c.parse().map_err(|_| Error::Format(format!("bad integer {c:?}")))?;
            let p: u64 = p.parse().map_err(|_| Error::Format(format!("bad integer {p:?}")))?;
            pairs.push(CharPair { c, p });
            rest = tail;
        }
        Self::new(pairs)
    }

    /// Count of trailing `(1,1)` pairs (the tip-convention tail).
    pub fn tail_ones(&self) -> usize {
        self.pairs
            .iter()
            .rev()
            .take_while(|pr| pr.c == 1 && pr.p == 1)
            .count()
    }
}

impl fmt::Display for CharPairSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pr in &self.pairs {
            write!(f, "({},{})", pr.c, pr.p)?;
        }
        Ok(())
    }
}

/// Multiplicities of the blowup centers realizing one pair, by subtractive
/// Euclid; ends when the pair becomes equal (one last center of that
/// multiplicity).
pub fn expand_block(c: u64, p: u64) -> Vec<u64> {
    if p == 0 {
        return Vec::new();
    }
    let (mut c, mut p) = (c, p);
    let mut out = Vec::new();
    loop {
        out.push(p);
        if c == p {
            return out;
        }
        let r = c - p;
        if r >= p {
            c = r;
        } else {
            c = p;
            p = r;
        }
    }
}

/// The multiplicity sequence of the germ: per-pair expansions concatenated
/// over the blocks. First entry is `p_1`, the multiplicity of the cusp.
pub fn multiplicity_sequence(seq: &CharPairSeq) -> Result<Vec<u64>, Error> {
    seq.validate()?;
    Ok(seq.pairs().iter().flat_map(|pr| expand_block(pr.c, pr.p)).collect())
}

/// Global invariants of one cusp.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspInvariants {
    /// `M = c_1 + sum p_j - 1`
    pub m: i64,
    /// `I = sum c_j p_j`
    pub i: i64,
    pub mult_seq: Vec<u64>,
}

/// Computes `M`, `I` and the multiplicity sequence, verifying per block that
/// `sum mu = c + p - gcd(c,p)` and `sum mu^2 = c p` hold exactly.
pub fn cusp_invariants(seq: &CharPairSeq) -> Result<CuspInvariants, Error> {
    seq.validate()?;
    if seq.is_smooth() {
        return Ok(CuspInvariants { m: 0, i: 0, mult_seq: Vec::new() });
    }
    let mut m: i64 = seq.pairs()[0].c as i64 - 1;
    let mut i_total: i64 = 0;
    let mut mult_seq = Vec::new();
    for pr in seq.pairs() {
        let block = expand_block(pr.c, pr.p);
        let g = pr.c.gcd(&pr.p);
        let sum: u64 = block.iter().sum();
        let sum_sq: u64 = block.iter().map(|x| x * x).sum();
        if sum != pr.c + pr.p - g || sum_sq != pr.c * pr.p {
            return Err(Error::Internal(format!(
                "block identities fail for ({},{}): sum {}, sum of squares {}",
                pr.c, pr.p, sum, sum_sq
            )));
        }
        m += pr.p as i64;
        i_total += (pr.c * pr.p) as i64;
        mult_seq.extend(block);
    }
    Ok(CuspInvariants { m, i: i_total, mult_seq })
}

// --- blowup simulation ------------------------------------------------------

/// Where the germ currently sits: on an auxiliary curve (the initial
/// maximally tangent germ / coordinate choices, never part of the graph) or
/// on an exceptional component, with the local intersection index.
#[derive(Debug, Clone, Copy)]
enum Slot {
    Aux(u64),
    Curve(CompId, u64),
}

impl Slot {
    fn contact(&self) -> u64 {
        match self {
            Slot::Aux(c) => *c,
            Slot::Curve(_, c) => *c,
        }
    }

    fn with_contact(&self, c: u64) -> Slot {
        match self {
            Slot::Aux(_) => Slot::Aux(c),
            Slot::Curve(id, _) => Slot::Curve(*id, c),
        }
    }

    fn curve(&self) -> Option<CompId> {
        match self {
            Slot::Aux(_) => None,
            Slot::Curve(id, _) => Some(*id),
        }
    }
}

/// Result of resolving a germ from its pair sequence.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub graph: DivisorGraph,
    /// Exceptional components the germ's proper transform meets, with local
    /// intersection multiplicities. For a full log resolution this is one
    /// transversal point on the unique `(-1)`-curve.
    pub attach: Vec<(CompId, u64)>,
    /// Multiplicities of the performed blowups, in order.
    pub performed_mu: Vec<u64>,
}

fn simulate(seq: &CharPairSeq, weak_only: bool) -> Result<Resolution, Error> {
    seq.validate()?;
    let mut g = DivisorGraph::new();
    let mut performed: Vec<u64> = Vec::new();
    let mut state: Vec<Slot> = Vec::new();
    if seq.is_smooth() {
        return Ok(Resolution { graph: g, attach: Vec::new(), performed_mu: performed });
    }
    'blocks: for (bi, pr) in seq.pairs().iter().enumerate() {
        if bi == 0 {
            state = vec![Slot::Aux(pr.c), Slot::Aux(pr.p)];
        } else {
            // the germ sits alone on the last exceptional curve with contact
            // gcd of the previous pair = c of this one
            debug_assert_eq!(state.len(), 1);
            debug_assert_eq!(state[0].contact(), pr.c);
            state.push(Slot::Aux(pr.p));
        }
        while state.len() == 2 {
            let (a, b) = (state[0].contact(), state[1].contact());
            let mu = a.min(b);
            if weak_only && mu == 1 {
                break 'blocks;
            }
            let spec = match (state[0].curve(), state[1].curve()) {
                (Some(x), Some(y)) => BlowupSpec::Inner(x, y),
                (Some(x), None) | (None, Some(x)) => BlowupSpec::Outer(x),
                (None, None) => BlowupSpec::Free,
            };
            let (next, z) = blow_up(&g, spec)?;
            g = next;
            performed.push(mu);
            state = if a == b {
                vec![Slot::Curve(z, a)]
            } else if a > b {
                vec![state[0].with_contact(a - b), Slot::Curve(z, b)]
            } else {
                vec![state[1].with_contact(b - a), Slot::Curve(z, a)]
            };
        }
    }
    let attach: Vec<(CompId, u64)> = state
        .iter()
        .filter_map(|s| s.curve().map(|id| (id, s.contact())))
        .collect();
    Ok(Resolution { graph: g, attach, performed_mu: performed })
}

/// Dual graph of the minimal log resolution's exceptional divisor over one
/// singular germ; exactly one `(-1)`-curve, met transversally by the germ's
/// proper transform.
pub fn build_exceptional_graph(seq: &CharPairSeq) -> Result<Resolution, Error> {
    if !seq.is_singular_germ() {
        return Err(Error::Inadmissible("smooth germ has no exceptional divisor".into()));
    }
    let res = simulate(seq, false)?;
    let minus_ones: Vec<CompId> = res
        .graph
        .components()
        .filter(|c| c.self_int == -1)
        .map(|c| c.id)
        .collect();
    if minus_ones.len() != 1 || res.attach.len() != 1 || res.attach[0].1 != 1 {
        return Err(Error::Internal(format!(
            "log resolution of {seq} ended with (-1)-curves {minus_ones:?}, attach {:?}",
            res.attach
        )));
    }
    Ok(res)
}

/// Graph of the minimal weak resolution (exactly the blowups of multiplicity
/// bigger than 1). The germ's transform may meet the last exceptional curve
/// with multiplicity > 1 (tangency); for pair sequences without a `(1,1)`
/// tail that multiplicity equals the number of multiplicity-1 blowups the
/// weak resolution skips, which is checked here against the full expansion.
pub fn build_weak_resolution_graph(seq: &CharPairSeq) -> Result<Resolution, Error> {
    let res = simulate(seq, true)?;
    let total = multiplicity_sequence(seq)?.len();
    let skipped = total - res.performed_mu.len();
    if seq.tail_ones() == 0 && !res.attach.is_empty() {
        let last = res
            .attach
            .iter()
            .max_by_key(|(id, _)| *id)
            .expect("attach nonempty");
        if last.1 as usize != skipped {
            return Err(Error::Internal(format!(
                "weak tangency contract fails for {seq}: contact {} vs {} skipped blowups",
                last.1, skipped
            )));
        }
    }
    Ok(res)
}

/// Printed weight list of a resolution chain: the unique `(-1)`-curve in the
/// middle, the side of smaller discriminant first; a `(-1)`-tip goes last.
pub fn chain_weights_printed(g: &DivisorGraph) -> Result<Vec<i64>, Error> {
    let ids: BTreeSet<CompId> = g.ids().collect();
    let order = ordered_chain_or_err(g, &ids)?;
    let weights: Vec<i64> = order.iter().map(|id| -g.component(*id).unwrap().self_int).collect();
    let pos = weights
        .iter()
        .position(|w| *w == 1)
        .ok_or_else(|| Error::NotAChain("no (-1)-curve in chain".into()))?;
    if weights.iter().filter(|w| **w == 1).count() != 1 {
        return Err(Error::NotAChain("multiple (-1)-curves".into()));
    }
    let left = chain_discriminant(&weights[..pos]);
    let right = chain_discriminant(&weights[pos + 1..]);
    let reversed: Vec<i64> = weights.iter().rev().copied().collect();
    if pos == 0 || pos == weights.len() - 1 {
        // (-1)-tip: print it last
        return Ok(if pos == 0 { reversed } else { weights });
    }
    Ok(if left <= right { weights } else { reversed })
}

fn ordered_chain_or_err(g: &DivisorGraph, ids: &BTreeSet<CompId>) -> Result<Vec<CompId>, Error> {
    if ids.len() == 1 {
        return Ok(vec![*ids.iter().next().unwrap()]);
    }
    let degs: Vec<usize> = ids.iter().map(|id| g.neighbors(*id).len()).collect();
    if degs.iter().any(|d| *d > 2) || degs.iter().filter(|d| **d == 1).count() != 2 {
        return Err(Error::NotAChain("graph is not a chain".into()));
    }
    g.require_snc()?;
    Ok(graph::chain_order(g, ids))
}

// --- inversion: pairs from a contractible graph ------------------------------

/// Characteristic pairs of an exceptional divisor that contracts to a smooth
/// point and carries a unique `(-1)`-curve. Inverse of
/// [`build_exceptional_graph`] on canonical sequences; a `(-1)`-tip yields a
/// `(1,1)` tail per the tip convention, and an entirely smooth (empty) graph
/// yields `(1,0)`.
pub fn pairs_from_chain(g: &DivisorGraph) -> Result<CharPairSeq, Error> {
    if g.is_empty() {
        return Ok(CharPairSeq::smooth());
    }
    g.require_snc()?;
    // reverse the blowup history: at every stage a valid resolution graph has
    // exactly one (-1)-curve, which was the last blowup
    let mut work = g.clone();
    let mut contracted: Vec<(CompId, Vec<CompId>)> = Vec::new();
    while !work.is_empty() {
        let minus_ones: Vec<CompId> = work
            .components()
            .filter(|c| c.self_int == -1)
            .map(|c| c.id)
            .collect();
        if minus_ones.len() != 1 {
            return Err(Error::NotAChain(format!(
                "expected a unique (-1)-curve, found {}",
                minus_ones.len()
            )));
        }
        let z = minus_ones[0];
        let nb: Vec<CompId> = work.neighbors(z).into_iter().map(|(n, _)| n).collect();
        work = contract_minus_one(&work, z)?;
        contracted.push((z, nb));
    }
    // creation order is the reverse; mu via proximity: each later center on a
    // curve contributes its multiplicity, the germ contributes 1 to the last
    let creations: Vec<(CompId, Vec<CompId>)> = contracted.into_iter().rev().collect();
    let mut mu: Vec<u64> = vec![0; creations.len()];
    for i in (0..creations.len()).rev() {
        let mut m: u64 = if i == creations.len() - 1 { 1 } else { 0 };
        for (j, (_, nbs)) in creations.iter().enumerate().skip(i + 1) {
            if nbs.contains(&creations[i].0) {
                m += mu[j];
            }
        }
        mu[i] = m;
    }
    let pairs = pairs_from_mu(&mu).ok_or_else(|| {
        Error::Internal(format!("no admissible block structure for multiplicities {mu:?}"))
    })?;
    let seq = CharPairSeq::new(pairs)?;
    Ok(canonicalize(seq))
}

/// Greedy longest-block reconstruction: `p` is the first multiplicity of a
/// block, `c = sum(mu) - p + last(mu)` over it, and each following block must
/// open with `c = gcd` of the previous pair.
fn pairs_from_mu(mu: &[u64]) -> Option<Vec<CharPair>> {
    fn go(mu: &[u64], required_c: Option<u64>) -> Option<Vec<CharPair>> {
        if mu.is_empty() {
            return Some(Vec::new());
        }
        let p = mu[0];
        for len in (1..=mu.len()).rev() {
            let block = &mu[..len];
            let sum: u64 = block.iter().sum();
            let c = sum - p + block[len - 1];
            if p > c {
                continue;
            }
            if let Some(rc) = required_c {
                if c != rc {
                    continue;
                }
            }
            if expand_block(c, p) != block {
                continue;
            }
            if let Some(rest) = go(&mu[len..], Some(c.gcd(&p))) {
                let mut v = vec![CharPair { c, p }];
                v.extend(rest);
                return Some(v);
            }
        }
        None
    }
    go(mu, None)
}

/// Normal form: a smooth-germ head `(c,1)` is the same resolution as `c`
/// single blowups along the germ, written `(1,1)_c`.
fn canonicalize(seq: CharPairSeq) -> CharPairSeq {
    let pairs = seq.pairs();
    if pairs[0].p == 1 && pairs[0].c > 1 {
        let mut v = vec![CharPair { c: 1, p: 1 }; pairs[0].c as usize];
        v.extend_from_slice(&pairs[1..]);
        return CharPairSeq::new(v).expect("(1,1) tail stays admissible");
    }
    seq
}

/// Independent oracle for one block `(c, p)`: runs the blowup simulation
/// (graph incidences only, any gcd) and recovers the center multiplicities
/// from the proximity structure instead of the subtractive recursion. Each
/// center's multiplicity is the sum of the multiplicities of the later
/// centers lying on its curve, plus the final contact of the germ.
pub fn block_mu_oracle(c: u64, p: u64) -> Vec<u64> {
    assert!(p >= 1 && c >= p);
    // slots: (created-curve index or None for an auxiliary curve, contact)
    let mut incidences: Vec<Vec<usize>> = Vec::new();
    let mut slots: Vec<(Option<usize>, u64)> = vec![(None, c), (None, p)];
    while slots.len() == 2 {
        let (ca, a) = slots[0];
        let (cb, b) = slots[1];
        let mut on = Vec::new();
        if let Some(i) = ca {
            on.push(i);
        }
        if let Some(i) = cb {
            on.push(i);
        }
        let z = incidences.len();
        incidences.push(on);
        slots = if a == b {
            vec![(Some(z), a)]
        } else if a > b {
            vec![(Some(z), b), (ca, a - b)]
        } else {
            vec![(Some(z), a), (cb, b - a)]
        };
    }
    let attach = slots[0];
    let mut mu = vec![0u64; incidences.len()];
    for i in (0..incidences.len()).rev() {
        let mut m = if attach.0 == Some(i) { attach.1 } else { 0 };
        for (j, on) in incidences.iter().enumerate().skip(i + 1) {
            if on.contains(&i) {
                m += mu[j];
            }
        }
        mu[i] = m;
    }
    mu
}

// --- degree/genus equations --------------------------------------------------

/// Residuals of the three global equations tying degree, `gamma = -E^2` and
/// the per-cusp invariants `(M, I)` with tangency orders `rho`:
/// `gamma - 2 + 3d = sum rho M`, `gamma + d^2 = sum rho^2 I`,
/// `(d-1)(d-2) = sum rho (rho I - M)`. All zero means the configuration is
/// numerically consistent.
pub fn degree_genus_residuals(
    cusps: &[(CharPairSeq, u64)],
    d: i64,
    gamma: i64,
) -> Result<(i64, i64, i64), Error> {
    let mut sum_rm: i64 = 0;
    let mut sum_r2i: i64 = 0;
    let mut sum_mixed: i64 = 0;
    for (seq, rho) in cusps {
        if *rho == 0 {
            return Err(Error::Inadmissible("rho must be positive".into()));
        }
        let inv = cusp_invariants(seq)?;
        let r = *rho as i64;
        sum_rm += r * inv.m;
        sum_r2i += r * r * inv.i;
        sum_mixed += r * (r * inv.i - inv.m);
    }
    Ok((
        gamma - 2 + 3 * d - sum_rm,
        gamma + d * d - sum_r2i,
        (d - 1) * (d - 2) - sum_mixed,
    ))
}
