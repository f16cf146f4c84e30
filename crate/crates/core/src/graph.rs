//! Weighted intersection graphs of reduced divisors with smooth rational
//! components.
//!
//! A vertex is an irreducible component carrying its self-intersection `C^2`;
//! an edge carries the intersection multiplicity of the two components
//! (multiplicity > 1 encodes tangency and is only allowed on weak-resolution
//! graphs). The bracket weight of a component is `-C^2`; chains are
//! written `[w1,...,wk]` in those weights.

use crate::{rat, Error, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

pub type CompId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub id: CompId,
    pub self_int: i64,
    pub label: Option<String>,
    pub is_e: bool,
}

impl Component {
    pub fn new(id: CompId, self_int: i64) -> Self {
        Component { id, self_int, label: None, is_e: false }
    }

    /// Bracket weight: `[w]` means `self_int = -w`.
    pub fn weight(&self) -> i64 {
        -self.self_int
    }
}

/// Weighted intersection graph of a reduced divisor. Immutable value
/// semantics: mutation always builds a new graph.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DivisorGraph {
    comps: BTreeMap<CompId, Component>,
    edges: BTreeMap<(CompId, CompId), u32>,
    pub ksq: Option<i64>,
}

/// Fractional divisor supported on graph components; absent ids have
/// coefficient zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FractionalDivisor {
    pub coeffs: BTreeMap<CompId, Rat>,
}

impl FractionalDivisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(id: CompId, coeff: Rat) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(id, coeff);
        }
        FractionalDivisor { coeffs }
    }

    pub fn reduced(ids: impl IntoIterator<Item = CompId>) -> Self {
        FractionalDivisor { coeffs: ids.into_iter().map(|i| (i, rat(1))).collect() }
    }

    pub fn coeff(&self, id: CompId) -> Rat {
        self.coeffs.get(&id).cloned().unwrap_or_else(|| rat(0))
    }

    pub fn support(&self) -> BTreeSet<CompId> {
        self.coeffs.iter().filter(|(_, c)| !c.is_zero()).map(|(i, _)| *i).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (id, c) in &other.coeffs {
            let v = coeffs.entry(*id).or_insert_with(|| rat(0));
            *v += c.clone();
        }
        coeffs.retain(|_, c| !c.is_zero());
        FractionalDivisor { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        FractionalDivisor {
            coeffs: self.coeffs.iter().map(|(i, c)| (*i, c * k)).collect(),
        }
    }

    /// Coefficientwise `self <= other` (i.e. `other - self` is effective).
    pub fn is_subdivisor_of(&self, other: &Self) -> bool {
        let zero = rat(0);
        let mut ids: BTreeSet<CompId> = self.coeffs.keys().copied().collect();
        ids.extend(other.coeffs.keys().copied());
        ids.iter().all(|id| self.coeff(*id) <= *other.coeffs.get(id).unwrap_or(&zero))
    }
}

fn edge_key(a: CompId, b: CompId) -> (CompId, CompId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl DivisorGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a chain from bracket weights `[w1,...,wk]` (self_int = -w), with
    /// ids `0..k` in chain order.
    pub fn chain(weights: &[i64]) -> Self {
        let mut g = DivisorGraph::new();
        for (i, w) in weights.iter().enumerate() {
            g.add_component(Component::new(i as CompId, -w)).unwrap();
        }
        for i in 1..weights.len() {
            g.add_edge(i as CompId - 1, i as CompId, 1).unwrap();
        }
        g
    }

    pub fn add_component(&mut self, c: Component) -> Result<(), Error> {
        if self.comps.contains_key(&c.id) {
            return Err(Error::DuplicateComponent(c.id));
        }
        if c.is_e {
            if let Some(e) = self.comps.values().find(|x| x.is_e) {
                return Err(Error::TwoMarkedE(e.id, c.id));
            }
        }
        self.comps.insert(c.id, c);
        Ok(())
    }

    pub fn add_edge(&mut self, a: CompId, b: CompId, mult: u32) -> Result<(), Error> {
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        if mult == 0 {
            return Err(Error::ZeroMultiplicity(a, b));
        }
        self.check_id(a)?;
        self.check_id(b)?;
        *self.edges.entry(edge_key(a, b)).or_insert(0) += mult;
        Ok(())
    }

    pub fn remove_component(&mut self, id: CompId) {
        self.comps.remove(&id);
        self.edges.retain(|(a, b), _| *a != id && *b != id);
    }

    pub fn set_edge(&mut self, a: CompId, b: CompId, mult: u32) {
        if mult == 0 {
            self.edges.remove(&edge_key(a, b));
        } else {
            self.edges.insert(edge_key(a, b), mult);
        }
    }

    pub fn check_id(&self, id: CompId) -> Result<(), Error> {
        if self.comps.contains_key(&id) {
            Ok(())
        } else {
            Err(Error::UnknownComponent(id))
        }
    }

    pub fn component(&self, id: CompId) -> Result<&Component, Error> {
        self.comps.get(&id).ok_or(Error::UnknownComponent(id))
    }

    pub fn component_mut(&mut self, id: CompId) -> Result<&mut Component, Error> {
        self.comps.get_mut(&id).ok_or(Error::UnknownComponent(id))
    }

    pub fn components(&self) -> impl Iterator<Item = &Component> {
        self.comps.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = CompId> + '_ {
        self.comps.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn next_id(&self) -> CompId {
        self.comps.keys().next_back().map_or(0, |m| m + 1)
    }

    pub fn edge_mult(&self, a: CompId, b: CompId) -> u32 {
        self.edges.get(&edge_key(a, b)).copied().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (CompId, CompId, u32)> + '_ {
        self.edges.iter().map(|((a, b), m)| (*a, *b, *m))
    }

    /// Neighbors with edge multiplicities, in id order.
    pub fn neighbors(&self, id: CompId) -> Vec<(CompId, u32)> {
        self.edges
            .iter()
            .filter_map(|((a, b), m)| {
                if *a == id {
                    Some((*b, *m))
                } else if *b == id {
                    Some((*a, *m))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Total incident multiplicity of a component inside the reduced divisor.
    pub fn incident_multiplicity(&self, id: CompId) -> u32 {
        self.neighbors(id).iter().map(|(_, m)| m).sum()
    }

    pub fn marked_e(&self) -> Option<CompId> {
        self.comps.values().find(|c| c.is_e).map(|c| c.id)
    }

    pub fn is_snc(&self) -> bool {
        self.edges.values().all(|m| *m == 1)
    }

    pub fn require_snc(&self) -> Result<(), Error> {
        if let Some(((a, b), m)) = self.edges.iter().find(|(_, m)| **m > 1) {
            return Err(Error::NotSnc(*a, *b, *m));
        }
        Ok(())
    }

    /// Pairing of component classes: self-intersections on the diagonal, edge
    /// multiplicities off it.
    pub fn pairing(&self, a: CompId, b: CompId) -> i64 {
        if a == b {
            self.comps[&a].self_int
        } else {
            self.edge_mult(a, b) as i64
        }
    }

    pub fn reduced_divisor(&self) -> FractionalDivisor {
        FractionalDivisor::reduced(self.ids())
    }

    pub fn reduced_sub(&self, ids: &BTreeSet<CompId>) -> Result<FractionalDivisor, Error> {
        for id in ids {
            self.check_id(*id)?;
        }
        Ok(FractionalDivisor::reduced(ids.iter().copied()))
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self).len() <= 1
    }
}

/// Connected components as id sets, smallest member first.
pub fn connected_components(g: &DivisorGraph) -> Vec<BTreeSet<CompId>> {
    let mut seen: BTreeSet<CompId> = BTreeSet::new();
    let mut out = Vec::new();
    for start in g.ids() {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if !comp.insert(v) {
                continue;
            }
            for (w, _) in g.neighbors(v) {
                if !comp.contains(&w) {
                    stack.push(w);
                }
            }
        }
        seen.extend(comp.iter().copied());
        out.push(comp);
    }
    out
}

/// Bilinear intersection number `A . B` over the graph's pairing.
pub fn intersection_number(
    g: &DivisorGraph,
    a: &FractionalDivisor,
    b: &FractionalDivisor,
) -> Result<Rat, Error> {
    for id in a.coeffs.keys().chain(b.coeffs.keys()) {
        g.check_id(*id)?;
    }
    let mut total = rat(0);
    for (i, ca) in &a.coeffs {
        for (j, cb) in &b.coeffs {
            let p = g.pairing(*i, *j);
            if p != 0 {
                total += ca * cb * rat(p);
            }
        }
    }
    Ok(total)
}

/// `K . A` via adjunction for smooth rational components: `K.C = -2 - C^2`.
pub fn canonical_dot(g: &DivisorGraph, a: &FractionalDivisor) -> Result<Rat, Error> {
    let mut total = rat(0);
    for (id, c) in &a.coeffs {
        let comp = g.component(*id)?;
        total += c * rat(-2 - comp.self_int);
    }
    Ok(total)
}

/// Arithmetic genus `p_a(T) = T.(K+T)/2 + 1` of a reduced subdivisor.
pub fn arithmetic_genus(g: &DivisorGraph, t: &BTreeSet<CompId>) -> Result<Rat, Error> {
    let td = g.reduced_sub(t)?;
    let tt = intersection_number(g, &td, &td)?;
    let kt = canonical_dot(g, &td)?;
    Ok((tt + kt) / rat(2) + rat(1))
}

/// Branching number `beta_T(R) = R.(T-R)` of a reduced subdivisor `R` inside
/// the full reduced divisor, counting edge multiplicities.
pub fn branching_number(g: &DivisorGraph, r: &BTreeSet<CompId>) -> Result<i64, Error> {
    for id in r {
        g.check_id(*id)?;
    }
    let mut total: i64 = 0;
    for (a, b, m) in g.edges() {
        let ina = r.contains(&a);
        let inb = r.contains(&b);
        if ina != inb {
            total += m as i64;
        }
    }
    Ok(total)
}

fn beta_single(g: &DivisorGraph, id: CompId) -> i64 {
    g.incident_multiplicity(id) as i64
}

/// Components with branching number <= 1.
pub fn tips(g: &DivisorGraph) -> Vec<CompId> {
    g.ids().filter(|id| beta_single(g, *id) <= 1).collect()
}

/// Components with branching number >= 3.
pub fn branching_components(g: &DivisorGraph) -> Vec<CompId> {
    g.ids().filter(|id| beta_single(g, *id) >= 3).collect()
}

fn has_cycle(g: &DivisorGraph, comp: &BTreeSet<CompId>) -> bool {
    // edges counted once per unordered pair; a connected comp is a tree iff
    // #edges = #vertices - 1
    let e = g.edges().filter(|(a, _, _)| comp.contains(a)).count();
    e + 1 != comp.len()
}

/// Maximal twigs of a divisor, each ordered from its tip inward. Errors on
/// graphs with cycles; see [`twigs_from_tips`] for the permissive variant.
///
/// Twigs never contain a branching component. On a connected tree with a
/// branching component this is the usual notion. A chain without branching
/// components is split at its component of minimal id: that component closes
/// the twig growing from the smaller-id tip, and the rest forms the twig from
/// the other tip (a deterministic convention; the boundary divisors of
/// interest always branch).
pub fn maximal_twigs(g: &DivisorGraph) -> Result<Vec<Vec<CompId>>, Error> {
    for comp in connected_components(g) {
        if has_cycle(g, &comp) {
            return Err(Error::NotATree(format!(
                "component containing {} has a cycle",
                comp.iter().next().unwrap()
            )));
        }
    }
    twigs_from_tips(g)
}

/// Twig extraction that tolerates cycles: twigs still grow from tips and
/// stop at branching components, and a pure cycle simply contributes no
/// twigs (a divisor without tips has none).
pub fn twigs_from_tips(g: &DivisorGraph) -> Result<Vec<Vec<CompId>>, Error> {
    g.require_snc()?;
    let mut out = Vec::new();
    for comp in connected_components(g) {
        if has_cycle(g, &comp) {
            let no_tips = comp.iter().all(|id| beta_single(g, *id) >= 2);
            if no_tips {
                continue;
            }
            // tails hanging off the cycle: walk from each tip; the cycle
            // entry point is branching and stops the walk
            for tip in comp.iter().filter(|id| beta_single(g, **id) <= 1) {
                out.push(walk_twig(g, *tip));
            }
            continue;
        }
        out.extend(twigs_of_tree(g, &comp));
    }
    Ok(out)
}

fn walk_twig(g: &DivisorGraph, tip: CompId) -> Vec<CompId> {
    let mut twig = vec![tip];
    let mut prev = None;
    let mut cur = tip;
    loop {
        let next: Vec<CompId> = g
            .neighbors(cur)
            .into_iter()
            .map(|(n, _)| n)
            .filter(|n| Some(*n) != prev)
            .collect();
        if next.len() != 1 || beta_single(g, next[0]) >= 3 {
            return twig;
        }
        twig.push(next[0]);
        prev = Some(cur);
        cur = next[0];
    }
}

fn twigs_of_tree(g: &DivisorGraph, comp: &BTreeSet<CompId>) -> Vec<Vec<CompId>> {
    if comp.len() == 1 {
        return vec![vec![*comp.iter().next().unwrap()]];
    }
    let branching: BTreeSet<CompId> =
        comp.iter().copied().filter(|id| beta_single(g, *id) >= 3).collect();
    let comp_tips: Vec<CompId> =
        comp.iter().copied().filter(|id| beta_single(g, *id) <= 1).collect();
    if branching.is_empty() {
        // isolated chain: canonical split at the minimal id; both halves are
        // reported from their tip inward
        let pivot = *comp.iter().next().unwrap();
        let order = chain_order(g, comp);
        let pos = order.iter().position(|id| *id == pivot).unwrap();
        let mut res = vec![order[..=pos].to_vec()];
        if pos + 1 < order.len() {
            let mut second: Vec<CompId> = order[pos + 1..].to_vec();
            second.reverse();
            res.push(second);
        }
        return res;
    }
    let mut twigs = Vec::new();
    for tip in comp_tips {
        let mut twig = vec![tip];
        let mut prev = None;
        let mut cur = tip;
        loop {
            let next: Vec<CompId> = g
                .neighbors(cur)
                .into_iter()
                .map(|(n, _)| n)
                .filter(|n| Some(*n) != prev)
                .collect();
            if next.len() != 1 {
                break;
            }
            let n = next[0];
            if branching.contains(&n) {
                break;
            }
            twig.push(n);
            prev = Some(cur);
            cur = n;
        }
        twigs.push(twig);
    }
    twigs
}

/// Orders a chain's ids from one tip to the other (starting at the smaller
/// tip id for determinism). Errors if the induced graph is not a chain.
pub fn chain_order(g: &DivisorGraph, comp: &BTreeSet<CompId>) -> Vec<CompId> {
    if comp.len() == 1 {
        return vec![*comp.iter().next().unwrap()];
    }
    let deg = |id: CompId| {
        g.neighbors(id).into_iter().filter(|(n, _)| comp.contains(n)).count()
    };
    let mut ends: Vec<CompId> = comp.iter().copied().filter(|id| deg(*id) == 1).collect();
    ends.sort_unstable();
    let start = ends[0];
    let mut order = vec![start];
    let mut prev = None;
    let mut cur = start;
    while order.len() < comp.len() {
        let next = g
            .neighbors(cur)
            .into_iter()
            .map(|(n, _)| n)
            .find(|n| comp.contains(n) && Some(*n) != prev)
            .expect("chain_order: not a chain");
        order.push(next);
        prev = Some(cur);
        cur = next;
    }
    order
}

/// Exact determinant of an integer matrix (fraction-free Bareiss).
fn det_bigint(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|i| !m[*i][k].is_zero());
            match swap {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Builds `-Q(T)` for a subdivisor, rows/cols in ascending id order.
pub fn neg_intersection_matrix(g: &DivisorGraph, t: &BTreeSet<CompId>) -> Result<Vec<Vec<BigInt>>, Error> {
    let ids: Vec<CompId> = t.iter().copied().collect();
    for id in &ids {
        g.check_id(*id)?;
    }
    let n = ids.len();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, a) in ids.iter().enumerate() {
        for (j, b) in ids.iter().enumerate() {
            m[i][j] = BigInt::from(-g.pairing(*a, *b));
        }
    }
    Ok(m)
}

/// Determinant of `-Q(T)`; `d(0) = 1` for the empty subdivisor.
pub fn neg_det(g: &DivisorGraph, t: &BTreeSet<CompId>) -> Result<BigInt, Error> {
    Ok(det_bigint(neg_intersection_matrix(g, t)?))
}

/// Sylvester criterion on `-Q(T)`: negative definite iff all leading
/// principal minors are positive. Exact; the empty divisor counts as
/// negative definite.
pub fn is_negative_definite(g: &DivisorGraph, t: &BTreeSet<CompId>) -> Result<bool, Error> {
    let m = neg_intersection_matrix(g, t)?;
    for k in 1..=m.len() {
        let minor: Vec<Vec<BigInt>> =
            m[..k].iter().map(|row| row[..k].to_vec()).collect();
        if det_bigint(minor) <= BigInt::zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A `(-1)`-curve meeting at most two other components, each once and
/// transversally.
pub fn is_superfluous(g: &DivisorGraph, id: CompId) -> Result<bool, Error> {
    let c = g.component(id)?;
    if c.self_int != -1 {
        return Ok(false);
    }
    let nb = g.neighbors(id);
    Ok(nb.len() <= 2 && nb.iter().all(|(_, m)| *m == 1))
}

/// True iff the snc graph carries no superfluous `(-1)`-curve.
pub fn is_snc_minimal(g: &DivisorGraph) -> Result<bool, Error> {
    for id in g.ids() {
        if is_superfluous(g, id)? {
            return Ok(false);
        }
    }
    Ok(true)
}

// --- text format -----------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CompDoc {
    id: CompId,
    selfint: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(rename = "is_E", default, skip_serializing_if = "std::ops::Not::not")]
    is_e: bool,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    components: Vec<CompDoc>,
    edges: Vec<(CompId, CompId, u32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ksq: Option<i64>,
}

/// Canonical serialization: components sorted by id, edges sorted
/// lexicographically with the smaller endpoint first.
pub fn serialize_graph(g: &DivisorGraph) -> String {
    let doc = GraphDoc {
        components: g
            .components()
            .map(|c| CompDoc {
                id: c.id,
                selfint: c.self_int,
                label: c.label.clone(),
                is_e: c.is_e,
            })
            .collect(),
        edges: g.edges().collect(),
        ksq: g.ksq,
    };
    serde_json::to_string_pretty(&doc).expect("graph serialization cannot fail")
}

pub fn parse_graph(text: &str) -> Result<DivisorGraph, Error> {
    let doc: GraphDoc = serde_json::from_str(text)?;
    let mut g = DivisorGraph::new();
    for c in doc.components {
        g.add_component(Component {
            id: c.id,
            self_int: c.selfint,
            label: c.label,
            is_e: c.is_e,
        })?;
    }
    for (a, b, m) in doc.edges {
        g.add_edge(a, b, m)?;
    }
    g.ksq = doc.ksq;
    Ok(g)
}

/// Bracket form of a weight list, abbreviating runs of three or
/// more equal weights as `(w)_k`.
pub fn weights_human(weights: &[i64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < weights.len() {
        let mut j = i;
        while j < weights.len() && weights[j] == weights[i] {
            j += 1;
        }
        let run = j - i;
        if run >= 3 {
            parts.push(format!("({})_{}", weights[i], run));
        } else {
            for _ in 0..run {
                parts.push(weights[i].to_string());
            }
        }
        i = j;
    }
    format!("[{}]", parts.join(","))
}
