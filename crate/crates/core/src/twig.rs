//! Discriminants, inductance, delta and barks: the fractional Zariski
//! bookkeeping on twigs.

use crate::graph::{
    self, canonical_dot, intersection_number, is_negative_definite, is_superfluous,
    maximal_twigs, neg_det, CompId, DivisorGraph, FractionalDivisor,
};
use crate::{rat, Error, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// A chain of components with a chosen tip, stored tip first. Consecutive
/// components meet once; nothing else inside the chain meets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedChain {
    ids: Vec<CompId>,
}

impl OrderedChain {
    /// Validates the chain structure inside `g`.
    pub fn new(g: &DivisorGraph, ids: Vec<CompId>) -> Result<Self, Error> {
        for id in &ids {
            g.check_id(*id)?;
        }
        let set: BTreeSet<CompId> = ids.iter().copied().collect();
        if set.len() != ids.len() {
            return Err(Error::NotAChain("repeated component".into()));
        }
        for i in 0..ids.len() {
            for j in i + 1..ids.len() {
                let m = g.edge_mult(ids[i], ids[j]);
                let expected = if j == i + 1 { 1 } else { 0 };
                if m != expected {
                    return Err(Error::NotAChain(format!(
                        "components {} and {} meet {} times, expected {}",
                        ids[i], ids[j], m, expected
                    )));
                }
            }
        }
        Ok(OrderedChain { ids })
    }

    pub fn ids(&self) -> &[CompId] {
        &self.ids
    }

    pub fn tip(&self) -> Option<CompId> {
        self.ids.first().copied()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn weights(&self, g: &DivisorGraph) -> Vec<i64> {
        self.ids.iter().map(|id| -g.component(*id).unwrap().self_int).collect()
    }

    fn id_set(&self) -> BTreeSet<CompId> {
        self.ids.iter().copied().collect()
    }
}

/// `d(T) = det(-Q(T))`, with `d(0) = 1`.
pub fn discriminant(g: &DivisorGraph, t: &BTreeSet<CompId>) -> Result<BigInt, Error> {
    neg_det(g, t)
}

/// Discriminant of a chain given by its bracket weights, via the two-term
/// recurrence `d(T) = w_1 d(T - T_1) - d(T - T_1 - T_2)`.
pub fn chain_discriminant(weights: &[i64]) -> BigInt {
    // computed from the far end so that removing T_1 is a suffix;
    // d'(empty) = 0 seeds the two-term recurrence
    let mut d_prev = BigInt::zero();
    let mut d = BigInt::one();
    for w in weights.iter().rev() {
        let next = BigInt::from(*w) * &d - &d_prev;
        d_prev = std::mem::replace(&mut d, next);
    }
    d
}

/// Two-term recurrence on an ordered chain; identical value to
/// [`discriminant`], computed without a matrix.
pub fn discriminant_recurrence(g: &DivisorGraph, chain: &OrderedChain) -> Result<BigInt, Error> {
    Ok(chain_discriminant(&chain.weights(g)))
}

fn check_twig_preconditions(g: &DivisorGraph, chain: &OrderedChain) -> Result<(), Error> {
    if !is_negative_definite(g, &chain.id_set())? {
        return Err(Error::NotNegativeDefinite);
    }
    for id in chain.ids() {
        let c = g.component(*id)?;
        let inside: u32 = g
            .neighbors(*id)
            .into_iter()
            .filter(|(n, _)| chain.ids().contains(n))
            .map(|(_, m)| m)
            .sum();
        if c.self_int == -1 && inside <= 2 {
            return Err(Error::Superfluous(*id));
        }
    }
    Ok(())
}

/// `ind(T') = d(T' - tip) / d(T')` for an ordered negative definite chain.
pub fn inductance(g: &DivisorGraph, chain: &OrderedChain) -> Result<Rat, Error> {
    check_twig_preconditions(g, chain)?;
    let w = chain.weights(g);
    let d = chain_discriminant(&w);
    let d_minus_tip = chain_discriminant(&w[1..]);
    Ok(Rat::new(d_minus_tip, d))
}

/// `delta(T') = 1 / d(T')`.
pub fn delta(g: &DivisorGraph, chain: &OrderedChain) -> Result<Rat, Error> {
    check_twig_preconditions(g, chain)?;
    Ok(Rat::new(BigInt::one(), chain_discriminant(&chain.weights(g))))
}

fn boundary_twigs(g: &DivisorGraph) -> Result<Vec<OrderedChain>, Error> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    g.require_snc()?;
    for id in g.ids() {
        if is_superfluous(g, id)? {
            return Err(Error::Superfluous(id));
        }
    }
    let whole: BTreeSet<CompId> = g.ids().collect();
    if is_negative_definite(g, &whole)? {
        return Err(Error::NegativeDefiniteBoundary);
    }
    let mut out = Vec::new();
    for ids in graph::twigs_from_tips(g)? {
        let chain = OrderedChain::new(g, ids)?;
        if !is_negative_definite(g, &chain.id_set())? {
            return Err(Error::NotNegativeDefinite);
        }
        out.push(chain);
    }
    Ok(out)
}

/// Sum of `ind` over the maximal twigs, each ordered from its tip inward.
pub fn total_inductance(g: &DivisorGraph) -> Result<Rat, Error> {
    let mut total = rat(0);
    for twig in boundary_twigs(g)? {
        total += inductance(g, &twig)?;
    }
    Ok(total)
}

/// Sum of `delta` over the maximal twigs.
pub fn total_delta(g: &DivisorGraph) -> Result<Rat, Error> {
    let mut total = rat(0);
    for twig in boundary_twigs(g)? {
        total += delta(g, &twig)?;
    }
    Ok(total)
}

/// Solves `M x = b` exactly by Gaussian elimination. `None` if singular.
fn solve_rat(mut m: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n).find(|r| !m[*r][col].is_zero())?;
        m.swap(col, pivot);
        b.swap(col, pivot);
        let p = m[col][col].clone();
        for j in col..n {
            m[col][j] = &m[col][j] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..n {
                    m[r][j] = &m[r][j] - &f * &m[col][j];
                }
                b[r] = &b[r] - &f * &b[col];
            }
        }
    }
    Some(b)
}

/// Bark of one twig: the unique fractional divisor on the twig with
/// `Bk . tip = -1` and `Bk . R = 0` on its other components. The coefficient
/// of the j-th component is `d(T_{j+1}+...+T_k)/d(T)`; the closed form is
/// cross-checked against an exact linear solve and the defining system.
pub fn bark_twig(g: &DivisorGraph, twig: &OrderedChain) -> Result<FractionalDivisor, Error> {
    if twig.is_empty() {
        return Ok(FractionalDivisor::zero());
    }
    if !is_negative_definite(g, &twig.id_set())? {
        return Err(Error::NotNegativeDefinite);
    }
    let w = twig.weights(g);
    let d = chain_discriminant(&w);
    let mut bark = FractionalDivisor::zero();
    for (j, id) in twig.ids().iter().enumerate() {
        let coeff = Rat::new(chain_discriminant(&w[j + 1..]), d.clone());
        bark.coeffs.insert(*id, coeff);
    }

    // exact linear solve of the defining system as an independent route
    let n = twig.len();
    let mut m = vec![vec![rat(0); n]; n];
    for (i, a) in twig.ids().iter().enumerate() {
        for (j, b) in twig.ids().iter().enumerate() {
            m[i][j] = rat(g.pairing(*a, *b));
        }
    }
    let mut rhs = vec![rat(0); n];
    rhs[0] = rat(-1);
    let solved = solve_rat(m, rhs).ok_or(Error::NotNegativeDefinite)?;
    for (i, id) in twig.ids().iter().enumerate() {
        if bark.coeff(*id) != solved[i] {
            return Err(Error::Internal(format!(
                "bark closed form and linear solve disagree on component {id}"
            )));
        }
    }

    // defining system, verified exactly against the graph pairing
    for (i, id) in twig.ids().iter().enumerate() {
        let e = FractionalDivisor::single(*id, rat(1));
        let got = intersection_number(g, &bark, &e)?;
        let want = if i == 0 { rat(-1) } else { rat(0) };
        if got != want {
            return Err(Error::Internal(format!(
                "bark defining system fails on component {id}: {got} != {want}"
            )));
        }
    }
    Ok(bark)
}

/// `Bk T`: sum of the barks of all maximal twigs. All coefficients lie in
/// (0,1) and `(Bk T)^2 = -ind(T)`.
pub fn bark(g: &DivisorGraph) -> Result<FractionalDivisor, Error> {
    let mut total = FractionalDivisor::zero();
    for twig in boundary_twigs(g)? {
        total = total.add(&bark_twig(g, &twig)?);
    }
    Ok(total)
}

/// `Bk' Delta^-`: the unique fractional divisor supported on a disjoint
/// union of (-2)-twigs with `(K + D - Bk') . R = 0` for each component `R`
/// of the support, equivalently `Bk' . R = -1` on tips of the divisor and 0
/// otherwise.
pub fn bark_prime(
    g: &DivisorGraph,
    delta_minus: &BTreeSet<CompId>,
) -> Result<FractionalDivisor, Error> {
    let mut total = FractionalDivisor::zero();
    for piece in split_into_twigs(g, delta_minus)? {
        total = total.add(&bark_twig(g, &piece)?);
    }
    Ok(total)
}

/// Splits a set of components into the twigs of `g` it consists of, each
/// ordered from the tip of `g` inward. Errors if some piece is not a
/// negative definite twig of `g`.
fn split_into_twigs(
    g: &DivisorGraph,
    ids: &BTreeSet<CompId>,
) -> Result<Vec<OrderedChain>, Error> {
    let mut remaining = ids.clone();
    let mut out = Vec::new();
    while let Some(&start) = remaining.iter().next() {
        // collect the connected piece inside ids
        let mut piece = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if !piece.insert(v) {
                continue;
            }
            for (n, _) in g.neighbors(v) {
                if remaining.contains(&n) && !piece.contains(&n) {
                    stack.push(n);
                }
            }
        }
        for v in &piece {
            remaining.remove(v);
        }
        // the piece must be a chain whose outer end is a tip of g
        let order = ordered_from_graph_tip(g, &piece)?;
        let chain = OrderedChain::new(g, order)?;
        if !is_negative_definite(g, &chain.id_set())? {
            return Err(Error::NotNegativeDefinite);
        }
        out.push(chain);
    }
    Ok(out)
}

/// Orders a connected chain piece from the end that is a tip of the whole
/// graph (the twig orientation).
fn ordered_from_graph_tip(
    g: &DivisorGraph,
    piece: &BTreeSet<CompId>,
) -> Result<Vec<CompId>, Error> {
    let order = chain_order_checked(g, piece)?;
    let first_is_tip = g.incident_multiplicity(order[0]) <= 1;
    let last_is_tip = g.incident_multiplicity(*order.last().unwrap()) <= 1;
    if first_is_tip {
        Ok(order)
    } else if last_is_tip {
        Ok(order.into_iter().rev().collect())
    } else {
        Err(Error::NotAChain(format!(
            "piece containing {} is not a twig of the divisor",
            order[0]
        )))
    }
}

fn chain_order_checked(
    g: &DivisorGraph,
    piece: &BTreeSet<CompId>,
) -> Result<Vec<CompId>, Error> {
    if piece.len() == 1 {
        return Ok(vec![*piece.iter().next().unwrap()]);
    }
    let degrees: Vec<usize> = piece
        .iter()
        .map(|id| g.neighbors(*id).iter().filter(|(n, _)| piece.contains(n)).count())
        .collect();
    if degrees.iter().any(|d| *d > 2) || degrees.iter().filter(|d| **d == 1).count() != 2 {
        return Err(Error::NotAChain(format!(
            "piece containing {} is not a chain",
            piece.iter().next().unwrap()
        )));
    }
    Ok(graph::chain_order(g, piece))
}

/// Sum of inductances over the maximal twigs that are negative definite,
/// with the count of twigs skipped for failing that. Boundaries of log
/// general type skip nothing; low-degree sanity configurations may carry a
/// non-definite E-twig.
pub fn inductance_of_negdef_twigs(g: &DivisorGraph) -> Result<(Rat, usize), Error> {
    g.require_snc()?;
    let mut total = rat(0);
    let mut skipped = 0usize;
    for ids in maximal_twigs(g)? {
        let chain = OrderedChain::new(g, ids)?;
        if is_negative_definite(g, &chain.id_set())? {
            total += inductance(g, &chain)?;
        } else {
            skipped += 1;
        }
    }
    Ok((total, skipped))
}

/// Result of [`zariski_negative_part`]: the bark together with the recorded
/// hypothesis that no `(-1)`-curve `A` off the graph has `T . A <= 1` (a
/// geometric assumption the graph cannot verify).
#[derive(Debug, Clone)]
pub struct ZariskiNegativePart {
    pub negative_part: FractionalDivisor,
    pub assumes_no_external_minus_one: bool,
}

pub fn zariski_negative_part(g: &DivisorGraph) -> Result<ZariskiNegativePart, Error> {
    Ok(ZariskiNegativePart {
        negative_part: bark(g)?,
        assumes_no_external_minus_one: true,
    })
}

/// `(Bk T)^2`, for convenience in checks.
pub fn bark_square(g: &DivisorGraph) -> Result<Rat, Error> {
    let b = bark(g)?;
    intersection_number(g, &b, &b)
}

/// Contribution helpers used by the boundary bookkeeping: `K . (sum of
/// maximal twigs)` of a boundary graph.
pub fn k_dot_twigs(g: &DivisorGraph) -> Result<Rat, Error> {
    let mut total = rat(0);
    for twig in maximal_twigs(g)? {
        let d = FractionalDivisor::reduced(twig);
        total += canonical_dot(g, &d)?;
    }
    Ok(total)
}
