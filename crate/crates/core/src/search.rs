//! Enumeration of candidate cuspidal-curve configurations under the
//! necessary numeric conditions, plus persistence of candidate and scenario
//! records.

use crate::graph::{serialize_graph, CompId, Component, DivisorGraph};
use crate::hn::{build_exceptional_graph, cusp_invariants, pairs_from_chain, CharPairSeq};
use crate::par::par_flat_map;
use crate::scenarios::ScenarioResult;
use crate::twig::inductance_of_negdef_twigs;
use crate::{rat, rat_from_str, rat_to_string, Error, Rat};
use serde::{Deserialize, Serialize};

/// A multiset of cusps, each a pair sequence with its contact order `rho`
/// (`rho = 1` on the minimal log resolution).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspConfig {
    pub cusps: Vec<(CharPairSeq, u64)>,
}

impl CuspConfig {
    pub fn log_resolution(seqs: Vec<CharPairSeq>) -> Self {
        CuspConfig { cusps: seqs.into_iter().map(|s| (s, 1)).collect() }
    }

    pub fn display(&self) -> String {
        self.cusps
            .iter()
            .map(|(s, rho)| {
                if *rho == 1 {
                    s.to_string()
                } else {
                    format!("{s}*{rho}")
                }
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// One named necessary-condition filter, never applied destructively: the
/// verdict and its arithmetic are recorded on the candidate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FilterOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A numerically consistent curve configuration with its derived global
/// invariants.
#[derive(Debug, Clone)]
pub struct CurveCandidate {
    pub d: i64,
    pub config: CuspConfig,
    pub gamma: i64,
    pub boundary: DivisorGraph,
    pub sharp_d: i64,
    /// Sum of twig inductances over the negative definite maximal twigs.
    pub ind_d: Rat,
    /// Maximal twigs skipped as not negative definite (the E-twig of
    /// low-degree sanity configurations).
    pub skipped_twigs: usize,
    pub filters: Vec<FilterOutcome>,
}

/// Boundary graph of the minimal log resolution: `E` with `E^2 = d^2 - sum
/// I` glued to the unique `(-1)`-curve over each cusp; `K^2` starts at 9 on
/// the plane and drops once per blowup.
pub fn log_resolution_boundary(config: &CuspConfig, d: i64) -> Result<DivisorGraph, Error> {
    let mut g = DivisorGraph::new();
    let mut sum_i: i64 = 0;
    let mut blowups: i64 = 0;
    let mut attach: Vec<CompId> = Vec::new();
    let mut next: CompId = 1;
    let mut parts: Vec<(DivisorGraph, CompId, CompId)> = Vec::new();
    for (seq, rho) in &config.cusps {
        if *rho != 1 {
            return Err(Error::Inadmissible(
                "log-resolution boundary requires rho = 1".into(),
            ));
        }
        let inv = cusp_invariants(seq)?;
        sum_i += inv.i;
        let res = build_exceptional_graph(seq)?;
        blowups += res.graph.len() as i64;
        parts.push((res.graph, res.attach[0].0, next));
        next += parts.last().unwrap().0.len() as CompId;
    }
    g.add_component(Component {
        id: 0,
        self_int: d * d - sum_i,
        label: Some("E".into()),
        is_e: true,
    })?;
    for (part, minus_one, offset) in &parts {
        for c in part.components() {
            g.add_component(Component {
                id: c.id + offset,
                self_int: c.self_int,
                label: None,
                is_e: false,
            })?;
        }
        for (a, b, m) in part.edges() {
            g.add_edge(a + offset, b + offset, m)?;
        }
        attach.push(minus_one + offset);
    }
    for a in attach {
        g.add_edge(0, a, 1)?;
    }
    g.ksq = Some(9 - blowups);
    Ok(g)
}

/// Solves the genus-degree equation `(d-1)(d-2) = sum rho (rho I - M)` for
/// an integer `d >= 3`, derives `gamma` from `gamma + d^2 = sum rho^2 I`,
/// builds the boundary graph and its invariants. `None` when no integer
/// degree exists.
pub fn candidate_from_config(config: &CuspConfig) -> Result<Option<CurveCandidate>, Error> {
    let mut s_mixed: i64 = 0;
    let mut s_r2i: i64 = 0;
    for (seq, rho) in &config.cusps {
        if *rho == 0 {
            return Err(Error::Inadmissible("rho must be positive".into()));
        }
        if !seq.is_singular_germ() {
            return Err(Error::Inadmissible("a cusp must be a singular germ".into()));
        }
        let inv = cusp_invariants(seq)?;
        let r = *rho as i64;
        s_mixed += r * (r * inv.i - inv.m);
        s_r2i += r * r * inv.i;
    }
    // (d-1)(d-2) = s_mixed, i.e. d^2 - 3d + 2 - s_mixed = 0
    let disc = 1 + 4 * s_mixed;
    if disc < 0 {
        return Ok(None);
    }
    let root = (disc as f64).sqrt().round() as i64;
    let root = (root - 2..=root + 2).find(|r| r >= &0 && r * r == disc);
    let d = match root {
        Some(r) if (3 + r) % 2 == 0 && (3 + r) / 2 >= 3 => (3 + r) / 2,
        _ => return Ok(None),
    };
    let gamma = s_r2i - d * d;
    let boundary = log_resolution_boundary(config, d)?;
    let residuals = crate::hn::degree_genus_residuals(&config.cusps, d, gamma)?;
    if residuals != (0, 0, 0) {
        return Err(Error::Internal(format!(
            "candidate residuals {residuals:?} nonzero for d = {d}"
        )));
    }
    let (ind_d, skipped_twigs) = inductance_of_negdef_twigs(&boundary)?;
    Ok(Some(CurveCandidate {
        d,
        gamma,
        sharp_d: boundary.len() as i64,
        ind_d,
        skipped_twigs,
        boundary,
        config: config.clone(),
        filters: Vec::new(),
    }))
}

/// Populates the named necessary-condition filters under the hypotheses
/// `(p2, i)`. Nothing is discarded: every verdict is recorded with its exact
/// arithmetic.
pub fn filter_candidate(mut cand: CurveCandidate, p2: i64, i: i64) -> CurveCandidate {
    let mut filters = Vec::new();

    let max_mult = cand
        .config
        .cusps
        .iter()
        .map(|(s, _)| s.pairs()[0].p.max(1))
        .max()
        .unwrap_or(1) as i64;
    filters.push(FilterOutcome {
        name: "matsuoka-sakai".into(),
        passed: cand.d < 3 * max_mult,
        detail: format!("deg = {} < 3 max mult = {}", cand.d, 3 * max_mult),
    });

    let budget = rat(5 - p2 - i);
    let bmy_lhs = cand.ind_d.clone();
    filters.push(FilterOutcome {
        name: "bmy".into(),
        passed: bmy_lhs <= budget && cand.skipped_twigs == 0,
        detail: format!(
            "ind(D) = {} vs budget 5 - p2 - i = {} ({} twigs skipped as not negative definite)",
            rat_to_string(&bmy_lhs),
            rat_to_string(&budget),
            cand.skipped_twigs
        ),
    });

    let c = cand.config.cusps.len() as i64;
    filters.push(FilterOutcome {
        name: "per-cusp-half-budget".into(),
        passed: Rat::new(c.into(), 2.into()) < budget,
        detail: format!("each cusp contributes > 1/2 to ind(D): c/2 = {c}/2 vs {}", rat_to_string(&budget)),
    });

    filters.push(FilterOutcome {
        name: "gamma-window".into(),
        passed: 4 <= cand.gamma && cand.gamma <= 4 * p2,
        detail: format!("4 <= gamma = {} <= 4 p2 = {}", cand.gamma, 4 * p2),
    });

    cand.filters = filters;
    cand
}

/// Canonical singular pair sequences whose log-resolution graph has at most
/// `max_len` components: the enumeration runs over admissible sequences and
/// keeps the normal forms (fixed points of graph inversion).
pub fn enumerate_cusp_types(max_len: usize) -> Result<Vec<CharPairSeq>, Error> {
    if max_len > 16 {
        return Err(Error::BoundTooLarge(max_len as u64, 16));
    }
    // pending sequences with their component count and running gcd
    type Pending = (Vec<(u64, u64)>, usize, u64);
    let mut out = Vec::new();
    let mut stack: Vec<Pending> = Vec::new();
    // first pair: p >= 2 (a genuinely singular germ)
    for p1 in 2..=(max_len as u64 + 1) {
        for c1 in p1..=(p1 * max_len as u64) {
            let len = crate::hn::expand_block(c1, p1).len();
            if len <= max_len {
                stack.push((vec![(c1, p1)], len, num_integer::gcd(c1, p1)));
            }
        }
    }
    while let Some((pairs, used, g)) = stack.pop() {
        if g == 1 {
            let seq = CharPairSeq::from_list(&pairs)?;
            let built = build_exceptional_graph(&seq)?;
            if pairs_from_chain(&built.graph)? == seq {
                out.push(seq);
            }
            continue;
        }
        for p in 1..=g {
            let len = crate::hn::expand_block(g, p).len();
            if used + len <= max_len {
                let mut next = pairs.clone();
                next.push((g, p));
                stack.push((next, used + len, num_integer::gcd(g, p)));
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// All configurations of `c` cusps with at most `bound` exceptional
/// components in total, each mapped through [`candidate_from_config`] and
/// the filters. The stream is canonically ordered and independent of the
/// parallel schedule.
pub fn enumerate(c: usize, bound: usize, p2: i64) -> Result<Vec<CurveCandidate>, Error> {
    if bound > 14 {
        return Err(Error::BoundTooLarge(bound as u64, 14));
    }
    if c == 0 || c > 6 {
        return Err(Error::BoundTooLarge(c as u64, 6));
    }
    let types = enumerate_cusp_types(bound)?;
    // non-decreasing index tuples of length c with total size <= bound
    let mut configs: Vec<Vec<usize>> = Vec::new();
    let sizes: Vec<usize> = types
        .iter()
        .map(|s| build_exceptional_graph(s).map(|r| r.graph.len()))
        .collect::<Result<_, _>>()?;
    fn grow(
        types_len: usize,
        sizes: &[usize],
        bound: usize,
        c: usize,
        from: usize,
        used: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == c {
            out.push(cur.clone());
            return;
        }
        for i in from..types_len {
            if used + sizes[i] <= bound {
                cur.push(i);
                grow(types_len, sizes, bound, c, i, used + sizes[i], cur, out);
                cur.pop();
            }
        }
    }
    grow(types.len(), &sizes, bound, c, 0, 0, &mut Vec::new(), &mut configs);

    let mut candidates: Vec<CurveCandidate> = par_flat_map(&configs, |idxs| {
        let config = CuspConfig::log_resolution(
            idxs.iter().map(|i| types[*i].clone()).collect(),
        );
        match candidate_from_config(&config) {
            Ok(Some(cand)) => vec![filter_candidate(cand, p2, 0)],
            Ok(None) => vec![],
            Err(e) => panic!("enumeration hit an internal error: {e}"),
        }
    });
    candidates.sort_by(|a, b| {
        (a.d, a.gamma, a.config.display()).cmp(&(b.d, b.gamma, b.config.display()))
    });
    Ok(candidates)
}

// --- persistence -------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CuspRecord {
    pub pairs: String,
    pub rho: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub d: i64,
    pub gamma: i64,
    pub sharp_d: i64,
    pub ind: String,
    pub skipped_twigs: usize,
    pub cusps: Vec<CuspRecord>,
    pub filters: Vec<FilterOutcome>,
    pub boundary: String,
}

impl CandidateRecord {
    pub fn from_candidate(c: &CurveCandidate) -> Self {
        CandidateRecord {
            d: c.d,
            gamma: c.gamma,
            sharp_d: c.sharp_d,
            ind: rat_to_string(&c.ind_d),
            skipped_twigs: c.skipped_twigs,
            cusps: c
                .config
                .cusps
                .iter()
                .map(|(s, rho)| CuspRecord { pairs: s.to_string(), rho: *rho })
                .collect(),
            filters: c.filters.clone(),
            boundary: serialize_graph(&c.boundary),
        }
    }

    pub fn ind_rat(&self) -> Result<Rat, Error> {
        rat_from_str(&self.ind)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    Candidate(CandidateRecord),
    Scenario(ScenarioResult),
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct Results {
    pub records: Vec<Record>,
}

pub fn results_to_string(results: &Results) -> String {
    serde_json::to_string_pretty(results).expect("results serialize")
}

pub fn persist_results(path: &std::path::Path, results: &Results) -> Result<(), Error> {
    std::fs::write(path, results_to_string(results))?;
    Ok(())
}

pub fn load_results(path: &std::path::Path) -> Result<Results, Error> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
