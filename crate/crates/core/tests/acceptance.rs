//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the numbers it verified. Run with `cargo test --test acceptance --
//! --nocapture` to see the report.

use cuspidal_core::birational::{
    blow_up, chain_contracts, chain_det, chain_is_negdef, classify_chains_by_k,
    contracts_to_smooth_point, enumerate_contractible_chains, sweep_chains, BlowupSpec,
};
use cuspidal_core::graph::{
    is_negative_definite, maximal_twigs, CompId, Component, DivisorGraph,
};
use cuspidal_core::hn::{
    block_mu_oracle, build_exceptional_graph, build_weak_resolution_graph,
    chain_weights_printed, cusp_invariants, degree_genus_residuals, expand_block,
    multiplicity_sequence, CharPairSeq,
};
use cuspidal_core::peeling::{check_a_candidate, compute_peeling, minimalization_step, ACandidate};
use cuspidal_core::scenarios::{run_scenario, SCENARIO_NAMES};
use cuspidal_core::search::{candidate_from_config, CuspConfig};
use cuspidal_core::twig::{bark_twig, chain_discriminant, inductance, OrderedChain};
use cuspidal_core::{rat, rat_frac, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

fn seq(list: &[(u64, u64)]) -> CharPairSeq {
    CharPairSeq::from_list(list).unwrap()
}

// --- criterion 1 -------------------------------------------------------------

#[test]
fn criterion_1_hn_examples() {
    let s = seq(&[(3, 2)]);
    let res = build_exceptional_graph(&s).unwrap();
    assert_eq!(chain_weights_printed(&res.graph).unwrap(), vec![2, 1, 3]);
    assert_eq!(multiplicity_sequence(&s).unwrap(), vec![2, 1, 1]);
    let inv = cusp_invariants(&s).unwrap();
    assert_eq!((inv.m, inv.i), (4, 6));

    let s = seq(&[(16, 9)]);
    let res = build_exceptional_graph(&s).unwrap();
    assert_eq!(
        chain_weights_printed(&res.graph).unwrap(),
        vec![5, 2, 1, 3, 2, 2, 3]
    );
    assert_eq!(
        multiplicity_sequence(&s).unwrap(),
        vec![9, 7, 2, 2, 2, 1, 1]
    );
    let inv = cusp_invariants(&s).unwrap();
    assert_eq!((inv.m, inv.i), (24, 144));
    println!("ACCEPTANCE 1 (worked resolution examples (3,2) and (16,9)): PASS");
}

// --- criterion 2 -------------------------------------------------------------

#[test]
fn criterion_2_block_identity_sweep() {
    let mut checked = 0u64;
    for c in 2..=200u64 {
        for p in 2..=c {
            let g = c.gcd(&p);
            let mu = block_mu_oracle(c, p);
            assert_eq!(mu, expand_block(c, p), "routes disagree on ({c},{p})");
            assert_eq!(mu.iter().sum::<u64>(), c + p - g, "sum mu for ({c},{p})");
            assert_eq!(
                mu.iter().map(|x| x * x).sum::<u64>(),
                c * p,
                "sum mu^2 for ({c},{p})"
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 199 * 200 / 2);
    println!("ACCEPTANCE 2 (block identities, {checked} pairs up to 200, simulation oracle): PASS");
}

// --- criterion 3 -------------------------------------------------------------

#[test]
fn criterion_3_discriminant_identity_sweep() {
    let mut checked = 0u64;
    for c in 3..=60i64 {
        for p in 2..c {
            if (c as u64).gcd(&(p as u64)) != 1 {
                continue;
            }
            let s = seq(&[(c as u64, p as u64)]);
            let res = build_exceptional_graph(&s).unwrap();
            let w = chain_weights_printed(&res.graph).unwrap();
            let pos = w.iter().position(|x| *x == 1).unwrap();
            // printed order: B side first, then the (-1)-curve, then A
            let b_side: Vec<i64> = w[..pos].to_vec();
            let a_side: Vec<i64> = w[pos + 1..].to_vec();
            let q = c / p;
            let r = c % p;
            assert_eq!(chain_discriminant(&a_side), BigInt::from(c), "d(A) for ({c},{p})");
            assert_eq!(chain_discriminant(&b_side), BigInt::from(p), "d(B) for ({c},{p})");
            // tips of the full chain are the OUTER ends: A's outer end is
            // last, B's outer end is first
            let a_minus_tip: Vec<i64> = a_side[..a_side.len() - 1].to_vec();
            let b_minus_tip: Vec<i64> = b_side[1..].to_vec();
            assert_eq!(chain_discriminant(&a_minus_tip), BigInt::from(c - p));
            assert_eq!(chain_discriminant(&b_minus_tip), BigInt::from(p - r));
            let ind_sum = Rat::new(BigInt::from(c - p), BigInt::from(c))
                + Rat::new(BigInt::from(p - r), BigInt::from(p));
            let bound = rat(1) - Rat::new(BigInt::from(1), BigInt::from(q + 1));
            assert!(ind_sum > bound, "ind(A)+ind(B) bound for ({c},{p})");
            assert!(bound >= rat_frac(1, 2));
            checked += 1;
        }
    }
    assert!(checked > 1000);
    println!("ACCEPTANCE 3 (discriminant identities d(A)=c, d(B)=p, tips, inductance bound, {checked} coprime pairs up to 60): PASS");
}

// --- criterion 4 -------------------------------------------------------------

#[test]
fn criterion_4_chain_families_by_k() {
    let expected_heads: [(i64, Vec<Vec<i64>>); 4] = [
        (-1, vec![vec![1]]),
        (0, vec![vec![3, 1, 2]]),
        (1, vec![vec![4, 1, 2, 2], vec![3, 2, 1, 3]]),
        (
            2,
            vec![
                vec![5, 1, 2, 2, 2],
                vec![4, 2, 1, 3, 2],
                vec![3, 3, 1, 2, 3],
                vec![3, 2, 2, 1, 4],
            ],
        ),
    ];
    let mut emitted = 0usize;
    for (kq, heads) in &expected_heads {
        let got = classify_chains_by_k(*kq, 5).unwrap();
        let mut expect = Vec::new();
        for k in 0..=5usize {
            for h in heads {
                let mut chain = vec![2i64; k];
                chain.extend(h);
                expect.push(chain);
            }
        }
        assert_eq!(got, expect, "families for K.Q = {kq}");
        for chain in &got {
            assert!(chain_contracts(chain), "{chain:?} contraction oracle");
            assert_eq!(chain.iter().filter(|w| **w == 1).count(), 1);
            let k: i64 = chain.iter().map(|w| w - 2).sum();
            assert_eq!(k, *kq, "K.Q of {chain:?}");
            let g = DivisorGraph::chain(chain);
            let all: BTreeSet<CompId> = g.ids().collect();
            assert!(contracts_to_smooth_point(&g, &all).unwrap().0);
        }
        emitted += got.len();
    }
    println!("ACCEPTANCE 4 (K.Q classification lists for kq in -1..=2, kmax 5, {emitted} chains, contraction oracle): PASS");
}

// --- criterion 5: chains and trees ---------------------------------------------

#[test]
fn criterion_5_chains_exhaustive() {
    // full equivalence sweep: contractible <=> (d = 1 and negative definite)
    // over every chain of length <= 10 with weights in [1,6]
    let mut total_checked = 0u64;
    for len in 1..=10usize {
        let mismatches = sweep_chains(len, 6, |w| {
            let s = chain_is_negdef(w) && chain_det(w) == 1;
            let c = chain_contracts(w);
            s != c
        });
        assert!(mismatches.is_empty(), "equivalence fails at length {len}: {mismatches:?}");
        total_checked += 6u64.pow(len as u32);
    }

    // family coverage: every contractible unique-(-1) chain matches one of
    // the two parameter families
    let reports = enumerate_contractible_chains(10, 6).unwrap();
    let unmatched: Vec<_> = reports.iter().filter(|r| !r.family.matched()).collect();
    assert!(unmatched.is_empty(), "unmatched chains: {unmatched:?}");
    let via_convention = reports
        .iter()
        .filter(|r| r.family.only_via_empty_convention)
        .count();
    println!(
        "ACCEPTANCE 5a (chains <= 10, weights [1,6]: {} vectors swept, equivalence holds, {} contractible unique-(-1) chains all family-matched, {} via the empty convention): PASS",
        total_checked,
        reports.len(),
        via_convention
    );
}

/// Weighted free tree with a canonical form; weights are the bracket weights
/// `w = -C^2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct WTree {
    adj: Vec<Vec<usize>>,
    w: Vec<i64>,
}

impl WTree {
    fn single(w: i64) -> Self {
        WTree { adj: vec![vec![]], w: vec![w] }
    }

    fn n(&self) -> usize {
        self.w.len()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, nbs) in self.adj.iter().enumerate() {
            for b in nbs {
                if a < *b {
                    out.push((a, *b));
                }
            }
        }
        out
    }

    fn add_leaf(&self, at: usize, weight: i64) -> Self {
        let mut t = self.clone();
        let id = t.n();
        t.adj.push(vec![at]);
        t.adj[at].push(id);
        t.w.push(weight);
        t
    }

    /// Outer blowup: new (-1) leaf on `v`, `v`'s weight grows by one.
    fn blow_outer(&self, v: usize) -> Self {
        let mut t = self.add_leaf(v, 1);
        t.w[v] += 1;
        t
    }

    /// Inner blowup on the edge (a,b): new (-1) vertex between them.
    fn blow_inner(&self, a: usize, b: usize) -> Self {
        let mut t = self.clone();
        let id = t.n();
        t.adj[a].retain(|x| *x != b);
        t.adj[b].retain(|x| *x != a);
        t.adj[a].push(id);
        t.adj[b].push(id);
        t.adj.push(vec![a, b]);
        t.w.push(1);
        t.w[a] += 1;
        t.w[b] += 1;
        t
    }

    fn canon_rooted(&self, v: usize, parent: Option<usize>) -> String {
        let mut kids: Vec<String> = self.adj[v]
            .iter()
            .filter(|u| Some(**u) != parent)
            .map(|u| self.canon_rooted(*u, Some(v)))
            .collect();
        kids.sort();
        format!("({}{})", self.w[v], kids.join(""))
    }

    /// Canonical form of the free weighted tree: minimum over centroid
    /// rootings.
    fn canon(&self) -> String {
        let n = self.n();
        if n == 1 {
            return self.canon_rooted(0, None);
        }
        // subtree sizes from an arbitrary root, then centroid(s)
        let mut size = vec![1usize; n];
        let mut order = Vec::new();
        let mut stack = vec![(0usize, usize::MAX, false)];
        while let Some((v, p, processed)) = stack.pop() {
            if processed {
                for &u in &self.adj[v] {
                    if u != p {
                        size[v] += size[u];
                    }
                }
                order.push(v);
                continue;
            }
            stack.push((v, p, true));
            for &u in &self.adj[v] {
                if u != p {
                    stack.push((u, v, false));
                }
            }
        }
        let mut parent = vec![usize::MAX; n];
        let mut bfs = vec![0usize];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut qi = 0;
        while qi < bfs.len() {
            let v = bfs[qi];
            qi += 1;
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = v;
                    bfs.push(u);
                }
            }
        }
        let centroids: Vec<usize> = (0..n)
            .filter(|&v| {
                let mut worst = n - size[v];
                for &u in &self.adj[v] {
                    if parent[u] == v {
                        worst = worst.max(size[u]);
                    }
                }
                worst <= n / 2
            })
            .collect();
        centroids
            .iter()
            .map(|&c| self.canon_rooted(c, None))
            .min()
            .expect("tree has a centroid")
    }

    fn to_graph(&self) -> DivisorGraph {
        let mut g = DivisorGraph::new();
        for (i, w) in self.w.iter().enumerate() {
            g.add_component(Component::new(i as CompId, -w)).unwrap();
        }
        for (a, b) in self.edges() {
            g.add_edge(a as CompId, b as CompId, 1).unwrap();
        }
        g
    }
}

/// All unweighted tree shapes on 1..=n vertices (weights set to 0), deduped
/// by canonical form.
fn tree_shapes(max_n: usize) -> Vec<Vec<WTree>> {
    let mut by_size: Vec<Vec<WTree>> = vec![Vec::new(); max_n + 1];
    by_size[1].push(WTree::single(0));
    for n in 2..=max_n {
        let mut seen = BTreeSet::new();
        let mut level = Vec::new();
        let prev = by_size[n - 1].clone();
        for t in &prev {
            for v in 0..t.n() {
                let bigger = t.add_leaf(v, 0);
                let c = bigger.canon();
                if seen.insert(c) {
                    level.push(bigger);
                }
            }
        }
        by_size[n] = level;
    }
    by_size
}

/// Exhaustive d=1-and-negative-definite survivors on one tree shape over
/// weights [1, max_w], via the post-order subtree-determinant recursion with
/// positivity pruning. The root weight is solved for instead of swept.
fn shape_survivors(shape: &WTree, max_w: i64) -> Vec<WTree> {
    let n = shape.n();
    // root at 0; build children lists and a post-order
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order = Vec::new();
    let mut stack = vec![(0usize, usize::MAX, false)];
    while let Some((v, p, processed)) = stack.pop() {
        if processed {
            order.push(v);
            continue;
        }
        stack.push((v, p, true));
        for &u in &shape.adj[v] {
            if u != p {
                children[v].push(u);
                stack.push((u, v, false));
            }
        }
    }
    debug_assert_eq!(order.last(), Some(&0));

    let mut out = Vec::new();
    let mut w = vec![0i64; n];
    let mut dv = vec![0i64; n];
    let mut dpv = vec![0i64; n];
    // iterative DFS over weight assignments in post-order
    fn rec(
        pos: usize,
        order: &[usize],
        children: &[Vec<usize>],
        shape: &WTree,
        max_w: i64,
        w: &mut Vec<i64>,
        dv: &mut Vec<i64>,
        dpv: &mut Vec<i64>,
        out: &mut Vec<WTree>,
    ) {
        let v = order[pos];
        let mut prod: i64 = 1;
        for &c in &children[v] {
            prod = prod.saturating_mul(dv[c]);
        }
        let mut s: i64 = 0;
        for &c in &children[v] {
            let mut term = dpv[c];
            for &c2 in &children[v] {
                if c2 != c {
                    term = term.saturating_mul(dv[c2]);
                }
            }
            s = s.saturating_add(term);
        }
        dpv[v] = prod;
        if pos == order.len() - 1 {
            // root: solve weight from D_root = 1
            let num = 1 + s;
            if prod > 0 && num % prod == 0 {
                let wr = num / prod;
                if (1..=max_w).contains(&wr) {
                    w[v] = wr;
                    dv[v] = 1;
                    let mut t = shape.clone();
                    t.w = w.clone();
                    out.push(t);
                }
            }
            return;
        }
        for cand in 1..=max_w {
            let d = cand.saturating_mul(prod).saturating_sub(s);
            if d <= 0 {
                continue;
            }
            w[v] = cand;
            dv[v] = d;
            rec(pos + 1, order, children, shape, max_w, w, dv, dpv, out);
        }
    }
    rec(0, &order, &children, shape, max_w, &mut w, &mut dv, &mut dpv, &mut out);
    out
}

/// All contractible weighted trees with at most `max_n` components and
/// weights capped at `max_w`, generated constructively by blowups from a
/// point (weights only ever grow, so the cap prunes exactly).
fn constructive_contractible(max_n: usize, max_w: i64) -> BTreeMap<usize, BTreeSet<String>> {
    let mut frontier = vec![WTree::single(1)];
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut out: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    seen.insert(frontier[0].canon());
    out.entry(1).or_default().insert(frontier[0].canon());
    while let Some(t) = frontier.pop() {
        if t.n() == max_n {
            continue;
        }
        let mut nexts = Vec::new();
        for v in 0..t.n() {
            if t.w[v] < max_w {
                nexts.push(t.blow_outer(v));
            }
        }
        for (a, b) in t.edges() {
            if t.w[a] < max_w && t.w[b] < max_w {
                nexts.push(t.blow_inner(a, b));
            }
        }
        for nt in nexts {
            let c = nt.canon();
            if seen.insert(c.clone()) {
                out.entry(nt.n()).or_default().insert(c);
                frontier.push(nt);
            }
        }
    }
    out
}

/// Precomputed traversal data for one tree shape, so the weight sweeps run
/// allocation-free.
struct ShapeCtx {
    n: usize,
    order: Vec<usize>,
    children: Vec<Vec<usize>>,
    base_m: [[i64; 10]; 10],
}

impl ShapeCtx {
    fn new(shape: &WTree) -> Self {
        let n = shape.n();
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut order = Vec::new();
        let mut stack = vec![(0usize, usize::MAX, false)];
        while let Some((v, p, processed)) = stack.pop() {
            if processed {
                order.push(v);
                continue;
            }
            stack.push((v, p, true));
            for &u in &shape.adj[v] {
                if u != p {
                    children[v].push(u);
                    stack.push((u, v, false));
                }
            }
        }
        let mut base_m = [[0i64; 10]; 10];
        for (v, nbs) in shape.adj.iter().enumerate() {
            for &u in nbs {
                base_m[v][u] = 1;
            }
        }
        ShapeCtx { n, order, children, base_m }
    }
}

/// Determinant-1-and-negative-definite test on a weighted tree via the
/// post-order subtree recursion (fast path for the full sweeps).
fn tree_is_unimodular_negdef(ctx: &ShapeCtx, w: &[i64]) -> bool {
    let mut dv = [0i64; 10];
    let mut dpv = [0i64; 10];
    for &v in &ctx.order {
        let mut prod: i64 = 1;
        for &c in &ctx.children[v] {
            prod = prod.saturating_mul(dv[c]);
        }
        let mut s: i64 = 0;
        for &c in &ctx.children[v] {
            let mut term = dpv[c];
            for &c2 in &ctx.children[v] {
                if c2 != c {
                    term = term.saturating_mul(dv[c2]);
                }
            }
            s = s.saturating_add(term);
        }
        dpv[v] = prod;
        let d = w[v].saturating_mul(prod).saturating_sub(s);
        if d <= 0 {
            return false;
        }
        dv[v] = d;
    }
    dv[ctx.order[ctx.n - 1]] == 1
}

/// Fast numerical contraction oracle on small weighted trees (pairwise
/// intersection bookkeeping, no incidence cap), mirroring the library
/// oracle without graph allocation.
fn tree_contracts_fast(ctx: &ShapeCtx, w: &[i64]) -> bool {
    let n = ctx.n;
    let mut m = ctx.base_m;
    let mut selfi = [0i64; 10];
    let mut alive = [false; 10];
    for v in 0..n {
        selfi[v] = -w[v];
        alive[v] = true;
    }
    let mut left = n;
    while left > 0 {
        let pick = (0..n).find(|&v| alive[v] && selfi[v] == -1);
        let v = match pick {
            Some(v) => v,
            None => return false,
        };
        alive[v] = false;
        left -= 1;
        for a in 0..n {
            if !alive[a] || m[a][v] == 0 {
                continue;
            }
            selfi[a] += m[a][v] * m[a][v];
            for b in (a + 1)..n {
                if alive[b] && m[b][v] != 0 {
                    let gain = m[a][v] * m[b][v];
                    m[a][b] += gain;
                    m[b][a] += gain;
                }
            }
        }
    }
    true
}

#[test]
fn criterion_5_trees_exhaustive() {
    // The spec's tree generalization taken literally is false: the E8 tree
    // (arms of lengths 1, 2, 4 around a node, all weights 2) is negative
    // definite with determinant 1, yet carries no (-1)-curve and so cannot
    // contract to a smooth point. The relations that do hold, and are swept
    // here, are:
    //   snc-blowup-built trees  (subset of)  contractible trees
    //   (subset of)  {d = 1 and negative definite}   -- strictly, from n = 5
    // with the contractible <=> d=1-negdef equivalence exact on chains
    // (criterion 5a). See the decisions ledger for the analysis.
    let max_n = 10usize;
    let max_w = 6i64;
    let shapes = tree_shapes(max_n);
    let constructive = constructive_contractible(max_n, max_w);

    // (i) exhaustive n <= 8: anything that contracts is unimodular negdef
    for n in 1..=8usize {
        let jobs: Vec<(WTree, i64)> = shapes[n]
            .iter()
            .flat_map(|s| (1..=max_w).map(move |f| (s.clone(), f)))
            .collect();
        let violations: Vec<Vec<i64>> = cuspidal_core::par::par_flat_map(&jobs, |(shape, first)| {
            let ctx = ShapeCtx::new(shape);
            let mut bad = Vec::new();
            let mut w = vec![1i64; n];
            w[0] = *first;
            loop {
                if tree_contracts_fast(&ctx, &w) && !tree_is_unimodular_negdef(&ctx, &w) {
                    bad.push(w.clone());
                }
                let mut pos = n;
                loop {
                    if pos == 1 {
                        return bad;
                    }
                    pos -= 1;
                    if w[pos] < max_w {
                        w[pos] += 1;
                        break;
                    }
                    w[pos] = 1;
                }
            }
        });
        assert!(violations.is_empty(), "contractible non-unimodular tree at n = {n}");
    }

    // (ii) survivors of the d=1+negdef sweep, split by the library oracle
    let mut survivor_total = 0usize;
    let mut contractible_total = 0usize;
    let mut constructive_total = 0usize;
    for n in 1..=max_n {
        let survivors: Vec<WTree> = cuspidal_core::par::par_flat_map(&shapes[n], |shape| {
            shape_survivors(shape, max_w)
        });
        let indexed: Vec<(usize, WTree)> = survivors.into_iter().enumerate().collect();
        let rows: Vec<(String, bool)> =
            cuspidal_core::par::par_flat_map(&indexed, |(i, t)| {
                let fast_ok = tree_contracts_fast(&ShapeCtx::new(t), &t.w);
                // validate the graph-level library routines on a
                // deterministic subsample (and on everything small)
                if n <= 6 || i % 199 == 0 {
                    let g = t.to_graph();
                    let all: BTreeSet<CompId> = g.ids().collect();
                    assert!(is_negative_definite(&g, &all).unwrap());
                    let (ok, _) = contracts_to_smooth_point(&g, &all).unwrap();
                    assert_eq!(ok, fast_ok, "library and fast oracles disagree on {t:?}");
                }
                vec![(t.canon(), fast_ok)]
            });
        let mut contractible: BTreeSet<String> = BTreeSet::new();
        let mut all_survivors: BTreeSet<String> = BTreeSet::new();
        for (canon, ok) in rows {
            if ok {
                contractible.insert(canon.clone());
            }
            all_survivors.insert(canon);
        }
        // cross-validation of both directions: the blowup-built trees are
        // exactly the contractible ones
        let empty = BTreeSet::new();
        let built = constructive.get(&n).unwrap_or(&empty);
        assert_eq!(
            &contractible, built,
            "contractible trees differ from blowup-built trees at n = {n}"
        );
        survivor_total += all_survivors.len();
        contractible_total += contractible.len();
        constructive_total += built.len();
    }

    // (iii) the pinned counterexamples to the literal tree statement
    let mut e8 = WTree::single(2);
    // arms of lengths 1, 2 and 4 around vertex 0
    e8 = e8.add_leaf(0, 2);
    e8 = e8.add_leaf(0, 2);
    e8 = e8.add_leaf(2, 2);
    e8 = e8.add_leaf(0, 2);
    e8 = e8.add_leaf(4, 2);
    e8 = e8.add_leaf(5, 2);
    e8 = e8.add_leaf(6, 2);
    assert!(
        tree_is_unimodular_negdef(&ShapeCtx::new(&e8), &e8.w),
        "E8 is unimodular negdef"
    );
    let g = e8.to_graph();
    let all: BTreeSet<CompId> = g.ids().collect();
    assert!(is_negative_definite(&g, &all).unwrap());
    assert!(
        !contracts_to_smooth_point(&g, &all).unwrap().0,
        "E8 has no (-1)-curve and must not contract"
    );

    println!(
        "ACCEPTANCE 5b (trees <= {max_n}, weights [1,{max_w}]: {constructive_total} blowup-built <= {contractible_total} contractible <= {survivor_total} unimodular negdef; equivalence exact on chains, tree form of the claim refuted by E8 - see ledger): PASS"
    );
}

// --- criterion 6 -------------------------------------------------------------

#[test]
fn criterion_6_randomized_barks() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6261726b);
    let mut count = 0;
    while count < 1000 {
        let len = rng.gen_range(1..=8usize);
        let weights: Vec<i64> = (0..len).map(|_| rng.gen_range(2..=6i64)).collect();
        let g = DivisorGraph::chain(&weights);
        let chain = OrderedChain::new(&g, g.ids().collect()).unwrap();
        // bark_twig itself verifies the defining linear system and the
        // closed form against an exact solve
        let b = bark_twig(&g, &chain).unwrap();
        for id in chain.ids() {
            let c = b.coeff(*id);
            assert!(c > rat(0) && c < rat(1), "coefficient out of (0,1)");
        }
        let sq = cuspidal_core::graph::intersection_number(&g, &b, &b).unwrap();
        assert_eq!(sq, -inductance(&g, &chain).unwrap(), "Bk^2 = -ind fails");
        count += 1;
    }
    println!("ACCEPTANCE 6 (1000 random negative definite twigs, coefficients in (0,1), defining system exact, Bk^2 = -ind): PASS");
}

// --- criterion 7 -------------------------------------------------------------

fn cubic_boundary() -> DivisorGraph {
    let config = CuspConfig::log_resolution(vec![seq(&[(3, 2)])]);
    cuspidal_core::search::log_resolution_boundary(&config, 3).unwrap()
}

fn quartic_boundary() -> DivisorGraph {
    let config = CuspConfig::log_resolution(vec![
        seq(&[(3, 2)]),
        seq(&[(3, 2)]),
        seq(&[(3, 2)]),
    ]);
    cuspidal_core::search::log_resolution_boundary(&config, 4).unwrap()
}

fn semi_ordinary_weak_boundary(m: u64, e_self: i64) -> DivisorGraph {
    let res = build_weak_resolution_graph(&seq(&[(2 * m + 1, 2)])).unwrap();
    let mut g = res.graph.clone();
    let e = g.next_id();
    g.add_component(Component { id: e, self_int: e_self, label: None, is_e: true })
        .unwrap();
    for (id, mult) in &res.attach {
        g.add_edge(e, *id, *mult as u32).unwrap();
    }
    g.ksq = Some(9 - res.graph.len() as i64);
    g
}

fn random_snc_minimal_tree(rng: &mut ChaCha8Rng, n: usize) -> DivisorGraph {
    let mut g = DivisorGraph::new();
    let mut weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=6i64)).collect();
    let mut edges = Vec::new();
    for i in 1..n {
        edges.push((rng.gen_range(0..i), i));
    }
    // no superfluous (-1)-curves and no two adjacent (-1)-curves
    let degree = |edges: &[(usize, usize)], v: usize| {
        edges.iter().filter(|(a, b)| *a == v || *b == v).count()
    };
    for v in 0..n {
        if weights[v] == 1 && degree(&edges, v) <= 2 {
            weights[v] = rng.gen_range(2..=6);
        }
    }
    for (a, b) in &edges {
        if weights[*a] == 1 && weights[*b] == 1 {
            weights[*b] = 2;
        }
    }
    // keep at least one component that is not a (-2)-curve
    if weights.iter().all(|w| *w == 2) {
        weights[0] = 3;
    }
    for (i, w) in weights.iter().enumerate() {
        g.add_component(Component::new(i as CompId, -w)).unwrap();
    }
    for (a, b) in edges {
        g.add_edge(a as CompId, b as CompId, 1).unwrap();
    }
    g
}

#[test]
fn criterion_7_peeling_orthogonality_and_steps() {
    // compute_peeling verifies (K + D_flat/2).R = 0 on Delta + Upsilon
    // internally and fails loudly otherwise
    let mut corpus = vec![cubic_boundary(), quartic_boundary()];
    for m in 1..=4 {
        corpus.push(semi_ordinary_weak_boundary(m, 1));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7065656c);
    for _ in 0..200 {
        let n = rng.gen_range(2..=14usize);
        corpus.push(random_snc_minimal_tree(&mut rng, n));
    }
    let mut peeled = 0;
    for g in &corpus {
        compute_peeling(g).unwrap();
        peeled += 1;
    }

    // minimalization steps raise (K+D)^2 by exactly one
    let mut g = DivisorGraph::new();
    g.add_component(Component { id: 0, self_int: 1, label: None, is_e: true }).unwrap();
    g.add_component(Component::new(1, -2)).unwrap();
    g.add_component(Component::new(2, -2)).unwrap();
    g.add_component(Component::new(3, -3)).unwrap();
    g.add_component(Component::new(4, -4)).unwrap();
    g.add_edge(0, 2, 1).unwrap();
    g.add_edge(2, 1, 1).unwrap();
    g.add_edge(0, 3, 1).unwrap();
    g.add_edge(0, 4, 1).unwrap();
    g.ksq = Some(2);
    let peel = compute_peeling(&g).unwrap();
    let mut steps = 0;
    for a in [
        ACandidate { meets: vec![(1, 1), (3, 1)] },
        ACandidate { meets: vec![(2, 1), (4, 1)] },
    ] {
        let rep = check_a_candidate(&g, &peel, &a).unwrap();
        assert!(rep.ok, "{:?}", rep.reasons);
        let out = minimalization_step(&g, &peel, &a).unwrap();
        assert_eq!(out.kd_square_after, out.kd_square_before.clone() + rat(1));
        // the component count and Picard rank stay reconciled, with the
        // minimalization index up by one
        let before = cuspidal_core::peeling::noether_check(&g).unwrap();
        let after = cuspidal_core::peeling::noether_check(&out.graph).unwrap();
        assert_eq!(after.index, before.index + 1);
        steps += 1;
    }
    println!("ACCEPTANCE 7 (peeling orthogonality on {peeled} boundary graphs incl. 200 randomized trees; {steps} minimalization steps raise (K+D)^2 by 1): PASS");
}

// --- criterion 8 -------------------------------------------------------------

#[test]
fn criterion_8_scenario_reproductions() {
    for name in SCENARIO_NAMES {
        let res = run_scenario(name).unwrap();
        res.verify().unwrap_or_else(|e| panic!("{e}"));
    }
    // spot-check the two printed lists beyond the pass flags
    let r = run_scenario("mult3-two-equations").unwrap();
    assert_eq!(r.solutions.len(), 5);
    let r = run_scenario("zeta0-final-pair").unwrap();
    assert_eq!(r.solutions, vec![vec![8, 0], vec![10, 3]]);
    println!(
        "ACCEPTANCE 8 (all {} scenario reproductions match the printed lists): PASS",
        SCENARIO_NAMES.len()
    );
}

// --- criterion 9 -------------------------------------------------------------

#[test]
fn criterion_9_degree_genus_sanity() {
    let cubic = CuspConfig::log_resolution(vec![seq(&[(3, 2)])]);
    let cand = candidate_from_config(&cubic).unwrap().unwrap();
    assert_eq!((cand.d, cand.gamma), (3, -3));
    assert_eq!(
        degree_genus_residuals(&cubic.cusps, cand.d, cand.gamma).unwrap(),
        (0, 0, 0)
    );
    let quartic = CuspConfig::log_resolution(vec![
        seq(&[(3, 2)]),
        seq(&[(3, 2)]),
        seq(&[(3, 2)]),
    ]);
    let cand = candidate_from_config(&quartic).unwrap().unwrap();
    assert_eq!((cand.d, cand.gamma), (4, 2));
    assert_eq!(
        degree_genus_residuals(&quartic.cusps, cand.d, cand.gamma).unwrap(),
        (0, 0, 0)
    );
    // independent brute-force oracle over d <= 300
    for config in [&cubic, &quartic] {
        let s_mixed: i64 = config
            .cusps
            .iter()
            .map(|(s, _)| {
                let inv = cusp_invariants(s).unwrap();
                inv.i - inv.m
            })
            .sum();
        let brute: Vec<i64> = (3..=300).filter(|d| (d - 1) * (d - 2) == s_mixed).collect();
        assert_eq!(brute.len(), 1);
        assert_eq!(candidate_from_config(config).unwrap().unwrap().d, brute[0]);
    }
    println!("ACCEPTANCE 9 (cuspidal cubic and tricuspidal quartic residuals zero; brute-force degree oracle agrees): PASS");
}

// --- criterion 10 ------------------------------------------------------------

#[cfg(feature = "parallel")]
#[test]
fn criterion_10_search_determinism() {
    use cuspidal_core::search::{enumerate, results_to_string, CandidateRecord, Record, Results};
    let render = || {
        let cands = enumerate(2, 7, 3).unwrap();
        results_to_string(&Results {
            records: cands
                .iter()
                .map(|c| Record::Candidate(CandidateRecord::from_candidate(c)))
                .collect(),
        })
    };
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(render);
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(8)
        .build()
        .unwrap()
        .install(render);
    assert_eq!(single, many, "search output differs between 1 and 8 workers");
    assert!(!single.is_empty());
    println!("ACCEPTANCE 10 (search output byte-identical with 1 and 8 workers, {} bytes): PASS", single.len());
}

// --- supporting cross-module checks used by several criteria ------------------

#[test]
fn exceptional_graphs_are_unimodular_and_contract() {
    // every built resolution graph has discriminant 1, is negative definite,
    // and contracts to a smooth point
    let mut rng = ChaCha8Rng::seed_from_u64(0x636f6e74);
    let mut checked = 0;
    while checked < 200 {
        let c = rng.gen_range(2..=40u64);
        let p = rng.gen_range(2..=c);
        if c.gcd(&p) != 1 {
            continue;
        }
        let res = build_exceptional_graph(&seq(&[(c, p)])).unwrap();
        let ids: BTreeSet<CompId> = res.graph.ids().collect();
        assert_eq!(
            cuspidal_core::twig::discriminant(&res.graph, &ids).unwrap(),
            BigInt::from(1)
        );
        assert!(is_negative_definite(&res.graph, &ids).unwrap());
        let (ok, _) = contracts_to_smooth_point(&res.graph, &ids).unwrap();
        assert!(ok);
        checked += 1;
    }
}

#[test]
fn blowup_round_trip_and_ordinary_cusp_resolution() {
    // resolving the tangency of the ordinary cusp's weak resolution: the
    // weak graph is [1] with contact 2, the log graph is [2,1,3]
    let weak = build_weak_resolution_graph(&seq(&[(3, 2)])).unwrap();
    assert_eq!(weak.graph.len(), 1);
    assert_eq!(weak.attach, vec![(0, 2)]);
    let full = build_exceptional_graph(&seq(&[(3, 2)])).unwrap();
    assert_eq!(chain_weights_printed(&full.graph).unwrap(), vec![2, 1, 3]);

    // blow_up/contract round trips preserve graphs and ksq
    let mut g = quartic_boundary();
    g.ksq = Some(0);
    let (ea, eb, _) = g.edges().next().unwrap();
    for spec in [BlowupSpec::Outer(0), BlowupSpec::Inner(ea, eb), BlowupSpec::Free] {
        let (h, e) = blow_up(&g, spec).unwrap();
        let back = cuspidal_core::birational::contract_minus_one(&h, e).unwrap();
        assert_eq!(back, g);
    }
}

#[test]
fn boundary_twig_inductances_match_the_worked_values() {
    // log resolution of a semi-ordinary cusp contributes 1/2 + 1/3
    let g = quartic_boundary();
    let twigs = maximal_twigs(&g).unwrap();
    assert_eq!(twigs.len(), 6);
    let mut total = rat(0);
    for ids in twigs {
        let chain = OrderedChain::new(&g, ids).unwrap();
        total += inductance(&g, &chain).unwrap();
    }
    assert_eq!(total, rat(3) * (rat_frac(1, 2) + rat_frac(1, 3)));
}
