//! Graph families with the parity, connectivity and weight patterns used in
//! the unfairness results.

use std::thread;

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::enumerate::{bracelets, free_trees};
use crate::error::{Error, Result};
use crate::game::Ruleset;
use crate::graph::WeightedGraph;
use crate::solver::{solve_weight, SolveResult};
use crate::structure::{
    binomial, complement_biclique_exists, components, girth, is_connected, shortest_cycle, BicliqueEffort,
    BicliqueVerdict,
};
use crate::vertex_set::VertexSet;
use crate::weight::{int, Weight};

/// A weighted cycle in the given order.
pub fn pizza_cycle(weights: &[Weight]) -> Result<WeightedGraph> {
    if weights.len() < 3 {
        return Err(Error::Params(format!(
            "a cycle needs at least 3 vertices, got {}",
            weights.len()
        )));
    }
    let mut g = WeightedGraph::cycle(weights.len());
    for (v, w) in weights.iter().enumerate() {
        g.set_weight(v, w.clone())?;
    }
    Ok(g)
}

/// An even cycle of `blocks` cliques of size `2⌈k/4⌉`, consecutive cliques
/// completely joined. The lowest vertex of every even-numbered clique has
/// weight 1. Vertices are labelled `block<i>`.
pub fn clique_cycle(k: usize, blocks: usize) -> Result<WeightedGraph> {
    if k < 2 {
        return Err(Error::Params("k must be at least 2".into()));
    }
    if blocks < 4 || blocks % 2 == 1 {
        return Err(Error::Params(format!("the number of blocks must be even and at least 4, got {blocks}")));
    }
    let size = 2 * k.div_ceil(4);
    let n = blocks * size;
    let mut g = WeightedGraph::new(n);
    let members = |b: usize| (b * size)..((b + 1) * size);
    for b in 0..blocks {
        for u in members(b) {
            g.set_label(u, format!("block{b}"))?;
            for v in members(b).filter(|&v| v > u) {
                g.add_edge(u, v)?;
            }
            for v in members((b + 1) % blocks) {
                g.add_edge(u, v)?;
            }
        }
        if b % 2 == 0 {
            g.set_weight(b * size, int(1))?;
        }
    }
    debug_assert!(n % 2 == 0);
    Ok(g)
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

fn set_name(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// The bipartite X/Y/Z graph: `Y` has `m` vertices of weight 1, `Z` one
/// vertex per `k`-subset of `Y` joined to its members, and `X` is joined to
/// all of `Y` with `|X| = |Y| + |Z| + 3`, which makes the order odd.
/// Vertices are ordered Y, Z, X and labelled `Y<i>`, `Z{..}`, `X<i>`.
pub fn xyz_graph(k: usize, m: usize) -> Result<WeightedGraph> {
    if k < 1 {
        return Err(Error::Params("k must be at least 1".into()));
    }
    if m < k + 2 {
        return Err(Error::Params(format!("m must be at least k + 2 = {}", k + 2)));
    }
    let zs = subsets(m, k);
    if zs.len() > 4096 {
        return Err(Error::TooLarge(format!("{} subsets", zs.len())));
    }
    let x_count = m + zs.len() + 3;
    let n = m + zs.len() + x_count;
    let mut g = WeightedGraph::new(n);
    for y in 0..m {
        g.set_weight(y, int(1))?;
        g.set_label(y, format!("Y{}", y + 1))?;
    }
    for (i, z) in zs.iter().enumerate() {
        let v = m + i;
        g.set_label(v, format!("Z{}", set_name(z)))?;
        for &y in z {
            g.add_edge(v, y)?;
        }
    }
    for i in 0..x_count {
        let x = m + zs.len() + i;
        g.set_label(x, format!("X{}", i + 1))?;
        for y in 0..m {
            g.add_edge(x, y)?;
        }
    }
    debug_assert!(n % 2 == 1);
    Ok(g)
}

pub const HNK_MAX_N: usize = 12;

/// `H_n` with every weight-0 vertex blown up into a clique of `2k+1`
/// vertices and every edge into a complete bipartite graph.
pub fn hnk_graph(n: usize, k: usize) -> Result<WeightedGraph> {
    if !(1..=HNK_MAX_N).contains(&n) {
        return Err(Error::Params(format!("n must be in 1..={HNK_MAX_N}")));
    }
    let size = 2 * k + 1;
    let subsets = (1usize << n) - 1;
    let total = n + size * (n + subsets);
    let mut g = WeightedGraph::new(total);
    let b_clique = |i: usize| (n + i * size)..(n + (i + 1) * size);
    let c_base = n + n * size;
    let c_clique = |s: usize| (c_base + (s - 1) * size)..(c_base + s * size);
    let add_clique = |g: &mut WeightedGraph, r: std::ops::Range<usize>, name: String| -> Result<()> {
        for (j, u) in r.clone().enumerate() {
            g.set_label(u, format!("{name}.{j}"))?;
            for v in r.clone().filter(|&v| v > u) {
                g.add_edge(u, v)?;
            }
        }
        Ok(())
    };
    for i in 0..n {
        g.set_weight(i, int(1))?;
        g.set_label(i, format!("a{}", i + 1))?;
        add_clique(&mut g, b_clique(i), format!("b{}", i + 1))?;
        for u in b_clique(i) {
            g.add_edge(i, u)?;
        }
    }
    for s in 1..=subsets {
        let members: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).collect();
        add_clique(&mut g, c_clique(s), format!("c{}", set_name(&members)))?;
        for &i in &members {
            for u in c_clique(s) {
                for v in b_clique(i) {
                    g.add_edge(u, v)?;
                }
            }
        }
    }
    debug_assert!(total % 2 == 1);
    Ok(g)
}

/// A clique `a_1..a_n` of weight 1 plus a weight-0 vertex per `k`-subset,
/// joined to the members of its subset. The order must be even.
pub fn gnk_graph(n: usize, k: usize) -> Result<WeightedGraph> {
    if k < 1 || n <= k {
        return Err(Error::Params("need n > k >= 1".into()));
    }
    let count = binomial(n as u64, k as u64);
    if count > 4096 {
        return Err(Error::TooLarge(format!("{count} subsets")));
    }
    let total = n + count as usize;
    if total % 2 == 1 {
        return Err(Error::Params(format!(
            "n + C(n, k) = {total} is odd; the construction needs an even order"
        )));
    }
    let mut g = WeightedGraph::new(total);
    for i in 0..n {
        g.set_weight(i, int(1))?;
        g.set_label(i, format!("a{}", i + 1))?;
        for j in i + 1..n {
            g.add_edge(i, j)?;
        }
    }
    for (idx, s) in subsets(n, k).iter().enumerate() {
        let v = n + idx;
        g.set_label(v, format!("b{}", set_name(s)))?;
        for &i in s {
            g.add_edge(v, i)?;
        }
    }
    Ok(g)
}

/// A path on `2t + 1` vertices with weight 1 in the middle.
pub fn centered_path(t: usize) -> Result<WeightedGraph> {
    if t < 1 {
        return Err(Error::Params("t must be at least 1".into()));
    }
    let mut g = WeightedGraph::path(2 * t + 1);
    g.set_weight(t, int(1))?;
    Ok(g)
}

#[derive(Clone, Debug)]
pub struct ExpanderParams {
    pub epsilon: f64,
    pub n: usize,
    pub seed: u64,
}

impl ExpanderParams {
    pub fn new(epsilon: f64, n: usize, seed: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Params("epsilon must lie in (0, 1)".into()));
        }
        if n < 3 {
            return Err(Error::Params("n must be at least 3".into()));
        }
        Ok(ExpanderParams { epsilon, n, seed })
    }

    /// `c = 2 ln(3e/ε) / ε`.
    pub fn c(&self) -> f64 {
        2.0 * (3.0 * std::f64::consts::E / self.epsilon).ln() / self.epsilon
    }

    /// `c' = 1 / (2 ln(3c))`.
    pub fn c_prime(&self) -> f64 {
        1.0 / (2.0 * (3.0 * self.c()).ln())
    }

    pub fn girth_bound(&self) -> f64 {
        self.c_prime() * (self.n as f64).ln()
    }

    pub fn degree_bound(&self) -> f64 {
        9.0 * self.c()
    }

    pub fn threshold(&self) -> usize {
        (self.epsilon * self.n as f64).ceil() as usize
    }
}

#[derive(Clone, Debug)]
pub struct ExpanderReport {
    pub c: f64,
    pub c_prime: f64,
    pub sampled_edges: usize,
    pub removed_for_cycles: usize,
    pub removed_for_degree: usize,
    pub removed_arbitrary: usize,
    pub connecting_edges: usize,
    pub girth: Option<usize>,
    pub girth_bound: f64,
    pub max_degree: usize,
    pub degree_bound: f64,
    pub connected: bool,
    pub biclique_side: usize,
    pub biclique: BicliqueVerdict,
    pub biclique_pairs: BicliqueVerdict,
}

impl ExpanderReport {
    pub fn girth_ok(&self) -> bool {
        self.girth.is_none_or(|g| g as f64 >= self.girth_bound)
    }
}

#[derive(Clone, Debug)]
pub struct ExpanderInstance {
    /// The core, all weights 1.
    pub h: WeightedGraph,
    /// The core plus a weight-0 leaf on every vertex; leaf of `i` is `n + i`.
    pub g: WeightedGraph,
    pub report: ExpanderReport,
}

/// Samples `G(3n, c/n)`, removes a vertex from every short cycle, every
/// vertex of degree above `9c`, then lowest-index vertices down to `n`, and
/// joins the remaining components through minimum-degree vertices.
pub fn leafy_expander(params: &ExpanderParams) -> Result<ExpanderInstance> {
    let n = params.n;
    let c = params.c();
    let big = 3 * n;
    let p = (c / n as f64).min(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut sample = WeightedGraph::new(big);
    let mut sampled_edges = 0;
    for u in 0..big {
        for v in u + 1..big {
            if rng.gen_bool(p) {
                sample.add_edge(u, v)?;
                sampled_edges += 1;
            }
        }
    }
    let mut alive = VertexSet::full(big);
    let bound = params.girth_bound();
    let mut removed_for_cycles = 0;
    loop {
        let (sub, map) = sample.induced(&alive);
        match shortest_cycle(&sub) {
            Some(cycle) if (cycle.len() as f64) < bound => {
                let victim = cycle.iter().map(|&i| map[i]).min().expect("cycle is nonempty");
                alive.remove(victim);
                removed_for_cycles += 1;
            }
            _ => break,
        }
    }
    let mut removed_for_degree = 0;
    loop {
        let heavy = alive.iter().find(|&v| {
            sample.neighbors(v).intersection(&alive).len() as f64 > params.degree_bound()
        });
        match heavy {
            Some(v) => {
                alive.remove(v);
                removed_for_degree += 1;
            }
            None => break,
        }
    }
    if alive.len() < n {
        return Err(Error::Generation(format!(
            "only {} vertices survive pruning, {n} needed; try another seed",
            alive.len()
        )));
    }
    let mut removed_arbitrary = 0;
    while alive.len() > n {
        let v = alive.first().expect("nonempty");
        alive.remove(v);
        removed_arbitrary += 1;
    }
    let (mut h, _) = sample.induced(&alive);
    let mut connecting_edges = 0;
    loop {
        let comps = components(&h, &h.vertices());
        if comps.len() <= 1 {
            break;
        }
        let pick = |comp: &VertexSet| {
            comp.iter()
                .min_by_key(|&v| (h.degree(v), v))
                .expect("nonempty component")
        };
        let (u, v) = (pick(&comps[0]), pick(&comps[1]));
        h.add_edge(u, v)?;
        connecting_edges += 1;
    }
    let h = h.with_weights(vec![int(1); n]);
    let mut g = WeightedGraph::new(2 * n);
    for (u, v) in h.edges() {
        g.add_edge(u, v)?;
    }
    for i in 0..n {
        g.set_weight(i, int(1))?;
        g.set_label(i, format!("h{i}"))?;
        g.add_edge(i, n + i)?;
        g.set_label(n + i, format!("leaf{i}"))?;
    }
    let side = params.threshold();
    let effort = BicliqueEffort {
        seed: params.seed,
        ..BicliqueEffort::default()
    };
    let report = ExpanderReport {
        c,
        c_prime: params.c_prime(),
        sampled_edges,
        removed_for_cycles,
        removed_for_degree,
        removed_arbitrary,
        connecting_edges,
        girth: girth(&h),
        girth_bound: bound,
        max_degree: (0..n).map(|v| h.degree(v)).max().unwrap_or(0),
        degree_bound: params.degree_bound() + 1.0,
        connected: is_connected(&h, &h.vertices()),
        biclique_side: side,
        biclique: complement_biclique_exists(&h, side, effort),
        biclique_pairs: complement_biclique_exists(&h, 2, effort),
    };
    Ok(ExpanderInstance { h, g, report })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Trees,
    Cycles,
}

#[derive(Clone, Debug)]
pub struct ExtremalResult {
    pub graph: WeightedGraph,
    pub alice: Weight,
    pub total: Weight,
    pub solve: SolveResult,
    pub examined: usize,
}

impl ExtremalResult {
    pub fn fraction(&self) -> Weight {
        &self.alice / &self.total
    }
}

pub const EXTREMAL_MAX_CYCLE: usize = 15;
pub const EXTREMAL_MAX_TREE: usize = 11;

/// Solves every member of the family up to `max_n` vertices with weights
/// from `weightset` and returns the one minimizing Alice's share of the
/// total (fewest vertices, then first generated, on ties). Cycles are taken
/// up to rotation and reflection, trees up to isomorphism with every weight
/// assignment.
pub fn search_extremal(
    family: Family,
    max_n: usize,
    weightset: &[Weight],
    ruleset: Ruleset,
    threads: usize,
) -> Result<Option<ExtremalResult>> {
    if weightset.is_empty() {
        return Err(Error::Params("empty weight set".into()));
    }
    let candidates: Vec<WeightedGraph> = match family {
        Family::Cycles => {
            if max_n > EXTREMAL_MAX_CYCLE {
                return Err(Error::TooLarge(format!("cycles are searched up to {EXTREMAL_MAX_CYCLE} vertices")));
            }
            let mut out = Vec::new();
            for n in 3..=max_n {
                for word in bracelets(n, weightset.len()) {
                    let ws: Vec<Weight> = word.iter().map(|&i| weightset[i].clone()).collect();
                    out.push(pizza_cycle(&ws)?);
                }
            }
            out
        }
        Family::Trees => {
            if max_n > EXTREMAL_MAX_TREE {
                return Err(Error::TooLarge(format!("trees are searched up to {EXTREMAL_MAX_TREE} vertices")));
            }
            let mut out = Vec::new();
            for n in 1..=max_n {
                let combos = weightset.len().checked_pow(n as u32).expect("small search");
                for t in free_trees(n) {
                    for idx in 0..combos {
                        let mut x = idx;
                        let ws: Vec<Weight> = (0..n)
                            .map(|_| {
                                let w = weightset[x % weightset.len()].clone();
                                x /= weightset.len();
                                w
                            })
                            .collect();
                        out.push(t.clone().with_weights(ws));
                    }
                }
            }
            out
        }
    };
    let candidates: Vec<WeightedGraph> = candidates
        .into_iter()
        .filter(|g| !g.total_weight().is_zero())
        .collect();
    let examined = candidates.len();
    let workers = threads.max(1).min(examined.max(1));
    let chunk = examined.div_ceil(workers).max(1);
    let partial: Vec<Result<Option<(usize, Weight, SolveResult)>>> = thread::scope(|scope| {
        let handles: Vec<_> = candidates
            .chunks(chunk)
            .enumerate()
            .map(|(ci, part)| {
                scope.spawn(move || {
                    let mut best: Option<(usize, Weight, SolveResult)> = None;
                    for (i, g) in part.iter().enumerate() {
                        let r = solve_weight(g, ruleset)?;
                        let frac = r.alice_value().expect("weight scoring") / g.total_weight();
                        if best.as_ref().is_none_or(|(_, f, _)| frac < *f) {
                            best = Some((ci * chunk + i, frac, r));
                        }
                    }
                    Ok(best)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("search thread panicked")).collect()
    });
    let mut best: Option<(usize, Weight, SolveResult)> = None;
    for p in partial {
        if let Some(cand) = p? {
            if best.as_ref().is_none_or(|(_, f, _)| cand.1 < *f) {
                best = Some(cand);
            }
        }
    }
    Ok(best.map(|(i, _, solve)| {
        let graph = candidates[i].clone();
        ExtremalResult {
            alice: solve.alice_value().expect("weight scoring").clone(),
            total: graph.total_weight(),
            graph,
            solve,
            examined,
        }
    }))
}

/// Alice's exact share as a float, for display only.
pub fn approx(w: &Weight) -> f64 {
    w.to_f64().unwrap_or(f64::NAN)
}
