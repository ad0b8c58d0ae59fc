//! Connectivity and structure primitives over induced subgraphs.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::vertex_set::VertexSet;

/// True iff `G[set]` is connected. Empty sets and singletons are connected.
pub fn is_connected(g: &WeightedGraph, set: &VertexSet) -> bool {
    let Some(start) = set.first() else {
        return true;
    };
    reach(g, set, start).len() == set.len()
}

/// Vertices of `set` reachable from `start` inside `G[set]`.
pub fn reach(g: &WeightedGraph, set: &VertexSet, start: usize) -> VertexSet {
    let mut seen = VertexSet::empty(g.n());
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for u in g.neighbors(v).iter() {
            if set.contains(u) && seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen
}

/// Connected components of `G[set]`, ordered by smallest member.
pub fn components(g: &WeightedGraph, set: &VertexSet) -> Vec<VertexSet> {
    let mut left = set.clone();
    let mut out = Vec::new();
    while let Some(v) = left.first() {
        let c = reach(g, set, v);
        left = left.difference(&c);
        out.push(c);
    }
    out
}

/// Cut vertices of `G[set]`. Fails if `G[set]` is empty or disconnected.
pub fn articulation_vertices(g: &WeightedGraph, set: &VertexSet) -> Result<VertexSet> {
    if set.is_empty() {
        return Err(Error::Precondition("empty vertex set".into()));
    }
    if !is_connected(g, set) {
        return Err(Error::Disconnected);
    }
    Ok(cut_vertices_unchecked(g, set))
}

/// Iterative lowpoint computation; components are handled independently.
pub(crate) fn cut_vertices_unchecked(g: &WeightedGraph, set: &VertexSet) -> VertexSet {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut cut = VertexSet::empty(n);
    let mut time = 0;
    for root in set.iter() {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex, parent, remaining neighbors)
        let mut stack: Vec<(usize, usize, Vec<usize>)> = vec![(
            root,
            usize::MAX,
            g.neighbors(root).intersection(set).iter().collect(),
        )];
        while let Some(top) = stack.last_mut() {
            let (v, parent) = (top.0, top.1);
            if let Some(u) = top.2.pop() {
                if disc[u] == usize::MAX {
                    disc[u] = time;
                    low[u] = time;
                    time += 1;
                    if v == root {
                        root_children += 1;
                    }
                    let next = g.neighbors(u).intersection(set).iter().collect();
                    stack.push((u, v, next));
                } else if u != parent {
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if parent != root && low[v] >= disc[parent] {
                        cut.insert(parent);
                    }
                }
            }
        }
        if root_children > 1 {
            cut.insert(root);
        }
    }
    cut
}

/// Blocks (maximal 2-connected subgraphs, bridges included) and cut vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCutTree {
    pub blocks: Vec<VertexSet>,
    pub cut_vertices: VertexSet,
    /// For each cut vertex (ascending), the indices of the blocks containing it.
    pub incidence: Vec<(usize, Vec<usize>)>,
}

impl BlockCutTree {
    pub fn blocks_containing(&self, v: usize) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&b| self.blocks[b].contains(v))
            .collect()
    }
}

pub fn block_cut_tree(g: &WeightedGraph) -> Result<BlockCutTree> {
    let n = g.n();
    let all = g.vertices();
    if n == 0 {
        return Err(Error::Precondition("empty graph".into()));
    }
    if !is_connected(g, &all) {
        return Err(Error::Disconnected);
    }
    let mut blocks: Vec<VertexSet> = Vec::new();
    if n == 1 {
        blocks.push(all.clone());
    } else {
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut time = 0;
        let mut edge_stack: Vec<(usize, usize)> = Vec::new();
        disc[0] = 0;
        low[0] = 0;
        time += 1;
        let mut stack: Vec<(usize, usize, Vec<usize>)> =
            vec![(0, usize::MAX, g.neighbors(0).iter().collect())];
        while let Some(top) = stack.last_mut() {
            let (v, parent) = (top.0, top.1);
            if let Some(u) = top.2.pop() {
                if disc[u] == usize::MAX {
                    disc[u] = time;
                    low[u] = time;
                    time += 1;
                    edge_stack.push((v, u));
                    stack.push((u, v, g.neighbors(u).iter().collect()));
                } else if u != parent && disc[u] < disc[v] {
                    edge_stack.push((v, u));
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        let mut block = VertexSet::empty(n);
                        while let Some((a, b)) = edge_stack.pop() {
                            block.insert(a);
                            block.insert(b);
                            if (a, b) == (parent, v) {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks.sort_by_key(|b| b.iter().collect::<Vec<_>>());
    let mut cut_vertices = VertexSet::empty(n);
    let mut incidence = Vec::new();
    for v in 0..n {
        let bs: Vec<usize> = (0..blocks.len()).filter(|&b| blocks[b].contains(v)).collect();
        if bs.len() >= 2 {
            cut_vertices.insert(v);
            incidence.push((v, bs));
        }
    }
    Ok(BlockCutTree {
        blocks,
        cut_vertices,
        incidence,
    })
}

/// Length of a shortest cycle, `None` for forests.
pub fn girth(g: &WeightedGraph) -> Option<usize> {
    let n = g.n();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            if let Some(b) = best {
                if 2 * dist[v] + 1 >= b {
                    break;
                }
            }
            for u in g.neighbors(v).iter() {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    parent[u] = v;
                    queue.push_back(u);
                } else if parent[v] != u {
                    let len = dist[u] + dist[v] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// Vertices of one shortest cycle in cyclic order, `None` for forests.
pub fn shortest_cycle(g: &WeightedGraph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut best: Option<Vec<usize>> = None;
    for root in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for u in g.neighbors(v).iter() {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    parent[u] = v;
                    queue.push_back(u);
                    continue;
                }
                if parent[v] == u || best.as_ref().is_some_and(|b| b.len() <= dist[u] + dist[v] + 1) {
                    continue;
                }
                let to_root = |mut x: usize| {
                    let mut p = vec![x];
                    while parent[x] != usize::MAX {
                        x = parent[x];
                        p.push(x);
                    }
                    p
                };
                let (pu, mut pv) = (to_root(u), to_root(v));
                // Only a closed walk whose branches meet at the root is a cycle.
                if pu.len() > 1 && pv.len() > 1 && pu[pu.len() - 2] == pv[pv.len() - 2] {
                    continue;
                }
                pv.reverse();
                pv.extend(&pu[..pu.len() - 1]);
                best = Some(pv);
            }
        }
    }
    best
}

/// Maximum number of internally vertex-disjoint `s`-`t` paths, capped at `cap`.
fn local_connectivity(g: &WeightedGraph, s: usize, t: usize, cap: usize) -> usize {
    // Split v into v_in = 2v and v_out = 2v+1.
    let n = g.n();
    let nodes = 2 * n;
    let mut head: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    let mut to: Vec<usize> = Vec::new();
    let mut capy: Vec<i32> = Vec::new();
    let mut add = |a: usize, b: usize, c: i32, head: &mut Vec<Vec<usize>>| {
        head[a].push(to.len());
        to.push(b);
        capy.push(c);
        head[b].push(to.len());
        to.push(a);
        capy.push(0);
    };
    for v in 0..n {
        let c = if v == s || v == t { n as i32 } else { 1 };
        add(2 * v, 2 * v + 1, c, &mut head);
        for u in g.neighbors(v).iter() {
            add(2 * v + 1, 2 * u, n as i32, &mut head);
        }
    }
    let (src, sink) = (2 * s + 1, 2 * t);
    let mut flow = 0;
    while flow < cap {
        let mut prev_edge = vec![usize::MAX; nodes];
        let mut seen = vec![false; nodes];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            if x == sink {
                break;
            }
            for &e in &head[x] {
                let y = to[e];
                if capy[e] > 0 && !seen[y] {
                    seen[y] = true;
                    prev_edge[y] = e;
                    queue.push_back(y);
                }
            }
        }
        if !seen[sink] {
            break;
        }
        let mut x = sink;
        while x != src {
            let e = prev_edge[x];
            capy[e] -= 1;
            capy[e ^ 1] += 1;
            x = to[e ^ 1];
        }
        flow += 1;
    }
    flow
}

/// True iff `|V| > k` and removing fewer than `k` vertices never disconnects.
pub fn is_k_connected(g: &WeightedGraph, k: usize) -> bool {
    let n = g.n();
    if k == 0 {
        return n > 0 && is_connected(g, &g.vertices());
    }
    if n <= k {
        return false;
    }
    if !is_connected(g, &g.vertices()) {
        return false;
    }
    for s in 0..n {
        for t in s + 1..n {
            if !g.has_edge(s, t) && local_connectivity(g, s, t, k) < k {
                return false;
            }
        }
    }
    true
}

/// Partition into twin classes: equal weight and either equal open or equal
/// closed neighborhoods. Classes are sorted by smallest member.
pub fn twin_classes(g: &WeightedGraph) -> Vec<VertexSet> {
    let n = g.n();
    let mut class_of: Vec<Option<usize>> = vec![None; n];
    let mut classes: Vec<VertexSet> = Vec::new();
    for v in 0..n {
        if class_of[v].is_some() {
            continue;
        }
        let mut class = VertexSet::empty(n);
        class.insert(v);
        let idx = classes.len();
        class_of[v] = Some(idx);
        for u in v + 1..n {
            if class_of[u].is_none() && g.weight(u) == g.weight(v) && are_twins(g, u, v) {
                // A vertex has nontrivial twins of only one kind, so pairwise
                // comparison against the first member is enough.
                class.insert(u);
                class_of[u] = Some(idx);
            }
        }
        classes.push(class);
    }
    classes
}

fn are_twins(g: &WeightedGraph, u: usize, v: usize) -> bool {
    let mut nu = g.neighbors(u).clone();
    let mut nv = g.neighbors(v).clone();
    nu.remove(v);
    nv.remove(u);
    nu == nv
}

/// Search effort for [`complement_biclique_exists`].
#[derive(Clone, Copy, Debug)]
pub struct BicliqueEffort {
    /// Exhaustive search runs iff `C(n,s)^2` does not exceed this.
    pub budget: u128,
    pub seed: u64,
    pub restarts: usize,
}

impl Default for BicliqueEffort {
    fn default() -> Self {
        BicliqueEffort {
            budget: 10_000_000,
            seed: 0,
            restarts: 500,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BicliqueVerdict {
    /// Disjoint `left`, `right` of size `s` with no edge of `G` between them.
    Found {
        left: VertexSet,
        right: VertexSet,
        exhaustive: bool,
    },
    NotFound {
        exhaustive: bool,
    },
}

impl BicliqueVerdict {
    pub fn found(&self) -> bool {
        matches!(self, BicliqueVerdict::Found { .. })
    }

    pub fn exhaustive(&self) -> bool {
        match self {
            BicliqueVerdict::Found { exhaustive, .. } | BicliqueVerdict::NotFound { exhaustive } => {
                *exhaustive
            }
        }
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Looks for `K_{s,s}` in the complement of `g`.
pub fn complement_biclique_exists(g: &WeightedGraph, s: usize, effort: BicliqueEffort) -> BicliqueVerdict {
    let n = g.n();
    assert!(s >= 1, "biclique side must be positive");
    let c = binomial(n as u64, s as u64);
    let exhaustive = c.saturating_mul(c) <= effort.budget;
    if 2 * s > n {
        return BicliqueVerdict::NotFound { exhaustive: true };
    }
    let all = g.vertices();
    // Vertices outside `left` adjacent to nothing in `left`.
    let candidates = |left: &VertexSet| {
        let mut cand = all.difference(left);
        for v in left.iter() {
            cand = cand.difference(g.neighbors(v));
        }
        cand
    };
    let finish = |left: VertexSet, cand: &VertexSet, exhaustive: bool| {
        let right = VertexSet::from_iter_n(n, cand.iter().take(s));
        BicliqueVerdict::Found {
            left,
            right,
            exhaustive,
        }
    };
    if exhaustive {
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let left = VertexSet::from_iter_n(n, idx.iter().copied());
            let cand = candidates(&left);
            if cand.len() >= s {
                return finish(left, &cand, true);
            }
            // Next s-subset in lexicographic order.
            let mut i = s;
            loop {
                if i == 0 {
                    return BicliqueVerdict::NotFound { exhaustive: true };
                }
                i -= 1;
                if idx[i] < n - s + i {
                    break;
                }
            }
            idx[i] += 1;
            for j in i + 1..s {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(effort.seed);
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..effort.restarts {
        order.shuffle(&mut rng);
        let mut left = VertexSet::empty(n);
        left.insert(order[0]);
        let mut cand = candidates(&left);
        while left.len() < s {
            let mut best: Option<(usize, usize)> = None;
            for &x in &order {
                if left.contains(x) {
                    continue;
                }
                let mut next = cand.difference(g.neighbors(x));
                next.remove(x);
                let score = next.len();
                let better = match best {
                    None => true,
                    Some((_, b)) => score > b || (score == b && rng.gen_bool(0.5)),
                };
                if better {
                    best = Some((x, score));
                }
            }
            let Some((x, _)) = best else { break };
            left.insert(x);
            cand = cand.difference(g.neighbors(x));
            cand.remove(x);
        }
        if left.len() == s && cand.len() >= s {
            return finish(left, &cand, false);
        }
    }
    BicliqueVerdict::NotFound { exhaustive: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::int;

    fn set(n: usize, vs: &[usize]) -> VertexSet {
        VertexSet::from_iter_n(n, vs.iter().copied())
    }

    /// Plain BFS over an adjacency matrix, independent of [`reach`].
    fn bfs_connected(g: &WeightedGraph, s: &[usize]) -> bool {
        if s.len() <= 1 {
            return true;
        }
        let mut seen = vec![s[0]];
        let mut q = VecDeque::from([s[0]]);
        while let Some(v) = q.pop_front() {
            for &u in s {
                if g.has_edge(v, u) && !seen.contains(&u) {
                    seen.push(u);
                    q.push_back(u);
                }
            }
        }
        seen.len() == s.len()
    }

    #[test]
    fn connectivity_examples() {
        let tri = WeightedGraph::complete(3);
        assert!(is_connected(&tri, &tri.vertices()));
        let p = WeightedGraph::path(3);
        assert!(!is_connected(&p, &set(3, &[0, 2])));
        assert!(is_connected(&p, &VertexSet::empty(3)));
        assert!(is_connected(&p, &set(3, &[2])));
    }

    #[test]
    fn connectivity_matches_bfs_oracle_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=10);
            let mut g = WeightedGraph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.3) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let members: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
            let s = set(n, &members);
            assert_eq!(is_connected(&g, &s), bfs_connected(&g, &members));
        }
    }

    #[test]
    fn articulation_examples() {
        let p = WeightedGraph::path(3);
        assert_eq!(articulation_vertices(&p, &p.vertices()).unwrap(), set(3, &[1]));
        let c5 = WeightedGraph::cycle(5);
        assert!(articulation_vertices(&c5, &c5.vertices()).unwrap().is_empty());
        let star = WeightedGraph::star(3);
        assert_eq!(articulation_vertices(&star, &star.vertices()).unwrap(), set(4, &[0]));
        assert!(matches!(
            articulation_vertices(&p, &set(3, &[0, 2])),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn block_cut_tree_examples() {
        let p4 = WeightedGraph::path(4);
        let t = block_cut_tree(&p4).unwrap();
        assert_eq!(t.blocks.len(), 3);
        assert_eq!(t.cut_vertices, set(4, &[1, 2]));

        let c5 = WeightedGraph::cycle(5);
        let t = block_cut_tree(&c5).unwrap();
        assert_eq!(t.blocks.len(), 1);
        assert!(t.cut_vertices.is_empty());

        // Triangle 0-1-2 with pendant edges 0-3 and 1-4.
        let g = WeightedGraph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 4)]).unwrap();
        let t = block_cut_tree(&g).unwrap();
        assert_eq!(
            t.blocks,
            vec![set(5, &[0, 1, 2]), set(5, &[0, 3]), set(5, &[1, 4])]
        );
        assert_eq!(t.cut_vertices, set(5, &[0, 1]));
        assert_eq!(t.incidence, vec![(0, vec![0, 1]), (1, vec![0, 2])]);
    }

    #[test]
    fn girth_examples() {
        assert_eq!(girth(&WeightedGraph::cycle(7)), Some(7));
        assert_eq!(girth(&WeightedGraph::path(6)), None);
        assert_eq!(girth(&WeightedGraph::star(4)), None);
        assert_eq!(girth(&WeightedGraph::petersen()), Some(5));
        assert_eq!(girth(&WeightedGraph::complete(4)), Some(3));
    }

    #[test]
    fn shortest_cycle_is_a_cycle_of_girth_length() {
        for g in [WeightedGraph::petersen(), WeightedGraph::cycle(6), WeightedGraph::complete(5)] {
            let c = shortest_cycle(&g).unwrap();
            assert_eq!(Some(c.len()), girth(&g));
            for i in 0..c.len() {
                assert!(g.has_edge(c[i], c[(i + 1) % c.len()]), "{c:?}");
            }
            let mut d = c.clone();
            d.sort();
            d.dedup();
            assert_eq!(d.len(), c.len());
        }
        assert!(shortest_cycle(&WeightedGraph::path(5)).is_none());
    }

    #[test]
    fn k_connectivity_examples() {
        assert!(is_k_connected(&WeightedGraph::complete(4), 3));
        assert!(!is_k_connected(&WeightedGraph::complete(4), 4));
        let c6 = WeightedGraph::cycle(6);
        assert!(is_k_connected(&c6, 2));
        assert!(!is_k_connected(&c6, 3));
        assert!(is_k_connected(&WeightedGraph::petersen(), 3));
        assert!(!is_k_connected(&WeightedGraph::path(3), 2));
    }

    #[test]
    fn twin_examples() {
        let p = WeightedGraph::path(3);
        assert_eq!(twin_classes(&p), vec![set(3, &[0, 2]), set(3, &[1])]);
        let c5 = WeightedGraph::cycle(5);
        assert_eq!(twin_classes(&c5).len(), 5);
        // Different weights split a class.
        let p = WeightedGraph::path(3).with_weights([int(1), int(0), int(2)]);
        assert_eq!(twin_classes(&p).len(), 3);
        // True twins: K3 vertices.
        assert_eq!(twin_classes(&WeightedGraph::complete(3)).len(), 1);
    }

    #[test]
    fn biclique_examples() {
        let k5 = WeightedGraph::complete(5);
        let v = complement_biclique_exists(&k5, 1, BicliqueEffort::default());
        assert_eq!(v, BicliqueVerdict::NotFound { exhaustive: true });
        let empty = WeightedGraph::new(4);
        let v = complement_biclique_exists(&empty, 2, BicliqueEffort::default());
        assert!(v.found() && v.exhaustive());
        // C4 complement is a perfect matching: no K_{2,2}... but C4 itself is
        // K_{2,2}, so its complement contains K_{1,1} only.
        let c4 = WeightedGraph::cycle(4);
        assert!(!complement_biclique_exists(&c4, 2, BicliqueEffort::default()).found());
        assert!(complement_biclique_exists(&c4, 1, BicliqueEffort::default()).found());
    }

    #[test]
    fn heuristic_biclique_finds_planted_instance() {
        // 30 vertices: dense graph except no edges between 0..8 and 8..16.
        let n = 30;
        let mut g = WeightedGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                let planted = (u < 8 && (8..16).contains(&v)) || (v < 8 && (8..16).contains(&u));
                if !planted {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        let effort = BicliqueEffort {
            budget: 0,
            ..BicliqueEffort::default()
        };
        let v = complement_biclique_exists(&g, 8, effort);
        assert!(v.found() && !v.exhaustive());
        if let BicliqueVerdict::Found { left, right, .. } = v {
            for a in left.iter() {
                assert!(right.iter().all(|b| !g.has_edge(a, b) && a != b));
            }
        }
    }
}
