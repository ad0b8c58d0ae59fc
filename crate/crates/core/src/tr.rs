//! When game TR takes every vertex: the extension step on 2-connected
//! graphs, full orderings, and the block-structure classification.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::game::{legal_moves_for, Variant};
use crate::graph::WeightedGraph;
use crate::structure::{block_cut_tree, cut_vertices_unchecked, is_connected};
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrVerdict {
    /// Some playout of game TR takes every vertex.
    pub completable: bool,
    /// Every playout of game TR takes every vertex.
    pub always_completes: bool,
    /// A full take-order when `completable`.
    pub witness: Option<Vec<usize>>,
    pub obstruction: Option<String>,
}

fn is_two_connected(g: &WeightedGraph) -> bool {
    let all = g.vertices();
    g.n() >= 3 && is_connected(g, &all) && cut_vertices_unchecked(g, &all).is_empty()
}

/// BFS distances from `s` inside `G[set]`.
fn distances(g: &WeightedGraph, set: &VertexSet, s: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for u in g.neighbors(v).iter() {
            if set.contains(u) && dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// A vertex `v` outside `c` and distinct from `forbidden` such that both
/// `c + v` and its complement induce connected subgraphs.
///
/// Among the remaining neighbors of `c`, a pair at maximum distance in the
/// remaining graph is chosen (lexicographically first on ties); the lower
/// index of the two that is neither forbidden nor a cut vertex is returned.
pub fn extend_split(g: &WeightedGraph, c: &VertexSet, forbidden: usize) -> Result<usize> {
    let n = g.n();
    if !is_two_connected(g) {
        return Err(Error::Precondition("graph is not 2-connected".into()));
    }
    if forbidden >= n {
        return Err(Error::VertexOutOfRange { vertex: forbidden, n });
    }
    if c.contains(forbidden) {
        return Err(Error::Precondition(format!("forbidden vertex {forbidden} is in C")));
    }
    if c.len() + 2 > n {
        return Err(Error::Precondition("C must leave at least two vertices".into()));
    }
    let rest = c.complement();
    if !is_connected(g, c) || !is_connected(g, &rest) {
        return Err(Error::Precondition("C or its complement is not connected".into()));
    }
    let cut = cut_vertices_unchecked(g, &rest);
    if c.is_empty() {
        return rest
            .iter()
            .find(|&v| v != forbidden && !cut.contains(v))
            .ok_or_else(|| Error::Precondition("no removable vertex".into()));
    }
    let attach: Vec<usize> = rest
        .iter()
        .filter(|&v| !g.neighbors(v).is_disjoint(c))
        .collect();
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, &w1) in attach.iter().enumerate() {
        let dist = distances(g, &rest, w1);
        for &w2 in &attach[i + 1..] {
            if best.is_none_or(|(d, _, _)| dist[w2] > d) {
                best = Some((dist[w2], w1, w2));
            }
        }
    }
    let (_, w1, w2) =
        best.ok_or_else(|| Error::Precondition("fewer than two vertices attach to C".into()))?;
    [w1, w2]
        .into_iter()
        .find(|&w| w != forbidden && !cut.contains(w))
        .ok_or_else(|| Error::Precondition("no far neighbor of C can be taken".into()))
}

/// Orders the vertices from `u` to `v` so that every prefix and every suffix
/// induces a connected subgraph. A single edge counts as 2-connected here.
pub fn full_order(g: &WeightedGraph, u: usize, v: usize) -> Result<Vec<usize>> {
    let n = g.n();
    for x in [u, v] {
        if x >= n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
    }
    if u == v {
        return Err(Error::Precondition("endpoints must differ".into()));
    }
    if n == 2 {
        if !g.has_edge(u, v) {
            return Err(Error::Precondition("graph is not connected".into()));
        }
        return Ok(vec![u, v]);
    }
    let mut c = VertexSet::empty(n);
    c.insert(u);
    let mut order = vec![u];
    while c.len() + 1 < n {
        let next = extend_split(g, &c, v)?;
        c.insert(next);
        order.push(next);
    }
    order.push(v);
    Ok(order)
}

/// Order of a block (given as a vertex set of `g`) from `first` to `last`.
fn block_order(g: &WeightedGraph, block: &VertexSet, first: usize, last: usize) -> Result<Vec<usize>> {
    let (sub, map) = g.induced(block);
    let local = |x: usize| map.iter().position(|&m| m == x).expect("vertex in block");
    let order = full_order(&sub, local(first), local(last))?;
    Ok(order.into_iter().map(|i| map[i]).collect())
}

/// Classifies `g` by its block structure and builds a full take-order when
/// one exists.
pub fn tr_classify(g: &WeightedGraph) -> Result<TrVerdict> {
    let n = g.n();
    let bct = block_cut_tree(g)?;
    if n == 1 {
        return Ok(TrVerdict {
            completable: true,
            always_completes: true,
            witness: Some(vec![0]),
            obstruction: None,
        });
    }
    for (v, blocks) in &bct.incidence {
        if blocks.len() > 2 {
            return Ok(TrVerdict {
                completable: false,
                always_completes: false,
                witness: None,
                obstruction: Some(format!(
                    "cut vertex {v} separates the graph into {} components",
                    blocks.len()
                )),
            });
        }
    }
    let cuts_in = |b: &VertexSet| b.intersection(&bct.cut_vertices);
    for b in &bct.blocks {
        let k = cuts_in(b).len();
        if k > 2 {
            return Ok(TrVerdict {
                completable: false,
                always_completes: false,
                witness: None,
                obstruction: Some(format!(
                    "block {:?} contains {k} cut vertices",
                    b.iter().collect::<Vec<_>>()
                )),
            });
        }
    }
    let stuck = bct
        .blocks
        .iter()
        .find(|b| b.len() >= 3 && cuts_in(b).len() >= 2);
    let obstruction = stuck.map(|b| {
        format!(
            "block {:?} with at least three vertices contains 2 cut vertices",
            b.iter().collect::<Vec<_>>()
        )
    });
    Ok(TrVerdict {
        completable: true,
        always_completes: stuck.is_none(),
        witness: Some(chain_witness(g, &bct.blocks, &bct.cut_vertices)?),
        obstruction,
    })
}

/// Walks the blocks, which form a path, from an end block and orders each
/// block between the cut vertices it shares with its neighbours.
fn chain_witness(g: &WeightedGraph, blocks: &[VertexSet], cuts: &VertexSet) -> Result<Vec<usize>> {
    let start = (0..blocks.len())
        .find(|&i| blocks[i].intersection(cuts).len() <= 1)
        .expect("a path of blocks has an end");
    let mut order = Vec::new();
    let mut used = vec![false; blocks.len()];
    let mut current = start;
    let mut entry: Option<usize> = None;
    loop {
        used[current] = true;
        let block = &blocks[current];
        let exit = block
            .intersection(cuts)
            .iter()
            .find(|&c| Some(c) != entry);
        let first = entry.unwrap_or_else(|| {
            block
                .iter()
                .find(|&v| !cuts.contains(v))
                .expect("an end block has a vertex that is not a cut vertex")
        });
        let last = match exit {
            Some(x) => x,
            None => block
                .iter()
                .filter(|&v| v != first)
                .last()
                .expect("blocks have at least two vertices"),
        };
        let part = block_order(g, block, first, last)?;
        let skip = usize::from(entry.is_some());
        order.extend(part.into_iter().skip(skip));
        let Some(x) = exit else { break };
        current = (0..blocks.len())
            .find(|&i| !used[i] && blocks[i].contains(x))
            .expect("cut vertex lies in a second block");
        entry = Some(x);
    }
    Ok(order)
}

pub const TR_ORACLE_LIMIT: usize = 12;

/// Exhaustive playouts of game TR: whether some playout takes every vertex
/// and whether all of them do.
pub fn tr_oracle(g: &WeightedGraph) -> Result<(bool, bool)> {
    if g.n() > TR_ORACLE_LIMIT {
        return Err(Error::TooLarge(format!(
            "the playout oracle is limited to {TR_ORACLE_LIMIT} vertices"
        )));
    }
    let mut memo = HashMap::new();
    Ok(playouts(g, VertexSet::empty(g.n()), &mut memo))
}

fn playouts(g: &WeightedGraph, taken: VertexSet, memo: &mut HashMap<Vec<u64>, (bool, bool)>) -> (bool, bool) {
    if taken.len() == g.n() {
        return (true, true);
    }
    if let Some(&r) = memo.get(taken.words()) {
        return r;
    }
    let moves = legal_moves_for(g, Variant::TR, &taken);
    let mut result = (false, !moves.is_empty());
    for v in moves.iter() {
        let mut next = taken.clone();
        next.insert(v);
        let (some, all) = playouts(g, next, memo);
        result.0 |= some;
        result.1 &= all;
    }
    memo.insert(taken.words().to_vec(), result);
    result
}
