//! Exhaustive and random graph families used by searches and test drivers.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::WeightedGraph;
use crate::structure::is_connected;

/// Adjacency as bit rows, `n <= 11`.
type Rows = Vec<u16>;

fn graph_of(rows: &Rows) -> WeightedGraph {
    let n = rows.len();
    let mut g = WeightedGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rows[u] >> v & 1 == 1 {
                g.add_edge(u, v).expect("valid edge");
            }
        }
    }
    g
}

/// Upper-triangle bit string of `rows` relabelled by `perm`.
fn code(rows: &Rows, perm: &[usize]) -> u64 {
    let n = rows.len();
    let mut inv = vec![0; n];
    for (v, &p) in perm.iter().enumerate() {
        inv[p] = v;
    }
    let mut c = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            c = c << 1 | (rows[inv[i]] >> inv[j] & 1) as u64;
        }
    }
    c
}

/// Canonical form: the largest code over relabellings that sort vertices by
/// descending degree. Degree is an invariant, so this is a complete invariant.
fn canonical(rows: &Rows) -> u64 {
    let n = rows.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(rows[v].count_ones()));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match groups.last_mut() {
            Some(gr) if rows[gr[0]].count_ones() == rows[v].count_ones() => gr.push(v),
            _ => groups.push(vec![v]),
        }
    }
    let mut best = 0u64;
    let mut perm = vec![0usize; n];
    permute_groups(rows, &mut groups, 0, 0, &mut perm, &mut best);
    best
}

fn permute_groups(
    rows: &Rows,
    groups: &mut [Vec<usize>],
    gi: usize,
    offset: usize,
    perm: &mut Vec<usize>,
    best: &mut u64,
) {
    if gi == groups.len() {
        *best = (*best).max(code(rows, perm));
        return;
    }
    let len = groups[gi].len();
    heap_permutations(groups, gi, len, &mut |groups: &mut [Vec<usize>]| {
        for (i, &v) in groups[gi].iter().enumerate() {
            perm[v] = offset + i;
        }
        let mut rest = groups.to_vec();
        permute_groups(rows, &mut rest, gi + 1, offset + len, perm, best);
    });
}

fn heap_permutations(
    groups: &mut [Vec<usize>],
    gi: usize,
    k: usize,
    f: &mut dyn FnMut(&mut [Vec<usize>]),
) {
    if k <= 1 {
        f(groups);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(groups, gi, k - 1, f);
        if k % 2 == 0 {
            groups[gi].swap(i, k - 1);
        } else {
            groups[gi].swap(0, k - 1);
        }
    }
    heap_permutations(groups, gi, k - 1, f);
}

/// All graphs on `n <= 8` vertices up to isomorphism.
pub fn all_graphs(n: usize) -> Vec<WeightedGraph> {
    assert!(n <= 8, "graph enumeration is limited to 8 vertices");
    let mut level: Vec<Rows> = vec![vec![]];
    for k in 1..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for rows in &level {
            for mask in 0u16..(1 << (k - 1)) {
                let mut r = rows.clone();
                for (v, row) in r.iter_mut().enumerate() {
                    if mask >> v & 1 == 1 {
                        *row |= 1 << (k - 1);
                    }
                }
                r.push(mask);
                if seen.insert(canonical(&r)) {
                    next.push(r);
                }
            }
        }
        level = next;
    }
    level.iter().map(graph_of).collect()
}

/// Connected graphs on `n` vertices up to isomorphism.
pub fn connected_graphs(n: usize) -> Vec<WeightedGraph> {
    all_graphs(n)
        .into_iter()
        .filter(|g| is_connected(g, &g.vertices()))
        .collect()
}

/// Every connected labelled graph on `n <= 6` vertices.
pub fn labelled_connected_graphs(n: usize) -> Vec<WeightedGraph> {
    assert!(n <= 6, "labelled enumeration is limited to 6 vertices");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = WeightedGraph::from_edges(n, &edges).expect("valid edges");
        if is_connected(&g, &g.vertices()) {
            out.push(g);
        }
    }
    out
}

/// Canonical string of a tree rooted at `root` (AHU encoding).
fn rooted_code(rows: &Rows, root: usize, parent: usize) -> String {
    let mut kids: Vec<String> = (0..rows.len())
        .filter(|&u| rows[root] >> u & 1 == 1 && u != parent)
        .map(|u| rooted_code(rows, u, root))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

fn tree_code(rows: &Rows) -> String {
    // Encode from each center; the smaller string is canonical.
    let n = rows.len();
    let mut deg: Vec<u32> = rows.iter().map(|r| r.count_ones()).collect();
    let mut alive: Vec<bool> = vec![true; n];
    let mut left = n;
    while left > 2 {
        let leaves: Vec<usize> = (0..n).filter(|&v| alive[v] && deg[v] <= 1).collect();
        for &v in &leaves {
            alive[v] = false;
            left -= 1;
            for u in 0..n {
                if rows[v] >> u & 1 == 1 && alive[u] {
                    deg[u] -= 1;
                }
            }
        }
    }
    (0..n)
        .filter(|&v| alive[v])
        .map(|c| rooted_code(rows, c, usize::MAX))
        .min()
        .unwrap_or_default()
}

/// Trees on `n <= 11` vertices up to isomorphism.
pub fn free_trees(n: usize) -> Vec<WeightedGraph> {
    assert!((1..=11).contains(&n), "tree enumeration covers 1..=11 vertices");
    let mut level: Vec<Rows> = vec![vec![0]];
    for k in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for rows in &level {
            for attach in 0..k - 1 {
                let mut r = rows.clone();
                r[attach] |= 1 << (k - 1);
                r.push(1 << attach);
                if seen.insert(tree_code(&r)) {
                    next.push(r);
                }
            }
        }
        level = next;
    }
    level.iter().map(graph_of).collect()
}

/// Sequences over `0..alphabet` of length `n` that are lexicographically
/// minimal among their rotations and reflections.
pub fn bracelets(n: usize, alphabet: usize) -> Vec<Vec<usize>> {
    let total = alphabet.checked_pow(n as u32).expect("bracelet space too large");
    let mut out = Vec::new();
    let mut word = vec![0usize; n];
    for idx in 0..total {
        let mut x = idx;
        for i in (0..n).rev() {
            word[i] = x % alphabet;
            x /= alphabet;
        }
        if is_canonical_bracelet(&word) {
            out.push(word.clone());
        }
    }
    out
}

pub fn is_canonical_bracelet(word: &[usize]) -> bool {
    let n = word.len();
    let mut rev: Vec<usize> = word.to_vec();
    rev.reverse();
    for s in [word, rev.as_slice()] {
        for r in 0..n {
            let rotated = s[r..].iter().chain(&s[..r]);
            match rotated.cmp(word.iter()) {
                std::cmp::Ordering::Less => return false,
                _ => continue,
            }
        }
    }
    true
}

/// A connected `G(n, p)` sample: edges of a random spanning tree plus
/// independent edges with probability `p`.
pub fn random_connected_graph(n: usize, p: f64, seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = WeightedGraph::new(n);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        g.add_edge(u, v).expect("valid edge");
    }
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) && rng.gen_bool(p) {
                g.add_edge(u, v).expect("valid edge");
            }
        }
    }
    g
}
