//! Vertex-weighted simple graphs and their line-based text format.
//!
//! ```text
//! # comment
//! p graph 3
//! w 1 1
//! w 2 3/2
//! e 0 1
//! e 1 2
//! l 1 center
//! ```
//!
//! Vertices are `0..n`. Weights default to zero. The writer emits the header,
//! then nonzero weights, edges and labels, each sorted by vertex index.

use std::fmt::Write as _;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;
use crate::weight::{self, Weight};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    adjacency: Vec<VertexSet>,
    weights: Vec<Weight>,
    labels: Vec<Option<String>>,
}

impl WeightedGraph {
    /// Edgeless graph on `n` vertices of weight zero.
    pub fn new(n: usize) -> Self {
        WeightedGraph {
            adjacency: vec![VertexSet::empty(n); n],
            weights: vec![Weight::zero(); n],
            labels: vec![None; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
        }
        self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adjacency[u].contains(v)
    }

    pub fn set_weight(&mut self, v: usize, w: Weight) -> Result<()> {
        self.check(v)?;
        if w < Weight::zero() {
            return Err(Error::InvalidGraph(format!("negative weight at vertex {v}")));
        }
        self.weights[v] = w;
        Ok(())
    }

    pub fn set_label(&mut self, v: usize, label: impl Into<String>) -> Result<()> {
        self.check(v)?;
        self.labels[v] = Some(label.into());
        Ok(())
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn weight(&self, v: usize) -> &Weight {
        &self.weights[v]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels[v].as_deref()
    }

    pub fn total_weight(&self) -> Weight {
        self.weights.iter().fold(Weight::zero(), |acc, w| acc + w)
    }

    pub fn weight_of(&self, set: &VertexSet) -> Weight {
        set.iter().fold(Weight::zero(), |acc, v| acc + &self.weights[v])
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for v in self.adjacency[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// Subgraph induced by `set`, with vertices renumbered in ascending
    /// order. The second component maps new indices to old ones.
    pub fn induced(&self, set: &VertexSet) -> (WeightedGraph, Vec<usize>) {
        let map: Vec<usize> = set.iter().collect();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in map.iter().enumerate() {
            index[v] = i;
        }
        let mut g = WeightedGraph::new(map.len());
        for (i, &v) in map.iter().enumerate() {
            g.weights[i] = self.weights[v].clone();
            g.labels[i] = self.labels[v].clone();
            for u in self.adjacency[v].intersection(set).iter() {
                g.adjacency[i].insert(index[u]);
            }
        }
        (g, map)
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> WeightedGraph {
        let n = self.n();
        let mut g = WeightedGraph::new(n);
        for v in 0..n {
            g.weights[perm[v]] = self.weights[v].clone();
            g.labels[perm[v]] = self.labels[v].clone();
            for u in self.adjacency[v].iter() {
                g.adjacency[perm[v]].insert(perm[u]);
            }
        }
        g
    }

    /// Same graph with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: &Weight) -> WeightedGraph {
        let mut g = self.clone();
        for w in &mut g.weights {
            *w = &*w * factor;
        }
        g
    }

    pub fn with_weights(mut self, ws: impl IntoIterator<Item = Weight>) -> Self {
        let ws: Vec<Weight> = ws.into_iter().collect();
        assert_eq!(ws.len(), self.n(), "weight vector length mismatch");
        self.weights = ws;
        self
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges).expect("path edges are valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges).expect("cycle edges are valid")
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::from_edges(n, &edges).expect("clique edges are valid")
    }

    /// `K_{1,leaves}` with center 0.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Self::from_edges(leaves + 1, &edges).expect("star edges are valid")
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::from_edges(10, &edges).expect("petersen edges are valid")
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut graph: Option<WeightedGraph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line, msg };
            let mut parts = content.split_whitespace();
            let tag = parts.next().unwrap_or("");
            if tag == "p" {
                if graph.is_some() {
                    return Err(err("duplicate header".into()));
                }
                if parts.next() != Some("graph") {
                    return Err(err("expected `p graph <n>`".into()));
                }
                let n = parse_index(parts.next(), line)?;
                if parts.next().is_some() {
                    return Err(err("trailing tokens after header".into()));
                }
                graph = Some(WeightedGraph::new(n));
                continue;
            }
            let g = graph
                .as_mut()
                .ok_or_else(|| err("missing `p graph <n>` header".into()))?;
            let wrap = |e: Error| match e {
                Error::Parse { .. } => e,
                other => Error::Parse { line, msg: other.to_string() },
            };
            match tag {
                "w" => {
                    let v = parse_index(parts.next(), line)?;
                    let tok = parts.next().ok_or_else(|| err("missing weight".into()))?;
                    let w = weight::parse(tok).ok_or_else(|| err(format!("bad weight `{tok}`")))?;
                    if parts.next().is_some() {
                        return Err(err("trailing tokens".into()));
                    }
                    g.set_weight(v, w).map_err(wrap)?;
                }
                "e" => {
                    let u = parse_index(parts.next(), line)?;
                    let v = parse_index(parts.next(), line)?;
                    if parts.next().is_some() {
                        return Err(err("trailing tokens".into()));
                    }
                    if g.has_edge(u, v) {
                        return Err(err(format!("duplicate edge {u} {v}")));
                    }
                    g.add_edge(u, v).map_err(wrap)?;
                }
                "l" => {
                    let v = parse_index(parts.next(), line)?;
                    let tag: Vec<&str> = parts.collect();
                    if tag.is_empty() {
                        return Err(err("missing label".into()));
                    }
                    g.set_label(v, tag.join(" ")).map_err(wrap)?;
                }
                other => return Err(err(format!("unknown line type `{other}`"))),
            }
        }
        graph.ok_or(Error::Parse {
            line: 0,
            msg: "empty input: missing `p graph <n>` header".into(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p graph {}", self.n()).unwrap();
        for (v, w) in self.weights.iter().enumerate() {
            if !w.is_zero() {
                writeln!(out, "w {v} {}", weight::format(w)).unwrap();
            }
        }
        for (u, v) in self.edges() {
            writeln!(out, "e {u} {v}").unwrap();
        }
        for (v, l) in self.labels.iter().enumerate() {
            if let Some(l) = l {
                writeln!(out, "l {v} {l}").unwrap();
            }
        }
        out
    }
}

fn parse_index(tok: Option<&str>, line: usize) -> Result<usize> {
    let tok = tok.ok_or(Error::Parse {
        line,
        msg: "missing vertex index".into(),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad vertex index `{tok}`"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::{int, ratio};

    #[test]
    fn parses_the_documented_example() {
        let g = WeightedGraph::parse(
            "# comment\np graph 3\nw 1 1\nw 2 3/2\ne 0 1\ne 1 2 # trailing\nl 1 center\n",
        )
        .unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.weight(1), &int(1));
        assert_eq!(g.weight(2), &ratio(3, 2));
        assert_eq!(g.weight(0), &int(0));
        assert!(g.has_edge(1, 0) && g.has_edge(2, 1) && !g.has_edge(0, 2));
        assert_eq!(g.label(1), Some("center"));
        assert_eq!(g.total_weight(), ratio(5, 2));
    }

    #[test]
    fn writer_is_canonical() {
        let mut g = WeightedGraph::from_edges(3, &[(2, 1), (1, 0)]).unwrap();
        g.set_weight(2, ratio(2, 4)).unwrap();
        g.set_label(0, "a").unwrap();
        assert_eq!(g.to_text(), "p graph 3\nw 2 1/2\ne 0 1\ne 1 2\nl 0 a\n");
        assert_eq!(WeightedGraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn rejects_malformed_input() {
        let cases = [
            "e 0 1\n",
            "p graph 2\ne 0 0\n",
            "p graph 2\ne 0 2\n",
            "p graph 2\nw 0 -1\n",
            "p graph 2\ne 0 1\ne 1 0\n",
            "p graph 2\nx 0\n",
            "",
        ];
        for c in cases {
            assert!(WeightedGraph::parse(c).is_err(), "accepted {c:?}");
        }
        match WeightedGraph::parse("p graph 2\n\ne 0 5\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn induced_subgraph_renumbers() {
        let g = WeightedGraph::path(4).with_weights((0..4).map(int));
        let (h, map) = g.induced(&VertexSet::from_iter_n(4, [1, 2, 3]));
        assert_eq!(map, vec![1, 2, 3]);
        assert_eq!(h.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(h.weight(0), &int(1));
    }
}
