use super::{Strategy, TraceEntry};
use crate::error::{Error, Result};
use crate::game::{GameState, Player, Ruleset};
use crate::graph::WeightedGraph;
use crate::structure::{components, cut_vertices_unchecked};
use crate::vertex_set::VertexSet;

const NAME: &str = "bob-expander";

/// The split of a graph into a core `H` and one pendant leaf per core vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpanderLayout {
    pub h: VertexSet,
    /// For core vertices, the attached leaf.
    pub leaf_of: Vec<Option<usize>>,
    /// For leaves, the core vertex they hang from.
    pub owner: Vec<Option<usize>>,
}

impl ExpanderLayout {
    /// Leaves are the degree-1 vertices; every other vertex must carry
    /// exactly one of them.
    pub fn from_graph(g: &WeightedGraph) -> Result<Self> {
        let n = g.n();
        let mut leaf_of = vec![None; n];
        let mut owner = vec![None; n];
        let mut h = VertexSet::full(n);
        for v in 0..n {
            if g.degree(v) == 1 {
                let u = g.neighbors(v).first().expect("degree one");
                if g.degree(u) == 1 {
                    return Err(Error::strategy(NAME, "graph is a single edge"));
                }
                if leaf_of[u].replace(v).is_some() {
                    return Err(Error::strategy(NAME, format!("vertex {u} carries two leaves")));
                }
                owner[v] = Some(u);
                h.remove(v);
            }
        }
        if let Some(v) = h.iter().find(|&v| leaf_of[v].is_none()) {
            return Err(Error::strategy(NAME, format!("core vertex {v} has no leaf")));
        }
        Ok(ExpanderLayout { h, leaf_of, owner })
    }
}

/// Bookkeeping of the core while game R is played on a core-plus-leaves graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpanderView {
    /// Remaining core vertices whose leaf is taken.
    pub exposed: VertexSet,
    pub h_remaining: VertexSet,
    /// Exposed cut vertices of the remaining core.
    pub b: VertexSet,
    /// The large component of `h_remaining - b`, if any.
    pub large: Option<VertexSet>,
    /// How many components reached the threshold.
    pub large_count: usize,
    pub b_large: VertexSet,
    pub s: VertexSet,
    /// Available vertices whose taking would make a member of `b_large`
    /// available.
    pub dangerous: VertexSet,
    pub threshold: usize,
}

impl ExpanderView {
    pub fn compute(layout: &ExpanderLayout, g: &WeightedGraph, taken: &VertexSet, threshold: usize) -> Self {
        let h_remaining = layout.h.difference(taken);
        let exposed = VertexSet::from_iter_n(
            g.n(),
            h_remaining
                .iter()
                .filter(|&v| layout.leaf_of[v].is_some_and(|l| taken.contains(l))),
        );
        Self::from_parts(layout, g, taken, exposed, h_remaining, threshold)
    }

    fn from_parts(
        layout: &ExpanderLayout,
        g: &WeightedGraph,
        taken: &VertexSet,
        exposed: VertexSet,
        h_remaining: VertexSet,
        threshold: usize,
    ) -> Self {
        let n = g.n();
        let b = exposed.intersection(&cut_vertices_unchecked(g, &h_remaining));
        let k = h_remaining.difference(&b);
        let big: Vec<VertexSet> = components(g, &k)
            .into_iter()
            .filter(|c| c.len() >= threshold.max(1))
            .collect();
        let large_count = big.len();
        let large = big.into_iter().max_by(|x, y| {
            x.len()
                .cmp(&y.len())
                .then(y.first().cmp(&x.first()))
        });
        let empty = VertexSet::empty(n);
        let l = large.as_ref().unwrap_or(&empty);
        let b_large = VertexSet::from_iter_n(n, b.iter().filter(|&v| !g.neighbors(v).is_disjoint(l)));
        let s = h_remaining.difference(l).difference(&b_large);
        let mut dangerous = VertexSet::empty(n);
        if !b_large.is_empty() {
            let legal = crate::game::legal_moves_for(g, crate::game::Variant::R, taken);
            for v in legal.iter().filter(|&v| layout.h.contains(v)) {
                let mut rest = h_remaining.clone();
                rest.remove(v);
                let cut = cut_vertices_unchecked(g, &rest);
                if b_large.iter().any(|u| u != v && !cut.contains(u)) {
                    dangerous.insert(v);
                }
            }
        }
        ExpanderView {
            exposed,
            h_remaining,
            b,
            large,
            large_count,
            b_large,
            s,
            dangerous,
            threshold,
        }
    }

    pub fn in_large(&self, v: usize) -> bool {
        self.large.as_ref().is_some_and(|l| l.contains(v))
    }
}

/// Bob's three-rule strategy for game R on a core-plus-leaves graph.
#[derive(Clone)]
pub struct ExpanderBob {
    threshold: usize,
    layout: Option<ExpanderLayout>,
    exposed: VertexSet,
    h_remaining: VertexSet,
    /// View before Alice's last move, and that move.
    before_alice: Option<(ExpanderView, usize)>,
    trace: Vec<TraceEntry>,
}

pub fn bob_expander(threshold: usize) -> ExpanderBob {
    ExpanderBob {
        threshold,
        layout: None,
        exposed: VertexSet::empty(0),
        h_remaining: VertexSet::empty(0),
        before_alice: None,
        trace: Vec::new(),
    }
}

impl ExpanderBob {
    pub fn layout(&self) -> Option<&ExpanderLayout> {
        self.layout.as_ref()
    }

    /// The view assembled from the incrementally maintained sets.
    pub fn current_view(&self, g: &WeightedGraph, taken: &VertexSet) -> Option<ExpanderView> {
        let layout = self.layout.as_ref()?;
        Some(ExpanderView::from_parts(
            layout,
            g,
            taken,
            self.exposed.clone(),
            self.h_remaining.clone(),
            self.threshold,
        ))
    }
}

impl Strategy for ExpanderBob {
    fn name(&self) -> &str {
        NAME
    }

    fn begin(&mut self, g: &WeightedGraph, _ruleset: Ruleset, _seed: u64) -> Result<()> {
        let layout = ExpanderLayout::from_graph(g)?;
        self.exposed = VertexSet::empty(g.n());
        self.h_remaining = layout.h.clone();
        self.layout = Some(layout);
        self.before_alice = None;
        self.trace.clear();
        Ok(())
    }

    fn observe(&mut self, before: &GameState<'_>, v: usize) {
        let Some(layout) = &self.layout else {
            return;
        };
        if before.to_move() == Player::Alice {
            let view = ExpanderView::compute(layout, before.graph(), before.taken(), self.threshold);
            self.before_alice = Some((view, v));
        }
        if self.h_remaining.remove(v) {
            self.exposed.remove(v);
        } else if let Some(u) = layout.owner[v] {
            if self.h_remaining.contains(u) {
                self.exposed.insert(u);
            }
        }
    }

    fn choose(&mut self, state: &GameState<'_>) -> Result<usize> {
        let g = state.graph();
        if self.layout.is_none() {
            self.begin(g, state.ruleset(), 0)?;
        }
        let layout = self.layout.as_ref().expect("layout");
        let legal = state.legal_moves();
        let ply = state.moves_played();
        let mut pick = None;
        if let Some((prev, alice_move)) = &self.before_alice {
            if let Some(u) = layout.owner[*alice_move] {
                if prev.in_large(u) && legal.contains(u) {
                    pick = Some((u, 1));
                }
            }
            if pick.is_none() {
                if let Some(u) = prev.b_large.iter().find(|&u| legal.contains(u)) {
                    pick = Some((u, 2));
                }
            }
        }
        if pick.is_none() {
            let view = self.current_view(g, state.taken()).expect("layout");
            let candidate = match &view.large {
                Some(l) => legal.iter().find(|&v| {
                    !l.contains(v)
                        && !layout.owner[v].is_some_and(|u| l.contains(u))
                        && !view.dangerous.contains(v)
                }),
                None => legal.first(),
            };
            pick = candidate.map(|v| (v, 3));
        }
        let (v, rule) = match pick {
            Some(p) => p,
            None => (
                legal
                    .first()
                    .ok_or_else(|| Error::strategy(NAME, "no legal move"))?,
                0,
            ),
        };
        self.trace.push(TraceEntry::new(ply, v, rule));
        Ok(v)
    }

    fn trace(&self) -> &[TraceEntry] {
        &self.trace
    }

    fn boxed_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }

    fn fingerprint(&self) -> Option<u64> {
        Some(self.before_alice.as_ref().map_or(0, |(_, v)| *v as u64 + 1))
    }
}
