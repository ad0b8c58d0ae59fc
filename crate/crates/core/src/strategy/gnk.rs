use num_traits::Zero;

use super::{Strategy, TraceEntry};
use crate::error::{Error, Result};
use crate::game::GameState;
use crate::graph::WeightedGraph;
use crate::vertex_set::VertexSet;

const NAME: &str = "bob-gnk";

/// Bob on `G'_{n,k}` in game R: weight 1 when available, otherwise a weight 0
/// vertex that is not the only leaf hanging off some clique vertex.
#[derive(Clone, Default)]
pub struct GnkBob {
    trace: Vec<TraceEntry>,
}

pub fn bob_gnk() -> GnkBob {
    GnkBob::default()
}

fn remaining_neighbors(g: &WeightedGraph, taken: &VertexSet, v: usize) -> Vec<usize> {
    g.neighbors(v).iter().filter(|&u| !taken.contains(u)).collect()
}

/// True when `b` is a leaf of the remaining graph and its neighbor has no
/// other leaf of weight 0.
pub(crate) fn is_unique_leaf_neighbor(g: &WeightedGraph, taken: &VertexSet, b: usize) -> bool {
    let nb = remaining_neighbors(g, taken, b);
    let [a] = nb.as_slice() else {
        return false;
    };
    remaining_neighbors(g, taken, *a)
        .into_iter()
        .filter(|&u| u != b && g.weight(u).is_zero() && remaining_neighbors(g, taken, u).len() == 1)
        .count()
        == 0
}

impl Strategy for GnkBob {
    fn name(&self) -> &str {
        NAME
    }

    fn begin(&mut self, _g: &WeightedGraph, _ruleset: crate::game::Ruleset, _seed: u64) -> Result<()> {
        self.trace.clear();
        Ok(())
    }

    fn choose(&mut self, state: &GameState<'_>) -> Result<usize> {
        let g = state.graph();
        let taken = state.taken();
        let legal = state.legal_moves();
        let (v, rule) = if let Some(v) = legal.iter().find(|&v| !g.weight(v).is_zero()) {
            (v, 1)
        } else if let Some(v) = legal.iter().find(|&v| !is_unique_leaf_neighbor(g, taken, v)) {
            (v, 2)
        } else {
            return Err(Error::strategy(
                NAME,
                format!("no rule applies with {} vertices remaining", g.n() - taken.len()),
            ));
        };
        self.trace.push(TraceEntry::new(state.moves_played(), v, rule));
        Ok(v)
    }

    fn trace(&self) -> &[TraceEntry] {
        &self.trace
    }

    fn boxed_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }

    fn fingerprint(&self) -> Option<u64> {
        Some(0)
    }
}
