use super::{Strategy, TraceEntry};
use crate::error::{Error, Result};
use crate::game::{GameState, Ruleset};
use crate::graph::WeightedGraph;

const NAME: &str = "bob-clique-cycle";

/// Bob on a clique cycle: take weight 1 when possible, otherwise stay inside
/// a clique that has already been entered.
#[derive(Clone, Default)]
pub struct CliqueCycleBob {
    block: Vec<usize>,
    trace: Vec<TraceEntry>,
}

pub fn bob_clique_cycle() -> CliqueCycleBob {
    CliqueCycleBob::default()
}

/// Block index from labels of the form `block<i>`.
pub(crate) fn block_labels(g: &WeightedGraph, name: &str) -> Result<Vec<usize>> {
    (0..g.n())
        .map(|v| {
            g.label(v)
                .and_then(|l| l.strip_prefix("block"))
                .and_then(|i| i.parse().ok())
                .ok_or_else(|| Error::strategy(name, format!("vertex {v} has no block label")))
        })
        .collect()
}

impl Strategy for CliqueCycleBob {
    fn name(&self) -> &str {
        NAME
    }

    fn begin(&mut self, g: &WeightedGraph, _ruleset: Ruleset, _seed: u64) -> Result<()> {
        self.block = block_labels(g, NAME)?;
        self.trace.clear();
        Ok(())
    }

    fn choose(&mut self, state: &GameState<'_>) -> Result<usize> {
        let g = state.graph();
        if self.block.len() != g.n() {
            self.begin(g, state.ruleset(), 0)?;
        }
        let legal = state.legal_moves();
        let ply = state.moves_played();
        let one = num_traits::One::one();
        let pick = if let Some(v) = legal.iter().find(|&v| g.weight(v) == &one) {
            (v, 1)
        } else if let Some(v) = legal
            .iter()
            .find(|&v| state.taken().iter().any(|t| self.block[t] == self.block[v]))
        {
            (v, 2)
        } else {
            let v = legal
                .first()
                .ok_or_else(|| Error::strategy(NAME, "no legal move"))?;
            (v, 0)
        };
        self.trace.push(TraceEntry::new(ply, pick.0, pick.1));
        Ok(pick.0)
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
