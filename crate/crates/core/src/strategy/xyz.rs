use super::{Strategy, TraceEntry};
use crate::error::{Error, Result};
use crate::game::{GameState, Player, Ruleset};
use crate::graph::WeightedGraph;
use crate::vertex_set::VertexSet;

const NAME: &str = "bob-xyz";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Part {
    X,
    Y,
    Z,
}

/// Bob's three-rule strategy on the X/Y/Z graph for game R.
///
/// The phase is the largest rule number used so far. During phase 1 the
/// strategy counts the Y vertices taken by Alice (`a`) and Bob (`b`).
#[derive(Clone, Default)]
pub struct XyzBob {
    part: Vec<Option<Part>>,
    phase: u8,
    a: usize,
    b: usize,
    phase_one_closed: bool,
    alice_y_by_phase: [usize; 4],
    trace: Vec<TraceEntry>,
}

pub fn bob_xyz() -> XyzBob {
    XyzBob::default()
}

impl XyzBob {
    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// `(a, b)`: Y vertices taken by Alice and by Bob in phase 1.
    pub fn phase_one_counts(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    /// True once Bob has left phase 1.
    pub fn phase_one_closed(&self) -> bool {
        self.phase_one_closed
    }

    /// Y vertices Alice took while the phase was 1, 2 or 3.
    pub fn alice_y_by_phase(&self) -> [usize; 4] {
        self.alice_y_by_phase
    }

    fn is(&self, v: usize, p: Part) -> bool {
        self.part[v] == Some(p)
    }
}

fn remaining_degree(g: &WeightedGraph, taken: &VertexSet, v: usize) -> usize {
    g.neighbors(v).iter().filter(|&u| !taken.contains(u)).count()
}

impl Strategy for XyzBob {
    fn name(&self) -> &str {
        NAME
    }

    fn begin(&mut self, g: &WeightedGraph, _ruleset: Ruleset, _seed: u64) -> Result<()> {
        self.part = (0..g.n())
            .map(|v| match g.label(v).and_then(|l| l.chars().next()) {
                Some('X') => Ok(Some(Part::X)),
                Some('Y') => Ok(Some(Part::Y)),
                Some('Z') => Ok(Some(Part::Z)),
                _ => Err(Error::strategy(NAME, format!("vertex {v} has no X/Y/Z label"))),
            })
            .collect::<Result<_>>()?;
        self.phase = 1;
        self.a = 0;
        self.b = 0;
        self.phase_one_closed = false;
        self.alice_y_by_phase = [0; 4];
        self.trace.clear();
        Ok(())
    }

    fn observe(&mut self, before: &GameState<'_>, v: usize) {
        if before.to_move() == Player::Alice && self.part.get(v) == Some(&Some(Part::Y)) {
            self.alice_y_by_phase[self.phase as usize] += 1;
            if self.phase == 1 {
                self.a += 1;
            }
        }
    }

    fn choose(&mut self, state: &GameState<'_>) -> Result<usize> {
        let g = state.graph();
        if self.part.len() != g.n() {
            self.begin(g, state.ruleset(), 0)?;
        }
        let taken = state.taken();
        let legal = state.legal_moves();
        let is_leaf = |v: usize| remaining_degree(g, taken, v) == 1;
        let (v, rule) = if let Some(v) = legal.iter().find(|&v| self.is(v, Part::Y)) {
            (v, 1)
        } else if let Some(v) = legal.iter().find(|&z| {
            self.is(z, Part::Z)
                && (!is_leaf(z)
                    || g.neighbors(z).iter().any(|y| {
                        !taken.contains(y)
                            && g.neighbors(y).iter().any(|z2| {
                                z2 != z && !taken.contains(z2) && self.is(z2, Part::Z) && is_leaf(z2)
                            })
                    }))
        }) {
            (v, 2)
        } else if let Some(v) = legal.iter().find(|&v| self.is(v, Part::X)) {
            (v, 3)
        } else {
            let v = legal
                .first()
                .ok_or_else(|| Error::strategy(NAME, "no legal move"))?;
            (v, 0)
        };
        if rule == 1 && self.phase == 1 {
            self.b += 1;
        }
        if rule > self.phase {
            if self.phase == 1 {
                self.phase_one_closed = true;
            }
            self.phase = rule;
        }
        let mut entry = TraceEntry::new(state.moves_played(), v, rule);
        entry.note = format!("phase {}", self.phase);
        self.trace.push(entry);
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
