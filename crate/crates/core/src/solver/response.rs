//! Optimal play of one player against a fixed strategy.

use std::collections::HashMap;

use num_traits::Zero;

use super::{Outcome, SearchStats, SolveResult};
use crate::error::{Error, Result};
use crate::game::{GameState, Player, Ruleset, Scoring};
use crate::graph::WeightedGraph;
use crate::strategy::Strategy;
use crate::weight::Weight;

type Key = (Vec<u64>, u64);

/// Value from the free player's side: gains (free, fixed) or a win flag,
/// with the remaining line reversed.
#[derive(Clone)]
enum Value {
    Gains(Weight, Weight, Vec<usize>),
    Win(bool, Vec<usize>),
}

impl Value {
    fn line_mut(&mut self) -> &mut Vec<usize> {
        match self {
            Value::Gains(_, _, l) | Value::Win(_, l) => l,
        }
    }
}

struct Walk {
    free: Player,
    memo: HashMap<Key, Value>,
    stats: SearchStats,
}

impl Walk {
    fn run(&mut self, state: &GameState<'_>, mut fixed: Box<dyn Strategy>) -> Result<Value> {
        let key = fixed
            .fingerprint()
            .map(|fp| (state.taken().words().to_vec(), fp));
        if let Some(k) = &key {
            if let Some(v) = self.memo.get(k) {
                self.stats.memo_hits += 1;
                return Ok(v.clone());
            }
        }
        self.stats.expanded += 1;
        let g = state.graph();
        let legal = state.legal_moves();
        let scoring = state.ruleset().scoring();
        let value = if legal.is_empty() {
            match scoring {
                Scoring::Weight => Value::Gains(Weight::zero(), Weight::zero(), Vec::new()),
                s => {
                    let mover_wins = s == Scoring::Misere;
                    Value::Win(mover_wins == (state.to_move() == self.free), Vec::new())
                }
            }
        } else if state.to_move() != self.free {
            let v = fixed.choose(state)?;
            if !legal.contains(v) {
                return Err(Error::strategy(
                    fixed.name(),
                    format!("chose illegal vertex {v} at taken={:?}", state.taken()),
                ));
            }
            fixed.observe(state, v);
            let mut child = self.run(&state.apply(v)?, fixed)?;
            if let Value::Gains(_, fx, _) = &mut child {
                *fx += g.weight(v);
            }
            child.line_mut().push(v);
            child
        } else {
            let mut best: Option<Value> = None;
            for v in legal.iter() {
                let mut branch = fixed.boxed_clone();
                branch.observe(state, v);
                let mut child = self.run(&state.apply(v)?, branch)?;
                if let Value::Gains(fr, _, _) = &mut child {
                    *fr += g.weight(v);
                }
                child.line_mut().push(v);
                let better = match (&best, &child) {
                    (None, _) => true,
                    (Some(Value::Gains(b, _, _)), Value::Gains(c, _, _)) => c > b,
                    (Some(Value::Win(b, _)), Value::Win(c, _)) => *c && !*b,
                    _ => unreachable!("mixed scoring"),
                };
                if better {
                    best = Some(child);
                }
                if matches!(best, Some(Value::Win(true, _))) {
                    break;
                }
            }
            best.expect("nonempty move set")
        };
        if let Some(k) = key {
            self.memo.insert(k, value.clone());
            self.stats.peak_memo = self.memo.len();
        }
        Ok(value)
    }
}

/// Exact optimum of the player other than `fixed_player` against the fixed
/// strategy, which is started with `seed`.
pub fn best_response(
    g: &WeightedGraph,
    ruleset: Ruleset,
    fixed: &dyn Strategy,
    fixed_player: Player,
    seed: u64,
) -> Result<SolveResult> {
    let mut fixed = fixed.boxed_clone();
    fixed.begin(g, ruleset, seed)?;
    let mut walk = Walk {
        free: fixed_player.other(),
        memo: HashMap::new(),
        stats: SearchStats::default(),
    };
    let value = walk.run(&GameState::new(g, ruleset), fixed)?;
    let (outcome, mut line) = match value {
        Value::Gains(free, fx, line) => {
            let (alice, bob) = match fixed_player {
                Player::Bob => (free, fx),
                Player::Alice => (fx, free),
            };
            (Outcome::Value { alice, bob }, line)
        }
        Value::Win(free_wins, line) => {
            let w = if free_wins { walk.free } else { fixed_player };
            (Outcome::Winner(w), line)
        }
    };
    line.reverse();
    Ok(SolveResult {
        outcome,
        principal_variation: line,
        stats: walk.stats,
    })
}
