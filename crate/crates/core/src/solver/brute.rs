//! Reference recursion without memo or symmetry reduction.

use num_traits::Zero;

use super::{Outcome, SearchStats, SolveResult};
use crate::error::{Error, Result};
use crate::game::{GameState, Player, Ruleset, Scoring};
use crate::graph::WeightedGraph;
use crate::weight::Weight;

pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Mover's and opponent's gains plus the line, reversed.
fn weight_value(s: &GameState<'_>, stats: &mut SearchStats) -> (Weight, Weight, Vec<usize>) {
    stats.expanded += 1;
    let mut best: Option<(Weight, Weight, Vec<usize>)> = None;
    for v in s.legal_moves().iter() {
        let next = s.apply(v).expect("legal move");
        let (cm, co, mut line) = weight_value(&next, stats);
        let mine = s.graph().weight(v) + co;
        if best.as_ref().is_none_or(|(b, _, _)| mine > *b) {
            line.push(v);
            best = Some((mine, cm, line));
        }
    }
    best.unwrap_or_else(|| (Weight::zero(), Weight::zero(), Vec::new()))
}

fn win_value(s: &GameState<'_>, stats: &mut SearchStats) -> (bool, Vec<usize>) {
    stats.expanded += 1;
    let moves = s.legal_moves();
    if moves.is_empty() {
        return (s.ruleset().scoring() == Scoring::Misere, Vec::new());
    }
    let mut fallback = None;
    for v in moves.iter() {
        let (child_wins, mut line) = win_value(&s.apply(v).expect("legal move"), stats);
        if !child_wins {
            line.push(v);
            return (true, line);
        }
        if fallback.is_none() {
            line.push(v);
            fallback = Some(line);
        }
    }
    (false, fallback.expect("nonempty move set"))
}

/// Exhaustive game-tree value from the empty position, `n <= 20`.
pub fn brute_force_value(g: &WeightedGraph, ruleset: Ruleset) -> Result<SolveResult> {
    if g.n() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(format!(
            "brute force is limited to {BRUTE_FORCE_LIMIT} vertices, got {}",
            g.n()
        )));
    }
    let root = GameState::new(g, ruleset);
    let mut stats = SearchStats::default();
    let (outcome, mut line) = match ruleset.scoring() {
        Scoring::Weight => {
            let (a, b, line) = weight_value(&root, &mut stats);
            (Outcome::Value { alice: a, bob: b }, line)
        }
        _ => {
            let (win, line) = win_value(&root, &mut stats);
            (Outcome::Winner(if win { Player::Alice } else { Player::Bob }), line)
        }
    };
    line.reverse();
    Ok(SolveResult {
        outcome,
        principal_variation: line,
        stats,
    })
}
