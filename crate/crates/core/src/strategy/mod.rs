//! Move policies: baselines and the rule-based Bob strategies.

mod clique_cycle;
mod expander;
mod gnk;
mod xyz;

use std::sync::{Arc, Mutex};

use num_traits::Zero;
use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{GameState, Player, Ruleset};
use crate::graph::WeightedGraph;
use crate::solver::{SolveOptions, Solver};

pub use clique_cycle::{bob_clique_cycle, CliqueCycleBob};
pub use expander::{bob_expander, ExpanderBob, ExpanderLayout, ExpanderView};
pub use gnk::{bob_gnk, GnkBob};
pub use xyz::{bob_xyz, XyzBob};

/// Which rule produced a move. Rule 0 marks a move no rule sanctioned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    /// Number of moves played before this one.
    pub ply: usize,
    pub vertex: usize,
    pub rule: u8,
    pub note: String,
}

impl TraceEntry {
    fn new(ply: usize, vertex: usize, rule: u8) -> Self {
        TraceEntry {
            ply,
            vertex,
            rule,
            note: String::new(),
        }
    }
}

pub trait Strategy: Send {
    fn name(&self) -> &str;

    /// Called once before the first move of a game.
    fn begin(&mut self, _g: &WeightedGraph, _ruleset: Ruleset, _seed: u64) -> Result<()> {
        Ok(())
    }

    /// Picks a move; only called when a legal move exists.
    fn choose(&mut self, state: &GameState<'_>) -> Result<usize>;

    /// Every move of either player, with the state before it.
    fn observe(&mut self, _before: &GameState<'_>, _v: usize) {}

    fn trace(&self) -> &[TraceEntry] {
        &[]
    }

    fn boxed_clone(&self) -> Box<dyn Strategy>;

    /// Summary of private memory: two copies with equal fingerprints behave
    /// identically from equal positions. `None` if no such summary exists.
    fn fingerprint(&self) -> Option<u64> {
        None
    }
}

impl Clone for Box<dyn Strategy> {
    fn clone(&self) -> Self {
        self.boxed_clone()
    }
}

/// Heaviest legal vertex, lowest index on ties.
#[derive(Clone, Default)]
pub struct Greedy;

pub fn greedy_strategy() -> Greedy {
    Greedy
}

impl Strategy for Greedy {
    fn name(&self) -> &str {
        "greedy"
    }

    fn choose(&mut self, state: &GameState<'_>) -> Result<usize> {
        let g = state.graph();
        let mut best: Option<usize> = None;
        for v in state.legal_moves().iter() {
            if best.is_none_or(|b| g.weight(v) > g.weight(b)) {
                best = Some(v);
            }
        }
        best.ok_or_else(|| Error::strategy("greedy", "no legal move"))
    }

    fn boxed_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }

    fn fingerprint(&self) -> Option<u64> {
        Some(0)
    }
}

/// Uniformly random legal vertex.
#[derive(Clone)]
pub struct RandomPlay {
    seed: u64,
    rng: ChaCha8Rng,
}

pub fn random_strategy(seed: u64) -> RandomPlay {
    RandomPlay {
        seed,
        rng: ChaCha8Rng::seed_from_u64(seed),
    }
}

impl Strategy for RandomPlay {
    fn name(&self) -> &str {
        "random"
    }

    /// The game seed is mixed into the strategy's own seed.
    fn begin(&mut self, _g: &WeightedGraph, _ruleset: Ruleset, seed: u64) -> Result<()> {
        self.rng = ChaCha8Rng::seed_from_u64(self.seed ^ seed.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        Ok(())
    }

    fn choose(&mut self, state: &GameState<'_>) -> Result<usize> {
        state
            .legal_moves()
            .iter()
            .choose(&mut self.rng)
            .ok_or_else(|| Error::strategy("random", "no legal move"))
    }

    fn boxed_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Perfect play backed by an exact solver, built on `begin`.
#[derive(Clone)]
pub struct Optimal {
    opts: SolveOptions,
    solver: Option<Arc<Mutex<Solver>>>,
}

pub fn optimal_strategy(opts: SolveOptions) -> Optimal {
    Optimal { opts, solver: None }
}

impl Strategy for Optimal {
    fn name(&self) -> &str {
        "optimal"
    }

    fn begin(&mut self, g: &WeightedGraph, ruleset: Ruleset, _seed: u64) -> Result<()> {
        let reuse = self
            .solver
            .as_ref()
            .is_some_and(|s| s.lock().expect("solver lock").ruleset() == ruleset);
        if !reuse {
            self.solver = Some(Arc::new(Mutex::new(Solver::new(g, ruleset, &self.opts)?)));
        }
        Ok(())
    }

    fn choose(&mut self, state: &GameState<'_>) -> Result<usize> {
        if self.solver.is_none() {
            self.begin(state.graph(), state.ruleset(), 0)?;
        }
        let solver = self.solver.as_ref().expect("solver built");
        let mv = solver.lock().expect("solver lock").best_move(state.taken())?;
        mv.ok_or_else(|| Error::strategy("optimal", "no legal move"))
    }

    fn boxed_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }

    fn fingerprint(&self) -> Option<u64> {
        Some(0)
    }
}

/// Strategy names accepted by [`strategy_by_name`].
pub const STRATEGY_NAMES: [&str; 7] = [
    "greedy",
    "random",
    "optimal",
    "bob-clique-cycle",
    "bob-xyz",
    "bob-gnk",
    "bob-expander",
];

/// Builds a strategy from its identifier. `threshold` feeds `bob-expander`.
pub fn strategy_by_name(name: &str, seed: u64, threshold: usize) -> Result<Box<dyn Strategy>> {
    Ok(match name {
        "greedy" => Box::new(greedy_strategy()),
        "random" => Box::new(random_strategy(seed)),
        "optimal" => Box::new(optimal_strategy(SolveOptions::default())),
        "bob-clique-cycle" => Box::new(bob_clique_cycle()),
        "bob-xyz" => Box::new(bob_xyz()),
        "bob-gnk" => Box::new(bob_gnk()),
        "bob-expander" => Box::new(bob_expander(threshold)),
        _ => {
            return Err(Error::Params(format!(
                "unknown strategy `{name}` (expected one of {})",
                STRATEGY_NAMES.join(", ")
            )))
        }
    })
}

/// Who the checked strategy faces in [`validate_totality`].
pub enum Opponents {
    /// Each opponent plays `trials` games; seeds are `0..trials`.
    Pool(Vec<Box<dyn Strategy>>, usize),
    /// Every possible sequence of opponent moves.
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalityFailure {
    pub opponent: String,
    pub moves: Vec<usize>,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TotalityReport {
    pub games: usize,
    pub positions: usize,
    pub failures: Vec<TotalityFailure>,
}

impl TotalityReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Plays `strategy` as `side` and records every position where it had no
/// rule-sanctioned move (or failed) although legal moves existed.
pub fn validate_totality(
    strategy: &dyn Strategy,
    g: &WeightedGraph,
    ruleset: Ruleset,
    side: Player,
    opponents: Opponents,
) -> Result<TotalityReport> {
    let mut report = TotalityReport::default();
    match opponents {
        Opponents::Pool(pool, trials) => {
            for opp in pool {
                for trial in 0..trials {
                    let mut me = strategy.boxed_clone();
                    let mut them = opp.boxed_clone();
                    me.begin(g, ruleset, trial as u64)?;
                    them.begin(g, ruleset, trial as u64)?;
                    report.games += 1;
                    let mut state = GameState::new(g, ruleset);
                    let mut moves = Vec::new();
                    while !state.legal_moves().is_empty() {
                        let mine = state.to_move() == side;
                        let pick = if mine {
                            report.positions += 1;
                            checked_choice(&mut *me, &state)
                        } else {
                            them.choose(&state).map_err(|e| e.to_string())
                        };
                        let v = match pick {
                            Ok(v) => v,
                            Err(message) => {
                                report.failures.push(TotalityFailure {
                                    opponent: them.name().to_string(),
                                    moves: moves.clone(),
                                    message,
                                });
                                break;
                            }
                        };
                        me.observe(&state, v);
                        them.observe(&state, v);
                        moves.push(v);
                        state = state.apply(v)?;
                    }
                }
            }
        }
        Opponents::Exhaustive => {
            let mut me = strategy.boxed_clone();
            me.begin(g, ruleset, 0)?;
            let state = GameState::new(g, ruleset);
            let mut seen = std::collections::HashSet::new();
            exhaustive(me, &state, side, &mut Vec::new(), &mut seen, &mut report)?;
        }
    }
    Ok(report)
}

/// Asks for a move and rejects illegal or unsanctioned answers.
fn checked_choice(me: &mut dyn Strategy, state: &GameState<'_>) -> std::result::Result<usize, String> {
    let before = me.trace().len();
    let v = me.choose(state).map_err(|e| e.to_string())?;
    if !state.is_legal(v) {
        return Err(format!("chose illegal vertex {v}"));
    }
    if let Some(t) = me.trace().get(before) {
        if t.rule == 0 {
            return Err(format!("no rule applies; fell back to vertex {v}"));
        }
    }
    Ok(v)
}

fn exhaustive(
    mut me: Box<dyn Strategy>,
    state: &GameState<'_>,
    side: Player,
    moves: &mut Vec<usize>,
    seen: &mut std::collections::HashSet<(Vec<u64>, u64)>,
    report: &mut TotalityReport,
) -> Result<()> {
    if let Some(fp) = me.fingerprint() {
        if !seen.insert((state.taken().words().to_vec(), fp)) {
            return Ok(());
        }
    }
    let legal = state.legal_moves();
    if legal.is_empty() {
        report.games += 1;
        return Ok(());
    }
    if state.to_move() == side {
        report.positions += 1;
        match checked_choice(&mut *me, state) {
            Ok(v) => {
                me.observe(state, v);
                moves.push(v);
                exhaustive(me, &state.apply(v)?, side, moves, seen, report)?;
                moves.pop();
            }
            Err(message) => report.failures.push(TotalityFailure {
                opponent: "exhaustive".into(),
                moves: moves.clone(),
                message,
            }),
        }
    } else {
        for v in legal.iter() {
            let mut branch = me.boxed_clone();
            branch.observe(state, v);
            moves.push(v);
            exhaustive(branch, &state.apply(v)?, side, moves, seen, report)?;
            moves.pop();
        }
    }
    Ok(())
}

/// Weight collected by `player` in a finished line.
pub fn gain_of(g: &WeightedGraph, moves: &[usize], player: Player) -> crate::weight::Weight {
    let parity = match player {
        Player::Alice => 0,
        Player::Bob => 1,
    };
    moves
        .iter()
        .enumerate()
        .filter(|(i, _)| i % 2 == parity)
        .fold(crate::weight::Weight::zero(), |acc, (_, &v)| acc + g.weight(v))
}
