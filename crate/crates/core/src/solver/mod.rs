//! Exact values and winners by memoized search.

mod brute;
mod mask;
mod response;
mod search;

use std::thread;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::game::{Player, Ruleset, Scoring};
use crate::graph::WeightedGraph;
use crate::structure::{is_connected, twin_classes};
use crate::vertex_set::VertexSet;
use crate::weight::{self, Weight};

pub use brute::brute_force_value;
pub use mask::{Mask, Wide};
pub use response::best_response;

use search::{Search, SearchSetup};

pub const DEFAULT_MEMO_CAP: usize = 1 << 27;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Merge states that differ only by exchanging twin vertices.
    pub twins: bool,
    pub memo_cap: usize,
    /// Worker threads for the root moves.
    pub threads: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            twins: true,
            memo_cap: DEFAULT_MEMO_CAP,
            threads: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expanded: u64,
    pub memo_hits: u64,
    pub peak_memo: usize,
}

impl SearchStats {
    fn absorb(&mut self, o: &SearchStats) {
        self.expanded += o.expanded;
        self.memo_hits += o.memo_hits;
        self.peak_memo = self.peak_memo.max(o.peak_memo);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Gains each player collects from the solved position on.
    Value { alice: Weight, bob: Weight },
    Winner(Player),
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub outcome: Outcome,
    pub principal_variation: Vec<usize>,
    pub stats: SearchStats,
}

impl SolveResult {
    pub fn alice_value(&self) -> Option<&Weight> {
        match &self.outcome {
            Outcome::Value { alice, .. } => Some(alice),
            Outcome::Winner(_) => None,
        }
    }

    pub fn bob_value(&self) -> Option<&Weight> {
        match &self.outcome {
            Outcome::Value { bob, .. } => Some(bob),
            Outcome::Winner(_) => None,
        }
    }

    pub fn winner(&self) -> Option<Player> {
        match self.outcome {
            Outcome::Winner(p) => Some(p),
            Outcome::Value { .. } => None,
        }
    }
}

enum Engine {
    W1(Search<u64>),
    W2(Search<u128>),
    W4(Search<Wide<4>>),
    W16(Search<Wide<16>>),
}

macro_rules! with_engine {
    ($e:expr, $s:ident => $body:expr) => {
        match $e {
            Engine::W1($s) => $body,
            Engine::W2($s) => $body,
            Engine::W4($s) => $body,
            Engine::W16($s) => $body,
        }
    };
}

fn to_mask<M: Mask>(set: &VertexSet) -> M {
    let mut m = M::zero();
    for v in set.iter() {
        m.set(v);
    }
    m
}

/// A reusable search over one graph: values, best moves and lines from any
/// reachable position.
pub struct Solver {
    engine: Engine,
    ruleset: Ruleset,
    n: usize,
    scale: BigInt,
}

impl Solver {
    pub fn new(g: &WeightedGraph, ruleset: Ruleset, opts: &SolveOptions) -> Result<Solver> {
        Self::build(g, ruleset, None, opts)
    }

    /// A solver for the subgame where only `allowed` vertices may be taken;
    /// play ends when no allowed vertex is available.
    pub fn restricted(
        g: &WeightedGraph,
        ruleset: Ruleset,
        allowed: &VertexSet,
        opts: &SolveOptions,
    ) -> Result<Solver> {
        Self::build(g, ruleset, Some(allowed), opts)
    }

    fn build(
        g: &WeightedGraph,
        ruleset: Ruleset,
        allowed: Option<&VertexSet>,
        opts: &SolveOptions,
    ) -> Result<Solver> {
        let n = g.n();
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        if !is_connected(g, &g.vertices()) {
            return Err(Error::Disconnected);
        }
        if n > 1024 {
            return Err(Error::TooLarge(format!("{n} vertices exceed the 1024-vertex search limit")));
        }
        let scale = weight::common_denominator(g.weights());
        let weights = weight::scale_to_i64(g.weights(), &scale).ok_or_else(|| {
            Error::TooLarge("scaled weights do not fit in 64-bit arithmetic".into())
        })?;
        let mut classes: Vec<Vec<usize>> = if opts.twins {
            twin_classes(g).iter().map(|c| c.iter().collect()).collect()
        } else {
            Vec::new()
        };
        if let Some(a) = allowed {
            // Twin exchange must also preserve the allowed set.
            classes.retain(|c| c.iter().all(|&v| a.contains(v)) || c.iter().all(|&v| !a.contains(v)));
        }
        let restrict: Option<Vec<usize>> = allowed.map(|a| a.iter().collect());
        let setup = SearchSetup {
            adj: (0..n).map(|v| g.neighbors(v).iter().collect()).collect(),
            weights,
            variant: ruleset.variant(),
            scoring: ruleset.scoring(),
            restrict: restrict.as_deref(),
            twin_classes: classes,
            memo_cap: opts.memo_cap,
        };
        let engine = if n <= 64 {
            Engine::W1(Search::new(setup))
        } else if n <= 128 {
            Engine::W2(Search::new(setup))
        } else if n <= 256 {
            Engine::W4(Search::new(setup))
        } else {
            Engine::W16(Search::new(setup))
        };
        Ok(Solver {
            engine,
            ruleset,
            n,
            scale,
        })
    }

    pub fn ruleset(&self) -> Ruleset {
        self.ruleset
    }

    pub fn stats(&self) -> SearchStats {
        with_engine!(&self.engine, s => s.stats)
    }

    fn check(&self, taken: &VertexSet) -> Result<()> {
        if taken.capacity() != self.n {
            return Err(Error::Precondition(format!(
                "taken set sized for {} vertices, graph has {}",
                taken.capacity(),
                self.n
            )));
        }
        Ok(())
    }

    /// The solver's move at `taken`, or `None` when the mover has no move.
    pub fn best_move(&mut self, taken: &VertexSet) -> Result<Option<usize>> {
        self.check(taken)?;
        let scoring = self.ruleset.scoring();
        with_engine!(&mut self.engine, s => {
            let t = to_mask(taken);
            let f = s.frontier(t);
            match scoring {
                Scoring::Weight => s.best_weight_move(t, f).map(|r| r.0),
                _ => s.best_win_move(t, f).map(|r| r.1),
            }
        })
    }

    /// Scaled `(mover, opponent)` gains from `taken` on.
    fn raw_pair(&mut self, taken: &VertexSet) -> Result<(i64, i64)> {
        with_engine!(&mut self.engine, s => {
            let t = to_mask(taken);
            let f = s.frontier(t);
            s.best_weight_move(t, f).map(|r| (r.1, r.2))
        })
    }

    fn raw_wins(&mut self, taken: &VertexSet) -> Result<bool> {
        with_engine!(&mut self.engine, s => {
            let t = to_mask(taken);
            let f = s.frontier(t);
            s.wins(t, f)
        })
    }

    fn line(&mut self, taken: &VertexSet) -> Result<Vec<usize>> {
        let mut t = taken.clone();
        let mut pv = Vec::new();
        while let Some(v) = self.best_move(&t)? {
            pv.push(v);
            t.insert(v);
        }
        Ok(pv)
    }

    fn mover(taken: &VertexSet) -> Player {
        if taken.len() % 2 == 0 {
            Player::Alice
        } else {
            Player::Bob
        }
    }

    fn outcome_from_pair(&self, mover: Player, (m, o): (i64, i64)) -> Outcome {
        let (m, o) = (
            weight::from_scaled(m, &self.scale),
            weight::from_scaled(o, &self.scale),
        );
        match mover {
            Player::Alice => Outcome::Value { alice: m, bob: o },
            Player::Bob => Outcome::Value { alice: o, bob: m },
        }
    }

    /// Solves the position where `taken` has been taken; the player to move
    /// is determined by parity. Values count only gains from here on.
    pub fn solve_from(&mut self, taken: &VertexSet) -> Result<SolveResult> {
        self.check(taken)?;
        let mover = Self::mover(taken);
        let outcome = match self.ruleset.scoring() {
            Scoring::Weight => {
                let pair = self.raw_pair(taken)?;
                self.outcome_from_pair(mover, pair)
            }
            _ => {
                let win = self.raw_wins(taken)?;
                Outcome::Winner(if win { mover } else { mover.other() })
            }
        };
        let principal_variation = self.line(taken)?;
        Ok(SolveResult {
            outcome,
            principal_variation,
            stats: self.stats(),
        })
    }
}

/// Optimal weight-scoring play from the empty position.
pub fn solve_weight(g: &WeightedGraph, ruleset: Ruleset) -> Result<SolveResult> {
    solve_weight_with(g, ruleset, &SolveOptions::default())
}

pub fn solve_weight_with(g: &WeightedGraph, ruleset: Ruleset, opts: &SolveOptions) -> Result<SolveResult> {
    if ruleset.scoring() != Scoring::Weight {
        return Err(Error::Ruleset(format!("{ruleset} is not scored by weight")));
    }
    solve_with(g, ruleset, opts)
}

/// Winner of a canonical or misère game under optimal play.
pub fn solve_win(g: &WeightedGraph, ruleset: Ruleset) -> Result<SolveResult> {
    solve_win_with(g, ruleset, &SolveOptions::default())
}

pub fn solve_win_with(g: &WeightedGraph, ruleset: Ruleset, opts: &SolveOptions) -> Result<SolveResult> {
    if ruleset.scoring() == Scoring::Weight {
        return Err(Error::Ruleset(format!("{ruleset} has no winner, only values")));
    }
    solve_with(g, ruleset, opts)
}

/// Dispatches on the scoring of `ruleset`.
pub fn solve_with(g: &WeightedGraph, ruleset: Ruleset, opts: &SolveOptions) -> Result<SolveResult> {
    if opts.threads > 1 {
        return solve_parallel(g, ruleset, opts);
    }
    Solver::new(g, ruleset, opts)?.solve_from(&VertexSet::empty(g.n()))
}

/// Splits the root moves over worker threads, each with its own memo, then
/// combines with the same tie-breaking as the sequential search.
fn solve_parallel(g: &WeightedGraph, ruleset: Ruleset, opts: &SolveOptions) -> Result<SolveResult> {
    let n = g.n();
    let root = VertexSet::empty(n);
    let moves: Vec<usize> = crate::game::legal_moves_for(g, ruleset.variant(), &root)
        .iter()
        .collect();
    if moves.is_empty() {
        return Solver::new(g, ruleset, opts)?.solve_from(&root);
    }
    let workers = opts.threads.min(moves.len());
    let chunks: Vec<Vec<usize>> = (0..workers)
        .map(|i| moves.iter().copied().skip(i).step_by(workers).collect())
        .collect();
    let results: Vec<Result<(Vec<(usize, SolveResult)>, SearchStats)>> = thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|chunk| {
                scope.spawn(move || {
                    let mut solver = Solver::new(g, ruleset, opts)?;
                    let mut out = Vec::new();
                    for &v in chunk {
                        let mut t = VertexSet::empty(n);
                        t.insert(v);
                        out.push((v, solver.solve_from(&t)?));
                    }
                    let stats = solver.stats();
                    Ok((out, stats))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });
    let mut children = Vec::new();
    let mut stats = SearchStats::default();
    for r in results {
        let (out, s) = r?;
        children.extend(out);
        stats.absorb(&s);
    }
    children.sort_by_key(|(v, _)| *v);
    let mut best: Option<(usize, SolveResult, bool)> = None;
    for (v, child) in children {
        let better = match (&child.outcome, &best) {
            (_, None) => true,
            (Outcome::Value { alice, .. }, Some((bv, b, _))) => {
                let mine = g.weight(v) + alice;
                let theirs = g.weight(*bv) + b.alice_value().expect("weight outcome");
                mine > theirs
            }
            (Outcome::Winner(w), Some((_, _, won))) => !won && *w == Player::Alice,
        };
        if better {
            let won = child.winner() == Some(Player::Alice);
            best = Some((v, child, won));
        }
    }
    let (v, child, _) = best.expect("at least one root move");
    let outcome = match child.outcome {
        Outcome::Value { alice, bob } => Outcome::Value {
            alice: alice + g.weight(v),
            bob,
        },
        w => w,
    };
    let mut principal_variation = vec![v];
    principal_variation.extend(child.principal_variation);
    Ok(SolveResult {
        outcome,
        principal_variation,
        stats,
    })
}
