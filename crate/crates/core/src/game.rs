//! Legal moves, state transitions and simulations for games T, R and TR.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Condition, Error, Result};
use crate::graph::WeightedGraph;
use crate::strategy::Strategy;
use crate::structure::{cut_vertices_unchecked, is_connected};
use crate::vertex_set::VertexSet;
use crate::weight::{self, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    T,
    R,
    TR,
}

impl Variant {
    pub fn requires_taken_connected(self) -> bool {
        matches!(self, Variant::T | Variant::TR)
    }

    pub fn requires_remaining_connected(self) -> bool {
        matches!(self, Variant::R | Variant::TR)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scoring {
    /// Players collect vertex weights.
    Weight,
    /// The first player without a legal move loses.
    Canonical,
    /// The first player without a legal move wins.
    Misere,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ruleset {
    variant: Variant,
    scoring: Scoring,
}

impl Ruleset {
    pub fn new(variant: Variant, scoring: Scoring) -> Result<Self> {
        if scoring != Scoring::Weight && variant != Variant::TR {
            return Err(Error::Ruleset(format!(
                "{scoring:?} scoring is only defined for game TR"
            )));
        }
        Ok(Ruleset { variant, scoring })
    }

    pub const fn weighted(variant: Variant) -> Self {
        Ruleset {
            variant,
            scoring: Scoring::Weight,
        }
    }

    pub const T: Ruleset = Ruleset::weighted(Variant::T);
    pub const R: Ruleset = Ruleset::weighted(Variant::R);
    pub const TR: Ruleset = Ruleset::weighted(Variant::TR);
    pub const CANONICAL: Ruleset = Ruleset {
        variant: Variant::TR,
        scoring: Scoring::Canonical,
    };
    pub const MISERE: Ruleset = Ruleset {
        variant: Variant::TR,
        scoring: Scoring::Misere,
    };

    pub fn variant(self) -> Variant {
        self.variant
    }

    pub fn scoring(self) -> Scoring {
        self.scoring
    }

    pub fn all() -> [Ruleset; 5] {
        [Self::T, Self::R, Self::TR, Self::CANONICAL, Self::MISERE]
    }
}

impl fmt::Display for Ruleset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match (self.variant, self.scoring) {
            (Variant::T, _) => "t",
            (Variant::R, _) => "r",
            (Variant::TR, Scoring::Weight) => "tr",
            (Variant::TR, Scoring::Canonical) => "tr-canonical",
            (Variant::TR, Scoring::Misere) => "tr-misere",
        };
        f.write_str(s)
    }
}

impl FromStr for Ruleset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t" => Ok(Self::T),
            "r" => Ok(Self::R),
            "tr" => Ok(Self::TR),
            "tr-canonical" | "canonical" => Ok(Self::CANONICAL),
            "tr-misere" | "misere" => Ok(Self::MISERE),
            other => Err(Error::Ruleset(format!("unknown game `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Alice,
    Bob,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Player::Alice => 'A',
            Player::Bob => 'B',
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Alice => "Alice",
            Player::Bob => "Bob",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ongoing,
    AllTaken,
    /// Vertices remain but none may be taken (game TR only).
    Stalled,
}

/// Legal moves of the player on turn for `taken` under `variant`.
pub fn legal_moves_for(g: &WeightedGraph, variant: Variant, taken: &VertexSet) -> VertexSet {
    let remaining = taken.complement();
    let mut legal = remaining.clone();
    if variant.requires_taken_connected() && !taken.is_empty() {
        let mut frontier = VertexSet::empty(g.n());
        for v in taken.iter() {
            frontier = frontier.union(g.neighbors(v));
        }
        legal = legal.intersection(&frontier);
    }
    if variant.requires_remaining_connected() && remaining.len() > 2 {
        legal = legal.difference(&cut_vertices_unchecked(g, &remaining));
    }
    legal
}

/// A position: the taken set, who moves next and what each player holds.
#[derive(Clone, Debug)]
pub struct GameState<'g> {
    graph: &'g WeightedGraph,
    ruleset: Ruleset,
    taken: VertexSet,
    to_move: Player,
    alice_gain: Weight,
    bob_gain: Weight,
}

impl<'g> GameState<'g> {
    pub fn new(graph: &'g WeightedGraph, ruleset: Ruleset) -> Self {
        GameState {
            graph,
            ruleset,
            taken: VertexSet::empty(graph.n()),
            to_move: Player::Alice,
            alice_gain: Weight::zero(),
            bob_gain: Weight::zero(),
        }
    }

    /// State with `taken` already removed. Gains are not tracked for the
    /// prefix (both start at zero); the player on turn follows parity.
    pub fn from_taken(graph: &'g WeightedGraph, ruleset: Ruleset, taken: VertexSet) -> Result<Self> {
        let remaining = taken.complement();
        let v = ruleset.variant();
        if v.requires_taken_connected() && !is_connected(graph, &taken) {
            return Err(Error::Precondition("taken vertices are not connected".into()));
        }
        if v.requires_remaining_connected() && !is_connected(graph, &remaining) {
            return Err(Error::Precondition("remaining vertices are not connected".into()));
        }
        let to_move = if taken.len() % 2 == 0 { Player::Alice } else { Player::Bob };
        Ok(GameState {
            graph,
            ruleset,
            taken,
            to_move,
            alice_gain: Weight::zero(),
            bob_gain: Weight::zero(),
        })
    }

    pub fn graph(&self) -> &'g WeightedGraph {
        self.graph
    }

    pub fn ruleset(&self) -> Ruleset {
        self.ruleset
    }

    pub fn taken(&self) -> &VertexSet {
        &self.taken
    }

    pub fn remaining(&self) -> VertexSet {
        self.taken.complement()
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn gain(&self, p: Player) -> &Weight {
        match p {
            Player::Alice => &self.alice_gain,
            Player::Bob => &self.bob_gain,
        }
    }

    pub fn moves_played(&self) -> usize {
        self.taken.len()
    }

    pub fn legal_moves(&self) -> VertexSet {
        legal_moves_for(self.graph, self.ruleset.variant(), &self.taken)
    }

    pub fn is_legal(&self, v: usize) -> bool {
        v < self.graph.n() && !self.taken.contains(v) && self.violation(v).is_none()
    }

    /// The condition `v` would violate, if any.
    fn violation(&self, v: usize) -> Option<Condition> {
        let variant = self.ruleset.variant();
        if variant.requires_taken_connected()
            && !self.taken.is_empty()
            && self.graph.neighbors(v).is_disjoint(&self.taken)
        {
            return Some(Condition::T);
        }
        if variant.requires_remaining_connected() {
            let mut rest = self.remaining();
            rest.remove(v);
            if !is_connected(self.graph, &rest) {
                return Some(Condition::R);
            }
        }
        None
    }

    pub fn apply(&self, v: usize) -> Result<GameState<'g>> {
        if v >= self.graph.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.graph.n(),
            });
        }
        if self.taken.contains(v) {
            return Err(Error::AlreadyTaken(v));
        }
        if let Some(condition) = self.violation(v) {
            return Err(Error::IllegalMove { vertex: v, condition });
        }
        let mut next = self.clone();
        next.taken.insert(v);
        let w = self.graph.weight(v);
        match self.to_move {
            Player::Alice => next.alice_gain += w,
            Player::Bob => next.bob_gain += w,
        }
        next.to_move = self.to_move.other();
        Ok(next)
    }

    pub fn status(&self) -> Status {
        if self.taken.len() == self.graph.n() {
            Status::AllTaken
        } else if self.legal_moves().is_empty() {
            Status::Stalled
        } else {
            Status::Ongoing
        }
    }

    /// For canonical and misère scoring: the winner once no move is left.
    pub fn winner(&self) -> Option<Player> {
        if self.status() == Status::Ongoing {
            return None;
        }
        match self.ruleset.scoring() {
            Scoring::Weight => None,
            Scoring::Canonical => Some(self.to_move.other()),
            Scoring::Misere => Some(self.to_move),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    AllTaken,
    Stalled,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::AllTaken => "all_taken",
            Termination::Stalled => "stalled",
        })
    }
}

/// A finished game: moves in order, final gains and why it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub moves: Vec<(Player, usize)>,
    pub alice_gain: Weight,
    pub bob_gain: Weight,
    pub end: Termination,
}

impl Transcript {
    /// Replays the moves from the initial position, checking legality and
    /// the recorded gains.
    pub fn replay<'g>(&self, g: &'g WeightedGraph, ruleset: Ruleset) -> Result<GameState<'g>> {
        let mut state = GameState::new(g, ruleset);
        for (i, &(player, v)) in self.moves.iter().enumerate() {
            if player != state.to_move() {
                return Err(Error::Precondition(format!(
                    "move {} recorded for {player} but {} is on turn",
                    i + 1,
                    state.to_move()
                )));
            }
            state = state.apply(v)?;
        }
        let end = match state.status() {
            Status::AllTaken => Termination::AllTaken,
            Status::Stalled => Termination::Stalled,
            Status::Ongoing => {
                return Err(Error::Precondition("transcript ends before the game does".into()))
            }
        };
        if end != self.end || state.gain(Player::Alice) != &self.alice_gain || state.gain(Player::Bob) != &self.bob_gain {
            return Err(Error::Precondition("recorded result does not match replay".into()));
        }
        Ok(state)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, (p, v)) in self.moves.iter().enumerate() {
            out.push_str(&format!("{} {} {}\n", i + 1, p.letter(), v));
        }
        out.push_str(&format!("alice {}\n", weight::format(&self.alice_gain)));
        out.push_str(&format!("bob {}\n", weight::format(&self.bob_gain)));
        out.push_str(&format!("end {}\n", self.end));
        out
    }

    pub fn parse(text: &str) -> Result<Transcript> {
        let mut moves = Vec::new();
        let (mut alice, mut bob, mut end) = (None, None, None);
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: &str| Error::Parse { line, msg: msg.to_string() };
            let toks: Vec<&str> = raw.split_whitespace().collect();
            match toks.as_slice() {
                [] => {}
                ["alice", w] => alice = Some(weight::parse(w).ok_or_else(|| err("bad gain"))?),
                ["bob", w] => bob = Some(weight::parse(w).ok_or_else(|| err("bad gain"))?),
                ["end", "all_taken"] => end = Some(Termination::AllTaken),
                ["end", "stalled"] => end = Some(Termination::Stalled),
                [turn, p, v] => {
                    let turn: usize = turn.parse().map_err(|_| err("bad turn number"))?;
                    if turn != moves.len() + 1 {
                        return Err(err("turn numbers must be consecutive"));
                    }
                    let player = match *p {
                        "A" => Player::Alice,
                        "B" => Player::Bob,
                        _ => return Err(err("player must be A or B")),
                    };
                    let v: usize = v.parse().map_err(|_| err("bad vertex"))?;
                    moves.push((player, v));
                }
                _ => return Err(err("unrecognized transcript line")),
            }
        }
        let missing = |what: &str| Error::Parse {
            line: 0,
            msg: format!("missing `{what}` footer"),
        };
        Ok(Transcript {
            moves,
            alice_gain: alice.ok_or_else(|| missing("alice"))?,
            bob_gain: bob.ok_or_else(|| missing("bob"))?,
            end: end.ok_or_else(|| missing("end"))?,
        })
    }
}

/// Plays `alice` against `bob` until no move is left.
pub fn simulate(
    g: &WeightedGraph,
    ruleset: Ruleset,
    alice: &mut dyn Strategy,
    bob: &mut dyn Strategy,
    seed: u64,
) -> Result<Transcript> {
    alice.begin(g, ruleset, seed)?;
    bob.begin(g, ruleset, seed)?;
    let mut state = GameState::new(g, ruleset);
    let mut moves = Vec::new();
    loop {
        let end = match state.status() {
            Status::Ongoing => None,
            Status::AllTaken => Some(Termination::AllTaken),
            Status::Stalled => Some(Termination::Stalled),
        };
        if let Some(end) = end {
            return Ok(Transcript {
                moves,
                alice_gain: state.gain(Player::Alice).clone(),
                bob_gain: state.gain(Player::Bob).clone(),
                end,
            });
        }
        let player = state.to_move();
        let strategy: &mut dyn Strategy = match player {
            Player::Alice => &mut *alice,
            Player::Bob => &mut *bob,
        };
        let v = strategy.choose(&state)?;
        let next = state.apply(v).map_err(|e| {
            Error::strategy(
                strategy.name(),
                format!("chose {v} at taken={:?}: {e}", state.taken()),
            )
        })?;
        alice.observe(&state, v);
        bob.observe(&state, v);
        moves.push((player, v));
        state = next;
    }
}
