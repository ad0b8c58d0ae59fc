//! Line-oriented human-vs-engine play.

use std::io::{BufRead, Write};

use graph_sharing::game::GameState;
use graph_sharing::strategy::Strategy;
use graph_sharing::weight;
use graph_sharing::{Player, Result, Ruleset, Scoring, Status, Termination, Transcript, WeightedGraph};

/// Largest graph on which the engine defaults to perfect play.
pub const OPTIMAL_ENGINE_LIMIT: usize = 30;

pub struct Session<'g> {
    pub graph: &'g WeightedGraph,
    pub ruleset: Ruleset,
    pub human: Player,
    pub seed: u64,
    pub announce: String,
}

fn lower(p: Player) -> String {
    p.to_string().to_lowercase()
}

fn listing(vs: impl Iterator<Item = usize>) -> String {
    let items: Vec<String> = vs.map(|v| v.to_string()).collect();
    if items.is_empty() {
        "none".to_string()
    } else {
        items.join(" ")
    }
}

fn move_lines(moves: &[(Player, usize)]) -> String {
    moves
        .iter()
        .enumerate()
        .map(|(i, (p, v))| format!("{} {} {}\n", i + 1, p.letter(), v))
        .collect()
}

impl Session<'_> {
    /// Runs until the game ends, the human types `quit`, or input runs out.
    /// Returns the transcript text, partial when the game was abandoned.
    pub fn run(&self, mut engine: Box<dyn Strategy>, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<String> {
        let g = self.graph;
        engine.begin(g, self.ruleset, self.seed)?;
        writeln!(out, "game {}, you play {}, {}", self.ruleset, lower(self.human), self.announce)?;
        writeln!(
            out,
            "graph {} vertices, {} edges, total weight {}",
            g.n(),
            g.edges().len(),
            weight::format(&g.total_weight())
        )?;
        let mut state = GameState::new(g, self.ruleset);
        let mut moves = Vec::new();
        let mut line = String::new();
        loop {
            let end = match state.status() {
                Status::Ongoing => None,
                Status::AllTaken => Some(Termination::AllTaken),
                Status::Stalled => Some(Termination::Stalled),
            };
            if let Some(end) = end {
                let t = Transcript {
                    moves,
                    alice_gain: state.gain(Player::Alice).clone(),
                    bob_gain: state.gain(Player::Bob).clone(),
                    end,
                };
                writeln!(out, "game over: {end}")?;
                writeln!(
                    out,
                    "gains alice {} bob {}",
                    weight::format(&t.alice_gain),
                    weight::format(&t.bob_gain)
                )?;
                if self.ruleset.scoring() != Scoring::Weight {
                    if let Some(w) = state.winner() {
                        writeln!(out, "winner {}", lower(w))?;
                    }
                }
                let text = t.to_text();
                writeln!(out, "transcript")?;
                out.write_all(text.as_bytes())?;
                return Ok(text);
            }
            let mover = state.to_move();
            if mover != self.human {
                let v = engine.choose(&state)?;
                let next = state.apply(v)?;
                engine.observe(&state, v);
                writeln!(out, "{} takes {v} (weight {})", lower(mover), weight::format(g.weight(v)))?;
                moves.push((mover, v));
                state = next;
                continue;
            }
            let remaining = state.remaining();
            let rest_weight = remaining.iter().map(|v| g.weight(v).clone()).sum();
            writeln!(
                out,
                "remaining {} vertices, weight {}: {}",
                remaining.len(),
                weight::format(&rest_weight),
                listing(remaining.iter())
            )?;
            writeln!(out, "legal {}", listing(state.legal_moves().iter()))?;
            writeln!(
                out,
                "gains alice {} bob {}",
                weight::format(state.gain(Player::Alice)),
                weight::format(state.gain(Player::Bob))
            )?;
            loop {
                write!(out, "{}> ", lower(mover))?;
                out.flush()?;
                line.clear();
                if input.read_line(&mut line)? == 0 {
                    writeln!(out)?;
                    return self.abort(out, &moves, "end of input");
                }
                let tok = line.trim();
                if tok.is_empty() {
                    continue;
                }
                if tok == "quit" {
                    return self.abort(out, &moves, "quit");
                }
                let Ok(v) = tok.parse::<usize>() else {
                    writeln!(out, "rejected: `{tok}` is not a vertex number; enter a vertex or `quit`")?;
                    continue;
                };
                match state.apply(v) {
                    Err(e) => writeln!(out, "rejected: {e}")?,
                    Ok(next) => {
                        engine.observe(&state, v);
                        writeln!(out, "{} takes {v} (weight {})", lower(mover), weight::format(g.weight(v)))?;
                        moves.push((mover, v));
                        state = next;
                        break;
                    }
                }
            }
        }
    }

    fn abort(&self, out: &mut dyn Write, moves: &[(Player, usize)], why: &str) -> Result<String> {
        let text = move_lines(moves);
        writeln!(out, "game aborted after {} moves ({why})", moves.len())?;
        writeln!(out, "transcript (partial)")?;
        out.write_all(text.as_bytes())?;
        Ok(text)
    }
}
