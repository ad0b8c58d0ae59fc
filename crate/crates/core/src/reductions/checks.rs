//! Instance-level checks of compiled reductions against the formula.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{pow, Zero};

use super::{Compiled, Role};
use crate::error::{Error, Result};
use crate::game::{GameState, Player, Ruleset};
use crate::qbf::{clause_holds, evaluate, QbfFormula, Target};
use crate::solver::{solve_with, SolveOptions, SolveResult, Solver};
use crate::vertex_set::VertexSet;
use crate::weight::{format, Weight};

fn rulesets(target: Target) -> Vec<Ruleset> {
    match target {
        Target::Canonical => vec![Ruleset::CANONICAL],
        Target::Misere => vec![Ruleset::MISERE],
        Target::Weighted => vec![Ruleset::R, Ruleset::TR],
    }
}

#[derive(Clone, Debug)]
pub struct SoundnessCase {
    pub ruleset: Ruleset,
    pub alice_wins: bool,
    pub result: SolveResult,
}

#[derive(Clone, Debug)]
pub struct SoundnessReport {
    pub truth: bool,
    /// Total weight, for weighted targets.
    pub total: Option<Weight>,
    pub cases: Vec<SoundnessCase>,
}

impl SoundnessReport {
    pub fn consistent(&self) -> bool {
        self.cases.iter().all(|c| c.alice_wins == self.truth)
    }
}

/// Compiles `f` for `target` and compares the game outcome with the truth
/// value: a win for Alice, or more than half the weight, in every ruleset
/// the target covers.
pub fn soundness_check(f: &QbfFormula, target: Target, opts: &SolveOptions) -> Result<SoundnessReport> {
    let c = match target {
        Target::Canonical => super::compile_canonical(f)?,
        Target::Misere => super::compile_misere(f)?,
        Target::Weighted => super::compile_weighted(f)?,
    };
    soundness_check_compiled(f, &c, opts)
}

pub fn soundness_check_compiled(f: &QbfFormula, c: &Compiled, opts: &SolveOptions) -> Result<SoundnessReport> {
    let truth = evaluate(f)?;
    let total = (c.target == Target::Weighted).then(|| c.graph.total_weight());
    let mut cases = Vec::new();
    for ruleset in rulesets(c.target) {
        let result = solve_with(&c.graph, ruleset, opts)?;
        let alice_wins = match &total {
            Some(w) => {
                let alice = result.alice_value().expect("weight scoring");
                alice * Weight::from_integer(BigInt::from(2)) > *w
            }
            None => result.winner() == Some(Player::Alice),
        };
        cases.push(SoundnessCase {
            ruleset,
            alice_wins,
            result,
        });
    }
    Ok(SoundnessReport { truth, total, cases })
}

/// Alice's share of one clause group along a line, against the expected
/// share for the assignment the line fixes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseShare {
    pub clause: usize,
    pub satisfied: bool,
    pub alice: Weight,
    pub expected: Weight,
}

#[derive(Clone, Debug, Default)]
pub struct LemmaReport {
    pub starts_with_a_b: bool,
    pub variable_picks_in_order: bool,
    /// Truth value of each variable fixed by the line.
    pub assignment: Option<Vec<bool>>,
    pub clause_shares: Vec<ClauseShare>,
    pub findings: Vec<String>,
}

impl LemmaReport {
    pub fn ok(&self) -> bool {
        self.findings.is_empty()
    }

    /// Just the opening: `a`, `b`, then one vertex of each variable pair.
    pub fn opening_ok(&self) -> bool {
        self.starts_with_a_b && self.variable_picks_in_order
    }
}

fn clause_unit(c: &Compiled, m: usize, j: usize) -> Weight {
    let scale_ratio = Weight::from_integer(c.scale.clone()) / Weight::from_integer(pow(BigInt::from(999), m + 1));
    Weight::from_integer(pow(BigInt::from(999), m + 1 - j)) * scale_ratio
}

fn expected_share(c: &Compiled, m: usize, j: usize, satisfied: bool) -> Weight {
    let k = if satisfied { 41 } else { 40 };
    clause_unit(c, m, j) * Weight::from_integer(BigInt::from(k))
}

/// Inspects a weighted-reduction line (usually the principal variation):
/// the opening `a, b`, variable picks in index order, then Alice's share of
/// every clause group.
pub fn lemma_trace_check(f: &QbfFormula, c: &Compiled, line: &[usize]) -> LemmaReport {
    let mut r = LemmaReport::default();
    let n = f.num_vars();
    let m = f.num_clauses();
    let a = c.vertex(&Role::A);
    let b = c.vertex(&Role::B);
    r.starts_with_a_b = line.len() >= 2 && line[0] == a && line[1] == b;
    if !r.starts_with_a_b {
        r.findings.push(format!("line does not open with a, b: {:?}", &line[..line.len().min(2)]));
    }
    let mut sigma = Vec::new();
    r.variable_picks_in_order = true;
    for i in 1..=n {
        let x = c.vertex(&Role::Positive(i));
        let nx = c.vertex(&Role::Negative(i));
        match line.get(i + 1) {
            Some(&v) if v == x || v == nx => sigma.push(v == x),
            other => {
                r.variable_picks_in_order = false;
                r.findings.push(format!("move {} is {other:?}, not x{i} or ~x{i}", i + 2));
                break;
            }
        }
    }
    if !r.variable_picks_in_order {
        return r;
    }
    for (j0, clause) in f.clauses.iter().enumerate() {
        let j = j0 + 1;
        let satisfied = clause_holds(f.semantics, clause, |v| sigma[f.position(v).expect("quantified")]);
        let alice = line
            .iter()
            .enumerate()
            .filter(|&(k, &v)| k % 2 == 0 && c.map.group(v) == Some(n + j))
            .fold(Weight::zero(), |acc, (_, &v)| acc + c.graph.weight(v));
        let expected = expected_share(c, m, j, satisfied);
        if alice != expected {
            r.findings.push(format!(
                "clause {j}: Alice's share is {}, expected {}",
                format(&alice),
                format(&expected)
            ));
        }
        r.clause_shares.push(ClauseShare {
            clause: j,
            satisfied,
            alice,
            expected,
        });
    }
    r.assignment = Some(sigma);
    r
}

/// One evaluation of a clause's variables in the restricted subgame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseCase {
    /// Values of the clause's distinct variables, in order of appearance.
    pub values: Vec<bool>,
    pub satisfied: bool,
    pub alice: Weight,
    pub expected: Weight,
}

impl ClauseCase {
    pub fn matches(&self) -> bool {
        self.alice == self.expected
    }
}

/// Plays only inside the gadget of clause `j` after `a`, `b` and one vertex
/// per variable pair are gone, Bob to move, for every evaluation of the
/// clause's variables (other variables false).
pub fn clause_subgame_check(f: &QbfFormula, c: &Compiled, j: usize, opts: &SolveOptions) -> Result<Vec<ClauseCase>> {
    if c.target != Target::Weighted {
        return Err(Error::Precondition("clause subgames exist only in weighted reductions".into()));
    }
    if j == 0 || j > f.num_clauses() {
        return Err(Error::Params(format!("no clause {j}")));
    }
    let n = f.num_vars();
    let clause = f.clauses[j - 1];
    let mut vars: Vec<usize> = Vec::new();
    for l in clause {
        let i = f.position(l.unsigned_abs()).expect("quantified");
        if !vars.contains(&i) {
            vars.push(i);
        }
    }
    let g = &c.graph;
    let group = VertexSet::from_iter_n(g.n(), (0..g.n()).filter(|&v| c.map.group(v) == Some(n + j)));
    let mut solver = Solver::restricted(g, Ruleset::R, &group, opts)?;
    let mut cases = Vec::new();
    for bits in 0..1usize << vars.len() {
        let mut sigma = vec![false; n];
        let values: Vec<bool> = (0..vars.len()).map(|k| bits >> k & 1 == 1).collect();
        for (k, &i) in vars.iter().enumerate() {
            sigma[i] = values[k];
        }
        let mut taken = VertexSet::empty(g.n());
        taken.insert(c.vertex(&Role::A));
        taken.insert(c.vertex(&Role::B));
        for (i, &s) in sigma.iter().enumerate() {
            // A true variable leaves ¬x_i behind, so x_i is gone.
            let role = if s { Role::Positive(i + 1) } else { Role::Negative(i + 1) };
            taken.insert(c.vertex(&role));
        }
        let result = solver.solve_from(&taken)?;
        let satisfied = clause_holds(f.semantics, &clause, |v| sigma[f.position(v).expect("quantified")]);
        cases.push(ClauseCase {
            values,
            satisfied,
            alice: result.alice_value().expect("weight scoring").clone(),
            expected: expected_share(c, f.num_clauses(), j, satisfied),
        });
    }
    Ok(cases)
}

/// Every vertex of a weight group outweighs all later groups together.
pub fn group_dominance(c: &Compiled) -> bool {
    let g = &c.graph;
    let groups = (0..g.n()).filter_map(|v| c.map.group(v)).max().unwrap_or(0);
    let mut later = Weight::zero();
    for k in (0..=groups).rev() {
        let members: Vec<usize> = (0..g.n()).filter(|&v| c.map.group(v) == Some(k)).collect();
        if members.iter().any(|&v| *g.weight(v) <= later) {
            return false;
        }
        later += members.iter().fold(Weight::zero(), |acc, &v| acc + g.weight(v));
    }
    true
}

#[derive(Clone, Debug, Default)]
pub struct ObservationReport {
    pub positions: usize,
    pub gadget_entries: usize,
    pub enforcer_openings: usize,
    pub violations: Vec<String>,
}

impl ObservationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Walks every reachable position of an unweighted reduction and checks:
/// entering a V-gadget ends the game within two plies with the enterer
/// losing; `T_i` and `F_i` are never both taken; opening at an enforced
/// vertex or at one of its hubs loses for Alice.
pub fn observation_check(c: &Compiled, limit: usize, opts: &SolveOptions) -> Result<ObservationReport> {
    let ruleset = match c.target {
        Target::Canonical => Ruleset::CANONICAL,
        Target::Misere => Ruleset::MISERE,
        Target::Weighted => {
            return Err(Error::Precondition("observations concern unweighted reductions".into()))
        }
    };
    let g = &c.graph;
    let n_vars = c
        .map
        .roles()
        .iter()
        .filter(|r| matches!(r, Role::True(_)))
        .count();
    let pairs: Vec<(usize, usize)> = (1..=n_vars)
        .map(|i| (c.vertex(&Role::True(i)), c.vertex(&Role::False(i))))
        .collect();
    let mut report = ObservationReport::default();
    let mut seen = HashSet::new();
    let mut stack = vec![GameState::new(g, ruleset)];
    while let Some(s) = stack.pop() {
        if !seen.insert(s.taken().words().to_vec()) {
            continue;
        }
        report.positions += 1;
        if report.positions > limit {
            return Err(Error::TooLarge(format!("more than {limit} reachable positions")));
        }
        for (i, &(t, f)) in pairs.iter().enumerate() {
            if s.taken().contains(t) && s.taken().contains(f) {
                report.violations.push(format!("T{0} and F{0} both taken", i + 1));
            }
        }
        for v in s.legal_moves().iter() {
            let next = s.apply(v)?;
            let fresh_gadget = match c.map.role(v) {
                Role::Gadget { at, .. } => s.taken().iter().all(|u| {
                    !matches!(c.map.role(u), Role::Gadget { at: other, .. } if other == at)
                }),
                _ => false,
            };
            if fresh_gadget {
                report.gadget_entries += 1;
                if !ends_with_loss(&next, s.to_move(), 2)? {
                    report
                        .violations
                        .push(format!("entering {} does not lose within two plies", c.map.role(v)));
                }
            }
            stack.push(next);
        }
    }
    let mut solver = Solver::new(g, ruleset, opts)?;
    let start = GameState::new(g, ruleset);
    for r in c.map.roles() {
        if let Role::Hub { of, .. } = r {
            let hub = c.vertex(r);
            let u = c.vertex(of);
            for x in [u, hub] {
                if !start.is_legal(x) {
                    continue;
                }
                report.enforcer_openings += 1;
                let taken = VertexSet::from_iter_n(g.n(), [x]);
                if solver.solve_from(&taken)?.winner() != Some(Player::Bob) {
                    report
                        .violations
                        .push(format!("opening at {} does not lose for Alice", c.map.role(x)));
                }
            }
        }
    }
    Ok(report)
}

/// True when every continuation ends within `plies` moves with `enterer`
/// losing.
fn ends_with_loss(s: &GameState<'_>, enterer: Player, plies: usize) -> Result<bool> {
    let legal = s.legal_moves();
    if legal.is_empty() {
        return Ok(s.winner() == Some(enterer.other()));
    }
    if plies == 0 {
        return Ok(false);
    }
    for v in legal.iter() {
        if !ends_with_loss(&s.apply(v)?, enterer, plies - 1)? {
            return Ok(false);
        }
    }
    Ok(true)
}
