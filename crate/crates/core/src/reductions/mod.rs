//! Game graphs compiled from quantified boolean formulas, with vertex roles
//! and end-to-end checks against the formula's truth value.

mod checks;
mod unweighted;
mod weighted;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Result;
use crate::graph::WeightedGraph;
use crate::qbf::Target;
use crate::weight::Weight;

pub use checks::{
    clause_subgame_check, group_dominance, lemma_trace_check, observation_check, soundness_check,
    soundness_check_compiled, ClauseCase, ClauseShare, LemmaReport, ObservationReport, SoundnessCase,
    SoundnessReport,
};
pub use unweighted::{canonical_vertex_count, compile_canonical, compile_misere};
pub use weighted::{compile_weighted, compile_weighted_with, default_z_size};

/// What a vertex stands for in a compiled graph. Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    True(usize),
    False(usize),
    /// Middle of the path between `T_i` and `F_i`.
    Middle(usize),
    Clause(usize),
    Last,
    /// Enforcer hub of a vertex; `second` marks the extra hub of the
    /// doubled enforcer.
    Hub { of: Box<Role>, second: bool },
    /// Middle of the path from a hub to a special neighbor.
    HubPath { of: Box<Role>, second: bool, to: Box<Role> },
    /// Non-attachment vertex of a V-gadget hanging at `at`.
    Gadget { at: Box<Role>, index: usize },
    A,
    B,
    Positive(usize),
    Negative(usize),
    /// Interior of the variable path, next to `x_i` or to `¬x_i`.
    Inner { var: usize, negative_side: bool },
    /// Light vertex next to `x_i` or `¬x_i`; `slot` tells apart the
    /// literals of a clause that repeats a variable.
    Occurrence {
        var: usize,
        clause: usize,
        slot: Option<usize>,
        negated: bool,
    },
    Heavy { clause: usize, primed: bool },
    Z(usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prime = |b: bool| if b { "'" } else { "" };
        let neg = |b: bool| if b { "~" } else { "" };
        match self {
            Role::True(i) => write!(f, "T{i}"),
            Role::False(i) => write!(f, "F{i}"),
            Role::Middle(i) => write!(f, "M{i}"),
            Role::Clause(l) => write!(f, "C{l}"),
            Role::Last => f.write_str("L"),
            Role::Hub { of, second } => write!(f, "E{}({of})", prime(*second)),
            Role::HubPath { of, second, to } => write!(f, "S{}({of}-{to})", prime(*second)),
            Role::Gadget { at, index } => write!(f, "V({at}).{index}"),
            Role::A => f.write_str("a"),
            Role::B => f.write_str("b"),
            Role::Positive(i) => write!(f, "x{i}"),
            Role::Negative(i) => write!(f, "~x{i}"),
            Role::Inner { var, negative_side } => write!(f, "P{var}.{}x", neg(*negative_side)),
            Role::Occurrence {
                var,
                clause,
                slot,
                negated,
            } => {
                write!(f, "{}x{var}^{clause}", neg(*negated))?;
                match slot {
                    Some(s) => write!(f, ":{s}"),
                    None => Ok(()),
                }
            }
            Role::Heavy { clause, primed } => write!(f, "c{}{clause}", prime(*primed)),
            Role::Z(k) => write!(f, "Z{k}"),
        }
    }
}

/// Role of every vertex of a compiled graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetMap {
    roles: Vec<Role>,
    index: HashMap<Role, usize>,
    n_vars: usize,
}

impl GadgetMap {
    fn new(roles: Vec<Role>, n_vars: usize) -> Self {
        let index = roles.iter().enumerate().map(|(v, r)| (r.clone(), v)).collect();
        GadgetMap { roles, index, n_vars }
    }

    pub fn len(&self) -> usize {
        self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }

    pub fn role(&self, v: usize) -> &Role {
        &self.roles[v]
    }

    pub fn vertex(&self, role: &Role) -> Option<usize> {
        self.index.get(role).copied()
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    /// Weight group of a weighted-reduction vertex: 0 for `a, b`, `i` for
    /// `x_i, ¬x_i`, `n + j` for the gadget of clause `j`.
    pub fn group(&self, v: usize) -> Option<usize> {
        match &self.roles[v] {
            Role::A | Role::B => Some(0),
            Role::Positive(i) | Role::Negative(i) => Some(*i),
            Role::Occurrence { clause, .. } | Role::Heavy { clause, .. } => Some(self.n_vars + clause),
            _ => None,
        }
    }

    /// Sidecar text, one `<vertex> <role>` line per vertex.
    pub fn to_sidecar(&self) -> String {
        self.roles
            .iter()
            .enumerate()
            .map(|(v, r)| format!("{v} {r}\n"))
            .collect()
    }
}

/// A compiled instance. Weighted graphs carry integer weights equal to the
/// rational weights times `scale`.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub target: Target,
    pub graph: WeightedGraph,
    pub map: GadgetMap,
    pub scale: BigInt,
    pub warnings: Vec<String>,
}

impl Compiled {
    /// The graph with the scale divided back out.
    pub fn unscaled(&self) -> WeightedGraph {
        let inv = Weight::new(BigInt::one(), self.scale.clone());
        self.graph.scaled(&inv)
    }

    pub fn vertex(&self, role: &Role) -> usize {
        self.map
            .vertex(role)
            .unwrap_or_else(|| panic!("no vertex with role {role}"))
    }
}

struct Builder {
    roles: Vec<Role>,
    weights: Vec<Weight>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            roles: Vec::new(),
            weights: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn add(&mut self, role: Role, weight: Weight) -> usize {
        self.roles.push(role);
        self.weights.push(weight);
        self.roles.len() - 1
    }

    fn edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    fn finish(self, target: Target, n_vars: usize, scale: BigInt, warnings: Vec<String>) -> Result<Compiled> {
        let mut g = WeightedGraph::new(self.roles.len());
        for (u, v) in self.edges {
            g.add_edge(u, v)?;
        }
        for (v, (r, w)) in self.roles.iter().zip(self.weights).enumerate() {
            g.set_weight(v, w)?;
            g.set_label(v, r.to_string())?;
        }
        Ok(Compiled {
            target,
            graph: g,
            map: GadgetMap::new(self.roles, n_vars),
            scale,
            warnings,
        })
    }
}
