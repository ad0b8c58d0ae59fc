//! Unweighted graphs for the canonical and misère TR games.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Builder, Compiled, Role};
use crate::error::Result;
use crate::qbf::{validate_shape, QbfFormula, Target};
use crate::weight::Weight;

pub fn compile_canonical(f: &QbfFormula) -> Result<Compiled> {
    compile(f, Target::Canonical)
}

/// Like the canonical graph with 3-vertex V-gadgets and doubled enforcers
/// whose hubs are joined by an edge.
pub fn compile_misere(f: &QbfFormula) -> Result<Compiled> {
    compile(f, Target::Misere)
}

/// Vertex count predicted from the construction rules alone.
pub fn canonical_vertex_count(n: usize, m: usize, target: Target) -> usize {
    // Special neighbors summed over all enforced vertices.
    let paths = if n == 1 { 2 } else { 8 * n - 8 };
    let (gadget, hubs) = match target {
        Target::Misere => (2, 2),
        _ => (4, 1),
    };
    let base = 3 * n + m + 1;
    let enforced = 2 * n - 1;
    base + hubs * (enforced + paths) + gadget * (n + m + hubs * paths)
}

fn compile(f: &QbfFormula, target: Target) -> Result<Compiled> {
    validate_shape(f, target)?;
    let misere = target == Target::Misere;
    let n = f.num_vars();
    let mut b = Builder::new();
    let zero = Weight::zero;
    let gadget = |b: &mut Builder, c: usize| {
        let at = Box::new(b.roles[c].clone());
        let add = |b: &mut Builder, index| b.add(Role::Gadget { at: at.clone(), index }, zero());
        if misere {
            for index in 1..=2 {
                let p = add(b, index);
                b.edge(c, p);
            }
        } else {
            for side in 0..2 {
                let inner = add(b, 2 * side + 1);
                let outer = add(b, 2 * side + 2);
                b.edge(c, inner);
                b.edge(inner, outer);
            }
        }
    };
    let mut t = Vec::new();
    let mut fv = Vec::new();
    for i in 1..=n {
        let ti = b.add(Role::True(i), zero());
        let mi = b.add(Role::Middle(i), zero());
        let fi = b.add(Role::False(i), zero());
        b.edge(ti, mi);
        b.edge(mi, fi);
        gadget(&mut b, mi);
        t.push(ti);
        fv.push(fi);
    }
    for i in 0..n.saturating_sub(1) {
        for u in [t[i], fv[i]] {
            for v in [t[i + 1], fv[i + 1]] {
                b.edge(u, v);
            }
        }
    }
    let mut clause_vertices = Vec::new();
    for (l, clause) in f.clauses.iter().enumerate() {
        let c = b.add(Role::Clause(l + 1), zero());
        for &lit in clause {
            let i = f.position(lit.unsigned_abs()).expect("quantified literal");
            b.edge(c, if lit < 0 { t[i] } else { fv[i] });
        }
        gadget(&mut b, c);
        clause_vertices.push(c);
    }
    let last = b.add(Role::Last, zero());
    b.edge(t[n - 1], last);
    b.edge(fv[n - 1], last);
    for &c in &clause_vertices {
        b.edge(last, c);
    }
    let mut special = Vec::new();
    for i in 0..n {
        special.push(t[i]);
        special.push(fv[i]);
    }
    special.push(last);
    let enforced: Vec<usize> = special[2..].to_vec();
    let neighbors_now: Vec<Vec<usize>> = enforced
        .iter()
        .map(|&u| {
            special
                .iter()
                .copied()
                .filter(|&s| b.edges.iter().any(|&(x, y)| (x, y) == (u, s) || (x, y) == (s, u)))
                .collect()
        })
        .collect();
    for (&u, specials) in enforced.iter().zip(&neighbors_now) {
        let of = Box::new(b.roles[u].clone());
        let mut hubs = Vec::new();
        for second in [false, true].into_iter().take(if misere { 2 } else { 1 }) {
            let hub = b.add(Role::Hub { of: of.clone(), second }, zero());
            b.edge(hub, u);
            for &s in specials {
                let to = Box::new(b.roles[s].clone());
                let mid = b.add(
                    Role::HubPath {
                        of: of.clone(),
                        second,
                        to,
                    },
                    zero(),
                );
                b.edge(hub, mid);
                b.edge(mid, s);
                gadget(&mut b, mid);
            }
            hubs.push(hub);
        }
        if misere {
            b.edge(hubs[0], hubs[1]);
        }
    }
    b.finish(target, n, BigInt::one(), Vec::new())
}
