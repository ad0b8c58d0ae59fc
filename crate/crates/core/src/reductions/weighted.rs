//! Weighted graph for games R and TR from an ∃∀…∃ NAE-3 formula.

use num_bigint::BigInt;
use num_traits::{pow, Zero};

use super::{Builder, Compiled, Role};
use crate::error::Result;
use crate::qbf::{validate_shape, QbfFormula, Target};
use crate::weight::Weight;

pub fn default_z_size(n: usize, m: usize) -> usize {
    10 * (m + n) + 1
}

fn repeats(c: &[i32; 3]) -> bool {
    let v = c.map(|l| l.unsigned_abs());
    v[0] == v[1] || v[0] == v[2] || v[1] == v[2]
}

pub fn compile_weighted(f: &QbfFormula) -> Result<Compiled> {
    compile_weighted_with(f, None)
}

/// Weights are multiplied by `999^(m+1)` so all of them are integers.
/// `z_size` replaces the size of the hub set `Z`; anything below the
/// default voids the correctness argument.
///
/// Each clause gadget is two light triangles, one on the occurrence
/// vertices of the literals as written and one on their partners, with both
/// heavy vertices joined to all six light vertices and to each other. A
/// variable repeated inside a clause gets one occurrence pair per literal.
pub fn compile_weighted_with(f: &QbfFormula, z_size: Option<usize>) -> Result<Compiled> {
    validate_shape(f, Target::Weighted)?;
    let n = f.num_vars();
    let m = f.num_clauses();
    let mut warnings = Vec::new();
    if n < 2 {
        warnings.push("the opening argument assumes at least two variables".to_string());
    }
    for (j, c) in f.clauses.iter().enumerate() {
        if repeats(c) {
            warnings.push(format!("clause {} repeats a variable", j + 1));
        }
    }
    let z = z_size.unwrap_or_else(|| default_z_size(n, m));
    if z < default_z_size(n, m) {
        warnings.push(format!(
            "|Z| = {z} is below {}; soundness is not guaranteed",
            default_z_size(n, m)
        ));
    }
    let big = |x: u64| BigInt::from(x);
    let scale = pow(big(999), m + 1);
    let int = |x: BigInt| Weight::from_integer(x);
    let nine = |e: usize| pow(big(9), e);
    let mut b = Builder::new();
    let mut a_weight = nine(n + 2);
    let mut e = n as i64 - 1;
    while e >= 2 {
        a_weight += big(2) * nine(e as usize);
        e -= 2;
    }
    let a = b.add(Role::A, int(a_weight * &scale + 1));
    let bv = b.add(Role::B, int(nine(n + 2) * &scale));
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for i in 1..=n {
        let w = int(nine(n + 1 - i) * &scale);
        let x = b.add(Role::Positive(i), w.clone());
        let y = b.add(
            Role::Inner {
                var: i,
                negative_side: false,
            },
            Weight::zero(),
        );
        let yn = b.add(
            Role::Inner {
                var: i,
                negative_side: true,
            },
            Weight::zero(),
        );
        let nx = b.add(Role::Negative(i), w);
        b.edge(x, y);
        b.edge(y, yn);
        b.edge(yn, nx);
        pos.push(x);
        neg.push(nx);
    }
    for (j0, clause) in f.clauses.iter().enumerate() {
        let j = j0 + 1;
        let unit = pow(big(999), m + 1 - j);
        let light = int(big(10) * &unit);
        let heavy = int(big(11) * &unit);
        let mut written = Vec::new();
        let mut partner = Vec::new();
        let repeated = repeats(clause);
        for (k, &lit) in clause.iter().enumerate() {
            let slot = repeated.then_some(k + 1);
            let i = f.position(lit.unsigned_abs()).expect("quantified literal");
            let var = i + 1;
            let xo = b.add(
                Role::Occurrence {
                    var,
                    clause: j,
                    slot,
                    negated: false,
                },
                light.clone(),
            );
            let no = b.add(
                Role::Occurrence {
                    var,
                    clause: j,
                    slot,
                    negated: true,
                },
                light.clone(),
            );
            b.edge(xo, pos[i]);
            b.edge(no, neg[i]);
            if lit > 0 {
                written.push(xo);
                partner.push(no);
            } else {
                written.push(no);
                partner.push(xo);
            }
        }
        let c = b.add(Role::Heavy { clause: j, primed: false }, heavy.clone());
        let cp = b.add(Role::Heavy { clause: j, primed: true }, heavy);
        b.edge(c, cp);
        for tri in [&written, &partner] {
            for s in 0..3 {
                b.edge(tri[s], tri[(s + 1) % 3]);
            }
            for &v in tri.iter() {
                b.edge(c, v);
                b.edge(cp, v);
            }
        }
    }
    for k in 1..=z {
        let zv = b.add(Role::Z(k), Weight::zero());
        for i in 0..n {
            b.edge(zv, pos[i]);
            b.edge(zv, neg[i]);
        }
    }
    let total = b.roles.len();
    for v in 0..total {
        for hub in [a, bv] {
            if v != hub {
                b.edge(hub, v);
            }
        }
    }
    b.finish(Target::Weighted, n, scale, warnings)
}
