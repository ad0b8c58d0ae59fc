//! Fully quantified boolean formulas with 3-literal clauses.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    ForAll,
}

impl Quantifier {
    fn other(self) -> Self {
        match self {
            Quantifier::Exists => Quantifier::ForAll,
            Quantifier::ForAll => Quantifier::Exists,
        }
    }
}

/// How a clause is satisfied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    /// At least one literal true.
    Sat3,
    /// At least one literal true and at least one false.
    Nae3,
}

/// Nonzero DIMACS literal: `v` or `-v`.
pub type Literal = i32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QbfFormula {
    pub prefix: Vec<(Quantifier, u32)>,
    pub clauses: Vec<[Literal; 3]>,
    pub semantics: Semantics,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Canonical,
    Misere,
    Weighted,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Canonical => "canonical",
            Target::Misere => "misere",
            Target::Weighted => "weighted",
        })
    }
}

pub const EVALUATE_LIMIT: usize = 24;

impl QbfFormula {
    pub fn new(prefix: Vec<(Quantifier, u32)>, clauses: Vec<[Literal; 3]>, semantics: Semantics) -> Result<Self> {
        let mut seen = HashSet::new();
        for &(_, v) in &prefix {
            if v == 0 || !seen.insert(v) {
                return Err(Error::Params(format!("variable {v} is zero or quantified twice")));
            }
        }
        for c in &clauses {
            for &l in c {
                if l == 0 || !seen.contains(&l.unsigned_abs()) {
                    return Err(Error::Params(format!("literal {l} has no quantified variable")));
                }
            }
        }
        Ok(QbfFormula {
            prefix,
            clauses,
            semantics,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.prefix.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Position of variable `v` in the prefix.
    pub fn position(&self, v: u32) -> Option<usize> {
        self.prefix.iter().position(|&(_, x)| x == v)
    }

    pub fn is_alternating_from_exists(&self) -> bool {
        self.prefix.iter().enumerate().all(|(i, &(q, _))| {
            q == if i % 2 == 0 {
                Quantifier::Exists
            } else {
                Quantifier::ForAll
            }
        })
    }

    pub fn to_qdimacs(&self) -> String {
        let mut out = String::new();
        if self.semantics == Semantics::Nae3 {
            out.push_str("c nae\n");
        }
        let max_var = self.prefix.iter().map(|p| p.1).max().unwrap_or(0);
        out.push_str(&format!("p cnf {max_var} {}\n", self.clauses.len()));
        for &(q, v) in &self.prefix {
            let c = match q {
                Quantifier::Exists => 'e',
                Quantifier::ForAll => 'a',
            };
            out.push_str(&format!("{c} {v} 0\n"));
        }
        for c in &self.clauses {
            out.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
        }
        out
    }
}

/// Truth of a clause under `value(var)`.
pub fn clause_holds(semantics: Semantics, clause: &[Literal; 3], value: impl Fn(u32) -> bool) -> bool {
    let lits = clause.map(|l| value(l.unsigned_abs()) == (l > 0));
    let any_true = lits.iter().any(|&b| b);
    match semantics {
        Semantics::Sat3 => any_true,
        Semantics::Nae3 => any_true && lits.iter().any(|&b| !b),
    }
}

/// Reads QDIMACS with singleton, strictly alternating quantifier lines and
/// one 3-literal clause per line. A `c nae` comment selects NAE semantics.
pub fn parse_qdimacs(text: &str) -> Result<QbfFormula> {
    let mut semantics = Semantics::Sat3;
    let mut header: Option<(usize, usize, usize)> = None;
    let mut prefix: Vec<(Quantifier, u32)> = Vec::new();
    let mut clauses = Vec::new();
    let err = |line: usize, msg: String| Error::Parse { line, msg };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        let mut tok = t.split_whitespace();
        let first = tok.next().expect("nonempty line");
        match first {
            "c" => {
                if tok.next() == Some("nae") {
                    semantics = Semantics::Nae3;
                }
            }
            "p" => {
                if header.is_some() {
                    return Err(err(line, "second problem line".into()));
                }
                let rest: Vec<&str> = tok.collect();
                if rest.len() != 3 || rest[0] != "cnf" {
                    return Err(err(line, "expected `p cnf <vars> <clauses>`".into()));
                }
                let num = |s: &str| s.parse::<usize>().map_err(|_| err(line, format!("bad number `{s}`")));
                header = Some((line, num(rest[1])?, num(rest[2])?));
            }
            "e" | "a" => {
                if !clauses.is_empty() {
                    return Err(err(line, "quantifier after clauses".into()));
                }
                let q = if first == "e" {
                    Quantifier::Exists
                } else {
                    Quantifier::ForAll
                };
                let nums: Vec<&str> = tok.collect();
                if nums.len() != 2 || nums[1] != "0" {
                    return Err(err(line, "quantifier blocks must hold exactly one variable".into()));
                }
                let v: u32 = nums[0]
                    .parse()
                    .ok()
                    .filter(|&v| v > 0)
                    .ok_or_else(|| err(line, format!("bad variable `{}`", nums[0])))?;
                if prefix.last().is_some_and(|&(p, _)| p == q) {
                    return Err(err(line, "quantifiers must alternate".into()));
                }
                if prefix.iter().any(|&(_, x)| x == v) {
                    return Err(err(line, format!("variable {v} quantified twice")));
                }
                prefix.push((q, v));
            }
            _ => {
                let nums = std::iter::once(first)
                    .chain(tok)
                    .map(|s| s.parse::<i32>().map_err(|_| err(line, format!("bad literal `{s}`"))))
                    .collect::<Result<Vec<i32>>>()?;
                if nums.last() != Some(&0) {
                    return Err(err(line, "clause must end with 0".into()));
                }
                let lits = &nums[..nums.len() - 1];
                if lits.len() != 3 || lits.contains(&0) {
                    return Err(err(line, format!("clause has {} literals, expected 3", lits.len())));
                }
                for &l in lits {
                    if !prefix.iter().any(|&(_, x)| x == l.unsigned_abs()) {
                        return Err(err(line, format!("literal {l} is not quantified")));
                    }
                }
                clauses.push([lits[0], lits[1], lits[2]]);
            }
        }
    }
    if let Some((line, vars, count)) = header {
        let max_var = prefix.iter().map(|p| p.1 as usize).max().unwrap_or(0);
        if max_var > vars || count != clauses.len() {
            return Err(err(
                line,
                format!(
                    "header promises {vars} variables and {count} clauses, found max variable {max_var} and {} clauses",
                    clauses.len()
                ),
            ));
        }
    }
    QbfFormula::new(prefix, clauses, semantics)
}

/// Truth value by expanding the prefix.
pub fn evaluate(f: &QbfFormula) -> Result<bool> {
    if f.num_vars() > EVALUATE_LIMIT {
        return Err(Error::TooLarge(format!(
            "{} variables (limit {EVALUATE_LIMIT})",
            f.num_vars()
        )));
    }
    let max_var = f.prefix.iter().map(|p| p.1 as usize).max().unwrap_or(0);
    let mut value = vec![false; max_var + 1];
    fn rec(f: &QbfFormula, depth: usize, value: &mut Vec<bool>) -> bool {
        let Some(&(q, v)) = f.prefix.get(depth) else {
            return f
                .clauses
                .iter()
                .all(|c| clause_holds(f.semantics, c, |x| value[x as usize]));
        };
        let mut results = [false; 2];
        for (i, b) in [false, true].into_iter().enumerate() {
            value[v as usize] = b;
            results[i] = rec(f, depth + 1, value);
            let decided = match q {
                Quantifier::Exists => results[i],
                Quantifier::ForAll => !results[i],
            };
            if decided {
                return results[i];
            }
        }
        match q {
            Quantifier::Exists => false,
            Quantifier::ForAll => true,
        }
    }
    Ok(rec(f, 0, &mut value))
}

/// Checks the prefix shape and semantics a reduction expects.
pub fn validate_shape(f: &QbfFormula, target: Target) -> Result<()> {
    let n = f.num_vars();
    if n == 0 {
        return Err(Error::Shape("no variables".into()));
    }
    if !f.is_alternating_from_exists() {
        return Err(Error::Shape(
            "quantifiers must alternate starting with an existential".into(),
        ));
    }
    let (want_odd, want) = match target {
        Target::Canonical => (false, Semantics::Sat3),
        Target::Misere => (true, Semantics::Sat3),
        Target::Weighted => (true, Semantics::Nae3),
    };
    if (n % 2 == 1) != want_odd {
        return Err(Error::Shape(format!(
            "{target} needs an {} number of variables, got {n}",
            if want_odd { "odd" } else { "even" }
        )));
    }
    if f.semantics != want {
        return Err(Error::Shape(format!(
            "{target} needs {} clauses",
            if want == Semantics::Nae3 { "NAE-3" } else { "3-SAT" }
        )));
    }
    Ok(())
}

/// Appends one unused variable when that fixes the parity for `target`.
pub fn pad_parity(f: &QbfFormula, target: Target) -> Result<QbfFormula> {
    if validate_shape(f, target).is_ok() {
        return Ok(f.clone());
    }
    if f.num_vars() == 0 || !f.is_alternating_from_exists() {
        return Err(Error::Shape(
            "padding needs a prefix alternating from an existential".into(),
        ));
    }
    let mut g = f.clone();
    let last = g.prefix.last().expect("nonempty prefix").0;
    let fresh = g.prefix.iter().map(|p| p.1).max().expect("nonempty prefix") + 1;
    g.prefix.push((last.other(), fresh));
    validate_shape(&g, target)?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Truth-table expansion folded from the innermost quantifier outward.
    fn truth_table(f: &QbfFormula) -> bool {
        let n = f.num_vars();
        let mut table: Vec<bool> = (0..1usize << n)
            .map(|bits| {
                f.clauses.iter().all(|c| {
                    clause_holds(f.semantics, c, |v| bits >> f.position(v).unwrap() & 1 == 1)
                })
            })
            .collect();
        for &(q, _) in f.prefix.iter().rev() {
            let half = table.len() / 2;
            table = (0..half)
                .map(|i| {
                    let (a, b) = (table[i], table[i + half]);
                    match q {
                        Quantifier::Exists => a || b,
                        Quantifier::ForAll => a && b,
                    }
                })
                .collect();
        }
        table[0]
    }

    fn alternating(n: usize) -> Vec<(Quantifier, u32)> {
        (0..n)
            .map(|i| {
                let q = if i % 2 == 0 {
                    Quantifier::Exists
                } else {
                    Quantifier::ForAll
                };
                (q, i as u32 + 1)
            })
            .collect()
    }

    fn random_formula(rng: &mut ChaCha8Rng, n: usize, m: usize, semantics: Semantics) -> QbfFormula {
        let clauses = (0..m)
            .map(|_| {
                [0; 3].map(|_| {
                    let v = rng.gen_range(1..=n as i32);
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
            })
            .collect();
        QbfFormula::new(alternating(n), clauses, semantics).unwrap()
    }

    #[test]
    fn parses_the_small_example() {
        let f = parse_qdimacs("e 1 0\na 2 0\n1 2 -2 0\n").unwrap();
        assert_eq!(f.prefix, vec![(Quantifier::Exists, 1), (Quantifier::ForAll, 2)]);
        assert_eq!(f.clauses, vec![[1, 2, -2]]);
        assert!(evaluate(&f).unwrap());
        assert!(matches!(parse_qdimacs("e 1 0\n1 -1 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_qdimacs("e 1 0\ne 2 0\n1 2 2 0\n").is_err());
        assert!(parse_qdimacs("e 1 2 0\n1 2 2 0\n").is_err());
        assert!(parse_qdimacs("e 1 0\n1 3 1 0\n").is_err());
    }

    #[test]
    fn round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for i in 0..50 {
            let sem = if i % 2 == 0 { Semantics::Sat3 } else { Semantics::Nae3 };
            let f = random_formula(&mut rng, 1 + i % 5, i % 4, sem);
            assert_eq!(parse_qdimacs(&f.to_qdimacs()).unwrap(), f);
        }
    }

    #[test]
    fn nae_semantics() {
        let all = |v: bool| move |_| v;
        assert!(!clause_holds(Semantics::Nae3, &[1, 2, 3], all(true)));
        assert!(clause_holds(Semantics::Nae3, &[1, -2, 3], all(true)));
        let f = QbfFormula::new(alternating(3), vec![[1, 2, 3]], Semantics::Nae3).unwrap();
        assert!(evaluate(&f).unwrap());
        let g = QbfFormula::new(alternating(3), vec![[2, 2, 2]], Semantics::Nae3).unwrap();
        assert!(!evaluate(&g).unwrap());
    }

    #[test]
    fn agrees_with_truth_tables_exhaustively() {
        for n in 1..=4usize {
            let lits: Vec<i32> = (1..=n as i32).flat_map(|v| [v, -v]).collect();
            let mut all_clauses = Vec::new();
            for &a in &lits {
                for &b in &lits {
                    for &c in &lits {
                        if a <= b && b <= c {
                            all_clauses.push([a, b, c]);
                        }
                    }
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for m in 0..=3usize {
                // Exhaustive while small, sampled beyond that.
                let exhaustive = all_clauses.len().pow(m as u32) <= 5000;
                let sets: Vec<Vec<[i32; 3]>> = if exhaustive {
                    let mut sets = vec![Vec::new()];
                    for _ in 0..m {
                        sets = sets
                            .into_iter()
                            .flat_map(|s: Vec<[i32; 3]>| {
                                all_clauses.iter().map(move |c| {
                                    let mut t = s.clone();
                                    t.push(*c);
                                    t
                                })
                            })
                            .collect();
                    }
                    sets
                } else {
                    (0..2000)
                        .map(|_| (0..m).map(|_| all_clauses[rng.gen_range(0..all_clauses.len())]).collect())
                        .collect()
                };
                for clauses in sets {
                    for sem in [Semantics::Sat3, Semantics::Nae3] {
                        let f = QbfFormula::new(alternating(n), clauses.clone(), sem).unwrap();
                        assert_eq!(evaluate(&f).unwrap(), truth_table(&f), "{}", f.to_qdimacs());
                    }
                }
            }
        }
    }

    #[test]
    fn shapes() {
        let ea = QbfFormula::new(alternating(2), vec![[1, 2, -2]], Semantics::Sat3).unwrap();
        assert!(validate_shape(&ea, Target::Canonical).is_ok());
        assert!(validate_shape(&ea, Target::Misere).is_err());
        let eae = QbfFormula::new(alternating(3), vec![[1, 2, 3]], Semantics::Nae3).unwrap();
        assert!(validate_shape(&eae, Target::Weighted).is_ok());
        let a_first = QbfFormula::new(vec![(Quantifier::ForAll, 1)], vec![], Semantics::Sat3).unwrap();
        for t in [Target::Canonical, Target::Misere, Target::Weighted] {
            assert!(validate_shape(&a_first, t).is_err());
        }
    }

    #[test]
    fn padding_preserves_truth() {
        let e = QbfFormula::new(alternating(1), vec![[1, 1, 1]], Semantics::Sat3).unwrap();
        let p = pad_parity(&e, Target::Canonical).unwrap();
        assert_eq!(p.prefix, alternating(2));
        assert_eq!(pad_parity(&p, Target::Canonical).unwrap(), p);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for i in 0..100 {
            let f = random_formula(&mut rng, 1 + i % 5, 1 + i % 3, Semantics::Sat3);
            for t in [Target::Canonical, Target::Misere] {
                let p = pad_parity(&f, t).unwrap();
                assert!(validate_shape(&p, t).is_ok());
                assert_eq!(evaluate(&p).unwrap(), evaluate(&f).unwrap());
            }
        }
    }
}
