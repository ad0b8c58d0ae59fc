use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use graph_sharing::game::GameState;
use graph_sharing::solver::brute_force_value;
use graph_sharing::{Ruleset, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn gsg(args: &[&str], stdin: &str) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_gsg"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn gsg");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    Run {
        code: o.status.code().unwrap_or(-1),
        out: String::from_utf8(o.stdout).unwrap(),
        err: String::from_utf8(o.stderr).unwrap(),
    }
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const PATH3: &str = "p graph 3\nw 1 1\ne 0 1\ne 1 2\n";
const STAR3: &str = "p graph 4\ne 0 1\ne 0 2\ne 0 3\n";
const C4: &str = "p graph 4\nw 0 1\nw 2 2\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n";

#[test]
fn solve_path_in_r() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "path3.g", PATH3);
    let r = gsg(&["solve", "--game", "r", "--graph", s(&g)], "");
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(
        r.out,
        "game r\nvertices 3\ntotal_weight 1/1\nalice_value 0/1\nbob_value 1/1\npv 0 1 2\n"
    );
    let oracle = brute_force_value(&WeightedGraph::parse(PATH3).unwrap(), Ruleset::R).unwrap();
    assert_eq!(oracle.alice_value().unwrap(), &graph_sharing::weight::int(0));
}

#[test]
fn solve_winner_and_threads() {
    let d = TempDir::new().unwrap();
    let star = file(&d, "k13.g", STAR3);
    let r = gsg(&["solve", "--game", "tr-canonical", "--graph", s(&star)], "");
    assert_eq!(r.out, "game tr-canonical\nvertices 4\ntotal_weight 0/1\nwinner alice\npv 1\n");
    let r = gsg(&["solve", "--game", "tr-misere", "--graph", s(&star)], "");
    assert!(r.out.contains("winner bob\n"), "{}", r.out);
    let c4 = file(&d, "c4.g", C4);
    let one = gsg(&["solve", "--game", "t", "--graph", s(&c4)], "");
    let many = gsg(&["solve", "--game", "t", "--graph", s(&c4), "--threads", "3"], "");
    assert_eq!(one.code, 0);
    assert_eq!(one.out, many.out);
    assert_eq!(
        one.out,
        "game t\nvertices 4\ntotal_weight 3/1\nalice_value 3/1\nbob_value 0/1\npv 0 1 2 3\n"
    );
}

#[test]
fn exit_codes() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "path3.g", PATH3);
    let bad = file(&d, "bad.g", "p graph 2\ne 0 5\n");
    let cap = gsg(&["solve", "--game", "t", "--graph", s(&g), "--memo-cap", "0"], "");
    assert_eq!(cap.code, 3, "{}", cap.err);
    assert!(cap.err.contains("memo capacity"));
    assert_eq!(gsg(&["solve", "--game", "x", "--graph", s(&g)], "").code, 2);
    assert_eq!(gsg(&["solve", "--game", "t"], "").code, 2);
    assert_eq!(gsg(&["frobnicate"], "").code, 2);
    assert_eq!(gsg(&["solve", "--game", "t", "--graph", "/nonexistent/g"], "").code, 2);
    let parse = gsg(&["solve", "--game", "t", "--graph", s(&bad)], "");
    assert_eq!(parse.code, 1);
    assert!(parse.err.contains("line 2"), "{}", parse.err);
    assert_eq!(gsg(&["solve", "--game", "t", "--graph", s(&g), "--threads", "0"], "").code, 2);
    assert_eq!(gsg(&["--help"], "").code, 0);
}

#[test]
fn check_tr_verdicts() {
    let d = TempDir::new().unwrap();
    let star = file(&d, "k13.g", STAR3);
    let r = gsg(&["check-tr", "--graph", s(&star)], "");
    assert_eq!(r.code, 0);
    assert_eq!(
        r.out,
        "completable false\nalways_completes false\nobstruction cut vertex 0 separates the graph into 3 components\n"
    );
    let c4 = file(&d, "c4.g", C4);
    let r = gsg(&["check-tr", "--graph", s(&c4)], "");
    assert!(r.out.starts_with("completable true\nalways_completes true\nwitness "), "{}", r.out);
    let disconnected = file(&d, "two.g", "p graph 2\n");
    assert_eq!(gsg(&["check-tr", "--graph", s(&disconnected)], "").code, 1);
}

#[test]
fn order_command() {
    let d = TempDir::new().unwrap();
    let c4 = file(&d, "c4.g", C4);
    let r = gsg(&["order", "--graph", s(&c4), "--from", "0", "--to", "2"], "");
    assert_eq!(r.out, "order 0 1 3 2\n");
    let star = file(&d, "k13.g", STAR3);
    let r = gsg(&["order", "--graph", s(&star), "--from", "0", "--to", "1"], "");
    assert_eq!(r.code, 1);
    assert!(r.err.contains("2-connected"));
}

const SCRIPTED: &str = "\
game r, you play alice, engine optimal (default)
graph 3 vertices, 2 edges, total weight 1/1
remaining 3 vertices, weight 1/1: 0 1 2
legal 0 2
gains alice 0/1 bob 0/1
alice> rejected: vertex 1 is not available: condition (R) violated
alice> rejected: `foo` is not a vertex number; enter a vertex or `quit`
alice> alice takes 0 (weight 0/1)
bob takes 1 (weight 1/1)
remaining 1 vertices, weight 0/1: 2
legal 2
gains alice 0/1 bob 1/1
alice> alice takes 2 (weight 0/1)
game over: all_taken
gains alice 0/1 bob 1/1
transcript
1 A 0
2 B 1
3 A 2
alice 0/1
bob 1/1
end all_taken
";

#[test]
fn play_scripted_session() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "path3.g", PATH3);
    let t = d.path().join("game.t");
    let r = gsg(
        &["play", "--game", "r", "--graph", s(&g), "--transcript", s(&t)],
        "1\nfoo\n0\n2\n",
    );
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.out, SCRIPTED);
    let text = std::fs::read_to_string(&t).unwrap();
    let parsed = graph_sharing::Transcript::parse(&text).unwrap();
    parsed.replay(&WeightedGraph::parse(PATH3).unwrap(), Ruleset::R).unwrap();
}

#[test]
fn play_quit_eof_and_bob_side() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "path3.g", PATH3);
    let t = d.path().join("partial.t");
    let r = gsg(
        &["play", "--game", "t", "--graph", s(&g), "--engine", "greedy", "--transcript", s(&t)],
        "0\nquit\n",
    );
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("game t, you play alice, engine greedy (chosen)\n"));
    assert!(r.out.ends_with("game aborted after 2 moves (quit)\ntranscript (partial)\n1 A 0\n2 B 1\n"), "{}", r.out);
    assert_eq!(std::fs::read_to_string(&t).unwrap(), "1 A 0\n2 B 1\n");
    let r = gsg(&["play", "--game", "t", "--graph", s(&g)], "");
    assert_eq!(r.code, 0);
    assert!(r.out.ends_with("alice> \ngame aborted after 0 moves (end of input)\ntranscript (partial)\n"));
    let r = gsg(&["play", "--game", "r", "--graph", s(&g), "--human", "bob"], "1\n2\n");
    assert_eq!(r.code, 0);
    assert!(r.out.contains("alice takes 0 (weight 0/1)\n"), "{}", r.out);
    assert!(r.out.contains("bob> bob takes 1 (weight 1/1)\n"));
    assert!(r.out.contains("gains alice 0/1 bob 1/1\ntranscript\n"));
    let star = file(&d, "k13.g", STAR3);
    let r = gsg(&["play", "--game", "tr-canonical", "--graph", s(&star)], "0\n2\n");
    assert!(r.out.contains("rejected: vertex 0 is not available: condition (R) violated"));
    assert!(r.out.contains("game over: stalled\n"));
    assert!(r.out.contains("winner alice\n"));
    assert_eq!(gsg(&["play", "--game", "t", "--graph", s(&g), "--engine", "nope"], "").code, 2);
}

/// Random tokens on stdin never get an illegal move accepted.
#[test]
fn play_rejects_every_illegal_token() {
    let d = TempDir::new().unwrap();
    let text = "p graph 7\nw 0 1\nw 3 2\nw 6 1/2\ne 0 1\ne 1 2\ne 2 3\ne 3 0\ne 3 4\ne 4 5\ne 5 6\ne 6 4\n";
    let g = file(&d, "g.g", text);
    let graph = WeightedGraph::parse(text).unwrap();
    let words = ["quit?", "x", "-1", "7", "99", "", "3 4", "1.5", "QUIT"];
    for (trial, game) in ["t", "r", "tr", "tr-canonical", "tr-misere"].iter().cycle().take(25).enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(trial as u64);
        let mut input = String::new();
        for _ in 0..200 {
            if rng.gen_bool(0.6) {
                input.push_str(&rng.gen_range(0..9).to_string());
            } else {
                input.push_str(words[rng.gen_range(0..words.len())]);
            }
            input.push('\n');
        }
        let r = gsg(&["play", "--game", game, "--graph", s(&g), "--engine", "random", "--seed", &trial.to_string()], &input);
        assert_eq!(r.code, 0, "{}", r.err);
        let ruleset: Ruleset = game.parse().unwrap();
        let mut state = GameState::new(&graph, ruleset);
        for line in r.out.lines() {
            let line = line.rsplit("> ").next().unwrap();
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() == 5 && toks[1] == "takes" {
                let v: usize = toks[2].parse().unwrap();
                state = state.apply(v).unwrap_or_else(|e| panic!("accepted illegal {v}: {e}\n{}", r.out));
            }
        }
    }
}

#[test]
fn simulate_prints_seed_and_transcript() {
    let d = TempDir::new().unwrap();
    let c4 = file(&d, "c4.g", C4);
    let r = gsg(
        &["simulate", "--game", "tr", "--graph", s(&c4), "--alice", "greedy", "--bob", "random", "--seed", "3"],
        "",
    );
    assert_eq!(
        r.out,
        "seed 3\nalice_strategy greedy\nbob_strategy random\n1 A 2\n2 B 3\n3 A 0\n4 B 1\nalice 3/1\nbob 0/1\nend all_taken\n"
    );
    let star = file(&d, "k13.g", STAR3);
    let r = gsg(&["simulate", "--game", "tr-canonical", "--graph", s(&star)], "");
    assert_eq!(
        r.out,
        "seed 0\nalice_strategy greedy\nbob_strategy greedy\n1 A 1\nalice 0/1\nbob 0/1\nend stalled\nwinner alice\n"
    );
    assert_eq!(gsg(&["simulate", "--game", "t", "--graph", s(&c4), "--bob", "nobody"], "").code, 1);
}

#[test]
fn construct_families() {
    let r = gsg(&["construct", "gnk", "--n", "4", "--k", "1"], "");
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("# vertices 8\n# edges 10\n# total_weight 4/1\np graph 8\n"));
    let g = WeightedGraph::parse(&r.out).unwrap();
    assert_eq!(g.label(4), Some("b{1}"));
    let d = TempDir::new().unwrap();
    let p = d.path().join("pizza.g");
    let r = gsg(&["construct", "pizza", "--weights", "1,0,2/3", "--out", s(&p)], "");
    assert_eq!(r.out, "vertices 3\nedges 3\ntotal_weight 5/3\n");
    assert_eq!(
        std::fs::read_to_string(&p).unwrap(),
        "p graph 3\nw 0 1/1\nw 2 2/3\ne 0 1\ne 0 2\ne 1 2\n"
    );
    for (args, n) in [
        (vec!["clique-cycle", "--k", "4", "--blocks", "6"], 12),
        (vec!["xyz", "--k", "2", "--m", "4"], 23),
        (vec!["hnk", "--n", "2", "--k", "1"], 17),
        (vec!["centered-path", "--t", "2"], 5),
    ] {
        let mut full = vec!["construct"];
        full.extend(args);
        let r = gsg(&full, "");
        assert_eq!(r.code, 0, "{}", r.err);
        assert!(r.out.starts_with(&format!("# vertices {n}\n")), "{}", r.out);
    }
    assert_eq!(gsg(&["construct", "gnk", "--n", "5", "--k", "2"], "").code, 1);
    assert_eq!(gsg(&["construct", "pizza", "--weights", "1,-2"], "").code, 2);
}

#[test]
fn construct_expander_reports() {
    let r = gsg(&["construct", "expander", "--n", "40", "--epsilon", "0.3", "--seed", "1"], "");
    assert_eq!(r.code, 0, "{}", r.err);
    let again = gsg(&["construct", "expander", "--n", "40", "--epsilon", "0.3", "--seed", "1"], "");
    assert_eq!(r.out, again.out);
    assert!(r.out.starts_with("# seed 1\n"));
    assert!(r.out.contains("# connected true\n"));
    assert!(r.out.contains("# biclique_s2 "));
    let g = WeightedGraph::parse(&r.out).unwrap();
    assert_eq!(g.n(), 80);
    let core = gsg(&["construct", "expander", "--n", "40", "--epsilon", "0.3", "--seed", "1", "--core"], "");
    assert_eq!(WeightedGraph::parse(&core.out).unwrap().n(), 40);
    assert_eq!(gsg(&["construct", "expander", "--n", "40", "--epsilon", "1.5"], "").code, 1);
}

#[test]
fn reduce_targets() {
    let d = TempDir::new().unwrap();
    let ea = file(&d, "ea.q", "e 1 0\na 2 0\n1 2 -2 0\n");
    let out = d.path().join("c.g");
    let lab = d.path().join("c.lab");
    let r = gsg(&["reduce", "canonical", "--qbf", s(&ea), "--out", s(&out), "--labels", s(&lab)], "");
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.out, "target canonical\nvariables 2\nclauses 1\nvertices 63\nedges 77\nscale 1\n");
    let labels = std::fs::read_to_string(&lab).unwrap();
    assert_eq!(labels.lines().count(), 63);
    assert!(labels.starts_with("0 T1\n1 M1\n2 F1\n"));
    assert_eq!(WeightedGraph::parse(&std::fs::read_to_string(&out).unwrap()).unwrap().n(), 63);

    let nae = file(&d, "nae.q", "c nae\np cnf 3 1\ne 1 0\na 2 0\ne 3 0\n1 2 3 0\n");
    let w = d.path().join("w.g");
    let r = gsg(&["reduce", "weighted", "--qbf", s(&nae), "--out", s(&w), "--labels", s(&lab)], "");
    assert_eq!(r.out, "target weighted\nvariables 3\nclauses 1\nvertices 63\nedges 403\nscale 998001\n");
    let g = WeightedGraph::parse(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(g.weight(1), &graph_sharing::weight::int(59049 * 998001));
    assert!(std::fs::read_to_string(&lab).unwrap().starts_with("0 a\n1 b\n2 x1\n"));
    let r = gsg(&["reduce", "weighted", "--qbf", s(&nae), "--unscaled"], "");
    assert!(r.out.contains("scale 1\np graph 63\nw 0 59092637212/998001\nw 1 59049/1\n"), "{}", r.out);
    let r = gsg(&["reduce", "weighted", "--qbf", s(&nae), "--z-size", "5", "--out", s(&w)], "");
    assert!(r.out.contains("vertices 27\n"));
    assert!(r.out.contains("warning |Z| = 5 is below 41; soundness is not guaranteed\n"));

    assert_eq!(gsg(&["reduce", "canonical", "--qbf", s(&ea), "--z-size", "3"], "").code, 2);
    let r = gsg(&["reduce", "canonical", "--qbf", s(&nae)], "");
    assert_eq!(r.code, 1);
    assert!(r.err.contains("formula shape"));
    let r = gsg(&["reduce", "misere", "--qbf", s(&ea), "--pad"], "");
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("variables 3\n"));
}

#[test]
fn search_cycles() {
    let r = gsg(&["search", "--family", "cycles", "--max-n", "6", "--weights", "0,1"], "");
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(
        r.out,
        "examined 27\nvertices 3\nalice_value 1/1\ntotal_weight 2/1\nfraction 1/2\npv 0 1 2\np graph 3\nw 1 1/1\nw 2 1/1\ne 0 1\ne 0 2\ne 1 2\n"
    );
    let threaded = gsg(&["search", "--family", "cycles", "--max-n", "6", "--weights", "0,1", "--threads", "2"], "");
    assert_eq!(r.out, threaded.out);
    assert_eq!(gsg(&["search", "--family", "trees", "--max-n", "5", "--game", "tr-canonical"], "").code, 2);
}
