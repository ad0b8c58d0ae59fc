//! Memoized game-tree search over bitmask states.
//!
//! Weight scoring is solved in one of two modes. Where every continuation
//! takes all vertices (always in T and R, and in TR once the position is
//! provably stall-free) the game is constant-sum and an alpha-beta search
//! over the mover's share of the remaining weight is exact. Elsewhere a
//! plain search memoizes the `(mover, opponent)` gain pair.

use rustc_hash::FxHashMap;

use super::mask::Mask;
use super::SearchStats;
use crate::error::{Error, Result};
use crate::game::{Scoring, Variant};

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug)]
struct Bounds {
    lo: i64,
    hi: i64,
    best: u16,
}

#[derive(Clone, Copy, Debug)]
struct PairEntry {
    mover: i64,
    other: i64,
}

pub(crate) struct Search<M: Mask> {
    all: M,
    adj: Vec<M>,
    w: Vec<i64>,
    variant: Variant,
    scoring: Scoring,
    restrict: Option<M>,
    /// Nontrivial twin classes with, for each class, the masks of its
    /// lowest `k` members.
    classes: Vec<(M, Vec<M>)>,
    tt: FxHashMap<M, Bounds>,
    pairs: FxHashMap<M, PairEntry>,
    wins: FxHashMap<M, bool>,
    memo_cap: usize,
    pub(crate) stats: SearchStats,
    disc: Vec<u32>,
    low: Vec<u32>,
    parent: Vec<usize>,
    pending: Vec<M>,
    stack: Vec<usize>,
}

pub(crate) struct SearchSetup<'a> {
    pub adj: Vec<Vec<usize>>,
    pub weights: Vec<i64>,
    pub variant: Variant,
    pub scoring: Scoring,
    pub restrict: Option<&'a [usize]>,
    pub twin_classes: Vec<Vec<usize>>,
    pub memo_cap: usize,
}

impl<M: Mask> Search<M> {
    pub(crate) fn new(setup: SearchSetup<'_>) -> Self {
        let n = setup.adj.len();
        assert!(n <= M::BITS);
        let to_mask = |vs: &[usize]| {
            let mut m = M::zero();
            for &v in vs {
                m.set(v);
            }
            m
        };
        let adj = setup.adj.iter().map(|a| to_mask(a)).collect();
        let classes = setup
            .twin_classes
            .iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let mut sorted = c.clone();
                sorted.sort_unstable();
                let prefixes = (0..=sorted.len()).map(|k| to_mask(&sorted[..k])).collect();
                (to_mask(&sorted), prefixes)
            })
            .collect();
        Search {
            all: M::lowest_n(n),
            adj,
            w: setup.weights,
            variant: setup.variant,
            scoring: setup.scoring,
            restrict: setup.restrict.map(to_mask),
            classes,
            tt: FxHashMap::default(),
            pairs: FxHashMap::default(),
            wins: FxHashMap::default(),
            memo_cap: setup.memo_cap,
            stats: SearchStats::default(),
            disc: vec![0; n],
            low: vec![0; n],
            parent: vec![NONE; n],
            pending: vec![M::zero(); n],
            stack: Vec::with_capacity(n),
        }
    }

    pub(crate) fn frontier(&self, taken: M) -> M {
        taken.ones().fold(M::zero(), |f, v| f.or(self.adj[v]))
    }

    pub(crate) fn weight_of(&self, set: M) -> i64 {
        set.ones().map(|v| self.w[v]).sum()
    }

    fn connected(&self, set: M) -> bool {
        let Some(start) = set.lowest() else {
            return true;
        };
        let mut reach = M::bit(start);
        let mut frontier = reach;
        loop {
            let mut next = M::zero();
            for v in frontier.ones() {
                next = next.or(self.adj[v]);
            }
            next = next.and(set).andnot(reach);
            if next.is_zero() {
                return reach == set;
            }
            reach = reach.or(next);
            frontier = next;
        }
    }

    /// Cut vertices of the subgraph induced by `set`.
    fn cut_vertices(&mut self, set: M) -> M {
        let mut cut = M::zero();
        let mut unvisited = set;
        let mut time = 0u32;
        while let Some(root) = unvisited.lowest() {
            unvisited.clear(root);
            self.disc[root] = time;
            self.low[root] = time;
            time += 1;
            self.parent[root] = NONE;
            self.pending[root] = self.adj[root].and(set);
            self.stack.clear();
            self.stack.push(root);
            let mut root_children = 0;
            while let Some(&v) = self.stack.last() {
                if let Some(u) = self.pending[v].lowest() {
                    self.pending[v].clear(u);
                    if unvisited.test(u) {
                        unvisited.clear(u);
                        self.disc[u] = time;
                        self.low[u] = time;
                        time += 1;
                        self.parent[u] = v;
                        self.pending[u] = self.adj[u].and(set);
                        if v == root {
                            root_children += 1;
                        }
                        self.stack.push(u);
                    } else if u != self.parent[v] {
                        self.low[v] = self.low[v].min(self.disc[u]);
                    }
                } else {
                    self.stack.pop();
                    let p = self.parent[v];
                    if p != NONE {
                        self.low[p] = self.low[p].min(self.low[v]);
                        if p != root && self.low[v] >= self.disc[p] {
                            cut.set(p);
                        }
                    }
                }
            }
            if root_children > 1 {
                cut.set(root);
            }
        }
        cut
    }

    pub(crate) fn legal(&mut self, taken: M, frontier: M) -> M {
        let rem = self.all.andnot(taken);
        let mut legal = rem;
        if matches!(self.variant, Variant::T | Variant::TR) && !taken.is_zero() {
            legal = legal.and(frontier);
        }
        if let Some(r) = self.restrict {
            legal = legal.and(r);
        }
        if matches!(self.variant, Variant::R | Variant::TR) && rem.count() > 2 && !legal.is_zero() {
            legal = legal.andnot(self.cut_vertices(rem));
        }
        legal
    }

    /// Keeps only the lowest member of each twin class among `moves`.
    fn prune_twins(&self, mut moves: M) -> M {
        for (class, _) in &self.classes {
            let members = moves.and(*class);
            if let Some(first) = members.lowest() {
                moves = moves.andnot(members);
                moves.set(first);
            }
        }
        moves
    }

    pub(crate) fn candidate_moves(&mut self, taken: M, frontier: M) -> M {
        let legal = self.legal(taken, frontier);
        self.prune_twins(legal)
    }

    /// Memo key: taken members of each twin class moved to the lowest indices.
    fn key(&self, taken: M) -> M {
        let mut k = taken;
        for (class, prefixes) in &self.classes {
            let c = k.and(*class).count() as usize;
            k = k.andnot(*class).or(prefixes[c]);
        }
        k
    }

    fn check_cap(&self, size: usize) -> Result<()> {
        if size >= self.memo_cap {
            Err(Error::MemoCapacity {
                cap: self.memo_cap,
                expanded: self.stats.expanded,
            })
        } else {
            Ok(())
        }
    }

    fn note_size(&mut self) {
        let size = self.tt.len() + self.pairs.len() + self.wins.len();
        self.stats.peak_memo = self.stats.peak_memo.max(size);
    }

    /// True when every continuation from `taken` ends with all vertices
    /// taken. Only game TR (or a restricted game) can stall.
    pub(crate) fn stall_free(&self, taken: M, frontier: M) -> bool {
        if self.restrict.is_some() {
            return false;
        }
        if self.variant != Variant::TR {
            return true;
        }
        let rem = self.all.andnot(taken);
        if rem.count() <= 1 {
            return true;
        }
        // Contract the taken set to one vertex attached to `frontier`; a
        // 2-connected contraction never stalls.
        let attach = frontier.and(rem);
        if taken.is_zero() {
            return rem.count() >= 3
                && rem.ones().all(|r| {
                    let mut rest = rem;
                    rest.clear(r);
                    self.connected(rest)
                });
        }
        if attach.is_zero() {
            return false;
        }
        rem.ones().all(|r| {
            let mut rest = rem;
            rest.clear(r);
            let anchors = attach.andnot(M::bit(r));
            if anchors.is_zero() {
                return rest.is_zero();
            }
            // Every component of `rest` must touch an anchor.
            let mut left = rest;
            while let Some(s) = left.lowest() {
                let comp = self.component(rest, s);
                if !comp.intersects(anchors) {
                    return false;
                }
                left = left.andnot(comp);
            }
            true
        })
    }

    fn component(&self, set: M, start: usize) -> M {
        let mut reach = M::bit(start);
        let mut frontier = reach;
        loop {
            let mut next = M::zero();
            for v in frontier.ones() {
                next = next.or(self.adj[v]);
            }
            next = next.and(set).andnot(reach);
            if next.is_zero() {
                return reach;
            }
            reach = reach.or(next);
            frontier = next;
        }
    }

    /// Mover's exact share of the remaining weight in a stall-free
    /// position, searched with window `(alpha, beta)` (fail-soft).
    pub(crate) fn alpha_beta(&mut self, taken: M, frontier: M, rem_w: i64, alpha: i64, beta: i64) -> Result<i64> {
        if rem_w == 0 {
            return Ok(0);
        }
        if alpha >= rem_w {
            return Ok(rem_w);
        }
        if beta <= 0 {
            return Ok(0);
        }
        self.stats.expanded += 1;
        let key = self.key(taken);
        let (mut a, mut b) = (alpha, beta);
        let mut hint = None;
        if let Some(e) = self.tt.get(&key) {
            self.stats.memo_hits += 1;
            if e.lo == e.hi || e.lo >= b {
                return Ok(e.lo);
            }
            if e.hi <= a {
                return Ok(e.hi);
            }
            a = a.max(e.lo);
            b = b.min(e.hi);
            hint = Some(e.best as usize);
        }
        let moves = self.candidate_moves(taken, frontier);
        if moves.is_zero() {
            debug_assert!(false, "stall inside a stall-free region");
            return Ok(0);
        }
        let mut order: Vec<usize> = moves.ones().collect();
        order.sort_by(|&x, &y| self.w[y].cmp(&self.w[x]).then(x.cmp(&y)));
        if let Some(h) = hint.filter(|&h| moves.test(h)) {
            let pos = order.iter().position(|&v| v == h).expect("hint is a move");
            order[..=pos].rotate_right(1);
        }
        let (a0, b0) = (a, b);
        let mut best = i64::MIN;
        let mut best_move = order[0];
        for v in order {
            let mut child = taken;
            child.set(v);
            let child_rem = rem_w - self.w[v];
            let c = self.alpha_beta(child, frontier.or(self.adj[v]), child_rem, rem_w - b, rem_w - a)?;
            let val = rem_w - c;
            if val > best {
                best = val;
                best_move = v;
            }
            if best > a {
                a = best;
            }
            if a >= b {
                break;
            }
        }
        let (mut lo, mut hi) = if best <= a0 {
            (0, best)
        } else if best >= b0 {
            (best, rem_w)
        } else {
            (best, best)
        };
        let size = self.tt.len();
        let entry = self.tt.get(&key).copied();
        if let Some(e) = entry {
            lo = lo.max(e.lo);
            hi = hi.min(e.hi);
        } else {
            self.check_cap(size + self.pairs.len() + self.wins.len())?;
        }
        self.tt.insert(
            key,
            Bounds {
                lo,
                hi,
                best: best_move as u16,
            },
        );
        self.note_size();
        Ok(best)
    }

    pub(crate) fn exact_share(&mut self, taken: M, frontier: M, rem_w: i64) -> Result<i64> {
        self.alpha_beta(taken, frontier, rem_w, -1, rem_w + 1)
    }

    /// `(mover, opponent)` gains from the remaining game; the mover
    /// maximizes own gain.
    pub(crate) fn pair(&mut self, taken: M, frontier: M) -> Result<(i64, i64)> {
        if self.stall_free(taken, frontier) {
            let rem_w = self.weight_of(self.all.andnot(taken));
            let v = self.exact_share(taken, frontier, rem_w)?;
            return Ok((v, rem_w - v));
        }
        let key = self.key(taken);
        if let Some(e) = self.pairs.get(&key) {
            self.stats.memo_hits += 1;
            return Ok((e.mover, e.other));
        }
        self.stats.expanded += 1;
        let moves = self.candidate_moves(taken, frontier);
        let mut best: Option<(i64, i64)> = None;
        for v in moves.ones() {
            let mut child = taken;
            child.set(v);
            let (cm, co) = self.pair(child, frontier.or(self.adj[v]))?;
            let mine = self.w[v] + co;
            if best.is_none_or(|(b, _)| mine > b) {
                best = Some((mine, cm));
            }
        }
        let (mover, other) = best.unwrap_or((0, 0));
        self.check_cap(self.tt.len() + self.pairs.len() + self.wins.len())?;
        self.pairs.insert(key, PairEntry { mover, other });
        self.note_size();
        Ok((mover, other))
    }

    /// Best move for weight scoring with lowest-index tie-breaking, together
    /// with the resulting `(mover, opponent)` gains.
    pub(crate) fn best_weight_move(&mut self, taken: M, frontier: M) -> Result<(Option<usize>, i64, i64)> {
        let rem_w = self.weight_of(self.all.andnot(taken));
        let moves = self.candidate_moves(taken, frontier);
        if self.stall_free(taken, frontier) {
            let value = self.exact_share(taken, frontier, rem_w)?;
            let target = rem_w - value;
            for v in moves.ones() {
                let mut child = taken;
                child.set(v);
                let child_rem = rem_w - self.w[v];
                let c = self.alpha_beta(child, frontier.or(self.adj[v]), child_rem, target, target + 1)?;
                if c <= target {
                    return Ok((Some(v), value, rem_w - value));
                }
            }
            debug_assert!(moves.is_zero(), "no move attains the exact value");
            return Ok((None, value, rem_w - value));
        }
        let mut best: Option<(usize, i64, i64)> = None;
        for v in moves.ones() {
            let mut child = taken;
            child.set(v);
            let (cm, co) = self.pair(child, frontier.or(self.adj[v]))?;
            let mine = self.w[v] + co;
            if best.is_none_or(|(_, b, _)| mine > b) {
                best = Some((v, mine, cm));
            }
        }
        Ok(match best {
            Some((v, m, o)) => (Some(v), m, o),
            None => (None, 0, 0),
        })
    }

    /// Whether the player on turn wins under canonical or misère scoring.
    pub(crate) fn wins(&mut self, taken: M, frontier: M) -> Result<bool> {
        let key = self.key(taken);
        if let Some(&win) = self.wins.get(&key) {
            self.stats.memo_hits += 1;
            return Ok(win);
        }
        self.stats.expanded += 1;
        let moves = self.candidate_moves(taken, frontier);
        let mut win = moves.is_zero() && self.scoring == Scoring::Misere;
        for v in moves.ones() {
            let mut child = taken;
            child.set(v);
            if !self.wins(child, frontier.or(self.adj[v]))? {
                win = true;
                break;
            }
        }
        self.check_cap(self.tt.len() + self.pairs.len() + self.wins.len())?;
        self.wins.insert(key, win);
        self.note_size();
        Ok(win)
    }

    /// A move realizing the outcome of `wins`: the lowest winning move, or
    /// the lowest move when every move loses.
    pub(crate) fn best_win_move(&mut self, taken: M, frontier: M) -> Result<(bool, Option<usize>)> {
        let moves = self.candidate_moves(taken, frontier);
        for v in moves.ones() {
            let mut child = taken;
            child.set(v);
            if !self.wins(child, frontier.or(self.adj[v]))? {
                return Ok((true, Some(v)));
            }
        }
        Ok((moves.is_zero() && self.scoring == Scoring::Misere, moves.lowest()))
    }
}
