//! Incremental DPLL search with two-watched-literal propagation.
//!
//! The baseline is plain DPLL with chronological backtracking and a static
//! variable order (lowest index first). With `learning` enabled the search
//! switches to conflict-driven clause learning: first-UIP analysis,
//! non-chronological backjumping, activity-based decisions, Luby restarts
//! and periodic removal of high-LBD learnt clauses. Both modes are fully
//! deterministic for a given input.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::cnf::Cnf;
use crate::lit::{Lit, Var};

const TRUE: u8 = 1;
const FALSE: u8 = 0;
const UNDEF: u8 = 2;

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Conflict clause learning with backjumping and restarts.
    pub learning: bool,
    /// Wall-clock budget for a single `solve` call.
    pub budget: Option<Duration>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            learning: true,
            budget: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub learned: u64,
    pub restarts: u64,
    pub elapsed: Duration,
}

impl Stats {
    /// Counters only; elapsed time is left out so deterministic runs can be
    /// compared directly.
    pub fn counters(&self) -> [u64; 5] {
        [
            self.decisions,
            self.propagations,
            self.conflicts,
            self.learned,
            self.restarts,
        ]
    }

    pub fn absorb(&mut self, other: &Stats) {
        self.decisions += other.decisions;
        self.propagations += other.propagations;
        self.conflicts += other.conflicts;
        self.learned += other.learned;
        self.restarts += other.restarts;
    }

    /// `key=value` lines, one counter per line.
    pub fn to_key_values(&self, with_time: bool) -> String {
        let mut s = format!(
            "decisions={}\npropagations={}\nconflicts={}\nlearned={}\nrestarts={}\n",
            self.decisions, self.propagations, self.conflicts, self.learned, self.restarts
        );
        if with_time {
            s.push_str(&format!("elapsed_ms={}\n", self.elapsed.as_millis()));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// A total assignment, indexed by variable.
    Sat(Vec<bool>),
    Unsat,
    Timeout,
}

#[derive(Clone, Debug)]
pub struct SolverResult {
    pub outcome: Outcome,
    pub stats: Stats,
}

impl SolverResult {
    pub fn is_sat(&self) -> bool {
        matches!(self.outcome, Outcome::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self.outcome, Outcome::Unsat)
    }

    pub fn model(&self) -> Option<&[bool]> {
        match &self.outcome {
            Outcome::Sat(m) => Some(m),
            _ => None,
        }
    }
}

/// Solves `cnf` from scratch with the given configuration.
pub fn solve(cnf: &Cnf, config: &SolverConfig) -> SolverResult {
    Solver::new(cnf, config.clone()).solve()
}

#[derive(Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    lbd: u32,
    deleted: bool,
}

pub struct Solver {
    config: SolverConfig,
    num_vars: usize,
    /// Every clause ever given to the solver, kept for model checking.
    original: Vec<Vec<Lit>>,
    clauses: Vec<Clause>,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<Option<u32>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    /// Per decision level: whether the level's decision is already the
    /// flipped second branch (chronological mode only).
    flipped: Vec<bool>,
    qhead: usize,
    ok: bool,
    // decision heuristic
    activity: Vec<f64>,
    var_inc: f64,
    heap: VarHeap,
    static_next: usize,
    phase: Vec<bool>,
    seen: Vec<bool>,
    num_learnts: usize,
    max_learnts: f64,
    stats: Stats,
    interrupt: Option<Arc<AtomicBool>>,
}

impl Solver {
    pub fn new(cnf: &Cnf, config: SolverConfig) -> Solver {
        let n = cnf.num_vars() as usize;
        let mut s = Solver {
            config,
            num_vars: n,
            original: Vec::new(),
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            assigns: vec![UNDEF; n],
            level: vec![0; n],
            reason: vec![None; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            flipped: Vec::new(),
            qhead: 0,
            ok: true,
            activity: vec![0.0; n],
            var_inc: 1.0,
            heap: VarHeap::new(n),
            static_next: 0,
            phase: vec![false; n],
            seen: vec![false; n],
            num_learnts: 0,
            max_learnts: 0.0,
            stats: Stats::default(),
            interrupt: None,
        };
        for c in cnf.clauses() {
            s.add_clause(c);
        }
        s.max_learnts = (s.clauses.len() as f64 / 3.0).max(2000.0);
        s
    }

    /// Stops the search (reported as a timeout) once `flag` is set.
    pub fn set_interrupt(&mut self, flag: Arc<AtomicBool>) {
        self.interrupt = Some(flag);
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    fn ensure_vars(&mut self, n: usize) {
        while self.num_vars < n {
            self.num_vars += 1;
            self.watches.push(Vec::new());
            self.watches.push(Vec::new());
            self.assigns.push(UNDEF);
            self.level.push(0);
            self.reason.push(None);
            self.activity.push(0.0);
            self.phase.push(false);
            self.seen.push(false);
            self.heap.grow(self.num_vars);
        }
    }

    fn value(&self, l: Lit) -> u8 {
        lit_value(&self.assigns, l)
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    /// Adds a clause permanently. May be called between `solve` calls;
    /// the search is reset to level zero first.
    pub fn add_clause(&mut self, lits: &[Lit]) {
        if let Some(max) = lits.iter().map(|l| l.var().index() + 1).max() {
            self.ensure_vars(max);
        }
        self.original.push(lits.to_vec());
        if !self.ok {
            return;
        }
        self.cancel_until(0);
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort();
        c.dedup();
        if c.windows(2).any(|w| w[0] == !w[1]) {
            return;
        }
        if c.iter().any(|&l| self.value(l) == TRUE) {
            return;
        }
        c.retain(|&l| self.value(l) != FALSE);
        match c.len() {
            0 => self.ok = false,
            1 => {
                self.enqueue(c[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                self.attach(c, false, 0);
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool, lbd: u32) -> u32 {
        let cref = self.clauses.len() as u32;
        self.watches[(!lits[0]).code()].push(Watcher {
            cref,
            blocker: lits[1],
        });
        self.watches[(!lits[1]).code()].push(Watcher {
            cref,
            blocker: lits[0],
        });
        self.clauses.push(Clause {
            lits,
            learnt,
            lbd,
            deleted: false,
        });
        if learnt {
            self.num_learnts += 1;
        }
        cref
    }

    fn enqueue(&mut self, l: Lit, reason: Option<u32>) {
        let v = l.var().index();
        debug_assert_eq!(self.assigns[v], UNDEF);
        self.assigns[v] = if l.is_positive() { TRUE } else { FALSE };
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn new_decision_level(&mut self) {
        self.trail_lim.push(self.trail.len());
    }

    fn cancel_until(&mut self, lvl: usize) {
        if self.decision_level() <= lvl {
            return;
        }
        let start = self.trail_lim[lvl];
        for i in (start..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var().index();
            self.assigns[v] = UNDEF;
            self.reason[v] = None;
            self.phase[v] = l.is_positive();
            if self.config.learning {
                self.heap.insert(v, &self.activity);
            } else if v < self.static_next {
                self.static_next = v;
            }
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(lvl);
        self.flipped.truncate(lvl);
        self.qhead = self.qhead.min(start);
    }

    /// Unit propagation; returns the conflicting clause if one arises.
    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[p.code()]);
            let mut i = 0;
            let mut j = 0;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if lit_value(&self.assigns, w.blocker) == TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let c = &mut self.clauses[w.cref as usize];
                if c.deleted {
                    continue;
                }
                let lits = &mut c.lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                let nw = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                if first != w.blocker && lit_value(&self.assigns, first) == TRUE {
                    ws[j] = nw;
                    j += 1;
                    continue;
                }
                let mut moved = None;
                for k in 2..lits.len() {
                    if lit_value(&self.assigns, lits[k]) != FALSE {
                        lits.swap(1, k);
                        moved = Some(lits[1]);
                        break;
                    }
                }
                if let Some(lk) = moved {
                    self.watches[(!lk).code()].push(nw);
                    continue;
                }
                ws[j] = nw;
                j += 1;
                if lit_value(&self.assigns, first) == FALSE {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(w.cref));
                }
            }
            ws.truncate(j);
            self.watches[p.code()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                break;
            }
        }
        conflict
    }

    /// First-UIP conflict analysis with recursive minimization. Returns
    /// the learnt clause (asserting literal first), the backjump level and
    /// the clause's literal block distance.
    fn analyze(&mut self, conflict: u32) -> (Vec<Lit>, usize, u32) {
        let mut learnt: Vec<Lit> = vec![Lit::new(Var(0), true)];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut cref = conflict as usize;
        let mut idx = self.trail.len();
        let cur = self.decision_level() as u32;
        loop {
            let skip = usize::from(p.is_some());
            for k in skip..self.clauses[cref].lits.len() {
                let q = self.clauses[cref].lits[k];
                let v = q.var().index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= cur {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var().index()] {
                    break;
                }
            }
            let pl = self.trail[idx];
            p = Some(pl);
            self.seen[pl.var().index()] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            cref = self.reason[pl.var().index()].expect("implied literal has a reason") as usize;
        }
        learnt[0] = !p.expect("conflict at positive level");

        // drop literals implied by the rest of the clause
        let levels: u64 = learnt[1..]
            .iter()
            .fold(0, |acc, l| acc | 1u64 << (self.level[l.var().index()] % 64));
        let mut cleanup: Vec<usize> = learnt[1..].iter().map(|l| l.var().index()).collect();
        let mut keep = vec![learnt[0]];
        for &l in &learnt[1..] {
            let v = l.var().index();
            if self.reason[v].is_none() || !self.redundant(v, levels, &mut cleanup) {
                keep.push(l);
            }
        }
        for v in cleanup {
            self.seen[v] = false;
        }
        let mut learnt = keep;

        let mut bt = 0usize;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var().index()] > self.level[learnt[max_i].var().index()] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            bt = self.level[learnt[1].var().index()] as usize;
        }
        let mut levels: Vec<u32> = learnt.iter().map(|l| self.level[l.var().index()]).collect();
        levels.sort_unstable();
        levels.dedup();
        (learnt, bt, levels.len() as u32)
    }

    /// True if `v`'s assignment follows from literals already in the learnt
    /// clause (marked `seen`). Variables proven redundant stay marked and are
    /// recorded in `cleanup`.
    fn redundant(&mut self, v: usize, levels: u64, cleanup: &mut Vec<usize>) -> bool {
        let mut stack = vec![v];
        let top = cleanup.len();
        while let Some(u) = stack.pop() {
            let cref = self.reason[u].expect("only implied literals are expanded") as usize;
            for k in 1..self.clauses[cref].lits.len() {
                let q = self.clauses[cref].lits[k];
                let w = q.var().index();
                if self.seen[w] || self.level[w] == 0 {
                    continue;
                }
                if self.reason[w].is_some() && levels >> (self.level[w] % 64) & 1 == 1 {
                    self.seen[w] = true;
                    cleanup.push(w);
                    stack.push(w);
                } else {
                    for &x in &cleanup[top..] {
                        self.seen[x] = false;
                    }
                    cleanup.truncate(top);
                    return false;
                }
            }
        }
        true
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.update(v, &self.activity);
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        if self.config.learning {
            while let Some(v) = self.heap.pop(&self.activity) {
                if self.assigns[v] == UNDEF {
                    return Some(Lit::new(Var(v as u32), self.phase[v]));
                }
            }
            None
        } else {
            while self.static_next < self.num_vars {
                let v = self.static_next;
                if self.assigns[v] == UNDEF {
                    return Some(Lit::new(Var(v as u32), false));
                }
                self.static_next += 1;
            }
            None
        }
    }

    fn reduce_db(&mut self) {
        let mut cands: Vec<(u32, usize)> = self
            .clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.learnt && !c.deleted && c.lits.len() > 2)
            .map(|(i, c)| (c.lbd, i))
            .collect();
        // Highest LBD first; ties broken by age (older first) for determinism.
        cands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let remove = cands.len() / 2;
        for &(_, i) in cands.iter().take(remove) {
            let locked = {
                let l0 = self.clauses[i].lits[0];
                self.value(l0) == TRUE && self.reason[l0.var().index()] == Some(i as u32)
            };
            if locked {
                continue;
            }
            self.clauses[i].deleted = true;
            self.clauses[i].lits = Vec::new();
            self.num_learnts -= 1;
        }
        for ws in &mut self.watches {
            ws.clear();
        }
        for (i, c) in self.clauses.iter().enumerate() {
            if c.deleted {
                continue;
            }
            self.watches[(!c.lits[0]).code()].push(Watcher {
                cref: i as u32,
                blocker: c.lits[1],
            });
            self.watches[(!c.lits[1]).code()].push(Watcher {
                cref: i as u32,
                blocker: c.lits[0],
            });
        }
    }

    fn out_of_budget(&self, start: Instant) -> bool {
        if let Some(flag) = &self.interrupt {
            if flag.load(Ordering::Relaxed) {
                return true;
            }
        }
        match self.config.budget {
            Some(b) => start.elapsed() >= b,
            None => false,
        }
    }

    /// Runs unit propagation under `assumptions` without deciding.
    /// Returns the resulting partial assignment, or `None` on conflict.
    pub fn propagate_only(&mut self, assumptions: &[Lit]) -> Option<Vec<Option<bool>>> {
        if !self.ok {
            return None;
        }
        self.cancel_until(0);
        if self.propagate().is_some() {
            self.ok = false;
            return None;
        }
        self.new_decision_level();
        for &a in assumptions {
            match self.value(a) {
                TRUE => continue,
                FALSE => {
                    self.cancel_until(0);
                    return None;
                }
                _ => self.enqueue(a, None),
            }
            if self.propagate().is_some() {
                self.cancel_until(0);
                return None;
            }
        }
        let out = self
            .assigns
            .iter()
            .map(|&a| match a {
                TRUE => Some(true),
                FALSE => Some(false),
                _ => None,
            })
            .collect();
        self.cancel_until(0);
        Some(out)
    }

    pub fn solve(&mut self) -> SolverResult {
        let start = Instant::now();
        let before = self.stats.clone();
        let outcome = self.search(start);
        self.stats.elapsed += start.elapsed();
        let mut stats = self.stats.clone();
        stats.decisions -= before.decisions;
        stats.propagations -= before.propagations;
        stats.conflicts -= before.conflicts;
        stats.learned -= before.learned;
        stats.restarts -= before.restarts;
        stats.elapsed -= before.elapsed;
        SolverResult { outcome, stats }
    }

    fn search(&mut self, start: Instant) -> Outcome {
        if !self.ok {
            return Outcome::Unsat;
        }
        self.cancel_until(0);
        if self.propagate().is_some() {
            self.ok = false;
            return Outcome::Unsat;
        }
        if self.config.learning {
            for v in 0..self.num_vars {
                if self.assigns[v] == UNDEF {
                    self.heap.insert(v, &self.activity);
                }
            }
        } else {
            self.static_next = 0;
        }
        let mut luby_idx = 0u32;
        let mut restart_budget = luby(luby_idx) * 100;
        let mut conflicts_since_restart = 0u64;
        let mut tick = 0u32;
        loop {
            tick = tick.wrapping_add(1);
            if tick % 256 == 0 && self.out_of_budget(start) {
                self.cancel_until(0);
                return Outcome::Timeout;
            }
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts_since_restart += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Outcome::Unsat;
                }
                if self.config.learning {
                    let (learnt, bt, lbd) = self.analyze(confl);
                    self.cancel_until(bt);
                    self.stats.learned += 1;
                    if learnt.len() == 1 {
                        self.enqueue(learnt[0], None);
                    } else {
                        let asserting = learnt[0];
                        let cref = self.attach(learnt, true, lbd);
                        self.enqueue(asserting, Some(cref));
                    }
                    self.var_inc /= 0.95;
                } else if !self.backtrack_chronologically() {
                    self.ok = false;
                    return Outcome::Unsat;
                }
                continue;
            }
            if self.config.learning && conflicts_since_restart >= restart_budget {
                self.cancel_until(0);
                self.stats.restarts += 1;
                conflicts_since_restart = 0;
                luby_idx += 1;
                restart_budget = luby(luby_idx) * 100;
                if self.num_learnts as f64 >= self.max_learnts {
                    self.reduce_db();
                    self.max_learnts *= 1.1;
                }
                continue;
            }
            match self.pick_branch() {
                None => {
                    let model: Vec<bool> = self.assigns.iter().map(|&a| a == TRUE).collect();
                    self.check_model(&model);
                    return Outcome::Sat(model);
                }
                Some(l) => {
                    self.stats.decisions += 1;
                    self.new_decision_level();
                    self.flipped.push(false);
                    self.enqueue(l, None);
                }
            }
        }
    }

    /// Plain DPLL backtracking: undo to the most recent decision whose
    /// second branch is unexplored and take it. Returns false when the
    /// search space is exhausted.
    fn backtrack_chronologically(&mut self) -> bool {
        loop {
            let lvl = self.decision_level();
            if lvl == 0 {
                return false;
            }
            let decision = self.trail[self.trail_lim[lvl - 1]];
            let was_flipped = self.flipped[lvl - 1];
            self.cancel_until(lvl - 1);
            if !was_flipped {
                self.new_decision_level();
                self.flipped.push(true);
                self.enqueue(!decision, None);
                return true;
            }
        }
    }

    fn check_model(&self, model: &[bool]) {
        for (i, c) in self.original.iter().enumerate() {
            assert!(
                c.iter().any(|l| l.eval(model)),
                "internal error: solver model falsifies input clause #{i} {c:?}"
            );
        }
    }
}

#[inline]
fn lit_value(assigns: &[u8], l: Lit) -> u8 {
    let a = assigns[l.var().index()];
    if a == UNDEF {
        UNDEF
    } else {
        a ^ (!l.is_positive()) as u8
    }
}

fn luby(i: u32) -> u64 {
    // 1 1 2 1 1 2 4 1 1 2 ...
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < u64::from(i) + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    let mut x = u64::from(i);
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1u64 << seq
}

/// Max-heap of variables keyed by activity; ties go to the lower index so
/// the initial order is the variable numbering.
struct VarHeap {
    heap: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn new(n: usize) -> VarHeap {
        VarHeap {
            heap: Vec::with_capacity(n),
            pos: vec![None; n],
        }
    }

    fn grow(&mut self, n: usize) {
        self.pos.resize(n, None);
    }

    fn less(a: usize, b: usize, act: &[f64]) -> bool {
        // "a before b"
        act[a] > act[b] || (act[a] == act[b] && a < b)
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.pos[v].is_some() {
            return;
        }
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.pos[v] = Some(i);
        self.sift_up(i, act);
    }

    fn update(&mut self, v: usize, act: &[f64]) {
        if let Some(i) = self.pos[v] {
            self.sift_up(i, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap[0];
        let last = self.heap.pop().expect("non-empty");
        self.pos[top] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = Some(0);
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let pv = self.heap[parent];
            if Self::less(v, pv, act) {
                self.heap[i] = pv;
                self.pos[pv] = Some(i);
                i = parent;
            } else {
                break;
            }
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let c = if r < n && Self::less(self.heap[r], self.heap[l], act) {
                r
            } else {
                l
            };
            let cv = self.heap[c];
            if Self::less(cv, v, act) {
                self.heap[i] = cv;
                self.pos[cv] = Some(i);
                i = c;
            } else {
                break;
            }
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(d: i64) -> Lit {
        Lit::from_dimacs(d).unwrap()
    }

    fn cnf(clauses: &[&[i64]]) -> Cnf {
        let mut c = Cnf::new();
        for cl in clauses {
            c.add_clause(cl.iter().map(|&d| lit(d)));
        }
        c
    }

    fn both_modes() -> [SolverConfig; 2] {
        [
            SolverConfig {
                learning: false,
                budget: None,
            },
            SolverConfig::default(),
        ]
    }

    #[test]
    fn contradictory_units_are_unsat() {
        for cfg in both_modes() {
            assert!(solve(&cnf(&[&[1], &[-1]]), &cfg).is_unsat());
        }
    }

    #[test]
    fn empty_clause_is_unsat_and_empty_cnf_is_sat() {
        let mut c = Cnf::with_vars(2);
        assert!(solve(&c, &SolverConfig::default()).is_sat());
        c.add_clause([]);
        assert!(solve(&c, &SolverConfig::default()).is_unsat());
    }

    #[test]
    fn luby_prefix() {
        let seq: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn pigeonhole_three_into_two_is_unsat() {
        // p(i,j): pigeon i in hole j, var = 2*i + j + 1
        let v = |i: i64, j: i64| 2 * i + j + 1;
        let mut clauses: Vec<Vec<i64>> = Vec::new();
        for i in 0..3 {
            clauses.push(vec![v(i, 0), v(i, 1)]);
        }
        for j in 0..2 {
            for a in 0..3 {
                for b in (a + 1)..3 {
                    clauses.push(vec![-v(a, j), -v(b, j)]);
                }
            }
        }
        let refs: Vec<&[i64]> = clauses.iter().map(|c| c.as_slice()).collect();
        for cfg in both_modes() {
            assert!(solve(&cnf(&refs), &cfg).is_unsat());
        }
    }

    #[test]
    fn incremental_blocking_exhausts_models() {
        let mut s = Solver::new(&cnf(&[&[1, 2]]), SolverConfig::default());
        let mut count = 0;
        while let Outcome::Sat(m) = s.solve().outcome {
            count += 1;
            let block: Vec<Lit> = m
                .iter()
                .enumerate()
                .map(|(i, &b)| Lit::new(Var(i as u32), !b))
                .collect();
            s.add_clause(&block);
        }
        assert_eq!(count, 3);
    }

    #[test]
    fn propagate_only_reports_implied_literals() {
        let mut s = Solver::new(&cnf(&[&[-1, 2], &[-2, 3]]), SolverConfig::default());
        let a = s.propagate_only(&[lit(1)]).unwrap();
        assert_eq!(a, vec![Some(true), Some(true), Some(true)]);
        assert!(s.propagate_only(&[lit(1), lit(-3)]).is_none());
    }

    #[test]
    fn zero_budget_times_out_on_nontrivial_input() {
        let mut clauses: Vec<Vec<i64>> = Vec::new();
        // a chain that needs decisions: 40 free variables, XOR-ish pairs
        for i in 1..40 {
            clauses.push(vec![i, i + 1]);
            clauses.push(vec![-i, -(i + 1)]);
        }
        let refs: Vec<&[i64]> = clauses.iter().map(|c| c.as_slice()).collect();
        let cfg = SolverConfig {
            learning: true,
            budget: Some(Duration::ZERO),
        };
        let mut s = Solver::new(&cnf(&refs), cfg);
        let flag = Arc::new(AtomicBool::new(true));
        s.set_interrupt(flag);
        let r = s.solve();
        // Either finished before the first budget check or timed out; never
        // a wrong answer.
        assert!(matches!(r.outcome, Outcome::Timeout | Outcome::Sat(_)));
    }
}
