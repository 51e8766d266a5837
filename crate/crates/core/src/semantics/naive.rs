//! Model enumeration driven by the reference evaluator alone: every frame
//! meeting the condition set is listed, and table cells are filled in by a
//! depth-first search. Three-valued evaluation prunes a branch once no
//! completion can be a model, and fixes any open cell that has only one
//! value left that keeps the constraints satisfiable.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::time::Instant;

use crate::scope::Scope;
use crate::semantics::canonical::canonical_key;
use crate::semantics::conditions::{frame_ok, Condition, ConditionSet};
use crate::semantics::eval::{Store, V};
use crate::semantics::interp::{check_scope, full_mask, Frame, Interpretation, Table};
use crate::semantics::query::{CompiledQuery, Query};
use crate::semantics::universe::universe_size;
use crate::semantics::SemanticsError;
use crate::surface::Sort;

/// Most worlds for which frames are enumerated explicitly.
pub const MAX_NAIVE_WORLDS: u32 = 2;

/// Every frame over `scope` meeting `cs`, in a fixed order.
pub fn frames(scope: Scope, cs: &ConditionSet) -> Result<Vec<Frame>, SemanticsError> {
    check_scope(scope)?;
    if scope.w > MAX_NAIVE_WORLDS {
        return Err(SemanticsError::ScopeUnsupported { scope });
    }
    let nw = scope.w;
    let sets = 1u64 << nw;
    let acc_conds: Vec<Condition> = cs
        .enabled()
        .filter(|c| matches!(c, Condition::AvPv | Condition::NonemptyAv | Condition::PvRefl))
        .collect();
    let ob_conds: Vec<Condition> = cs.enabled().filter(|c| !acc_conds.contains(c)).collect();

    let maps = sets.pow(nw);
    let decode = |mut x: u64| -> Vec<u64> {
        (0..nw)
            .map(|_| {
                let v = x % sets;
                x /= sets;
                v
            })
            .collect()
    };
    let mut accs = Vec::new();
    for a in 0..maps {
        for p in 0..maps {
            let mut f = Frame::empty(scope);
            f.av = decode(a);
            f.pv = decode(p);
            if acc_conds.iter().all(|c| c.violations(&f, nw, true).is_empty()) {
                accs.push((f.av, f.pv));
            }
        }
    }
    let mut obs = Vec::new();
    let bits = sets * sets;
    for o in 0..1u64 << bits {
        let mut f = Frame::empty(scope);
        f.ob = (0..sets).map(|x| o >> (x * sets) & full_mask(sets as u32)).collect();
        if ob_conds.iter().all(|c| c.violations(&f, nw, true).is_empty()) {
            obs.push(f.ob);
        }
    }
    let assignments = |n: u32, k: u32| -> Vec<Vec<u32>> {
        let total = (k as u64).pow(n);
        (0..total)
            .map(|mut x| {
                (0..n)
                    .map(|_| {
                        let v = (x % k as u64) as u32;
                        x /= k as u64;
                        v
                    })
                    .collect()
            })
            .collect()
    };
    let agents = assignments(scope.c, scope.e);
    let worlds = assignments(scope.c, scope.w);
    let mut out = Vec::new();
    for (av, pv) in &accs {
        for ob in &obs {
            for agent_of in &agents {
                for world_of in &worlds {
                    let f = Frame {
                        av: av.clone(),
                        pv: pv.clone(),
                        ob: ob.clone(),
                        agent_of: agent_of.clone(),
                        world_of: world_of.clone(),
                    };
                    debug_assert!(frame_ok(&f, nw, cs));
                    out.push(f);
                }
            }
        }
    }
    Ok(out)
}

struct Partial<'a> {
    frame: &'a Frame,
    cells: Vec<Vec<V>>,
    /// Cells read while not yet known, in reading order.
    touched: RefCell<Vec<(usize, usize)>>,
}

impl Store for Partial<'_> {
    fn frame(&self) -> &Frame {
        self.frame
    }

    fn cell(&self, table: usize, idx: usize) -> V {
        let v = self.cells[table][idx];
        if v.lo != v.hi {
            self.touched.borrow_mut().push((table, idx));
        }
        v
    }
}

/// One decision of the search: a bit of a set-valued cell or the whole
/// value of an element-valued cell.
#[derive(Copy, Clone, Debug)]
enum Decision {
    Bit { table: usize, cell: usize, bit: u32 },
    Value { table: usize, cell: usize, size: u64 },
}

#[derive(Clone, Debug, Default)]
pub struct NaiveResult {
    /// Canonical keys of the models found.
    pub models: BTreeSet<Vec<u64>>,
    /// Models found before canonicalization.
    pub raw: u64,
    /// False when the limit or the deadline stopped the search.
    pub complete: bool,
}

struct Search<'a> {
    q: &'a CompiledQuery,
    scope: Scope,
    tables: Vec<Table>,
    names: Vec<String>,
    decisions: Vec<Decision>,
    result: NaiveResult,
    limit: u64,
    deadline: Option<Instant>,
    stopped: bool,
    nodes: u64,
}

impl Decision {
    fn cell(self) -> (usize, usize) {
        match self {
            Decision::Bit { table, cell, .. } | Decision::Value { table, cell, .. } => (table, cell),
        }
    }
}

impl Search<'_> {
    fn record(&mut self, frame: &Frame, p: &Partial) {
        let mut i = Interpretation {
            scope: self.scope,
            frame: frame.clone(),
            tables: Default::default(),
        };
        for (k, name) in self.names.iter().enumerate() {
            let mut t = self.tables[k].clone();
            t.cells = p.cells[k].iter().map(|v| v.value().expect("total assignment")).collect();
            i.tables.insert(name.clone(), t);
        }
        debug_assert!(self.q.accepts(&i).unwrap());
        self.result.raw += 1;
        self.result.models.insert(canonical_key(&i));
        if self.result.raw >= self.limit || self.deadline.is_some_and(|d| Instant::now() > d) {
            self.stopped = true;
        }
    }

    fn open(d: Decision, p: &Partial) -> bool {
        match d {
            Decision::Bit { table, cell, bit } => {
                let v = p.cells[table][cell];
                (v.lo ^ v.hi) >> bit & 1 == 1
            }
            Decision::Value { table, cell, .. } => p.cells[table][cell].value().is_none(),
        }
    }

    fn options(d: Decision, p: &Partial) -> Vec<(usize, usize, V)> {
        match d {
            Decision::Bit { table, cell, bit } => {
                let v = p.cells[table][cell];
                let b = 1u64 << bit;
                vec![
                    (table, cell, V { lo: v.lo, hi: v.hi & !b }),
                    (table, cell, V { lo: v.lo | b, hi: v.hi }),
                ]
            }
            Decision::Value { table, cell, size } => (0..size).map(|x| (table, cell, V::known(x))).collect(),
        }
    }

    /// Options of `d` that do not make the constraints false.
    fn viable(&self, d: Decision, p: &mut Partial) -> Vec<(usize, usize, V)> {
        let mut out = Self::options(d, p);
        out.retain(|&(t, c, v)| {
            let saved = p.cells[t][c];
            p.cells[t][c] = v;
            let alive = self.q.eval(p).hi != 0;
            p.cells[t][c] = saved;
            alive
        });
        out
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes % 256 == 0 && self.deadline.is_some_and(|d| Instant::now() > d) {
            self.stopped = true;
        }
        self.stopped
    }

    /// Records every completion of `p`. While `check` holds the constraints
    /// are still undecided: among the open cells the evaluator read, those
    /// with a single viable option are fixed and the one with the fewest
    /// viable options is branched on.
    /// Once they are known to hold, the open cells are filled in order.
    fn dfs(&mut self, p: &mut Partial, check: bool) {
        if self.tick() {
            return;
        }
        let saved = p.cells.clone();
        self.step(p, check);
        p.cells = saved;
    }

    fn step(&mut self, p: &mut Partial, mut check: bool) {
        let mut branch = None;
        if check {
            loop {
                p.touched.borrow_mut().clear();
                let v = self.q.eval(p);
                if v.hi == 0 {
                    return;
                }
                if v.lo == 1 {
                    check = false;
                    break;
                }
                let touched: BTreeSet<(usize, usize)> = p.touched.take().into_iter().collect();
                let mut best: Option<Vec<(usize, usize, V)>> = None;
                let mut forced = false;
                for k in 0..self.decisions.len() {
                    let d = self.decisions[k];
                    if !Self::open(d, p) || !touched.contains(&d.cell()) {
                        continue;
                    }
                    let opts = self.viable(d, p);
                    match opts.len() {
                        0 => return,
                        1 => {
                            let (t, c, v) = opts[0];
                            p.cells[t][c] = v;
                            forced = true;
                        }
                        _ => {
                            if best.as_ref().map_or(true, |b| opts.len() < b.len()) {
                                best = Some(opts);
                            }
                        }
                    }
                }
                if !forced {
                    branch = best;
                    break;
                }
            }
        }
        let branch = match branch {
            Some(b) => b,
            None => match self.decisions.iter().find(|&&d| Self::open(d, p)) {
                Some(&d) => Self::options(d, p),
                None => {
                    debug_assert!(!check, "a total assignment evaluates to a known value");
                    let frame = p.frame;
                    self.record(frame, p);
                    return;
                }
            },
        };
        for (t, c, v) in branch {
            let saved = p.cells[t][c];
            p.cells[t][c] = v;
            self.dfs(p, check);
            p.cells[t][c] = saved;
            if self.stopped {
                return;
            }
        }
    }
}

/// All models of `q` at `scope` whose frame meets `cs`, up to isomorphism.
pub fn enumerate(
    q: &Query,
    scope: Scope,
    cs: &ConditionSet,
    limit: u64,
    deadline: Option<Instant>,
) -> Result<NaiveResult, SemanticsError> {
    let compiled = q.compile(scope)?;
    let frames = frames(scope, cs)?;
    let mut tables = Vec::new();
    let mut names = Vec::new();
    let mut decisions = Vec::new();
    let mut initial = Vec::new();
    for (k, (name, sort)) in q.vocabulary.iter().enumerate() {
        let t = Table::new(sort, scope)?;
        let set_valued = t.result.is_m() || t.result.is_wo() || t.result == Sort::Bool;
        let width = if t.result.is_m() {
            scope.points()
        } else if t.result.is_wo() {
            scope.w
        } else {
            1
        };
        let size = universe_size(&t.result, scope)?;
        for cell in 0..t.cells.len() {
            if set_valued {
                decisions.extend((0..width).map(|bit| Decision::Bit { table: k, cell, bit }));
            } else {
                decisions.push(Decision::Value { table: k, cell, size });
            }
        }
        let unknown = if set_valued { V::unknown(full_mask(width)) } else { V::unknown(u64::MAX) };
        initial.push(vec![unknown; t.cells.len()]);
        names.push(name.clone());
        tables.push(t);
    }
    let mut search = Search {
        q: &compiled,
        scope,
        tables,
        names,
        decisions,
        result: NaiveResult::default(),
        limit,
        deadline,
        stopped: false,
        nodes: 0,
    };
    for f in &frames {
        let mut p = Partial {
            frame: f,
            cells: initial.clone(),
            touched: RefCell::new(Vec::new()),
        };
        search.dfs(&mut p, true);
        if search.stopped {
            break;
        }
    }
    search.result.complete = !search.stopped;
    Ok(search.result)
}
