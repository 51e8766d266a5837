use std::collections::BTreeMap;

use crate::scope::Scope;
use crate::semantics::interp::{check_scope, full_mask, Frame, Interpretation, Table};
use crate::semantics::universe::universe_size;
use crate::semantics::SemanticsError;
use crate::surface::{BinOp, Meta, Quant, Sort, SortedTheory, Term, UnOp};

/// Largest universe a quantifier may range over in the evaluator.
pub const MAX_QUANTIFIER_RANGE: u64 = 1 << 20;

/// A possibly partial value. For sorts whose values are bit sets (`m`,
/// `wo`, `bool`) `lo` holds the bits known to be set and `hi` the bits that
/// may be set. Other values are known exactly when `lo == hi`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct V {
    pub lo: u64,
    pub hi: u64,
}

impl V {
    pub const fn known(x: u64) -> V {
        V { lo: x, hi: x }
    }

    pub const fn unknown(full: u64) -> V {
        V { lo: 0, hi: full }
    }

    pub fn value(self) -> Option<u64> {
        (self.lo == self.hi).then_some(self.lo)
    }

    fn tri(lo: bool, hi: bool) -> V {
        V { lo: lo as u64, hi: hi as u64 }
    }
}

/// Source of frame and table contents during evaluation. Table `t` is the
/// `t`-th constant of the vocabulary the program was compiled against.
pub trait Store {
    fn frame(&self) -> &Frame;
    fn cell(&self, table: usize, idx: usize) -> V;
}

/// Total store backed by an [`Interpretation`].
pub struct InterpStore<'a> {
    frame: &'a Frame,
    tables: Vec<&'a [u64]>,
}

impl<'a> InterpStore<'a> {
    pub fn new(p: &Program, i: &'a Interpretation) -> Result<InterpStore<'a>, SemanticsError> {
        let tables = p
            .vocab
            .iter()
            .map(|(n, _)| {
                i.tables
                    .get(n)
                    .map(|t: &Table| t.cells.as_slice())
                    .ok_or_else(|| SemanticsError::MissingTable { name: n.clone() })
            })
            .collect::<Result<_, _>>()?;
        Ok(InterpStore { frame: &i.frame, tables })
    }
}

impl Store for InterpStore<'_> {
    fn frame(&self) -> &Frame {
        self.frame
    }

    fn cell(&self, table: usize, idx: usize) -> V {
        V::known(self.tables[table][idx])
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Tab {
    Agent,
    World,
    User(usize),
}

#[derive(Clone, Debug)]
enum Node {
    Known(u64),
    Slot(usize),
    Cell {
        tab: Tab,
        args: Vec<usize>,
        sizes: Vec<u64>,
    },
    /// Table with a prefix of its arguments given, as a function index.
    Materialize {
        tab: Tab,
        args: Vec<usize>,
        sizes: Vec<u64>,
        radix: u64,
    },
    Apply {
        f: usize,
        arg: usize,
        radix: u64,
    },
    Not(usize),
    Bin(BinOp, usize, usize),
    Modal(UnOp, usize),
    Ob(usize, usize),
    Quant {
        exists: bool,
        slot: usize,
        size: u64,
        body: usize,
    },
    Call {
        body: usize,
        args: Vec<usize>,
    },
}

#[derive(Clone, Debug)]
struct NodeInfo {
    node: Node,
    full: u64,
    free: u64,
}

/// Meta-level node; evaluates to a (possibly unknown) truth value.
#[derive(Clone, Debug)]
enum MNode {
    Valid(usize),
    ValidD(usize),
    ValidCtx(usize, usize),
    AtCtx(usize, usize),
    Imp(usize, usize),
    And(usize, usize),
    /// Universal quantification of `slot` over `0..size`.
    Forall { slot: usize, size: u64, body: usize },
}

/// Formulas compiled against a theory, a scope and a vocabulary. Every node
/// evaluates to a [`V`]; characters are bit masks with bit `c * nW + w` set
/// iff the formula holds at context `c` and world `w`.
#[derive(Clone, Debug)]
pub struct Program {
    scope: Scope,
    vocab: Vec<(String, Sort)>,
    nodes: Vec<NodeInfo>,
    metas: Vec<MNode>,
    defs: BTreeMap<String, usize>,
    theory: SortedTheory,
}

/// Handle to a compiled character-level term.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct TermId(usize);

/// Handle to a compiled meta formula.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct MetaId(usize);

impl Program {
    pub fn new(st: &SortedTheory, scope: Scope, vocab: &BTreeMap<String, Sort>) -> Result<Program, SemanticsError> {
        check_scope(scope)?;
        Ok(Program {
            scope,
            vocab: vocab.iter().map(|(n, s)| (n.clone(), s.clone())).collect(),
            nodes: Vec::new(),
            metas: Vec::new(),
            defs: BTreeMap::new(),
            theory: st.clone(),
        })
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    pub fn vocabulary(&self) -> &[(String, Sort)] {
        &self.vocab
    }

    fn full(&self, s: &Sort) -> u64 {
        if s.is_m() {
            full_mask(self.scope.points())
        } else if s.is_wo() {
            full_mask(self.scope.w)
        } else if *s == Sort::Bool {
            1
        } else {
            u64::MAX
        }
    }

    fn push(&mut self, node: Node, sort: &Sort, free: u64) -> usize {
        let full = self.full(sort);
        self.nodes.push(NodeInfo { node, full, free });
        self.nodes.len() - 1
    }

    fn free_of(&self, ids: &[usize]) -> u64 {
        ids.iter().fold(0, |acc, &i| acc | self.nodes[i].free)
    }

    fn size(&self, s: &Sort) -> Result<u64, SemanticsError> {
        universe_size(s, self.scope)
    }

    fn table_of(&self, name: &str) -> Result<(Tab, Sort), SemanticsError> {
        match name {
            "Agent" => return Ok((Tab::Agent, Sort::fun(Sort::C, Sort::E))),
            "World" => return Ok((Tab::World, Sort::fun(Sort::C, Sort::W))),
            _ => {}
        }
        self.vocab
            .iter()
            .position(|(n, _)| n == name)
            .map(|i| (Tab::User(i), self.vocab[i].1.clone()))
            .ok_or_else(|| SemanticsError::MissingTable { name: name.to_string() })
    }

    fn def_body(&mut self, name: &str) -> Result<usize, SemanticsError> {
        if let Some(&b) = self.defs.get(name) {
            return Ok(b);
        }
        let def = self.theory.theory.def(name).expect("definition exists").clone();
        let mut env = def.params.clone();
        let (body, _) = self.term(&def.body, &mut env)?;
        self.defs.insert(name.to_string(), body);
        Ok(body)
    }

    /// Compiles `t` with the variables of `env` bound to slots `0..env.len()`.
    pub fn compile_term(&mut self, t: &Term, env: &[(String, Sort)]) -> Result<TermId, SemanticsError> {
        let mut env = env.to_vec();
        Ok(TermId(self.term(t, &mut env)?.0))
    }

    fn term(&mut self, t: &Term, env: &mut Vec<(String, Sort)>) -> Result<(usize, Sort), SemanticsError> {
        let m = Sort::m();
        match t {
            Term::Top => Ok((self.push(Node::Known(self.full(&m)), &m, 0), m)),
            Term::Bot => Ok((self.push(Node::Known(0), &m, 0), m)),
            Term::Var(x, _) => {
                let slot = env
                    .iter()
                    .rposition(|(n, _)| n == x)
                    .ok_or_else(|| SemanticsError::Unbound { name: x.clone() })?;
                if slot >= 64 {
                    return Err(SemanticsError::TooDeep);
                }
                let s = env[slot].1.clone();
                Ok((self.push(Node::Slot(slot), &s, 1 << slot), s))
            }
            Term::Const(..) | Term::App(..) => self.application(t, env),
            Term::Un(UnOp::Not, a) => {
                let (a, _) = self.term(a, env)?;
                let free = self.free_of(&[a]);
                Ok((self.push(Node::Not(a), &m, free), m))
            }
            Term::Un(op, a) => {
                let (a, _) = self.term(a, env)?;
                let free = self.free_of(&[a]);
                Ok((self.push(Node::Modal(*op, a), &m, free), m))
            }
            Term::Bin(op, a, b) => {
                let (a, _) = self.term(a, env)?;
                let (b, _) = self.term(b, env)?;
                let free = self.free_of(&[a, b]);
                Ok((self.push(Node::Bin(*op, a, b), &m, free), m))
            }
            Term::Ob(a, b) => {
                let (a, _) = self.term(a, env)?;
                let (b, _) = self.term(b, env)?;
                let free = self.free_of(&[a, b]);
                Ok((self.push(Node::Ob(a, b), &m, free), m))
            }
            Term::Quant(q, x, s, body) => {
                let size = self.size(s)?;
                if size > MAX_QUANTIFIER_RANGE {
                    return Err(SemanticsError::UnsupportedSort { sort: s.clone() });
                }
                let slot = env.len();
                if slot >= 64 {
                    return Err(SemanticsError::TooDeep);
                }
                env.push((x.clone(), s.clone()));
                let r = self.term(body, env);
                env.pop();
                let (body, _) = r?;
                let free = self.nodes[body].free & !(1u64 << slot);
                let node = Node::Quant {
                    exists: *q == Quant::Exists,
                    slot,
                    size,
                    body,
                };
                Ok((self.push(node, &m, free), m))
            }
        }
    }

    fn application(&mut self, t: &Term, env: &mut Vec<(String, Sort)>) -> Result<(usize, Sort), SemanticsError> {
        let (head, args) = t.spine();
        let mut compiled = Vec::with_capacity(args.len());
        for a in &args {
            compiled.push(self.term(a, env)?.0);
        }
        let (mut cur, mut sort, rest) = match head {
            Term::Const(k, _) if self.theory.theory.def(k).is_some() => {
                let nparams = self.theory.theory.def(k).unwrap().params.len();
                let body = self.def_body(k)?;
                let sort = self.theory.def_sorts[k.as_str()].clone();
                let sort = (0..nparams).fold(sort, |s, _| s.codomain().unwrap().clone());
                let given: Vec<usize> = compiled[..nparams].to_vec();
                let free = self.free_of(&given);
                let id = self.push(Node::Call { body, args: given }, &sort, free);
                (id, sort, compiled[nparams..].to_vec())
            }
            Term::Const(k, _) => {
                let (tab, full_sort) = self.table_of(k)?;
                let (targs, result) = full_sort.table_shape();
                let sizes = targs.iter().map(|s| self.size(s)).collect::<Result<Vec<_>, _>>()?;
                let k = compiled.len().min(targs.len());
                let given: Vec<usize> = compiled[..k].to_vec();
                let free = self.free_of(&given);
                let sort = (0..k).fold(full_sort.clone(), |s, _| s.codomain().unwrap().clone());
                let node = if k == targs.len() {
                    Node::Cell { tab, args: given, sizes }
                } else {
                    self.size(&sort)?;
                    let radix = self.size(&result)?;
                    Node::Materialize {
                        tab,
                        args: given,
                        sizes,
                        radix,
                    }
                };
                let id = self.push(node, &sort, free);
                (id, sort, compiled[k..].to_vec())
            }
            other => {
                let (id, sort) = self.term(other, env)?;
                (id, sort, compiled)
            }
        };
        for arg in rest {
            let cod = sort.codomain().expect("sort-checked application").clone();
            let radix = self.size(&cod)?;
            let free = self.free_of(&[cur, arg]);
            cur = self.push(Node::Apply { f: cur, arg, radix }, &cod, free);
            sort = cod;
        }
        Ok((cur, sort))
    }

    /// Compiles a meta formula with `env` bound to slots `0..env.len()`.
    pub fn compile_meta(&mut self, m: &Meta, env: &[(String, Sort)]) -> Result<MetaId, SemanticsError> {
        let mut env = env.to_vec();
        Ok(MetaId(self.meta(m, &mut env)?))
    }

    /// Compiles the universal closure of `m` over `free`.
    pub fn compile_closed(&mut self, m: &Meta, free: &[(String, Sort)]) -> Result<MetaId, SemanticsError> {
        let mut id = self.compile_meta(m, free)?;
        for (slot, (_, s)) in free.iter().enumerate().rev() {
            let size = self.size(s)?;
            self.metas.push(MNode::Forall { slot, size, body: id.0 });
            id = MetaId(self.metas.len() - 1);
        }
        Ok(id)
    }

    fn meta(&mut self, m: &Meta, env: &mut Vec<(String, Sort)>) -> Result<usize, SemanticsError> {
        let node = match m {
            Meta::Valid(t) => MNode::Valid(self.term(t, env)?.0),
            Meta::ValidD(t) => MNode::ValidD(self.term(t, env)?.0),
            Meta::ValidCtx(t, c) => MNode::ValidCtx(self.term(t, env)?.0, self.term(c, env)?.0),
            Meta::AtCtx(t, c) => MNode::AtCtx(self.term(t, env)?.0, self.term(c, env)?.0),
            Meta::Imp(a, b) => MNode::Imp(self.meta(a, env)?, self.meta(b, env)?),
            Meta::And(a, b) => MNode::And(self.meta(a, env)?, self.meta(b, env)?),
            Meta::ForallCtx(x, body) => {
                let slot = env.len();
                if slot >= 64 {
                    return Err(SemanticsError::TooDeep);
                }
                env.push((x.clone(), Sort::C));
                let r = self.meta(body, env);
                env.pop();
                MNode::Forall {
                    slot,
                    size: self.scope.c as u64,
                    body: r?,
                }
            }
        };
        self.metas.push(node);
        Ok(self.metas.len() - 1)
    }

    /// Value of a compiled term under `env`.
    pub fn eval_term<S: Store>(&self, store: &S, t: TermId, env: &[u64]) -> V {
        Run::new(self, store, env).node(t.0)
    }

    /// Three-valued truth of a compiled meta formula; `lo == hi` unless the
    /// store is partial.
    pub fn eval_meta<S: Store>(&self, store: &S, m: MetaId, env: &[u64]) -> V {
        Run::new(self, store, env).meta(m.0)
    }

    pub fn holds<S: Store>(&self, store: &S, m: MetaId, env: &[u64]) -> bool {
        self.eval_meta(store, m, env).lo == 1
    }
}

struct Run<'a, S: Store> {
    p: &'a Program,
    s: &'a S,
    memo: Vec<Option<V>>,
    env: Vec<u64>,
    nc: u32,
    nw: u32,
    wmask: u64,
}

impl<'a, S: Store> Run<'a, S> {
    fn new(p: &'a Program, s: &'a S, env: &[u64]) -> Run<'a, S> {
        Run {
            p,
            s,
            memo: vec![None; p.nodes.len()],
            env: env.to_vec(),
            nc: p.scope.c,
            nw: p.scope.w,
            wmask: full_mask(p.scope.w),
        }
    }

    fn row(&self, x: u64, c: u32) -> u64 {
        x >> (c * self.nw) & self.wmask
    }

    fn bit(&self, x: u64, c: u32, w: u32) -> bool {
        x >> (c * self.nw + w) & 1 == 1
    }

    fn cell(&self, tab: Tab, idx: usize) -> V {
        let f = self.s.frame();
        match tab {
            Tab::Agent => V::known(f.agent_of[idx] as u64),
            Tab::World => V::known(f.world_of[idx] as u64),
            Tab::User(t) => self.s.cell(t, idx),
        }
    }

    fn args(&mut self, args: &[usize], sizes: &[u64]) -> Option<u64> {
        let mut idx = 0u64;
        for (&a, &s) in args.iter().zip(sizes) {
            idx = idx * s + self.node(a).value()?;
        }
        Some(idx)
    }

    fn node(&mut self, id: usize) -> V {
        let p = self.p;
        let info = &p.nodes[id];
        let closed = info.free == 0;
        if closed {
            if let Some(v) = self.memo[id] {
                return v;
            }
        }
        let full = info.full;
        let v = match &info.node {
            Node::Known(x) => V::known(*x),
            Node::Slot(i) => V::known(self.env[*i]),
            Node::Cell { tab, args, sizes } => match self.args(args, sizes) {
                Some(idx) => self.cell(*tab, idx as usize),
                None => V::unknown(full),
            },
            Node::Materialize { tab, args, sizes, radix } => {
                let rest: u64 = sizes[args.len()..].iter().product();
                match self.args(args, sizes) {
                    Some(prefix) => {
                        let mut acc = Some(0u64);
                        for j in (0..rest).rev() {
                            acc = match (acc, self.cell(*tab, (prefix * rest + j) as usize).value()) {
                                (Some(a), Some(c)) => Some(a * radix + c),
                                _ => None,
                            };
                        }
                        acc.map_or(V::unknown(full), V::known)
                    }
                    None => V::unknown(full),
                }
            }
            Node::Apply { f, arg, radix } => match (self.node(*f).value(), self.node(*arg).value()) {
                (Some(f), Some(a)) => V::known(f / radix.pow(a as u32) % radix),
                _ => V::unknown(full),
            },
            Node::Not(a) => {
                let a = self.node(*a);
                V {
                    lo: !a.hi & full,
                    hi: !a.lo & full,
                }
            }
            Node::Bin(op, a, b) => {
                let (a, b) = (self.node(*a), self.node(*b));
                let not = |x: V| V {
                    lo: !x.hi & full,
                    hi: !x.lo & full,
                };
                let or = |x: V, y: V| V {
                    lo: x.lo | y.lo,
                    hi: x.hi | y.hi,
                };
                let and = |x: V, y: V| V {
                    lo: x.lo & y.lo,
                    hi: x.hi & y.hi,
                };
                match op {
                    BinOp::And => and(a, b),
                    BinOp::Or => or(a, b),
                    BinOp::Imp => or(not(a), b),
                    BinOp::Iff => or(and(a, b), and(not(a), not(b))),
                }
            }
            Node::Modal(op, a) => {
                let a = self.node(*a);
                self.modal(*op, a, full)
            }
            Node::Ob(a, b) => {
                let (phi, sigma) = (self.node(*a), self.node(*b));
                let f = self.s.frame();
                let mut out = V::known(0);
                for c in 0..self.nc {
                    let row = self.wmask << (c * self.nw);
                    let known = self.row(phi.lo, c) == self.row(phi.hi, c) && self.row(sigma.lo, c) == self.row(sigma.hi, c);
                    if !known {
                        out.hi |= row;
                    } else if f.in_ob(self.row(sigma.lo, c), self.row(phi.lo, c)) {
                        out.lo |= row;
                        out.hi |= row;
                    }
                }
                out
            }
            Node::Quant { exists, slot, size, body } => {
                let (exists, slot, body) = (*exists, *slot, *body);
                let mut acc = if exists { V::known(0) } else { V::known(full) };
                if self.env.len() <= slot {
                    self.env.resize(slot + 1, 0);
                }
                let saved = self.env[slot];
                for x in 0..*size {
                    self.env[slot] = x;
                    let v = self.node(body);
                    if exists {
                        acc = V {
                            lo: acc.lo | v.lo,
                            hi: acc.hi | v.hi,
                        };
                        if acc.lo == full {
                            break;
                        }
                    } else {
                        acc = V {
                            lo: acc.lo & v.lo,
                            hi: acc.hi & v.hi,
                        };
                        if acc.hi == 0 {
                            break;
                        }
                    }
                }
                self.env[slot] = saved;
                acc
            }
            Node::Call { body, args } => {
                let mut vals = Vec::with_capacity(args.len());
                let mut unknown = false;
                for &a in args {
                    match self.node(a).value() {
                        Some(x) => vals.push(x),
                        None => unknown = true,
                    }
                }
                if unknown {
                    V::unknown(full)
                } else {
                    let saved = std::mem::replace(&mut self.env, vals);
                    let v = self.node(*body);
                    self.env = saved;
                    v
                }
            }
        };
        if closed {
            self.memo[id] = Some(v);
        }
        v
    }

    fn modal(&self, op: UnOp, a: V, full: u64) -> V {
        let f = self.s.frame();
        let (nc, nw) = (self.nc, self.nw);
        let over = |acc: &[u64], x: u64, boxed: bool| {
            let mut out = 0u64;
            for c in 0..nc {
                let row = self.row(x, c);
                for w in 0..nw {
                    let s = acc[w as usize];
                    let hit = if boxed { s & !row == 0 } else { s & row != 0 };
                    if hit {
                        out |= 1 << (c * nw + w);
                    }
                }
            }
            out
        };
        match op {
            UnOp::BoxA | UnOp::DiaA | UnOp::BoxP | UnOp::DiaP => {
                let acc = if matches!(op, UnOp::BoxA | UnOp::DiaA) { &f.av } else { &f.pv };
                let boxed = matches!(op, UnOp::BoxA | UnOp::BoxP);
                V {
                    lo: over(acc, a.lo, boxed),
                    hi: over(acc, a.hi, boxed),
                }
            }
            UnOp::ObA | UnOp::ObI => {
                let acc = if op == UnOp::ObA { &f.av } else { &f.pv };
                let mut out = V::known(0);
                for c in 0..nc {
                    let (lo, hi) = (self.row(a.lo, c), self.row(a.hi, c));
                    for w in 0..nw {
                        let x = acc[w as usize];
                        let bit = 1u64 << (c * nw + w);
                        if lo == hi {
                            if f.in_ob(x, lo) && x & !lo != 0 {
                                out.lo |= bit;
                                out.hi |= bit;
                            }
                        } else if x & !lo != 0 {
                            out.hi |= bit;
                        }
                    }
                }
                out
            }
            UnOp::BoxD => {
                let lo = (0..nc).all(|c| self.bit(a.lo, c, f.world_of[c as usize]));
                let hi = (0..nc).all(|c| self.bit(a.hi, c, f.world_of[c as usize]));
                V {
                    lo: if lo { full } else { 0 },
                    hi: if hi { full } else { 0 },
                }
            }
            UnOp::Not => unreachable!("negation is compiled to Node::Not"),
        }
    }

    fn meta(&mut self, id: usize) -> V {
        let p = self.p;
        let mfull = full_mask(p.scope.points());
        match &p.metas[id] {
            MNode::Valid(t) => {
                let v = self.node(*t);
                V::tri(v.lo == mfull, v.hi == mfull)
            }
            MNode::ValidD(t) => {
                let v = self.node(*t);
                let wo = &self.s.frame().world_of;
                let lo = (0..self.nc).all(|c| self.bit(v.lo, c, wo[c as usize]));
                let hi = (0..self.nc).all(|c| self.bit(v.hi, c, wo[c as usize]));
                V::tri(lo, hi)
            }
            MNode::ValidCtx(t, ctx) | MNode::AtCtx(t, ctx) => {
                let v = self.node(*t);
                let Some(c) = self.node(*ctx).value() else {
                    return V::tri(false, true);
                };
                let c = c as u32;
                if matches!(p.metas[id], MNode::ValidCtx(..)) {
                    V::tri(self.row(v.lo, c) == self.wmask, self.row(v.hi, c) == self.wmask)
                } else {
                    let w = self.s.frame().world_of[c as usize];
                    V::tri(self.bit(v.lo, c, w), self.bit(v.hi, c, w))
                }
            }
            MNode::Imp(a, b) => {
                let a = self.meta(*a);
                if a.hi == 0 {
                    return V::known(1);
                }
                let b = self.meta(*b);
                V::tri(a.hi == 0 || b.lo == 1, a.lo == 0 || b.hi == 1)
            }
            MNode::And(a, b) => {
                let a = self.meta(*a);
                if a.hi == 0 {
                    return V::known(0);
                }
                let b = self.meta(*b);
                V::tri(a.lo == 1 && b.lo == 1, b.hi == 1)
            }
            MNode::Forall { slot, size, body } => {
                let (slot, body) = (*slot, *body);
                if self.env.len() <= slot {
                    self.env.resize(slot + 1, 0);
                }
                let saved = self.env[slot];
                let mut acc = V::known(1);
                for x in 0..*size {
                    self.env[slot] = x;
                    let v = self.meta(body);
                    acc = V {
                        lo: acc.lo & v.lo,
                        hi: acc.hi & v.hi,
                    };
                    if acc.hi == 0 {
                        break;
                    }
                }
                self.env[slot] = saved;
                acc
            }
        }
    }
}

/// Values for free variables: name, sort and value index.
pub type Valuation = [(String, Sort, u64)];

fn env_of(rho: &Valuation) -> (Vec<(String, Sort)>, Vec<u64>) {
    (
        rho.iter().map(|(n, s, _)| (n.clone(), s.clone())).collect(),
        rho.iter().map(|(_, _, v)| *v).collect(),
    )
}

/// Truth of the character-level formula `t` at context `c` and world `w`.
pub fn eval_char(
    st: &SortedTheory,
    t: &Term,
    i: &Interpretation,
    rho: &Valuation,
    c: u32,
    w: u32,
) -> Result<bool, SemanticsError> {
    let mut p = Program::new(st, i.scope, &i.vocabulary())?;
    let (names, vals) = env_of(rho);
    let id = p.compile_term(t, &names)?;
    let store = InterpStore::new(&p, i)?;
    let v = p.eval_term(&store, id, &vals);
    Ok(v.lo >> (c * i.scope.w + w) & 1 == 1)
}

/// Truth of a meta formula in `i`, with the free variables given by `rho`.
pub fn eval_meta(st: &SortedTheory, m: &Meta, i: &Interpretation, rho: &Valuation) -> Result<bool, SemanticsError> {
    let mut p = Program::new(st, i.scope, &i.vocabulary())?;
    let (names, vals) = env_of(rho);
    let id = p.compile_meta(m, &names)?;
    let store = InterpStore::new(&p, i)?;
    Ok(p.holds(&store, id, &vals))
}
