//! Symbolic evaluation of terms into literals. A value of a mask sort
//! (`m`, `wo`, `bool`) is a vector of literals, one per bit; a value of a
//! carrier sort is a one-hot vector; a function value is the vector of its
//! images. Applications to symbolic arguments become multiplexers over the
//! argument's possible values.

use std::collections::HashMap;
use std::rc::Rc;

use deon_sat::Lit;

use crate::grounder::gates::Gates;
use crate::grounder::varmap::PropVarMap;
use crate::grounder::GroundError;
use crate::scope::Scope;
use crate::semantics::universe_size;
use crate::surface::{BinOp, Meta, Quant, Sort, SortedTheory, Term, UnOp};

#[derive(Clone, Debug)]
pub enum SymVal {
    Const(u64),
    Bits(Vec<Lit>),
    OneHot(Vec<Lit>),
    Fun(Rc<Vec<SymVal>>),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Kind {
    Mask(u32),
    Elem(u64),
    Func(u64),
}

pub struct Grounder<'a> {
    st: &'a SortedTheory,
    map: &'a PropVarMap,
    pub g: Gates,
    scope: Scope,
    env: Vec<(String, Sort, SymVal)>,
    tables: HashMap<String, SymVal>,
    closed: HashMap<*const Term, bool>,
    memo: HashMap<*const Term, (SymVal, Sort)>,
    calls: HashMap<(String, Vec<u64>), SymVal>,
}

fn digit(v: u64, a: u64, radix: u64) -> u64 {
    (v / radix.pow(a as u32)) % radix
}

impl<'a> Grounder<'a> {
    pub fn new(st: &'a SortedTheory, map: &'a PropVarMap, g: Gates) -> Grounder<'a> {
        Grounder {
            st,
            map,
            g,
            scope: map.scope,
            env: Vec::new(),
            tables: HashMap::new(),
            closed: HashMap::new(),
            memo: HashMap::new(),
            calls: HashMap::new(),
        }
    }

    fn size(&self, s: &Sort) -> Result<u64, GroundError> {
        Ok(universe_size(s, self.scope)?)
    }

    fn kind(&self, s: &Sort) -> Result<Kind, GroundError> {
        Ok(if s.is_m() {
            Kind::Mask(self.scope.points())
        } else if s.is_wo() {
            Kind::Mask(self.scope.w)
        } else if *s == Sort::Bool {
            Kind::Mask(1)
        } else if let Sort::Fun(d, _) = s {
            Kind::Func(self.size(d)?)
        } else {
            Kind::Elem(self.size(s)?)
        })
    }

    /// `v` as an explicit vector of literals or images.
    fn expand(&mut self, v: &SymVal, s: &Sort) -> Result<SymVal, GroundError> {
        let SymVal::Const(x) = *v else {
            return Ok(v.clone());
        };
        Ok(match self.kind(s)? {
            Kind::Mask(n) => SymVal::Bits((0..n).map(|i| self.g.constant(x >> i & 1 == 1)).collect()),
            Kind::Elem(n) => SymVal::OneHot((0..n).map(|i| self.g.constant(i == x)).collect()),
            Kind::Func(_) => SymVal::Fun(Rc::new(self.images(v, s)?)),
        })
    }

    fn bits(&mut self, v: &SymVal, s: &Sort) -> Result<Vec<Lit>, GroundError> {
        match self.expand(v, s)? {
            SymVal::Bits(b) => Ok(b),
            other => panic!("mask value expected, got {other:?}"),
        }
    }

    /// The images of a function value, one per argument.
    fn images(&mut self, f: &SymVal, s: &Sort) -> Result<Vec<SymVal>, GroundError> {
        let cod = s.codomain().expect("function sort").clone();
        let nd = self.size(s.domain().unwrap())?;
        Ok(match f {
            SymVal::Const(x) => {
                if s.is_m() {
                    let nw = self.scope.w;
                    (0..nd).map(|c| SymVal::Const(x >> (c as u32 * nw) & ((1 << nw) - 1))).collect()
                } else if s.is_wo() {
                    (0..nd).map(|w| SymVal::Const(x >> w & 1)).collect()
                } else {
                    let r = self.size(&cod)?;
                    (0..nd).map(|a| SymVal::Const(digit(*x, a, r))).collect()
                }
            }
            SymVal::Bits(b) => {
                let width = b.len() as u64 / nd;
                (0..nd)
                    .map(|a| SymVal::Bits(b[(a * width) as usize..((a + 1) * width) as usize].to_vec()))
                    .collect()
            }
            SymVal::Fun(v) => v.as_ref().clone(),
            SymVal::OneHot(_) => panic!("function value expected"),
        })
    }

    /// Literal for "`v` equals the value with index `x`".
    fn eq_const(&mut self, v: &SymVal, s: &Sort, x: u64) -> Result<Lit, GroundError> {
        Ok(match v {
            SymVal::Const(y) => self.g.constant(*y == x),
            SymVal::Bits(b) => {
                let lits: Vec<Lit> = b.iter().enumerate().map(|(i, &l)| if x >> i & 1 == 1 { l } else { !l }).collect();
                self.g.and(lits)
            }
            SymVal::OneHot(h) => h[x as usize],
            SymVal::Fun(images) => {
                let cod = s.codomain().unwrap().clone();
                let r = self.size(&cod)?;
                let mut lits = Vec::with_capacity(images.len());
                for (a, img) in images.iter().enumerate() {
                    lits.push(self.eq_const(img, &cod, digit(x, a as u64, r))?);
                    if lits.last() == Some(&self.g.ff()) {
                        break;
                    }
                }
                self.g.and(lits)
            }
        })
    }

    /// The values `v` may take, each with the literal selecting it.
    fn cases(&mut self, v: &SymVal, s: &Sort) -> Result<Vec<(u64, Lit)>, GroundError> {
        if let SymVal::Const(x) = v {
            return Ok(vec![(*x, self.g.tt())]);
        }
        let n = self.size(s)?;
        let mut out = Vec::new();
        for x in 0..n {
            let l = self.eq_const(v, s, x)?;
            if l != self.g.ff() {
                out.push((x, l));
            }
        }
        Ok(out)
    }

    /// Value selected by exactly one true selector among `cases`.
    fn mux(&mut self, cases: &[(Lit, SymVal)], s: &Sort) -> Result<SymVal, GroundError> {
        if let [(l, v)] = cases {
            if *l == self.g.tt() {
                return Ok(v.clone());
            }
        }
        if let Some((_, SymVal::Const(x))) = cases.first() {
            if cases.iter().all(|(_, v)| matches!(v, SymVal::Const(y) if y == x)) {
                return Ok(SymVal::Const(*x));
            }
        }
        Ok(match self.kind(s)? {
            Kind::Mask(_) | Kind::Elem(_) => {
                let mut expanded = Vec::with_capacity(cases.len());
                for (l, v) in cases {
                    let lits = match self.expand(v, s)? {
                        SymVal::Bits(b) | SymVal::OneHot(b) => b,
                        _ => unreachable!(),
                    };
                    expanded.push((*l, lits));
                }
                let width = expanded[0].1.len();
                let mut out = Vec::with_capacity(width);
                for i in 0..width {
                    let terms: Vec<Lit> = expanded.iter().map(|(l, b)| (*l, b[i])).collect::<Vec<_>>().into_iter().map(|(l, b)| self.g.and2(l, b)).collect();
                    out.push(self.g.or(terms));
                }
                if matches!(self.kind(s)?, Kind::Mask(_)) {
                    SymVal::Bits(out)
                } else {
                    SymVal::OneHot(out)
                }
            }
            Kind::Func(nd) => {
                let cod = s.codomain().unwrap().clone();
                let mut all = Vec::with_capacity(cases.len());
                for (l, v) in cases {
                    all.push((*l, self.images(v, s)?));
                }
                let mut images = Vec::with_capacity(nd as usize);
                for a in 0..nd as usize {
                    let col: Vec<(Lit, SymVal)> = all.iter().map(|(l, im)| (*l, im[a].clone())).collect();
                    images.push(self.mux(&col, &cod)?);
                }
                SymVal::Fun(Rc::new(images))
            }
        })
    }

    fn apply(&mut self, f: &SymVal, fs: &Sort, a: &SymVal) -> Result<SymVal, GroundError> {
        let ds = fs.domain().unwrap().clone();
        let cod = fs.codomain().unwrap().clone();
        if let SymVal::Const(x) = a {
            if let SymVal::Fun(images) = f {
                return Ok(images[*x as usize].clone());
            }
            return Ok(self.images(f, fs)?.swap_remove(*x as usize));
        }
        let images = self.images(f, fs)?;
        let cases = self.cases(a, &ds)?;
        let col: Vec<(Lit, SymVal)> = cases.into_iter().map(|(x, l)| (l, images[x as usize].clone())).collect();
        self.mux(&col, &cod)
    }

    /// Curried value of a table or builtin, built once.
    fn table_value(&mut self, name: &str) -> Result<(SymVal, Sort), GroundError> {
        let s = self.scope;
        let sort = match name {
            "Agent" => Sort::fun(Sort::C, Sort::E),
            "World" => Sort::fun(Sort::C, Sort::W),
            _ => match self.map.table_index(name) {
                Some(k) => self.map.tables[k].table.sort.clone(),
                None => return Err(crate::semantics::SemanticsError::MissingTable { name: name.into() }.into()),
            },
        };
        if let Some(v) = self.tables.get(name) {
            return Ok((v.clone(), sort));
        }
        let m = self.map;
        let v = match name {
            "Agent" => SymVal::Fun(Rc::new(
                (0..s.c)
                    .map(|c| SymVal::OneHot((0..s.e).map(|e| m.agent_of(c, e).positive()).collect()))
                    .collect(),
            )),
            "World" => SymVal::Fun(Rc::new(
                (0..s.c)
                    .map(|c| SymVal::OneHot((0..s.w).map(|w| m.world_of(c, w).positive()).collect()))
                    .collect(),
            )),
            _ => {
                let k = m
                    .table_index(name)
                    .ok_or_else(|| GroundError::Semantics(crate::semantics::SemanticsError::MissingTable { name: name.into() }))?;
                let t = &m.tables[k];
                let cells: Vec<SymVal> = (0..t.table.cells.len())
                    .map(|cell| {
                        let lits: Vec<Lit> = (0..t.width).map(|b| m.table_var(k, cell, b).positive()).collect();
                        if t.one_hot {
                            SymVal::OneHot(lits)
                        } else {
                            SymVal::Bits(lits)
                        }
                    })
                    .collect();
                curry(&cells, &t.table.arg_sizes)
            }
        };
        self.tables.insert(name.to_string(), v.clone());
        Ok((v, sort))
    }

    fn is_closed(&mut self, t: &Term) -> bool {
        let key = t as *const Term;
        if let Some(&b) = self.closed.get(&key) {
            return b;
        }
        let b = match t {
            Term::Var(..) => false,
            Term::Const(..) | Term::Top | Term::Bot => true,
            Term::App(a, b) | Term::Bin(_, a, b) | Term::Ob(a, b) => self.is_closed(a) && self.is_closed(b),
            Term::Un(_, a) => self.is_closed(a),
            Term::Quant(_, x, _, body) => crate::surface::free_vars(body).iter().all(|v| v == x),
        };
        self.closed.insert(key, b);
        b
    }

    fn lookup(&self, x: &str) -> Result<(SymVal, Sort), GroundError> {
        self.env
            .iter()
            .rev()
            .find(|(n, _, _)| n == x)
            .map(|(_, s, v)| (v.clone(), s.clone()))
            .ok_or_else(|| GroundError::Semantics(crate::semantics::SemanticsError::Unbound { name: x.into() }))
    }

    pub fn term(&mut self, t: &Term) -> Result<(SymVal, Sort), GroundError> {
        let closed = !matches!(t, Term::Const(..) | Term::Top | Term::Bot) && self.is_closed(t);
        if closed {
            if let Some(hit) = self.memo.get(&(t as *const Term)) {
                return Ok(hit.clone());
            }
        }
        let (v, s) = self.term_uncached(t)?;
        if closed {
            self.memo.insert(t as *const Term, (v.clone(), s.clone()));
        }
        Ok((v, s))
    }

    fn term_uncached(&mut self, t: &Term) -> Result<(SymVal, Sort), GroundError> {
        let m = Sort::m();
        let (nc, nw) = (self.scope.c, self.scope.w);
        let points = self.scope.points();
        Ok(match t {
            Term::Top => (SymVal::Const(crate::semantics::interp::full_mask(points)), m),
            Term::Bot => (SymVal::Const(0), m),
            Term::Var(x, _) => self.lookup(x)?,
            Term::Const(..) | Term::App(..) => self.application(t)?,
            Term::Un(UnOp::Not, a) => {
                let (v, _) = self.term(a)?;
                if let SymVal::Const(x) = v {
                    return Ok((SymVal::Const(!x & crate::semantics::interp::full_mask(points)), m));
                }
                let b = self.bits(&v, &m)?;
                (SymVal::Bits(b.into_iter().map(|l| !l).collect()), m)
            }
            Term::Un(op, a) => {
                let (v, _) = self.term(a)?;
                let a = self.bits(&v, &m)?;
                (SymVal::Bits(self.modal(*op, &a)?), m)
            }
            Term::Bin(op, a, b) => {
                let (va, _) = self.term(a)?;
                let (vb, _) = self.term(b)?;
                let a = self.bits(&va, &m)?;
                let b = self.bits(&vb, &m)?;
                let out = a
                    .iter()
                    .zip(&b)
                    .map(|(&x, &y)| match op {
                        BinOp::And => self.g.and2(x, y),
                        BinOp::Or => self.g.or2(x, y),
                        BinOp::Imp => self.g.imp(x, y),
                        BinOp::Iff => self.g.iff(x, y),
                    })
                    .collect();
                (SymVal::Bits(out), m)
            }
            Term::Ob(a, b) => {
                let (va, _) = self.term(a)?;
                let (vb, _) = self.term(b)?;
                let phi = self.bits(&va, &m)?;
                let sigma = self.bits(&vb, &m)?;
                let mut out = Vec::with_capacity(points as usize);
                for c in 0..nc {
                    let row = |v: &[Lit]| v[(c * nw) as usize..((c + 1) * nw) as usize].to_vec();
                    let (p, s) = (row(&phi), row(&sigma));
                    let mut terms = Vec::new();
                    for x in 0..1u64 << nw {
                        let ex = self.eq_row(&s, x);
                        if ex == self.g.ff() {
                            continue;
                        }
                        let o = self.in_ob(x, &p);
                        terms.push(self.g.and2(ex, o));
                    }
                    let l = self.g.or(terms);
                    out.extend(std::iter::repeat(l).take(nw as usize));
                }
                (SymVal::Bits(out), m)
            }
            Term::Quant(q, x, s, body) => {
                let n = self.size(s)?;
                let mut rows: Vec<Vec<Lit>> = Vec::with_capacity(n as usize);
                for v in 0..n {
                    self.env.push((x.clone(), s.clone(), SymVal::Const(v)));
                    let r = self.term(body);
                    self.env.pop();
                    let (bv, _) = r?;
                    let b = self.bits(&bv, &m)?;
                    let stop = b.iter().all(|&l| l == self.g.constant(*q == Quant::Exists));
                    rows.push(b);
                    if stop {
                        break;
                    }
                }
                let out = (0..points as usize)
                    .map(|i| {
                        let col: Vec<Lit> = rows.iter().map(|r| r[i]).collect();
                        match q {
                            Quant::Forall => self.g.and(col),
                            Quant::Exists => self.g.or(col),
                        }
                    })
                    .collect();
                (SymVal::Bits(out), m)
            }
        })
    }

    /// Literal for "the row `r` (a set of worlds) equals `x`".
    fn eq_row(&mut self, r: &[Lit], x: u64) -> Lit {
        let lits: Vec<Lit> = r.iter().enumerate().map(|(i, &l)| if x >> i & 1 == 1 { l } else { !l }).collect();
        self.g.and(lits)
    }

    /// Literal for "the set `y` denoted by `r` belongs to ob(x)".
    fn in_ob(&mut self, x: u64, r: &[Lit]) -> Lit {
        let mut terms = Vec::new();
        for y in 0..1u64 << r.len() {
            let ey = self.eq_row(r, y);
            if ey == self.g.ff() {
                continue;
            }
            let o = self.map.ob(x, y).positive();
            terms.push(self.g.and2(ey, o));
        }
        self.g.or(terms)
    }

    /// Literal for "acc(w) equals `x`" over the av or pv row of `w`.
    fn eq_acc(&mut self, actual: bool, w: u32, x: u64) -> Lit {
        let nw = self.scope.w;
        let lits: Vec<Lit> = (0..nw)
            .map(|v| {
                let var = if actual { self.map.av(w, v) } else { self.map.pv(w, v) };
                if x >> v & 1 == 1 {
                    var.positive()
                } else {
                    var.negative()
                }
            })
            .collect();
        self.g.and(lits)
    }

    /// Literal for "φ holds at context c's own world".
    fn at_world(&mut self, a: &[Lit], c: u32) -> Lit {
        let nw = self.scope.w;
        let terms: Vec<Lit> = (0..nw)
            .map(|w| (self.map.world_of(c, w).positive(), a[(c * nw + w) as usize]))
            .collect::<Vec<_>>()
            .into_iter()
            .map(|(s, v)| self.g.and2(s, v))
            .collect();
        self.g.or(terms)
    }

    fn modal(&mut self, op: UnOp, a: &[Lit]) -> Result<Vec<Lit>, GroundError> {
        let (nc, nw) = (self.scope.c, self.scope.w);
        let mut out = Vec::with_capacity(a.len());
        match op {
            UnOp::BoxA | UnOp::DiaA | UnOp::BoxP | UnOp::DiaP => {
                let actual = matches!(op, UnOp::BoxA | UnOp::DiaA);
                let boxed = matches!(op, UnOp::BoxA | UnOp::BoxP);
                for c in 0..nc {
                    for w in 0..nw {
                        let mut terms = Vec::with_capacity(nw as usize);
                        for v in 0..nw {
                            let acc = if actual { self.map.av(w, v) } else { self.map.pv(w, v) }.positive();
                            let phi = a[(c * nw + v) as usize];
                            terms.push(if boxed { self.g.imp(acc, phi) } else { self.g.and2(acc, phi) });
                        }
                        out.push(if boxed { self.g.and(terms) } else { self.g.or(terms) });
                    }
                }
            }
            UnOp::ObA | UnOp::ObI => {
                let actual = op == UnOp::ObA;
                for c in 0..nc {
                    let row = a[(c * nw) as usize..((c + 1) * nw) as usize].to_vec();
                    let mut per_x = Vec::with_capacity(1 << nw);
                    for x in 0..1u64 << nw {
                        let o = self.in_ob(x, &row);
                        // some world of x falsifies φ
                        let outside: Vec<Lit> = (0..nw).filter(|v| x >> v & 1 == 1).map(|v| !row[v as usize]).collect();
                        let outside = self.g.or(outside);
                        per_x.push(self.g.and2(o, outside));
                    }
                    for w in 0..nw {
                        let mut terms = Vec::new();
                        for x in 0..1u64 << nw {
                            if per_x[x as usize] == self.g.ff() {
                                continue;
                            }
                            let e = self.eq_acc(actual, w, x);
                            terms.push(self.g.and2(e, per_x[x as usize]));
                        }
                        out.push(self.g.or(terms));
                    }
                }
            }
            UnOp::BoxD => {
                let each: Vec<Lit> = (0..nc).map(|c| self.at_world(a, c)).collect();
                let all = self.g.and(each);
                out = vec![all; a.len()];
            }
            UnOp::Not => unreachable!("handled by the caller"),
        }
        Ok(out)
    }

    fn application(&mut self, t: &Term) -> Result<(SymVal, Sort), GroundError> {
        let (head, args) = t.spine();
        let mut vals = Vec::with_capacity(args.len());
        for a in &args {
            vals.push(self.term(a)?);
        }
        let (mut cur, mut sort, rest) = match head {
            Term::Const(k, _) if self.st.theory.def(k).is_some() => {
                let def = self.st.theory.def(k).unwrap();
                let n = def.params.len();
                let consts: Option<Vec<u64>> = vals[..n]
                    .iter()
                    .map(|(v, _)| if let SymVal::Const(x) = v { Some(*x) } else { None })
                    .collect();
                let sort = (0..n).fold(self.st.def_sorts[k.as_str()].clone(), |s, _| s.codomain().unwrap().clone());
                let key = consts.map(|c| (k.clone(), c));
                let cached = key.as_ref().and_then(|key| self.calls.get(key)).cloned();
                let v = match cached {
                    Some(v) => v,
                    None => {
                        let saved = std::mem::take(&mut self.env);
                        for ((x, s), (v, _)) in def.params.iter().zip(&vals[..n]) {
                            self.env.push((x.clone(), s.clone(), v.clone()));
                        }
                        let r = self.term(&def.body);
                        self.env = saved;
                        let (v, _) = r?;
                        if let Some(key) = key {
                            self.calls.insert(key, v.clone());
                        }
                        v
                    }
                };
                (v, sort, n)
            }
            Term::Const(k, _) => {
                let (v, s) = self.table_value(k)?;
                (v, s, 0)
            }
            other => {
                let (v, s) = self.term(other)?;
                (v, s, 0)
            }
        };
        for (a, _) in &vals[rest..] {
            let next = self.apply(&cur, &sort, a)?;
            sort = sort.codomain().expect("sort-checked application").clone();
            cur = next;
        }
        Ok((cur, sort))
    }

    /// Literal for the truth of a meta formula.
    pub fn meta(&mut self, m: &Meta) -> Result<Lit, GroundError> {
        let ms = Sort::m();
        let (nc, nw) = (self.scope.c, self.scope.w);
        Ok(match m {
            Meta::Valid(t) => {
                let (v, _) = self.term(t)?;
                let b = self.bits(&v, &ms)?;
                self.g.and(b)
            }
            Meta::ValidD(t) => {
                let (v, _) = self.term(t)?;
                let b = self.bits(&v, &ms)?;
                let each: Vec<Lit> = (0..nc).map(|c| self.at_world(&b, c)).collect();
                self.g.and(each)
            }
            Meta::ValidCtx(t, ctx) | Meta::AtCtx(t, ctx) => {
                let (v, _) = self.term(t)?;
                let b = self.bits(&v, &ms)?;
                let (cv, _) = self.term(ctx)?;
                let cases = self.cases(&cv, &Sort::C)?;
                let mut terms = Vec::with_capacity(cases.len());
                for (c, sel) in cases {
                    let c = c as u32;
                    let holds = if matches!(m, Meta::ValidCtx(..)) {
                        let row = b[(c * nw) as usize..((c + 1) * nw) as usize].to_vec();
                        self.g.and(row)
                    } else {
                        self.at_world(&b, c)
                    };
                    terms.push(self.g.and2(sel, holds));
                }
                self.g.or(terms)
            }
            Meta::Imp(a, b) => {
                let a = self.meta(a)?;
                if a == self.g.ff() {
                    return Ok(self.g.tt());
                }
                let b = self.meta(b)?;
                self.g.imp(a, b)
            }
            Meta::And(a, b) => {
                let a = self.meta(a)?;
                if a == self.g.ff() {
                    return Ok(a);
                }
                let b = self.meta(b)?;
                self.g.and2(a, b)
            }
            Meta::ForallCtx(x, body) => {
                let mut each = Vec::with_capacity(nc as usize);
                for c in 0..nc {
                    self.env.push((x.clone(), Sort::C, SymVal::Const(c as u64)));
                    let r = self.meta(body);
                    self.env.pop();
                    each.push(r?);
                }
                self.g.and(each)
            }
        })
    }

    /// Literal for `m` universally closed over `free`.
    pub fn closed_meta(&mut self, m: &Meta, free: &[(String, Sort)]) -> Result<Lit, GroundError> {
        let Some(((x, s), rest)) = free.split_first() else {
            return self.meta(m);
        };
        let n = self.size(s)?;
        let mut each = Vec::with_capacity(n as usize);
        for v in 0..n {
            self.env.push((x.clone(), s.clone(), SymVal::Const(v)));
            let r = self.closed_meta(m, rest);
            self.env.pop();
            let l = r?;
            if l == self.g.ff() {
                return Ok(l);
            }
            each.push(l);
        }
        Ok(self.g.and(each))
    }
}

/// Nested image vectors over the argument sizes, first argument outermost.
fn curry(cells: &[SymVal], sizes: &[u64]) -> SymVal {
    match sizes.split_first() {
        None => cells[0].clone(),
        Some((&n, rest)) => {
            let chunk = cells.len() / n as usize;
            SymVal::Fun(Rc::new((0..n as usize).map(|i| curry(&cells[i * chunk..(i + 1) * chunk], rest)).collect()))
        }
    }
}
