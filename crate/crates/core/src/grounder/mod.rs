//! Grounding of a query at a scope into CNF over bit variables for the
//! frame and the constant tables, and the way back from assignments to
//! interpretations.

pub mod frame;
pub mod gates;
pub mod symbolic;
pub mod varmap;

use deon_sat::{to_dimacs_string, Cnf, Var};
use thiserror::Error;

use crate::scope::Scope;
use crate::semantics::canonical::Renaming;
use crate::semantics::conditions::{frame_conditions_check, ConditionSet};
use crate::semantics::interp::{check_scope, Interpretation};
use crate::semantics::query::Query;
use crate::semantics::{universe_size, SemanticsError};
use crate::surface::{Meta, Sort, Term};

pub use varmap::{Cell, PropVarMap};

/// Default bound on the estimated number of ground cells.
pub const DEFAULT_CELL_BUDGET: u64 = 1 << 20;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GroundError {
    #[error("scope {scope} needs about {cells} ground cells, over the budget of {budget}")]
    ScopeTooLarge { scope: Scope, cells: u64, budget: u64 },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("assignment covers {got} of {expected} primary variables")]
    IncompleteAssignment { expected: u32, got: usize },
    #[error("assignment breaks the selector group of {cell}")]
    BadSelector { cell: String },
    #[error("internal error: model fails re-verification ({detail})")]
    VerificationFailed { detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundOptions {
    pub cell_budget: u64,
    /// Adds lex-leader constraints for swaps of adjacent worlds, contexts
    /// and individuals.
    pub symmetry_breaking: bool,
}

impl Default for GroundOptions {
    fn default() -> Self {
        GroundOptions {
            cell_budget: DEFAULT_CELL_BUDGET,
            symmetry_breaking: false,
        }
    }
}

/// A grounded query. Variables `0..var_map.len()` are primary, the next one
/// is the constant true, the rest are gate outputs.
#[derive(Clone, Debug)]
pub struct PropProblem {
    pub var_map: PropVarMap,
    pub cnf: Cnf,
    pub aux_count: u32,
    pub query: Query,
    pub conditions: ConditionSet,
    pub symmetry_breaking: bool,
}

impl PropProblem {
    pub fn scope(&self) -> Scope {
        self.var_map.scope
    }

    pub fn num_primary(&self) -> u32 {
        self.var_map.len()
    }

    /// DIMACS text with a comment block naming every primary variable.
    pub fn dimacs(&self) -> String {
        let mut comments = vec![
            format!("goal {} ({:?})", self.query.goal.name, self.query.mode),
            format!("scope {}", self.scope()),
            format!("conditions {}", self.conditions.names().join(" ")),
            format!("primary {} aux {}", self.num_primary(), self.aux_count),
        ];
        comments.extend(self.var_map.comments());
        comments.push(format!("v {} true", self.num_primary() + 1));
        to_dimacs_string(&self.cnf, &comments)
    }
}

fn saturating_size(s: &Sort, scope: Scope) -> u64 {
    universe_size(s, scope).unwrap_or(u64::MAX)
}

/// Ground cells the expansion of `t` produces, times `mult`.
fn term_cells(q: &Query, t: &Term, mult: u64, scope: Scope, depth: u32) -> u64 {
    let here = mult.saturating_mul(scope.points() as u64);
    let sub = |t: &Term, m: u64| term_cells(q, t, m, scope, depth + 1);
    if depth > 64 {
        return u64::MAX;
    }
    match t {
        Term::Top | Term::Bot | Term::Var(..) => here,
        Term::Const(k, _) => match q.theory.theory.def(k) {
            Some(d) => here.saturating_add(sub(&d.body, mult)),
            None => here,
        },
        Term::App(a, b) | Term::Bin(_, a, b) | Term::Ob(a, b) => here.saturating_add(sub(a, mult)).saturating_add(sub(b, mult)),
        Term::Un(_, a) => here.saturating_add(sub(a, mult)),
        Term::Quant(_, _, s, body) => here.saturating_add(sub(body, mult.saturating_mul(saturating_size(s, scope)))),
    }
}

fn meta_cells(q: &Query, m: &Meta, mult: u64, scope: Scope) -> u64 {
    match m {
        Meta::Valid(t) | Meta::ValidD(t) => term_cells(q, t, mult, scope, 0),
        Meta::ValidCtx(t, c) | Meta::AtCtx(t, c) => term_cells(q, t, mult, scope, 0).saturating_add(term_cells(q, c, mult, scope, 0)),
        Meta::Imp(a, b) | Meta::And(a, b) => meta_cells(q, a, mult, scope).saturating_add(meta_cells(q, b, mult, scope)),
        Meta::ForallCtx(_, body) => meta_cells(q, body, mult.saturating_mul(scope.c as u64), scope),
    }
}

/// Estimated number of ground cells: primary variables plus the expanded
/// size of every constraint.
pub fn estimate_cells(q: &Query, scope: Scope) -> u64 {
    let mut total = PropVarMap::closed_form(scope, &q.vocabulary).unwrap_or(u64::MAX);
    for c in q.constraints() {
        let mult = c
            .free
            .iter()
            .fold(1u64, |acc, (_, s)| acc.saturating_mul(saturating_size(s, scope)));
        total = total.saturating_add(meta_cells(q, &c.meta, mult, scope));
    }
    total
}

/// Grounds `q` at `scope`: a total assignment satisfies the result iff the
/// interpretation it encodes meets `cs` and `q`.
pub fn ground(q: &Query, scope: Scope, cs: &ConditionSet, opts: &GroundOptions) -> Result<PropProblem, GroundError> {
    check_scope(scope)?;
    let cells = estimate_cells(q, scope);
    if cells > opts.cell_budget {
        return Err(GroundError::ScopeTooLarge {
            scope,
            cells,
            budget: opts.cell_budget,
        });
    }
    let map = PropVarMap::new(scope, &q.vocabulary)?;
    let mut g = gates::Gates::new(map.len());
    frame::frame_clauses(&mut g, &map, cs);
    if opts.symmetry_breaking {
        symmetry_clauses(&mut g, &map);
    }
    let mut gr = symbolic::Grounder::new(&q.theory, &map, g);
    for c in q.constraints() {
        let l = gr.closed_meta(&c.meta, &c.free)?;
        gr.g.assert(if c.negate { !l } else { l });
    }
    let g = gr.g;
    Ok(PropProblem {
        aux_count: g.aux,
        cnf: g.cnf,
        var_map: map,
        query: q.clone(),
        conditions: cs.clone(),
        symmetry_breaking: opts.symmetry_breaking,
    })
}

/// Transpositions of adjacent labels of each carrier.
pub fn adjacent_swaps(scope: Scope) -> Vec<Renaming> {
    let mut out = Vec::new();
    let swap = |n: u32, i: u32| -> Vec<u32> {
        let mut p: Vec<u32> = (0..n).collect();
        p.swap(i as usize, i as usize + 1);
        p
    };
    let id = Renaming::identity(scope);
    for i in 0..scope.w.saturating_sub(1) {
        out.push(Renaming { w: swap(scope.w, i), ..id.clone() });
    }
    for i in 0..scope.c.saturating_sub(1) {
        out.push(Renaming { c: swap(scope.c, i), ..id.clone() });
    }
    for i in 0..scope.e.saturating_sub(1) {
        out.push(Renaming { e: swap(scope.e, i), ..id.clone() });
    }
    out
}

/// For each adjacent swap σ, the assignment must be lexicographically no
/// greater than its image under σ; the least member of every isomorphism
/// class survives.
fn symmetry_clauses(g: &mut gates::Gates, map: &PropVarMap) {
    for r in adjacent_swaps(map.scope) {
        let mut prefix_equal = g.tt();
        for i in 0..map.len() {
            let x = Var(i);
            let y = map.image(x, &r);
            if x == y {
                continue;
            }
            let (xl, yl) = (x.positive(), y.positive());
            g.clause([!prefix_equal, !xl, yl]);
            let same = g.iff(xl, yl);
            prefix_equal = g.and2(prefix_equal, same);
            if prefix_equal == g.ff() {
                break;
            }
        }
    }
}

/// The interpretation a total assignment encodes.
pub fn reconstruct_model(p: &PropProblem, assignment: &[bool]) -> Result<Interpretation, GroundError> {
    let m = &p.var_map;
    let s = m.scope;
    if assignment.len() < m.len() as usize {
        return Err(GroundError::IncompleteAssignment {
            expected: m.len(),
            got: assignment.len(),
        });
    }
    let at = |v: Var| assignment[v.index()];
    let mut i = Interpretation::blank(s, &p.query.vocabulary)?;
    for w in 0..s.w {
        for v in 0..s.w {
            i.frame.av[w as usize] |= (at(m.av(w, v)) as u64) << v;
            i.frame.pv[w as usize] |= (at(m.pv(w, v)) as u64) << v;
        }
    }
    for x in 0..1u64 << s.w {
        for y in 0..1u64 << s.w {
            i.frame.ob[x as usize] |= (at(m.ob(x, y)) as u64) << y;
        }
    }
    let one = |vars: Vec<Var>, cell: Cell| -> Result<u32, GroundError> {
        let set: Vec<usize> = vars.iter().enumerate().filter(|(_, &v)| at(v)).map(|(k, _)| k).collect();
        match set[..] {
            [k] => Ok(k as u32),
            _ => Err(GroundError::BadSelector { cell: m.describe(&cell) }),
        }
    };
    for c in 0..s.c {
        i.frame.world_of[c as usize] = one((0..s.w).map(|w| m.world_of(c, w)).collect(), Cell::WorldOf { c, w: 0 })?;
        i.frame.agent_of[c as usize] = one((0..s.e).map(|e| m.agent_of(c, e)).collect(), Cell::AgentOf { c, e: 0 })?;
    }
    for (k, t) in m.tables.iter().enumerate() {
        let table = i.table_mut(&t.name).expect("vocabulary table");
        for cell in 0..t.table.cells.len() {
            let vars: Vec<Var> = (0..t.width).map(|b| m.table_var(k, cell, b)).collect();
            table.cells[cell] = if t.one_hot {
                one(vars, Cell::Table { table: k, cell, bit: 0 })? as u64
            } else {
                vars.iter().enumerate().fold(0, |acc, (b, &v)| acc | (at(v) as u64) << b)
            };
        }
    }
    Ok(i)
}

/// Re-checks a reconstructed model against the frame conditions and the
/// query with the reference evaluator.
pub fn verify_model(p: &PropProblem, i: &Interpretation) -> Result<(), GroundError> {
    let violations = frame_conditions_check(i, &p.conditions);
    if let Some(v) = violations.first() {
        return Err(GroundError::VerificationFailed {
            detail: format!("{} violated at {}", v.condition, v.description),
        });
    }
    if !p.query.accepts(i)? {
        return Err(GroundError::VerificationFailed {
            detail: format!("query `{}` rejects the model", p.query.goal.name),
        });
    }
    Ok(())
}

/// Clause forbidding `i` in terms of the primary variables.
pub fn blocking_clause(p: &PropProblem, assignment: &[bool]) -> Vec<deon_sat::Lit> {
    deon_sat::block_all(assignment, p.num_primary() as usize)
}

/// The assignment to the primary variables that encodes `i`.
pub fn encode_model(p: &PropProblem, i: &Interpretation) -> Vec<bool> {
    let m = &p.var_map;
    let s = m.scope;
    let mut a = vec![false; m.len() as usize];
    for w in 0..s.w {
        for v in 0..s.w {
            a[m.av(w, v).index()] = i.frame.av[w as usize] >> v & 1 == 1;
            a[m.pv(w, v).index()] = i.frame.pv[w as usize] >> v & 1 == 1;
        }
    }
    for x in 0..1u64 << s.w {
        for y in 0..1u64 << s.w {
            a[m.ob(x, y).index()] = i.frame.in_ob(x, y);
        }
    }
    for c in 0..s.c {
        a[m.world_of(c, i.frame.world_of[c as usize]).index()] = true;
        a[m.agent_of(c, i.frame.agent_of[c as usize]).index()] = true;
    }
    for (k, t) in m.tables.iter().enumerate() {
        let cells = &i.tables[&t.name].cells;
        for (cell, &v) in cells.iter().enumerate() {
            if t.one_hot {
                a[m.table_var(k, cell, v as u32).index()] = true;
            } else {
                for b in 0..t.width {
                    a[m.table_var(k, cell, b).index()] = v >> b & 1 == 1;
                }
            }
        }
    }
    a
}

#[cfg(test)]
mod tests;
