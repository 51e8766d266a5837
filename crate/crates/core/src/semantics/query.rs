use std::collections::{BTreeMap, BTreeSet};

use crate::scope::Scope;
use crate::semantics::eval::{MetaId, Program, Store, V};
use crate::semantics::interp::{Interpretation, Vocabulary};
use crate::semantics::SemanticsError;
use crate::surface::subst::fresh_name;
use crate::surface::{Meta, Sort, SortedTheory, Term, BUILTINS};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Look for a model of the axioms and the goal.
    Satisfy,
    /// Look for a model of the axioms in which the goal fails.
    Refute,
}

/// A meta formula required to hold (or, when `negate`, to fail), closed
/// universally over `free`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub meta: Meta,
    pub free: Vec<(String, Sort)>,
    pub negate: bool,
}

/// A search problem: active axioms plus a goal, over the vocabulary they
/// mention. In refute mode the goal's free variables become fresh constants
/// (skolems) so that a countermodel shows the falsifying values.
#[derive(Clone, Debug)]
pub struct Query {
    pub theory: SortedTheory,
    pub mode: Mode,
    pub axioms: Vec<Constraint>,
    pub goal: Constraint,
    pub vocabulary: Vocabulary,
    pub skolems: Vec<String>,
}

impl Query {
    pub fn new(
        st: &SortedTheory,
        goal_name: &str,
        goal: &Meta,
        goal_free: &[(String, Sort)],
        axioms: &[String],
        mode: Mode,
    ) -> Result<Query, SemanticsError> {
        let mut constraints = Vec::new();
        for name in axioms {
            let a = st
                .theory
                .axiom(name)
                .ok_or_else(|| SemanticsError::UnknownItem { name: name.clone() })?;
            constraints.push(Constraint {
                name: name.clone(),
                meta: a.formula.clone(),
                free: st.axiom_free.get(name).cloned().unwrap_or_default(),
                negate: false,
            });
        }
        let mut vocab = Vocabulary::new();
        for c in &constraints {
            meta_constants(st, &c.meta, &mut vocab);
        }
        meta_constants(st, goal, &mut vocab);

        let mut skolems = Vec::new();
        let goal = match mode {
            Mode::Satisfy => Constraint {
                name: goal_name.to_string(),
                meta: goal.clone(),
                free: goal_free.to_vec(),
                negate: false,
            },
            Mode::Refute => {
                let mut taken: BTreeSet<String> = st.theory.signature.iter().map(|(n, _)| n.to_string()).collect();
                taken.extend(st.theory.defs.iter().map(|d| d.name.clone()));
                let mut meta = goal.clone();
                for (x, s) in goal_free {
                    let k = if taken.contains(x) { fresh_name(x, &taken) } else { x.clone() };
                    taken.insert(k.clone());
                    meta = crate::surface::subst::substitute_meta(&meta, x, &Term::cnst(&k));
                    vocab.insert(k.clone(), s.clone());
                    skolems.push(k);
                }
                Constraint {
                    name: goal_name.to_string(),
                    meta,
                    free: Vec::new(),
                    negate: true,
                }
            }
        };
        Ok(Query {
            theory: st.clone(),
            mode,
            axioms: constraints,
            goal,
            vocabulary: vocab,
            skolems,
        })
    }

    /// The query a named goal denotes: its formula (following `query`
    /// references) against the axioms selected by `using` and `without`.
    pub fn for_goal(st: &SortedTheory, goal_name: &str, mode: Mode) -> Result<Query, SemanticsError> {
        let unknown = || SemanticsError::UnknownItem {
            name: goal_name.to_string(),
        };
        let g = st.theory.goal(goal_name).ok_or_else(unknown)?;
        let (meta, free) = st.goal_formula(goal_name).ok_or_else(unknown)?;
        let axioms = active_axioms(st, g.attrs.using.as_deref(), &g.attrs.without);
        Query::new(st, goal_name, meta, free, &axioms, mode)
    }

    /// All constraints, axioms first.
    pub fn constraints(&self) -> impl Iterator<Item = &Constraint> {
        self.axioms.iter().chain(std::iter::once(&self.goal))
    }

    pub fn compile(&self, scope: Scope) -> Result<CompiledQuery, SemanticsError> {
        let mut program = Program::new(&self.theory, scope, &self.vocabulary)?;
        let mut parts = Vec::new();
        for c in self.constraints() {
            parts.push((program.compile_closed(&c.meta, &c.free)?, c.negate));
        }
        Ok(CompiledQuery { program, parts })
    }

    /// True iff `i` satisfies every axiom and the goal requirement.
    pub fn accepts(&self, i: &Interpretation) -> Result<bool, SemanticsError> {
        self.compile(i.scope)?.accepts(i)
    }
}

/// Axiom names selected by `using` (all when absent) minus `without`, in
/// theory order.
pub fn active_axioms(st: &SortedTheory, using: Option<&[String]>, without: &[String]) -> Vec<String> {
    st.theory
        .axioms
        .iter()
        .map(|a| a.name.clone())
        .filter(|n| using.map_or(true, |u| u.contains(n)))
        .filter(|n| !without.contains(n))
        .collect()
}

pub struct CompiledQuery {
    pub program: Program,
    parts: Vec<(MetaId, bool)>,
}

impl CompiledQuery {
    /// Three-valued conjunction of all constraints.
    pub fn eval<S: Store>(&self, store: &S) -> V {
        let mut acc = V::known(1);
        for &(m, negate) in &self.parts {
            let mut v = self.program.eval_meta(store, m, &[]);
            if negate {
                v = V { lo: 1 - v.hi, hi: 1 - v.lo };
            }
            acc = V {
                lo: acc.lo & v.lo,
                hi: acc.hi & v.hi,
            };
            if acc.hi == 0 {
                break;
            }
        }
        acc
    }

    pub fn accepts(&self, i: &Interpretation) -> Result<bool, SemanticsError> {
        let store = crate::semantics::eval::InterpStore::new(&self.program, i)?;
        Ok(self.eval(&store).lo == 1)
    }

    /// Truth of each constraint separately, in order.
    pub fn each(&self, i: &Interpretation) -> Result<Vec<bool>, SemanticsError> {
        let store = crate::semantics::eval::InterpStore::new(&self.program, i)?;
        Ok(self
            .parts
            .iter()
            .map(|&(m, _)| self.program.holds(&store, m, &[]))
            .collect())
    }
}

/// Adds the constants `t` mentions, looking through definitions, to `out`.
pub fn term_constants(st: &SortedTheory, t: &Term, out: &mut Vocabulary) {
    let mut seen = BTreeSet::new();
    collect(st, t, out, &mut seen);
}

fn collect(st: &SortedTheory, t: &Term, out: &mut BTreeMap<String, Sort>, seen_defs: &mut BTreeSet<String>) {
    match t {
        Term::Const(k, _) => {
            if let Some(d) = st.theory.def(k) {
                if seen_defs.insert(k.clone()) {
                    collect(st, &d.body, out, seen_defs);
                }
            } else if !BUILTINS.contains(&k.as_str()) {
                if let Some(s) = st.theory.signature.get(k) {
                    out.insert(k.clone(), s.clone());
                }
            }
        }
        Term::Var(..) | Term::Top | Term::Bot => {}
        Term::App(a, b) | Term::Bin(_, a, b) | Term::Ob(a, b) => {
            collect(st, a, out, seen_defs);
            collect(st, b, out, seen_defs);
        }
        Term::Un(_, a) | Term::Quant(_, _, _, a) => collect(st, a, out, seen_defs),
    }
}

pub fn meta_constants(st: &SortedTheory, m: &Meta, out: &mut Vocabulary) {
    match m {
        Meta::Valid(t) | Meta::ValidD(t) => term_constants(st, t, out),
        Meta::ValidCtx(t, c) | Meta::AtCtx(t, c) => {
            term_constants(st, t, out);
            term_constants(st, c, out);
        }
        Meta::Imp(a, b) | Meta::And(a, b) => {
            meta_constants(st, a, out);
            meta_constants(st, b, out);
        }
        Meta::ForallCtx(_, b) => meta_constants(st, b, out),
    }
}
