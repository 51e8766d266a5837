use std::collections::BTreeSet;

use thiserror::Error;

use crate::scope::Scope;
use crate::semantics::query::active_axioms;
use crate::surface::{parse_manifest, parse_theory, sort_check, Expect, Meta, SortedTheory, SurfaceError, Term};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ManifestError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("entry `{entry}` has no `{attr}` attribute")]
    MissingAttr { entry: String, attr: &'static str },
    #[error("entry `{entry}` refers to unknown goal `{goal}`")]
    UnknownGoal { entry: String, goal: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    /// The goal whose formula is checked: the entry itself or its `query`.
    pub goal: String,
    pub kind: Expect,
    /// Exact scope for `sat`, ceiling for the other kinds.
    pub scope: Scope,
    pub anchor: String,
    pub axioms: Vec<String>,
    /// Reconstructed definitions the entry depends on.
    pub reconstructed: Vec<String>,
}

/// A theory together with the entries to run against it. The entries are
/// goals of `theory`.
#[derive(Clone, Debug)]
pub struct Manifest {
    pub theory: SortedTheory,
    pub entries: Vec<CorpusEntry>,
}

impl Manifest {
    /// The bundled Gewirth theory and manifest.
    pub fn builtin() -> Manifest {
        Manifest::parse(super::GEWIRTH, super::MANIFEST).expect("bundled corpus is well-formed")
    }

    pub fn parse(theory: &str, manifest: &str) -> Result<Manifest, ManifestError> {
        let mut t = parse_theory(theory)?;
        let goals = parse_manifest(&t, manifest)?;
        let names: Vec<String> = goals.iter().map(|g| g.name.clone()).collect();
        t.goals.extend(goals);
        let st = sort_check(&t)?;
        let entries = names.iter().map(|n| entry(&st, n)).collect::<Result<_, _>>()?;
        Ok(Manifest { theory: st, entries })
    }

    pub fn entry(&self, name: &str) -> Option<&CorpusEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn entry(st: &SortedTheory, name: &str) -> Result<CorpusEntry, ManifestError> {
    let g = st.theory.goal(name).expect("entry was just added");
    let missing = |attr| ManifestError::MissingAttr {
        entry: name.to_string(),
        attr,
    };
    let kind = g.attrs.expect.ok_or_else(|| missing("expect"))?;
    let scope = g.attrs.scope.ok_or_else(|| missing("scope"))?;
    let anchor = g.attrs.anchor.clone().ok_or_else(|| missing("anchor"))?;
    let mut goal = name.to_string();
    let mut seen = BTreeSet::new();
    loop {
        let unknown = || ManifestError::UnknownGoal {
            entry: name.to_string(),
            goal: goal.clone(),
        };
        let g = st.theory.goal(&goal).ok_or_else(unknown)?;
        match (&g.formula, &g.attrs.query) {
            (None, Some(q)) if seen.insert(goal.clone()) => goal = q.clone(),
            (None, _) => return Err(unknown()),
            (Some(_), _) => break,
        }
    }
    let axioms = active_axioms(st, g.attrs.using.as_deref(), &g.attrs.without);
    let mut used = BTreeSet::new();
    if let Some((m, _)) = st.goal_formula(name) {
        meta_names(m, &mut used);
    }
    for a in &axioms {
        if let Some(ax) = st.theory.axiom(a) {
            meta_names(&ax.formula, &mut used);
        }
    }
    let reconstructed = reachable_defs(st, used)
        .into_iter()
        .filter(|d| st.theory.def(d).is_some_and(|d| d.reconstructed))
        .collect();
    Ok(CorpusEntry {
        name: name.to_string(),
        goal,
        kind,
        scope,
        anchor,
        axioms,
        reconstructed,
    })
}

fn term_names(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Const(k, _) => {
            out.insert(k.clone());
        }
        Term::Var(..) | Term::Top | Term::Bot => {}
        Term::App(a, b) | Term::Bin(_, a, b) | Term::Ob(a, b) => {
            term_names(a, out);
            term_names(b, out);
        }
        Term::Un(_, a) | Term::Quant(_, _, _, a) => term_names(a, out),
    }
}

fn meta_names(m: &Meta, out: &mut BTreeSet<String>) {
    match m {
        Meta::Valid(t) | Meta::ValidD(t) => term_names(t, out),
        Meta::ValidCtx(t, c) | Meta::AtCtx(t, c) => {
            term_names(t, out);
            term_names(c, out);
        }
        Meta::Imp(a, b) | Meta::And(a, b) => {
            meta_names(a, out);
            meta_names(b, out);
        }
        Meta::ForallCtx(_, b) => meta_names(b, out),
    }
}

/// Definitions reachable from `names` through definition bodies.
fn reachable_defs(st: &SortedTheory, names: BTreeSet<String>) -> BTreeSet<String> {
    let mut todo: Vec<String> = names.into_iter().collect();
    let mut seen = BTreeSet::new();
    while let Some(n) = todo.pop() {
        if let Some(d) = st.theory.def(&n) {
            if seen.insert(n) {
                let mut inner = BTreeSet::new();
                term_names(&d.body, &mut inner);
                todo.extend(inner);
            }
        }
    }
    seen
}
