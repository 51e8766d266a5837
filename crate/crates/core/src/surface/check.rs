use std::collections::{BTreeMap, BTreeSet};

use crate::surface::ast::*;
use crate::surface::error::SurfaceError;
use crate::surface::sort::Sort;
use crate::surface::subst::{fresh_name, free_vars, meta_free_vars, substitute, substitute_meta};

/// A theory that passed sort checking. Binders that shadowed constant or
/// definition names have been renamed apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortedTheory {
    pub theory: Theory,
    /// Curried sort of each definition.
    pub def_sorts: BTreeMap<String, Sort>,
    /// Implicitly universally quantified variables of each axiom, with the
    /// sorts inferred from their uses.
    pub axiom_free: BTreeMap<String, Vec<(String, Sort)>>,
    pub goal_free: BTreeMap<String, Vec<(String, Sort)>>,
}

impl SortedTheory {
    pub fn sort_of_name(&self, name: &str) -> Option<Sort> {
        self.theory
            .signature
            .get(name)
            .cloned()
            .or_else(|| self.def_sorts.get(name).cloned())
    }

    /// The formula a goal checks, following `query` references.
    pub fn goal_formula(&self, name: &str) -> Option<(&Meta, &[(String, Sort)])> {
        let g = self.theory.goal(name)?;
        match (&g.formula, &g.attrs.query) {
            (Some(f), _) => Some((f, self.goal_free.get(name).map(|v| v.as_slice()).unwrap_or(&[]))),
            (None, Some(q)) => self.goal_formula(q),
            (None, None) => None,
        }
    }
}

struct Checker<'a> {
    theory: &'a Theory,
    def_sorts: &'a BTreeMap<String, Sort>,
    item: String,
    env: Vec<(String, Sort)>,
    /// `None` inside definitions, where free variables are errors.
    free: Option<Vec<(String, Sort)>>,
}

impl<'a> Checker<'a> {
    fn mismatch(&self, expected: &Sort, found: Sort, t: &Term) -> SurfaceError {
        SurfaceError::SortMismatch {
            item: self.item.clone(),
            expected: expected.clone(),
            found,
            span: t.span().unwrap_or_default(),
        }
    }

    fn var_sort(&self, x: &str) -> Option<Sort> {
        if let Some((_, s)) = self.env.iter().rev().find(|(n, _)| n == x) {
            return Some(s.clone());
        }
        self.free.as_ref()?.iter().find(|(n, _)| n == x).map(|(_, s)| s.clone())
    }

    fn synth(&mut self, t: &Term) -> Result<Sort, SurfaceError> {
        match t {
            Term::Var(x, span) => self.var_sort(x).ok_or_else(|| SurfaceError::UnboundVariable {
                item: self.item.clone(),
                name: x.clone(),
                span: *span,
            }),
            Term::Const(k, span) => {
                if let Some(s) = self.theory.signature.get(k) {
                    return Ok(s.clone());
                }
                let def = self.theory.def(k).ok_or_else(|| SurfaceError::UnknownName {
                    item: self.item.clone(),
                    kind: "constant",
                    name: k.clone(),
                    span: *span,
                })?;
                if !def.params.is_empty() {
                    return Err(SurfaceError::ArityError {
                        item: self.item.clone(),
                        name: k.clone(),
                        expected: def.params.len(),
                        found: 0,
                        span: *span,
                    });
                }
                Ok(self.def_sorts[k].clone())
            }
            Term::App(..) => {
                let (head, args) = t.spine();
                if let Term::Const(k, span) = head {
                    if let Some(def) = self.theory.def(k) {
                        if def.params.len() != args.len() {
                            return Err(SurfaceError::ArityError {
                                item: self.item.clone(),
                                name: k.clone(),
                                expected: def.params.len(),
                                found: args.len(),
                                span: *span,
                            });
                        }
                        for (a, (_, s)) in args.iter().zip(&def.params) {
                            self.check(a, s)?;
                        }
                        let mut s = &self.def_sorts[k];
                        for _ in 0..args.len() {
                            s = s.codomain().expect("definition sort has its parameters");
                        }
                        return Ok(s.clone());
                    }
                }
                let mut s = self.synth(head)?;
                for (i, a) in args.iter().enumerate() {
                    match s {
                        Sort::Fun(d, c) => {
                            self.check(a, &d)?;
                            s = *c;
                        }
                        _ => {
                            let name = match head {
                                Term::Const(n, _) | Term::Var(n, _) => n.clone(),
                                _ => "application".to_string(),
                            };
                            return Err(SurfaceError::ArityError {
                                item: self.item.clone(),
                                name,
                                expected: i,
                                found: args.len(),
                                span: head.span().unwrap_or_default(),
                            });
                        }
                    }
                }
                Ok(s)
            }
            Term::Top | Term::Bot => Ok(Sort::m()),
            Term::Un(_, a) => {
                self.check(a, &Sort::m())?;
                Ok(Sort::m())
            }
            Term::Bin(_, a, b) | Term::Ob(a, b) => {
                self.check(a, &Sort::m())?;
                self.check(b, &Sort::m())?;
                Ok(Sort::m())
            }
            Term::Quant(_, x, s, body) => {
                self.env.push((x.clone(), s.clone()));
                let r = self.check(body, &Sort::m());
                self.env.pop();
                r?;
                Ok(Sort::m())
            }
        }
    }

    fn check(&mut self, t: &Term, expected: &Sort) -> Result<(), SurfaceError> {
        if let Term::Var(x, _) = t {
            if self.var_sort(x).is_none() {
                if let Some(free) = self.free.as_mut() {
                    free.push((x.clone(), expected.clone()));
                    return Ok(());
                }
            }
        }
        let found = self.synth(t)?;
        if found != *expected {
            return Err(self.mismatch(expected, found, t));
        }
        Ok(())
    }

    fn check_meta(&mut self, m: &Meta) -> Result<(), SurfaceError> {
        match m {
            Meta::Valid(t) | Meta::ValidD(t) => self.check(t, &Sort::m()),
            Meta::ValidCtx(t, c) | Meta::AtCtx(t, c) => {
                self.check(c, &Sort::C)?;
                self.check(t, &Sort::m())
            }
            Meta::Imp(a, b) | Meta::And(a, b) => {
                self.check_meta(a)?;
                self.check_meta(b)
            }
            Meta::ForallCtx(x, body) => {
                self.env.push((x.clone(), Sort::C));
                let r = self.check_meta(body);
                self.env.pop();
                r
            }
        }
    }
}

/// Renames binders whose names are in `taken`.
pub fn rename_binders(t: &Term, taken: &BTreeSet<String>) -> Term {
    match t {
        Term::Var(..) | Term::Const(..) | Term::Top | Term::Bot => t.clone(),
        Term::App(a, b) => Term::app(rename_binders(a, taken), rename_binders(b, taken)),
        Term::Bin(op, a, b) => Term::bin(*op, rename_binders(a, taken), rename_binders(b, taken)),
        Term::Ob(a, b) => Term::ob(rename_binders(a, taken), rename_binders(b, taken)),
        Term::Un(op, a) => Term::un(*op, rename_binders(a, taken)),
        Term::Quant(q, x, s, body) => {
            let body = rename_binders(body, taken);
            if taken.contains(x) {
                let mut avoid = taken.clone();
                avoid.extend(free_vars(&body));
                let y = fresh_name(x, &avoid);
                let body = substitute(&body, x, &Term::var(&y));
                Term::Quant(*q, y, s.clone(), Box::new(body))
            } else {
                Term::Quant(*q, x.clone(), s.clone(), Box::new(body))
            }
        }
    }
}

fn rename_meta_binders(m: &Meta, taken: &BTreeSet<String>) -> Meta {
    let r = |t: &Term| rename_binders(t, taken);
    match m {
        Meta::Valid(t) => Meta::Valid(r(t)),
        Meta::ValidD(t) => Meta::ValidD(r(t)),
        Meta::ValidCtx(t, c) => Meta::ValidCtx(r(t), r(c)),
        Meta::AtCtx(t, c) => Meta::AtCtx(r(t), r(c)),
        Meta::Imp(a, b) => Meta::imp(rename_meta_binders(a, taken), rename_meta_binders(b, taken)),
        Meta::And(a, b) => Meta::and(rename_meta_binders(a, taken), rename_meta_binders(b, taken)),
        Meta::ForallCtx(x, body) => {
            let body = rename_meta_binders(body, taken);
            if taken.contains(x) {
                let mut avoid = taken.clone();
                avoid.extend(meta_free_vars(&body));
                let y = fresh_name(x, &avoid);
                let body = substitute_meta(&body, x, &Term::var(&y));
                Meta::ForallCtx(y, Box::new(body))
            } else {
                Meta::ForallCtx(x.clone(), Box::new(body))
            }
        }
    }
}

pub fn sort_check(t: &Theory) -> Result<SortedTheory, SurfaceError> {
    let mut theory = t.clone();
    let taken: BTreeSet<String> = theory
        .signature
        .iter()
        .map(|(n, _)| n.to_string())
        .chain(theory.defs.iter().map(|d| d.name.clone()))
        .collect();
    for d in &mut theory.defs {
        d.body = rename_binders(&d.body, &taken);
    }
    for a in &mut theory.axioms {
        a.formula = rename_meta_binders(&a.formula, &taken);
    }
    for g in &mut theory.goals {
        if let Some(f) = &g.formula {
            g.formula = Some(rename_meta_binders(f, &taken));
        }
    }

    let mut def_sorts = BTreeMap::new();
    for (i, d) in theory.defs.iter().enumerate() {
        // each definition sees only the definitions before it
        let visible = Theory {
            defs: theory.defs[..i].to_vec(),
            ..theory.clone()
        };
        let mut ck = Checker {
            theory: &visible,
            def_sorts: &def_sorts,
            item: d.name.clone(),
            env: d.params.clone(),
            free: None,
        };
        let body = ck.synth(&d.body)?;
        let full = d.params.iter().rev().fold(body, |acc, (_, s)| Sort::fun(s.clone(), acc));
        def_sorts.insert(d.name.clone(), full);
    }

    let mut axiom_free = BTreeMap::new();
    for a in &theory.axioms {
        let mut ck = Checker {
            theory: &theory,
            def_sorts: &def_sorts,
            item: a.name.clone(),
            env: Vec::new(),
            free: Some(Vec::new()),
        };
        ck.check_meta(&a.formula)?;
        axiom_free.insert(a.name.clone(), ck.free.unwrap());
    }

    let mut goal_free = BTreeMap::new();
    for g in &theory.goals {
        let item = g.name.clone();
        for name in g.attrs.using.iter().flatten().chain(&g.attrs.without) {
            if theory.axiom(name).is_none() {
                return Err(SurfaceError::UnknownName {
                    item,
                    kind: "axiom",
                    name: name.clone(),
                    span: g.span,
                });
            }
        }
        if let Some(q) = &g.attrs.query {
            let target = theory.goal(q);
            if target.is_none() || target.is_some_and(|t| t.formula.is_none()) {
                return Err(SurfaceError::UnknownName {
                    item,
                    kind: "goal with a formula",
                    name: q.clone(),
                    span: g.span,
                });
            }
        }
        let mut ck = Checker {
            theory: &theory,
            def_sorts: &def_sorts,
            item: g.name.clone(),
            env: Vec::new(),
            free: Some(Vec::new()),
        };
        if let Some(f) = &g.formula {
            ck.check_meta(f)?;
        }
        goal_free.insert(g.name.clone(), ck.free.unwrap());
    }

    Ok(SortedTheory {
        theory,
        def_sorts,
        axiom_free,
        goal_free,
    })
}

/// Sort of `t` with `env` in scope, against a checked theory.
pub fn sort_of(st: &SortedTheory, env: &[(String, Sort)], t: &Term) -> Result<Sort, SurfaceError> {
    let mut ck = Checker {
        theory: &st.theory,
        def_sorts: &st.def_sorts,
        item: "term".to_string(),
        env: env.to_vec(),
        free: None,
    };
    ck.synth(t)
}

/// A term together with the sort of every subterm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annotated {
    pub sort: Sort,
    pub children: Vec<Annotated>,
}

pub fn annotate(st: &SortedTheory, env: &[(String, Sort)], t: &Term) -> Result<Annotated, SurfaceError> {
    let sort = sort_of(st, env, t)?;
    let children = match t {
        Term::Var(..) | Term::Const(..) | Term::Top | Term::Bot => Vec::new(),
        Term::App(a, b) => {
            let (head, args) = t.spine();
            let is_def = matches!(head, Term::Const(k, _) if st.theory.def(k).is_some());
            if is_def {
                args.iter().map(|a| annotate(st, env, a)).collect::<Result<_, _>>()?
            } else {
                vec![annotate(st, env, a)?, annotate(st, env, b)?]
            }
        }
        Term::Bin(_, a, b) | Term::Ob(a, b) => vec![annotate(st, env, a)?, annotate(st, env, b)?],
        Term::Un(_, a) => vec![annotate(st, env, a)?],
        Term::Quant(_, x, s, body) => {
            let mut inner = env.to_vec();
            inner.push((x.clone(), s.clone()));
            vec![annotate(st, &inner, body)?]
        }
    };
    Ok(Annotated { sort, children })
}

/// Substitution that first checks the value has the variable's sort.
pub fn substitute_checked(
    st: &SortedTheory,
    env: &[(String, Sort)],
    t: &Term,
    var: &str,
    value: &Term,
) -> Result<Term, SurfaceError> {
    let expected = env
        .iter()
        .rev()
        .find(|(n, _)| n == var)
        .map(|(_, s)| s.clone())
        .ok_or_else(|| SurfaceError::UnboundVariable {
            item: "substitution".into(),
            name: var.to_string(),
            span: Span::default(),
        })?;
    let found = sort_of(st, env, value)?;
    if found != expected {
        return Err(SurfaceError::SortMismatch {
            item: "substitution".into(),
            expected,
            found,
            span: value.span().unwrap_or_default(),
        });
    }
    Ok(substitute(t, var, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parser::{parse_term, parse_theory};

    fn gewirth_sig() -> Theory {
        parse_theory(
            "consts ActsOnPurpose : e => m => m, NeedsForPurpose : e => p => m => m,\n\
             Good : e => m => m, FWB : p, InterferesWith : e => m => m",
        )
        .unwrap()
    }

    #[test]
    fn acts_on_purpose_is_a_character() {
        let th = sort_check(&gewirth_sig()).unwrap();
        let t = parse_term(&th.theory, &["a", "E"], "ActsOnPurpose a E").unwrap();
        let env = [("a".to_string(), Sort::E), ("E".to_string(), Sort::m())];
        assert_eq!(sort_of(&th, &env, &t).unwrap(), Sort::m());
    }

    #[test]
    fn world_of_context() {
        let th = sort_check(&Theory::default()).unwrap();
        let t = parse_term(&th.theory, &["c"], "World c").unwrap();
        assert_eq!(sort_of(&th, &[("c".into(), Sort::C)], &t).unwrap(), Sort::W);
    }

    #[test]
    fn good_applied_to_property_is_rejected() {
        let th = sort_check(&gewirth_sig()).unwrap();
        let t = parse_term(&th.theory, &["a"], "Good FWB a").unwrap();
        let err = sort_of(&th, &[("a".into(), Sort::E)], &t).unwrap_err();
        assert_eq!(
            err,
            SurfaceError::SortMismatch {
                item: "term".into(),
                expected: Sort::E,
                found: Sort::p(),
                span: Span::default(),
            }
        );
    }

    #[test]
    fn free_variables_get_sorts_from_context() {
        let mut th = gewirth_sig();
        th = crate::surface::parser::parse_extending(
            &th,
            "axiom kant: valid (Oi phi -> diaP phi)\n\
             axiom ei: valid ((exists b:e. InterferesWith b psi) <-> ~ diaA psi)\n\
             goal g: validD (ActsOnPurpose I A)",
        )
        .unwrap();
        let st = sort_check(&th).unwrap();
        assert_eq!(st.axiom_free["kant"], vec![("phi".to_string(), Sort::m())]);
        assert_eq!(st.axiom_free["ei"], vec![("psi".to_string(), Sort::m())]);
        assert_eq!(
            st.goal_free["g"],
            vec![("I".to_string(), Sort::E), ("A".to_string(), Sort::m())]
        );
    }

    #[test]
    fn definitions_must_be_closed_and_fully_applied() {
        let th = parse_theory("def D := x").unwrap();
        assert!(matches!(sort_check(&th), Err(SurfaceError::UnboundVariable { .. })));
        let th = parse_theory("consts G : p => m\ndef D(a:e) := top\naxiom x: valid (G D)").unwrap();
        assert!(matches!(sort_check(&th), Err(SurfaceError::ArityError { .. })));
    }

    #[test]
    fn unknown_axiom_reference() {
        let th = parse_theory("goal g [using = nope]: valid top").unwrap();
        assert!(matches!(sort_check(&th), Err(SurfaceError::UnknownName { .. })));
    }

    #[test]
    fn shadowing_binders_are_renamed() {
        let th = parse_theory("consts A : m\naxiom x: valid (A & (forall A:m. A))").unwrap();
        let st = sort_check(&th).unwrap();
        match &st.theory.axioms[0].formula {
            Meta::Valid(Term::Bin(_, _, q)) => match &**q {
                Term::Quant(_, x, _, body) => {
                    assert_ne!(x, "A");
                    assert_eq!(**body, Term::var(x));
                }
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn annotation_covers_every_node() {
        let st = sort_check(&gewirth_sig()).unwrap();
        let t = parse_term(&st.theory, &["a"], "Good a (FWB a)").unwrap();
        let ann = annotate(&st, &[("a".into(), Sort::E)], &t).unwrap();
        assert_eq!(ann.sort, Sort::m());
        assert_eq!(ann.children[0].sort, Sort::fun(Sort::m(), Sort::m()));
        assert_eq!(ann.children[1].sort, Sort::m());
        assert_eq!(ann.children[1].children[0].sort, Sort::p());
    }

    #[test]
    fn checked_substitution_rejects_wrong_sort() {
        let st = sort_check(&gewirth_sig()).unwrap();
        let env = [("a".to_string(), Sort::E), ("P".to_string(), Sort::m())];
        let t = parse_term(&st.theory, &["a", "P"], "Good a P").unwrap();
        let ok = parse_term(&st.theory, &["a"], "FWB a").unwrap();
        assert!(substitute_checked(&st, &env, &t, "P", &ok).is_ok());
        assert!(matches!(
            substitute_checked(&st, &env, &t, "a", &ok),
            Err(SurfaceError::SortMismatch { .. })
        ));
    }
}
