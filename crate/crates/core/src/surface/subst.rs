use std::collections::BTreeSet;

use crate::surface::ast::*;

pub fn free_vars(t: &Term) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_free(t, &mut Vec::new(), &mut out);
    out
}

fn collect_free(t: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(x, _) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Term::Const(..) | Term::Top | Term::Bot => {}
        Term::App(a, b) | Term::Bin(_, a, b) | Term::Ob(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Term::Un(_, a) => collect_free(a, bound, out),
        Term::Quant(_, x, _, body) => {
            bound.push(x.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
    }
}

pub fn meta_free_vars(m: &Meta) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_meta_free(m, &mut Vec::new(), &mut out);
    out
}

fn collect_meta_free(m: &Meta, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match m {
        Meta::Valid(t) | Meta::ValidD(t) => collect_free(t, bound, out),
        Meta::ValidCtx(t, c) | Meta::AtCtx(t, c) => {
            collect_free(t, bound, out);
            collect_free(c, bound, out);
        }
        Meta::Imp(a, b) | Meta::And(a, b) => {
            collect_meta_free(a, bound, out);
            collect_meta_free(b, bound, out);
        }
        Meta::ForallCtx(x, body) => {
            bound.push(x.clone());
            collect_meta_free(body, bound, out);
            bound.pop();
        }
    }
}

/// A variant of `base` (priming it) that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

/// Capture-avoiding substitution of `value` for the free occurrences of
/// `var`.
pub fn substitute(t: &Term, var: &str, value: &Term) -> Term {
    substitute_many(t, &[(var.to_string(), value.clone())])
}

/// Simultaneous capture-avoiding substitution.
pub fn substitute_many(t: &Term, map: &[(String, Term)]) -> Term {
    if map.is_empty() {
        return t.clone();
    }
    match t {
        Term::Var(x, _) => match map.iter().find(|(v, _)| v == x) {
            Some((_, value)) => value.clone(),
            None => t.clone(),
        },
        Term::Const(..) | Term::Top | Term::Bot => t.clone(),
        Term::App(a, b) => Term::app(substitute_many(a, map), substitute_many(b, map)),
        Term::Bin(op, a, b) => Term::bin(*op, substitute_many(a, map), substitute_many(b, map)),
        Term::Ob(a, b) => Term::ob(substitute_many(a, map), substitute_many(b, map)),
        Term::Un(op, a) => Term::un(*op, substitute_many(a, map)),
        Term::Quant(q, x, s, body) => {
            let body_free = free_vars(body);
            let inner: Vec<(String, Term)> = map
                .iter()
                .filter(|(v, _)| v != x && body_free.contains(v))
                .cloned()
                .collect();
            if inner.is_empty() {
                return t.clone();
            }
            let value_free: BTreeSet<String> = inner.iter().flat_map(|(_, v)| free_vars(v)).collect();
            if value_free.contains(x) {
                let mut avoid = value_free;
                avoid.extend(body_free);
                avoid.extend(inner.iter().map(|(v, _)| v.clone()));
                let y = fresh_name(x, &avoid);
                let renamed = substitute(body, x, &Term::var(&y));
                Term::Quant(*q, y, s.clone(), Box::new(substitute_many(&renamed, &inner)))
            } else {
                Term::Quant(*q, x.clone(), s.clone(), Box::new(substitute_many(body, &inner)))
            }
        }
    }
}

pub fn substitute_meta(m: &Meta, var: &str, value: &Term) -> Meta {
    match m {
        Meta::Valid(t) => Meta::Valid(substitute(t, var, value)),
        Meta::ValidD(t) => Meta::ValidD(substitute(t, var, value)),
        Meta::ValidCtx(t, c) => Meta::ValidCtx(substitute(t, var, value), substitute(c, var, value)),
        Meta::AtCtx(t, c) => Meta::AtCtx(substitute(t, var, value), substitute(c, var, value)),
        Meta::Imp(a, b) => Meta::imp(substitute_meta(a, var, value), substitute_meta(b, var, value)),
        Meta::And(a, b) => Meta::and(substitute_meta(a, var, value), substitute_meta(b, var, value)),
        Meta::ForallCtx(x, body) => {
            if x == var || !meta_free_vars(body).contains(var) {
                return m.clone();
            }
            let value_free = free_vars(value);
            if value_free.contains(x) {
                let mut avoid = value_free;
                avoid.extend(meta_free_vars(body));
                avoid.insert(var.to_string());
                let y = fresh_name(x, &avoid);
                let renamed = substitute_meta(body, x, &Term::var(&y));
                Meta::ForallCtx(y, Box::new(substitute_meta(&renamed, var, value)))
            } else {
                Meta::ForallCtx(x.clone(), Box::new(substitute_meta(body, var, value)))
            }
        }
    }
}

/// Equality up to renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    alpha(a, b, &mut Vec::new(), &mut Vec::new())
}

fn lookup(env: &[String], x: &str) -> Option<usize> {
    env.iter().rev().position(|y| y == x)
}

fn alpha(a: &Term, b: &Term, ea: &mut Vec<String>, eb: &mut Vec<String>) -> bool {
    match (a, b) {
        (Term::Var(x, _), Term::Var(y, _)) => match (lookup(ea, x), lookup(eb, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (Term::Const(x, _), Term::Const(y, _)) => x == y,
        (Term::Top, Term::Top) | (Term::Bot, Term::Bot) => true,
        (Term::App(a1, a2), Term::App(b1, b2)) | (Term::Ob(a1, a2), Term::Ob(b1, b2)) => {
            alpha(a1, b1, ea, eb) && alpha(a2, b2, ea, eb)
        }
        (Term::Bin(o1, a1, a2), Term::Bin(o2, b1, b2)) => {
            o1 == o2 && alpha(a1, b1, ea, eb) && alpha(a2, b2, ea, eb)
        }
        (Term::Un(o1, a1), Term::Un(o2, b1)) => o1 == o2 && alpha(a1, b1, ea, eb),
        (Term::Quant(q1, x, s1, a1), Term::Quant(q2, y, s2, b1)) => {
            if q1 != q2 || s1 != s2 {
                return false;
            }
            ea.push(x.clone());
            eb.push(y.clone());
            let r = alpha(a1, b1, ea, eb);
            ea.pop();
            eb.pop();
            r
        }
        _ => false,
    }
}

/// Unfolds every fully applied definition, innermost arguments first.
pub fn expand_definitions(t: &Term, theory: &Theory) -> Term {
    let (head, args) = t.spine();
    if let Term::Const(name, _) = head {
        if let Some(def) = theory.def(name) {
            if def.params.len() == args.len() {
                let args: Vec<Term> = args.iter().map(|a| expand_definitions(a, theory)).collect();
                let map: Vec<(String, Term)> =
                    def.params.iter().map(|(p, _)| p.clone()).zip(args).collect();
                return expand_definitions(&substitute_many(&def.body, &map), theory);
            }
        }
    }
    match t {
        Term::Var(..) | Term::Const(..) | Term::Top | Term::Bot => t.clone(),
        Term::App(a, b) => Term::app(expand_definitions(a, theory), expand_definitions(b, theory)),
        Term::Bin(op, a, b) => Term::bin(*op, expand_definitions(a, theory), expand_definitions(b, theory)),
        Term::Ob(a, b) => Term::ob(expand_definitions(a, theory), expand_definitions(b, theory)),
        Term::Un(op, a) => Term::un(*op, expand_definitions(a, theory)),
        Term::Quant(q, x, s, body) => Term::Quant(*q, x.clone(), s.clone(), Box::new(expand_definitions(body, theory))),
    }
}

pub fn expand_meta(m: &Meta, theory: &Theory) -> Meta {
    let ex = |t: &Term| expand_definitions(t, theory);
    match m {
        Meta::Valid(t) => Meta::Valid(ex(t)),
        Meta::ValidD(t) => Meta::ValidD(ex(t)),
        Meta::ValidCtx(t, c) => Meta::ValidCtx(ex(t), ex(c)),
        Meta::AtCtx(t, c) => Meta::AtCtx(ex(t), ex(c)),
        Meta::Imp(a, b) => Meta::imp(expand_meta(a, theory), expand_meta(b, theory)),
        Meta::And(a, b) => Meta::and(expand_meta(a, theory), expand_meta(b, theory)),
        Meta::ForallCtx(x, b) => Meta::ForallCtx(x.clone(), Box::new(expand_meta(b, theory))),
    }
}
