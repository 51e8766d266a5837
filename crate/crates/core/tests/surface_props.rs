mod common;

use common::{all_vars, formula, theory, E_VARS, M_VARS};
use deon_core::surface::{
    alpha_eq, parse_theory, parse_term, print_term, print_theory, sort_check, sort_of, substitute, BinOp, Quant,
    Sort, Term, UnOp,
};
use proptest::prelude::*;

/// Nameless representation: bound variables become the distance to their
/// binder, free variables keep their names.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Db {
    Bound(usize),
    Free(String),
    Const(String),
    Top,
    Bot,
    App(Box<Db>, Box<Db>),
    Un(UnOp, Box<Db>),
    Bin(BinOp, Box<Db>, Box<Db>),
    Ob(Box<Db>, Box<Db>),
    Quant(Quant, Sort, Box<Db>),
}

fn db(t: &Term, env: &mut Vec<String>) -> Db {
    match t {
        Term::Var(x, _) => match env.iter().rev().position(|y| y == x) {
            Some(i) => Db::Bound(i),
            None => Db::Free(x.clone()),
        },
        Term::Const(k, _) => Db::Const(k.clone()),
        Term::Top => Db::Top,
        Term::Bot => Db::Bot,
        Term::App(a, b) => Db::App(Box::new(db(a, env)), Box::new(db(b, env))),
        Term::Un(op, a) => Db::Un(*op, Box::new(db(a, env))),
        Term::Bin(op, a, b) => Db::Bin(*op, Box::new(db(a, env)), Box::new(db(b, env))),
        Term::Ob(a, b) => Db::Ob(Box::new(db(a, env)), Box::new(db(b, env))),
        Term::Quant(q, x, s, body) => {
            env.push(x.clone());
            let b = db(body, env);
            env.pop();
            Db::Quant(*q, s.clone(), Box::new(b))
        }
    }
}

fn to_db(t: &Term) -> Db {
    db(t, &mut Vec::new())
}

/// Substitution on nameless terms. Values only have free names, so nothing
/// under a binder can capture them and no shifting is needed.
fn db_subst(t: &Db, x: &str, v: &Db) -> Db {
    let go = |a: &Db| Box::new(db_subst(a, x, v));
    match t {
        Db::Free(y) if y == x => v.clone(),
        Db::Bound(_) | Db::Free(_) | Db::Const(_) | Db::Top | Db::Bot => t.clone(),
        Db::App(a, b) => Db::App(go(a), go(b)),
        Db::Un(op, a) => Db::Un(*op, go(a)),
        Db::Bin(op, a, b) => Db::Bin(*op, go(a), go(b)),
        Db::Ob(a, b) => Db::Ob(go(a), go(b)),
        Db::Quant(q, s, b) => Db::Quant(*q, s.clone(), go(b)),
    }
}

/// Renames every binder to a fresh name, giving an alpha-variant.
fn rename_binders(t: &Term, k: &mut usize) -> Term {
    match t {
        Term::Quant(q, x, s, body) => {
            *k += 1;
            let y = format!("v{k}");
            let body = substitute(body, x, &Term::var(&y));
            Term::Quant(*q, y, s.clone(), Box::new(rename_binders(&body, k)))
        }
        Term::App(a, b) => Term::app(rename_binders(a, k), rename_binders(b, k)),
        Term::Un(op, a) => Term::un(*op, rename_binders(a, k)),
        Term::Bin(op, a, b) => Term::bin(*op, rename_binders(a, k), rename_binders(b, k)),
        Term::Ob(a, b) => Term::ob(rename_binders(a, k), rename_binders(b, k)),
        _ => t.clone(),
    }
}

/// A replacement for `x`: a variable (capture-prone) or a formula.
fn value_for(x: &str) -> BoxedStrategy<Term> {
    if E_VARS.contains(&x) {
        prop::sample::select(&E_VARS[..]).prop_map(Term::var).boxed()
    } else {
        formula(false).boxed()
    }
}

fn var_and_value() -> impl Strategy<Value = (String, Term)> {
    prop::sample::select(all_vars()).prop_flat_map(|x| value_for(x).prop_map(move |v| (x.to_string(), v)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_then_parse_is_identity(t in formula(true)) {
        let base = theory().theory;
        let text = print_term(&t);
        let back = parse_term(&base, &all_vars(), &text).unwrap();
        prop_assert_eq!(back, t, "{}", text);
    }

    #[test]
    fn generated_theories_round_trip(ts in prop::collection::vec(formula(true), 1..4)) {
        let mut src = common::SIGNATURE.to_string();
        for (k, t) in ts.iter().enumerate() {
            let v = if k % 2 == 0 { "valid" } else { "validD" };
            src += &format!("axiom a{k}: {v} ({})\n", print_term(t));
        }
        let th = parse_theory(&src).unwrap();
        prop_assert!(sort_check(&th).is_ok());
        prop_assert_eq!(parse_theory(&print_theory(&th)).unwrap(), th);
    }

    #[test]
    fn generated_formulas_have_sort_m(t in formula(true)) {
        let st = theory();
        let env: Vec<(String, Sort)> = E_VARS
            .iter()
            .map(|x| (x.to_string(), Sort::E))
            .chain(M_VARS.iter().map(|x| (x.to_string(), Sort::m())))
            .collect();
        prop_assert_eq!(sort_of(&st, &env, &t).unwrap(), Sort::m());
    }

    #[test]
    fn substitution_matches_nameless_oracle(t in formula(false), (x, v) in var_and_value()) {
        let got = substitute(&t, &x, &v);
        prop_assert_eq!(to_db(&got), db_subst(&to_db(&t), &x, &to_db(&v)));
        prop_assert!(!deon_core::surface::free_vars(&got).contains(&x) || deon_core::surface::free_vars(&v).contains(&x));
    }

    #[test]
    fn alpha_equivalence_is_nameless_equality(a in formula(false), b in formula(false)) {
        prop_assert_eq!(alpha_eq(&a, &b), to_db(&a) == to_db(&b));
        let a2 = rename_binders(&a, &mut 0);
        prop_assert!(alpha_eq(&a, &a2) && alpha_eq(&a2, &a));
        prop_assert!(alpha_eq(&a, &a));
    }

    #[test]
    fn substitution_respects_alpha(t in formula(false), (x, v) in var_and_value()) {
        let t2 = rename_binders(&t, &mut 0);
        prop_assert!(alpha_eq(&substitute(&t, &x, &v), &substitute(&t2, &x, &v)));
    }
}
