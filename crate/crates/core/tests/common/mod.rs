//! Generators shared by the property tests: well-sorted formulas over a
//! small fixed signature, and random interpretations.

#![allow(dead_code)]

pub mod battery;
pub mod frame_oracle;

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use deon_core::semantics::naive::frames;
use deon_core::semantics::{universe_size, ConditionSet, Frame, Interpretation, Vocabulary};
use deon_core::surface::{parse_theory, sort_check, BinOp, Quant, Sort, SortedTheory, Term, UnOp};
use deon_core::Scope;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SIGNATURE: &str = "\
consts A : m, B : m, Good : e => m => m, F : p
def Act(a:e) := exists E:m. Good a E
def Right(a:e, f:p) := Oi (forall b:e. ~ Good b (f a))
";

/// Variables of sort `e`.
pub const E_VARS: [&str; 3] = ["x", "y", "z"];
/// Variables of sort `m`.
pub const M_VARS: [&str; 2] = ["P", "Q"];

pub fn all_vars() -> Vec<&'static str> {
    E_VARS.iter().chain(&M_VARS).copied().collect()
}

pub fn theory() -> SortedTheory {
    sort_check(&parse_theory(SIGNATURE).unwrap()).unwrap()
}

fn e_var() -> impl Strategy<Value = Term> {
    prop::sample::select(&E_VARS[..]).prop_map(Term::var)
}

fn unop() -> impl Strategy<Value = UnOp> {
    prop::sample::select(vec![
        UnOp::Not,
        UnOp::BoxA,
        UnOp::DiaA,
        UnOp::BoxP,
        UnOp::DiaP,
        UnOp::BoxD,
        UnOp::ObA,
        UnOp::ObI,
    ])
}

fn binop() -> impl Strategy<Value = BinOp> {
    prop::sample::select(vec![BinOp::And, BinOp::Or, BinOp::Imp, BinOp::Iff])
}

fn quant() -> impl Strategy<Value = Quant> {
    prop::sample::select(vec![Quant::Forall, Quant::Exists])
}

/// Well-sorted formulas (sort `m`) whose free variables come from
/// [`E_VARS`] and [`M_VARS`]. With `defs` the defined names may occur.
pub fn formula(defs: bool) -> impl Strategy<Value = Term> {
    let mut leaves = vec![
        Just(Term::cnst("A")).boxed(),
        Just(Term::cnst("B")).boxed(),
        Just(Term::Top).boxed(),
        Just(Term::Bot).boxed(),
        prop::sample::select(&M_VARS[..]).prop_map(Term::var).boxed(),
        e_var().prop_map(|x| Term::app(Term::cnst("F"), x)).boxed(),
    ];
    if defs {
        leaves.push(e_var().prop_map(|x| Term::app(Term::cnst("Act"), x)).boxed());
        leaves.push(
            e_var()
                .prop_map(|x| Term::apps(Term::cnst("Right"), [x, Term::cnst("F")]))
                .boxed(),
        );
    }
    let leaf = prop::strategy::Union::new(leaves);
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (unop(), inner.clone()).prop_map(|(op, t)| Term::un(op, t)),
            (binop(), inner.clone(), inner.clone()).prop_map(|(op, a, b)| Term::bin(op, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::ob(a, b)),
            (e_var(), inner.clone()).prop_map(|(x, t)| Term::apps(Term::cnst("Good"), [x, t])),
            (quant(), prop::sample::select(&E_VARS[..]), inner.clone())
                .prop_map(|(q, x, t)| Term::Quant(q, x.to_string(), Sort::E, Box::new(t))),
            (quant(), prop::sample::select(&M_VARS[..]), inner)
                .prop_map(|(q, x, t)| Term::Quant(q, x.to_string(), Sort::m(), Box::new(t))),
        ]
    })
}

/// Frames meeting `cs`, memoized per scope and condition set.
pub fn frames_cached(scope: Scope, cs: &ConditionSet) -> std::sync::Arc<Vec<Frame>> {
    type Cache = Mutex<BTreeMap<(u32, u32, u32, Vec<&'static str>), std::sync::Arc<Vec<Frame>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let key = (scope.c, scope.e, scope.w, cs.names());
    let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
    cache
        .entry(key)
        .or_insert_with(|| std::sync::Arc::new(frames(scope, cs).unwrap()))
        .clone()
}

/// A random interpretation of `vocab` over a frame meeting `cs`.
pub fn random_interpretation(seed: u64, scope: Scope, vocab: &Vocabulary, cs: &ConditionSet) -> Interpretation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs = frames_cached(scope, cs);
    let mut i = Interpretation::blank(scope, vocab).unwrap();
    i.frame = fs[rng.gen_range(0..fs.len())].clone();
    for t in i.tables.values_mut() {
        let n = universe_size(&t.result, scope).unwrap();
        for c in t.cells.iter_mut() {
            *c = rng.gen_range(0..n);
        }
    }
    i
}

/// Random values for every variable of [`all_vars`].
pub fn random_valuation(seed: u64, scope: Scope) -> Vec<(String, Sort, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut rho = Vec::new();
    for x in E_VARS {
        rho.push((x.to_string(), Sort::E, rng.gen_range(0..scope.e as u64)));
    }
    let m = universe_size(&Sort::m(), scope).unwrap();
    for x in M_VARS {
        rho.push((x.to_string(), Sort::m(), rng.gen_range(0..m)));
    }
    rho
}
