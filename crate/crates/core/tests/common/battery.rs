//! The fixed battery of queries on which naive enumeration and solver
//! enumeration are compared.

use std::time::{Duration, Instant};

use deon_core::corpus::Manifest;
use deon_core::grounder::{ground, GroundOptions};
use deon_core::semantics::naive;
use deon_core::semantics::{Condition, ConditionSet, Mode, Query};
use deon_core::solver::{enumerate_models, SolveSettings};
use deon_core::surface::{parse_theory, sort_check, Expect};
use deon_core::Scope;

pub const SIZE: usize = 20;

pub const SCOPES: [Scope; 2] = [Scope::new(1, 1, 1), Scope::new(1, 1, 2)];

/// Queries whose model sets at (1,1,2) run into the millions.
pub const TOO_MANY_MODELS: [&str; 3] = ["gewirth-consistent", "pgc-without-explGoodness3", "pgc-without-OIOAC"];

const EXTRAS: &str = "\
goal frames: valid top
goal kant-without-5ab: valid (Oi phi -> diaP phi)
goal dyadic-strengthening: valid (O<A | B> -> O<A | B & C>)
";

pub struct Item {
    pub name: String,
    pub query: Query,
    pub conditions: ConditionSet,
}

/// Every distinct corpus query followed by three queries outside the
/// corpus: the bare frame class, Kant's law with `sem_5ab` dropped, and
/// strengthening of the condition of a dyadic obligation.
pub fn battery() -> Vec<Item> {
    let m = Manifest::builtin();
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for e in &m.entries {
        let mode = if e.kind == Expect::Sat { Mode::Satisfy } else { Mode::Refute };
        let key = (e.goal.clone(), e.axioms.clone(), mode);
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        out.push(Item {
            name: e.name.clone(),
            query: Query::for_goal(&m.theory, &e.name, mode).unwrap(),
            conditions: ConditionSet::default(),
        });
    }
    let st = sort_check(&parse_theory(EXTRAS).unwrap()).unwrap();
    let mut no_5ab = ConditionSet::default();
    no_5ab.set(Condition::Sem5ab, false);
    for (name, mode, conditions) in [
        ("frames", Mode::Satisfy, ConditionSet::default()),
        ("kant-without-5ab", Mode::Refute, no_5ab),
        ("dyadic-strengthening", Mode::Refute, ConditionSet::default()),
    ] {
        out.push(Item {
            name: name.into(),
            query: Query::for_goal(&st, name, mode).unwrap(),
            conditions,
        });
    }
    out
}

pub struct Comparison {
    pub naive: usize,
    pub naive_complete: bool,
    pub solver: usize,
    pub solver_complete: bool,
    pub equal: bool,
}

impl Comparison {
    pub fn agrees(&self) -> bool {
        self.naive_complete && self.solver_complete && self.equal
    }
}

/// Canonical model sets of `item` at `scope` from both routes, each given
/// `budget`.
pub fn compare(item: &Item, scope: Scope, budget: Duration) -> Comparison {
    let n = naive::enumerate(&item.query, scope, &item.conditions, u64::MAX, Some(Instant::now() + budget)).unwrap();
    let p = ground(&item.query, scope, &item.conditions, &GroundOptions::default()).unwrap();
    let settings = SolveSettings {
        budget: Some(budget),
        ..Default::default()
    };
    let s = enumerate_models(&p, usize::MAX, true, &settings).unwrap();
    let keys = s.canonical_keys();
    Comparison {
        naive: n.models.len(),
        naive_complete: n.complete,
        solver: keys.len(),
        solver_complete: s.complete,
        equal: n.models == keys,
    }
}
