mod common;

use std::time::Duration;

use common::battery::{battery, compare, SCOPES, SIZE, TOO_MANY_MODELS};

#[test]
fn battery_has_twenty_distinct_queries() {
    let b = battery();
    assert_eq!(b.len(), SIZE);
    for name in TOO_MANY_MODELS {
        assert!(b.iter().any(|i| i.name == name), "{name}");
    }
}

/// Naive and solver enumeration give the same canonical models on every
/// battery pair small enough to list exhaustively.
#[test]
fn enumerable_pairs_agree() {
    for item in battery() {
        for scope in SCOPES {
            if scope.w == 2 && TOO_MANY_MODELS.contains(&item.name.as_str()) {
                continue;
            }
            let c = compare(&item, scope, Duration::from_secs(120));
            assert!(
                c.agrees(),
                "{} at {scope}: naive {} ({}), solver {} ({})",
                item.name,
                c.naive,
                c.naive_complete,
                c.solver,
                c.solver_complete
            );
        }
    }
}

#[test]
fn extra_queries_are_not_trivial() {
    let b = battery();
    let get = |n: &str| b.iter().find(|i| i.name == n).unwrap();
    let scope = SCOPES[1];
    assert_eq!(compare(get("frames"), scope, Duration::from_secs(60)).naive, 80);
    assert!(compare(get("kant-without-5ab"), scope, Duration::from_secs(60)).naive > 0);
    assert!(compare(get("dyadic-strengthening"), scope, Duration::from_secs(60)).naive > 0);
}
