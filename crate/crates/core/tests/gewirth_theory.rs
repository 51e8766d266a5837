use std::time::{Duration, Instant};

use deon_core::corpus::GEWIRTH;
use deon_core::surface::{parse_theory, print_theory, sort_check, Sort};

/// Top-level blocks of each kind, counted from the raw text.
fn blocks(keyword: &str) -> usize {
    GEWIRTH
        .lines()
        .filter(|l| l.split_whitespace().next() == Some(keyword))
        .count()
}

#[test]
fn bundled_theory_counts() {
    let t = Instant::now();
    let th = parse_theory(GEWIRTH).unwrap();
    let took = t.elapsed();
    assert_eq!(
        (th.axioms.len(), th.defs.len(), th.goals.len()),
        (blocks("axiom"), blocks("def"), blocks("goal"))
    );
    assert_eq!((th.axioms.len(), th.defs.len(), th.goals.len()), (9, 2, 6));
    assert!(took < Duration::from_millis(50), "parse took {took:?}");
}

#[test]
fn bundled_theory_sort_checks_and_round_trips() {
    let th = parse_theory(GEWIRTH).unwrap();
    let st = sort_check(&th).unwrap();
    assert_eq!(parse_theory(&print_theory(&th)).unwrap(), th);
    let m = Sort::m();
    let e = Sort::E;
    let p = Sort::p();
    let fun = |a: &Sort, b: &Sort| Sort::fun(a.clone(), b.clone());
    let expected = [
        ("ActsOnPurpose", fun(&e, &fun(&m, &m))),
        ("NeedsForPurpose", fun(&e, &fun(&p, &fun(&m, &m)))),
        ("Good", fun(&e, &fun(&m, &m))),
        ("FWB", p.clone()),
        ("InterferesWith", fun(&e, &fun(&m, &m))),
        ("Agent", fun(&Sort::C, &e)),
        ("World", fun(&Sort::C, &Sort::W)),
    ];
    for (name, sort) in expected {
        assert_eq!(st.theory.signature.get(name), Some(&sort), "{name}");
    }
}
