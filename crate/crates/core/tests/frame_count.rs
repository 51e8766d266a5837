mod common;

use std::collections::BTreeSet;

use common::frame_oracle::{accessibility, obligations, oracle_count, subsets, Set, N1, N2};
use deon_core::grounder::{ground, GroundOptions};
use deon_core::semantics::naive::frames;
use deon_core::semantics::{ConditionSet, Mode, Query};
use deon_core::solver::{enumerate_models, SolveSettings};
use deon_core::surface::{parse_theory, sort_check};
use deon_core::Scope;

fn trivial_problem(scope: Scope, src: &str) -> deon_core::grounder::PropProblem {
    let st = sort_check(&parse_theory(src).unwrap()).unwrap();
    let q = Query::for_goal(&st, "g", Mode::Satisfy).unwrap();
    ground(&q, scope, &ConditionSet::default(), &GroundOptions::default()).unwrap()
}

#[test]
fn one_world_frame_count() {
    assert_eq!(oracle_count(1), N1);
    let scope = Scope::new(1, 1, 1);
    assert_eq!(frames(scope, &ConditionSet::default()).unwrap().len(), N1);
    let p = trivial_problem(scope, "goal g: valid top");
    let e = enumerate_models(&p, usize::MAX, true, &SolveSettings::default()).unwrap();
    assert!(e.complete);
    assert_eq!(e.models.len(), N1);
}

#[test]
fn two_world_frame_count() {
    assert_eq!(oracle_count(2), N2);
    let scope = Scope::new(1, 1, 2);
    assert_eq!(frames(scope, &ConditionSet::default()).unwrap().len(), N2);
    let p = trivial_problem(scope, "goal g: valid top");
    let e = enumerate_models(&p, usize::MAX, false, &SolveSettings::default()).unwrap();
    assert!(e.complete);
    assert_eq!(e.models.len(), N2);
}

/// A frame at (1,1,2) with a character `a` over the two points (c1,w1),
/// (c1,w2), in oracle form.
type Point = (Vec<Set>, Vec<Set>, BTreeSet<(Set, Set)>, usize, Set);

fn swap_worlds(p: &Point) -> Point {
    let s = |x: &Set| -> Set { x.iter().map(|&w| 1 - w).collect() };
    let (av, pv, ob, world, a) = p;
    (
        vec![s(&av[1]), s(&av[0])],
        vec![s(&pv[1]), s(&pv[0])],
        ob.iter().map(|(x, y)| (s(x), s(y))).collect(),
        1 - world,
        s(a),
    )
}

/// Orbits of the world swap by Burnside's lemma: half the sum of the fixed
/// points of the identity and of the swap.
fn burnside(points: &[Point]) -> usize {
    let fixed = points.iter().filter(|p| swap_worlds(p) == **p).count();
    (points.len() + fixed) / 2
}

#[test]
fn canonical_classes_match_orbit_count() {
    let acc = accessibility(2);
    let obs = obligations(2);
    let mut frames_only = Vec::new();
    let mut with_a = Vec::new();
    for (av, pv) in &acc {
        for ob in &obs {
            for world in 0..2 {
                let f = (av.clone(), pv.clone(), ob.clone(), world, Set::new());
                for a in subsets(2) {
                    with_a.push((av.clone(), pv.clone(), ob.clone(), world, a));
                }
                frames_only.push(f);
            }
        }
    }
    let scope = Scope::new(1, 1, 2);
    for (src, points) in [
        ("goal g: valid top", &frames_only),
        ("consts A : m\ngoal g: valid (A | ~A)", &with_a),
    ] {
        let p = trivial_problem(scope, src);
        let e = enumerate_models(&p, usize::MAX, true, &SolveSettings::default()).unwrap();
        assert!(e.complete);
        assert_eq!(e.models.len(), burnside(points), "{src}");
    }
}
