use std::collections::BTreeSet;

use deon_sat::{enumerate_models, parse_dimacs, solve, Lit, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::corpus::GEWIRTH;
use crate::semantics::canonical::canonical_key;
use crate::semantics::conditions::frame_ok;
use crate::semantics::eval::eval_meta;
use crate::semantics::naive;
use crate::semantics::query::Mode;
use crate::surface::{parse_theory, sort_check, SortedTheory};

fn theory(src: &str) -> SortedTheory {
    sort_check(&parse_theory(src).unwrap()).unwrap()
}

fn problem(src: &str, goal: &str, mode: Mode, scope: Scope) -> PropProblem {
    let st = theory(src);
    let q = Query::for_goal(&st, goal, mode).unwrap();
    ground(&q, scope, &ConditionSet::default(), &GroundOptions::default()).unwrap()
}

fn all_models(p: &PropProblem) -> Vec<Vec<bool>> {
    let n = p.num_primary() as usize;
    let e = enumerate_models(&p.cnf, &SolverConfig::default(), usize::MAX, |m| vec![deon_sat::block_all(m, n)]);
    assert!(e.complete);
    e.models
}

#[test]
fn trivial_goal_admits_every_frame() {
    let p = problem("goal g: valid top", "g", Mode::Satisfy, Scope::new(1, 1, 1));
    let models = all_models(&p);
    let frames = naive::frames(Scope::new(1, 1, 1), &ConditionSet::default()).unwrap();
    assert_eq!(models.len(), frames.len());
    // the unique one-world shape: av = pv = {w1}
    for m in &models {
        let i = reconstruct_model(&p, m).unwrap();
        assert_eq!(i.frame.av, vec![1]);
        assert_eq!(i.frame.pv, vec![1]);
    }
}

#[test]
fn gewirth_variable_count_matches_closed_form() {
    let st = theory(GEWIRTH);
    let q = Query::for_goal(&st, "consistent", Mode::Satisfy).unwrap();
    let p = ground(&q, Scope::new(1, 1, 2), &ConditionSet::default(), &GroundOptions::default()).unwrap();
    // av 4, pv 4, ob 16, worldOf 2, agentOf 1; each m-valued cell is 2
    // bits: ActsOnPurpose, Good, InterferesWith 4 cells each (one per m
    // value), FWB 1 cell, NeedsForPurpose 4 * 4 cells (p has 4^1 values)
    let expected = 4 + 4 + 16 + 2 + 1 + 3 * 4 * 2 + 2 + 16 * 2;
    assert_eq!(p.num_primary(), expected);
    assert_eq!(PropVarMap::closed_form(Scope::new(1, 1, 2), &q.vocabulary).unwrap(), expected as u64);
    assert_eq!(p.cnf.num_vars(), p.num_primary() + 1 + p.aux_count);
}

#[test]
fn pgc_has_no_countermodel_at_one_context() {
    let p = problem(GEWIRTH, "PGC", Mode::Refute, Scope::new(1, 1, 2));
    assert!(solve(&p.cnf, &SolverConfig::default()).is_unsat());
}

#[test]
fn gewirth_model_satisfies_every_axiom() {
    let p = problem(GEWIRTH, "consistent", Mode::Satisfy, Scope::new(1, 1, 2));
    let r = solve(&p.cnf, &SolverConfig::default());
    let i = reconstruct_model(&p, r.model().expect("satisfiable")).unwrap();
    verify_model(&p, &i).unwrap();
    assert_eq!(p.query.axioms.len(), 9);
    let each = p.query.compile(i.scope).unwrap().each(&i).unwrap();
    assert_eq!(each, vec![true; 10]);
    let p1 = problem(GEWIRTH, "consistent", Mode::Satisfy, Scope::new(1, 1, 1));
    assert!(solve(&p1.cnf, &SolverConfig::default()).is_unsat());
}

#[test]
fn indexical_countermodel_round_trips() {
    let src = "consts A : m\ngoal g: validD A ==> valid A";
    let st = theory(src);
    let p = problem(src, "g", Mode::Refute, Scope::new(1, 1, 2));
    let r = solve(&p.cnf, &SolverConfig::default());
    let i = reconstruct_model(&p, r.model().unwrap()).unwrap();
    verify_model(&p, &i).unwrap();
    let none: Vec<(String, Sort, u64)> = Vec::new();
    let vd = crate::surface::parse_meta(&st.theory, "validD A").unwrap();
    let v = crate::surface::parse_meta(&st.theory, "valid A").unwrap();
    assert!(eval_meta(&st, &vd, &i, &none).unwrap());
    assert!(!eval_meta(&st, &v, &i, &none).unwrap());
}

const SAMPLES: &str = "consts A : m, B : m, F : e => m, k : e, P : p\n\
    goal g1: valid (Oi A -> diaP A)\n\
    goal g2: validD (A -> boxA A)\n\
    goal g3: valid (O<A | B> -> boxD (F k))\n\
    goal g4: forall C:c. validAt C (F (Agent C)) ==> valid (exists x:e. F x)\n\
    goal g5: valid (forall x:e. Oa (P x) | ~ diaA (P x))\n\
    goal g6: validCtx C (forall M:m. M -> diaP M)\n";

fn random_interpretation(rng: &mut ChaCha8Rng, p: &PropProblem) -> Interpretation {
    let a: Vec<bool> = (0..p.num_primary()).map(|_| rng.gen_bool(0.5)).collect();
    let mut a = a;
    // selector groups need exactly one member
    for group in p.var_map.selector_groups() {
        let pick = rng.gen_range(0..group.len());
        for (k, v) in group.iter().enumerate() {
            a[v.index()] = k == pick;
        }
    }
    reconstruct_model(p, &a).unwrap()
}

/// The grounded problem accepts an encoded interpretation exactly when the
/// reference evaluator and the frame checker do.
#[test]
fn grounding_agrees_with_the_evaluator() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let st = theory(SAMPLES);
    let cs = ConditionSet::none();
    let mut agree = [0, 0];
    for goal in ["g1", "g2", "g3", "g4", "g5", "g6"] {
        for mode in [Mode::Satisfy, Mode::Refute] {
            for scope in [Scope::new(1, 1, 2), Scope::new(2, 2, 2), Scope::new(1, 2, 3)] {
                let q = Query::for_goal(&st, goal, mode).unwrap();
                for cs in [&cs, &ConditionSet::default()] {
                    let p = ground(&q, scope, cs, &GroundOptions::default()).unwrap();
                    for _ in 0..40 {
                        let i = random_interpretation(&mut rng, &p);
                        let expected = frame_ok(&i.frame, scope.w, cs) && q.accepts(&i).unwrap();
                        let units: Vec<Lit> = encode_model(&p, &i)
                            .iter()
                            .enumerate()
                            .map(|(v, &b)| Lit::new(Var(v as u32), b))
                            .collect();
                        let mut cnf = p.cnf.clone();
                        for l in units {
                            cnf.add_clause([l]);
                        }
                        let got = solve(&cnf, &SolverConfig::default()).is_sat();
                        assert_eq!(got, expected, "{goal} {mode:?} {scope}");
                        agree[got as usize] += 1;
                    }
                }
            }
        }
    }
    assert!(agree[0] > 100 && agree[1] > 100, "{agree:?}");
}

#[test]
fn grounding_is_deterministic() {
    let a = problem(GEWIRTH, "PGC", Mode::Refute, Scope::new(1, 1, 2));
    let b = problem(GEWIRTH, "PGC", Mode::Refute, Scope::new(1, 1, 2));
    assert_eq!(a.cnf, b.cnf);
    assert_eq!(a.dimacs(), b.dimacs());
}

#[test]
fn dimacs_export_parses_back() {
    let p = problem("goal g: validD A ==> valid A", "g", Mode::Refute, Scope::new(1, 1, 2));
    let text = p.dimacs();
    assert!(text.contains("c v 1 av[w1][w1]"));
    assert!(text.contains("A@c1w2"));
    let back = parse_dimacs(&text).unwrap();
    assert_eq!(back.clauses(), p.cnf.clauses());
    assert_eq!(back.num_vars(), p.cnf.num_vars());
}

#[test]
fn budget_is_checked_before_grounding() {
    let st = theory(GEWIRTH);
    let q = Query::for_goal(&st, "PGC", Mode::Refute).unwrap();
    let opts = GroundOptions {
        cell_budget: 1000,
        ..GroundOptions::default()
    };
    match ground(&q, Scope::new(1, 1, 2), &ConditionSet::default(), &opts) {
        Err(GroundError::ScopeTooLarge { cells, budget: 1000, .. }) => assert!(cells > 1000),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        ground(&q, Scope::new(2, 2, 3), &ConditionSet::default(), &GroundOptions::default()),
        Err(GroundError::ScopeTooLarge { .. })
    ));
}

fn canonical_set(p: &PropProblem) -> BTreeSet<Vec<u64>> {
    all_models(p)
        .iter()
        .map(|m| canonical_key(&reconstruct_model(p, m).unwrap()))
        .collect()
}

#[test]
fn symmetry_breaking_keeps_every_class() {
    let st = theory(SAMPLES);
    for (goal, scope) in [("g2", Scope::new(1, 1, 2)), ("g4", Scope::new(2, 2, 1))] {
        let q = Query::for_goal(&st, goal, Mode::Refute).unwrap();
        let cs = ConditionSet::default();
        let plain = ground(&q, scope, &cs, &GroundOptions::default()).unwrap();
        let broken = ground(
            &q,
            scope,
            &cs,
            &GroundOptions {
                symmetry_breaking: true,
                ..GroundOptions::default()
            },
        )
        .unwrap();
        let (a, b) = (canonical_set(&plain), canonical_set(&broken));
        assert!(!a.is_empty());
        assert_eq!(a, b, "{goal}");
        assert!(all_models(&broken).len() <= all_models(&plain).len());
    }
}

#[test]
fn incomplete_assignment_is_rejected() {
    let p = problem("goal g: valid top", "g", Mode::Satisfy, Scope::new(1, 1, 1));
    assert!(matches!(
        reconstruct_model(&p, &[true]),
        Err(GroundError::IncompleteAssignment { .. })
    ));
}
