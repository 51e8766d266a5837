use deon_sat::{
    block_all, enumerate_models, parse_dimacs, solve, to_dimacs_string, Cnf, Lit, Outcome, Solver,
    SolverConfig, Var,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn brute_force_count(cnf: &Cnf) -> usize {
    let n = cnf.num_vars() as usize;
    (0..1u32 << n)
        .filter(|bits| {
            let a: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            cnf.is_satisfied_by(&a)
        })
        .count()
}

fn arb_cnf() -> impl Strategy<Value = Cnf> {
    (1u32..=8).prop_flat_map(|n| {
        prop::collection::vec(
            prop::collection::vec((0..n, any::<bool>()), 1..=3),
            0..=24,
        )
        .prop_map(move |clauses| {
            let mut cnf = Cnf::with_vars(n);
            for c in clauses {
                cnf.add_clause(c.into_iter().map(|(v, p)| Lit::new(Var(v), p)));
            }
            cnf
        })
    })
}

fn configs() -> [SolverConfig; 2] {
    [
        SolverConfig {
            learning: false,
            budget: None,
        },
        SolverConfig::default(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn agrees_with_truth_table(cnf in arb_cnf()) {
        let expected = brute_force_count(&cnf);
        for cfg in configs() {
            let r = solve(&cnf, &cfg);
            match r.outcome {
                Outcome::Sat(m) => {
                    prop_assert!(expected > 0);
                    prop_assert!(cnf.is_satisfied_by(&m));
                }
                Outcome::Unsat => prop_assert_eq!(expected, 0),
                Outcome::Timeout => prop_assert!(false, "no budget was set"),
            }
            let n = cnf.num_vars() as usize;
            let all = enumerate_models(&cnf, &cfg, usize::MAX, |m| vec![block_all(m, n)]);
            prop_assert!(all.complete);
            prop_assert_eq!(all.models.len(), expected);
        }
    }

    #[test]
    fn dimacs_round_trip(cnf in arb_cnf()) {
        let text = to_dimacs_string(&cnf, &["generated".to_string()]);
        prop_assert_eq!(parse_dimacs(&text).unwrap(), cnf);
    }
}

#[test]
fn three_variable_parity_has_four_models() {
    // x1 xor x2 xor x3 = 1
    let mut cnf = Cnf::with_vars(3);
    for bits in 0..8u32 {
        if bits.count_ones() % 2 == 0 {
            // forbid even-parity assignment `bits`
            cnf.add_clause((0..3).map(|i| Lit::new(Var(i), bits >> i & 1 == 0)));
        }
    }
    for cfg in configs() {
        let e = enumerate_models(&cnf, &cfg, 100, |m| vec![block_all(m, 3)]);
        assert!(e.complete);
        assert_eq!(e.models.len(), 4);
    }
}

#[test]
fn unsat_problem_enumerates_nothing() {
    let mut cnf = Cnf::with_vars(1);
    cnf.add_clause([Var(0).positive()]);
    cnf.add_clause([Var(0).negative()]);
    let e = enumerate_models(&cnf, &SolverConfig::default(), 10, |m| vec![block_all(m, 1)]);
    assert!(e.models.is_empty());
    assert!(e.complete);
}

/// Unit propagation reaches the same fixpoint whatever order the clauses
/// (and hence the watch lists) are presented in.
#[test]
fn unit_propagation_is_confluent() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for round in 0..200 {
        let n = 12u32;
        let mut clauses: Vec<Vec<Lit>> = Vec::new();
        for _ in 0..30 {
            let len = 1 + (round + clauses.len()) % 3;
            let mut c = Vec::new();
            for _ in 0..len {
                let v = Var(rand::Rng::gen_range(&mut rng, 0..n));
                c.push(Lit::new(v, rand::Rng::gen_bool(&mut rng, 0.5)));
            }
            clauses.push(c);
        }
        let assumptions: Vec<Lit> = (0..3)
            .map(|_| Lit::new(Var(rand::Rng::gen_range(&mut rng, 0..n)), rand::Rng::gen_bool(&mut rng, 0.5)))
            .collect();
        let mut reference = None;
        for shuffle in 0..5 {
            let mut order = clauses.clone();
            if shuffle > 0 {
                order.shuffle(&mut rng);
                for c in &mut order {
                    c.shuffle(&mut rng);
                }
            }
            let mut cnf = Cnf::with_vars(n);
            for c in order {
                cnf.add_clause(c);
            }
            let mut s = Solver::new(&cnf, SolverConfig::default());
            let got = s.propagate_only(&assumptions);
            match &reference {
                None => reference = Some(got),
                Some(r) => assert_eq!(r, &got, "round {round}, shuffle {shuffle}"),
            }
        }
    }
}

#[test]
fn repeated_runs_are_identical() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let n = 60u32;
    let mut cnf = Cnf::with_vars(n);
    for _ in 0..250 {
        let c: Vec<Lit> = (0..3)
            .map(|_| Lit::new(Var(rand::Rng::gen_range(&mut rng, 0..n)), rand::Rng::gen_bool(&mut rng, 0.5)))
            .collect();
        cnf.add_clause(c);
    }
    for cfg in configs() {
        let a = solve(&cnf, &cfg);
        let b = solve(&cnf, &cfg);
        assert_eq!(a.outcome, b.outcome);
        assert_eq!(a.stats.counters(), b.stats.counters());
    }
}
