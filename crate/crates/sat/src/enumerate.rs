//! Model enumeration with caller-supplied blocking clauses.

use crate::cnf::Cnf;
use crate::lit::Lit;
use crate::solver::{Outcome, Solver, SolverConfig, Stats};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub models: Vec<Vec<bool>>,
    /// True when the search space was exhausted before `limit` was hit.
    pub complete: bool,
    pub timed_out: bool,
    pub stats: Stats,
}

/// Enumerates up to `limit` models. After each model, `block` returns the
/// clauses that exclude it (and anything it stands for) from later
/// answers; the default blocking clause over all variables is
/// [`block_all`].
pub fn enumerate_models<F>(cnf: &Cnf, config: &SolverConfig, limit: usize, mut block: F) -> Enumeration
where
    F: FnMut(&[bool]) -> Vec<Vec<Lit>>,
{
    let mut solver = Solver::new(cnf, config.clone());
    let mut models = Vec::new();
    let mut stats = Stats::default();
    loop {
        if models.len() >= limit {
            return Enumeration {
                models,
                complete: false,
                timed_out: false,
                stats,
            };
        }
        let r = solver.solve();
        stats.absorb(&r.stats);
        stats.elapsed += r.stats.elapsed;
        match r.outcome {
            Outcome::Sat(m) => {
                let clauses = block(&m);
                assert!(
                    !clauses.is_empty(),
                    "blocking callback must exclude the model it was given"
                );
                for c in clauses {
                    solver.add_clause(&c);
                }
                models.push(m);
            }
            Outcome::Unsat => {
                return Enumeration {
                    models,
                    complete: true,
                    timed_out: false,
                    stats,
                }
            }
            Outcome::Timeout => {
                return Enumeration {
                    models,
                    complete: false,
                    timed_out: true,
                    stats,
                }
            }
        }
    }
}

/// The clause forbidding exactly `model` over its first `n` variables.
pub fn block_all(model: &[bool], n: usize) -> Vec<Lit> {
    model[..n]
        .iter()
        .enumerate()
        .map(|(i, &b)| Lit::new(crate::lit::Var(i as u32), !b))
        .collect()
}
