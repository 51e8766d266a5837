//! Splitting a problem across worker threads.
//!
//! The first `k` variables of the split order are fixed to every
//! combination of values (`2^k` cubes, with `2^k >= jobs`); workers pull
//! cubes from a shared counter. The first satisfiable cube wins, and the
//! problem is unsatisfiable only when every cube is.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use crate::cnf::Cnf;
use crate::lit::{Lit, Var};
use crate::solver::{Outcome, Solver, SolverConfig, SolverResult, Stats};

pub fn solve_split(cnf: &Cnf, config: &SolverConfig, jobs: usize, split_order: &[Var]) -> SolverResult {
    if jobs <= 1 || split_order.is_empty() {
        return Solver::new(cnf, config.clone()).solve();
    }
    let mut k = 0usize;
    while (1usize << k) < jobs && k < split_order.len() {
        k += 1;
    }
    let vars = &split_order[..k];
    let cubes = 1usize << k;
    let next = AtomicUsize::new(0);
    let stop = Arc::new(AtomicBool::new(false));
    let found: Mutex<Option<(usize, Vec<bool>)>> = Mutex::new(None);
    let timed_out = AtomicBool::new(false);
    let stats = Mutex::new(Stats::default());

    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::SeqCst);
                if idx >= cubes || stop.load(Ordering::SeqCst) {
                    break;
                }
                let mut solver = Solver::new(cnf, config.clone());
                solver.set_interrupt(stop.clone());
                for (bit, v) in vars.iter().enumerate() {
                    solver.add_clause(&[Lit::new(*v, idx >> bit & 1 == 1)]);
                }
                let r = solver.solve();
                stats.lock().expect("stats lock").absorb(&r.stats);
                match r.outcome {
                    Outcome::Sat(m) => {
                        let mut f = found.lock().expect("result lock");
                        // Keep the lowest-numbered satisfiable cube.
                        if f.as_ref().map_or(true, |(i, _)| idx < *i) {
                            *f = Some((idx, m));
                        }
                        stop.store(true, Ordering::SeqCst);
                    }
                    Outcome::Unsat => {}
                    Outcome::Timeout => {
                        if !stop.load(Ordering::SeqCst) {
                            timed_out.store(true, Ordering::SeqCst);
                        }
                        stop.store(true, Ordering::SeqCst);
                    }
                }
            });
        }
    });

    let stats = stats.into_inner().expect("stats lock");
    let outcome = match found.into_inner().expect("result lock") {
        Some((_, m)) => Outcome::Sat(m),
        None if timed_out.load(Ordering::SeqCst) => Outcome::Timeout,
        None => Outcome::Unsat,
    };
    SolverResult { outcome, stats }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_agrees_with_sequential() {
        let mut cnf = Cnf::new();
        let v: Vec<Var> = (0..6).map(|_| cnf.new_var()).collect();
        // at least two of the first three, and x5 <-> !x0
        cnf.add_clause([v[0].positive(), v[1].positive()]);
        cnf.add_clause([v[1].positive(), v[2].positive()]);
        cnf.add_clause([v[0].positive(), v[2].positive()]);
        cnf.add_clause([v[5].positive(), v[0].positive()]);
        cnf.add_clause([v[5].negative(), v[0].negative()]);
        let r = solve_split(&cnf, &SolverConfig::default(), 4, &v);
        assert!(cnf.is_satisfied_by(r.model().unwrap()));
        cnf.add_clause([v[0].negative()]);
        cnf.add_clause([v[1].negative()]);
        assert!(solve_split(&cnf, &SolverConfig::default(), 3, &v).is_unsat());
    }
}
