//! Deciding grounded problems. Every model handed out here has been mapped
//! back to an interpretation and re-checked by the reference evaluator.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use deon_sat::{solve_split, Lit, Outcome, Solver, SolverConfig, Stats, Var};

use crate::grounder::{reconstruct_model, verify_model, GroundError, PropProblem};
use crate::semantics::canonical::{canonical_key, Renaming};
use crate::semantics::Interpretation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveSettings {
    pub budget: Option<Duration>,
    /// Single worker; repeated runs give identical models and statistics.
    pub deterministic: bool,
    pub jobs: usize,
    /// Conflict clause learning in the propositional solver.
    pub learning: bool,
}

impl Default for SolveSettings {
    fn default() -> Self {
        SolveSettings {
            budget: None,
            deterministic: true,
            jobs: 1,
            learning: true,
        }
    }
}

impl SolveSettings {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            learning: self.learning,
            budget: self.budget,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Model {
        interpretation: Box<Interpretation>,
        assignment: Vec<bool>,
    },
    NoModel,
    Timeout { elapsed: Duration },
}

#[derive(Clone, Debug)]
pub struct Solved {
    pub verdict: Verdict,
    pub stats: Stats,
}

impl Solved {
    pub fn model(&self) -> Option<&Interpretation> {
        match &self.verdict {
            Verdict::Model { interpretation, .. } => Some(interpretation),
            _ => None,
        }
    }
}

/// The model behind a satisfying assignment, re-verified.
fn checked_model(p: &PropProblem, a: &[bool]) -> Result<Interpretation, GroundError> {
    if !p.cnf.is_satisfied_by(a) {
        return Err(GroundError::VerificationFailed {
            detail: "assignment falsifies a clause".into(),
        });
    }
    let i = reconstruct_model(p, a)?;
    verify_model(p, &i)?;
    Ok(i)
}

pub fn solve(p: &PropProblem, settings: &SolveSettings) -> Result<Solved, GroundError> {
    let start = Instant::now();
    let jobs = if settings.deterministic { 1 } else { settings.jobs.max(1) };
    let order: Vec<Var> = (0..p.num_primary()).map(Var).collect();
    let r = solve_split(&p.cnf, &settings.config(), jobs, &order);
    let verdict = match r.outcome {
        Outcome::Sat(a) => Verdict::Model {
            interpretation: Box::new(checked_model(p, &a)?),
            assignment: a,
        },
        Outcome::Unsat => Verdict::NoModel,
        Outcome::Timeout => Verdict::Timeout { elapsed: start.elapsed() },
    };
    Ok(Solved { verdict, stats: r.stats })
}

#[derive(Clone, Debug, Default)]
pub struct Enumerated {
    pub models: Vec<Vec<bool>>,
    pub interpretations: Vec<Interpretation>,
    /// True when the search space was exhausted.
    pub complete: bool,
    pub timed_out: bool,
    pub stats: Stats,
}

impl Enumerated {
    /// Canonical keys of the models found.
    pub fn canonical_keys(&self) -> BTreeSet<Vec<u64>> {
        self.interpretations.iter().map(canonical_key).collect()
    }
}

/// Clauses excluding the primary part of `a`, and with `canonicalize` also
/// every relabelling of it.
fn blocking_clauses(p: &PropProblem, a: &[bool], renamings: &[Renaming]) -> Vec<Vec<Lit>> {
    let n = p.num_primary();
    let mut out = BTreeSet::new();
    for r in renamings {
        let mut image = vec![false; n as usize];
        for v in 0..n {
            image[p.var_map.image(Var(v), r).index()] = a[v as usize];
        }
        out.insert(deon_sat::block_all(&image, n as usize));
    }
    out.into_iter().collect()
}

/// Up to `limit` models, pairwise non-isomorphic with `canonicalize`.
pub fn enumerate_models(
    p: &PropProblem,
    limit: usize,
    canonicalize: bool,
    settings: &SolveSettings,
) -> Result<Enumerated, GroundError> {
    let renamings = if canonicalize {
        Renaming::all(p.scope())
    } else {
        vec![Renaming::identity(p.scope())]
    };
    let mut solver = Solver::new(
        &p.cnf,
        SolverConfig {
            learning: settings.learning,
            budget: None,
        },
    );
    let stop = Arc::new(AtomicBool::new(false));
    solver.set_interrupt(stop.clone());
    let done = Arc::new(AtomicBool::new(false));
    let watchdog = settings.budget.map(|b| {
        let (stop, done) = (stop.clone(), done.clone());
        std::thread::spawn(move || {
            let deadline = Instant::now() + b;
            while !done.load(Ordering::SeqCst) {
                if Instant::now() >= deadline {
                    stop.store(true, Ordering::SeqCst);
                    return;
                }
                std::thread::sleep(Duration::from_millis(5));
            }
        })
    });
    let mut out = Enumerated::default();
    let result = loop {
        if out.models.len() >= limit {
            break Ok(());
        }
        if stop.load(Ordering::SeqCst) {
            out.timed_out = true;
            break Ok(());
        }
        let r = solver.solve();
        out.stats.absorb(&r.stats);
        out.stats.elapsed += r.stats.elapsed;
        match r.outcome {
            Outcome::Sat(a) => {
                let i = match checked_model(p, &a) {
                    Ok(i) => i,
                    Err(e) => break Err(e),
                };
                for c in blocking_clauses(p, &a, &renamings) {
                    solver.add_clause(&c);
                }
                out.models.push(a);
                out.interpretations.push(i);
            }
            Outcome::Unsat => {
                out.complete = true;
                break Ok(());
            }
            Outcome::Timeout => {
                out.timed_out = true;
                break Ok(());
            }
        }
    };
    done.store(true, Ordering::SeqCst);
    if let Some(h) = watchdog {
        let _ = h.join();
    }
    result.map(|_| out)
}
