use std::time::{Duration, Instant};

use deon_sat::Stats;
use serde::Serialize;
use serde_json::{json, Value};

use crate::grounder::{ground, GroundError, GroundOptions};
use crate::scope::Scope;
use crate::semantics::conditions::{frame_conditions_check, ConditionSet};
use crate::semantics::eval::eval_meta;
use crate::semantics::{Interpretation, Mode, Query};
use crate::solver::{solve, SolveSettings, Verdict};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScopeResult {
    Model,
    NoModel,
    Timeout,
    TooLarge,
}

/// One grounding and solver call.
#[derive(Clone, Debug)]
pub struct ScopeRun {
    pub scope: Scope,
    pub result: ScopeResult,
    pub vars: u32,
    pub clauses: usize,
    pub stats: Stats,
    pub elapsed: Duration,
}

impl ScopeRun {
    pub fn to_json(&self, timings: bool) -> Value {
        let mut v = json!({
            "scope": self.scope.to_string(),
            "result": self.result,
            "vars": self.vars,
            "clauses": self.clauses,
            "decisions": self.stats.decisions,
            "propagations": self.stats.propagations,
            "conflicts": self.stats.conflicts,
        });
        if timings {
            v["ms"] = json!(self.elapsed.as_millis() as u64);
        }
        v
    }

    /// Solver statistics summed over `runs`.
    pub fn totals(runs: &[ScopeRun]) -> Stats {
        let mut t = Stats::default();
        for r in runs {
            t.absorb(&r.stats);
            t.elapsed += r.stats.elapsed;
        }
        t
    }
}

#[derive(Clone, Debug, Default)]
pub struct Search {
    pub runs: Vec<ScopeRun>,
    pub model: Option<Interpretation>,
}

impl Search {
    /// True if every scope searched ran to a definite answer.
    pub fn complete(&self) -> bool {
        self.runs
            .iter()
            .all(|r| matches!(r.result, ScopeResult::Model | ScopeResult::NoModel))
    }

    /// Largest scope, in search order, below which every run came back
    /// without a model.
    pub fn bounded_up_to(&self) -> Option<Scope> {
        self.runs
            .iter()
            .take_while(|r| r.result == ScopeResult::NoModel)
            .last()
            .map(|r| r.scope)
    }

    pub fn model_scope(&self) -> Option<Scope> {
        self.model.as_ref().map(|i| i.scope)
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub conditions: ConditionSet,
    pub ground: GroundOptions,
    pub solve: SolveSettings,
    /// Shared by all scopes of one search.
    pub budget: Option<Duration>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            conditions: ConditionSet::default(),
            ground: GroundOptions::default(),
            solve: SolveSettings::default(),
            budget: None,
        }
    }
}

/// Checks a model against the query a second time, constraint by
/// constraint, with a freshly compiled evaluator.
pub fn recheck(q: &Query, i: &Interpretation, cs: &ConditionSet) -> Result<(), String> {
    if let Some(v) = frame_conditions_check(i, cs).first() {
        return Err(format!("{} violated at {}", v.condition, v.description));
    }
    let each = q.compile(i.scope).and_then(|c| c.each(i)).map_err(|e| e.to_string())?;
    if let Some((a, _)) = q.axioms.iter().zip(&each).find(|(_, &ok)| !ok) {
        return Err(format!("axiom `{}` fails", a.name));
    }
    if q.goal.free.is_empty() {
        let holds = eval_meta(&q.theory, &q.goal.meta, i, &[]).map_err(|e| e.to_string())?;
        if holds == q.goal.negate {
            return Err(format!("goal `{}` has the wrong truth value", q.goal.name));
        }
    }
    Ok(())
}

/// Runs `q` at each scope in turn until one has a model or the budget runs
/// out. A model found is re-verified before it is returned.
pub fn search(q: &Query, scopes: &[Scope], opts: &SearchOptions) -> Result<Search, GroundError> {
    let start = Instant::now();
    let mut out = Search::default();
    for &scope in scopes {
        let t = Instant::now();
        let left = match opts.budget {
            Some(b) => match b.checked_sub(start.elapsed()) {
                Some(d) if !d.is_zero() => Some(d),
                _ => {
                    out.runs.push(ScopeRun {
                        scope,
                        result: ScopeResult::Timeout,
                        vars: 0,
                        clauses: 0,
                        stats: Stats::default(),
                        elapsed: Duration::ZERO,
                    });
                    break;
                }
            },
            None => None,
        };
        let p = match ground(q, scope, &opts.conditions, &opts.ground) {
            Ok(p) => p,
            Err(GroundError::ScopeTooLarge { .. }) => {
                out.runs.push(ScopeRun {
                    scope,
                    result: ScopeResult::TooLarge,
                    vars: 0,
                    clauses: 0,
                    stats: Stats::default(),
                    elapsed: t.elapsed(),
                });
                break;
            }
            Err(e) => return Err(e),
        };
        let settings = SolveSettings {
            budget: left,
            ..opts.solve.clone()
        };
        let solved = solve(&p, &settings)?;
        let result = match &solved.verdict {
            Verdict::Model { .. } => ScopeResult::Model,
            Verdict::NoModel => ScopeResult::NoModel,
            Verdict::Timeout { .. } => ScopeResult::Timeout,
        };
        out.runs.push(ScopeRun {
            scope,
            result,
            vars: p.cnf.num_vars(),
            clauses: p.cnf.clauses().len(),
            stats: solved.stats.clone(),
            elapsed: t.elapsed(),
        });
        match solved.verdict {
            Verdict::Model { interpretation, .. } => {
                recheck(q, &interpretation, &opts.conditions)
                    .map_err(|detail| GroundError::VerificationFailed { detail })?;
                out.model = Some(*interpretation);
                break;
            }
            Verdict::NoModel => {}
            Verdict::Timeout { .. } => break,
        }
    }
    Ok(out)
}

/// Every scope componentwise below `ceiling`, smallest first.
pub fn deepening(ceiling: Scope) -> Vec<Scope> {
    ceiling.below()
}

/// Refutation search over every scope up to `ceiling`.
pub fn bounded_check(q: &Query, ceiling: Scope, opts: &SearchOptions) -> Result<Search, GroundError> {
    debug_assert_eq!(q.mode, Mode::Refute);
    search(q, &deepening(ceiling), opts)
}
