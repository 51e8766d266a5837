//! `deon-mf`: bounded model finding for theories over dyadic deontic logic
//! with Kaplanian contexts.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use deon_core::corpus::{
    run_corpus, run_selected, search, CorpusSettings, Manifest, ScopeResult, ScopeRun, Search, SearchOptions, Status, MANIFEST,
};
use deon_core::grounder::{ground, GroundOptions, DEFAULT_CELL_BUDGET};
use deon_core::semantics::report::{render_json, render_text};
use deon_core::semantics::{canonical_form, ConditionSet, Mode, Query};
use deon_core::solver::SolveSettings;
use deon_core::surface::{parse_theory, print_theory, sort_check, Meta, SortedTheory, Term};
use deon_core::Scope;

const OK: u8 = 0;
const CONTRARY: u8 = 1;
const USAGE: u8 = 2;
const INCOMPLETE: u8 = 3;

#[derive(Parser)]
#[command(name = "deon-mf", version, about = "Bounded model finder for dyadic deontic logic with Kaplanian contexts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a theory file and print it back in normal form.
    Parse { theory: PathBuf },
    /// Sort-check a theory file and list its items.
    Check {
        theory: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Search for a model of the axioms, deepening up to the scope.
    Consistency {
        theory: PathBuf,
        /// Leave out an axiom (repeatable).
        #[arg(long)]
        without: Vec<String>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Search for a model of the axioms falsifying a goal.
    Countermodel {
        theory: PathBuf,
        #[arg(long)]
        goal: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Exhaustive refutation search at every scope up to the ceiling.
    Valid {
        theory: PathBuf,
        #[arg(long)]
        goal: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the manifest of checkable results.
    Corpus {
        theory: PathBuf,
        /// Manifest file; the bundled one when absent.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Run only the named entries (repeatable).
        #[arg(long)]
        entry: Vec<String>,
        /// Include the models found in the text report.
        #[arg(long)]
        models: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write the grounded CNF of a goal (or of the axioms alone) at one scope.
    EmitDimacs {
        theory: PathBuf,
        #[arg(long)]
        goal: Option<String>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Scope as c=i,e=j,w=k: the exact scope for emit-dimacs, the ceiling
    /// otherwise.
    #[arg(long)]
    scope: Option<Scope>,
    /// Switch a frame condition on (repeatable).
    #[arg(long = "enable", value_name = "CONDITION")]
    enable: Vec<String>,
    /// Switch a frame condition off (repeatable).
    #[arg(long = "disable", value_name = "CONDITION")]
    disable: Vec<String>,
    /// Wall-clock budget in seconds (per entry for `corpus`).
    #[arg(long, env = "DEON_MF_BUDGET")]
    budget: Option<f64>,
    /// Single worker, fixed search order, no timings in the output.
    #[arg(long)]
    deterministic: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Add lex-leader symmetry-breaking clauses.
    #[arg(long)]
    symmetry_breaking: bool,
    /// Plain DPLL without clause learning.
    #[arg(long)]
    no_learning: bool,
    /// Bound on the estimated number of ground cells.
    #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
    cell_budget: u64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Satisfy,
    Refute,
}

/// An error with the exit code it maps to.
struct Failure(u8, String);

impl Failure {
    fn usage(msg: impl Into<String>) -> Failure {
        Failure(USAGE, msg.into())
    }
}

type Outcome = Result<u8, Failure>;

/// Stdout writes that end the process quietly once the reader has gone.
macro_rules! out {
    ($($t:tt)*) => { write_out(format_args!($($t)*)) };
}

macro_rules! outln {
    ($($t:tt)*) => { write_out(format_args!("{}\n", format_args!($($t)*))) };
}

fn write_out(args: std::fmt::Arguments) {
    if std::io::stdout().lock().write_fmt(args).is_err() {
        std::process::exit(0);
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("deon-mf: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Parse { theory } => {
            let text = read(&theory)?;
            let t = parse_theory(&text).map_err(|e| located(&theory, e))?;
            out!("{}", print_theory(&t));
            Ok(OK)
        }
        Command::Check { theory, format } => check(&theory, format),
        Command::Consistency { theory, without, run } => {
            let st = load(&theory)?;
            let axioms = deon_core::semantics::query::active_axioms(&st, None, &without);
            let q = Query::new(&st, "consistency", &Meta::Valid(Term::Top), &[], &axioms, Mode::Satisfy)
                .map_err(|e| Failure::usage(e.to_string()))?;
            find(&q, &run, "consistency", "model")
        }
        Command::Countermodel { theory, goal, run } => {
            let st = load(&theory)?;
            let q = goal_query(&st, &goal, Mode::Refute)?;
            find(&q, &run, "countermodel", "countermodel")
        }
        Command::Valid { theory, goal, run } => {
            let st = load(&theory)?;
            let q = goal_query(&st, &goal, Mode::Refute)?;
            valid(&q, &run)
        }
        Command::Corpus {
            theory,
            manifest,
            entry,
            models,
            run,
        } => corpus(&theory, manifest.as_deref(), &entry, models, &run),
        Command::EmitDimacs {
            theory,
            goal,
            mode,
            output,
            run,
        } => emit(&theory, goal.as_deref(), mode, output.as_deref(), &run),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn located(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::usage(format!("{}:{e}", path.display()))
}

fn load(path: &Path) -> Result<SortedTheory, Failure> {
    let text = read(path)?;
    let t = parse_theory(&text).map_err(|e| located(path, e))?;
    sort_check(&t).map_err(|e| located(path, e))
}

fn goal_query(st: &SortedTheory, goal: &str, mode: Mode) -> Result<Query, Failure> {
    if st.theory.goal(goal).is_none() {
        return Err(Failure::usage(format!("no goal named `{goal}`")));
    }
    Query::for_goal(st, goal, mode).map_err(|e| Failure::usage(format!("goal `{goal}`: {e}")))
}

fn conditions(run: &RunArgs) -> Result<ConditionSet, Failure> {
    let mut cs = ConditionSet::default();
    for name in &run.disable {
        cs.disable(name).map_err(|e| Failure::usage(e.to_string()))?;
    }
    for name in &run.enable {
        cs.enable(name).map_err(|e| Failure::usage(e.to_string()))?;
    }
    Ok(cs)
}

fn options(run: &RunArgs) -> Result<SearchOptions, Failure> {
    let budget = match run.budget {
        Some(b) if b.is_finite() && b >= 0.0 => Some(Duration::from_secs_f64(b)),
        Some(b) => return Err(Failure::usage(format!("invalid budget `{b}`"))),
        None => None,
    };
    if run.jobs == 0 {
        return Err(Failure::usage("--jobs must be at least 1"));
    }
    Ok(SearchOptions {
        conditions: conditions(run)?,
        ground: GroundOptions {
            cell_budget: run.cell_budget,
            symmetry_breaking: run.symmetry_breaking,
        },
        solve: SolveSettings {
            budget: None,
            deterministic: run.deterministic,
            jobs: run.jobs,
            learning: !run.no_learning,
        },
        budget,
    })
}

fn ceiling(run: &RunArgs, q: &Query) -> Scope {
    run.scope
        .or_else(|| q.theory.theory.goal(&q.goal.name).and_then(|g| g.attrs.scope))
        .unwrap_or(Scope::new(2, 2, 2))
}

fn runs_json(s: &Search, timings: bool) -> Value {
    s.runs.iter().map(|r| r.to_json(timings)).collect()
}

fn stats_text(s: &Search, timings: bool) -> String {
    ScopeRun::totals(&s.runs).to_key_values(timings)
}

fn incomplete_reason(s: &Search) -> Option<String> {
    match s.runs.last()?.result {
        ScopeResult::Timeout => Some(format!("timeout at {}", s.runs.last()?.scope)),
        ScopeResult::TooLarge => Some(format!("scope {} exceeds the grounding budget", s.runs.last()?.scope)),
        _ => None,
    }
}

/// Deepening search for a model; exit 0 when one is found.
fn find(q: &Query, run: &RunArgs, command: &str, what: &str) -> Outcome {
    let opts = options(run)?;
    let top = ceiling(run, q);
    let s = search(q, &top.below(), &opts).map_err(|e| Failure(INCOMPLETE, e.to_string()))?;
    let timings = !run.deterministic;
    let model = s.model.as_ref().map(canonical_form);
    let (result, code) = match (&model, incomplete_reason(&s)) {
        (Some(_), _) => ("model", OK),
        (None, Some(_)) => ("timeout", INCOMPLETE),
        (None, None) => ("no-model", CONTRARY),
    };
    match run.format {
        Format::Json => {
            let v = json!({
                "command": command,
                "goal": q.goal.name,
                "ceiling": top.to_string(),
                "result": result,
                "scope": s.model_scope().map(|s| s.to_string()),
                "bounded_up_to": s.bounded_up_to().map(|s| s.to_string()),
                "runs": runs_json(&s, timings),
                "model": model.as_ref().map(render_json),
            });
            outln!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
        }
        Format::Text => {
            match (&model, incomplete_reason(&s)) {
                (Some(i), _) => {
                    outln!("{what} found at {}", i.scope);
                    out!("{}", render_text(i));
                }
                (None, Some(why)) => outln!("no {what} found; {why}"),
                (None, None) => outln!("no {what} at any scope up to {top}"),
            }
            out!("{}", stats_text(&s, timings));
        }
    }
    Ok(code)
}

fn valid(q: &Query, run: &RunArgs) -> Outcome {
    let opts = options(run)?;
    let top = ceiling(run, q);
    let s = search(q, &top.below(), &opts).map_err(|e| Failure(INCOMPLETE, e.to_string()))?;
    let timings = !run.deterministic;
    let model = s.model.as_ref().map(canonical_form);
    let bounded = s.bounded_up_to();
    let (result, code) = match (&model, incomplete_reason(&s)) {
        (Some(_), _) => ("countermodel", CONTRARY),
        (None, Some(_)) => ("timeout", INCOMPLETE),
        (None, None) => ("bounded-valid", OK),
    };
    match run.format {
        Format::Json => {
            let v = json!({
                "command": "valid",
                "goal": q.goal.name,
                "ceiling": top.to_string(),
                "result": result,
                "bounded_up_to": bounded.map(|s| s.to_string()),
                "runs": runs_json(&s, timings),
                "countermodel": model.as_ref().map(render_json),
            });
            outln!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
        }
        Format::Text => {
            match (&model, incomplete_reason(&s), bounded) {
                (Some(i), _, _) => {
                    outln!("not valid: countermodel at {}", i.scope);
                    out!("{}", render_text(i));
                }
                (None, Some(why), Some(b)) => outln!("bounded-valid up to {b}; {why}"),
                (None, Some(why), None) => outln!("undecided; {why}"),
                (None, None, _) => outln!("bounded-valid up to {top}"),
            }
            out!("{}", stats_text(&s, timings));
        }
    }
    Ok(code)
}

fn check(path: &Path, format: Format) -> Outcome {
    let st = load(path)?;
    let t = &st.theory;
    let sorts: Vec<(String, String)> = t
        .signature
        .user()
        .map(|(n, s)| (n.to_string(), s.to_string()))
        .chain(st.def_sorts.iter().map(|(n, s)| (n.clone(), s.to_string())))
        .collect();
    match format {
        Format::Json => {
            let v = json!({
                "constants": t.signature.user().map(|(n, s)| json!({"name": n, "sort": s.to_string()})).collect::<Vec<_>>(),
                "definitions": t.defs.iter().map(|d| json!({
                    "name": d.name,
                    "sort": st.def_sorts.get(&d.name).map(|s| s.to_string()),
                    "reconstructed": d.reconstructed,
                })).collect::<Vec<_>>(),
                "axioms": t.axioms.iter().map(|a| &a.name).collect::<Vec<_>>(),
                "goals": t.goals.iter().map(|g| json!({
                    "name": g.name,
                    "expect": g.attrs.expect.map(|e| e.keyword()),
                })).collect::<Vec<_>>(),
            });
            outln!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
        }
        Format::Text => {
            outln!("{}: ok", path.display());
            for (n, s) in sorts {
                outln!("  {n} : {s}");
            }
            for d in t.defs.iter().filter(|d| d.reconstructed) {
                outln!("  {} is reconstructed", d.name);
            }
            outln!("  {} axioms, {} goals", t.axioms.len(), t.goals.len());
        }
    }
    Ok(OK)
}

fn corpus(path: &Path, manifest: Option<&Path>, only: &[String], models: bool, run: &RunArgs) -> Outcome {
    let theory = read(path)?;
    let (manifest_text, manifest_name) = match manifest {
        Some(p) => (read(p)?, p.display().to_string()),
        None => (MANIFEST.to_string(), "bundled manifest".to_string()),
    };
    let m = Manifest::parse(&theory, &manifest_text).map_err(|e| Failure::usage(format!("{manifest_name}:{e}")))?;
    let search = options(run)?;
    search
        .conditions
        .require_mandatory()
        .map_err(|e| Failure::usage(e.to_string()))?;
    let settings = CorpusSettings { search, jobs: run.jobs };
    let report = if only.is_empty() {
        run_corpus(&m, &settings)
    } else {
        let mut chosen = Vec::new();
        for name in only {
            chosen.push(
                m.entry(name)
                    .cloned()
                    .ok_or_else(|| Failure::usage(format!("no manifest entry `{name}`")))?,
            );
        }
        run_selected(&m, &chosen, &settings)
    };
    let timings = !run.deterministic;
    match run.format {
        Format::Json => out!("{}", report.to_json(timings)),
        Format::Text => out!("{}", report.to_text(timings, models)),
    }
    for r in &report.entries {
        if r.status.is_failure() {
            eprintln!("deon-mf: entry `{}`: {} ({})", r.entry.name, r.status.label(), r.finding);
        }
    }
    let has = |s: Status| report.count(s) > 0;
    Ok(if has(Status::Error) {
        USAGE
    } else if has(Status::Mismatch) {
        CONTRARY
    } else if has(Status::Timeout) {
        INCOMPLETE
    } else {
        OK
    })
}

fn emit(path: &Path, goal: Option<&str>, mode: Option<ModeArg>, output: Option<&Path>, run: &RunArgs) -> Outcome {
    let st = load(path)?;
    let q = match goal {
        Some(g) => {
            let mode = match mode.unwrap_or(ModeArg::Refute) {
                ModeArg::Satisfy => Mode::Satisfy,
                ModeArg::Refute => Mode::Refute,
            };
            goal_query(&st, g, mode)?
        }
        None => {
            let axioms = deon_core::semantics::query::active_axioms(&st, None, &[]);
            Query::new(&st, "consistency", &Meta::Valid(Term::Top), &[], &axioms, Mode::Satisfy)
                .map_err(|e| Failure::usage(e.to_string()))?
        }
    };
    let opts = options(run)?;
    let scope = run.scope.unwrap_or(Scope::new(1, 1, 2));
    let p = ground(&q, scope, &opts.conditions, &opts.ground).map_err(|e| Failure(INCOMPLETE, e.to_string()))?;
    let text = p.dimacs();
    match output {
        Some(o) => std::fs::write(o, text).map_err(|e| Failure::usage(format!("{}: {e}", o.display())))?,
        None => out!("{text}"),
    }
    Ok(OK)
}
