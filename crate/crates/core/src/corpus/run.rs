use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus::manifest::{CorpusEntry, Manifest};
use crate::corpus::search::{search, ScopeResult, Search, SearchOptions};
use crate::scope::Scope;
use crate::semantics::report::{render_json, render_text};
use crate::semantics::{canonical_form, Mode, Query};
use crate::surface::{Expect, SortedTheory};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Mismatch,
    Timeout,
    /// An ablation without a countermodel up to its ceiling.
    Inconclusive,
    Error,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Mismatch => "MISMATCH",
            Status::Timeout => "TIMEOUT",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Error => "ERROR",
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Status::Mismatch | Status::Timeout | Status::Error)
    }
}

#[derive(Clone, Debug)]
pub struct EntryResult {
    pub entry: CorpusEntry,
    pub status: Status,
    /// What the search established, in words.
    pub finding: String,
    pub search: Search,
    pub elapsed: Duration,
}

impl EntryResult {
    /// The model found, in canonical form.
    pub fn canonical_model(&self) -> Option<crate::semantics::Interpretation> {
        self.search.model.as_ref().map(canonical_form)
    }

    fn to_json(&self, timings: bool) -> Value {
        let e = &self.entry;
        let runs: Vec<Value> = self.search.runs.iter().map(|r| r.to_json(timings)).collect();
        let mut v = json!({
            "name": e.name,
            "goal": e.goal,
            "kind": e.kind.keyword(),
            "scope": e.scope.to_string(),
            "anchor": e.anchor,
            "axioms": e.axioms,
            "reconstructed": e.reconstructed,
            "status": self.status,
            "finding": self.finding,
            "runs": runs,
            "model": self.canonical_model().map(|i| render_json(&i)),
        });
        if timings {
            v["ms"] = json!(self.elapsed.as_millis() as u64);
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct CorpusReport {
    /// Frame conditions the entries were checked under.
    pub conditions: Vec<&'static str>,
    pub entries: Vec<EntryResult>,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| !e.status.is_failure())
    }

    pub fn get(&self, name: &str) -> Option<&EntryResult> {
        self.entries.iter().find(|e| e.entry.name == name)
    }

    pub fn count(&self, s: Status) -> usize {
        self.entries.iter().filter(|e| e.status == s).count()
    }

    /// JSON report. Without `timings` the output depends only on the
    /// manifest and the solver's deterministic behaviour.
    pub fn to_json(&self, timings: bool) -> String {
        let v = json!({
            "conditions": self.conditions,
            "entries": self.entries.iter().map(|e| e.to_json(timings)).collect::<Vec<_>>(),
            "summary": {
                "total": self.entries.len(),
                "pass": self.count(Status::Pass),
                "mismatch": self.count(Status::Mismatch),
                "timeout": self.count(Status::Timeout),
                "inconclusive": self.count(Status::Inconclusive),
                "error": self.count(Status::Error),
            },
        });
        serde_json::to_string_pretty(&v).expect("report serializes") + "\n"
    }

    pub fn to_text(&self, timings: bool, models: bool) -> String {
        let mut out = format!("conditions: {}\n", self.conditions.join(", "));
        for r in &self.entries {
            let e = &r.entry;
            let time = if timings {
                format!(" ({:.2}s)", r.elapsed.as_secs_f64())
            } else {
                String::new()
            };
            out += &format!(
                "{:<13} {:<28} {:<13} {}{}\n",
                r.status.label(),
                e.name,
                e.kind.keyword(),
                r.finding,
                time
            );
            out += &format!("              anchor: {}\n", e.anchor);
            if !e.reconstructed.is_empty() {
                out += &format!("              uses reconstructed: {}\n", e.reconstructed.join(", "));
            }
            if models {
                if let Some(i) = r.canonical_model() {
                    for line in render_text(&i).lines() {
                        out += &format!("                {line}\n");
                    }
                }
            }
        }
        out += &format!(
            "{} entries: {} pass, {} mismatch, {} timeout, {} inconclusive, {} error\n",
            self.entries.len(),
            self.count(Status::Pass),
            self.count(Status::Mismatch),
            self.count(Status::Timeout),
            self.count(Status::Inconclusive),
            self.count(Status::Error),
        );
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct CorpusSettings {
    /// Per-entry options; the budget applies to each entry separately.
    pub search: SearchOptions,
    /// Entries run concurrently.
    pub jobs: usize,
}

fn scopes_for(e: &CorpusEntry) -> Vec<Scope> {
    match e.kind {
        Expect::Sat => vec![e.scope],
        _ => e.scope.below(),
    }
}

fn judge(e: &CorpusEntry, s: &Search) -> (Status, String) {
    let found = s.model_scope();
    let incomplete = s
        .runs
        .last()
        .map(|r| matches!(r.result, ScopeResult::Timeout | ScopeResult::TooLarge));
    let stopped = match s.runs.last() {
        Some(r) if r.result == ScopeResult::TooLarge => format!("scope {} over the grounding budget", r.scope),
        Some(r) => format!("timeout at {}", r.scope),
        None => "no scope searched".to_string(),
    };
    let bounded = match s.bounded_up_to() {
        Some(b) => format!("bounded-valid up to {b}"),
        None => "nothing searched to completion".to_string(),
    };
    match (e.kind, found) {
        (Expect::Sat, Some(sc)) => (Status::Pass, format!("model found at {sc}")),
        (Expect::Countermodel | Expect::Ablation, Some(sc)) => (Status::Pass, format!("countermodel at {sc}")),
        (Expect::BoundedValid | Expect::Entailed, Some(sc)) => (Status::Mismatch, format!("countermodel at {sc}")),
        (_, None) if incomplete == Some(true) => (Status::Timeout, format!("{stopped}; {bounded}")),
        (Expect::Sat, None) => (Status::Mismatch, format!("no model at {}", e.scope)),
        (Expect::Countermodel, None) => (Status::Mismatch, format!("no countermodel; {bounded}")),
        (Expect::Ablation, None) => (Status::Inconclusive, format!("no countermodel; {bounded}")),
        (Expect::BoundedValid | Expect::Entailed, None) => (Status::Pass, bounded),
    }
}

pub fn run_entry(st: &SortedTheory, e: &CorpusEntry, opts: &SearchOptions) -> EntryResult {
    let start = Instant::now();
    let mode = if e.kind == Expect::Sat { Mode::Satisfy } else { Mode::Refute };
    let result = Query::for_goal(st, &e.name, mode)
        .map_err(|err| err.to_string())
        .and_then(|q| search(&q, &scopes_for(e), opts).map_err(|err| err.to_string()));
    let (status, finding, search) = match result {
        Ok(s) => {
            let (status, finding) = judge(e, &s);
            (status, finding, s)
        }
        Err(msg) => (Status::Error, msg, Search::default()),
    };
    EntryResult {
        entry: e.clone(),
        status,
        finding,
        search,
        elapsed: start.elapsed(),
    }
}

/// Runs every entry. Entries run on up to `jobs` threads; the report keeps
/// manifest order.
pub fn run_corpus(m: &Manifest, settings: &CorpusSettings) -> CorpusReport {
    run_selected(m, &m.entries, settings)
}

pub fn run_selected(m: &Manifest, entries: &[CorpusEntry], settings: &CorpusSettings) -> CorpusReport {
    let jobs = settings.jobs.clamp(1, entries.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<EntryResult>>> = Mutex::new(vec![None; entries.len()]);
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                let Some(e) = entries.get(k) else { break };
                let r = run_entry(&m.theory, e, &settings.search);
                slots.lock().expect("no worker panicked")[k] = Some(r);
            });
        }
    });
    CorpusReport {
        conditions: settings.search.conditions.names(),
        entries: slots
            .into_inner()
            .expect("no worker panicked")
            .into_iter()
            .map(|r| r.expect("every entry ran"))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Manifest {
        Manifest::parse(
            "consts A : m, B : m\naxiom ab: valid (A -> B)",
            "goal weaker [expect = countermodel, using = none, scope = c=1,e=1,w=2, anchor = \"x\"]: validD A ==> valid A\n\
             goal stronger [expect = bounded-valid, using = none, scope = c=2,e=1,w=2, anchor = \"x\"]: valid A ==> validD A\n\
             goal wrong [expect = entailed, using = none, scope = c=1,e=1,w=2, anchor = \"x\"]: valid (A -> B)\n\
             goal right [expect = entailed, scope = c=1,e=1,w=2, anchor = \"x\"]: valid (A -> B)\n\
             goal drop [expect = ablation, without = ab, scope = c=1,e=1,w=1, anchor = \"x\"]: validD (A -> B)\n\
             goal keep [expect = ablation, scope = c=1,e=1,w=2, anchor = \"x\"]: validD (A -> B)\n\
             goal some [expect = sat, scope = c=1,e=1,w=1, anchor = \"x\"]: valid (A & ~B)",
        )
        .unwrap()
    }

    #[test]
    fn entries_are_judged_by_kind() {
        let r = run_corpus(&small(), &CorpusSettings::default());
        let status: Vec<Status> = r.entries.iter().map(|e| e.status).collect();
        use Status::*;
        assert_eq!(status, [Pass, Pass, Mismatch, Pass, Pass, Inconclusive, Mismatch]);
        assert_eq!(r.get("weaker").unwrap().finding, "countermodel at c=1,e=1,w=2");
        assert_eq!(r.get("stronger").unwrap().finding, "bounded-valid up to c=2,e=1,w=2");
        assert!(r.get("weaker").unwrap().canonical_model().is_some());
        assert!(!r.passed());
    }

    #[test]
    fn parallel_run_keeps_order_and_content() {
        let m = small();
        let a = run_corpus(&m, &CorpusSettings::default());
        let b = run_corpus(
            &m,
            &CorpusSettings {
                jobs: 4,
                ..CorpusSettings::default()
            },
        );
        assert_eq!(a.to_json(false), b.to_json(false));
        let names: Vec<&str> = b.entries.iter().map(|e| e.entry.name.as_str()).collect();
        assert_eq!(names, ["weaker", "stronger", "wrong", "right", "drop", "keep", "some"]);
    }

    #[test]
    fn text_report_has_one_line_per_entry_and_a_summary() {
        let r = run_corpus(&small(), &CorpusSettings::default());
        let text = r.to_text(false, false);
        let (head, rest) = text.split_once('\n').unwrap();
        assert!(head.starts_with("conditions: C-avpv, sem_5ab"));
        assert!(rest.starts_with("PASS"));
        assert!(text.ends_with("7 entries: 4 pass, 2 mismatch, 0 timeout, 1 inconclusive, 0 error\n"));
    }
}
