//! The bundled Gewirth theory, the manifest of checkable results, and the
//! runner that checks them end to end.

pub mod manifest;
pub mod run;
pub mod search;

pub use manifest::{CorpusEntry, Manifest, ManifestError};
pub use run::{run_corpus, run_entry, run_selected, CorpusReport, CorpusSettings, EntryResult, Status};
pub use search::{bounded_check, recheck, search, ScopeResult, ScopeRun, Search, SearchOptions};

pub const GEWIRTH: &str = include_str!("../../theories/gewirth.dl");
pub const MANIFEST: &str = include_str!("../../theories/corpus.dl");
