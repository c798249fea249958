//! Researcher keyword and expertise bank.
//!
//! The pipeline turns survey records (who works on what, in their own words)
//! into a normalized dual inverted index, browsable as a static site and
//! searchable by third parties:
//!
//! ```text
//! ingest -> normalize -> bank -> emit (site, bank file)
//!                          \--> query
//!                normalize -> coword (graph, layout)
//!                   ingest -> stats (tables, audit)
//! ```

pub mod bank;
pub mod cli;
pub mod coword;
pub mod emit;
pub mod error;
pub mod fixtures;
pub mod ingest;
pub mod normalize;
pub mod query;
pub mod stats;

pub use bank::{build_bank, lookup, obfuscate_email, KnowledgeBank, ResearcherCard, TermEntry};
pub use coword::{cooccurrence_graph, isolation_ratio, layout_fr, CowordGraph, Layout, Level};
pub use emit::{emit_bank_file, emit_site, load_bank, SiteManifest};
pub use error::{Error, Result};
pub use ingest::{parse_survey, population_profile, IngestReport, Researcher, ResearcherId};
pub use normalize::{canonicalize, clean_corpus, dedupe, permute, CleanCorpus, Facet, StopList, TermRecord};
pub use query::{search, search_with, QueryResult, SynonymTable};
pub use stats::{frequency_table, FrequencyTable, Percent};
