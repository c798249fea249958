//! Ranked lexical search over the knowledge bank.
//!
//! A query is canonicalized like any survey phrase. The whole query becomes a
//! phrase term, its admitted words become word terms, and an optional synonym
//! table adds one hop of synonym terms. A researcher scores
//! `sum(idf(t) * weight(kind))` over the terms they match, where
//! `idf(t) = ln(1 + R / df(t))`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::bank::KnowledgeBank;
use crate::error::{Error, Result};
use crate::ingest::ResearcherId;
use crate::normalize::{canonicalize, permute, Facet, StopList};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatchKind {
    /// The whole query equals one of the researcher's phrases.
    Phrase,
    Word,
    Synonym,
}

impl MatchKind {
    pub fn weight(self) -> f64 {
        match self {
            MatchKind::Phrase => 2.0,
            MatchKind::Word => 1.0,
            MatchKind::Synonym => 0.5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MatchKind::Phrase => "phrase",
            MatchKind::Word => "word",
            MatchKind::Synonym => "synonym",
        }
    }
}

/// A term the query looks for.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QueryTerm {
    pub norm: String,
    pub kind: MatchKind,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MatchedTerm {
    pub facet: Facet,
    pub norm: String,
    pub kind: MatchKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryResult {
    pub researcher: ResearcherId,
    pub score: f64,
    pub matched_terms: Vec<MatchedTerm>,
}

/// Bilingual bridging table: term -> synonyms, all in folded form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynonymTable(BTreeMap<String, BTreeSet<String>>);

impl SynonymTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, term: &str, synonym: &str) -> Result<()> {
        let term = canonicalize(term)?.norm;
        let synonym = canonicalize(synonym)?.norm;
        if term != synonym {
            self.0.entry(term).or_default().insert(synonym);
        }
        Ok(())
    }

    pub fn get(&self, norm: &str) -> Option<&BTreeSet<String>> {
        self.0.get(norm)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reads `term<TAB>synonym[,synonym...]` lines. Blank lines and `#`
    /// comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = SynonymTable::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (term, synonyms) = line.split_once('\t').ok_or_else(|| {
                Error::Format(format!("synonym line {}: missing tab separator", i + 1))
            })?;
            for s in synonyms.split(',').filter(|s| !s.trim().is_empty()) {
                table.insert(term, s)?;
            }
        }
        Ok(table)
    }
}

/// The phrase term and word terms of a raw query. Empty for a blank query.
pub fn query_terms(query: &str, stoplist: &StopList) -> Vec<QueryTerm> {
    let Ok(c) = canonicalize(query) else {
        return Vec::new();
    };
    let mut terms = vec![QueryTerm {
        norm: c.norm.clone(),
        kind: MatchKind::Phrase,
    }];
    terms.extend(
        permute(&c.norm, Facet::Keyword, stoplist)
            .into_iter()
            .map(|t| QueryTerm {
                norm: t.norm,
                kind: MatchKind::Word,
            }),
    );
    terms
}

/// Adds the synonyms of every term, one hop only, marked as synonym matches.
/// Terms already present keep their original kind.
pub fn expand_query(terms: &[QueryTerm], table: Option<&SynonymTable>) -> Vec<QueryTerm> {
    let mut out = terms.to_vec();
    let Some(table) = table else {
        return out;
    };
    let mut seen: BTreeSet<String> = terms.iter().map(|t| t.norm.clone()).collect();
    for t in terms {
        for s in table.get(&t.norm).into_iter().flatten() {
            if seen.insert(s.clone()) {
                out.push(QueryTerm {
                    norm: s.clone(),
                    kind: MatchKind::Synonym,
                });
            }
        }
    }
    out
}

pub const DEFAULT_LIMIT: usize = 10;

#[derive(Debug, Clone)]
pub struct SearchOptions<'a> {
    pub facet: Option<Facet>,
    pub limit: usize,
    pub synonyms: Option<&'a SynonymTable>,
}

impl Default for SearchOptions<'_> {
    fn default() -> Self {
        SearchOptions {
            facet: None,
            limit: DEFAULT_LIMIT,
            synonyms: None,
        }
    }
}

pub fn idf(researchers: usize, df: usize) -> f64 {
    (1.0 + researchers as f64 / df as f64).ln()
}

/// Scores a prepared term set. Results are sorted by score (descending),
/// surname, then id, and truncated to `limit`.
pub fn search_terms(
    bank: &KnowledgeBank,
    terms: &[QueryTerm],
    facet: Option<Facet>,
    limit: usize,
) -> Vec<QueryResult> {
    let total = bank.researchers.len();
    let mut matches: BTreeMap<&ResearcherId, Vec<(MatchedTerm, f64)>> = BTreeMap::new();
    let facets: &[Facet] = match facet {
        Some(Facet::Keyword) => &[Facet::Keyword],
        Some(Facet::Expertise) => &[Facet::Expertise],
        None => &Facet::BOTH,
    };
    for &f in facets {
        let index = bank.index(f);
        for term in terms {
            let Some(entry) = index.get(&term.norm) else {
                continue;
            };
            let weight_idf = idf(total, entry.researchers.len());
            for id in &entry.researchers {
                let kind = match term.kind {
                    MatchKind::Phrase if entry.phrase_holders.contains(id) => MatchKind::Phrase,
                    MatchKind::Phrase | MatchKind::Word => MatchKind::Word,
                    MatchKind::Synonym => MatchKind::Synonym,
                };
                matches.entry(id).or_default().push((
                    MatchedTerm {
                        facet: f,
                        norm: term.norm.clone(),
                        kind,
                    },
                    weight_idf * kind.weight(),
                ));
            }
        }
    }

    let mut results: Vec<QueryResult> = matches
        .into_iter()
        .map(|(id, mut hits)| {
            hits.sort_by(|a, b| a.0.cmp(&b.0));
            QueryResult {
                researcher: id.clone(),
                score: hits.iter().map(|h| h.1).sum(),
                matched_terms: hits.into_iter().map(|h| h.0).collect(),
            }
        })
        .collect();
    results.sort_by(|a, b| rank_cmp(bank, a, b));
    results.truncate(limit);
    results
}

fn rank_cmp(bank: &KnowledgeBank, a: &QueryResult, b: &QueryResult) -> Ordering {
    let surname = |r: &QueryResult| {
        bank.card(&r.researcher)
            .map(|c| c.surname.to_lowercase())
            .unwrap_or_default()
    };
    b.score
        .partial_cmp(&a.score)
        .unwrap_or(Ordering::Equal)
        .then_with(|| surname(a).cmp(&surname(b)))
        .then_with(|| a.researcher.cmp(&b.researcher))
}

pub fn search(bank: &KnowledgeBank, query: &str, facet: Option<Facet>, limit: usize) -> Vec<QueryResult> {
    search_with(
        bank,
        query,
        &SearchOptions {
            facet,
            limit,
            synonyms: None,
        },
    )
}

pub fn search_with(bank: &KnowledgeBank, query: &str, opts: &SearchOptions<'_>) -> Vec<QueryResult> {
    let terms = expand_query(&query_terms(query, &bank.stoplist), opts.synonyms);
    search_terms(bank, &terms, opts.facet, opts.limit)
}

impl fmt::Display for MatchedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}({})", self.facet, self.norm, self.kind.as_str())
    }
}

/// Plain-text result listing, one researcher per line.
pub fn render_results(bank: &KnowledgeBank, results: &[QueryResult]) -> String {
    let mut out = String::new();
    for (rank, r) in results.iter().enumerate() {
        let (name, email) = bank
            .card(&r.researcher)
            .map(|c| (c.full_name.as_str(), c.email_obfuscated.as_str()))
            .unwrap_or(("?", "?"));
        let terms: Vec<String> = r.matched_terms.iter().map(ToString::to_string).collect();
        out.push_str(&format!(
            "{}\t{:.4}\t{} <{}>\t{}\n",
            rank + 1,
            r.score,
            name,
            email,
            terms.join(" ")
        ));
    }
    out
}

/// A shared ranking vector: query, facet filter, expected researcher order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryVector {
    pub query: String,
    pub facet: Option<Facet>,
    pub expected: Vec<ResearcherId>,
}

fn facet_token(facet: Option<Facet>) -> &'static str {
    facet.map(Facet::as_str).unwrap_or("both")
}

/// Runs each query and records the ranking as `query<TAB>facet<TAB>ids`.
pub fn render_query_vectors(bank: &KnowledgeBank, queries: &[(&str, Option<Facet>)], limit: usize) -> String {
    let mut out = String::new();
    for &(q, facet) in queries {
        let ids: Vec<String> = search(bank, q, facet, limit)
            .into_iter()
            .map(|r| r.researcher.to_string())
            .collect();
        out.push_str(&format!("{q}\t{}\t{}\n", facet_token(facet), ids.join(",")));
    }
    out
}

pub fn parse_query_vectors(text: &str) -> Result<Vec<QueryVector>> {
    text.lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let mut parts = line.split('\t');
            let (Some(query), Some(facet), Some(ids), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(Error::Format(format!("bad query vector line {line:?}")));
            };
            let facet = match facet {
                "both" => None,
                other => Some(other.parse()?),
            };
            Ok(QueryVector {
                query: query.to_string(),
                facet,
                expected: ids
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(ResearcherId::from)
                    .collect(),
            })
        })
        .collect()
}
