//! Term cleaning: canonical spelling, deduplication, permutation of composed
//! phrases into single index words, and false-positive filtering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::Researcher;

/// Which survey question a term answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Facet {
    Keyword,
    Expertise,
}

impl Facet {
    pub const BOTH: [Facet; 2] = [Facet::Keyword, Facet::Expertise];

    pub fn as_str(self) -> &'static str {
        match self {
            Facet::Keyword => "keyword",
            Facet::Expertise => "expertise",
        }
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Facet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "keyword" | "keywords" | "k" => Ok(Facet::Keyword),
            "expertise" | "expert" | "e" => Ok(Facet::Expertise),
            _ => Err(Error::Enum {
                kind: "facet",
                token: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Phrase,
    Word,
}

/// A normalized index term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TermRecord {
    pub display: String,
    pub norm: String,
    pub facet: Facet,
    pub origin: Origin,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_phrase: Option<String>,
}

impl TermRecord {
    pub fn phrase(canonical: &Canonical, facet: Facet) -> Self {
        TermRecord {
            display: canonical.display.clone(),
            norm: canonical.norm.clone(),
            facet,
            origin: Origin::Phrase,
            source_phrase: None,
        }
    }

    pub fn word(word: &str, facet: Facet, source_phrase: &str) -> Self {
        TermRecord {
            display: word.to_string(),
            norm: word.to_string(),
            facet,
            origin: Origin::Word,
            source_phrase: Some(source_phrase.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Canonical {
    /// Trimmed, whitespace-collapsed original.
    pub display: String,
    /// Folded form used as the index key.
    pub norm: String,
}

fn is_combining_mark(c: char) -> bool {
    matches!(c as u32,
        0x0300..=0x036F | 0x1AB0..=0x1AFF | 0x1DC0..=0x1DFF | 0x20D0..=0x20FF | 0xFE20..=0xFE2F)
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || is_combining_mark(c)
}

fn is_joiner(c: char) -> bool {
    c == '-' || c == '\''
}

/// Canonical spelling of a raw phrase.
///
/// The folded form is lowercase, keeps diacritics, and replaces punctuation
/// with spaces. Hyphens and apostrophes survive only between two word
/// characters ("spin-off", "d'azienda").
pub fn canonicalize(raw: &str) -> Result<Canonical> {
    let display = raw.split_whitespace().collect::<Vec<_>>().join(" ");
    if display.is_empty() {
        return Err(Error::EmptyTerm(raw.to_string()));
    }
    let norm = fold(&display);
    if norm.is_empty() {
        return Err(Error::EmptyTerm(raw.to_string()));
    }
    Ok(Canonical { display, norm })
}

fn fold(display: &str) -> String {
    let chars: Vec<char> = display
        .chars()
        .flat_map(char::to_lowercase)
        .map(|c| match c {
            '\u{2019}' | '\u{2018}' | '`' => '\'',
            '\u{2010}' | '\u{2011}' => '-',
            c if is_word_char(c) || is_joiner(c) => c,
            _ => ' ',
        })
        .collect();
    let mut out = String::with_capacity(chars.len());
    for (i, &c) in chars.iter().enumerate() {
        let keep = if is_joiner(c) {
            let before = i.checked_sub(1).map(|j| chars[j]);
            let after = chars.get(i + 1).copied();
            matches!((before, after), (Some(b), Some(a)) if is_word_char(b) && is_word_char(a))
        } else {
            c != ' '
        };
        if keep {
            out.push(c);
        } else if !out.is_empty() && !out.ends_with(' ') {
            out.push(' ');
        }
    }
    if out.ends_with(' ') {
        out.pop();
    }
    out
}

/// Words that never become index entries on their own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopList {
    pub words: BTreeSet<String>,
    pub min_length: usize,
}

pub const DEFAULT_STOPWORDS: &[&str] = &[
    "di", "del", "della", "dei", "delle", "e", "la", "il", "lo", "le", "per", "con", "da", "in",
    "a", "of", "the", "and", "for", "on", "to",
];

pub const DEFAULT_MIN_LENGTH: usize = 2;

impl Default for StopList {
    fn default() -> Self {
        StopList {
            words: DEFAULT_STOPWORDS.iter().map(|w| w.to_string()).collect(),
            min_length: DEFAULT_MIN_LENGTH,
        }
    }
}

impl StopList {
    pub fn new<I, S>(words: I, min_length: usize) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        if min_length == 0 {
            return Err(Error::Format("min_length must be at least 1".into()));
        }
        let mut set = BTreeSet::new();
        for w in words {
            let c = canonicalize(w.as_ref())?;
            if c.norm.contains(' ') {
                return Err(Error::Format(format!(
                    "stoplist entry {:?} is not a single word",
                    w.as_ref()
                )));
            }
            set.insert(c.norm);
        }
        Ok(StopList {
            words: set,
            min_length,
        })
    }

    /// Reads the one-word-per-line format; `#` starts a comment.
    pub fn parse(text: &str, min_length: usize) -> Result<Self> {
        let words = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        StopList::new(words, min_length)
    }

    /// Whether `word` may stand as an index entry.
    pub fn admits(&self, word: &str) -> bool {
        !self.words.contains(word)
            && word.chars().count() >= self.min_length
            && !word.chars().all(|c| c.is_ascii_digit())
    }
}

/// Index words of a phrase: its space-separated tokens that pass the stoplist.
/// Unlike [`permute`], a single-word phrase yields itself (when admitted).
pub fn index_words<'a>(phrase_norm: &'a str, stoplist: &'a StopList) -> impl Iterator<Item = &'a str> {
    phrase_norm.split(' ').filter(|w| !w.is_empty() && stoplist.admits(w))
}

/// Splits a composed phrase into single-word terms.
///
/// Single-word phrases produce nothing: the phrase entry already covers them.
/// Output is deduplicated and keeps first-occurrence order.
pub fn permute(phrase_norm: &str, facet: Facet, stoplist: &StopList) -> Vec<TermRecord> {
    if !phrase_norm.contains(' ') {
        return Vec::new();
    }
    let mut seen = BTreeSet::new();
    index_words(phrase_norm, stoplist)
        .filter(|w| seen.insert(*w))
        .map(|w| TermRecord::word(w, facet, phrase_norm))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dedup {
    pub unique: Vec<String>,
    pub multiplicity: BTreeMap<String, usize>,
}

pub fn dedupe<S: AsRef<str>>(phrases: &[S]) -> Dedup {
    let mut out = Dedup::default();
    for p in phrases {
        let p = p.as_ref();
        let count = out.multiplicity.entry(p.to_string()).or_insert(0);
        if *count == 0 {
            out.unique.push(p.to_string());
        }
        *count += 1;
    }
    out
}

/// One researcher's cleaned terms within one facet.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FacetSet {
    /// Unique phrases, first-occurrence order.
    pub phrases: Vec<Canonical>,
    /// Unique index words (sorted), including admitted single-word phrases.
    pub words: Vec<String>,
}

impl FacetSet {
    pub fn phrase_norms(&self) -> impl Iterator<Item = &str> {
        self.phrases.iter().map(|c| c.norm.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ResearcherTerms {
    pub keywords: FacetSet,
    pub expertise: FacetSet,
}

impl ResearcherTerms {
    pub fn facet(&self, facet: Facet) -> &FacetSet {
        match facet {
            Facet::Keyword => &self.keywords,
            Facet::Expertise => &self.expertise,
        }
    }
}

/// Corpus-wide terms of one facet.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FacetTerms {
    /// Unique phrases in first-occurrence order across the corpus.
    pub phrases: Vec<TermRecord>,
    /// Unique words, sorted by norm.
    pub words: Vec<TermRecord>,
    /// Raw occurrences of every phrase norm.
    pub multiplicity: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FacetStats {
    pub raw: usize,
    /// Raw phrases that folded to nothing (pure punctuation).
    pub dropped: usize,
    pub unique_phrases: usize,
    pub unique_words: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CleaningStats {
    pub researchers: usize,
    pub keyword: FacetStats,
    pub expertise: FacetStats,
}

impl fmt::Display for CleaningStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "researchers: {}", self.researchers)?;
        for (name, s) in [("keywords", self.keyword), ("expertise", self.expertise)] {
            writeln!(
                f,
                "{name}: raw={} unique_phrases={} unique_words={} dropped={}",
                s.raw, s.unique_phrases, s.unique_words, s.dropped
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CleanCorpus {
    pub keyword: FacetTerms,
    pub expertise: FacetTerms,
    /// Aligned with the researcher slice passed to [`clean_corpus`].
    pub per_researcher: Vec<ResearcherTerms>,
    pub stoplist: StopList,
    pub stats: CleaningStats,
}

impl CleanCorpus {
    pub fn facet(&self, facet: Facet) -> &FacetTerms {
        match facet {
            Facet::Keyword => &self.keyword,
            Facet::Expertise => &self.expertise,
        }
    }
}

#[derive(Default)]
struct FacetAccumulator {
    raw_norms: Vec<String>,
    first_display: BTreeMap<String, String>,
    dropped: usize,
}

impl FacetAccumulator {
    fn researcher(&mut self, raw: &[String], stoplist: &StopList) -> FacetSet {
        let mut set = FacetSet::default();
        let mut seen = BTreeSet::new();
        let mut words = BTreeSet::new();
        for phrase in raw {
            let Ok(c) = canonicalize(phrase) else {
                self.dropped += 1;
                continue;
            };
            self.raw_norms.push(c.norm.clone());
            self.first_display
                .entry(c.norm.clone())
                .or_insert_with(|| c.display.clone());
            if seen.insert(c.norm.clone()) {
                words.extend(index_words(&c.norm, stoplist).map(str::to_string));
                set.phrases.push(c);
            }
        }
        set.words = words.into_iter().collect();
        set
    }

    fn finish(self, facet: Facet, stoplist: &StopList) -> (FacetTerms, FacetStats) {
        let dedup = dedupe(&self.raw_norms);
        let phrases: Vec<TermRecord> = dedup
            .unique
            .iter()
            .map(|norm| TermRecord {
                display: self.first_display[norm].clone(),
                norm: norm.clone(),
                facet,
                origin: Origin::Phrase,
                source_phrase: None,
            })
            .collect();
        let mut words: BTreeMap<String, TermRecord> = BTreeMap::new();
        for p in &phrases {
            let produced: Vec<String> = if p.norm.contains(' ') {
                permute(&p.norm, facet, stoplist)
                    .into_iter()
                    .map(|t| t.norm)
                    .collect()
            } else if stoplist.admits(&p.norm) {
                vec![p.norm.clone()]
            } else {
                Vec::new()
            };
            for w in produced {
                words
                    .entry(w.clone())
                    .or_insert_with(|| TermRecord::word(&w, facet, &p.norm));
            }
        }
        let stats = FacetStats {
            raw: self.raw_norms.len() + self.dropped,
            dropped: self.dropped,
            unique_phrases: phrases.len(),
            unique_words: words.len(),
        };
        (
            FacetTerms {
                phrases,
                words: words.into_values().collect(),
                multiplicity: dedup.multiplicity,
            },
            stats,
        )
    }
}

/// Runs the full cleaning stage over a batch of researchers.
pub fn clean_corpus(researchers: &[Researcher], stoplist: &StopList) -> CleanCorpus {
    let mut kw = FacetAccumulator::default();
    let mut ex = FacetAccumulator::default();
    let per_researcher = researchers
        .iter()
        .map(|r| ResearcherTerms {
            keywords: kw.researcher(&r.keywords, stoplist),
            expertise: ex.researcher(&r.expertise, stoplist),
        })
        .collect();
    let (keyword, kw_stats) = kw.finish(Facet::Keyword, stoplist);
    let (expertise, ex_stats) = ex.finish(Facet::Expertise, stoplist);
    CleanCorpus {
        keyword,
        expertise,
        per_researcher,
        stoplist: stoplist.clone(),
        stats: CleaningStats {
            researchers: researchers.len(),
            keyword: kw_stats,
            expertise: ex_stats,
        },
    }
}
