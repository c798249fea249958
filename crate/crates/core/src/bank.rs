//! The knowledge bank: a dual inverted index from terms to researchers.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{validate_email, Researcher, ResearcherId};
use crate::normalize::{canonicalize, CleanCorpus, Facet, StopList, TermRecord};

/// What a visitor sees for one researcher.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResearcherCard {
    pub id: ResearcherId,
    pub full_name: String,
    pub surname: String,
    pub given_name: String,
    pub email_obfuscated: String,
    pub keywords_display: Vec<String>,
    pub expertise_display: Vec<String>,
}

impl ResearcherCard {
    /// Posting order: surname, given name (case-insensitive), then id.
    pub fn sort_cmp(&self, other: &Self) -> Ordering {
        self.surname
            .to_lowercase()
            .cmp(&other.surname.to_lowercase())
            .then_with(|| self.given_name.to_lowercase().cmp(&other.given_name.to_lowercase()))
            .then_with(|| self.id.cmp(&other.id))
    }

    pub fn display(&self, facet: Facet) -> &[String] {
        match facet {
            Facet::Keyword => &self.keywords_display,
            Facet::Expertise => &self.expertise_display,
        }
    }
}

/// One index entry.
///
/// When a single-word phrase and a permuted word share a norm they share one
/// entry: `term` is then the phrase record, `phrase_holders` lists the
/// researchers who gave the exact phrase and `researchers` adds everyone whose
/// phrases contain the word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermEntry {
    pub term: TermRecord,
    pub researchers: Vec<ResearcherId>,
    #[serde(default)]
    pub phrase_holders: Vec<ResearcherId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KnowledgeBank {
    pub researchers: BTreeMap<ResearcherId, ResearcherCard>,
    pub keyword_index: BTreeMap<String, TermEntry>,
    pub expertise_index: BTreeMap<String, TermEntry>,
    /// Rules the index words were produced with; queries reuse them.
    pub stoplist: StopList,
}

impl KnowledgeBank {
    pub fn index(&self, facet: Facet) -> &BTreeMap<String, TermEntry> {
        match facet {
            Facet::Keyword => &self.keyword_index,
            Facet::Expertise => &self.expertise_index,
        }
    }

    pub fn card(&self, id: &ResearcherId) -> Option<&ResearcherCard> {
        self.researchers.get(id)
    }

    pub fn term_count(&self) -> usize {
        self.keyword_index.len() + self.expertise_index.len()
    }
}

/// Replaces the `@` of an address with `" at "`.
pub fn obfuscate_email(addr: &str) -> Result<String> {
    validate_email(addr)?;
    Ok(addr.replacen('@', " at ", 1))
}

pub fn build_bank(researchers: &[Researcher], corpus: &CleanCorpus) -> Result<KnowledgeBank> {
    if corpus.per_researcher.len() != researchers.len() {
        return Err(Error::Format(format!(
            "corpus covers {} researchers, got {}",
            corpus.per_researcher.len(),
            researchers.len()
        )));
    }

    let mut cards: BTreeMap<ResearcherId, ResearcherCard> = BTreeMap::new();
    for (r, terms) in researchers.iter().zip(&corpus.per_researcher) {
        let id = r.id();
        let (surname, given_name) = r.name_parts();
        let card = ResearcherCard {
            id: id.clone(),
            full_name: r.full_name.clone(),
            surname,
            given_name,
            email_obfuscated: obfuscate_email(&r.email)?,
            keywords_display: terms.keywords.phrases.iter().map(|c| c.display.clone()).collect(),
            expertise_display: terms.expertise.phrases.iter().map(|c| c.display.clone()).collect(),
        };
        if cards.insert(id.clone(), card).is_some() {
            return Err(Error::DuplicateId {
                id: id.to_string(),
                name: r.full_name.clone(),
            });
        }
    }

    let mut sorted: Vec<&ResearcherCard> = cards.values().collect();
    sorted.sort_by(|a, b| a.sort_cmp(b));
    let rank: BTreeMap<&ResearcherId, usize> = sorted.iter().enumerate().map(|(i, c)| (&c.id, i)).collect();
    let order = |ids: BTreeSet<ResearcherId>| -> Vec<ResearcherId> {
        let mut v: Vec<ResearcherId> = ids.into_iter().collect();
        v.sort_by_key(|id| rank[id]);
        v
    };
    let ids: Vec<ResearcherId> = researchers.iter().map(Researcher::id).collect();

    let build = |facet: Facet| {
        let mut holders: BTreeMap<&str, BTreeSet<ResearcherId>> = BTreeMap::new();
        let mut word_hits: BTreeMap<&str, BTreeSet<ResearcherId>> = BTreeMap::new();
        for (id, terms) in ids.iter().zip(&corpus.per_researcher) {
            let set = terms.facet(facet);
            for norm in set.phrase_norms() {
                holders.entry(norm).or_default().insert(id.clone());
            }
            for w in &set.words {
                word_hits.entry(w.as_str()).or_default().insert(id.clone());
            }
        }
        let facet_terms = corpus.facet(facet);
        let mut index = BTreeMap::new();
        for term in &facet_terms.phrases {
            let exact = holders.remove(term.norm.as_str()).unwrap_or_default();
            let mut all = exact.clone();
            all.extend(word_hits.remove(term.norm.as_str()).unwrap_or_default());
            index.insert(
                term.norm.clone(),
                TermEntry {
                    term: term.clone(),
                    researchers: order(all),
                    phrase_holders: order(exact),
                },
            );
        }
        for term in &facet_terms.words {
            if index.contains_key(&term.norm) {
                continue;
            }
            let all = word_hits.remove(term.norm.as_str()).unwrap_or_default();
            index.insert(
                term.norm.clone(),
                TermEntry {
                    term: term.clone(),
                    researchers: order(all),
                    phrase_holders: Vec::new(),
                },
            );
        }
        index
    };
    let keyword_index = build(Facet::Keyword);
    let expertise_index = build(Facet::Expertise);

    Ok(KnowledgeBank {
        researchers: cards,
        keyword_index,
        expertise_index,
        stoplist: corpus.stoplist.clone(),
    })
}

/// Researchers behind a term, in posting order. Unknown terms give nothing.
pub fn lookup<'b>(bank: &'b KnowledgeBank, term: &str, facet: Facet) -> Vec<&'b ResearcherCard> {
    let Ok(c) = canonicalize(term) else {
        return Vec::new();
    };
    bank.index(facet)
        .get(&c.norm)
        .map(|e| e.researchers.iter().filter_map(|id| bank.card(id)).collect())
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::normalize::{clean_corpus, Origin};

    fn fig3() -> KnowledgeBank {
        let rs = fixtures::accounting_sample();
        let corpus = clean_corpus(&rs, &StopList::default());
        build_bank(&rs, &corpus).unwrap()
    }

    fn surnames(cards: &[&ResearcherCard]) -> Vec<String> {
        cards.iter().map(|c| c.surname.clone()).collect()
    }

    #[test]
    fn accounting_expertise_lists_all_three() {
        let bank = fig3();
        let cards = lookup(&bank, "accounting", Facet::Expertise);
        assert_eq!(surnames(&cards), ["DE LUCA", "DI BERARDINO", "MIGLIORI"]);
        let entry = &bank.expertise_index["accounting"];
        assert_eq!(entry.term.origin, Origin::Phrase);
        assert_eq!(entry.phrase_holders.len(), 3);
    }

    #[test]
    fn governance_word_posting() {
        let bank = fig3();
        let entry = &bank.keyword_index["governance"];
        assert_eq!(entry.term.origin, Origin::Word);
        let cards = lookup(&bank, "governance", Facet::Keyword);
        assert_eq!(surnames(&cards), ["DI BERARDINO", "MIGLIORI"]);
    }

    #[test]
    fn lookups() {
        let bank = fig3();
        assert!(lookup(&bank, "unobtainium", Facet::Keyword).is_empty());
        assert_eq!(surnames(&lookup(&bank, "spin-off", Facet::Keyword)), ["MIGLIORI"]);
        assert_eq!(surnames(&lookup(&bank, "Spin-Off", Facet::Keyword)), ["MIGLIORI"]);
        assert!(lookup(&bank, "", Facet::Keyword).is_empty());
    }

    #[test]
    fn repeated_phrase_posted_once() {
        let mut rs = fixtures::accounting_sample();
        rs[0].keywords.push("Corporate  Governance".into());
        let corpus = clean_corpus(&rs, &StopList::default());
        let bank = build_bank(&rs, &corpus).unwrap();
        let e = &bank.keyword_index["corporate governance"];
        assert_eq!(e.researchers.len(), 2);
        assert_eq!(bank.researchers[&rs[0].id()].keywords_display.len(), 4);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let mut rs = fixtures::accounting_sample();
        rs.push(rs[0].clone());
        let corpus = clean_corpus(&rs, &StopList::default());
        assert_eq!(build_bank(&rs, &corpus).unwrap_err().code(), "E_DUP_ID");
    }

    #[test]
    fn obfuscation() {
        assert_eq!(obfuscate_email("fdeluca@unich.it").unwrap(), "fdeluca at unich.it");
        assert_eq!(obfuscate_email("a@b").unwrap(), "a at b");
        assert_eq!(obfuscate_email("a@b@c").unwrap_err().code(), "E_EMAIL");
    }

    #[test]
    fn facets_stay_separate() {
        let bank = fig3();
        assert!(bank.expertise_index.contains_key("business plan"));
        assert!(!bank.keyword_index.contains_key("business plan"));
        assert!(bank.keyword_index.contains_key("accounting"));
    }
}
