//! Independent reference implementations used as test oracles. None of these
//! go through the permutation, bank, scoring or layout code they check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use scibank::ingest::{split_name, Researcher};
use scibank::normalize::canonicalize;

pub const STOPWORDS: &[&str] = &[
    "di", "del", "della", "dei", "delle", "e", "la", "il", "lo", "le", "per", "con", "da", "in",
    "a", "of", "the", "and", "for", "on", "to",
];

pub fn oracle_admits(word: &str, stop: &BTreeSet<String>, min_length: usize) -> bool {
    let mut chars = 0;
    let mut digits = true;
    for c in word.chars() {
        chars += 1;
        digits &= c.is_ascii_digit();
    }
    !word.is_empty() && chars >= min_length && !digits && !stop.contains(word)
}

pub fn default_stop() -> BTreeSet<String> {
    STOPWORDS.iter().map(|s| s.to_string()).collect()
}

/// Split every phrase on spaces and filter: the expected word-term set.
pub fn oracle_words(phrases: &[String], stop: &BTreeSet<String>, min_length: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for p in phrases {
        let Ok(c) = canonicalize(p) else { continue };
        for w in c.norm.split(' ') {
            if oracle_admits(w, stop, min_length) {
                out.insert(w.to_string());
            }
        }
    }
    out
}

/// Per researcher: (phrase norms, word norms) of one facet.
pub fn oracle_terms(phrases: &[String], stop: &BTreeSet<String>, min_length: usize) -> (BTreeSet<String>, BTreeSet<String>) {
    let norms: BTreeSet<String> = phrases.iter().filter_map(|p| canonicalize(p).ok()).map(|c| c.norm).collect();
    let words = norms
        .iter()
        .flat_map(|n| n.split(' '))
        .filter(|w| oracle_admits(w, stop, min_length))
        .map(str::to_string)
        .collect();
    (norms, words)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleHit {
    pub id: String,
    pub score: f64,
}

/// Brute-force scorer: enumerate every (researcher, query term, facet)
/// triple and apply the scoring rule directly.
pub fn oracle_search(
    researchers: &[Researcher],
    query: &str,
    facets: &[usize],
    synonyms: &BTreeMap<String, BTreeSet<String>>,
    limit: usize,
) -> Vec<OracleHit> {
    let stop = default_stop();
    let Ok(q) = canonicalize(query) else { return Vec::new() };
    // (norm, kind) with kind 0 = phrase, 1 = word, 2 = synonym
    let mut terms: Vec<(String, u8)> = vec![(q.norm.clone(), 0)];
    if q.norm.contains(' ') {
        let mut seen = BTreeSet::new();
        for w in q.norm.split(' ') {
            if oracle_admits(w, &stop, 2) && seen.insert(w) {
                terms.push((w.to_string(), 1));
            }
        }
    }
    let originals: BTreeSet<String> = terms.iter().map(|t| t.0.clone()).collect();
    let mut extra = BTreeSet::new();
    for t in originals.iter() {
        if let Some(syns) = synonyms.get(t) {
            for s in syns {
                if !originals.contains(s) {
                    extra.insert(s.clone());
                }
            }
        }
    }
    terms.extend(extra.into_iter().map(|s| (s, 2)));

    let per: Vec<[(BTreeSet<String>, BTreeSet<String>); 2]> = researchers
        .iter()
        .map(|r| [oracle_terms(&r.keywords, &stop, 2), oracle_terms(&r.expertise, &stop, 2)])
        .collect();
    let n = researchers.len() as f64;

    let mut hits: Vec<(String, String, Vec<((usize, String, u8), f64)>)> = Vec::new();
    for (ri, r) in researchers.iter().enumerate() {
        let mut contributions = Vec::new();
        for &f in facets {
            for (t, kind) in &terms {
                let df = per.iter().filter(|p| p[f].0.contains(t) || p[f].1.contains(t)).count();
                let (phrases, words) = &per[ri][f];
                if !(phrases.contains(t) || words.contains(t)) {
                    continue;
                }
                let effective = match kind {
                    0 if phrases.contains(t) => 0,
                    0 | 1 => 1,
                    _ => 2,
                };
                let weight = [2.0, 1.0, 0.5][effective as usize];
                contributions.push(((f, t.clone(), effective), (1.0 + n / df as f64).ln() * weight));
            }
        }
        if !contributions.is_empty() {
            contributions.sort_by(|a, b| a.0.cmp(&b.0));
            hits.push((r.id().to_string(), split_name(&r.full_name).0.to_lowercase(), contributions));
        }
    }
    let mut out: Vec<(OracleHit, String)> = hits
        .into_iter()
        .map(|(id, surname, c)| (OracleHit { id, score: c.iter().map(|x| x.1).sum() }, surname))
        .collect();
    out.sort_by(|a, b| {
        b.0.score
            .partial_cmp(&a.0.score)
            .unwrap()
            .then_with(|| a.1.cmp(&b.1))
            .then_with(|| a.0.id.cmp(&b.0.id))
    });
    out.into_iter().take(limit).map(|x| x.0).collect()
}

/// Textbook Fruchterman–Reingold step loop over plain vectors.
pub fn reference_fr(mut pos: Vec<(f64, f64)>, edges: &[(usize, usize)], w: f64, h: f64, iterations: usize) -> Vec<(f64, f64)> {
    let n = pos.len();
    let k = (w * h / n as f64).sqrt();
    let t0 = w / 10.0;
    for it in 0..iterations {
        let t = t0 * (1.0 - it as f64 / iterations as f64);
        let mut dx = vec![0.0; n];
        let mut dy = vec![0.0; n];
        for v in 0..n {
            for u in 0..n {
                if u == v {
                    continue;
                }
                let (ex, ey) = (pos[v].0 - pos[u].0, pos[v].1 - pos[u].1);
                let d = (ex * ex + ey * ey).sqrt();
                dx[v] += ex / d * (k * k / d);
                dy[v] += ey / d * (k * k / d);
            }
        }
        for &(a, b) in edges {
            let (ex, ey) = (pos[a].0 - pos[b].0, pos[a].1 - pos[b].1);
            let d = (ex * ex + ey * ey).sqrt();
            let f = d * d / k;
            dx[a] -= ex / d * f;
            dy[a] -= ey / d * f;
            dx[b] += ex / d * f;
            dy[b] += ey / d * f;
        }
        for v in 0..n {
            let len = (dx[v] * dx[v] + dy[v] * dy[v]).sqrt();
            if len > 0.0 {
                pos[v].0 += dx[v] / len * len.min(t);
                pos[v].1 += dy[v] / len * len.min(t);
            }
            pos[v].0 = pos[v].0.max(0.0).min(w);
            pos[v].1 = pos[v].1.max(0.0).min(h);
        }
    }
    pos
}

/// Adjusted sample skewness through the moment route:
/// G1 = g1 * sqrt(n(n-1)) / (n-2), g1 = m3 / m2^1.5.
pub fn oracle_skewness(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m3 = values.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n;
    let g1 = m3 / m2.powf(1.5);
    g1 * (n * (n - 1.0)).sqrt() / (n - 2.0)
}
