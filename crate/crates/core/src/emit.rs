//! Static disclosure site and the machine-readable bank file.
//!
//! Both outputs are pure functions of the bank: no timestamps, no map
//! iteration order leaks, so identical input gives identical bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bank::{KnowledgeBank, ResearcherCard, TermEntry};
use crate::error::{Error, Result};
use crate::ingest::ResearcherId;
use crate::normalize::{Facet, Origin, StopList, TermRecord};

pub const BANK_FORMAT: u32 = 1;
pub const INDEX_PAGE: &str = "index.htm";
pub const BANK_FILE: &str = "bank.json";
pub const SIDECAR_FILE: &str = "bank.meta.json";
pub const MANIFEST_FILE: &str = "manifest.tsv";

pub fn facet_dir(facet: Facet) -> &'static str {
    match facet {
        Facet::Keyword => "keyword",
        Facet::Expertise => "expert",
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: String,
    pub bytes: usize,
    pub digest: String,
}

impl ManifestEntry {
    pub fn of(path: &str, content: &[u8]) -> Self {
        ManifestEntry {
            path: path.to_string(),
            bytes: content.len(),
            digest: hex::encode(Sha256::digest(content)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SiteManifest {
    pub files: Vec<ManifestEntry>,
}

impl SiteManifest {
    pub fn get(&self, path: &str) -> Option<&ManifestEntry> {
        self.files.iter().find(|f| f.path == path)
    }

    /// Adds an entry, keeping paths sorted and unique.
    pub fn insert(&mut self, entry: ManifestEntry) {
        match self.files.binary_search_by(|f| f.path.cmp(&entry.path)) {
            Ok(i) => self.files[i] = entry,
            Err(i) => self.files.insert(i, entry),
        }
    }

    /// `path<TAB>bytes<TAB>digest` lines.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for f in &self.files {
            let _ = writeln!(out, "{}\t{}\t{}", f.path, f.bytes, f.digest);
        }
        out
    }
}

/// File-name stem for a term: spaces become `-`, ASCII letters, digits and
/// hyphens stay, every other byte is percent-encoded.
pub fn slug(norm: &str) -> String {
    let mut out = String::with_capacity(norm.len());
    for c in norm.chars() {
        if c == ' ' {
            out.push('-');
        } else if c.is_ascii_alphanumeric() || c == '-' {
            out.push(c);
        } else {
            let mut buf = [0u8; 4];
            for b in c.encode_utf8(&mut buf).bytes() {
                let _ = write!(out, "%{b:02X}");
            }
        }
    }
    out
}

/// Relative page path of every term of a facet. Slug collisions ("spin off"
/// against "spin-off") get `_2`, `_3`, ... in norm order.
pub fn page_paths(bank: &KnowledgeBank, facet: Facet) -> BTreeMap<&str, String> {
    let mut used = BTreeSet::new();
    let mut out = BTreeMap::new();
    for norm in bank.index(facet).keys() {
        let base = slug(norm);
        let mut candidate = base.clone();
        let mut n = 2;
        while !used.insert(candidate.clone()) {
            candidate = format!("{base}_{n}");
            n += 1;
        }
        out.insert(norm.as_str(), format!("{}/{candidate}.htm", facet_dir(facet)));
    }
    out
}

/// HTML text escaping. `@` is escaped too so no address survives verbatim.
pub fn escape_html(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            '@' => out.push_str("&#64;"),
            c => out.push(c),
        }
    }
    out
}

fn href(path: &str) -> String {
    escape_html(&path.replace('%', "%25"))
}

const STYLE: &str = "body{font-family:sans-serif;margin:2em}table{border-collapse:collapse}\
td,th{border:1px solid #999;padding:.4em;vertical-align:top;text-align:left}\
ul{margin:0;padding-left:1.2em}.facet{color:#666;font-size:.8em}";

fn page(title: &str, body: &str) -> String {
    format!(
        "<!DOCTYPE html>\n<html lang=\"it\">\n<head>\n<meta charset=\"utf-8\">\n\
         <title>{}</title>\n<style>{STYLE}</style>\n</head>\n<body>\n{body}</body>\n</html>\n",
        escape_html(title)
    )
}

fn facet_marker(facet: Facet) -> &'static str {
    match facet {
        Facet::Keyword => "[K]",
        Facet::Expertise => "[E]",
    }
}

fn render_index(bank: &KnowledgeBank, paths: &[BTreeMap<&str, String>; 2]) -> String {
    let mut entries: Vec<(&str, Facet, &TermEntry)> = Facet::BOTH
        .iter()
        .flat_map(|&f| bank.index(f).iter().map(move |(n, e)| (n.as_str(), f, e)))
        .collect();
    entries.sort_by(|a, b| a.0.cmp(b.0).then(a.1.cmp(&b.1)));

    let mut body = String::from("<h1>Index of keywords and expertise</h1>\n");
    let _ = writeln!(
        body,
        "<p>{} researchers, {} keyword terms, {} expertise terms. \
         <span class=\"facet\">[K]</span> keyword, <span class=\"facet\">[E]</span> expertise.</p>",
        bank.researchers.len(),
        bank.keyword_index.len(),
        bank.expertise_index.len()
    );
    body.push_str("<ul class=\"terms\">\n");
    for (norm, facet, entry) in entries {
        let path = &paths[facet as usize][norm];
        let _ = writeln!(
            body,
            "<li><a href=\"{}\">{}</a> <span class=\"facet\">{}</span> ({})</li>",
            href(path),
            escape_html(&entry.term.display),
            facet_marker(facet),
            entry.researchers.len()
        );
    }
    body.push_str("</ul>\n");
    page("Index of keywords and expertise", &body)
}

fn render_term_list(phrases: &[String]) -> String {
    let mut out = String::from("<ul>");
    for p in phrases {
        let _ = write!(out, "<li>{}</li>", escape_html(p));
    }
    out.push_str("</ul>");
    out
}

fn render_row(card: &ResearcherCard) -> String {
    format!(
        "<tr><td>{} &lt; {} &gt;</td><td>{}</td><td>{}</td></tr>\n",
        escape_html(&card.full_name),
        escape_html(&card.email_obfuscated),
        render_term_list(&card.keywords_display),
        render_term_list(&card.expertise_display),
    )
}

fn render_term_page(facet: Facet, entry: &TermEntry, rows: &BTreeMap<&ResearcherId, String>) -> String {
    let what = match facet {
        Facet::Keyword => "a keyword",
        Facet::Expertise => "an area of expertise",
    };
    let mut body = format!(
        "<p><a href=\"../{INDEX_PAGE}\">Index</a></p>\n<h1>{}</h1>\n<p>Listing for &ldquo;{}&rdquo; as {what}: {} researcher(s).</p>\n",
        escape_html(&entry.term.display),
        escape_html(&entry.term.display),
        entry.researchers.len()
    );
    body.push_str("<table>\n<tr><th>Name</th><th>Keywords</th><th>Expertise</th></tr>\n");
    for row in entry.researchers.iter().filter_map(|id| rows.get(id)) {
        body.push_str(row);
    }
    body.push_str("</table>\n");
    page(&entry.term.display, &body)
}

/// Renders every page in memory as `(relative path, content)`, sorted by path.
pub fn render_site(bank: &KnowledgeBank) -> Vec<(String, String)> {
    let paths = [page_paths(bank, Facet::Keyword), page_paths(bank, Facet::Expertise)];
    // A researcher's row is identical on every page that lists them.
    let rows: BTreeMap<&ResearcherId, String> =
        bank.researchers.iter().map(|(id, c)| (id, render_row(c))).collect();
    let mut files = vec![(INDEX_PAGE.to_string(), render_index(bank, &paths))];
    for facet in Facet::BOTH {
        for (norm, entry) in bank.index(facet) {
            let path = paths[facet as usize][norm.as_str()].clone();
            files.push((path, render_term_page(facet, entry, &rows)));
        }
    }
    files.sort_by(|a, b| a.0.cmp(&b.0));
    files
}

pub(crate) fn write_file(root: &Path, rel: &str, content: &[u8]) -> Result<()> {
    let path = root.join(rel);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(&path, content).map_err(|e| Error::io(&path, e))
}

/// Writes the site under `out_dir` and returns its manifest.
pub fn emit_site(bank: &KnowledgeBank, out_dir: &Path) -> Result<SiteManifest> {
    let mut manifest = SiteManifest::default();
    for dir in Facet::BOTH.map(facet_dir) {
        let dir = out_dir.join(dir);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }
    for (path, content) in render_site(bank) {
        let target = out_dir.join(&path);
        fs::write(&target, content.as_bytes()).map_err(|e| Error::io(&target, e))?;
        manifest.insert(ManifestEntry::of(&path, content.as_bytes()));
    }
    Ok(manifest)
}

#[derive(Debug, Serialize, Deserialize)]
struct BankFile {
    #[serde(rename = "bank-format")]
    format: u32,
    metadata: Metadata,
    researchers: BTreeMap<ResearcherId, CardFile>,
    keyword_index: BTreeMap<String, EntryFile>,
    expertise_index: BTreeMap<String, EntryFile>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Metadata {
    tool: String,
    version: String,
    researcher_count: usize,
    stoplist: StopList,
}

#[derive(Debug, Serialize, Deserialize)]
struct CardFile {
    full_name: String,
    surname: String,
    given_name: String,
    email_obfuscated: String,
    keywords_display: Vec<String>,
    expertise_display: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EntryFile {
    display: String,
    origin: Origin,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source_phrase: Option<String>,
    researchers: Vec<ResearcherId>,
    phrase_holders: Vec<ResearcherId>,
}

/// Serializes the bank as pretty JSON with sorted keys.
pub fn emit_bank_file(bank: &KnowledgeBank) -> String {
    let index = |facet: Facet| -> BTreeMap<String, EntryFile> {
        bank.index(facet)
            .iter()
            .map(|(norm, e)| {
                (
                    norm.clone(),
                    EntryFile {
                        display: e.term.display.clone(),
                        origin: e.term.origin,
                        source_phrase: e.term.source_phrase.clone(),
                        researchers: e.researchers.clone(),
                        phrase_holders: e.phrase_holders.clone(),
                    },
                )
            })
            .collect()
    };
    let file = BankFile {
        format: BANK_FORMAT,
        metadata: Metadata {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            researcher_count: bank.researchers.len(),
            stoplist: bank.stoplist.clone(),
        },
        researchers: bank
            .researchers
            .iter()
            .map(|(id, c)| {
                (
                    id.clone(),
                    CardFile {
                        full_name: c.full_name.clone(),
                        surname: c.surname.clone(),
                        given_name: c.given_name.clone(),
                        email_obfuscated: c.email_obfuscated.clone(),
                        keywords_display: c.keywords_display.clone(),
                        expertise_display: c.expertise_display.clone(),
                    },
                )
            })
            .collect(),
        keyword_index: index(Facet::Keyword),
        expertise_index: index(Facet::Expertise),
    };
    // Routing through Value sorts every object's keys.
    let value = serde_json::to_value(&file).expect("bank serializes");
    let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
    text.push('\n');
    text
}

/// Parses a bank file, checking the format tag and referential integrity.
pub fn load_bank(text: &str) -> Result<KnowledgeBank> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    match value.get("bank-format").and_then(|v| v.as_u64()) {
        Some(v) if v == u64::from(BANK_FORMAT) => {}
        other => {
            return Err(Error::Format(format!(
                "unsupported bank-format {other:?}, expected {BANK_FORMAT}"
            )))
        }
    }
    let file: BankFile = serde_json::from_value(value)?;
    let researchers: BTreeMap<ResearcherId, ResearcherCard> = file
        .researchers
        .into_iter()
        .map(|(id, c)| {
            let card = ResearcherCard {
                id: id.clone(),
                full_name: c.full_name,
                surname: c.surname,
                given_name: c.given_name,
                email_obfuscated: c.email_obfuscated,
                keywords_display: c.keywords_display,
                expertise_display: c.expertise_display,
            };
            (id, card)
        })
        .collect();
    let index = |facet: Facet, entries: BTreeMap<String, EntryFile>| -> Result<BTreeMap<String, TermEntry>> {
        entries
            .into_iter()
            .map(|(norm, e)| {
                if let Some(id) = e
                    .researchers
                    .iter()
                    .chain(&e.phrase_holders)
                    .find(|id| !researchers.contains_key(*id))
                {
                    return Err(Error::Format(format!("term {norm:?} references unknown researcher {id}")));
                }
                let entry = TermEntry {
                    term: TermRecord {
                        display: e.display,
                        norm: norm.clone(),
                        facet,
                        origin: e.origin,
                        source_phrase: e.source_phrase,
                    },
                    researchers: e.researchers,
                    phrase_holders: e.phrase_holders,
                };
                Ok((norm, entry))
            })
            .collect()
    };
    let keyword_index = index(Facet::Keyword, file.keyword_index)?;
    let expertise_index = index(Facet::Expertise, file.expertise_index)?;
    Ok(KnowledgeBank {
        researchers,
        keyword_index,
        expertise_index,
        stoplist: file.metadata.stoplist,
    })
}
