//! Survey-export ingestion.
//!
//! The input is a UTF-8 CSV with the header
//! `full_name,email,position,department,area_code,keywords,expertise`.
//! Multi-valued cells use `;` as the list separator. Bad rows are reported and
//! skipped, they never abort the batch.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::stats::{frequency_table, FrequencyTable};

pub const COLUMNS: [&str; 7] = [
    "full_name",
    "email",
    "position",
    "department",
    "area_code",
    "keywords",
    "expertise",
];

/// Separator between phrases inside a keyword or expertise cell.
pub const LIST_SEPARATOR: char = ';';

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Position {
    FullProfessor,
    AssociateProfessor,
    SeniorLecturer,
    Lecturer,
    AssistantProfessor,
}

impl Position {
    pub const ALL: [Position; 5] = [
        Position::FullProfessor,
        Position::AssociateProfessor,
        Position::SeniorLecturer,
        Position::Lecturer,
        Position::AssistantProfessor,
    ];

    /// Token written back to CSV.
    pub fn code(self) -> &'static str {
        match self {
            Position::FullProfessor => "FullProfessor",
            Position::AssociateProfessor => "AssociateProfessor",
            Position::SeniorLecturer => "SeniorLecturer",
            Position::Lecturer => "Lecturer",
            Position::AssistantProfessor => "AssistantProfessor",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Position::FullProfessor => "Full Professor",
            Position::AssociateProfessor => "Associate Professor",
            Position::SeniorLecturer => "Senior Lecturer",
            Position::Lecturer => "Lecturer",
            Position::AssistantProfessor => "Assistant Professor",
        }
    }

    /// Case-insensitive match against the code and label columns. Spacing,
    /// underscores and hyphens are ignored.
    pub fn parse(token: &str) -> Result<Self> {
        let key = match_key(token);
        let found = Position::ALL
            .into_iter()
            .find(|p| match_key(p.code()) == key || match_key(p.label()) == key)
            .or_else(|| (key == "associatedprofessor").then_some(Position::AssociateProfessor));
        found.ok_or_else(|| Error::Enum {
            kind: "position",
            token: token.to_string(),
        })
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One of the 14 Italian research areas, `01` to `14`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AreaCode(u8);

const AREA_NAMES: [&str; 14] = [
    "Mathematics and Informatics",
    "Physical Sciences",
    "Chemical Sciences",
    "Earth Sciences",
    "Biological Sciences",
    "Medical Sciences",
    "Agricultural Sciences and veterinary",
    "Civil Engineering and Architecture",
    "Industrial Engineering and Information",
    "Study of the Ancient, Philological and Literary, Historical-artistic and Eastern",
    "Historical Sciences, Philosophical, Education, Psychological, Demo-anthropological, Geography, Sports",
    "Law",
    "Economics, Management, Accounting and Statistics",
    "Social and Political Sciences",
];

impl AreaCode {
    pub fn new(code: u8) -> Result<Self> {
        if (1..=14).contains(&code) {
            Ok(AreaCode(code))
        } else {
            Err(Error::Enum {
                kind: "area",
                token: code.to_string(),
            })
        }
    }

    pub fn all() -> impl Iterator<Item = AreaCode> {
        (1..=14).map(AreaCode)
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn name(self) -> &'static str {
        AREA_NAMES[usize::from(self.0) - 1]
    }

    /// Accepts `"06"`, `"6"`, `"06: Medical Sciences"` or the area name.
    pub fn parse(token: &str) -> Result<Self> {
        let err = || Error::Enum {
            kind: "area",
            token: token.to_string(),
        };
        let token = token.trim();
        let head = token.split(':').next().unwrap_or("").trim();
        if !head.is_empty() && head.bytes().all(|b| b.is_ascii_digit()) {
            return head.parse::<u8>().ok().and_then(|c| AreaCode::new(c).ok()).ok_or_else(err);
        }
        let key = match_key(token);
        AreaCode::all()
            .find(|a| match_key(a.name()) == key)
            .ok_or_else(err)
    }
}

impl fmt::Display for AreaCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}", self.0)
    }
}

fn match_key(token: &str) -> String {
    token
        .chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

/// Stable researcher identifier: a digest of name and email.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ResearcherId(String);

impl ResearcherId {
    pub fn derive(full_name: &str, email: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(full_name.as_bytes());
        hasher.update([0x1f]);
        hasher.update(email.as_bytes());
        ResearcherId(hex::encode(&hasher.finalize()[..8]))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for ResearcherId {
    fn from(s: &str) -> Self {
        ResearcherId(s.to_string())
    }
}

impl fmt::Display for ResearcherId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One accepted survey record. Phrases are raw: split and trimmed only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Researcher {
    pub full_name: String,
    pub email: String,
    pub position: Position,
    pub department: String,
    pub area: AreaCode,
    pub keywords: Vec<String>,
    pub expertise: Vec<String>,
}

impl Researcher {
    pub fn id(&self) -> ResearcherId {
        ResearcherId::derive(&self.full_name, &self.email)
    }

    /// Surname and given name.
    ///
    /// A trailing run of all-capitals tokens is taken as the surname
    /// ("Daniela DI BERARDINO"), otherwise the last token is.
    pub fn name_parts(&self) -> (String, String) {
        split_name(&self.full_name)
    }
}

pub fn split_name(full_name: &str) -> (String, String) {
    let tokens: Vec<&str> = full_name.split_whitespace().collect();
    if tokens.len() < 2 {
        return (tokens.join(" "), String::new());
    }
    let is_caps = |t: &str| t.chars().any(char::is_alphabetic) && !t.chars().any(char::is_lowercase);
    let caps_run = tokens.iter().rev().take_while(|t| is_caps(t)).count();
    let split = if caps_run > 0 && caps_run < tokens.len() {
        tokens.len() - caps_run
    } else {
        tokens.len() - 1
    };
    (tokens[split..].join(" "), tokens[..split].join(" "))
}

/// Checks the `local@domain` shape: exactly one `@`, both sides nonempty.
pub fn validate_email(addr: &str) -> Result<()> {
    let mut parts = addr.split('@');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(local), Some(domain), None) if !local.is_empty() && !domain.is_empty() => Ok(()),
        _ => Err(Error::Email(addr.to_string())),
    }
}

pub fn split_phrases(cell: &str) -> Vec<String> {
    cell.split(LIST_SEPARATOR)
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(str::to_string)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// 1-based data row (the header is not counted).
    pub row: usize,
    pub code: &'static str,
    pub message: String,
}

impl Diagnostic {
    pub fn is_warning(&self) -> bool {
        self.code.starts_with('W')
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ROW {} {} {}", self.row, self.code, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub accepted: usize,
    pub rejected: usize,
    pub diagnostics: Vec<Diagnostic>,
}

impl IngestReport {
    pub fn total(&self) -> usize {
        self.accepted + self.rejected
    }

    pub fn warnings(&self) -> usize {
        self.diagnostics.iter().filter(|d| d.is_warning()).count()
    }

    /// Line-oriented rendering, one `ROW <n> <CODE> <message>` line per diagnostic.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for d in &self.diagnostics {
            out.push_str(&d.to_string());
            out.push('\n');
        }
        out
    }
}

/// Parses a survey export.
///
/// Fails only when the stream itself is unusable (I/O, broken UTF-8, wrong
/// header). Row-level problems land in the report.
pub fn parse_survey<R: Read>(reader: R) -> Result<(Vec<Researcher>, IngestReport)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let found: Vec<&str> = headers.iter().map(str::trim).collect();
    if found != COLUMNS {
        return Err(Error::Format(format!(
            "expected header {:?}, found {:?}",
            COLUMNS.join(","),
            found.join(",")
        )));
    }

    let mut researchers = Vec::new();
    let mut report = IngestReport::default();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record?;
        match parse_row(&record) {
            Ok(r) => {
                if r.keywords.is_empty() && r.expertise.is_empty() {
                    report.diagnostics.push(Diagnostic {
                        row,
                        code: "W_EMPTY",
                        message: "no keywords and no expertise".to_string(),
                    });
                }
                report.accepted += 1;
                researchers.push(r);
            }
            Err((code, message)) => {
                report.rejected += 1;
                report.diagnostics.push(Diagnostic { row, code, message });
            }
        }
    }
    Ok((researchers, report))
}

pub fn parse_survey_str(text: &str) -> Result<(Vec<Researcher>, IngestReport)> {
    parse_survey(text.as_bytes())
}

fn parse_row(record: &csv::StringRecord) -> std::result::Result<Researcher, (&'static str, String)> {
    if record.len() != COLUMNS.len() {
        return Err((
            "E_COLUMNS",
            format!("expected {} fields, found {}", COLUMNS.len(), record.len()),
        ));
    }
    let field = |i: usize| record.get(i).unwrap_or("").trim();
    let full_name = field(0).split_whitespace().collect::<Vec<_>>().join(" ");
    if full_name.is_empty() {
        return Err(("E_FIELD", "full_name is empty".to_string()));
    }
    let email = field(1).to_string();
    validate_email(&email).map_err(|e| (e.code(), e.to_string()))?;
    let position = Position::parse(field(2)).map_err(|e| (e.code(), e.to_string()))?;
    let area = AreaCode::parse(field(4)).map_err(|e| (e.code(), e.to_string()))?;
    Ok(Researcher {
        full_name,
        email,
        position,
        department: field(3).to_string(),
        area,
        keywords: split_phrases(field(5)),
        expertise: split_phrases(field(6)),
    })
}

/// Serializes researchers back to the survey CSV schema.
pub fn write_survey(researchers: &[Researcher]) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(COLUMNS)?;
    for r in researchers {
        let sep = format!("{LIST_SEPARATOR} ");
        wtr.write_record([
            r.full_name.as_str(),
            r.email.as_str(),
            r.position.code(),
            r.department.as_str(),
            &r.area.to_string(),
            &r.keywords.join(&sep),
            &r.expertise.join(&sep),
        ])?;
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| Error::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}

/// Composition of a researcher population.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationProfile {
    pub by_position: FrequencyTable,
    pub by_area: FrequencyTable,
    pub by_department: FrequencyTable,
}

pub fn population_profile(researchers: &[Researcher]) -> PopulationProfile {
    let mut positions: BTreeMap<String, u64> = BTreeMap::new();
    let mut areas: BTreeMap<String, u64> = BTreeMap::new();
    let mut departments: BTreeMap<String, u64> = BTreeMap::new();
    for r in researchers {
        *positions.entry(r.position.label().to_string()).or_default() += 1;
        *areas
            .entry(format!("{}: {}", r.area, r.area.name()))
            .or_default() += 1;
        *departments.entry(r.department.clone()).or_default() += 1;
    }
    PopulationProfile {
        by_position: frequency_table(positions),
        by_area: frequency_table(areas),
        by_department: frequency_table(departments),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "full_name,email,position,department,area_code,keywords,expertise\n";

    #[test]
    fn four_keyword_phrases() {
        let csv = format!(
            "{HEADER}Stefania MIGLIORI,s.migliori@unich.it,Associate Professor,Economics,13,\
             crisis management; corporate governance; small and medium enterprises; spin-off,accounting\n"
        );
        let (rs, report) = parse_survey_str(&csv).unwrap();
        assert_eq!(report.accepted, 1);
        assert!(report.diagnostics.is_empty());
        assert_eq!(
            rs[0].keywords,
            vec![
                "crisis management",
                "corporate governance",
                "small and medium enterprises",
                "spin-off"
            ]
        );
    }

    #[test]
    fn expertise_only_is_accepted_silently() {
        let csv = format!("{HEADER}A B,a@b.it,Lecturer,Law,12,,contracts; torts\n");
        let (rs, report) = parse_survey_str(&csv).unwrap();
        assert_eq!(rs.len(), 1);
        assert!(rs[0].keywords.is_empty());
        assert_eq!(rs[0].expertise.len(), 2);
        assert!(report.diagnostics.is_empty());
    }

    #[test]
    fn area_out_of_range_is_rejected() {
        let csv = format!("{HEADER}A B,a@b.it,Lecturer,Law,15,x,\n");
        let (rs, report) = parse_survey_str(&csv).unwrap();
        assert!(rs.is_empty());
        assert_eq!(report.rejected, 1);
        assert_eq!(report.diagnostics[0].code, "E_ENUM");
        assert!(report.render().starts_with("ROW 1 E_ENUM "));
    }

    #[test]
    fn bad_email_and_position() {
        let csv = format!(
            "{HEADER}A B,a.b.it,Lecturer,Law,12,x,\nC D,c@d,Dean,Law,12,x,\nE F,e@f,lecturer,Law,12,,\n"
        );
        let (rs, report) = parse_survey_str(&csv).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!((report.accepted, report.rejected), (1, 2));
        let codes: Vec<_> = report.diagnostics.iter().map(|d| (d.row, d.code)).collect();
        assert_eq!(codes, vec![(1, "E_EMAIL"), (2, "E_ENUM"), (3, "W_EMPTY")]);
    }

    #[test]
    fn wrong_header_is_fatal() {
        let err = parse_survey_str("name,email\nx,y\n").unwrap_err();
        assert_eq!(err.code(), "E_FORMAT");
    }

    #[test]
    fn short_row_is_rejected() {
        let csv = format!("{HEADER}A B,a@b.it,Lecturer\n");
        let (_, report) = parse_survey_str(&csv).unwrap();
        assert_eq!(report.diagnostics[0].code, "E_COLUMNS");
    }

    #[test]
    fn email_shapes() {
        assert!(validate_email("a@b").is_ok());
        assert!(validate_email("a@b@c").is_err());
        assert!(validate_email("@b").is_err());
        assert!(validate_email("a@").is_err());
        assert!(validate_email("ab").is_err());
    }

    #[test]
    fn area_tokens() {
        assert_eq!(AreaCode::parse("06").unwrap().get(), 6);
        assert_eq!(AreaCode::parse("6").unwrap().get(), 6);
        assert_eq!(AreaCode::parse("13: Economics, Management, Accounting and Statistics").unwrap().get(), 13);
        assert_eq!(AreaCode::parse("law").unwrap().get(), 12);
        assert!(AreaCode::parse("00").is_err());
        assert!(AreaCode::parse("").is_err());
    }

    #[test]
    fn position_tokens() {
        assert_eq!(Position::parse("FULL PROFESSOR").unwrap(), Position::FullProfessor);
        assert_eq!(Position::parse("full_professor").unwrap(), Position::FullProfessor);
        assert_eq!(Position::parse("Associated professor").unwrap(), Position::AssociateProfessor);
        assert!(Position::parse("rector").is_err());
    }

    #[test]
    fn surname_detection() {
        assert_eq!(split_name("Daniela DI BERARDINO"), ("DI BERARDINO".into(), "Daniela".into()));
        assert_eq!(split_name("Mario Rossi"), ("Rossi".into(), "Mario".into()));
        assert_eq!(split_name("Plato"), ("Plato".into(), String::new()));
    }

    #[test]
    fn profile_single_position() {
        let r = Researcher {
            full_name: "A B".into(),
            email: "a@b".into(),
            position: Position::FullProfessor,
            department: "Law".into(),
            area: AreaCode::new(12).unwrap(),
            keywords: vec!["x".into()],
            expertise: vec![],
        };
        let profile = population_profile(&vec![r; 10]);
        assert_eq!(profile.by_position.rows.len(), 1);
        assert_eq!(profile.by_position.rows[0].percent.to_string(), "100.0");

        let empty = population_profile(&[]);
        assert_eq!(empty.by_area.total, 0);
        assert!(empty.by_area.rows.is_empty());
    }
}
