//! Reference data and synthetic generators used by the examples, the tests
//! and the acceptance suite.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ingest::{parse_survey_str, AreaCode, Position, Researcher};
use crate::stats::{PublishedRow, PublishedTable};

/// Three researchers who all list "accounting" as expertise, in survey-CSV
/// form.
pub const SAMPLE_CSV: &str = include_str!("../fixtures/accounting_sample.csv");

pub fn accounting_sample() -> Vec<Researcher> {
    let (researchers, report) = parse_survey_str(SAMPLE_CSV).expect("bundled fixture parses");
    debug_assert!(report.diagnostics.is_empty());
    researchers
}

/// Faculty, academics, academics %, students, students %.
pub const FACULTIES: [(&str, u64, f64, u64, f64); 12] = [
    ("Medicine", 204, 28.0, 3319, 12.3),
    ("Architecture", 79, 10.9, 2755, 10.2),
    ("Economics", 78, 10.7, 3211, 11.9),
    ("Humanities", 55, 7.6, 1558, 5.8),
    ("Linguistics", 55, 7.6, 2317, 8.6),
    ("Pharmacy", 52, 7.1, 3448, 12.7),
    ("Management Science", 49, 6.7, 2210, 8.2),
    ("Psychology", 38, 5.2, 3849, 14.2),
    ("Social Science", 35, 4.8, 1027, 3.8),
    ("Sport", 28, 3.8, 2030, 7.5),
    ("Mathematics, Physics, Natural Science", 28, 3.8, 324, 1.2),
    ("Education Science", 27, 3.7, 1044, 3.9),
];

/// Position, respondents, published share of respondents, published
/// response rate within the position.
pub const POSITIONS: [(&str, u64, f64, f64); 5] = [
    ("Full Professor", 61, 29.1, 26.7),
    ("Associate Professor", 64, 27.7, 31.4),
    ("Senior Lecturer", 61, 27.7, 30.5),
    ("Lecturer", 25, 11.4, 36.2),
    ("Assistant Professor", 9, 4.1, 33.3),
];

/// Area code, respondents, published share of respondents, published
/// response rate within the area.
pub const AREAS: [(u8, u64, f64, f64); 14] = [
    (1, 3, 1.4, 18.7),
    (2, 3, 1.4, 30.0),
    (3, 10, 4.5, 37.0),
    (4, 11, 5.0, 42.3),
    (5, 12, 5.4, 21.8),
    (6, 30, 13.6, 16.0),
    (7, 0, 0.0, 0.0),
    (8, 10, 4.5, 12.9),
    (9, 1, 0.4, 100.0),
    (10, 23, 10.4, 23.0),
    (11, 31, 14.2, 34.1),
    (12, 10, 4.5, 41.7),
    (13, 58, 26.5, 63.0),
    (14, 18, 8.2, 85.7),
];

pub const POPULATION: u64 = 728;
pub const RESPONDENTS: u64 = 220;

pub fn faculty_academics() -> PublishedTable {
    published("faculty-academics", FACULTIES.iter().map(|r| (r.0.to_string(), r.1, r.2)))
}

pub fn faculty_students() -> PublishedTable {
    published("faculty-students", FACULTIES.iter().map(|r| (r.0.to_string(), r.3, r.4)))
}

pub fn positions() -> PublishedTable {
    published("positions", POSITIONS.iter().map(|r| (r.0.to_string(), r.1, r.2)))
}

pub fn areas() -> PublishedTable {
    published("areas", AREAS.iter().map(|r| (format!("{:02}", r.0), r.1, r.2)))
}

fn published(name: &str, rows: impl Iterator<Item = (String, u64, f64)>) -> PublishedTable {
    PublishedTable {
        name: name.to_string(),
        rows: rows
            .map(|(label, count, percent)| PublishedRow { label, count, percent })
            .collect(),
        total: None,
    }
}

const ENGLISH: &[&str] = &[
    "accounting", "governance", "corporate", "public", "transport", "social", "capital",
    "intellectual", "management", "crisis", "innovation", "transfer", "regional", "economy",
    "small", "medium", "enterprises", "spin-off", "history", "standards", "international",
    "business", "plan", "marketing", "finance", "health", "policy", "tourism", "heritage",
    "cultural", "urban", "planning", "energy", "environment", "water", "law", "contracts",
    "migration", "education", "sport", "nutrition", "cardiology", "genetics", "imaging",
    "psychology", "children", "language", "translation", "literature", "archaeology",
    "statistics", "econometrics", "risk", "insurance", "banking", "audit", "logistics",
];

const ITALIAN: &[&str] = &[
    "contabilità", "bilancio", "sociologia", "marx", "valutazione", "azienda", "sviluppo",
    "progetti", "pianificazione", "controllo", "gestione", "principi", "contabili", "storia",
    "stato", "strategie", "aziendali", "creazione", "valore", "comunicazione", "economico",
    "finanziaria", "diritto", "lavoro", "città", "qualità", "società", "territorio", "beni",
    "culturali", "filologia", "lingua", "letteratura", "arte", "architettura", "restauro",
    "farmacologia", "chimica", "geologia", "ambiente", "impresa", "turismo", "d'azienda",
    "perché", "attività", "università",
];

const FUNCTION_WORDS: &[&str] = &[
    "di", "del", "della", "e", "la", "il", "per", "con", "in", "a", "of", "the", "and", "for",
    "on", "to", "x", "2011", "19",
];

const DECORATIONS: &[&str] = &["", "", "", "", ", ", " / ", " - ", ": ", "(", ")", ".", "'"];

fn pick<'a, R: Rng>(rng: &mut R, words: &[&'a str]) -> &'a str {
    words.choose(rng).copied().expect("nonempty word list")
}

/// A messy bilingual phrase: one to four words with mixed case, function
/// words, digits and stray punctuation.
pub fn random_phrase<R: Rng>(rng: &mut R) -> String {
    let n = rng.gen_range(1..=4);
    let mut out = String::new();
    for i in 0..n {
        if i > 0 {
            out.push_str(if rng.gen_bool(0.8) { " " } else { pick(rng, DECORATIONS) });
            if out.ends_with(|c: char| !c.is_whitespace()) {
                out.push(' ');
            }
        }
        let word = match rng.gen_range(0..10) {
            0..=3 => pick(rng, ENGLISH),
            4..=7 => pick(rng, ITALIAN),
            _ => pick(rng, FUNCTION_WORDS),
        };
        match rng.gen_range(0..6) {
            0 => out.push_str(&word.to_uppercase()),
            1 => {
                let mut cs = word.chars();
                if let Some(first) = cs.next() {
                    out.extend(first.to_uppercase());
                    out.push_str(cs.as_str());
                }
            }
            _ => out.push_str(word),
        }
    }
    if rng.gen_bool(0.1) {
        out = format!("  {out} ");
    }
    out
}

fn random_name<R: Rng>(rng: &mut R, i: usize) -> (String, String) {
    const GIVEN: &[&str] = &["Maria", "Luca", "Giulia", "Marco", "Anna", "Paolo", "Elena", "Sara"];
    const FAMILY: &[&str] = &["ROSSI", "BIANCHI", "DE LUCA", "ESPOSITO", "DI MARCO", "COLOMBO", "RICCI"];
    let given = pick(rng, GIVEN);
    let family = pick(rng, FAMILY);
    let name = format!("{given} {family}");
    let email = format!(
        "{}.{}{}@unich.it",
        given.to_lowercase(),
        family.to_lowercase().replace(' ', ""),
        i
    );
    (name, email)
}

/// Random researchers with bilingual phrases. Some have no keywords, mirroring
/// respondents who answered only the expertise question.
pub fn random_researchers<R: Rng>(rng: &mut R, n: usize) -> Vec<Researcher> {
    (0..n)
        .map(|i| {
            let (full_name, email) = random_name(rng, i);
            let kw = if rng.gen_bool(0.05) { 0 } else { rng.gen_range(1..=8) };
            let ex = rng.gen_range(0..=5);
            Researcher {
                full_name,
                email,
                position: *Position::ALL.choose(rng).expect("five positions"),
                department: pick(rng, &["Economics", "Medicine", "Humanities", "Law"]).to_string(),
                area: AreaCode::new(rng.gen_range(1..=14)).expect("area in range"),
                keywords: (0..kw).map(|_| random_phrase(rng).trim().to_string()).collect(),
                expertise: (0..ex).map(|_| random_phrase(rng).trim().to_string()).collect(),
            }
        })
        .collect()
}

/// `n` researchers with exactly `phrases` keyword and `phrases` expertise
/// phrases each, seeded.
pub fn synthetic_survey(n: usize, phrases: usize, seed: u64) -> Vec<Researcher> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let (full_name, email) = random_name(&mut rng, i);
            let gen = |rng: &mut ChaCha8Rng| -> Vec<String> {
                (0..phrases).map(|_| random_phrase(rng).trim().to_string()).collect()
            };
            Researcher {
                full_name,
                email,
                position: Position::ALL[i % Position::ALL.len()],
                department: FACULTIES[i % FACULTIES.len()].0.to_string(),
                area: AreaCode::new((i % 14) as u8 + 1).expect("area in range"),
                keywords: gen(&mut rng),
                expertise: gen(&mut rng),
            }
        })
        .collect()
}

/// A population whose departments follow the published faculty counts.
pub fn faculty_population() -> Vec<Researcher> {
    let mut out = Vec::new();
    for (faculty, count, ..) in FACULTIES {
        for i in 0..count {
            out.push(Researcher {
                full_name: format!("Member{i} {}", faculty.to_uppercase().replace([',', ' '], "")),
                email: format!("m{i}@{}.unich.it", faculty.to_lowercase().replace([',', ' '], "")),
                position: Position::ALL[(i as usize) % 5],
                department: faculty.to_string(),
                area: AreaCode::new((i % 14) as u8 + 1).expect("area in range"),
                keywords: vec![format!("topic {i}")],
                expertise: Vec::new(),
            });
        }
    }
    out
}

/// A term-multiplicity map with `unique` distinct terms of which exactly
/// `repeated` occur two or more times.
pub fn multiplicity_fixture(unique: usize, repeated: usize, seed: u64) -> BTreeMap<String, usize> {
    assert!(repeated <= unique);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..unique).collect();
    idx.shuffle(&mut rng);
    let mut map = BTreeMap::new();
    for (rank, i) in idx.into_iter().enumerate() {
        let count = if rank < repeated { rng.gen_range(2..=6) } else { 1 };
        map.insert(format!("term{i:05}"), count);
    }
    map
}

/// A raw phrase list of length `total` with exactly `distinct` values
/// (requires `distinct <= total`, and `distinct > 0` unless `total == 0`).
pub fn raw_corpus(total: usize, distinct: usize, seed: u64) -> Vec<String> {
    assert!(distinct <= total && (distinct > 0 || total == 0));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<String> = (0..distinct).map(|i| format!("phrase {i}")).collect();
    for _ in distinct..total {
        let i = rng.gen_range(0..distinct);
        out.push(format!("phrase {i}"));
    }
    out.shuffle(&mut rng);
    out
}
