mod common;

use proptest::prelude::*;
use scibank::fixtures;
use scibank::ingest::{
    parse_survey_str, population_profile, write_survey, AreaCode, Position, Researcher, ResearcherId, COLUMNS,
};
use scibank::stats::{
    audit_table, distribution_summary, frequency_table, repeat_stats, response_rate, Percent, PublishedTable,
};

fn phrase() -> impl Strategy<Value = String> {
    "[a-zà-ù][a-zà-ù' -]{0,14}[a-zà-ù]".prop_map(|s| s.split_whitespace().collect::<Vec<_>>().join(" "))
}

fn researcher() -> impl Strategy<Value = Researcher> {
    (
        "[A-Z][a-z]{1,8}",
        "[A-Z]{2,6}( [A-Z]{2,6})?",
        "[a-z]{1,8}",
        0usize..5,
        1u8..=14,
        prop::collection::vec(phrase(), 0..5),
        prop::collection::vec(phrase(), 0..5),
        "[A-Z][a-z]{2,10}( [A-Z][a-z]{2,8})?",
    )
        .prop_map(|(given, surname, user, p, area, keywords, expertise, department)| Researcher {
            full_name: format!("{given} {surname}"),
            email: format!("{user}@unich.it"),
            position: Position::ALL[p],
            department,
            area: AreaCode::new(area).unwrap(),
            keywords,
            expertise,
        })
}

proptest! {
    #[test]
    fn survey_round_trips(rs in prop::collection::vec(researcher(), 0..12)) {
        let text = write_survey(&rs).unwrap();
        let (back, report) = parse_survey_str(&text).unwrap();
        prop_assert_eq!(report.rejected, 0);
        prop_assert_eq!(back, rs);
    }

    #[test]
    fn accepted_and_rejected_partition_rows(
        rs in prop::collection::vec(researcher(), 1..10),
        broken in prop::collection::vec(0usize..3, 0..6),
    ) {
        let mut text = write_survey(&rs).unwrap();
        for kind in &broken {
            text.push_str(match kind {
                0 => "Ann BIANCHI,not-an-email,Lecturer,Sport,05,a,b\n",
                1 => "Ann BIANCHI,a@b.it,Chancellor,Sport,05,a,b\n",
                _ => "Ann BIANCHI,a@b.it,Lecturer,Sport,99,a,b\n",
            });
        }
        let (back, report) = parse_survey_str(&text).unwrap();
        prop_assert_eq!(report.accepted, rs.len());
        prop_assert_eq!(report.rejected, broken.len());
        prop_assert_eq!(report.total(), rs.len() + broken.len());
        prop_assert_eq!(back.len(), report.accepted);
    }

    #[test]
    fn frequency_percents_sum_to_hundred(counts in prop::collection::vec(1u64..500, 1..30)) {
        let table = frequency_table(counts.iter().enumerate().map(|(i, &c)| (format!("row{i:02}"), c)));
        let sum: i64 = table.rows.iter().map(|r| r.percent.tenths()).sum();
        // each cell rounds by at most half a tenth
        prop_assert!((sum - 1000).abs() as f64 <= 0.5 * table.rows.len() as f64);
        prop_assert_eq!(table.total, counts.iter().sum::<u64>());
        let mut published = PublishedTable::from(&table);
        published.name = "generated".into();
        prop_assert!(audit_table(&published).is_empty());
    }

    #[test]
    fn response_rate_is_monotone(pop in 1u64..5000, a in 0u64..5000, b in 0u64..5000) {
        let (lo, hi) = (a.min(b).min(pop), a.max(b).min(pop));
        prop_assert!(response_rate(lo, pop).unwrap() <= response_rate(hi, pop).unwrap());
    }

    #[test]
    fn percent_rounds_half_up(part in 0u64..100_000, whole in 1u64..100_000) {
        prop_assume!(part <= whole);
        let exact = 1000.0 * part as f64 / whole as f64;
        let p = Percent::of(part, whole);
        prop_assert!((p.tenths() as f64 - exact).abs() <= 0.5 + 1e-9);
    }

    #[test]
    fn researcher_id_is_stable(name in "[A-Za-z ]{1,20}", email in "[a-z]{1,8}@[a-z]{1,5}\\.it") {
        let a = ResearcherId::derive(&name, &email);
        prop_assert_eq!(a.as_str().len(), 16);
        prop_assert_eq!(a, ResearcherId::derive(&name, &email));
    }
}

#[test]
fn writer_emits_canonical_header() {
    let text = write_survey(&fixtures::accounting_sample()).unwrap();
    assert_eq!(text.lines().next().unwrap(), COLUMNS.join(","));
}

#[test]
fn faculty_population_profile() {
    let profile = population_profile(&fixtures::faculty_population());
    let medicine = profile.by_department.get("Medicine").unwrap();
    assert_eq!(medicine.count, 204);
    assert_eq!(medicine.percent.to_string(), "28.0");
    assert_eq!(profile.by_department.total, 728);
}

#[test]
fn response_rate_errors() {
    assert_eq!(response_rate(1, 0).unwrap_err().code(), "E_DIV0");
    assert!(response_rate(10, 5).is_err());
}

#[test]
fn repeat_stats_on_fixtures() {
    let m = fixtures::multiplicity_fixture(988, 41, 3);
    let r = repeat_stats(&m);
    assert_eq!((r.unique, r.repeated, r.repeated_percent.to_string().as_str()), (988, 41, "4.1"));
    let m = fixtures::multiplicity_fixture(494, 17, 3);
    let r = repeat_stats(&m);
    assert_eq!((r.unique, r.repeated, r.repeated_percent.to_string().as_str()), (494, 17, "3.4"));
}

fn floats(v: &[u64]) -> Vec<f64> {
    v.iter().map(|&x| x as f64).collect()
}

#[test]
fn skewness_matches_moment_oracle() {
    let mut values = vec![1u64; 9];
    values.push(20);
    let s = distribution_summary(&values).unwrap();
    let g = s.skewness.unwrap();
    assert!((g - common::oracle_skewness(&floats(&values))).abs() < 1e-9);
    assert!((g - 10f64.sqrt()).abs() < 1e-9);
    let spread = [1u64, 2, 2, 3, 3, 3, 4, 5, 8, 13, 32];
    let s = distribution_summary(&spread).unwrap();
    assert_eq!((s.min, s.max), (1, 32));
    assert!(s.skewness.unwrap() > 0.0);
    assert!((s.skewness.unwrap() - common::oracle_skewness(&floats(&spread))).abs() < 1e-9);
    assert!(distribution_summary(&[4, 4]).unwrap().skewness.is_none());
    assert!(distribution_summary(&[]).is_err());
}

#[test]
fn published_tables_load_from_csv() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/faculties.csv")).unwrap();
    let tables = PublishedTable::from_csv("faculties", &text).unwrap();
    assert_eq!(tables.len(), 2);
    assert_eq!(tables[0].rows, fixtures::faculty_academics().rows);
    assert_eq!(tables[1].rows, fixtures::faculty_students().rows);
}
