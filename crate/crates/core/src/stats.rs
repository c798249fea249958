//! Descriptive statistics: frequency tables, response rates, repeat rates,
//! distribution summaries and an audit of published percentage columns.
//!
//! Percentages are one-decimal values rounded half-up. They are computed in
//! integer tenths so no floating-point rounding can flip a cell.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A percentage with one decimal, stored as tenths of a percent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Percent(i64);

impl Percent {
    pub const ZERO: Percent = Percent(0);

    pub fn from_tenths(tenths: i64) -> Self {
        Percent(tenths)
    }

    /// `100 * part / whole` rounded half-up to one decimal; zero when `whole` is 0.
    pub fn of(part: u64, whole: u64) -> Self {
        if whole == 0 {
            return Percent::ZERO;
        }
        let (part, whole) = (u128::from(part), u128::from(whole));
        Percent(((2000 * part + whole) / (2 * whole)) as i64)
    }

    pub fn tenths(self) -> i64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 10.0
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{sign}{}.{}", abs / 10, abs % 10)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyRow {
    pub label: String,
    pub count: u64,
    pub percent: Percent,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FrequencyTable {
    pub rows: Vec<FrequencyRow>,
    pub total: u64,
}

impl FrequencyTable {
    pub fn get(&self, label: &str) -> Option<&FrequencyRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    pub fn render_text(&self, heading: &str) -> String {
        let width = self
            .rows
            .iter()
            .map(|r| r.label.chars().count())
            .chain([heading.chars().count(), 3])
            .max()
            .unwrap_or(0);
        let mut out = format!("{heading:<width$}  {:>8}  {:>7}\n", "count", "%");
        for r in &self.rows {
            out.push_str(&format!(
                "{:<width$}  {:>8}  {:>7}\n",
                r.label,
                r.count,
                r.percent.to_string()
            ));
        }
        let sum = if self.total > 0 { "100.0" } else { "0.0" };
        out.push_str(&format!("{:<width$}  {:>8}  {:>7}\n", "Sum", self.total, sum));
        out
    }

    pub fn render_csv(&self) -> String {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        // Writing into a Vec cannot fail.
        wtr.write_record(["label", "count", "percent"]).expect("in-memory write");
        for r in &self.rows {
            wtr.write_record([r.label.clone(), r.count.to_string(), r.percent.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

/// Builds a frequency table. Duplicate labels are summed. Rows come out sorted
/// by descending count, then label.
pub fn frequency_table<I, S>(counts: I) -> FrequencyTable
where
    I: IntoIterator<Item = (S, u64)>,
    S: Into<String>,
{
    let mut merged: BTreeMap<String, u64> = BTreeMap::new();
    for (label, count) in counts {
        *merged.entry(label.into()).or_default() += count;
    }
    let total: u64 = merged.values().sum();
    let mut rows: Vec<FrequencyRow> = merged
        .into_iter()
        .map(|(label, count)| FrequencyRow {
            percent: Percent::of(count, total),
            label,
            count,
        })
        .collect();
    rows.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.label.cmp(&b.label)));
    FrequencyTable { rows, total }
}

pub fn response_rate(respondents: u64, population: u64) -> Result<Percent> {
    if population == 0 {
        return Err(Error::DivisionByZero("population is zero"));
    }
    if respondents > population {
        return Err(Error::Format(format!(
            "{respondents} respondents exceed population {population}"
        )));
    }
    Ok(Percent::of(respondents, population))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RepeatStats {
    pub unique: u64,
    pub repeated: u64,
    pub repeated_percent: Percent,
}

/// How many distinct terms occur more than once.
pub fn repeat_stats<'a, I>(multiplicity: I) -> RepeatStats
where
    I: IntoIterator<Item = (&'a String, &'a usize)>,
{
    let (mut unique, mut repeated) = (0u64, 0u64);
    for (_, &count) in multiplicity {
        unique += 1;
        if count > 1 {
            repeated += 1;
        }
    }
    RepeatStats {
        unique,
        repeated,
        repeated_percent: Percent::of(repeated, unique),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSummary {
    pub n: usize,
    pub min: u64,
    pub max: u64,
    pub mean: f64,
    /// Adjusted Fisher–Pearson sample skewness. `None` below three observations.
    pub skewness: Option<f64>,
}

impl fmt::Display for DistributionSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} min={} max={} mean={:.3} skewness=",
            self.n, self.min, self.max, self.mean
        )?;
        match self.skewness {
            Some(g) => write!(f, "{g:.4}"),
            None => f.write_str("undefined"),
        }
    }
}

pub fn distribution_summary(values: &[u64]) -> Result<DistributionSummary> {
    let (Some(&min), Some(&max)) = (values.iter().min(), values.iter().max()) else {
        return Err(Error::Format("distribution summary of an empty list".into()));
    };
    let n = values.len();
    let nf = n as f64;
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / nf;
    let skewness = (n >= 3).then(|| {
        let ss: f64 = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum();
        let sd = (ss / (nf - 1.0)).sqrt();
        if sd == 0.0 {
            return 0.0;
        }
        let cubes: f64 = values.iter().map(|&v| ((v as f64 - mean) / sd).powi(3)).sum();
        nf / ((nf - 1.0) * (nf - 2.0)) * cubes
    });
    Ok(DistributionSummary {
        n,
        min,
        max,
        mean,
        skewness,
    })
}

/// A row of a published table: the printed count and the printed percent.
#[derive(Debug, Clone, PartialEq)]
pub struct PublishedRow {
    pub label: String,
    pub count: u64,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PublishedTable {
    pub name: String,
    pub rows: Vec<PublishedRow>,
    /// Denominator; defaults to the sum of the row counts.
    pub total: Option<u64>,
}

impl PublishedTable {
    pub fn total(&self) -> u64 {
        self.total
            .unwrap_or_else(|| self.rows.iter().map(|r| r.count).sum())
    }

    /// Reads a published table from CSV with a header row: a label column
    /// followed by one or more `count,percent` column pairs. Each pair becomes
    /// one table named `<name>:<count header>`.
    pub fn from_csv(name: &str, text: &str) -> Result<Vec<Self>> {
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let headers = rdr.headers()?.clone();
        if headers.len() < 3 || headers.len() % 2 == 0 {
            return Err(Error::Format(format!(
                "{name}: expected label plus count,percent column pairs, found {} columns",
                headers.len()
            )));
        }
        let mut tables: Vec<PublishedTable> = (1..headers.len())
            .step_by(2)
            .map(|i| PublishedTable {
                name: format!("{name}:{}", headers.get(i).unwrap_or("").trim()),
                rows: Vec::new(),
                total: None,
            })
            .collect();
        for record in rdr.records() {
            let record = record?;
            let get = |i: usize| record.get(i).unwrap_or("").trim();
            for (t, table) in tables.iter_mut().enumerate() {
                let col = 1 + 2 * t;
                let percent = get(col + 1)
                    .trim_end_matches('%')
                    .parse::<f64>()
                    .map_err(|e| Error::Format(format!("bad percent {:?}: {e}", get(col + 1))))?;
                table.rows.push(PublishedRow {
                    label: get(0).to_string(),
                    count: parse_count(get(col))?,
                    percent,
                });
            }
        }
        Ok(tables)
    }
}

/// Parses a count that may carry thousands separators ("3,319").
pub fn parse_count(token: &str) -> Result<u64> {
    let digits: String = token.chars().filter(|c| *c != ',' && *c != '_').collect();
    digits
        .trim()
        .parse()
        .map_err(|e| Error::Format(format!("bad count {token:?}: {e}")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditFinding {
    pub table: String,
    pub row: String,
    pub published: f64,
    pub recomputed: Percent,
}

impl fmt::Display for AuditFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AUDIT {} {}: published={:.1} recomputed={}",
            self.table, self.row, self.published, self.recomputed
        )
    }
}

/// Largest gap between a published and a recomputed percent that still counts
/// as consistent.
pub const AUDIT_TOLERANCE: f64 = 0.05;

/// Recomputes every percent cell and reports those that disagree with the
/// published value. Nothing is corrected.
pub fn audit_table(table: &PublishedTable) -> Vec<AuditFinding> {
    let total = table.total();
    table
        .rows
        .iter()
        .filter_map(|row| {
            let recomputed = Percent::of(row.count, total);
            ((row.percent - recomputed.as_f64()).abs() > AUDIT_TOLERANCE + 1e-9).then(|| {
                AuditFinding {
                    table: table.name.clone(),
                    row: row.label.clone(),
                    published: row.percent,
                    recomputed,
                }
            })
        })
        .collect()
}

impl From<&FrequencyTable> for PublishedTable {
    fn from(t: &FrequencyTable) -> Self {
        PublishedTable {
            name: String::new(),
            rows: t
                .rows
                .iter()
                .map(|r| PublishedRow {
                    label: r.label.clone(),
                    count: r.count,
                    percent: r.percent.as_f64(),
                })
                .collect(),
            total: Some(t.total),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_up_cells() {
        assert_eq!(Percent::of(204, 728).to_string(), "28.0");
        assert_eq!(Percent::of(79, 728).to_string(), "10.9");
        assert_eq!(Percent::of(5, 5).to_string(), "100.0");
        // 1/8 = 12.5 exactly at the tenths boundary: 0.125 -> 12.5, 1/16 = 6.25 -> 6.3
        assert_eq!(Percent::of(1, 16).to_string(), "6.3");
        assert_eq!(Percent::of(0, 0), Percent::ZERO);
    }

    #[test]
    fn table_sorting() {
        let t = frequency_table([("b", 2u64), ("a", 2), ("c", 5)]);
        let labels: Vec<_> = t.rows.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, ["c", "a", "b"]);
        assert_eq!(t.total, 9);
    }

    #[test]
    fn response_rates() {
        assert_eq!(response_rate(220, 728).unwrap().to_string(), "30.2");
        assert_eq!(response_rate(9, 27).unwrap().to_string(), "33.3");
        assert_eq!(response_rate(0, 100).unwrap().to_string(), "0.0");
        assert_eq!(response_rate(1, 0).unwrap_err().code(), "E_DIV0");
    }

    #[test]
    fn repeat_counts() {
        let m: BTreeMap<String, usize> =
            [("a".to_string(), 1), ("b".to_string(), 3), ("c".to_string(), 1)].into();
        let s = repeat_stats(&m);
        assert_eq!((s.unique, s.repeated), (3, 1));
        assert_eq!(s.repeated_percent.to_string(), "33.3");
        assert_eq!(repeat_stats(&BTreeMap::new()), RepeatStats::default());
    }

    #[test]
    fn constant_distribution_has_zero_skew() {
        let s = distribution_summary(&[5, 5, 5, 5]).unwrap();
        assert_eq!(s.skewness, Some(0.0));
        assert_eq!(s.mean, 5.0);
        assert_eq!(distribution_summary(&[1, 2]).unwrap().skewness, None);
        assert!(distribution_summary(&[]).is_err());
    }

    #[test]
    fn audit_flags_only_disagreeing_cells() {
        let table = PublishedTable {
            name: "t".into(),
            rows: vec![
                PublishedRow { label: "x".into(), count: 61, percent: 29.1 },
                PublishedRow { label: "y".into(), count: 159, percent: 72.3 },
            ],
            total: Some(220),
        };
        let findings = audit_table(&table);
        assert_eq!(findings.len(), 1);
        assert_eq!(findings[0].to_string(), "AUDIT t x: published=29.1 recomputed=27.7");
    }

    #[test]
    fn published_csv() {
        let ts = PublishedTable::from_csv("t1", "label,n,percent,m,pm\nMedicine,204,28.0,\"3,319\",12.3\n").unwrap();
        assert_eq!(ts.len(), 2);
        assert_eq!(ts[1].name, "t1:m");
        assert_eq!(ts[1].rows[0].count, 3319);
        assert_eq!(ts[1].rows[0].percent, 12.3);
        assert!(PublishedTable::from_csv("t", "label,count\nx,1\n").is_err());
    }
}
