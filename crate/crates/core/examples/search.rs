//! Ranked search over the bank, optionally with a synonym table.
//!
//!     cargo run --example search -- spin-off small business

use scibank::bank::build_bank;
use scibank::fixtures;
use scibank::normalize::{clean_corpus, StopList};
use scibank::query::{render_results, search_with, SearchOptions, SynonymTable};

const SYNONYMS: &str = include_str!("../fixtures/synonyms.tsv");

fn main() -> scibank::Result<()> {
    let researchers = fixtures::accounting_sample();
    let bank = build_bank(&researchers, &clean_corpus(&researchers, &StopList::default()))?;
    let synonyms = SynonymTable::parse(SYNONYMS)?;

    let args: Vec<String> = std::env::args().skip(1).collect();
    let queries = if args.is_empty() {
        vec!["spin-off small business".to_string(), "corporate governance".into(), "contabilità".into()]
    } else {
        vec![args.join(" ")]
    };
    for q in &queries {
        println!("> {q}");
        let plain = search_with(&bank, q, &SearchOptions::default());
        print!("{}", render_results(&bank, &plain));
        let expanded = search_with(&bank, q, &SearchOptions { synonyms: Some(&synonyms), ..SearchOptions::default() });
        if expanded.len() != plain.len() {
            println!("  with synonyms:");
            print!("{}", render_results(&bank, &expanded));
        }
        println!();
    }
    Ok(())
}
