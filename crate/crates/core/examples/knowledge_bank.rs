//! Build the inverted index and look terms up in both facets.
//!
//!     cargo run --example knowledge_bank [term...]

use scibank::bank::{build_bank, lookup};
use scibank::fixtures;
use scibank::normalize::{clean_corpus, Facet, StopList};

fn main() -> scibank::Result<()> {
    let researchers = fixtures::accounting_sample();
    let corpus = clean_corpus(&researchers, &StopList::default());
    let bank = build_bank(&researchers, &corpus)?;
    println!(
        "{} researchers, {} keyword terms, {} expertise terms",
        bank.researchers.len(),
        bank.keyword_index.len(),
        bank.expertise_index.len()
    );

    let mut terms: Vec<String> = std::env::args().skip(1).collect();
    if terms.is_empty() {
        terms = vec!["accounting".into(), "governance".into(), "spin-off".into()];
    }
    for term in &terms {
        for facet in Facet::BOTH {
            let names: Vec<String> = lookup(&bank, term, facet)
                .iter()
                .map(|c| format!("{} <{}>", c.full_name, c.email_obfuscated))
                .collect();
            println!("{facet:>9} {term}: {}", if names.is_empty() { "-".into() } else { names.join(", ") });
        }
    }
    Ok(())
}
