//! Canonicalize and permute raw keyword phrases.
//!
//!     cargo run --example clean_terms -- "Sociologia di Marx" "IAS / IFRS"

use scibank::normalize::{canonicalize, clean_corpus, permute, Facet, StopList};
use scibank::fixtures;

fn main() {
    let stoplist = StopList::default();
    let mut phrases: Vec<String> = std::env::args().skip(1).collect();
    if phrases.is_empty() {
        phrases = ["Public  Transport", "Sociologia di Marx", "Valutazione d’Azienda", "storia 2011 e spin-off"]
            .map(String::from)
            .to_vec();
    }
    for raw in &phrases {
        match canonicalize(raw) {
            Ok(c) => {
                let words: Vec<String> = permute(&c.norm, Facet::Keyword, &stoplist).into_iter().map(|t| t.norm).collect();
                println!("{raw:?} -> {:?} words {words:?}", c.norm);
            }
            Err(e) => println!("{raw:?} -> {e}"),
        }
    }

    let corpus = clean_corpus(&fixtures::accounting_sample(), &stoplist);
    println!("\n{}", corpus.stats);
}
