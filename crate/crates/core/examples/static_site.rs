//! Emit the browsable site and the bank file, then read the bank back.
//!
//!     cargo run --example static_site [out_dir]

use scibank::bank::build_bank;
use scibank::emit::{emit_bank_file, emit_site, load_bank};
use scibank::fixtures;
use scibank::normalize::{clean_corpus, StopList};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "target/site".into());
    let researchers = fixtures::accounting_sample();
    let bank = build_bank(&researchers, &clean_corpus(&researchers, &StopList::default()))?;

    let manifest = emit_site(&bank, out.as_ref())?;
    let text = emit_bank_file(&bank);
    std::fs::write(format!("{out}/bank.json"), &text)?;
    println!("{} pages under {out}", manifest.files.len());
    for entry in manifest.files.iter().filter(|f| f.path.starts_with("expert/acc")) {
        println!("  {}  {} bytes  {}", entry.path, entry.bytes, &entry.digest[..12]);
    }

    let reloaded = load_bank(&text)?;
    assert_eq!(emit_bank_file(&reloaded), text);
    println!("bank.json round-trips ({} bytes)", text.len());
    Ok(())
}
