//! Parse a survey export, print diagnostics and the population profile.
//!
//!     cargo run --example ingest_survey [survey.csv]

use scibank::fixtures;
use scibank::ingest::{parse_survey, parse_survey_str, population_profile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (researchers, report) = match std::env::args().nth(1) {
        Some(path) => parse_survey(std::fs::File::open(path)?)?,
        None => {
            // A clean fixture plus two broken rows to show the diagnostics.
            let mut text = fixtures::SAMPLE_CSV.to_string();
            text.push_str("Ann BIANCHI,ann.bianchi-at-unich.it,Lecturer,Sport,05,sport,nutrition\n");
            text.push_str("Bo ROSSI,b.rossi@unich.it,Dean,Sport,05,sport,\n");
            parse_survey_str(&text)?
        }
    };
    print!("{}", report.render());
    println!("accepted {} of {} rows\n", report.accepted, report.total());
    for r in &researchers {
        let (surname, given) = r.name_parts();
        println!("{}  {surname}, {given}  {} / area {}", r.id(), r.position.label(), r.area);
    }
    let profile = population_profile(&researchers);
    println!();
    print!("{}", profile.by_position.render_text("Position"));
    Ok(())
}
