//! Recompute the published survey tables and audit every percent cell.
//!
//!     cargo run --example reproduce_tables

use scibank::fixtures;
use scibank::stats::{audit_table, frequency_table, repeat_stats, response_rate};

fn main() -> scibank::Result<()> {
    for table in [
        fixtures::faculty_academics(),
        fixtures::faculty_students(),
        fixtures::positions(),
        fixtures::areas(),
    ] {
        let recomputed = frequency_table(table.rows.iter().map(|r| (r.label.clone(), r.count)));
        print!("{}", recomputed.render_text(&table.name));
        let findings = audit_table(&table);
        if findings.is_empty() {
            println!("all cells consistent");
        }
        for f in findings {
            println!("{f}");
        }
        println!();
    }

    let rate = response_rate(fixtures::RESPONDENTS, fixtures::POPULATION)?;
    println!("response rate: {} of {} = {rate}%", fixtures::RESPONDENTS, fixtures::POPULATION);
    for (position, respondents, population) in [("Assistant Professor", 9, 27), ("Lecturer", 25, 69)] {
        println!("  {position}: {}%", response_rate(respondents, population)?);
    }

    for (unique, repeated) in [(988, 41), (494, 17)] {
        let r = repeat_stats(&fixtures::multiplicity_fixture(unique, repeated, 1));
        println!("{} unique terms, {} repeated ({}%)", r.unique, r.repeated, r.repeated_percent);
    }
    Ok(())
}
