//! Co-occurrence graph and force-directed layout, exported as TSV and
//! Gephi-style CSV.
//!
//!     cargo run --example coword_map [out_dir]

use scibank::coword::{cooccurrence_graph, export_csv, export_graph, isolation_ratio, layout_fr, LayoutParams, Level};
use scibank::fixtures;
use scibank::normalize::{clean_corpus, Facet, StopList};

fn main() -> scibank::Result<()> {
    let researchers = fixtures::synthetic_survey(60, 5, 7);
    let corpus = clean_corpus(&researchers, &StopList::default());
    let graph = cooccurrence_graph(&corpus, Facet::Keyword, Level::Word);
    println!(
        "{} nodes, {} edges, isolation ratio {:.3}",
        graph.nodes.len(),
        graph.edges.len(),
        isolation_ratio(&graph)
    );

    let layout = layout_fr(&graph, &LayoutParams::default())?;
    let moved = layout.mean_displacement.last().copied().unwrap_or(0.0);
    println!("k = {:.1}, last-iteration displacement {moved:.3}", layout.k);

    let mut heaviest: Vec<_> = graph.edges.iter().collect();
    heaviest.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    for ((a, b), w) in heaviest.into_iter().take(5) {
        println!("  {a} -- {b} ({w})");
    }

    if let Some(dir) = std::env::args().nth(1) {
        let (nodes, edges) = export_csv(&graph, Some(&layout))?;
        std::fs::create_dir_all(&dir).map_err(|e| scibank::Error::Format(e.to_string()))?;
        for (name, text) in [("graph.tsv", export_graph(&graph, Some(&layout))), ("nodes.csv", nodes), ("edges.csv", edges)] {
            std::fs::write(format!("{dir}/{name}"), text).map_err(|e| scibank::Error::Format(e.to_string()))?;
        }
        println!("wrote {dir}/graph.tsv, nodes.csv, edges.csv");
    }
    Ok(())
}
