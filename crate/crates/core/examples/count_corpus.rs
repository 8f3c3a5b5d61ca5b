//! Loads a `<root>/<entity>/<year>.{txt,htm,html}` corpus and prints the
//! per-document marker counts.
//!
//!     cargo run --example count_corpus -- tests/fixtures/corpus12

use std::path::PathBuf;

use promises::corpus::load_corpus;
use promises::futuretense::aggregate_counts;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("tests/fixtures/corpus12"));
    let corpus = load_corpus(&root)?;
    let table = aggregate_counts(&corpus);

    println!(
        "{:<8} {:>5} {:>5} {:>6} {:>9} {:>8}",
        "entity", "year", "will", "shall", "going_to", "fut.sent"
    );
    for row in &table.rows {
        let c = &row.counts;
        println!(
            "{:<8} {:>5} {:>5} {:>6} {:>9} {:>8}",
            row.entity, row.year, c.will, c.shall, c.going_to, c.future_sentences
        );
    }
    let t = table.grand_total();
    println!(
        "{:<8} {:>5} {:>5} {:>6} {:>9} {:>8}",
        "TOTAL", "", t.will, t.shall, t.going_to, t.future_sentences
    );
    Ok(())
}
