//! Bivariate OLS of `will` counts on `shall` counts across a corpus.
//!
//!     cargo run --example wills_on_shalls -- tests/fixtures/corpus12

use std::path::PathBuf;

use promises::corpus::load_corpus;
use promises::econometrics::simple_ols;
use promises::futuretense::aggregate_counts;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("tests/fixtures/corpus12"));
    let table = aggregate_counts(&load_corpus(&root)?);
    let shall: Vec<f64> = table.rows.iter().map(|r| r.counts.shall as f64).collect();
    let will: Vec<f64> = table.rows.iter().map(|r| r.counts.will as f64).collect();
    let fit = simple_ols(&shall, &will)?;
    println!("documents {}", table.rows.len());
    println!("will = {:.4} + {:.4} * shall", fit.intercept, fit.slope);
    match fit.r2 {
        Some(r2) => println!("R-squared {r2:.4}"),
        None => println!("R-squared undefined (constant outcome)"),
    }
    Ok(())
}
