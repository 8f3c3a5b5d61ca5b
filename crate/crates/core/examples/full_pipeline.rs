//! End to end on a synthetic market: write a corpus and prices to disk, then
//! run the `report` command over them exactly as the binary would.
//!
//!     cargo run --example full_pipeline -- --out-dir /tmp/promises-report

use std::fs;
use std::path::PathBuf;

use clap::Parser;
use rand::rngs::StdRng;
use rand::SeedableRng;

use promises::cli::{run, Command, ReportArgs};
use promises::synth::{synthetic_market, PanelSpec};

#[derive(Parser)]
struct Args {
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args = Args::parse();
    let spec = PanelSpec::default();
    let market = synthetic_market(&spec, &mut StdRng::seed_from_u64(args.seed))?;

    let input = args.out_dir.join("input");
    for doc in market.corpus.docs() {
        let path = input.join("corpus").join(&doc.source);
        fs::create_dir_all(path.parent().unwrap())?;
        fs::write(path, &doc.text)?;
    }
    let mut prices = String::from("entity,year,adj_close\n");
    for s in &market.prices {
        for (year, p) in s.points() {
            prices.push_str(&format!("{},{year},{p}\n", s.entity()));
        }
    }
    fs::write(input.join("prices.csv"), prices)?;
    let mut rf = String::from("year,rate\n");
    for year in spec.first_year..=spec.last_year + 1 {
        if let Some(r) = market.riskfree.get(year) {
            rf.push_str(&format!("{year},{r}\n"));
        }
    }
    fs::write(input.join("riskfree.csv"), rf)?;

    run(&Command::Report(ReportArgs {
        corpus: input.join("corpus"),
        prices: input.join("prices.csv"),
        riskfree: Some(input.join("riskfree.csv")),
        base_year: spec.first_year,
        out_dir: args.out_dir.join("report"),
    }))?;
    println!("\nartifacts in {}", args.out_dir.join("report").display());
    Ok(())
}
