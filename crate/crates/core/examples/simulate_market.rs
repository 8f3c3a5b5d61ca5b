//! Writes a seeded synthetic market to disk in the layouts the CLI reads:
//! `corpus/<entity>/<year>.txt`, `prices.csv`, `riskfree.csv`, `panel.csv`.
//!
//!     cargo run --example simulate_market -- --out-dir /tmp/market --seed 0

use std::fs;
use std::path::PathBuf;

use clap::Parser;
use rand::rngs::StdRng;
use rand::SeedableRng;

use promises::futuretense::aggregate_counts;
use promises::returns::build_panel;
use promises::synth::{synthetic_market, PanelSpec};

#[derive(Parser)]
struct Args {
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 88)]
    entities: usize,
    #[arg(long, default_value_t = 1993)]
    first_year: i32,
    #[arg(long, default_value_t = 2003)]
    last_year: i32,
    #[arg(long, default_value_t = 100)]
    w_min: u64,
    #[arg(long, default_value_t = 1000)]
    w_max: u64,
    #[arg(long, default_value_t = -2e-4, allow_hyphen_values = true)]
    slope: f64,
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args = Args::parse();
    let spec = PanelSpec {
        entities: args.entities,
        first_year: args.first_year,
        last_year: args.last_year,
        w_range: (args.w_min, args.w_max),
        slope: args.slope,
        ..PanelSpec::default()
    };
    let mut rng = StdRng::seed_from_u64(args.seed);
    let market = synthetic_market(&spec, &mut rng)?;

    let corpus_dir = args.out_dir.join("corpus");
    for doc in market.corpus.docs() {
        let path = corpus_dir.join(&doc.source);
        fs::create_dir_all(path.parent().unwrap())?;
        fs::write(path, &doc.text)?;
    }
    let mut prices = String::from("entity,year,adj_close\n");
    for series in &market.prices {
        for (year, p) in series.points() {
            prices.push_str(&format!("{},{year},{p}\n", series.entity()));
        }
    }
    fs::write(args.out_dir.join("prices.csv"), prices)?;
    let mut rf = String::from("year,rate\n");
    for year in spec.first_year + 1..=spec.last_year + 1 {
        if let Some(r) = market.riskfree.get(year) {
            rf.push_str(&format!("{year},{r}\n"));
        }
    }
    fs::write(args.out_dir.join("riskfree.csv"), rf)?;

    let counts = aggregate_counts(&market.corpus);
    let (panel, _) = build_panel(&counts, &market.prices, &market.riskfree, spec.first_year)?;
    fs::write(args.out_dir.join("panel.csv"), panel.to_csv()?)?;
    println!(
        "{} documents, {} panel rows, {} entities -> {}",
        market.corpus.len(),
        panel.len(),
        panel.n_groups(),
        args.out_dir.display()
    );
    Ok(())
}
