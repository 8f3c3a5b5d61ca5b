//! Turns prices into next-year log returns and joins them to counts,
//! reporting the entity-years that could not be joined.
//!
//!     cargo run --example log_returns_panel

use promises::futuretense::{CountRow, CountTable, FutureCounts};
use promises::returns::{annual_log_returns, build_panel, PriceSeries, RiskFreeSeries};

fn counts(entity: &str, year: i32, will: u64) -> CountRow {
    CountRow {
        entity: entity.into(),
        year,
        counts: FutureCounts {
            will,
            ..FutureCounts::default()
        },
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let acme = PriceSeries::new(
        "ACME",
        vec![(1993, 20.0), (1994, 22.0), (1995, 19.8), (1997, 25.0)],
    )?;
    let bolt = PriceSeries::new("BOLT", vec![(1993, 50.0), (1994, 55.0), (1995, 60.5)])?;
    for s in [&acme, &bolt] {
        for (year, r) in annual_log_returns(s) {
            println!("{} R_{year} = {r:+.6}", s.entity());
        }
    }

    let table = CountTable {
        rows: vec![
            counts("ACME", 1993, 310),
            counts("ACME", 1994, 295),
            counts("ACME", 1995, 402),
            counts("BOLT", 1993, 120),
            counts("BOLT", 1994, 131),
        ],
    };
    let rf = RiskFreeSeries::new([(1994, 0.043), (1995, 0.055), (1996, 0.052)])?;
    let (panel, drops) = build_panel(&table, &[acme, bolt], &rf, 1993)?;

    println!();
    print!("{}", String::from_utf8(panel.to_csv()?)?);
    for (entity, year) in &drops.missing_return {
        println!("dropped {entity} {year}: no return for {}", year + 1);
    }
    Ok(())
}
