//! The fewer-promises rule on debate transcripts, plus the paired t-test and
//! the comparison chart.
//!
//!     cargo run --example debate_winner -- --svg /tmp/chart.svg

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Parser;

use promises::corpus::segment_by_speaker;
use promises::debates::{
    candidate_totals, chart_svg, loser_winner_ttest, outcome_table, AliasMap, ElectionRecord,
    TStatistic,
};

#[derive(Parser)]
struct Args {
    /// Where to write the bar chart
    #[arg(long)]
    svg: Option<PathBuf>,
}

const TRANSCRIPT: &str = "\
MODERATOR: Good evening. Each candidate has two minutes.
SMITH: I will cut taxes. I will balance the budget, and we are going to win.
JONES: We shall see. Our plan works.
MODERATOR: Thank you both.
SEN. SMITH: Next year I will act.
";

fn record(year: i32, a: (&str, u64), b: (&str, u64), winner: &str) -> ElectionRecord {
    let totals = BTreeMap::from([(a.0.to_string(), a.1), (b.0.to_string(), b.1)]);
    ElectionRecord::new(year, totals, Some(winner.to_string())).expect("valid record")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args = Args::parse();

    let segments = segment_by_speaker(TRANSCRIPT);
    for (speaker, text) in &segments {
        println!("[{speaker}] {}", text.replace('\n', " / "));
    }
    let aliases = AliasMap::new([("SEN. SMITH".to_string(), "SMITH".to_string())]);
    let live = candidate_totals(1900, &[segments], ("SMITH", "JONES"), &aliases)?;
    println!("totals {:?}\n", live.totals);

    let history = vec![
        record(1896, ("ADAMS", 98), ("BAKER", 121), "ADAMS"),
        record(1900, ("CLARK", 140), ("DAVIS", 163), "DAVIS"),
        record(2004, ("KERRY", 176), ("BUSH", 150), "BUSH"),
    ];
    for o in outcome_table(&history) {
        println!(
            "{}: predicted {} (actual {}, {})  [{} {}, {} {}]",
            o.year,
            o.predicted,
            o.actual,
            o.result,
            o.candidate_a,
            o.total_a,
            o.candidate_b,
            o.total_b
        );
    }
    let test = loser_winner_ttest(&history)?;
    let t = match test.t {
        TStatistic::Value(v) => format!("{v:.4}"),
        TStatistic::Undefined { sign } => format!("undefined (sign {sign})"),
    };
    println!(
        "\nloser - winner: mean {:.2}, t = {t}, df = {}, 90% one-sided critical {:.6}, significant {}",
        test.mean_diff, test.df, test.critical_90, test.significant_90
    );

    if let Some(path) = args.svg {
        std::fs::write(&path, chart_svg(&history))?;
        println!("chart -> {}", path.display());
    }
    Ok(())
}
