//! Command-line front end: corpus -> counts -> panel -> regressions -> reports,
//! plus the debate commands.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::corpus::{load_corpus, load_transcripts, segment_by_speaker};
use crate::debates::{
    candidate_totals, chart_csv, chart_svg, loser_winner_ttest, outcome_csv, outcome_table,
    read_election_fixtures, AliasMap, ElectionRecord, TStatistic,
};
use crate::econometrics::{estimate, render_table, simple_ols, DepVar, Model};
use crate::error::{Error, Result};
use crate::futuretense::{aggregate_counts, CountTable};
use crate::output::write_atomic;
use crate::returns::{build_panel, read_prices_csv, PanelDataset, RiskFreeSeries};

pub const DEFAULT_BASE_YEAR: i32 = 1993;

#[derive(Debug, Parser)]
#[command(
    name = "promises",
    version,
    about = "Future-tense signal extraction and panel regressions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count will/shall/going-to in a corpus laid out as <root>/<entity>/<year>.txt|.htm
    Count(CountArgs),
    /// Join counts to next-year log returns
    Panel(PanelArgs),
    /// Estimate one regression on a panel CSV
    Regress(RegressArgs),
    /// Predict each election's popular-vote winner (fewer markers wins)
    DebatePredict(DebateArgs),
    /// One-sided paired t-test of loser minus winner totals
    DebateTest(DebateTestArgs),
    /// Full pipeline: counts, panel, and all four regression tables
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Counts CSV: entity,year,will,shall,going_to,future_sentences
    #[arg(long)]
    pub out: PathBuf,
    /// Optional manifest CSV: entity,year,chars,source_file
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Append a TOTAL row
    #[arg(long)]
    pub total: bool,
}

#[derive(Debug, Args)]
pub struct PanelArgs {
    #[arg(long)]
    pub counts: PathBuf,
    /// Prices CSV: entity,year,adj_close
    #[arg(long)]
    pub prices: PathBuf,
    /// Risk-free CSV: year,rate
    #[arg(long)]
    pub riskfree: Option<PathBuf>,
    /// Omitted time-dummy year
    #[arg(long, default_value_t = DEFAULT_BASE_YEAR)]
    pub base_year: i32,
    /// Panel CSV: entity,year_t,w_t,r_next,rf_next
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RegressArgs {
    #[arg(long)]
    pub panel: PathBuf,
    /// re (random-effects GLS) or pooled (OLS, cluster-robust by entity)
    #[arg(long, default_value_t = Model::Re)]
    pub model: Model,
    /// return (R_{t+1}) or excess (R_{t+1} - rf_{t+1})
    #[arg(long, default_value_t = DepVar::Return)]
    pub dep: DepVar,
    #[arg(long, default_value_t = DEFAULT_BASE_YEAR)]
    pub base_year: i32,
    /// Directory for regress_<model>_<dep>.txt and .json
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct DebateInput {
    /// Election fixture CSV: year,candidate,total,actual_winner_flag
    #[arg(long, conflicts_with_all = ["transcripts", "candidates"])]
    pub fixtures: Option<PathBuf>,
    /// Transcript tree laid out as <root>/<year>/<debate>.txt
    #[arg(long, requires = "candidates")]
    pub transcripts: Option<PathBuf>,
    /// Candidates CSV: year,candidate_a,candidate_b,actual_winner (winner may be empty)
    #[arg(long)]
    pub candidates: Option<PathBuf>,
    /// Speaker alias CSV: alias,canonical
    #[arg(long)]
    pub aliases: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DebateArgs {
    #[command(flatten)]
    pub input: DebateInput,
    /// Directory for elections.csv, chart.svg and chart.csv
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DebateTestArgs {
    #[command(flatten)]
    pub input: DebateInput,
    /// JSON summary output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub prices: PathBuf,
    /// Without it the excess-return tables are skipped
    #[arg(long)]
    pub riskfree: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BASE_YEAR)]
    pub base_year: i32,
    #[arg(long)]
    pub out_dir: PathBuf,
}

/// Parses `args` (program name first) and runs; usage errors exit 2, runtime errors 1.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

pub fn run(command: &Command) -> Result<()> {
    match command {
        Command::Count(a) => run_count(a),
        Command::Panel(a) => run_panel(a),
        Command::Regress(a) => run_regress(a),
        Command::DebatePredict(a) => run_debate_predict(a),
        Command::DebateTest(a) => run_debate_test(a),
        Command::Report(a) => run_report(a),
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn run_count(a: &CountArgs) -> Result<()> {
    let corpus = load_corpus(&a.corpus)?;
    let table = aggregate_counts(&corpus);
    write_atomic(&a.out, &table.to_csv(a.total)?)?;
    if let Some(m) = &a.manifest {
        write_atomic(m, &corpus.manifest_csv()?)?;
    }
    let t = table.grand_total();
    println!(
        "{} documents: will {} shall {} going_to {} future_sentences {}",
        corpus.len(),
        t.will,
        t.shall,
        t.going_to,
        t.future_sentences
    );
    Ok(())
}

fn read_riskfree(path: Option<&PathBuf>) -> Result<RiskFreeSeries> {
    path.map(|p| RiskFreeSeries::read_csv(p))
        .transpose()
        .map(Option::unwrap_or_default)
}

fn run_panel(a: &PanelArgs) -> Result<()> {
    let counts = CountTable::read_csv(&a.counts)?;
    let prices = read_prices_csv(&a.prices)?;
    let rf = read_riskfree(a.riskfree.as_ref())?;
    let (panel, drops) = build_panel(&counts, &prices, &rf, a.base_year)?;
    write_atomic(&a.out, &panel.to_csv()?)?;
    println!(
        "{} rows, {} groups, {} dropped without a next-year return",
        panel.len(),
        panel.n_groups(),
        drops.total()
    );
    for (entity, year) in &drops.missing_return {
        eprintln!("dropped {entity} {year}: no return for {}", year + 1);
    }
    Ok(())
}

fn write_result(
    dir: &Path,
    stem: &str,
    panel: &PanelDataset,
    model: Model,
    dep: DepVar,
) -> Result<String> {
    let result = estimate(panel, model, dep)?;
    let table = render_table(&result);
    write_atomic(&dir.join(format!("{stem}.txt")), table.as_bytes())?;
    write_atomic(
        &dir.join(format!("{stem}.json")),
        result.to_json()?.as_bytes(),
    )?;
    Ok(table)
}

fn run_regress(a: &RegressArgs) -> Result<()> {
    let panel = PanelDataset::read_csv(&a.panel, a.base_year)?;
    ensure_dir(&a.out_dir)?;
    let stem = format!("regress_{}_{}", a.model, a.dep);
    let table = write_result(&a.out_dir, &stem, &panel, a.model, a.dep)?;
    print!("{table}");
    Ok(())
}

#[derive(Debug, Deserialize)]
struct CandidateRow {
    year: i32,
    candidate_a: String,
    candidate_b: String,
    #[serde(default)]
    actual_winner: Option<String>,
}

fn load_elections(input: &DebateInput) -> Result<Vec<ElectionRecord>> {
    if let Some(f) = &input.fixtures {
        return read_election_fixtures(f);
    }
    let (Some(root), Some(cands)) = (&input.transcripts, &input.candidates) else {
        return Err(Error::Parse {
            path: PathBuf::new(),
            line: 0,
            message: "give --fixtures, or --transcripts with --candidates".into(),
        });
    };
    let aliases = match &input.aliases {
        Some(p) => AliasMap::read_csv(p)?,
        None => AliasMap::default(),
    };
    let mut by_year: BTreeMap<i32, Vec<BTreeMap<String, String>>> = BTreeMap::new();
    for t in load_transcripts(root)? {
        by_year
            .entry(t.year)
            .or_default()
            .push(segment_by_speaker(&t.text));
    }
    let mut rdr = csv::Reader::from_path(cands).map_err(|e| Error::csv(cands, e))?;
    let mut records = Vec::new();
    for row in rdr.deserialize::<CandidateRow>() {
        let row = row.map_err(|e| Error::csv(cands, e))?;
        let segments = by_year.get(&row.year).map(Vec::as_slice).unwrap_or(&[]);
        let rec = candidate_totals(
            row.year,
            segments,
            (row.candidate_a.trim(), row.candidate_b.trim()),
            &aliases,
        )?;
        let winner = row
            .actual_winner
            .map(|w| w.trim().to_string())
            .filter(|w| !w.is_empty());
        records.push(ElectionRecord::new(rec.year, rec.totals, winner)?);
    }
    records.sort_by_key(|r| r.year);
    Ok(records)
}

fn run_debate_predict(a: &DebateArgs) -> Result<()> {
    let records = load_elections(&a.input)?;
    let outcomes = outcome_table(&records);
    for o in &outcomes {
        let actual = if o.actual.is_empty() {
            String::new()
        } else {
            format!(" (actual {}, {})", o.actual, o.result)
        };
        println!(
            "{}: predicted {}{actual}  [{} {}, {} {}]",
            o.year, o.predicted, o.candidate_a, o.total_a, o.candidate_b, o.total_b
        );
    }
    let scored: Vec<_> = outcomes.iter().filter(|o| !o.result.is_empty()).collect();
    if !scored.is_empty() {
        let hits = scored.iter().filter(|o| o.result == "hit").count();
        println!(
            "rule matched the popular vote in {hits} of {} elections",
            scored.len()
        );
    }
    if let Some(dir) = &a.out_dir {
        ensure_dir(dir)?;
        write_atomic(&dir.join("elections.csv"), &outcome_csv(&outcomes)?)?;
        write_atomic(&dir.join("chart.svg"), chart_svg(&records).as_bytes())?;
        write_atomic(&dir.join("chart.csv"), &chart_csv(&records)?)?;
    }
    Ok(())
}

fn run_debate_test(a: &DebateTestArgs) -> Result<()> {
    let records: Vec<_> = load_elections(&a.input)?
        .into_iter()
        .filter(|r| r.actual_winner.is_some())
        .collect();
    let test = loser_winner_ttest(&records)?;
    let t = match test.t {
        TStatistic::Value(v) => format!("{v:.4}"),
        TStatistic::Undefined { sign } => format!("undefined (zero spread, sign {sign})"),
    };
    println!(
        "loser - winner: n = {}, mean = {:.4}, t = {t}, df = {}, one-sided 90% critical = {:.6}, significant = {}",
        records.len(),
        test.mean_diff,
        test.df,
        test.critical_90,
        test.significant_90
    );
    if let Some(out) = &a.out {
        write_atomic(out, serde_json::to_string_pretty(&test)?.as_bytes())?;
    }
    Ok(())
}

fn run_report(a: &ReportArgs) -> Result<()> {
    ensure_dir(&a.out_dir)?;
    let corpus = load_corpus(&a.corpus)?;
    let counts = aggregate_counts(&corpus);
    write_atomic(&a.out_dir.join("counts.csv"), &counts.to_csv(true)?)?;
    write_atomic(&a.out_dir.join("manifest.csv"), &corpus.manifest_csv()?)?;

    let prices = read_prices_csv(&a.prices)?;
    let rf = read_riskfree(a.riskfree.as_ref())?;
    let (panel, drops) = build_panel(&counts, &prices, &rf, a.base_year)?;
    write_atomic(&a.out_dir.join("panel.csv"), &panel.to_csv()?)?;

    let mut summary = String::new();
    summary.push_str(&format!(
        "documents {}  panel rows {}  groups {}  dropped {}\n",
        corpus.len(),
        panel.len(),
        panel.n_groups(),
        drops.total()
    ));
    let wills: Vec<f64> = counts.rows.iter().map(|r| r.counts.will as f64).collect();
    let shalls: Vec<f64> = counts.rows.iter().map(|r| r.counts.shall as f64).collect();
    match simple_ols(&shalls, &wills) {
        Ok(fit) => {
            summary.push_str(&format!(
                "will on shall: slope {:.6} intercept {:.6} R-squared {}\n",
                fit.slope,
                fit.intercept,
                fit.r2
                    .map(|r| format!("{r:.4}"))
                    .unwrap_or_else(|| ".".into())
            ));
            write_atomic(
                &a.out_dir.join("wills_on_shalls.json"),
                serde_json::to_string_pretty(&fit)?.as_bytes(),
            )?;
        }
        Err(e) => summary.push_str(&format!("will on shall: skipped ({e})\n")),
    }

    let mut specs = vec![
        ("table1_re_return", Model::Re, DepVar::Return),
        ("table2_pooled_return", Model::Pooled, DepVar::Return),
    ];
    if a.riskfree.is_some() {
        specs.push(("table3_re_excess", Model::Re, DepVar::Excess));
        specs.push(("table4_pooled_excess", Model::Pooled, DepVar::Excess));
    }
    for (stem, model, dep) in specs {
        let table = write_result(&a.out_dir, stem, &panel, model, dep)?;
        summary.push('\n');
        summary.push_str(&table);
    }
    write_atomic(&a.out_dir.join("summary.txt"), summary.as_bytes())?;
    print!("{summary}");
    Ok(())
}
