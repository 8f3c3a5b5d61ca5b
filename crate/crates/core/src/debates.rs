//! Debate analytics: per-candidate marker totals, the fewer-promises winner
//! rule, and a one-sided paired t-test on loser-minus-winner counts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};
use crate::futuretense::count_future;

/// A candidate name and marker total.
pub type Side<'a> = (&'a str, u64);

/// Two major candidates' totals for one election.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElectionRecord {
    pub year: i32,
    pub totals: BTreeMap<String, u64>,
    pub actual_winner: Option<String>,
}

impl ElectionRecord {
    pub fn new(
        year: i32,
        totals: BTreeMap<String, u64>,
        actual_winner: Option<String>,
    ) -> Result<Self> {
        if totals.len() != 2 {
            return Err(Error::CandidateCount {
                year,
                got: totals.len(),
            });
        }
        if let Some(w) = &actual_winner {
            if !totals.contains_key(w) {
                return Err(Error::UnknownWinner {
                    year,
                    winner: w.clone(),
                });
            }
        }
        Ok(ElectionRecord {
            year,
            totals,
            actual_winner,
        })
    }

    fn pair(&self) -> [(&str, u64); 2] {
        let mut it = self.totals.iter().map(|(k, v)| (k.as_str(), *v));
        [
            it.next().expect("two candidates"),
            it.next().expect("two candidates"),
        ]
    }

    /// `(winner, loser)` by the recorded outcome.
    pub fn winner_loser(&self) -> Option<(Side<'_>, Side<'_>)> {
        let w = self.actual_winner.as_deref()?;
        let [a, b] = self.pair();
        Some(if a.0 == w { (a, b) } else { (b, a) })
    }
}

/// Maps transcript speaker labels onto candidate names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasMap {
    aliases: BTreeMap<String, String>,
}

impl AliasMap {
    pub fn new(pairs: impl IntoIterator<Item = (String, String)>) -> Self {
        AliasMap {
            aliases: pairs
                .into_iter()
                .map(|(a, c)| (a.trim().to_string(), c.trim().to_string()))
                .collect(),
        }
    }

    /// Reads `alias,canonical`.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
        let pairs = rdr
            .deserialize::<(String, String)>()
            .map(|r| r.map_err(|e| Error::csv(path, e)))
            .collect::<Result<Vec<_>>>()?;
        Ok(AliasMap::new(pairs))
    }

    pub fn resolve<'a>(&'a self, label: &'a str) -> &'a str {
        let label = label.trim();
        self.aliases.get(label).map(String::as_str).unwrap_or(label)
    }
}

/// Sums each candidate's marker total over every speaker segment of every
/// transcript. Speakers other than the two candidates are ignored.
pub fn candidate_totals(
    year: i32,
    transcripts: &[BTreeMap<String, String>],
    candidates: (&str, &str),
    aliases: &AliasMap,
) -> Result<ElectionRecord> {
    let mut totals = BTreeMap::new();
    for name in [candidates.0, candidates.1] {
        let mut seen = false;
        let mut total = 0;
        for segments in transcripts {
            for (speaker, text) in segments {
                if aliases.resolve(speaker) == name {
                    seen = true;
                    total += count_future(text).total();
                }
            }
        }
        if !seen {
            return Err(Error::CandidateAbsent {
                candidate: name.to_string(),
                year,
            });
        }
        totals.insert(name.to_string(), total);
    }
    ElectionRecord::new(year, totals, None)
}

/// The candidate with the strictly smaller total.
pub fn predict_winner(record: &ElectionRecord) -> Result<String> {
    let [a, b] = record.pair();
    match a.1.cmp(&b.1) {
        std::cmp::Ordering::Less => Ok(a.0.to_string()),
        std::cmp::Ordering::Greater => Ok(b.0.to_string()),
        std::cmp::Ordering::Equal => Err(Error::Tie {
            year: record.year,
            a: a.0.to_string(),
            b: b.0.to_string(),
            total: a.1,
        }),
    }
}

/// A t statistic, or the sign of the mean difference when the differences
/// have zero spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TStatistic {
    Value(f64),
    Undefined { sign: i8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairedTTest {
    pub t: TStatistic,
    pub df: usize,
    pub mean_diff: f64,
    /// One-sided 90% critical value at `df`.
    pub critical_90: f64,
    /// `t > critical_90`; false when `t` is undefined.
    pub significant_90: bool,
}

/// One-sided paired t-test on `loser_total - winner_total`.
pub fn loser_winner_ttest(records: &[ElectionRecord]) -> Result<PairedTTest> {
    let diffs = records
        .iter()
        .map(|r| {
            let (w, l) = r.winner_loser().ok_or(Error::MissingWinner(r.year))?;
            Ok(l.1 as f64 - w.1 as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    let n = diffs.len();
    if n < 2 {
        return Err(Error::TooFewElections(n));
    }
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let df = n - 1;
    let critical_90 = student_t_quantile(0.90, df);
    let t = if var > 0.0 {
        TStatistic::Value(mean / (var.sqrt() / (n as f64).sqrt()))
    } else {
        TStatistic::Undefined {
            sign: if mean > 0.0 {
                1
            } else if mean < 0.0 {
                -1
            } else {
                0
            },
        }
    };
    let significant_90 = matches!(t, TStatistic::Value(v) if v > critical_90);
    Ok(PairedTTest {
        t,
        df,
        mean_diff: mean,
        critical_90,
        significant_90,
    })
}

/// Student t CDF through the regularized incomplete beta function:
/// `P(T <= t) = 1 - I_x(df/2, 1/2) / 2` for `t >= 0`, `x = df / (df + t^2)`.
pub fn student_t_cdf(t: f64, df: usize) -> f64 {
    let v = df as f64;
    let tail = 0.5 * beta_reg(v / 2.0, 0.5, v / (v + t * t));
    if t >= 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Inverse of [`student_t_cdf`] by bisection.
pub fn student_t_quantile(p: f64, df: usize) -> f64 {
    assert!(p > 0.0 && p < 1.0, "probability out of range: {p}");
    if p < 0.5 {
        return -student_t_quantile(1.0 - p, df);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while student_t_cdf(hi, df) < p {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if student_t_cdf(mid, df) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Deserialize)]
struct FixtureRow {
    year: i32,
    candidate: String,
    total: u64,
    actual_winner_flag: String,
}

fn parse_flag(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "y" => Some(true),
        "0" | "false" | "no" | "n" | "" => Some(false),
        _ => None,
    }
}

/// Reads `year,candidate,total,actual_winner_flag` (two rows per year).
pub fn read_election_fixtures(path: &Path) -> Result<Vec<ElectionRecord>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let mut by_year: BTreeMap<i32, (BTreeMap<String, u64>, Option<String>)> = BTreeMap::new();
    for (i, rec) in rdr.deserialize::<FixtureRow>().enumerate() {
        let rec = rec.map_err(|e| Error::csv(path, e))?;
        let flag = parse_flag(&rec.actual_winner_flag).ok_or_else(|| Error::Parse {
            path: path.to_path_buf(),
            line: i as u64 + 2,
            message: format!("bad actual_winner_flag {:?}", rec.actual_winner_flag),
        })?;
        let entry = by_year.entry(rec.year).or_default();
        let name = rec.candidate.trim().to_string();
        if flag {
            entry.1 = Some(name.clone());
        }
        entry.0.insert(name, rec.total);
    }
    by_year
        .into_iter()
        .map(|(year, (totals, winner))| ElectionRecord::new(year, totals, winner))
        .collect()
}

/// One row of the per-election outcome table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElectionOutcome {
    pub year: i32,
    pub candidate_a: String,
    pub total_a: u64,
    pub candidate_b: String,
    pub total_b: u64,
    /// Predicted winner, or `TIE`.
    pub predicted: String,
    pub actual: String,
    /// `hit`, `miss`, or empty when the outcome or prediction is missing.
    pub result: String,
}

pub fn outcome_table(records: &[ElectionRecord]) -> Vec<ElectionOutcome> {
    records
        .iter()
        .map(|r| {
            let [a, b] = r.pair();
            let predicted = predict_winner(r).ok();
            let actual = r.actual_winner.clone().unwrap_or_default();
            let result = match (&predicted, &r.actual_winner) {
                (Some(p), Some(w)) if p == w => "hit",
                (Some(_), Some(_)) => "miss",
                _ => "",
            };
            ElectionOutcome {
                year: r.year,
                candidate_a: a.0.to_string(),
                total_a: a.1,
                candidate_b: b.0.to_string(),
                total_b: b.1,
                predicted: predicted.unwrap_or_else(|| "TIE".into()),
                actual,
                result: result.to_string(),
            }
        })
        .collect()
}

pub const OUTCOME_HEADER: [&str; 8] = [
    "year",
    "candidate_a",
    "total_a",
    "candidate_b",
    "total_b",
    "predicted",
    "actual",
    "result",
];

pub fn outcome_csv(outcomes: &[ElectionOutcome]) -> Result<Vec<u8>> {
    crate::output::csv_bytes(outcomes, &OUTCOME_HEADER)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
struct ChartRow<'a> {
    year: i32,
    winner: &'a str,
    winner_total: u64,
    loser: &'a str,
    loser_total: u64,
}

fn chart_rows(records: &[ElectionRecord]) -> Vec<ChartRow<'_>> {
    records
        .iter()
        .map(|r| {
            let ((wn, wt), (ln, lt)) = r.winner_loser().unwrap_or_else(|| {
                let [a, b] = r.pair();
                (a, b)
            });
            ChartRow {
                year: r.year,
                winner: wn,
                winner_total: wt,
                loser: ln,
                loser_total: lt,
            }
        })
        .collect()
}

/// Backing data of the chart: `year,winner,winner_total,loser,loser_total`.
/// Elections without a recorded outcome list their candidates alphabetically.
pub fn chart_csv(records: &[ElectionRecord]) -> Result<Vec<u8>> {
    crate::output::csv_bytes(
        &chart_rows(records),
        &["year", "winner", "winner_total", "loser", "loser_total"],
    )
}

/// Grouped bar chart, one winner/loser pair per election.
pub fn chart_svg(records: &[ElectionRecord]) -> String {
    let rows = chart_rows(records);
    let (bar, gap, left, top, plot_h) = (18.0, 22.0, 60.0, 40.0, 240.0);
    let group_w = 2.0 * bar + gap;
    let width = left + group_w * rows.len().max(1) as f64 + 20.0;
    let height = top + plot_h + 60.0;
    let max = rows
        .iter()
        .map(|r| r.winner_total.max(r.loser_total))
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let scale = plot_h / max;
    let base = top + plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="13">Future tense usage comparison</text>"#,
        width / 2.0
    );
    let _ = writeln!(
        s,
        r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{base}" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<line x1="{left}" y1="{base}" x2="{:.1}" y2="{base}" stroke="black"/>"#,
        width - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.1}" transform="rotate(-90 14 {:.1})" text-anchor="middle">will + shall + going to</text>"#,
        top + plot_h / 2.0,
        top + plot_h / 2.0
    );
    for (i, r) in rows.iter().enumerate() {
        let x0 = left + gap / 2.0 + group_w * i as f64;
        for (j, (total, color, name)) in [
            (r.winner_total, "#4a7ebb", r.winner),
            (r.loser_total, "#c0504d", r.loser),
        ]
        .into_iter()
        .enumerate()
        {
            let h = total as f64 * scale;
            let x = x0 + bar * j as f64;
            let _ = writeln!(
                s,
                r#"<rect x="{x:.1}" y="{:.1}" width="{bar:.1}" height="{h:.1}" fill="{color}"><title>{} {}: {total}</title></rect>"#,
                base - h,
                r.year,
                xml_escape(name)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            x0 + bar,
            base + 14.0,
            r.year
        );
    }
    let ly = base + 36.0;
    let _ = writeln!(
        s,
        r##"<rect x="{left}" y="{:.1}" width="10" height="10" fill="#4a7ebb"/>"##,
        ly - 9.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{ly:.1}">Winner</text>"#,
        left + 14.0
    );
    let _ = writeln!(
        s,
        r##"<rect x="{:.1}" y="{:.1}" width="10" height="10" fill="#c0504d"/>"##,
        left + 70.0,
        ly - 9.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{ly:.1}">Loser</text>"#,
        left + 84.0
    );
    s.push_str("</svg>\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
