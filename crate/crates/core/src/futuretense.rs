//! Tokenization, sentence splitting, and future-tense marker counting.
//!
//! Markers are the literal tokens `will` and `shall` and the bigram
//! `going to`. Matching is on whole case-folded tokens, so `goodwill` and
//! `willful` never count while the noun in "last will" does.

use std::ops::Add;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::Result;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FutureCounts {
    pub will: u64,
    pub shall: u64,
    pub going_to: u64,
    /// Sentences containing at least one marker.
    pub future_sentences: u64,
}

impl FutureCounts {
    pub fn total(&self) -> u64 {
        self.will + self.shall + self.going_to
    }
}

impl Add for FutureCounts {
    type Output = FutureCounts;

    fn add(self, rhs: FutureCounts) -> FutureCounts {
        FutureCounts {
            will: self.will + rhs.will,
            shall: self.shall + rhs.shall,
            going_to: self.going_to + rhs.going_to,
            future_sentences: self.future_sentences + rhs.future_sentences,
        }
    }
}

impl std::iter::Sum for FutureCounts {
    fn sum<I: Iterator<Item = FutureCounts>>(iter: I) -> Self {
        iter.fold(FutureCounts::default(), Add::add)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<String>,
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Maximal runs of alphabetic characters with internal apostrophes, lowercased.
pub fn tokenize(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_alphabetic() {
            current.extend(c.to_lowercase());
        } else if is_apostrophe(c)
            && !current.is_empty()
            && chars.get(i + 1).is_some_and(|n| n.is_alphabetic())
        {
            current.push(c);
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Splits at `.`, `!` or `?` followed by whitespace or end of input.
/// There is no abbreviation list, so "Mr. Smith" is two sentences.
pub fn split_sentences(text: &str) -> Vec<Sentence> {
    let mut sentences = Vec::new();
    let mut start = 0;
    let mut iter = text.char_indices().peekable();
    while let Some((i, c)) = iter.next() {
        if matches!(c, '.' | '!' | '?') {
            let at_boundary = match iter.peek() {
                None => true,
                Some(&(_, next)) => next.is_whitespace(),
            };
            if at_boundary {
                push_fragment(&mut sentences, &text[start..i + c.len_utf8()]);
                start = i + c.len_utf8();
            }
        }
    }
    push_fragment(&mut sentences, &text[start..]);
    sentences
}

fn push_fragment(out: &mut Vec<Sentence>, fragment: &str) {
    let tokens = tokenize(fragment);
    if !tokens.is_empty() {
        out.push(Sentence { tokens });
    }
}

fn count_sentence(tokens: &[String]) -> FutureCounts {
    let mut c = FutureCounts::default();
    for (i, t) in tokens.iter().enumerate() {
        match t.as_str() {
            "will" => c.will += 1,
            "shall" => c.shall += 1,
            "going" if tokens.get(i + 1).is_some_and(|n| n == "to") => c.going_to += 1,
            _ => {}
        }
    }
    if c.total() > 0 {
        c.future_sentences = 1;
    }
    c
}

pub fn count_future(text: &str) -> FutureCounts {
    split_sentences(text)
        .iter()
        .map(|s| count_sentence(&s.tokens))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRow {
    pub entity: String,
    pub year: i32,
    pub counts: FutureCounts,
}

#[derive(Debug, Serialize, Deserialize)]
struct CountRecord {
    entity: String,
    year: i32,
    will: u64,
    shall: u64,
    going_to: u64,
    future_sentences: u64,
}

impl From<&CountRow> for CountRecord {
    fn from(r: &CountRow) -> Self {
        CountRecord {
            entity: r.entity.clone(),
            year: r.year,
            will: r.counts.will,
            shall: r.counts.shall,
            going_to: r.counts.going_to,
            future_sentences: r.counts.future_sentences,
        }
    }
}

impl From<CountRecord> for CountRow {
    fn from(r: CountRecord) -> Self {
        CountRow {
            entity: r.entity,
            year: r.year,
            counts: FutureCounts {
                will: r.will,
                shall: r.shall,
                going_to: r.going_to,
                future_sentences: r.future_sentences,
            },
        }
    }
}

/// Per-document counts in canonical corpus order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountTable {
    pub rows: Vec<CountRow>,
}

pub const COUNTS_HEADER: [&str; 6] = [
    "entity",
    "year",
    "will",
    "shall",
    "going_to",
    "future_sentences",
];

impl CountTable {
    pub fn grand_total(&self) -> FutureCounts {
        self.rows.iter().map(|r| r.counts).sum()
    }

    /// CSV `entity,year,will,shall,going_to,future_sentences`. With
    /// `with_total`, a final row has entity `TOTAL` and an empty year.
    pub fn to_csv(&self, with_total: bool) -> Result<Vec<u8>> {
        let records: Vec<CountRecord> = self.rows.iter().map(CountRecord::from).collect();
        let mut bytes = crate::output::csv_bytes(&records, &COUNTS_HEADER)?;
        if with_total {
            let t = self.grand_total();
            bytes.extend_from_slice(
                format!(
                    "TOTAL,,{},{},{},{}\n",
                    t.will, t.shall, t.going_to, t.future_sentences
                )
                .as_bytes(),
            );
        }
        Ok(bytes)
    }

    /// Reads the CSV written by [`CountTable::to_csv`], skipping a `TOTAL` row.
    pub fn read_csv(path: &std::path::Path) -> Result<Self> {
        use crate::error::Error;
        let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::csv(path, e))?;
            if rec.get(0) == Some("TOTAL") && rec.get(1) == Some("") {
                continue;
            }
            let row: CountRecord = rec.deserialize(None).map_err(|e| Error::csv(path, e))?;
            rows.push(CountRow::from(row));
        }
        rows.sort_by(|a, b| (a.entity.as_str(), a.year).cmp(&(b.entity.as_str(), b.year)));
        Ok(CountTable { rows })
    }
}

pub fn aggregate_counts(corpus: &Corpus) -> CountTable {
    let rows = corpus
        .docs()
        .par_iter()
        .map(|d| CountRow {
            entity: d.entity.clone(),
            year: d.year,
            counts: count_future(&d.text),
        })
        .collect();
    CountTable { rows }
}
