//! Seeded synthetic markets for examples, benchmarks, and tests.
//!
//! Returns follow `R_{t+1} = a + b w_t + d_t + u_i + e_it` with Gaussian entity
//! effects `u_i` and noise `e_it`. Filing texts are generated so that their
//! `will` count equals the drawn `w_t`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::corpus::{Corpus, FilingDoc};
use crate::error::Result;
use crate::returns::{PanelDataset, PanelRow, PriceSeries, RiskFreeSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct PanelSpec {
    pub entities: usize,
    pub first_year: i32,
    pub last_year: i32,
    pub intercept: f64,
    pub slope: f64,
    pub sigma_u: f64,
    pub sigma_e: f64,
    pub year_effect_sd: f64,
    /// Inclusive range for `w_t`.
    pub w_range: (u64, u64),
    /// Probability that an entity-year is observed; 1.0 gives a balanced panel.
    pub keep_prob: f64,
}

impl Default for PanelSpec {
    /// Roughly the shape of an S&P 100 sample over 1993-2003.
    fn default() -> Self {
        PanelSpec {
            entities: 88,
            first_year: 1993,
            last_year: 2003,
            intercept: 0.12,
            slope: -2e-4,
            sigma_u: 0.05,
            sigma_e: 0.30,
            year_effect_sd: 0.15,
            w_range: (100, 1000),
            keep_prob: 0.57,
        }
    }
}

struct Draws {
    /// `(entity, year_t, w_t, r_next)`
    rows: Vec<(String, i32, u64, f64)>,
}

fn entity_name(i: usize) -> String {
    format!("E{i:03}")
}

fn draw<R: Rng>(spec: &PanelSpec, rng: &mut R) -> Draws {
    let std_normal = Normal::new(0.0, 1.0).expect("unit normal");
    let years: Vec<i32> = (spec.first_year..=spec.last_year).collect();
    let year_effects: Vec<f64> = years
        .iter()
        .enumerate()
        .map(|(i, _)| {
            if i == 0 {
                0.0
            } else {
                spec.year_effect_sd * std_normal.sample(rng)
            }
        })
        .collect();
    let mut rows = Vec::new();
    for e in 0..spec.entities {
        let u = spec.sigma_u * std_normal.sample(rng);
        let mut kept: Vec<usize> = (0..years.len())
            .filter(|_| rng.random::<f64>() < spec.keep_prob)
            .collect();
        if kept.is_empty() {
            kept.push(rng.random_range(0..years.len()));
        }
        // entity 0 always reports in the base year so the omitted category exists
        if e == 0 && kept[0] != 0 {
            kept.insert(0, 0);
        }
        for &yi in &kept {
            let w = rng.random_range(spec.w_range.0..=spec.w_range.1);
            let r = spec.intercept
                + spec.slope * w as f64
                + year_effects[yi]
                + u
                + spec.sigma_e * std_normal.sample(rng);
            rows.push((entity_name(e), years[yi], w, r));
        }
    }
    Draws { rows }
}

fn riskfree_for(spec: &PanelSpec) -> RiskFreeSeries {
    RiskFreeSeries::new(
        (spec.first_year + 1..=spec.last_year + 1).map(|y| (y, 0.03 + 0.005 * ((y % 5) as f64))),
    )
    .expect("one rate per year")
}

/// A panel drawn directly from the model, bypassing text and prices.
pub fn synthetic_panel<R: Rng>(spec: &PanelSpec, rng: &mut R) -> Result<PanelDataset> {
    let rf = riskfree_for(spec);
    let rows = draw(spec, rng)
        .rows
        .into_iter()
        .map(|(entity, year_t, w_t, r_next)| PanelRow {
            entity,
            year_t,
            w_t,
            r_next,
            rf_next: rf.get(year_t + 1),
        })
        .collect();
    PanelDataset::new(rows, spec.first_year)
}

/// Filing texts, year-end prices, and risk-free rates for a synthetic market.
#[derive(Debug, Clone)]
pub struct SyntheticMarket {
    pub corpus: Corpus,
    pub prices: Vec<PriceSeries>,
    pub riskfree: RiskFreeSeries,
}

const FILLER: [&str; 4] = [
    "Revenue grew in every segment.",
    "Goodwill impairment was not required.",
    "The board reviewed the willful misconduct policy.",
    "We expect stable margins.",
];

/// Report text with exactly `will` occurrences of the token "will".
pub fn filing_text<R: Rng>(will: u64, rng: &mut R) -> String {
    let mut s = String::with_capacity(will as usize * 24);
    for i in 0..will {
        s.push_str("The company will invest. ");
        if i % 7 == 0 {
            s.push_str(FILLER[rng.random_range(0..FILLER.len())]);
            s.push(' ');
        }
        if i % 11 == 0 {
            s.push_str("Holders shall be notified. ");
        }
    }
    s
}

pub fn synthetic_market<R: Rng>(spec: &PanelSpec, rng: &mut R) -> Result<SyntheticMarket> {
    let draws = draw(spec, rng);
    let mut returns: BTreeMap<&str, BTreeMap<i32, f64>> = BTreeMap::new();
    let mut docs = Vec::with_capacity(draws.rows.len());
    for (entity, year, w, r) in &draws.rows {
        returns.entry(entity).or_default().insert(year + 1, *r);
        docs.push(FilingDoc {
            entity: entity.clone(),
            year: *year,
            text: filing_text(*w, rng),
            source: PathBuf::from(format!("{entity}/{year}.txt")),
        });
    }
    let noise = Normal::new(0.0, spec.sigma_e).expect("positive sd");
    let mut prices = Vec::new();
    for (entity, rets) in &returns {
        let mut log_price = 100f64.ln();
        let mut points = vec![(spec.first_year, log_price.exp())];
        for year in spec.first_year + 1..=spec.last_year + 1 {
            log_price += rets
                .get(&year)
                .copied()
                .unwrap_or_else(|| noise.sample(rng));
            points.push((year, log_price.exp()));
        }
        prices.push(PriceSeries::new(entity.to_string(), points)?);
    }
    Ok(SyntheticMarket {
        corpus: Corpus::new(docs)?,
        prices,
        riskfree: riskfree_for(spec),
    })
}
