//! Annual log returns, excess returns, and the lagged count/return panel.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::futuretense::CountTable;

/// Year-end dividend-adjusted closes for one entity.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    entity: String,
    points: Vec<(i32, f64)>,
}

impl PriceSeries {
    /// Prices must be strictly positive and years strictly increasing.
    pub fn new(entity: impl Into<String>, points: Vec<(i32, f64)>) -> Result<Self> {
        let entity = entity.into();
        for (i, &(year, price)) in points.iter().enumerate() {
            if !price.is_finite() || price <= 0.0 {
                return Err(Error::NonPositivePrice {
                    entity,
                    year,
                    price,
                });
            }
            if i > 0 && points[i - 1].0 >= year {
                return Err(Error::UnorderedPrices { entity, year });
            }
        }
        Ok(PriceSeries { entity, points })
    }

    pub fn entity(&self) -> &str {
        &self.entity
    }

    pub fn points(&self) -> &[(i32, f64)] {
        &self.points
    }
}

/// `R_{t+1} = ln S_{t+1} - ln S_t`, keyed by `t+1`. Only consecutive
/// calendar years produce a return.
pub fn annual_log_returns(prices: &PriceSeries) -> BTreeMap<i32, f64> {
    prices
        .points
        .windows(2)
        .filter(|w| w[1].0 - w[0].0 == 1)
        .map(|w| (w[1].0, w[1].1.ln() - w[0].1.ln()))
        .collect()
}

pub fn excess(r: f64, rf: f64) -> f64 {
    r - rf
}

/// Annual risk-free rates, used as-is in `R - rf`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RiskFreeSeries {
    rates: BTreeMap<i32, f64>,
}

impl RiskFreeSeries {
    pub fn new(pairs: impl IntoIterator<Item = (i32, f64)>) -> Result<Self> {
        let mut rates = BTreeMap::new();
        for (year, rate) in pairs {
            if rates.insert(year, rate).is_some() {
                return Err(Error::DuplicateRate(year));
            }
        }
        Ok(RiskFreeSeries { rates })
    }

    pub fn get(&self, year: i32) -> Option<f64> {
        self.rates.get(&year).copied()
    }

    /// Reads `year,rate`.
    pub fn read_csv(path: &Path) -> Result<Self> {
        #[derive(Deserialize)]
        struct Rec {
            year: i32,
            rate: f64,
        }
        let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
        let pairs = rdr
            .deserialize::<Rec>()
            .map(|r| r.map(|r| (r.year, r.rate)).map_err(|e| Error::csv(path, e)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(pairs)
    }
}

/// Reads `entity,year,adj_close` into one series per entity.
pub fn read_prices_csv(path: &Path) -> Result<Vec<PriceSeries>> {
    #[derive(Deserialize)]
    struct Rec {
        entity: String,
        year: i32,
        adj_close: f64,
    }
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let mut by_entity: BTreeMap<String, Vec<(i32, f64)>> = BTreeMap::new();
    for rec in rdr.deserialize::<Rec>() {
        let rec = rec.map_err(|e| Error::csv(path, e))?;
        by_entity
            .entry(rec.entity)
            .or_default()
            .push((rec.year, rec.adj_close));
    }
    by_entity
        .into_iter()
        .map(|(entity, mut points)| {
            points.sort_by_key(|p| p.0);
            PriceSeries::new(entity, points)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelRow {
    pub entity: String,
    pub year_t: i32,
    pub w_t: u64,
    /// Log return over year `t+1`.
    pub r_next: f64,
    pub rf_next: Option<f64>,
}

impl PanelRow {
    pub fn excess_next(&self) -> Option<f64> {
        self.rf_next.map(|rf| excess(self.r_next, rf))
    }
}

/// Unbalanced entity-year panel in canonical `(entity, year_t)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelDataset {
    rows: Vec<PanelRow>,
    base_year: i32,
}

pub const PANEL_HEADER: [&str; 5] = ["entity", "year_t", "w_t", "r_next", "rf_next"];

impl PanelDataset {
    /// Canonicalizes row order and rejects duplicate keys. A nonempty panel
    /// must contain the base year.
    pub fn new(mut rows: Vec<PanelRow>, base_year: i32) -> Result<Self> {
        rows.sort_by(|a, b| (a.entity.as_str(), a.year_t).cmp(&(b.entity.as_str(), b.year_t)));
        for w in rows.windows(2) {
            if w[0].entity == w[1].entity && w[0].year_t == w[1].year_t {
                return Err(Error::DuplicatePanelRow {
                    entity: w[0].entity.clone(),
                    year: w[0].year_t,
                });
            }
        }
        if !rows.is_empty() && !rows.iter().any(|r| r.year_t == base_year) {
            return Err(Error::OmittedCategoryAbsent(base_year));
        }
        Ok(PanelDataset { rows, base_year })
    }

    pub fn rows(&self) -> &[PanelRow] {
        &self.rows
    }

    pub fn base_year(&self) -> i32 {
        self.base_year
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_groups(&self) -> usize {
        self.rows
            .iter()
            .map(|r| r.entity.as_str())
            .collect::<BTreeSet<_>>()
            .len()
    }

    pub fn years(&self) -> BTreeSet<i32> {
        self.rows.iter().map(|r| r.year_t).collect()
    }

    /// CSV `entity,year_t,w_t,r_next,rf_next`; a missing rate is an empty field.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        crate::output::csv_bytes(&self.rows, &PANEL_HEADER)
    }

    pub fn read_csv(path: &Path, base_year: i32) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
        let rows = rdr
            .deserialize::<PanelRow>()
            .map(|r| r.map_err(|e| Error::csv(path, e)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, base_year)
    }
}

/// Count rows that could not be joined to a next-year return.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DropReport {
    /// `(entity, year_t)` with no price series or no consecutive `t, t+1` prices.
    pub missing_return: Vec<(String, i32)>,
}

impl DropReport {
    pub fn total(&self) -> usize {
        self.missing_return.len()
    }
}

/// Joins each `(entity, t)` count to `R_{t+1}`, attaching `rf_{t+1}` when known.
pub fn build_panel(
    counts: &CountTable,
    prices: &[PriceSeries],
    rf: &RiskFreeSeries,
    base_year: i32,
) -> Result<(PanelDataset, DropReport)> {
    let returns: BTreeMap<&str, BTreeMap<i32, f64>> = prices
        .iter()
        .map(|p| (p.entity(), annual_log_returns(p)))
        .collect();
    let mut rows = Vec::new();
    let mut drops = DropReport::default();
    for c in &counts.rows {
        let next = c.year + 1;
        match returns.get(c.entity.as_str()).and_then(|r| r.get(&next)) {
            Some(&r_next) => rows.push(PanelRow {
                entity: c.entity.clone(),
                year_t: c.year,
                w_t: c.counts.will,
                r_next,
                rf_next: rf.get(next),
            }),
            None => drops.missing_return.push((c.entity.clone(), c.year)),
        }
    }
    if !drops.missing_return.is_empty() {
        log::info!("dropped {} rows without a next-year return", drops.total());
    }
    Ok((PanelDataset::new(rows, base_year)?, drops))
}
