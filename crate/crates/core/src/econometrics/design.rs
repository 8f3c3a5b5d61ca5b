use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::returns::PanelDataset;

pub const W_LABEL: &str = "w_t";
pub const CONS_LABEL: &str = "cons";

pub fn dummy_label(year: i32) -> String {
    format!("dum{year}")
}

/// Dependent variable: next-year log return or excess return.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DepVar {
    #[default]
    Return,
    Excess,
}

impl DepVar {
    pub fn label(&self) -> &'static str {
        match self {
            DepVar::Return => "R_{t+1}",
            DepVar::Excess => "R_{t+1} - rf_{t+1}",
        }
    }
}

impl fmt::Display for DepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            DepVar::Return => "return",
            DepVar::Excess => "excess",
        })
    }
}

impl FromStr for DepVar {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "return" => Ok(DepVar::Return),
            "excess" => Ok(DepVar::Excess),
            other => Err(format!(
                "unknown dependent variable {other:?} (return|excess)"
            )),
        }
    }
}

/// Regressors `w_t`, one dummy per non-base year (ascending), and `cons`.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub column_labels: Vec<String>,
    pub values: DMatrix<f64>,
    pub cluster_ids: Vec<String>,
    /// Rows of each entity; contiguous because panels are canonically ordered.
    pub group_index: BTreeMap<String, Range<usize>>,
}

impl DesignMatrix {
    /// Builds a design from raw columns. `cluster_ids` also define the groups
    /// and must arrive with equal ids adjacent.
    pub fn new(
        column_labels: Vec<String>,
        values: DMatrix<f64>,
        cluster_ids: Vec<String>,
    ) -> Result<Self> {
        if values.ncols() != column_labels.len() {
            return Err(Error::LengthMismatch(values.ncols(), column_labels.len()));
        }
        if values.nrows() != cluster_ids.len() {
            return Err(Error::LengthMismatch(values.nrows(), cluster_ids.len()));
        }
        let mut group_index: BTreeMap<String, Range<usize>> = BTreeMap::new();
        let mut start = 0;
        for i in 1..=cluster_ids.len() {
            if i == cluster_ids.len() || cluster_ids[i] != cluster_ids[start] {
                let id = cluster_ids[start].clone();
                if group_index.insert(id.clone(), start..i).is_some() {
                    return Err(Error::DuplicatePanelRow {
                        entity: id,
                        year: 0,
                    });
                }
                start = i;
            }
        }
        Ok(DesignMatrix {
            column_labels,
            values,
            cluster_ids,
            group_index,
        })
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn k(&self) -> usize {
        self.values.ncols()
    }

    pub fn n_groups(&self) -> usize {
        self.group_index.len()
    }

    pub fn column_index(&self, label: &str) -> Option<usize> {
        self.column_labels.iter().position(|l| l == label)
    }

    pub fn non_cons_labels(&self) -> Vec<&str> {
        self.column_labels
            .iter()
            .map(String::as_str)
            .filter(|l| *l != CONS_LABEL)
            .collect()
    }

    /// Group row ranges in row order.
    pub fn groups(&self) -> Vec<Range<usize>> {
        let mut g: Vec<_> = self.group_index.values().cloned().collect();
        g.sort_by_key(|r| r.start);
        g
    }
}

/// What `build_design` left out.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DesignReport {
    /// Rows without a risk-free rate, dropped for the excess-return model.
    pub dropped_missing_rf: Vec<(String, i32)>,
    /// Years whose dummy was omitted because no rows remained.
    pub omitted_years: Vec<i32>,
}

pub fn build_design(
    panel: &PanelDataset,
    dep: DepVar,
) -> Result<(DesignMatrix, DVector<f64>, DesignReport)> {
    if panel.is_empty() {
        return Err(Error::EmptyPanel);
    }
    let mut report = DesignReport::default();
    let mut rows = Vec::with_capacity(panel.len());
    for r in panel.rows() {
        let y = match dep {
            DepVar::Return => Some(r.r_next),
            DepVar::Excess => r.excess_next(),
        };
        match y {
            Some(y) => rows.push((r, y)),
            None => report.dropped_missing_rf.push((r.entity.clone(), r.year_t)),
        }
    }
    if !report.dropped_missing_rf.is_empty() {
        log::warn!(
            "dropped {} rows without a risk-free rate",
            report.dropped_missing_rf.len()
        );
    }
    if rows.is_empty() {
        return Err(Error::EmptyPanel);
    }

    let base = panel.base_year();
    if !rows.iter().any(|(r, _)| r.year_t == base) {
        return Err(Error::OmittedCategoryAbsent(base));
    }
    let mut dummy_years = Vec::new();
    for year in panel.years().into_iter().filter(|&y| y != base) {
        if rows.iter().any(|(r, _)| r.year_t == year) {
            dummy_years.push(year);
        } else {
            log::warn!("no rows left for {year}; omitting its dummy");
            report.omitted_years.push(year);
        }
    }

    let mut labels = vec![W_LABEL.to_string()];
    labels.extend(dummy_years.iter().map(|&y| dummy_label(y)));
    labels.push(CONS_LABEL.to_string());
    let (n, k) = (rows.len(), labels.len());
    if n <= k {
        return Err(Error::TooFewObservations { n, k });
    }

    let values = DMatrix::from_fn(n, k, |i, j| {
        let row = rows[i].0;
        if j == 0 {
            row.w_t as f64
        } else if j == k - 1 || row.year_t == dummy_years[j - 1] {
            1.0
        } else {
            0.0
        }
    });
    let y = DVector::from_iterator(n, rows.iter().map(|(_, y)| *y));
    let clusters = rows.iter().map(|(r, _)| r.entity.clone()).collect();
    Ok((DesignMatrix::new(labels, values, clusters)?, y, report))
}
