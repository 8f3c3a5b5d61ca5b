//! Future-tense "promise" counts from annual reports and debate transcripts,
//! joined to next-year stock returns and estimated with random-effects GLS and
//! cluster-robust pooled OLS.
//!
//! The pipeline runs [`corpus::load_corpus`] → [`futuretense::aggregate_counts`]
//! → [`returns::build_panel`] → [`econometrics::estimate`]. The [`debates`]
//! module applies the same counts to election debates.

pub mod cli;
pub mod corpus;
pub mod debates;
pub mod econometrics;
pub mod error;
pub mod futuretense;
pub mod output;
pub mod returns;
pub mod synth;

pub use error::{Error, Result};
