//! Subtracting any year-indexed series from the outcome (such as the
//! risk-free rate) is absorbed by the year dummies: the `w_t` estimate and its
//! standard error do not move.
//!
//!     cargo run --example slope_invariance

use rand::rngs::StdRng;
use rand::SeedableRng;

use promises::econometrics::{estimate, DepVar, Model};
use promises::synth::{synthetic_panel, PanelSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let panel = synthetic_panel(&PanelSpec::default(), &mut StdRng::seed_from_u64(11))?;
    for model in [Model::Re, Model::Pooled] {
        let raw = estimate(&panel, model, DepVar::Return)?;
        let exc = estimate(&panel, model, DepVar::Excess)?;
        let (b0, s0) = (raw.coef_of("w_t").unwrap(), raw.se_of("w_t").unwrap());
        let (b1, s1) = (exc.coef_of("w_t").unwrap(), exc.se_of("w_t").unwrap());
        println!("{model:>6}  return: b = {b0:+.9e} se = {s0:.9e}");
        println!("{model:>6}  excess: b = {b1:+.9e} se = {s1:.9e}");
        println!(
            "{model:>6}  |db| = {:.1e}  |dse| = {:.1e}\n",
            (b0 - b1).abs(),
            (s0 - s1).abs()
        );
    }
    Ok(())
}
