//! Random-effects GLS on a seeded synthetic panel, with the Swamy-Arora
//! variance components and the per-group quasi-demeaning factors.
//!
//!     cargo run --example random_effects -- --seed 3

use clap::Parser;
use rand::rngs::StdRng;
use rand::SeedableRng;

use promises::econometrics::{build_design, re_gls, render_table, swamy_arora, DepVar};
use promises::synth::{synthetic_panel, PanelSpec};

#[derive(Parser)]
struct Args {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 88)]
    entities: usize,
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args = Args::parse();
    let spec = PanelSpec {
        entities: args.entities,
        ..PanelSpec::default()
    };
    let panel = synthetic_panel(&spec, &mut StdRng::seed_from_u64(args.seed))?;
    let (x, y, _) = build_design(&panel, DepVar::Return)?;

    let comps = swamy_arora(&x, &y)?;
    println!(
        "sigma_u^2 = {:.5} (true {:.5})   sigma_e^2 = {:.5} (true {:.5})",
        comps.sigma_u2,
        spec.sigma_u.powi(2),
        comps.sigma_e2,
        spec.sigma_e.powi(2)
    );
    let (lo, hi) = comps
        .theta
        .values()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| {
            (lo.min(t), hi.max(t))
        });
    println!(
        "theta ranges over [{lo:.4}, {hi:.4}] across {} groups\n",
        comps.theta.len()
    );

    let mut result = re_gls(&x, &y)?;
    result.dep_var = DepVar::Return.label().into();
    print!("{}", render_table(&result));
    println!("\ntrue slope {:e}", spec.slope);
    Ok(())
}
