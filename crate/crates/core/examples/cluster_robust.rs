//! Pooled OLS with entity-clustered errors next to the naive OLS errors, on a
//! panel with strong entity effects where the two disagree.
//!
//!     cargo run --example cluster_robust

use rand::rngs::StdRng;
use rand::SeedableRng;

use promises::econometrics::{build_design, ols, pooled_cluster, DepVar};
use promises::synth::{synthetic_panel, PanelSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = PanelSpec {
        sigma_u: 0.25,
        keep_prob: 1.0,
        ..PanelSpec::default()
    };
    let panel = synthetic_panel(&spec, &mut StdRng::seed_from_u64(7))?;
    let (x, y, _) = build_design(&panel, DepVar::Return)?;

    let robust = pooled_cluster(&x, &y)?;

    let (_, resid) = ols(&x, &y)?;
    let (n, k) = (x.n(), x.k());
    let s2 = resid.norm_squared() / (n - k) as f64;
    let xtx_inv = (x.values.transpose() * &x.values)
        .try_inverse()
        .ok_or("singular design")?;

    println!("{} obs, {} clusters\n", n, robust.n_clusters.unwrap_or(0));
    println!(
        "{:>10} {:>12} {:>12} {:>12}",
        "", "coef", "se (OLS)", "se (cluster)"
    );
    for (j, label) in robust.labels.iter().enumerate() {
        println!(
            "{label:>10} {:>12.6} {:>12.6} {:>12.6}",
            robust.coef[j],
            (s2 * xtx_inv[(j, j)]).sqrt(),
            robust.se[j]
        );
    }
    Ok(())
}
