//! Fixed-width regression tables in the layout of the classic panel output.

use std::fmt::Write;

use super::inference::{Method, RegressionResult, WaldTest};

const RULE: &str = "------------------------------------------------------------------------------";
const MID_RULE: &str =
    "-------------+----------------------------------------------------------------";

/// Up to seven significant decimals, leading zero dropped (`-.0001965`);
/// NaN prints as `.`.
pub fn fmt_num(v: f64) -> String {
    if !v.is_finite() {
        return ".".to_string();
    }
    let a = v.abs();
    let s = if a < 1.0 {
        format!("{v:.7}")
    } else {
        let int_digits = a.log10().floor() as i32 + 1;
        let decimals = (7 - int_digits).max(0) as usize;
        format!("{v:.decimals$}")
    };
    if let Some(rest) = s.strip_prefix("-0.") {
        format!("-.{rest}")
    } else if let Some(rest) = s.strip_prefix("0.") {
        format!(".{rest}")
    } else {
        s
    }
}

fn fmt_opt(v: Option<f64>, decimals: usize) -> String {
    match v {
        Some(v) if v.is_finite() => format!("{v:.decimals$}"),
        _ => ".".to_string(),
    }
}

fn fmt_fixed(v: f64, decimals: usize) -> String {
    fmt_opt(Some(v), decimals)
}

fn header_line(out: &mut String, left: &str, key: &str, value: &str) {
    let _ = writeln!(out, "{left:<48}{key:<19}= {value:>9}");
}

fn wald_lines(out: &mut String, left: [&str; 2], label: &str, w: Option<&WaldTest>) {
    let (chi2, p) = match w {
        Some(w) => (fmt_fixed(w.chi2, 2), fmt_fixed(w.p, 4)),
        None => (".".into(), ".".into()),
    };
    let df = w.map(|w| w.df.to_string()).unwrap_or_else(|| ".".into());
    header_line(out, left[0], &format!("Wald chi2({df}){label}"), &chi2);
    header_line(out, left[1], "Prob > chi2", &p);
}

fn coefficient_table(out: &mut String, r: &RegressionResult) {
    let _ = writeln!(out, "{RULE}");
    if r.method == Method::PooledCluster {
        let _ = writeln!(out, "{:>12} |{:>24}", "", "Robust");
    }
    let _ = writeln!(
        out,
        "{:>12} | {:>10} {:>10} {:>8} {:>7}   {:>25}",
        "Dep var.", "Coef.", "Std. Err.", "z", "P>|z|", "[95% Conf. Interval]"
    );
    let _ = writeln!(out, "{MID_RULE}");
    for i in 0..r.labels.len() {
        let _ = writeln!(
            out,
            "{:>12} | {:>10} {:>10} {:>8} {:>7}   {:>12} {:>12}",
            r.labels[i],
            fmt_num(r.coef[i]),
            fmt_num(r.se[i]),
            fmt_fixed(r.z[i], 2),
            fmt_fixed(r.p[i], 3),
            fmt_num(r.ci_low[i]),
            fmt_num(r.ci_high[i]),
        );
    }
    let _ = writeln!(out, "{RULE}");
}

/// Renders a result as a text table with the header block for its method.
pub fn render_table(r: &RegressionResult) -> String {
    let mut out = String::new();
    let n_obs = r.n_obs.to_string();
    let n_groups = r.n_groups.to_string();
    match r.method {
        Method::ReGls => {
            header_line(
                &mut out,
                "Random-effects GLS regression",
                "Number of obs",
                &n_obs,
            );
            header_line(
                &mut out,
                "Group variable (i): id",
                "Number of groups",
                &n_groups,
            );
            let _ = writeln!(out);
            header_line(
                &mut out,
                &format!("R-sq:  within  = {}", fmt_opt(r.r2_within, 4)),
                "Obs per group: min",
                &r.obs_per_group.min.to_string(),
            );
            header_line(
                &mut out,
                &format!("       between = {}", fmt_opt(r.r2_between, 4)),
                "               avg",
                &format!("{:.1}", r.obs_per_group.avg),
            );
            header_line(
                &mut out,
                &format!("       overall = {}", fmt_opt(r.r2_overall, 4)),
                "               max",
                &r.obs_per_group.max.to_string(),
            );
            let _ = writeln!(out);
            wald_lines(
                &mut out,
                [
                    "Random effects u_i ~ Gaussian",
                    "corr(u_i, X)       = 0 (assumed)",
                ],
                "",
                r.wald.as_ref(),
            );
            wald_lines(&mut out, ["", ""], " w_t", r.wald_w.as_ref());
        }
        Method::PooledCluster | Method::SimpleOls => {
            let title = if r.method == Method::PooledCluster {
                "Regression with robust standard errors"
            } else {
                "Linear regression"
            };
            header_line(&mut out, title, "Number of obs", &n_obs);
            header_line(&mut out, "", "R-squared", &fmt_opt(r.r2_overall, 4));
            wald_lines(&mut out, ["", ""], "", r.wald.as_ref());
            wald_lines(&mut out, ["", ""], " w_t", r.wald_w.as_ref());
            let _ = writeln!(
                out,
                "Number of clusters (id) = {}",
                r.n_clusters.unwrap_or(r.n_groups)
            );
        }
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "Dep var.: {}", r.dep_var);
    coefficient_table(&mut out, r);
    if let Some(c) = &r.components {
        let rho = if c.sigma_u2 + c.sigma_e2 > 0.0 {
            c.sigma_u2 / (c.sigma_u2 + c.sigma_e2)
        } else {
            f64::NAN
        };
        let _ = writeln!(
            out,
            "{:>12} | {:>10}",
            "sigma_u",
            fmt_num(c.sigma_u2.sqrt())
        );
        let _ = writeln!(
            out,
            "{:>12} | {:>10}",
            "sigma_e",
            fmt_num(c.sigma_e2.sqrt())
        );
        let _ = writeln!(
            out,
            "{:>12} | {:>10}   (fraction of variance due to u_i)",
            "rho",
            fmt_num(rho)
        );
        if c.degenerate {
            let _ = writeln!(
                out,
                "note: zero idiosyncratic variance; within estimator reported"
            );
        }
        let _ = writeln!(out, "{RULE}");
    }
    out
}
