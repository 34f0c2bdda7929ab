use serde_json::{json, Value};
use sg_stochastic::{
    convergence_study, correlation_slopes, dipole_moment, fit_power_law, renorm_constant, smooth_initial, solve_pde,
    ConvergenceConfig, CorrelationConfig, DipoleConfig, LineFit, Mollifier, PdeConfig, TorusLattice,
};

use crate::args::{MollifierArg, SimArgs, SimCmd};
use crate::output::{num, Artifact, Table};
use crate::params::{coupling, real, real_list};
use crate::CliError;

/// Two-sided normal quantile for the reported confidence interval.
const Z95: f64 = 1.959_963_984_540_054;

pub fn sim(cmd: &SimCmd) -> Result<Artifact, CliError> {
    match cmd {
        SimCmd::Field(a) => field(a),
        SimCmd::Dipole(a) => dipole(a),
        SimCmd::Pde(a) => pde(a),
        SimCmd::Converge(a) => converge(a),
    }
}

fn table() -> Table {
    Table::new(&["quantity", "scale", "estimate", "stderr"])
}

fn row(t: &mut Table, q: &str, scale: f64, est: f64, se: f64) {
    t.push(vec![q.into(), num(scale), num(est), num(se)]);
}

fn fit_summary(fit: Option<&LineFit>, n_samples: usize, config: &Value, extra: Value) -> Value {
    let mut s = json!({
        "slope": fit.map(|f| f.slope),
        "ci": fit.map(|f| [f.slope - Z95 * f.slope_se, f.slope + Z95 * f.slope_se]),
        "n_samples": n_samples,
        "config": config,
    });
    if let (Value::Object(m), Value::Object(e)) = (&mut s, extra) {
        m.extend(e);
    }
    s
}

fn finish(command: &str, config: Value, result: Value, table: Table, summary: Value) -> Result<Artifact, CliError> {
    let mut art = Artifact::new(command, config, result)?;
    art.table = Some(table);
    art.summary = Some(summary);
    Ok(art)
}

fn mollifier(m: Option<MollifierArg>) -> Mollifier {
    match m {
        Some(MollifierArg::Rational) => Mollifier::Rational,
        _ => Mollifier::Gaussian,
    }
}

/// About eight log-spaced lattice displacements over one decade from `4ε`.
fn default_separations(n: usize, eps: f64) -> Vec<usize> {
    let lo = ((4.0 * eps * n as f64).ceil() as usize).max(1);
    let hi = (10 * lo).min(n / 4).max(lo);
    let mut out: Vec<usize> = (0..8)
        .map(|i| (lo as f64 * (hi as f64 / lo as f64).powf(i as f64 / 7.0)).round() as usize)
        .collect();
    out.dedup();
    out
}

fn field(a: &SimArgs) -> Result<Artifact, CliError> {
    let (b_str, b) = coupling(a.beta2_over_pi.as_deref(), "5")?;
    let mut cfg = CorrelationConfig::standard(b, a.seed);
    let custom_grid = a.n.is_some() || a.eps.is_some();
    if let Some(n) = a.n {
        cfg.n = n;
    }
    if let Some(e) = &a.eps {
        cfg.eps = real("eps", e)?;
    }
    if custom_grid {
        cfg.separations = default_separations(cfg.n, cfg.eps);
    }
    if let Some(s) = a.samples {
        cfg.fields = s;
    }
    let rep = correlation_slopes(&cfg)?;

    // renormalization constant over dyadic widths the grid resolves
    let lat = TorusLattice::new(cfg.n, 1.0)?;
    let widths: Vec<f64> = (3..).map(|j| 2f64.powi(-j)).take_while(|&e| e >= lat.min_eps()).collect();
    let constants = widths.iter().map(|&e| renorm_constant(&lat, e, b)).collect::<Result<Vec<f64>, _>>()?;
    let c_fit = (widths.len() >= 2).then(|| fit_power_law(&widths, &constants, None));

    let mut t = table();
    for r in &rep.rows {
        row(&mut t, "opposite", r.distance, r.opposite_gaussian, r.opposite_gaussian_se);
        row(&mut t, "same", r.distance, r.same_gaussian, r.same_gaussian_se);
        row(&mut t, "opposite_direct", r.distance, r.opposite_direct, r.opposite_direct_se);
        row(&mut t, "covariance", r.distance, r.covariance, r.covariance_se);
    }
    for (e, c) in widths.iter().zip(&constants) {
        row(&mut t, "constant", *e, *c, 0.0);
    }
    let config = json!({ "beta2_over_pi": b_str, "correlation": cfg });
    let summary = fit_summary(
        Some(&rep.opposite_charge),
        cfg.fields,
        &config,
        json!({
            "target_slope": -b / 2.0,
            "mean_xi": rep.mean_xi,
            "mean_xi_se": rep.mean_xi_se,
            "constant_slope": c_fit.map(|f| f.slope),
            "constant_target": -b / 4.0,
        }),
    );
    let result = json!({
        "correlations": rep,
        "constant_scaling": { "eps": widths, "constant": constants, "fit": c_fit },
    });
    finish("sim field", config, result, t, summary)
}

fn dipole(a: &SimArgs) -> Result<Artifact, CliError> {
    let (b_str, b) = coupling(a.beta2_over_pi.as_deref(), "5")?;
    let mut cfg = DipoleConfig::standard(a.seed);
    cfg.beta2_over_pi = b;
    if let Some(n) = a.n {
        cfg.n = n;
    }
    if let Some(e) = &a.eps {
        cfg.eps = real("eps", e)?;
        cfg.dt = cfg.eps * cfg.eps / 2.0;
    }
    if let Some(dt) = &a.dt {
        cfg.dt = real("dt", dt)?;
    }
    if let Some(l) = &a.lambda {
        cfg.lambdas = real_list("lambda", l)?;
    }
    if let Some(s) = a.samples {
        cfg.blocks = s;
    }
    let rep = dipole_moment(&cfg)?;
    let mut t = table();
    for r in &rep.rows {
        row(&mut t, "renormalized", r.lambda, r.second_moment, r.second_moment_se);
        row(&mut t, "raw", r.lambda, r.raw_second_moment, r.raw_second_moment_se);
    }
    let config = json!({ "beta2_over_pi": b_str, "dipole": cfg });
    let summary = fit_summary(
        Some(&rep.slope),
        cfg.blocks,
        &config,
        json!({ "target_slope": rep.target_slope, "raw_slope": rep.raw_slope.slope }),
    );
    finish("sim dipole", config, serde_json::to_value(&rep).map_err(|e| CliError::Failed(e.to_string()))?, t, summary)
}

fn pde(a: &SimArgs) -> Result<Artifact, CliError> {
    let (b_str, b) = coupling(a.beta2_over_pi.as_deref(), "2")?;
    let n = a.n.unwrap_or(128);
    let eps = match &a.eps {
        Some(e) => real("eps", e)?,
        None => 2.0 / n as f64,
    };
    let dt = match &a.dt {
        Some(d) => real("dt", d)?,
        None => eps * eps / 2.0,
    };
    let t_end = match &a.t_end {
        Some(t) => real("t-end", t)?,
        None => 0.1,
    };
    let steps = (t_end / dt).round().max(1.0) as usize;
    let cfg = PdeConfig {
        n,
        eps,
        beta2_over_pi: b,
        dt,
        t_end,
        seed: a.seed,
        mollifier: mollifier(a.mollifier),
        record_every: (steps / 50).max(1),
    };
    let v0 = smooth_initial(n, 0.5, 0.5);
    let tr = solve_pde(&cfg, &v0)?;
    let mut t = table();
    for (time, s) in tr.times.iter().zip(&tr.states) {
        let sup = s.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        row(&mut t, "sup_norm", *time, sup, 0.0);
    }
    let config = json!({ "beta2_over_pi": b_str, "pde": cfg, "initial": "0.5 sin(2πx₁) + 0.5 cos(2πx₂)" });
    let summary = fit_summary(
        None,
        1,
        &config,
        json!({ "max_imag": tr.max_imag, "max_forcing": tr.max_forcing, "constant": tr.constant }),
    );
    let result = json!({
        "constant": tr.constant,
        "times": tr.times,
        "max_imag": tr.max_imag,
        "max_forcing": tr.max_forcing,
        "final_state": tr.states.last(),
    });
    finish("sim pde", config, result, t, summary)
}

fn converge(a: &SimArgs) -> Result<Artifact, CliError> {
    let (b_str, b) = coupling(a.beta2_over_pi.as_deref(), "2")?;
    let mut cfg = ConvergenceConfig::standard(a.samples.unwrap_or(8));
    cfg.beta2_over_pi = b;
    cfg.seeds = cfg.seeds.iter().map(|s| s.wrapping_add(a.seed)).collect();
    if let Some(n) = a.n {
        cfg.n = n;
    }
    if let Some(e) = &a.eps {
        cfg.eps = real_list("eps", e)?;
        let finest = cfg.eps.last().copied().unwrap_or(1.0) / 2.0;
        cfg.dt = finest * finest / 2.0;
    }
    if let Some(dt) = &a.dt {
        cfg.dt = real("dt", dt)?;
    }
    if let Some(t) = &a.t_end {
        cfg.t_end = real("t-end", t)?;
    }
    if a.mollifier == Some(MollifierArg::Rational) {
        return Err(CliError::Usage("converge always compares both mollifiers; drop --mollifier".into()));
    }
    let rep = convergence_study(&cfg)?;
    let mut t = table();
    for ((e, d), se) in cfg.eps.iter().zip(&rep.d_mean).zip(&rep.d_se) {
        row(&mut t, "d", *e, *d, *se);
    }
    let fit = (cfg.eps.len() >= 2).then(|| fit_power_law(&cfg.eps, &rep.d_mean, None));
    let config = json!({ "beta2_over_pi": b_str, "convergence": cfg });
    let summary = fit_summary(
        fit.as_ref(),
        cfg.seeds.len(),
        &config,
        json!({
            "ratios": rep.ratios,
            "monotone": rep.monotone,
            "swap_ratio": rep.swap_ratio,
            "max_imag": rep.max_imag,
        }),
    );
    finish("sim converge", config, serde_json::to_value(&rep).map_err(|e| CliError::Failed(e.to_string()))?, t, summary)
}
