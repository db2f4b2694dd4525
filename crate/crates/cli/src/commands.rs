use fracjet::fodesolve::{self, build_model, solve_multiterm, ModelParams};
use fracjet::fracops::frac_deriv;
use fracjet::jet::lift;
use fracjet::specfun::{mittag_leffler, MLParams};
use fracjet::varcalc::{self, builtin, el_residual, CatalogParams, CoefficientSet, ELVariant, Lagrangian, Potential};
use fracjet::{FracOrder, Side};

use crate::inputs;
use crate::options::{CoefficientArg, Format, Options, SideArg, VariantArg};
use crate::output::Artifact;
use crate::CliError;

fn require<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn unit_alpha(alpha: f64) -> Result<f64, CliError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err(CliError::Usage(format!("--alpha must lie in (0, 1), got {alpha}")))
    }
}

pub fn deriv(opts: &Options) -> Result<Artifact, CliError> {
    let alpha = require(opts.alpha, "alpha")?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(CliError::Usage(format!("--alpha must be positive, got {alpha}")));
    }
    let path = inputs::path(opts)?;
    let side = match opts.side.unwrap_or(SideArg::Left) {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    };
    let d = frac_deriv(&path, FracOrder::new(alpha)?, side)?;
    let mut art = Artifact::new("deriv", &["t", "value"]);
    art.alpha = Some(alpha);
    art.h = Some(path.h());
    art.meta("side", if side == Side::Left { "left" } else { "right" });
    art.rows = d.times().zip(d.values()).map(|(t, &v)| vec![t, v]).collect();
    Ok(art)
}

pub fn mlf(opts: &Options) -> Result<Artifact, CliError> {
    let alpha = require(opts.alpha, "alpha")?;
    let z = require(opts.z, "z")?;
    let params = MLParams::new(alpha)?;
    let value = mittag_leffler(&params, z)?;
    let mut art = Artifact::new("mlf", &["z", "value"]);
    art.scheme = "power-series";
    art.alpha = Some(alpha);
    art.meta("tol", params.tol());
    art.rows = vec![vec![z, value]];
    Ok(art)
}

pub fn lift_cmd(opts: &Options) -> Result<Artifact, CliError> {
    let alpha = unit_alpha(require(opts.alpha, "alpha")?)?;
    let k = opts.k.unwrap_or(1);
    if k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let path = inputs::path(opts)?;
    let traj = lift(std::slice::from_ref(&path), alpha, k)?;
    let mut columns = vec!["t".to_string(), "x".to_string()];
    columns.extend((1..=k).map(|a| format!("y{a}")));
    let mut art = Artifact::new("lift", &[]);
    art.columns = columns;
    art.alpha = Some(alpha);
    art.h = Some(traj.h());
    art.meta("k", k);
    art.rows = (0..traj.len())
        .map(|j| {
            let mut row = vec![traj.time(j), path.values()[j]];
            row.extend((1..=k).map(|a| traj.jet(a, 0).values()[j]));
            row
        })
        .collect();
    Ok(art)
}

fn catalog_lagrangian(opts: &Options) -> Result<(String, Lagrangian), CliError> {
    let name = require(opts.lagrangian.clone(), "lagrangian")?;
    if let Some(alpha) = opts.alpha {
        unit_alpha(alpha)?;
    }
    let defaults = CatalogParams::default();
    let q = opts.kappa.unwrap_or(1.0);
    let params = CatalogParams {
        alpha: opts.alpha,
        a: opts.a.unwrap_or(defaults.a),
        b: opts.b.unwrap_or(defaults.b),
        c: opts.c.unwrap_or(defaults.c),
        a1: opts.a1.unwrap_or(defaults.a1),
        a2: opts.a2.unwrap_or(defaults.a2),
        gamma: opts.gamma.unwrap_or(defaults.gamma),
        forcing: inputs::forcing(opts)?,
        potential: Potential::quadratic(q),
        coefficients: match opts.coefficients.unwrap_or(CoefficientArg::Normalized) {
            CoefficientArg::Normalized => CoefficientSet::Normalized,
            CoefficientArg::Paper => CoefficientSet::Paper,
        },
    };
    let l = builtin(&name, &params)?;
    Ok((name, l))
}

fn coefficient_label(opts: &Options) -> &'static str {
    match opts.coefficients.unwrap_or(CoefficientArg::Normalized) {
        CoefficientArg::Normalized => "normalized",
        CoefficientArg::Paper => "paper",
    }
}

pub fn action(opts: &Options) -> Result<Artifact, CliError> {
    let (name, l) = catalog_lagrangian(opts)?;
    let path = inputs::path(opts)?;
    let traj = lift(std::slice::from_ref(&path), l.alpha(), l.order())?;
    let value = varcalc::action(&l, &traj)?;
    let mut art = Artifact::new("action", &["action"]);
    art.alpha = Some(l.alpha());
    art.h = Some(path.h());
    art.meta("lagrangian", name);
    art.meta("coefficients", coefficient_label(opts));
    art.rows = vec![vec![value]];
    Ok(art)
}

pub fn el_check(opts: &Options) -> Result<Artifact, CliError> {
    let (name, l) = catalog_lagrangian(opts)?;
    let path = inputs::path(opts)?;
    let variant = match opts.variant.unwrap_or(VariantArg::Classical) {
        VariantArg::Classical => ELVariant::Classical,
        VariantArg::Fractional => ELVariant::Fractional,
    };
    let traj = lift(std::slice::from_ref(&path), l.alpha(), l.order())?;
    let report = el_residual(&l, &traj, variant)?;
    let mut art = Artifact::new("el-check", &["t", "residual"]);
    art.alpha = Some(l.alpha());
    art.h = Some(path.h());
    art.meta("lagrangian", name);
    art.meta("coefficients", coefficient_label(opts));
    art.meta(
        "variant",
        if variant == ELVariant::Classical {
            "classical"
        } else {
            "fractional"
        },
    );
    art.meta("norm_inf", report.norm_inf);
    let r = &report.residual[0];
    art.rows = r.times().zip(r.values()).map(|(t, &v)| vec![t, v]).collect();
    Ok(art)
}

pub fn solve(opts: &Options) -> Result<Artifact, CliError> {
    let name = require(opts.model.clone(), "model")?;
    let spec = fodesolve::models::lookup(&name)?;
    if let Some(alpha) = opts.alpha {
        unit_alpha(alpha)?;
    }
    let g = inputs::grid(opts)?;
    if g.t0 != 0.0 {
        return Err(CliError::Usage("solve needs a grid starting at 0".into()));
    }
    let d = ModelParams::default();
    let params = ModelParams {
        alpha: opts.alpha,
        m: opts.m.unwrap_or(d.m),
        damping: opts.damping.unwrap_or(d.damping),
        kappa: opts.kappa.unwrap_or(d.kappa),
        a: opts.a.unwrap_or(d.a),
        b: opts.b.unwrap_or(d.b),
        c: opts.c.unwrap_or(d.c),
        a1: opts.a1.unwrap_or(d.a1),
        a2: opts.a2.unwrap_or(d.a2),
        b1: opts.b1.unwrap_or(d.b1),
        forcing: inputs::forcing(opts)?,
        t_end: g.t1,
    };
    let fde = build_model(&name, &params)?;
    let report = solve_multiterm(&fde, g.h())?;
    let sol = &report.solution;
    let mut art = Artifact::new("solve", &["t", "x"]);
    art.scheme = "implicit-grunwald-letnikov";
    art.alpha = Some(opts.alpha.unwrap_or(spec.classical_alpha));
    art.h = Some(sol.h());
    art.meta("model", name);
    art.meta("orders", fde.terms().iter().map(|t| t.order.mu()).collect::<Vec<_>>());
    art.meta("max_defect", report.max_defect);
    art.meta("steps", report.steps);
    art.rows = sol.times().zip(sol.values()).map(|(t, &v)| vec![t, v]).collect();
    Ok(art)
}

/// Both catalogs, as text or JSON.
pub fn models_list(opts: &Options) -> Result<Vec<u8>, CliError> {
    let models = fodesolve::model_catalog();
    let lagrangians = varcalc::CATALOG_NAMES;
    match opts.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let models: Vec<_> = models
                .iter()
                .map(|m| {
                    serde_json::json!({
                        "name": m.name,
                        "equation": m.equation,
                        "params": m.params,
                        "classical_alpha": m.classical_alpha,
                    })
                })
                .collect();
            let lags = lagrangians
                .iter()
                .map(|&n| {
                    Ok(serde_json::json!({
                        "name": n,
                        "equation": varcalc::catalog::describe(n)?,
                        "default_alpha": varcalc::catalog::default_alpha(n)?,
                    }))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let mut out = serde_json::to_vec_pretty(&serde_json::json!({
                "models": models,
                "lagrangians": lags,
            }))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut text = String::from("models (solve --model NAME)\n");
            for m in models {
                text.push_str(&format!("  {:<16} {}\n", m.name, m.equation));
                text.push_str(&format!("  {:<16} coefficients: {}\n", "", m.params.join(", ")));
            }
            text.push_str("lagrangians (action/el-check --lagrangian NAME)\n");
            for n in lagrangians {
                text.push_str(&format!("  {:<18} {}\n", n, varcalc::catalog::describe(n)?));
            }
            Ok(text.into_bytes())
        }
    }
}
