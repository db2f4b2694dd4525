//! Named model templates.
//!
//! Each model is a linear multi-term equation in the orders `2α`, `4α`, …
//! The classical form is the entry's default `α` (1/2, or 1/4 for
//! Bagley–Torvik), which turns the orders into integers (and 3/2); any other
//! `α` gives the fractional counterpart.

use std::sync::Arc;

use crate::error::{FracError, Result};
use crate::varcalc::ScalarFn;

use super::{MultiTermFDE, FODE2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub name: &'static str,
    pub equation: &'static str,
    /// Coefficients read from [`ModelParams`].
    pub params: &'static [&'static str],
    pub classical_alpha: f64,
}

const CATALOG: [ModelSpec; 4] = [
    ModelSpec {
        name: "friction",
        equation:
            "m D^(4α)x + damping D^(2α)x - ∂U/∂x = 0 with U = -kappa x²/2 + load(t) x; classical friction at α = 1/2",
        params: &["m", "damping", "kappa", "forcing"],
        classical_alpha: 0.5,
    },
    ModelSpec {
        name: "phillips",
        equation: "D^(4α)x + a1 D^(2α)x + b1 x + f(t) = 0; Phillips model at α = 1/2",
        params: &["a1", "b1", "forcing"],
        classical_alpha: 0.5,
    },
    ModelSpec {
        name: "business-cycle",
        equation: "D^(6α)x + a2 D^(4α)x + a1 D^(2α)x + b1 x + f(t) = 0; business cycle with innovation at α = 1/2",
        params: &["a1", "a2", "b1", "forcing"],
        classical_alpha: 0.5,
    },
    ModelSpec {
        name: "bagley-torvik",
        equation: "a D^(8α)x + b D^(6α)x + c x - f(t) = 0; orders (2, 3/2) at α = 1/4",
        params: &["a", "b", "c", "forcing"],
        classical_alpha: 0.25,
    },
];

pub fn model_catalog() -> &'static [ModelSpec] {
    &CATALOG
}

pub fn lookup(name: &str) -> Result<&'static ModelSpec> {
    CATALOG
        .iter()
        .find(|m| m.name == name)
        .ok_or_else(|| FracError::UnknownName(name.to_string()))
}

/// Coefficients for [`build_model`]. Every coefficient defaults to 1, the
/// forcing to zero, the interval to `[0, 1]`.
#[derive(Clone)]
pub struct ModelParams {
    pub alpha: Option<f64>,
    pub m: f64,
    pub damping: f64,
    pub kappa: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub forcing: ScalarFn,
    pub t_end: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            alpha: None,
            m: 1.0,
            damping: 1.0,
            kappa: 1.0,
            a: 1.0,
            b: 1.0,
            c: 1.0,
            a1: 1.0,
            a2: 1.0,
            b1: 1.0,
            forcing: Arc::new(|_| 0.0),
            t_end: 1.0,
        }
    }
}

impl std::fmt::Debug for ModelParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModelParams")
            .field("alpha", &self.alpha)
            .field("m", &self.m)
            .field("damping", &self.damping)
            .field("kappa", &self.kappa)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("c", &self.c)
            .field("a1", &self.a1)
            .field("a2", &self.a2)
            .field("b1", &self.b1)
            .field("t_end", &self.t_end)
            .finish()
    }
}

impl ModelParams {
    pub fn with_forcing(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.forcing = Arc::new(f);
        self
    }
}

/// Instantiates catalog model `name`.
pub fn build_model(name: &str, p: &ModelParams) -> Result<MultiTermFDE> {
    let spec = lookup(name)?;
    let alpha = p.alpha.unwrap_or(spec.classical_alpha);
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FracError::InvalidArgument(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let f = p.forcing.clone();
    let negated: ScalarFn = Arc::new(move |t| -f(t));
    match name {
        "friction" => MultiTermFDE::with_forcing_fn(
            &[(p.m, 4.0 * alpha), (p.damping, 2.0 * alpha)],
            p.kappa,
            p.forcing.clone(),
            p.t_end,
        ),
        "phillips" => MultiTermFDE::with_forcing_fn(&[(1.0, 4.0 * alpha), (p.a1, 2.0 * alpha)], p.b1, negated, p.t_end),
        "business-cycle" => MultiTermFDE::with_forcing_fn(
            &[(1.0, 6.0 * alpha), (p.a2, 4.0 * alpha), (p.a1, 2.0 * alpha)],
            p.b1,
            negated,
            p.t_end,
        ),
        "bagley-torvik" => MultiTermFDE::with_forcing_fn(
            &[(p.a, 8.0 * alpha), (p.b, 6.0 * alpha)],
            p.c,
            p.forcing.clone(),
            p.t_end,
        ),
        _ => unreachable!("lookup succeeded"),
    }
}

/// The Phillips model as `D^(2α) x = −a1 D^α x − b1 x − f(t)` with initial
/// data, for [`super::solve_fode2`].
pub fn phillips_fode2(alpha: f64, p: &ModelParams, x0: f64, v0: f64) -> Result<FODE2> {
    let (a1, b1) = (p.a1, p.b1);
    let f = p.forcing.clone();
    FODE2::new(alpha, move |t, x, v| -a1 * v - b1 * x - f(t), x0, v0, p.t_end)
}
