//! Built-in Lagrangians whose Euler–Lagrange equations reproduce known
//! fractional differential equations.
//!
//! Every entry comes in two coefficient sets. `Normalized` weights the
//! level-`a` kinetic term by `Γ(1 + αa)`, which is what makes
//! `(-1)^a D^(αa)[∂L/∂y^(αa)]` collapse to a plain `D^(2αa) x` under the
//! jet normalization `y^(αa) = D^(αa) x / Γ(1 + αa)`. `Paper` reproduces the
//! originally published weights `Γ(1 + 2αa)` verbatim; their residuals carry
//! a spurious `Γ(1 + 2αa) / Γ(1 + αa)` factor per level.

use std::sync::Arc;

use crate::error::{FracError, Result};
use crate::jet::JetPoint;
use crate::specfun::gamma;

use super::{JetGradient, Lagrangian, PotentialFn, SampleDomain, ScalarFn};

pub const CATALOG_NAMES: [&str; 5] = [
    "bagley-torvik",
    "order1-potential",
    "order2-potential",
    "order3-potential",
    "power-law-example",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CoefficientSet {
    #[default]
    Normalized,
    Paper,
}

/// A potential `U(t, x)` together with `∂U/∂x`.
#[derive(Clone)]
pub struct Potential {
    pub value: PotentialFn,
    pub gradient: PotentialFn,
}

impl Potential {
    pub fn new(
        value: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            value: Arc::new(value),
            gradient: Arc::new(gradient),
        }
    }

    /// `U = q x² / 2`.
    pub fn quadratic(q: f64) -> Self {
        Self::new(move |_, x| 0.5 * q * x * x, move |_, x| q * x)
    }
}

impl std::fmt::Debug for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Potential")
    }
}

/// Coefficients shared by the catalog. Each entry reads only the ones it
/// needs; `alpha = None` picks the entry's default order.
#[derive(Clone)]
pub struct CatalogParams {
    pub alpha: Option<f64>,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub a1: f64,
    pub a2: f64,
    pub gamma: f64,
    pub forcing: ScalarFn,
    pub potential: Potential,
    pub coefficients: CoefficientSet,
}

impl Default for CatalogParams {
    fn default() -> Self {
        Self {
            alpha: None,
            a: 1.0,
            b: 1.0,
            c: 1.0,
            a1: 1.0,
            a2: 1.0,
            gamma: 2.0,
            forcing: Arc::new(|_| 0.0),
            potential: Potential::quadratic(1.0),
            coefficients: CoefficientSet::Normalized,
        }
    }
}

impl std::fmt::Debug for CatalogParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogParams")
            .field("alpha", &self.alpha)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("c", &self.c)
            .field("a1", &self.a1)
            .field("a2", &self.a2)
            .field("gamma", &self.gamma)
            .field("coefficients", &self.coefficients)
            .finish()
    }
}

impl CatalogParams {
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_forcing(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.forcing = Arc::new(f);
        self
    }

    pub fn with_potential(mut self, p: Potential) -> Self {
        self.potential = p;
        self
    }

    pub fn with_coefficients(mut self, set: CoefficientSet) -> Self {
        self.coefficients = set;
        self
    }
}

/// Default order `α` of a catalog entry.
pub fn default_alpha(name: &str) -> Result<f64> {
    match name {
        "bagley-torvik" => Ok(0.25),
        "order1-potential" | "order2-potential" | "order3-potential" | "power-law-example" => Ok(0.5),
        other => Err(FracError::UnknownName(other.to_string())),
    }
}

/// One-line description of the equation an entry reproduces.
pub fn describe(name: &str) -> Result<&'static str> {
    match name {
        "bagley-torvik" => Ok("a D^(8α)x + b D^(6α)x + c x - f(t) = 0 (Bagley-Torvik for α = 1/4), k = 4"),
        "order1-potential" => Ok("D^(2α)x + ∂U/∂x = 0, k = 1"),
        "order2-potential" => Ok("D^(4α)x + a1 D^(2α)x + ∂U/∂x = 0, k = 2"),
        "order3-potential" => Ok("D^(6α)x + a2 D^(4α)x + a1 D^(2α)x + ∂U/∂x = 0, k = 3"),
        "power-law-example" => Ok("c Γ(1+γ)/Γ(1+γ-α) f(t) x^(γ-α) + a1 D^(2α)x + a2 D^(3α)x = 0, k = 3"),
        other => Err(FracError::UnknownName(other.to_string())),
    }
}

/// Builds catalog entry `name`.
pub fn builtin(name: &str, params: &CatalogParams) -> Result<Lagrangian> {
    let alpha = match params.alpha {
        Some(a) => a,
        None => default_alpha(name)?,
    };
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FracError::InvalidArgument(format!(
            "catalog order alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let paper = params.coefficients == CoefficientSet::Paper;
    // weight of the level-a kinetic term
    let weight = |a: usize| {
        let mu = if paper {
            2.0 * alpha * a as f64
        } else {
            alpha * a as f64
        };
        gamma(1.0 + mu)
    };
    match name {
        "bagley-torvik" => {
            let (a, b, c) = (params.a, params.b, params.c);
            let (g3, g4) = (weight(3)?, weight(4)?);
            let f = params.forcing.clone();
            let fg = params.forcing.clone();
            Lagrangian::new(1, 4, alpha, move |p: &JetPoint| {
                let x = p.x[0];
                0.5 * c * x * x - f(p.t) * x - 0.5 * b * g3 * p.y[2][0].powi(2) + 0.5 * a * g4 * p.y[3][0].powi(2)
            })?
            .with_partials(
                move |p: &JetPoint| {
                    JetGradient::scalar(
                        c * p.x[0] - fg(p.t),
                        &[0.0, 0.0, -b * g3 * p.y[2][0], a * g4 * p.y[3][0]],
                    )
                },
                SampleDomain::default(),
            )
        }
        "order1-potential" | "order2-potential" | "order3-potential" => {
            let k = (name.as_bytes()[5] - b'0') as usize;
            // signed coefficient of (y^(αa))² / 2 before the Γ weight
            let coeffs: Vec<f64> = match k {
                1 => vec![-1.0],
                2 => vec![-params.a1, 1.0],
                _ => vec![-params.a1, params.a2, -1.0],
            };
            let weights = (1..=k)
                .map(|a| weight(a).map(|g| g * coeffs[a - 1]))
                .collect::<Result<Vec<_>>>()?;
            let u = params.potential.value.clone();
            let du = params.potential.gradient.clone();
            let w = weights.clone();
            Lagrangian::new(1, k, alpha, move |p: &JetPoint| {
                u(p.t, p.x[0]) + w.iter().zip(&p.y).map(|(w, y)| 0.5 * w * y[0] * y[0]).sum::<f64>()
            })?
            .with_partials(
                move |p: &JetPoint| {
                    let dy: Vec<f64> = weights.iter().zip(&p.y).map(|(w, y)| w * y[0]).collect();
                    JetGradient::scalar(du(p.t, p.x[0]), &dy)
                },
                SampleDomain::default(),
            )
        }
        "power-law-example" => {
            if paper {
                power_law_paper_classical(alpha, params)
            } else {
                power_law_normalized(alpha, params)
            }
        }
        other => Err(FracError::UnknownName(other.to_string())),
    }
}

fn positive_domain() -> SampleDomain {
    SampleDomain {
        x: (0.2, 2.0),
        ..SampleDomain::default()
    }
}

/// `c′ f(t) x^p / p − (a1/2) Γ(1+α) (y^(α))² + κ x y^(3α)` with
/// `p = 1 + γ − α`, `c′ = c Γ(1+γ)/Γ(1+γ−α)` and
/// `κ = a2 Γ(1+3α) / (1 − Γ(1+3α))`. The coupling `κ x y^(3α)` contributes
/// `κ (y^(3α) − D^(3α) x)` to the residual, which equals `a2 D^(3α) x`.
fn power_law_normalized(alpha: f64, params: &CatalogParams) -> Result<Lagrangian> {
    let (a1, a2, c, g) = (params.a1, params.a2, params.c, params.gamma);
    let p = 1.0 + g - alpha;
    if !(p > 0.0) {
        return Err(FracError::InvalidArgument(format!(
            "power-law example needs gamma > alpha - 1, got gamma = {g}"
        )));
    }
    let c_prime = c * gamma(1.0 + g)? / gamma(1.0 + g - alpha)?;
    let g1 = gamma(1.0 + alpha)?;
    let g3 = gamma(1.0 + 3.0 * alpha)?;
    if (1.0 - g3).abs() < 1e-12 {
        return Err(FracError::InvalidArgument(
            "power-law example is degenerate at alpha = 1/3".into(),
        ));
    }
    let kappa = a2 * g3 / (1.0 - g3);
    let f = params.forcing.clone();
    let fg = params.forcing.clone();
    Lagrangian::new(1, 3, alpha, move |pt: &JetPoint| {
        let x = pt.x[0];
        c_prime * f(pt.t) * x.powf(p) / p - 0.5 * a1 * g1 * pt.y[0][0].powi(2) + kappa * x * pt.y[2][0]
    })?
    .with_partials(
        move |pt: &JetPoint| {
            let x = pt.x[0];
            JetGradient::scalar(
                c_prime * fg(pt.t) * x.powf(p - 1.0) + kappa * pt.y[2][0],
                &[-a1 * g1 * pt.y[0][0], 0.0, kappa * x],
            )
        },
        positive_domain(),
    )
}

/// Published classical-variant form, verbatim (including the exponent on
/// `Γ(1+γ−α)`), on `k = 2`.
fn power_law_paper_classical(alpha: f64, params: &CatalogParams) -> Result<Lagrangian> {
    let (a1, a2, c, g) = (params.a1, params.a2, params.c, params.gamma);
    let p = 1.0 + g - alpha;
    let lead = c * gamma(1.0 + g)? / gamma(1.0 + g - alpha)?.powf(p);
    let g2 = gamma(1.0 + 2.0 * alpha)?;
    let g3 = gamma(1.0 + 3.0 * alpha)?;
    let f = params.forcing.clone();
    let fg = params.forcing.clone();
    Lagrangian::new(1, 2, alpha, move |pt: &JetPoint| {
        lead * pt.x[0].powf(p) * f(pt.t) - 0.5 * a1 * g2 * pt.y[0][0].powi(2) + 0.5 * a2 * g3 * pt.y[1][0].powi(2)
    })?
    .with_partials(
        move |pt: &JetPoint| {
            JetGradient::scalar(
                lead * p * pt.x[0].powf(p - 1.0) * fg(pt.t),
                &[-a1 * g2 * pt.y[0][0], a2 * g3 * pt.y[1][0]],
            )
        },
        positive_domain(),
    )
}

/// Published fractional-variant form of the power-law example, verbatim:
/// `c/(1+γ−α) x^γ − a1 Γ(1+2α) (y^(α))^α + a2 Γ(1+3α) (y^(2α))^α`.
/// Real-valued only for non-negative jet coordinates; no analytic partials.
pub fn power_law_paper_fractional(params: &CatalogParams) -> Result<Lagrangian> {
    let alpha = params.alpha.unwrap_or(0.5);
    let (a1, a2, c, g) = (params.a1, params.a2, params.c, params.gamma);
    let lead = c / (1.0 + g - alpha);
    let g2 = gamma(1.0 + 2.0 * alpha)?;
    let g3 = gamma(1.0 + 3.0 * alpha)?;
    Lagrangian::new(1, 2, alpha, move |pt: &JetPoint| {
        lead * pt.x[0].powf(g) - a1 * g2 * pt.y[0][0].powf(alpha) + a2 * g3 * pt.y[1][0].powf(alpha)
    })
}
