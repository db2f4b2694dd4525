//! Time stepping for fractional differential equations on `[0, T]`.
//!
//! [`solve_multiterm`] handles linear equations
//! `Σ c_r D^(μ_r) x + c_0 x = f(t)` with zero initial state by implicit
//! Grünwald–Letnikov stepping. [`solve_fode2`] handles
//! `D^(2α) x = F(t, x, D^α x)` by splitting it into the order-`α` pair
//! `D^α x = v`, `D^α v = F` and stepping both explicitly.

pub mod models;

use std::sync::Arc;

use crate::error::{FracError, Result};
use crate::fracops::{frac_deriv, gl_weights_real, FracOrder, SampledPath, Side};
use crate::varcalc::ScalarFn;

pub use models::{build_model, model_catalog, phillips_fode2, ModelParams, ModelSpec};

pub type Rhs = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Smallest number of steps accepted by the solvers.
pub const MIN_STEPS: usize = 8;
/// `|x|` beyond which [`solve_fode2`] gives up.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdeTerm {
    pub coeff: f64,
    pub order: FracOrder,
}

/// `Σ c_r D^(μ_r) x + c_0 x = f(t)` on `[0, T]`, zero initial state.
#[derive(Clone)]
pub struct MultiTermFDE {
    terms: Vec<FdeTerm>,
    c0: f64,
    forcing: ScalarFn,
    t_end: f64,
}

impl std::fmt::Debug for MultiTermFDE {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MultiTermFDE")
            .field("terms", &self.terms)
            .field("c0", &self.c0)
            .field("t_end", &self.t_end)
            .finish()
    }
}

impl MultiTermFDE {
    /// `terms` are `(coefficient, order)` pairs in any order; they are
    /// sorted by decreasing order.
    pub fn new(
        terms: &[(f64, f64)],
        c0: f64,
        forcing: impl Fn(f64) -> f64 + Send + Sync + 'static,
        t_end: f64,
    ) -> Result<Self> {
        Self::with_forcing_fn(terms, c0, Arc::new(forcing), t_end)
    }

    pub fn with_forcing_fn(terms: &[(f64, f64)], c0: f64, forcing: ScalarFn, t_end: f64) -> Result<Self> {
        let mut sorted = terms
            .iter()
            .map(|&(coeff, mu)| {
                if !coeff.is_finite() {
                    return Err(FracError::InvalidArgument(format!("non-finite coefficient {coeff}")));
                }
                Ok(FdeTerm {
                    coeff,
                    order: FracOrder::new(mu)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        sorted.sort_by(|a, b| b.order.mu().total_cmp(&a.order.mu()));
        if sorted.is_empty() {
            return Err(FracError::InvalidArgument("need at least one derivative term".into()));
        }
        if sorted.windows(2).any(|w| w[0].order.mu() == w[1].order.mu()) {
            return Err(FracError::InvalidArgument("derivative orders must be distinct".into()));
        }
        if sorted[0].coeff == 0.0 {
            return Err(FracError::InvalidArgument("leading coefficient must be nonzero".into()));
        }
        if !c0.is_finite() {
            return Err(FracError::InvalidArgument(format!("non-finite coefficient {c0}")));
        }
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(FracError::InvalidArgument(format!(
                "interval end must be positive, got {t_end}"
            )));
        }
        Ok(Self {
            terms: sorted,
            c0,
            forcing,
            t_end,
        })
    }

    pub fn terms(&self) -> &[FdeTerm] {
        &self.terms
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn max_order(&self) -> f64 {
        self.terms[0].order.mu()
    }

    pub fn forcing(&self, t: f64) -> f64 {
        (self.forcing)(t)
    }

    /// Same equation with another forcing.
    pub fn with_forcing(&self, forcing: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            forcing: Arc::new(forcing),
            ..self.clone()
        }
    }

    /// Same equation on `[0, t_end]`.
    pub fn with_t_end(&self, t_end: f64) -> Result<Self> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(FracError::InvalidArgument(format!(
                "interval end must be positive, got {t_end}"
            )));
        }
        Ok(Self { t_end, ..self.clone() })
    }

    /// Nodes skipped at the start of error norms.
    pub fn startup_nodes(&self) -> usize {
        self.max_order().ceil() as usize + 1
    }
}

/// `D^(2α) x = F(t, x, v)` with `v = D^α x`, `x(0) = x0`, `v(0) = v0`.
#[derive(Clone)]
pub struct FODE2 {
    pub alpha: f64,
    pub rhs: Rhs,
    pub x0: f64,
    pub v0: f64,
    pub t_end: f64,
}

impl std::fmt::Debug for FODE2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FODE2")
            .field("alpha", &self.alpha)
            .field("x0", &self.x0)
            .field("v0", &self.v0)
            .field("t_end", &self.t_end)
            .finish()
    }
}

impl FODE2 {
    pub fn new(
        alpha: f64,
        rhs: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        x0: f64,
        v0: f64,
        t_end: f64,
    ) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(FracError::InvalidArgument(format!(
                "alpha must lie in (0, 1), got {alpha}"
            )));
        }
        if !(x0.is_finite() && v0.is_finite()) {
            return Err(FracError::InvalidArgument("initial values must be finite".into()));
        }
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(FracError::InvalidArgument(format!(
                "interval end must be positive, got {t_end}"
            )));
        }
        Ok(Self {
            alpha,
            rhs: Arc::new(rhs),
            x0,
            v0,
            t_end,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: SampledPath,
    /// Largest defect of the discrete equations at the computed solution.
    pub max_defect: f64,
    pub steps: usize,
}

fn step_count(t_end: f64, h: f64) -> Result<(usize, f64)> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(FracError::InvalidArgument(format!("step must be positive, got {h}")));
    }
    let n = (t_end / h).round();
    if n < MIN_STEPS as f64 {
        return Err(FracError::GridTooShort {
            needed: MIN_STEPS + 1,
            got: n as usize + 1,
        });
    }
    let n = n as usize;
    Ok((n, t_end / n as f64))
}

/// Implicit GL stepping. The step is adjusted to `T / round(T / h)`.
pub fn solve_multiterm(fde: &MultiTermFDE, h: f64) -> Result<SolveReport> {
    let (n, h) = step_count(fde.t_end, h)?;
    let scaled: Vec<(f64, Vec<f64>)> = fde
        .terms
        .iter()
        .map(|term| {
            let mu = term.order.mu();
            (term.coeff * h.powf(-mu), gl_weights_real(mu, n + 1))
        })
        .collect();
    let diag: f64 = scaled.iter().map(|(c, w)| c * w[0]).sum::<f64>() + fde.c0;
    if diag == 0.0 || !diag.is_finite() {
        return Err(FracError::DegenerateStep);
    }
    let history = |x: &[f64], j: usize| -> f64 {
        scaled
            .iter()
            .map(|(c, w)| {
                let kmax = j.min(w.len() - 1);
                c * (1..=kmax).map(|k| w[k] * x[j - k]).sum::<f64>()
            })
            .sum()
    };
    let mut x = vec![0.0; n + 1];
    for j in 1..=n {
        let t = j as f64 * h;
        x[j] = (fde.forcing(t) - history(&x, j)) / diag;
        if !x[j].is_finite() {
            return Err(FracError::Divergence { node: j, value: x[j] });
        }
    }
    let mut max_defect: f64 = 0.0;
    for j in 1..=n {
        let t = j as f64 * h;
        let lhs = diag * x[j] + history(&x, j);
        max_defect = max_defect.max((lhs - fde.forcing(t)).abs());
    }
    Ok(SolveReport {
        solution: SampledPath::new(0.0, h, x)?,
        max_defect,
        steps: n,
    })
}

/// Explicit GL stepping of `D^α x = v`, `D^α v = F(t, x, v)`. The new `v`
/// uses `F` at the previous node and the new `x` uses the new `v`. Initial
/// values enter through the base subtraction `x − x0`, `v − v0`.
///
/// `F` should be Lipschitz on the range of the solution; this is not checked
/// beyond the divergence guard.
pub fn solve_fode2(f: &FODE2, h: f64) -> Result<SolveReport> {
    let (n, h) = step_count(f.t_end, h)?;
    let ha = h.powf(f.alpha);
    let w = gl_weights_real(f.alpha, n + 1);
    let mut x = vec![f.x0; n + 1];
    let mut v = vec![f.v0; n + 1];
    let lag = |u: &[f64], u0: f64, j: usize| -> f64 { (1..=j).map(|k| w[k] * (u[j - k] - u0)).sum() };
    for j in 1..=n {
        let t_prev = (j - 1) as f64 * h;
        let rhs = (f.rhs)(t_prev, x[j - 1], v[j - 1]);
        v[j] = f.v0 + ha * rhs - lag(&v, f.v0, j);
        x[j] = f.x0 + ha * v[j] - lag(&x, f.x0, j);
        if !(x[j].abs() <= DIVERGENCE_LIMIT) {
            return Err(FracError::Divergence { node: j, value: x[j] });
        }
    }
    // defect of the implicit form D^α v = F(t_j, x_j, v_j)
    let mut max_defect: f64 = 0.0;
    for j in 1..=n {
        let t = j as f64 * h;
        let dv = ((v[j] - f.v0) + lag(&v, f.v0, j)) / ha;
        max_defect = max_defect.max((dv - (f.rhs)(t, x[j], v[j])).abs());
    }
    Ok(SolveReport {
        solution: SampledPath::new(0.0, h, x)?,
        max_defect,
        steps: n,
    })
}

/// `Σ c_r D^(μ_r) x + c_0 x − f` along `path`, set to zero on the first
/// [`MultiTermFDE::startup_nodes`] nodes.
pub fn fde_residual(fde: &MultiTermFDE, path: &SampledPath) -> Result<SampledPath> {
    let tol = 1e-9 * fde.t_end;
    if path.t0().abs() > tol || (path.t_end() - fde.t_end).abs() > tol {
        return Err(FracError::Mismatch(format!(
            "path covers [{}, {}], equation lives on [0, {}]",
            path.t0(),
            path.t_end(),
            fde.t_end
        )));
    }
    let mut out: Vec<f64> = path
        .values()
        .iter()
        .enumerate()
        .map(|(j, &x)| fde.c0 * x - fde.forcing(path.time(j)))
        .collect();
    for term in &fde.terms {
        let d = frac_deriv(path, term.order, Side::Left)?;
        for (o, v) in out.iter_mut().zip(d.values()) {
            *o += term.coeff * v;
        }
    }
    let skip = fde.startup_nodes().min(out.len());
    out[..skip].fill(0.0);
    path.with_values(out)
}
