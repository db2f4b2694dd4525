//! Grünwald–Letnikov fractional derivatives of uniformly sampled paths.
//!
//! The left derivative of order `μ` at node `j` is
//!
//! ```text
//! D^μ x(t_j) ≈ h^(-μ) Σ_{k=0..j} w_k g(t_{j-k}),   g = x - P,
//! ```
//!
//! where `w_k = (-1)^k binom(μ, k)` and `P` is the degree `m-1` Taylor
//! polynomial of `x` at the base node (`m = ⌈μ⌉`), recovered from forward
//! differences over the first `m + 2` samples. For `0 < μ <= 1` the
//! polynomial is the constant `x(t0)`, which makes constants map to an exact
//! zero. The right derivative mirrors the construction from the terminal node.
//!
//! The value at the base node (node 0 for the left side, the last node for the
//! right side) is not computed from the singular limit: it is copied from the
//! adjacent node. Downstream quadratures and error norms skip it.

use crate::error::{FracError, Result};
use crate::specfun::gen_binomial;

/// A real function sampled on the uniform grid `t_j = t0 + j h`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    t0: f64,
    h: f64,
    values: Vec<f64>,
}

impl SampledPath {
    pub fn new(t0: f64, h: f64, values: Vec<f64>) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() || !t0.is_finite() {
            return Err(FracError::InvalidArgument(format!(
                "grid needs finite t0 and h > 0 (t0 = {t0}, h = {h})"
            )));
        }
        if values.len() < 2 {
            return Err(FracError::GridTooShort {
                needed: 2,
                got: values.len(),
            });
        }
        Ok(Self { t0, h, values })
    }

    /// Samples `f` on `n_pts` equally spaced nodes spanning `[t0, t1]`.
    pub fn from_fn(t0: f64, t1: f64, n_pts: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n_pts < 2 {
            return Err(FracError::GridTooShort { needed: 2, got: n_pts });
        }
        if !(t1 > t0) {
            return Err(FracError::InvalidArgument(format!(
                "interval end {t1} must exceed start {t0}"
            )));
        }
        let h = (t1 - t0) / (n_pts - 1) as f64;
        let values = (0..n_pts).map(|j| f(t0 + j as f64 * h)).collect();
        Self::new(t0, h, values)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, j: usize) -> f64 {
        self.t0 + j as f64 * self.h
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.len() - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |j| self.time(j))
    }

    /// Same `t0`, `h` and node count (up to a relative `1e-12` on the reals).
    pub fn same_grid(&self, other: &SampledPath) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
        self.len() == other.len() && close(self.t0, other.t0) && close(self.h, other.h)
    }

    /// A path on the same grid with new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.len() {
            return Err(FracError::Mismatch(format!(
                "expected {} values, got {}",
                self.len(),
                values.len()
            )));
        }
        Ok(Self {
            t0: self.t0,
            h: self.h,
            values,
        })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            t0: self.t0,
            h: self.h,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// `c1 * self + c2 * other`.
    pub fn combine(&self, c1: f64, other: &SampledPath, c2: f64) -> Result<Self> {
        self.ensure_same_grid(other)?;
        Ok(Self {
            t0: self.t0,
            h: self.h,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| c1 * a + c2 * b)
                .collect(),
        })
    }

    pub(crate) fn ensure_same_grid(&self, other: &SampledPath) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(FracError::Mismatch("paths do not share a grid".into()))
        }
    }

    fn reversed(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Self {
            t0: self.t0,
            h: self.h,
            values,
        }
    }
}

/// A positive derivative order `μ` together with `m = ⌈μ⌉`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    mu: f64,
    m: usize,
}

impl FracOrder {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(FracError::InvalidArgument(format!(
                "derivative order must be positive, got {mu}"
            )));
        }
        Ok(Self {
            mu,
            m: mu.ceil() as usize,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub(crate) fn is_integer(&self) -> bool {
        self.mu == self.m as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// The first `count` Grünwald–Letnikov weights of order `μ`.
///
/// `w_0 = 1` and `w_k = w_{k-1} (1 - (μ+1)/k)`, i.e. `(-1)^k binom(μ, k)`.
pub fn gl_weights(order: FracOrder, count: usize) -> Vec<f64> {
    gl_weights_real(order.mu, count)
}

/// Weight recurrence for any real order; negative orders give the
/// Grünwald fractional integral.
pub(crate) fn gl_weights_real(mu: f64, count: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(count);
    if count == 0 {
        return w;
    }
    w.push(1.0);
    for k in 1..count {
        let prev = w[k - 1];
        w.push(prev * (1.0 - (mu + 1.0) / k as f64));
    }
    w
}

/// Monomial coefficients (in `s = (t - t0)/h`) of the degree `m - 1` part of
/// the polynomial interpolating the first `m + 2` samples, written in Newton
/// form so that constant data gives exactly zero higher coefficients.
fn base_polynomial(values: &[f64], m: usize) -> Vec<f64> {
    if m <= 1 {
        return vec![values[0]];
    }
    let q = m + 2;
    // forward differences Δ^j x_0
    let mut diffs = values[..q].to_vec();
    let mut delta0 = Vec::with_capacity(q);
    for j in 0..q {
        delta0.push(diffs[0]);
        for i in 0..(q - j - 1) {
            diffs[i] = diffs[i + 1] - diffs[i];
        }
    }
    let mut coeffs = vec![0.0; m];
    // falling-factorial basis C(s, j) = s (s-1) ... (s-j+1) / j!
    let mut basis = vec![1.0];
    for (j, d) in delta0.iter().enumerate() {
        if j > 0 {
            let shift = (j - 1) as f64;
            let mut next = vec![0.0; basis.len() + 1];
            for (p, b) in basis.iter().enumerate() {
                next[p + 1] += b;
                next[p] -= shift * b;
            }
            for v in next.iter_mut() {
                *v /= j as f64;
            }
            basis = next;
        }
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c += d * b;
        }
    }
    coeffs
}

fn regularized(values: &[f64], order: FracOrder) -> Vec<f64> {
    let poly = base_polynomial(values, order.m);
    values
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            let s = j as f64;
            let p = poly.iter().rev().fold(0.0, |acc, c| acc * s + c);
            v - p
        })
        .collect()
}

fn check_len(n: usize, order: FracOrder) -> Result<()> {
    let needed = order.m + 2;
    if n < needed {
        return Err(FracError::GridTooShort { needed, got: n });
    }
    Ok(())
}

fn gl_convolve(g: &[f64], weights: &[f64], scale: f64, j: usize) -> f64 {
    let kmax = j.min(weights.len() - 1);
    let mut acc = 0.0;
    for k in 0..=kmax {
        acc += weights[k] * g[j - k];
    }
    acc * scale
}

fn weight_count(order: FracOrder, n: usize) -> usize {
    if order.is_integer() {
        (order.m + 1).min(n)
    } else {
        n
    }
}

fn left_deriv_values(values: &[f64], h: f64, order: FracOrder) -> Vec<f64> {
    let n = values.len();
    let g = regularized(values, order);
    let w = gl_weights(order, weight_count(order, n));
    let scale = h.powf(-order.mu);
    let mut out: Vec<f64> = (0..n).map(|j| gl_convolve(&g, &w, scale, j)).collect();
    out[0] = out[1];
    out
}

/// Left or right fractional derivative of `path` on its own grid.
///
/// Needs at least `⌈μ⌉ + 2` samples. The base node carries the value of its
/// neighbour (see the module notes).
pub fn frac_deriv(path: &SampledPath, order: FracOrder, side: Side) -> Result<SampledPath> {
    check_len(path.len(), order)?;
    match side {
        Side::Left => path.with_values(left_deriv_values(&path.values, path.h, order)),
        Side::Right => {
            let rev = path.reversed();
            let mut vals = left_deriv_values(&rev.values, rev.h, order);
            vals.reverse();
            path.with_values(vals)
        }
    }
}

/// Left derivative at a single node, same conventions as [`frac_deriv`].
pub(crate) fn frac_deriv_at(values: &[f64], h: f64, order: FracOrder, index: usize) -> Result<f64> {
    check_len(values.len(), order)?;
    let j = index.max(1);
    let g = regularized(&values[..=j.max(order.m + 1)], order);
    let w = gl_weights(order, weight_count(order, j + 1));
    Ok(gl_convolve(&g, &w, h.powf(-order.mu), j))
}

/// Left Grünwald fractional integral of order `ν` (no regularisation).
pub fn frac_integral(path: &SampledPath, order: FracOrder) -> SampledPath {
    let n = path.len();
    let w = gl_weights_real(-order.mu, n);
    let scale = path.h.powf(order.mu);
    let values = (0..n).map(|j| gl_convolve(&path.values, &w, scale, j)).collect();
    SampledPath {
        t0: path.t0,
        h: path.h,
        values,
    }
}

fn frac_integral_at(values: &[f64], h: f64, nu: f64, index: usize) -> f64 {
    let w = gl_weights_real(-nu, index + 1);
    gl_convolve(values, &w, h.powf(nu), index)
}

/// Composite trapezoid rule over all nodes.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = values[1..n - 1].iter().sum();
            h * (inner + 0.5 * (values[0] + values[n - 1]))
        }
    }
}

/// k-th derivative by a second-order central difference at `index`.
fn central_difference(values: &[f64], h: f64, k: usize, index: usize) -> Result<f64> {
    if k == 0 {
        return Ok(values[index]);
    }
    let n = values.len();
    let reach = k.div_ceil(2);
    if index < reach || index + reach >= n {
        return Err(FracError::GridTooShort {
            needed: 2 * reach + 1,
            got: index.min(n - 1 - index) * 2 + 1,
        });
    }
    let forward = |start: usize| -> f64 {
        (0..=k)
            .map(|i| {
                let sign = if (k - i).is_multiple_of(2) { 1.0 } else { -1.0 };
                sign * gen_binomial(k as f64, i) * values[start + i]
            })
            .sum()
    };
    let raw = if k.is_multiple_of(2) {
        forward(index - k / 2)
    } else {
        let half = (k - 1) / 2;
        0.5 * (forward(index - half) + forward(index - half - 1))
    };
    Ok(raw / h.powi(k as i32))
}

/// Truncated fractional Leibniz series for `D^α (f1 f2)` at one node:
///
/// ```text
/// Σ_{k<terms} binom(α, k) · D^(α-k) f1 · f2^(k)
/// ```
///
/// The `k = 0` factor is [`frac_deriv`]; for `k >= 1` the factor
/// `D^(α-k)` is the Grünwald fractional integral of order `k - α`. The
/// integer derivatives of `f2` are central differences.
pub fn leibniz_series(
    f1: &SampledPath,
    f2: &SampledPath,
    order: FracOrder,
    at_index: usize,
    terms: usize,
) -> Result<f64> {
    f1.ensure_same_grid(f2)?;
    let alpha = order.mu;
    if alpha >= 1.0 {
        return Err(FracError::InvalidArgument(format!(
            "Leibniz series needs an order below 1, got {alpha}"
        )));
    }
    if terms == 0 {
        return Err(FracError::InvalidArgument("terms must be >= 1".into()));
    }
    if at_index == 0 || at_index >= f1.len() - 1 {
        return Err(FracError::InvalidArgument(format!("node {at_index} is not interior")));
    }
    if terms > at_index {
        return Err(FracError::InvalidArgument(format!(
            "{terms} terms exceed the history available at node {at_index}"
        )));
    }
    let h = f1.h;
    let mut total = 0.0;
    for k in 0..terms {
        let binom = gen_binomial(alpha, k);
        let deriv_f2 = central_difference(&f2.values, h, k, at_index)?;
        let frac_f1 = if k == 0 {
            frac_deriv_at(&f1.values, h, order, at_index)?
        } else {
            frac_integral_at(&f1.values, h, k as f64 - alpha, at_index)
        };
        total += binom * frac_f1 * deriv_f2;
    }
    Ok(total)
}

/// Outcome of [`ibp_residual`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IbpReport {
    pub residual: f64,
    /// Set when an endpoint sample of either path exceeds `1e-8` in
    /// magnitude, i.e. the compact-support assumption is violated.
    pub endpoint_warning: bool,
}

/// Integration-by-parts defect
/// `∫ f1 · (D_left^α f2) dt − ∫ f2 · (D_right^α f1) dt` by the trapezoid rule.
///
/// With the right derivative oriented as `-d/dt` in the `α → 1` limit, the
/// two integrals coincide for paths vanishing at both ends.
pub fn ibp_residual(f1: &SampledPath, f2: &SampledPath, order: FracOrder) -> Result<IbpReport> {
    f1.ensure_same_grid(f2)?;
    if order.mu >= 1.0 {
        return Err(FracError::InvalidArgument(format!(
            "integration by parts check needs an order below 1, got {}",
            order.mu
        )));
    }
    let left_f2 = frac_deriv(f2, order, Side::Left)?;
    let right_f1 = frac_deriv(f1, order, Side::Right)?;
    let a: Vec<f64> = f1.values.iter().zip(&left_f2.values).map(|(x, y)| x * y).collect();
    let b: Vec<f64> = f2.values.iter().zip(&right_f1.values).map(|(x, y)| x * y).collect();
    let residual = trapezoid(&a, f1.h) - trapezoid(&b, f1.h);
    let n = f1.len();
    let endpoint_warning = [f1.values[0], f1.values[n - 1], f2.values[0], f2.values[n - 1]]
        .iter()
        .any(|v| v.abs() > 1e-8);
    Ok(IbpReport {
        residual,
        endpoint_warning,
    })
}
