//! Lagrangians on fractional jet coordinates.
//!
//! Euler–Lagrange residuals follow the alternating form
//!
//! ```text
//! R_i(t) = P_i(t) + Σ_{a=1..k} (-1)^a D_t^(αa)[ p_{i,a} ](t)
//! ```
//!
//! where `P_i` is the partial of `L` in `x^i` and `p_{i,a}` the partial in
//! `y^(i(αa))`, both evaluated along the lifted trajectory. The time
//! derivative is applied to the sampled composite `t ↦ p_{i,a}(t)`; no
//! fractional chain rule is used. The classical variant takes ordinary
//! partials, the fractional variant takes order-`α` fractional partials along
//! each coordinate (see [`frac_partial`]).

pub mod catalog;

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{rngs::StdRng, Rng, SeedableRng};

use crate::error::{FracError, Result};
use crate::fracops::{frac_deriv, frac_deriv_at, trapezoid, FracOrder, SampledPath, Side};
use crate::jet::{Coord, JetPoint, JetTrajectory};

pub use catalog::{builtin, CatalogParams, CoefficientSet, Potential, CATALOG_NAMES};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type PotentialFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type EvalFn = Arc<dyn Fn(&JetPoint) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&JetPoint) -> JetGradient + Send + Sync>;

/// Nodes of the internal grid used by [`frac_partial`].
pub const FRAC_PARTIAL_NODES: usize = 513;
/// Smallest span of the internal grid used by [`frac_partial`].
pub const FRAC_PARTIAL_MIN_SPAN: f64 = 1e-3;
/// Determinant magnitude below which the velocity Hessian counts as singular.
pub const REGULARITY_THRESHOLD: f64 = 1e-10;

const FD_REL_STEP: f64 = 1e-6;
const FD_ABS_STEP: f64 = 1e-8;
// second differences of `eval` need a coarser step
const FD2_REL_STEP: f64 = 1e-3;
const FD2_ABS_STEP: f64 = 1e-3;
const NOISE_FACTOR: f64 = 16.0;
const VALIDATION_POINTS: usize = 100;
const VALIDATION_TOL: f64 = 1e-6;

/// Analytic gradient of a Lagrangian: `dx[i] = ∂L/∂x^i`,
/// `dy[a-1][i] = ∂L/∂y^(i(αa))`.
#[derive(Debug, Clone, PartialEq)]
pub struct JetGradient {
    pub dx: Vec<f64>,
    pub dy: Vec<Vec<f64>>,
}

impl JetGradient {
    pub fn zeros(n: usize, k: usize) -> Self {
        Self {
            dx: vec![0.0; n],
            dy: vec![vec![0.0; n]; k],
        }
    }

    /// Scalar case, `dy` given per level.
    pub fn scalar(dx: f64, dy: &[f64]) -> Self {
        Self {
            dx: vec![dx],
            dy: dy.iter().map(|&v| vec![v]).collect(),
        }
    }

    fn get(&self, coord: Coord) -> Option<f64> {
        match coord {
            Coord::Time => None,
            Coord::X(i) => Some(self.dx[i]),
            Coord::Y { level, dim } => Some(self.dy[level - 1][dim]),
        }
    }
}

/// Box from which random jet points are drawn when analytic partials are
/// checked against finite differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleDomain {
    pub t: (f64, f64),
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Default for SampleDomain {
    fn default() -> Self {
        Self {
            t: (0.0, 1.0),
            x: (-1.0, 1.0),
            y: (-1.0, 1.0),
        }
    }
}

impl SampleDomain {
    fn draw(&self, rng: &mut StdRng, n: usize, k: usize) -> JetPoint {
        let mut pick = |(lo, hi): (f64, f64)| {
            if hi > lo {
                rng.gen_range(lo..hi)
            } else {
                lo
            }
        };
        let t = pick(self.t);
        let x = (0..n).map(|_| pick(self.x)).collect();
        let y = (0..k).map(|_| (0..n).map(|_| pick(self.y)).collect()).collect();
        JetPoint { t, x, y }
    }
}

/// A scalar function on `J^(αk)(R, R^n)` with optional analytic partials and
/// per-coordinate lower terminals for fractional partials.
#[derive(Clone)]
pub struct Lagrangian {
    n: usize,
    k: usize,
    alpha: f64,
    eval: EvalFn,
    partials: Option<GradFn>,
    terminal_t: f64,
    terminal_x: Vec<f64>,
    terminal_y: Vec<Vec<f64>>,
}

impl std::fmt::Debug for Lagrangian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Lagrangian")
            .field("n", &self.n)
            .field("k", &self.k)
            .field("alpha", &self.alpha)
            .field("analytic_partials", &self.partials.is_some())
            .finish()
    }
}

impl Lagrangian {
    pub fn new(
        n: usize,
        k: usize,
        alpha: f64,
        eval: impl Fn(&JetPoint) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(FracError::InvalidArgument(
                "a Lagrangian needs n >= 1 and k >= 1".into(),
            ));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(FracError::InvalidArgument(format!(
                "Lagrangian order alpha must lie in (0, 1], got {alpha}"
            )));
        }
        Ok(Self {
            n,
            k,
            alpha,
            eval: Arc::new(eval),
            partials: None,
            terminal_t: 0.0,
            terminal_x: vec![0.0; n],
            terminal_y: vec![vec![0.0; n]; k],
        })
    }

    /// Attaches analytic partials after checking them against central
    /// differences of `eval` at 100 reproducible random points of `domain`.
    pub fn with_partials(
        mut self,
        grad: impl Fn(&JetPoint) -> JetGradient + Send + Sync + 'static,
        domain: SampleDomain,
    ) -> Result<Self> {
        let grad: GradFn = Arc::new(grad);
        let mut rng = StdRng::seed_from_u64(0x1a67_a41d);
        for _ in 0..VALIDATION_POINTS {
            let p = domain.draw(&mut rng, self.n, self.k);
            let g = grad(&p);
            if g.dx.len() != self.n || g.dy.len() != self.k || g.dy.iter().any(|r| r.len() != self.n) {
                return Err(FracError::Mismatch("gradient shape does not match (n, k)".into()));
            }
            for coord in p.coords().into_iter().skip(1) {
                let analytic = g.get(coord).expect("spatial coordinate");
                let numeric = self.central_difference(coord, &p);
                let scale = analytic.abs().max(numeric.abs()).max(1.0);
                if !((analytic - numeric).abs() <= VALIDATION_TOL * scale) {
                    return Err(FracError::PartialsMismatch {
                        which: format!("{coord:?}"),
                        analytic,
                        numeric,
                    });
                }
            }
        }
        self.partials = Some(grad);
        Ok(self)
    }

    /// Lower terminal used by fractional partials along `coord`.
    pub fn with_terminal(mut self, coord: Coord, value: f64) -> Self {
        match coord {
            Coord::Time => self.terminal_t = value,
            Coord::X(i) => self.terminal_x[i] = value,
            Coord::Y { level, dim } => self.terminal_y[level - 1][dim] = value,
        }
        self
    }

    /// Same terminal for every jet coordinate `y`.
    pub fn with_velocity_terminals(mut self, value: f64) -> Self {
        for row in self.terminal_y.iter_mut() {
            row.fill(value);
        }
        self
    }

    pub fn terminal(&self, coord: Coord) -> f64 {
        match coord {
            Coord::Time => self.terminal_t,
            Coord::X(i) => self.terminal_x[i],
            Coord::Y { level, dim } => self.terminal_y[level - 1][dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn has_partials(&self) -> bool {
        self.partials.is_some()
    }

    pub fn eval(&self, p: &JetPoint) -> f64 {
        (self.eval)(p)
    }

    fn central_difference(&self, coord: Coord, p: &JetPoint) -> f64 {
        let v = p.get(coord);
        let step = (FD_REL_STEP * v.abs()).max(FD_ABS_STEP);
        let up = self.eval(&p.with(coord, v + step));
        let down = self.eval(&p.with(coord, v - step));
        (up - down) / (2.0 * step)
    }

    /// Ordinary partial derivative along `coord`: analytic when available,
    /// otherwise a central difference.
    pub fn classical_partial(&self, coord: Coord, p: &JetPoint) -> f64 {
        if let (Some(grad), false) = (&self.partials, coord == Coord::Time) {
            return grad(p).get(coord).expect("spatial coordinate");
        }
        self.central_difference(coord, p)
    }

    fn check_point(&self, p: &JetPoint) -> Result<()> {
        if p.dim() != self.n || p.order() != self.k {
            return Err(FracError::Mismatch(format!(
                "jet point has (n, k) = ({}, {}), Lagrangian expects ({}, {})",
                p.dim(),
                p.order(),
                self.n,
                self.k
            )));
        }
        Ok(())
    }

    /// `c · L`.
    pub fn scaled(&self, c: f64) -> Self {
        let eval = self.eval.clone();
        let partials = self.partials.clone().map(|g| -> GradFn {
            Arc::new(move |p: &JetPoint| {
                let mut out = g(p);
                out.dx.iter_mut().for_each(|v| *v *= c);
                out.dy.iter_mut().flatten().for_each(|v| *v *= c);
                out
            })
        });
        Self {
            eval: Arc::new(move |p: &JetPoint| c * eval(p)),
            partials,
            ..self.clone()
        }
    }

    /// `L + other`; both must share `(n, k, α)`. Terminals come from `self`.
    pub fn sum(&self, other: &Lagrangian) -> Result<Self> {
        if self.n != other.n || self.k != other.k || self.alpha != other.alpha {
            return Err(FracError::Mismatch("cannot add Lagrangians of different shape".into()));
        }
        let (e1, e2) = (self.eval.clone(), other.eval.clone());
        let partials = match (&self.partials, &other.partials) {
            (Some(g1), Some(g2)) => {
                let (g1, g2) = (g1.clone(), g2.clone());
                Some(Arc::new(move |p: &JetPoint| {
                    let mut a = g1(p);
                    let b = g2(p);
                    a.dx.iter_mut().zip(&b.dx).for_each(|(x, y)| *x += y);
                    a.dy.iter_mut()
                        .flatten()
                        .zip(b.dy.iter().flatten())
                        .for_each(|(x, y)| *x += y);
                    a
                }) as GradFn)
            }
            _ => None,
        };
        Ok(Self {
            eval: Arc::new(move |p: &JetPoint| e1(p) + e2(p)),
            partials,
            ..self.clone()
        })
    }
}

/// Left fractional derivative of order `alpha` of `s ↦ f(point with coord = s)`
/// from `terminal` to the current coordinate value.
fn frac_partial_of(
    f: &dyn Fn(&JetPoint) -> Result<f64>,
    coord: Coord,
    point: &JetPoint,
    alpha: f64,
    terminal: f64,
) -> Result<f64> {
    let v = point.get(coord);
    if v < terminal {
        return Err(FracError::BelowTerminal { value: v, terminal });
    }
    let order = FracOrder::new(alpha)?;
    let span = (v - terminal).max(FRAC_PARTIAL_MIN_SPAN);
    let last = FRAC_PARTIAL_NODES - 1;
    let h = span / last as f64;
    let position = (v - terminal) / h;
    let (node, frac) = if v - terminal >= FRAC_PARTIAL_MIN_SPAN {
        (last, 0.0)
    } else {
        (position.floor() as usize, position - position.floor())
    };
    let needed = (node + 2).max(order.m() + 2).min(FRAC_PARTIAL_NODES);
    let mut samples = Vec::with_capacity(needed);
    let mut probe = point.clone();
    for j in 0..needed {
        let s = if j == last {
            terminal + span
        } else {
            terminal + j as f64 * h
        };
        probe.set(coord, s);
        let value = f(&probe)?;
        if !value.is_finite() {
            return Err(FracError::InvalidArgument(format!(
                "non-finite value while sampling {coord:?} at {s}"
            )));
        }
        samples.push(value);
    }
    let at = frac_deriv_at(&samples, h, order, node)?;
    if frac == 0.0 {
        return Ok(at);
    }
    let next = frac_deriv_at(&samples, h, order, node + 1)?;
    Ok(at + frac * (next - at))
}

/// Fractional partial derivative `D^α_{coord} L` at `point`, with the
/// coordinate's lower terminal from the Lagrangian (default 0).
///
/// `L` is sampled along the coordinate on [`FRAC_PARTIAL_NODES`] nodes from
/// the terminal to the current value (span at least
/// [`FRAC_PARTIAL_MIN_SPAN`]; shorter spans interpolate inside the minimal
/// grid) and differentiated with [`crate::fracops`]. `alpha == 1` returns the
/// classical partial.
pub fn frac_partial(l: &Lagrangian, coord: Coord, point: &JetPoint, alpha: f64) -> Result<f64> {
    l.check_point(point)?;
    if !point.contains(coord) {
        return Err(FracError::InvalidArgument(format!("{coord:?} is not a coordinate")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(FracError::InvalidArgument(format!(
            "fractional partial order must lie in (0, 1], got {alpha}"
        )));
    }
    if alpha == 1.0 {
        return Ok(l.classical_partial(coord, point));
    }
    frac_partial_of(&|p| Ok(l.eval(p)), coord, point, alpha, l.terminal(coord))
}

fn check_trajectory(l: &Lagrangian, traj: &JetTrajectory) -> Result<()> {
    if (l.alpha - traj.alpha()).abs() > 1e-12 {
        return Err(FracError::Mismatch(format!(
            "trajectory alpha {} differs from Lagrangian alpha {}",
            traj.alpha(),
            l.alpha
        )));
    }
    if l.k != traj.order() || l.n != traj.dim() {
        return Err(FracError::Mismatch(format!(
            "trajectory (n, k) = ({}, {}), Lagrangian expects ({}, {})",
            traj.dim(),
            traj.order(),
            l.n,
            l.k
        )));
    }
    Ok(())
}

/// Trapezoid action of `L` along a lifted trajectory. The base node value is
/// replaced by the value at the first interior node.
pub fn action(l: &Lagrangian, traj: &JetTrajectory) -> Result<f64> {
    let values = lagrangian_along(l, traj)?;
    Ok(trapezoid(&values, traj.h()))
}

/// `L` evaluated at every node of the trajectory (base node substituted as
/// in [`action`]).
pub fn lagrangian_along(l: &Lagrangian, traj: &JetTrajectory) -> Result<Vec<f64>> {
    check_trajectory(l, traj)?;
    let mut values = Vec::with_capacity(traj.len());
    for (j, p) in traj.points().enumerate() {
        let v = l.eval(&p);
        if !v.is_finite() {
            return Err(FracError::Evaluation { node: j, t: p.t });
        }
        values.push(v);
    }
    values[0] = values[1];
    Ok(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ELVariant {
    /// Order-`α` fractional partials in `x` and `y`.
    Fractional,
    /// Ordinary partials in `x` and `y`.
    Classical,
}

/// The individual pieces of an Euler–Lagrange residual.
#[derive(Debug, Clone, PartialEq)]
pub struct ELTerms {
    /// `P_i` per dimension.
    pub position: Vec<SampledPath>,
    /// `(-1)^a D^(αa)[p_{i,a}]`, indexed `[a-1][i]`.
    pub levels: Vec<Vec<SampledPath>>,
    pub variant: ELVariant,
}

/// Residual of the Euler–Lagrange equations along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct ELResidualReport {
    pub residual: Vec<SampledPath>,
    /// Max |residual| over interior nodes (the first and last `⌈αk⌉ + 1`
    /// nodes are excluded).
    pub norm_inf: f64,
    pub variant: ELVariant,
}

/// Number of nodes skipped at each end by residual norms for a highest
/// derivative order `mu`.
pub fn boundary_skip(mu: f64) -> usize {
    mu.ceil() as usize + 1
}

fn sample_partials(l: &Lagrangian, points: &[JetPoint], coord: Coord, variant: ELVariant) -> Result<Vec<f64>> {
    points
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let v = match variant {
                ELVariant::Classical => Ok(l.classical_partial(coord, p)),
                ELVariant::Fractional => frac_partial(l, coord, p, l.alpha),
            };
            match v {
                Ok(v) if v.is_finite() => Ok(v),
                Ok(_) => Err(FracError::Evaluation { node: j, t: p.t }),
                Err(e) => Err(FracError::AtNode {
                    node: j,
                    t: p.t,
                    source: Box::new(e),
                }),
            }
        })
        .collect()
}

/// Each term of the Euler–Lagrange residual along `traj`.
pub fn el_terms(l: &Lagrangian, traj: &JetTrajectory, variant: ELVariant) -> Result<ELTerms> {
    check_trajectory(l, traj)?;
    let points: Vec<JetPoint> = traj.points().collect();
    let grid = traj.base(0);
    let mut position = Vec::with_capacity(l.n);
    for i in 0..l.n {
        position.push(grid.with_values(sample_partials(l, &points, Coord::X(i), variant)?)?);
    }
    let mut levels = Vec::with_capacity(l.k);
    for a in 1..=l.k {
        let order = FracOrder::new(l.alpha * a as f64)?;
        let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
        let mut row = Vec::with_capacity(l.n);
        for i in 0..l.n {
            let coord = Coord::Y { level: a, dim: i };
            let p = grid.with_values(sample_partials(l, &points, coord, variant)?)?;
            row.push(frac_deriv(&p, order, Side::Left)?.scale(sign));
        }
        levels.push(row);
    }
    Ok(ELTerms {
        position,
        levels,
        variant,
    })
}

/// Interior max-norm of a set of paths, skipping `skip` nodes at each end.
pub fn interior_norm(paths: &[SampledPath], skip: usize) -> f64 {
    paths
        .iter()
        .flat_map(|p| {
            let n = p.len();
            let hi = n.saturating_sub(skip);
            p.values()[skip.min(hi)..hi].iter().copied()
        })
        .fold(0.0, |m, v| m.max(v.abs()))
}

/// Euler–Lagrange residual `P_i + Σ_a (-1)^a D^(αa)[p_{i,a}]` along `traj`.
pub fn el_residual(l: &Lagrangian, traj: &JetTrajectory, variant: ELVariant) -> Result<ELResidualReport> {
    let terms = el_terms(l, traj, variant)?;
    let mut residual = terms.position.clone();
    for row in &terms.levels {
        for (r, term) in residual.iter_mut().zip(row) {
            *r = r.combine(1.0, term, 1.0)?;
        }
    }
    let skip = boundary_skip(l.alpha * l.k as f64);
    if traj.len() <= 2 * skip {
        return Err(FracError::GridTooShort {
            needed: 2 * skip + 1,
            got: traj.len(),
        });
    }
    let norm_inf = interior_norm(&residual, skip);
    Ok(ELResidualReport {
        residual,
        norm_inf,
        variant,
    })
}

/// Second derivatives of `L` in the first-level jet coordinates `y^(i(α))`.
#[derive(Debug, Clone, PartialEq)]
pub struct HessianG {
    pub g: DMatrix<f64>,
    pub det: f64,
    pub regular: bool,
}

impl HessianG {
    fn from_matrix(g: DMatrix<f64>) -> Self {
        let det = g.determinant();
        Self {
            regular: det.abs() > REGULARITY_THRESHOLD,
            det,
            g,
        }
    }

    pub fn inverse(&self) -> Result<DMatrix<f64>> {
        if !self.regular {
            return Err(FracError::SingularHessian { det: self.det });
        }
        self.g
            .clone()
            .try_inverse()
            .ok_or(FracError::SingularHessian { det: self.det })
    }

    pub fn asymmetry(&self) -> f64 {
        let n = self.g.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.g[(i, j)] - self.g[(j, i)]).abs());
            }
        }
        worst
    }
}

fn velocity(i: usize) -> Coord {
    Coord::Y { level: 1, dim: i }
}

// Second differences below the rounding noise of the stencil are snapped to
// zero so that a Lagrangian linear in the velocities reports det = 0.
fn snap(value: f64, noise: f64) -> f64 {
    if value.abs() <= noise {
        0.0
    } else {
        value
    }
}

fn classical_second(l: &Lagrangian, p: &JetPoint, i: usize, j: usize) -> f64 {
    let (ci, cj) = (velocity(i), velocity(j));
    if l.partials.is_some() {
        // central difference of the analytic first partial
        let v = p.get(ci);
        let step = (FD_REL_STEP * v.abs()).max(FD_ABS_STEP);
        let up = l.classical_partial(cj, &p.with(ci, v + step));
        let down = l.classical_partial(cj, &p.with(ci, v - step));
        let noise = NOISE_FACTOR * f64::EPSILON * up.abs().max(down.abs()) / step;
        return snap((up - down) / (2.0 * step), noise);
    }
    let si = (FD2_REL_STEP * p.get(ci).abs()).max(FD2_ABS_STEP);
    if i == j {
        let v = p.get(ci);
        let samples = [l.eval(&p.with(ci, v + si)), l.eval(p), l.eval(&p.with(ci, v - si))];
        let scale = samples.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        let value = (samples[0] - 2.0 * samples[1] + samples[2]) / (si * si);
        return snap(value, NOISE_FACTOR * f64::EPSILON * scale / (si * si));
    }
    let sj = (FD2_REL_STEP * p.get(cj).abs()).max(FD2_ABS_STEP);
    let (vi, vj) = (p.get(ci), p.get(cj));
    let at = |di: f64, dj: f64| l.eval(&p.with(ci, vi + di).with(cj, vj + dj));
    let samples = [at(si, sj), at(si, -sj), at(-si, sj), at(-si, -sj)];
    let scale = samples.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    let value = (samples[0] - samples[1] - samples[2] + samples[3]) / (4.0 * si * sj);
    snap(value, NOISE_FACTOR * f64::EPSILON * scale / (si * sj))
}

/// Velocity Hessian `g_ij` at a jet point. The classical variant uses
/// ordinary second partials, the fractional one nests two order-`α`
/// fractional partials.
pub fn hessian_g(l: &Lagrangian, point: &JetPoint, variant: ELVariant) -> Result<HessianG> {
    l.check_point(point)?;
    let n = l.n;
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = match variant {
                ELVariant::Classical => classical_second(l, point, i, j),
                ELVariant::Fractional => {
                    let inner = |p: &JetPoint| frac_partial(l, velocity(j), p, l.alpha);
                    frac_partial_of(&inner, velocity(i), point, l.alpha, l.terminal(velocity(i)))?
                }
            };
        }
    }
    Ok(HessianG::from_matrix(g))
}

/// Right-hand side `M^i` of the explicit field of a regular first-order
/// Lagrangian:
///
/// ```text
/// M^i = g^{ik} ( D^α_{x^k} L − d_t^α (D^α_{y^(k(α))} L) ),
/// d_t^α = D^α_t + y^(j(α)) D^α_{x^j}.
/// ```
///
/// All derivatives are fractional partials; `hessian` selects how `g` is
/// formed. `M` is the value of `y^(2α)` on solutions; the corresponding
/// second-level derivative is `D^(2α) x = Γ(1+2α) M`.
pub fn el_explicit_rhs(l: &Lagrangian, point: &JetPoint, hessian: ELVariant) -> Result<Vec<f64>> {
    if l.k != 1 {
        return Err(FracError::Mismatch(format!(
            "explicit field needs a first-order Lagrangian, got k = {}",
            l.k
        )));
    }
    let g = hessian_g(l, point, hessian)?;
    let inv = g.inverse()?;
    let alpha = l.alpha;
    let n = l.n;
    let mut rhs = Vec::with_capacity(n);
    for k in 0..n {
        let momentum = |p: &JetPoint| frac_partial(l, velocity(k), p, alpha);
        let dx = frac_partial(l, Coord::X(k), point, alpha)?;
        let mut dt = frac_partial_of(&momentum, Coord::Time, point, alpha, l.terminal(Coord::Time))?;
        for j in 0..n {
            let y = point.get(velocity(j));
            if y != 0.0 {
                dt += y * frac_partial_of(&momentum, Coord::X(j), point, alpha, l.terminal(Coord::X(j)))?;
            }
        }
        rhs.push(dx - dt);
    }
    Ok((0..n).map(|i| (0..n).map(|k| inv[(i, k)] * rhs[k]).sum()).collect())
}
