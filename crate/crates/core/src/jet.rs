//! Fractional jet coordinates.
//!
//! A trajectory `x^i(t)` is lifted to `(t, x^i, y^(i(α)), …, y^(i(kα)))` with
//! `y^(i(αa)) = D^(αa) x^i / Γ(1 + αa)`, the left derivative taken from the
//! start of the grid. At the base node the jet values follow the
//! neighbour-copy convention of [`crate::fracops`].

use crate::error::{FracError, Result};
use crate::fracops::{frac_deriv, FracOrder, SampledPath, Side};
use crate::specfun::gamma;

/// Selects one coordinate of a jet point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coord {
    Time,
    /// Position component `x^i`.
    X(usize),
    /// Jet component `y^(i(α·level))`, `level` in `1..=k`.
    Y {
        level: usize,
        dim: usize,
    },
}

/// A point `(t, x, y^(α), …, y^(kα))` of the jet bundle; `y[a-1][i]` holds
/// `y^(i(α a))`.
#[derive(Debug, Clone, PartialEq)]
pub struct JetPoint {
    pub t: f64,
    pub x: Vec<f64>,
    pub y: Vec<Vec<f64>>,
}

impl JetPoint {
    pub fn new(t: f64, x: Vec<f64>, y: Vec<Vec<f64>>) -> Result<Self> {
        if x.is_empty() {
            return Err(FracError::InvalidArgument("jet point needs n >= 1".into()));
        }
        if y.iter().any(|row| row.len() != x.len()) {
            return Err(FracError::Mismatch(
                "every jet level needs one entry per dimension".into(),
            ));
        }
        let finite = t.is_finite() && x.iter().chain(y.iter().flatten()).all(|v| v.is_finite());
        if !finite {
            return Err(FracError::InvalidArgument("jet point has non-finite entries".into()));
        }
        Ok(Self { t, x, y })
    }

    /// One-dimensional point `(t, x, y_1, …, y_k)`.
    pub fn scalar(t: f64, x: f64, y: &[f64]) -> Result<Self> {
        Self::new(t, vec![x], y.iter().map(|&v| vec![v]).collect())
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn order(&self) -> usize {
        self.y.len()
    }

    pub fn get(&self, coord: Coord) -> f64 {
        match coord {
            Coord::Time => self.t,
            Coord::X(i) => self.x[i],
            Coord::Y { level, dim } => self.y[level - 1][dim],
        }
    }

    pub fn set(&mut self, coord: Coord, value: f64) {
        match coord {
            Coord::Time => self.t = value,
            Coord::X(i) => self.x[i] = value,
            Coord::Y { level, dim } => self.y[level - 1][dim] = value,
        }
    }

    pub fn with(&self, coord: Coord, value: f64) -> Self {
        let mut p = self.clone();
        p.set(coord, value);
        p
    }

    pub fn contains(&self, coord: Coord) -> bool {
        match coord {
            Coord::Time => true,
            Coord::X(i) => i < self.dim(),
            Coord::Y { level, dim } => level >= 1 && level <= self.order() && dim < self.dim(),
        }
    }

    /// Every coordinate in a fixed order: time, positions, then jet levels.
    pub fn coords(&self) -> Vec<Coord> {
        let mut out = vec![Coord::Time];
        out.extend((0..self.dim()).map(Coord::X));
        for level in 1..=self.order() {
            out.extend((0..self.dim()).map(|dim| Coord::Y { level, dim }));
        }
        out
    }
}

/// A sampled trajectory with its jet lift.
#[derive(Debug, Clone, PartialEq)]
pub struct JetTrajectory {
    alpha: f64,
    k: usize,
    base: Vec<SampledPath>,
    // y[a-1][i]
    y: Vec<Vec<SampledPath>>,
}

impl JetTrajectory {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn len(&self) -> usize {
        self.base[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.base[0].is_empty()
    }

    pub fn h(&self) -> f64 {
        self.base[0].h()
    }

    pub fn time(&self, j: usize) -> f64 {
        self.base[0].time(j)
    }

    pub fn base(&self, i: usize) -> &SampledPath {
        &self.base[i]
    }

    /// `y^(i(α level))` as a path.
    pub fn jet(&self, level: usize, i: usize) -> &SampledPath {
        &self.y[level - 1][i]
    }

    pub fn point(&self, j: usize) -> JetPoint {
        JetPoint {
            t: self.time(j),
            x: self.base.iter().map(|p| p.values()[j]).collect(),
            y: self
                .y
                .iter()
                .map(|level| level.iter().map(|p| p.values()[j]).collect())
                .collect(),
        }
    }

    pub fn points(&self) -> impl Iterator<Item = JetPoint> + '_ {
        (0..self.len()).map(move |j| self.point(j))
    }
}

/// Lifts `paths` (one per dimension) to jet coordinates of order `k`.
pub fn lift(paths: &[SampledPath], alpha: f64, k: usize) -> Result<JetTrajectory> {
    if paths.is_empty() {
        return Err(FracError::InvalidArgument("lift needs at least one path".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FracError::InvalidArgument(format!(
            "jet order alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if k == 0 {
        return Err(FracError::InvalidArgument("jet order k must be >= 1".into()));
    }
    for p in &paths[1..] {
        paths[0].ensure_same_grid(p)?;
    }
    let mut y = Vec::with_capacity(k);
    for a in 1..=k {
        let mu = alpha * a as f64;
        let order = FracOrder::new(mu)?;
        let norm = 1.0 / gamma(1.0 + mu)?;
        let level = paths
            .iter()
            .map(|p| frac_deriv(p, order, Side::Left).map(|d| d.scale(norm)))
            .collect::<Result<Vec<_>>>()?;
        y.push(level);
    }
    Ok(JetTrajectory {
        alpha,
        k,
        base: paths.to_vec(),
        y,
    })
}

/// Truncated fractional Taylor series `x^i(0) + Σ_a t^(αa) y^(i(αa))` of a
/// jet point taken at `t = 0`.
pub fn taylor_reconstruct(point: &JetPoint, alpha: f64, t_eval: f64) -> Result<Vec<f64>> {
    if point.t != 0.0 {
        return Err(FracError::InvalidArgument(format!(
            "reconstruction needs a jet at t = 0, got t = {}",
            point.t
        )));
    }
    if !(t_eval >= 0.0) {
        return Err(FracError::InvalidArgument(format!(
            "evaluation time must be non-negative, got {t_eval}"
        )));
    }
    let mut out = point.x.clone();
    for (a, level) in point.y.iter().enumerate() {
        let w = t_eval.powf(alpha * (a + 1) as f64);
        for (o, y) in out.iter_mut().zip(level) {
            *o += w * y;
        }
    }
    Ok(out)
}
