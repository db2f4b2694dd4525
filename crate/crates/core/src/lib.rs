//! Fractional calculus on uniform grids.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: gamma, generalised binomials and the Mittag-Leffler series.
//! - [`fracops`]: Grünwald–Letnikov left/right fractional derivatives of
//!   sampled paths with base-value (Taylor) regularisation, the fractional
//!   Leibniz series and the integration-by-parts check.
//! - [`jet`]: fractional jet lifts `y^(αa) = D^(αa) x / Γ(1+αa)` and the
//!   truncated fractional Taylor reconstruction.
//! - [`varcalc`]: Lagrangians on jet coordinates, fractional partial
//!   derivatives, actions, Euler–Lagrange residuals, the velocity Hessian and
//!   the explicit field of a regular Lagrangian, plus a catalog of built-in
//!   Lagrangians.
//! - [`fodesolve`]: implicit GL stepping for linear multi-term fractional
//!   equations, explicit GL stepping for `D^(2α) x = F(t, x, D^α x)`, and the
//!   model catalog (friction, Phillips, business cycle, Bagley–Torvik).

pub mod error;
pub mod fodesolve;
pub mod fracops;
pub mod jet;
pub mod specfun;
pub mod varcalc;

pub use error::{FracError, Result};
pub use fracops::{FracOrder, SampledPath, Side};
pub use jet::{Coord, JetPoint, JetTrajectory};
