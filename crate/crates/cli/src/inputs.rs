use std::path::Path;
use std::sync::Arc;

use fracjet::specfun::gamma;
use fracjet::varcalc::ScalarFn;
use fracjet::SampledPath;

use crate::options::{FnKind, Options};
use crate::CliError;

pub const MIN_POINTS: usize = 9;
pub const DEFAULT_GRID: Grid = Grid {
    t0: 0.0,
    t1: 1.0,
    n: 1025,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub t0: f64,
    pub t1: f64,
    pub n: usize,
}

impl Grid {
    pub fn h(&self) -> f64 {
        (self.t1 - self.t0) / (self.n - 1) as f64
    }
}

pub fn parse_grid(spec: &str) -> Result<Grid, CliError> {
    let bad = || CliError::Usage(format!("grid must look like t0:T:n_pts, got {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [t0, t1, n] = parts.as_slice() else {
        return Err(bad());
    };
    let t0: f64 = t0.trim().parse().map_err(|_| bad())?;
    let t1: f64 = t1.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(CliError::Usage(format!("grid needs finite t0 < T, got {t0}:{t1}")));
    }
    if n < MIN_POINTS {
        return Err(CliError::Usage(format!(
            "grid too short: {n} points, need at least {MIN_POINTS}"
        )));
    }
    Ok(Grid { t0, t1, n })
}

pub fn grid(opts: &Options) -> Result<Grid, CliError> {
    opts.grid.as_deref().map_or(Ok(DEFAULT_GRID), parse_grid)
}

fn bump(t: f64, lo: f64, hi: f64) -> f64 {
    let s = (2.0 * t - lo - hi) / (hi - lo);
    if s.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    } else {
        0.0
    }
}

/// The path selected by `--from-file` or `--fn` (default `pow`).
pub fn path(opts: &Options) -> Result<SampledPath, CliError> {
    if let Some(file) = &opts.from_file {
        if opts.function.is_some() || opts.grid.is_some() {
            return Err(CliError::Usage("--from-file excludes --fn and --grid".into()));
        }
        return read_path(file);
    }
    let g = grid(opts)?;
    let kind = opts.function.unwrap_or(FnKind::Pow);
    let gam = opts.gamma.unwrap_or(1.0);
    if kind == FnKind::Pow && (g.t0 < 0.0 || gam < 0.0) {
        return Err(CliError::Usage("--fn pow needs t0 >= 0 and gamma >= 0".into()));
    }
    let value = opts.value.unwrap_or(1.0);
    let (lo, hi) = (g.t0 + 0.25 * (g.t1 - g.t0), g.t0 + 0.75 * (g.t1 - g.t0));
    let f = move |t: f64| match kind {
        FnKind::Pow => t.powf(gam),
        FnKind::Const => value,
        FnKind::Sin => t.sin(),
        FnKind::Exp => t.exp(),
        FnKind::Bump => bump(t, lo, hi),
    };
    Ok(SampledPath::from_fn(g.t0, g.t1, g.n, f)?)
}

/// Reads a uniformly spaced path from a CSV whose first two columns are
/// `t` and the value.
pub fn read_path(file: &Path) -> Result<SampledPath, CliError> {
    let mut reader =
        csv::Reader::from_path(file).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", file.display())))?;
    let mut t = Vec::new();
    let mut x = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
        let field = |i: usize| -> Result<f64, CliError> {
            record
                .get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| CliError::Usage(format!("{}: bad number on data row {}", file.display(), line + 1)))
        };
        t.push(field(0)?);
        x.push(field(1)?);
    }
    if t.len() < MIN_POINTS {
        return Err(CliError::Usage(format!(
            "{}: {} rows, need at least {MIN_POINTS}",
            file.display(),
            t.len()
        )));
    }
    let n = t.len();
    let h = (t[n - 1] - t[0]) / (n - 1) as f64;
    let uniform = t
        .iter()
        .enumerate()
        .all(|(j, &tj)| (tj - (t[0] + j as f64 * h)).abs() <= 1e-9 * tj.abs().max(1.0));
    if !(h > 0.0) || !uniform {
        return Err(CliError::Usage(format!(
            "{}: t column is not uniformly increasing",
            file.display()
        )));
    }
    Ok(SampledPath::new(t[0], h, x)?)
}

/// Parses `--forcing`. `bt-cubic` is the forcing whose Bagley-Torvik
/// solution (orders 2 and 3/2, zero initial state) is `x = t³`.
pub fn forcing(opts: &Options) -> Result<ScalarFn, CliError> {
    let spec = opts.forcing.as_deref().unwrap_or("zero");
    let (kind, arg) = match spec.split_once(':') {
        Some((k, a)) => {
            let v: f64 = a
                .parse()
                .map_err(|_| CliError::Usage(format!("bad forcing parameter in {spec:?}")))?;
            (k, Some(v))
        }
        None => (spec, None),
    };
    let f: ScalarFn = match (kind, arg) {
        ("zero", None) => Arc::new(|_| 0.0),
        ("const", Some(v)) => Arc::new(move |_| v),
        ("pow", Some(g)) if g >= 0.0 => Arc::new(move |t: f64| t.max(0.0).powf(g)),
        ("sin", None) => Arc::new(f64::sin),
        ("exp", None) => Arc::new(f64::exp),
        ("bump", None) => Arc::new(|t| bump(t, 0.25, 0.75)),
        ("bt-cubic", None) => {
            let (a, b, c) = (opts.a.unwrap_or(1.0), opts.b.unwrap_or(1.0), opts.c.unwrap_or(1.0));
            let g = gamma(4.0)? / gamma(2.5)?;
            Arc::new(move |t: f64| a * 6.0 * t + b * g * t.max(0.0).powf(1.5) + c * t.powi(3))
        }
        _ => {
            return Err(CliError::Usage(format!(
                "unknown forcing {spec:?}; use zero, const:V, pow:G, sin, exp, bump or bt-cubic"
            )))
        }
    };
    Ok(f)
}
