use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FnKind {
    /// t^gamma
    Pow,
    /// constant --value
    Const,
    Sin,
    Exp,
    /// smooth bump supported on the middle half of the grid
    Bump,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    Classical,
    Fractional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientArg {
    Normalized,
    Paper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand. Any of them may also come from
/// `--config`, a JSON object keyed by flag name; flags given on the command
/// line win.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct Options {
    /// JSON file supplying default values for any flag
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Fractional order
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Jet order
    #[arg(long)]
    pub k: Option<usize>,

    /// Grid as t0:T:n_pts
    #[arg(long)]
    pub grid: Option<String>,

    /// Test function sampled on the grid
    #[arg(long = "fn", value_enum)]
    #[serde(rename = "fn")]
    pub function: Option<FnKind>,

    /// Exponent for --fn pow and the power-law example
    #[arg(long)]
    pub gamma: Option<f64>,

    /// Value for --fn const
    #[arg(long)]
    pub value: Option<f64>,

    #[arg(long, value_enum)]
    pub side: Option<SideArg>,

    /// Mittag-Leffler argument
    #[arg(long)]
    pub z: Option<f64>,

    /// Equation from the model catalog
    #[arg(long)]
    pub model: Option<String>,

    /// Lagrangian from the built-in catalog
    #[arg(long)]
    pub lagrangian: Option<String>,

    #[arg(long, value_enum)]
    pub coefficients: Option<CoefficientArg>,

    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,

    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b1: Option<f64>,
    /// Mass in the friction model
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<f64>,
    /// Damping in the friction model
    #[arg(long, allow_hyphen_values = true)]
    pub damping: Option<f64>,
    /// Stiffness: friction restoring force, or q in the potential U = q x^2 / 2
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,

    /// Forcing f(t): zero, const:V, pow:G, sin, exp, bump or bt-cubic
    #[arg(long)]
    pub forcing: Option<String>,

    /// CSV with columns t, x to use instead of --fn
    #[arg(long)]
    pub from_file: Option<PathBuf>,

    /// Write the artifact here instead of standard output
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

macro_rules! prefer {
    ($cli:ident, $file:ident; $($field:ident),* $(,)?) => {
        $( $cli.$field = $cli.$field.or($file.$field); )*
    };
}

impl Options {
    /// Fills every unset flag from the config file, if one was given.
    pub fn resolve(mut self) -> Result<Self, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = read_config(&path)?;
        prefer!(self, file;
            alpha, k, grid, function, gamma, value, side, z, model, lagrangian, coefficients,
            variant, a, b, c, a1, a2, b1, m, damping, kappa, forcing, from_file, output, format,
        );
        Ok(self)
    }
}

fn read_config(path: &Path) -> Result<Options, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}
