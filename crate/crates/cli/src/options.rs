//! Flags shared by every subcommand, and their JSON config-file counterpart.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use nhkitaev_core::output::Format;
use serde::Deserialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
pub struct Range(pub f64, pub f64);

fn parse_range(s: &str) -> Result<Range, String> {
    let (lo, hi) = s.split_once(',').or_else(|| s.split_once(':')).ok_or("expected LO,HI")?;
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    Ok(Range(parse(lo)?, parse(hi)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

/// Every field is optional so that file values and flags can be layered.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Options {
    /// JSON file with flag names as keys; flags given on the command line win
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Single chain length (used when --sizes is absent)
    #[arg(long)]
    pub length: Option<usize>,
    /// Chain lengths, comma separated
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long, allow_hyphen_values = true)]
    pub hopping: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub pairing: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hubbard_u: Option<f64>,
    /// Imaginary part of the interaction (two-body loss)
    #[arg(long, allow_hyphen_values = true)]
    pub nh_delta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Dimerization
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// U/t range as LO,HI
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub u_range: Option<Range>,
    /// Dimerization range as LO,HI
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub eta_range: Option<Range>,
    #[arg(long)]
    pub u_step: Option<f64>,
    #[arg(long)]
    pub eta_step: Option<f64>,
    /// Smearing λ in the degeneracy measure, in units of 1/t
    #[arg(long)]
    pub lambda_smear: Option<f64>,
    /// Number of gaps entering χ (default L+1)
    #[arg(long)]
    pub gap_count: Option<usize>,
    /// Energy window |E - E0| defining the ground manifold of the correlator
    #[arg(long)]
    pub manifold_resolution: Option<f64>,
    /// Largest matrix dimension handed to the dense eigensolver
    #[arg(long)]
    pub dense_cap: Option<usize>,
    /// Momentum grid size for `bands`
    #[arg(long)]
    pub k_points: Option<usize>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

macro_rules! layer {
    ($self:ident, $other:ident, $($f:ident),*) => {
        Options { config: $self.config, $($f: $self.$f.or($other.$f)),* }
    };
}

impl Options {
    /// Fill unset flags from the config file, if one was named.
    pub fn resolve(self) -> Result<Self, String> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = read_config(&path)?;
        Ok(layer!(
            self, file, length, sizes, hopping, pairing, hubbard_u, nh_delta, mu, eta, u_range, eta_range, u_step,
            eta_step, lambda_smear, gap_count, manifold_resolution, dense_cap, k_points, workers, out, format
        ))
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(OutputFormat::Csv).into()
    }

    /// `--sizes`, else `--length`, else the command default.
    pub fn sizes_or(&self, default: &[usize]) -> Vec<usize> {
        match (&self.sizes, self.length) {
            (Some(s), _) => s.clone(),
            (None, Some(l)) => vec![l],
            (None, None) => default.to_vec(),
        }
    }
}

/// Keys may be written with dashes or underscores.
fn read_config(path: &Path) -> Result<Options, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let Value::Object(map) = value else {
        return Err(format!("{}: expected a JSON object", path.display()));
    };
    let normalized: Map<String, Value> = map.into_iter().map(|(k, v)| (k.replace('_', "-"), v)).collect();
    serde_json::from_value(Value::Object(normalized)).map_err(|e| format!("{}: {e}", path.display()))
}
