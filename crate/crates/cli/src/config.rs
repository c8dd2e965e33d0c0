//! Command-line flags, the JSON config file, and their merge. A flag given
//! on the command line wins over the same key in the file.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::ingest::ColumnSel;

pub const DEFAULT_LEVELS: [f64; 2] = [0.01, 0.05];
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_LENGTH: usize = 2000;

#[derive(Debug, Parser)]
#[command(name = "horizon", version, about = "Distribution forecasts of long-horizon integrated returns")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic SV or GARCH return series.
    Simulate(SimulateArgs),
    /// Forecast the distribution of the next-T integrated return.
    Forecast(ForecastArgs),
    /// Rolling-origin VaR backtest.
    Backtest(BacktestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Whitenoise,
    Correlated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignChoice {
    #[default]
    Symmetric,
    Asymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelChoice {
    #[default]
    Sv,
    Garch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShockChoice {
    #[default]
    Normal,
    StudentT,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON file with default settings; flags override it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct DataArgs {
    /// CSV file with a header row.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Column name, or 0-based index (default 0).
    #[arg(long)]
    pub column: Option<String>,
    /// The column holds prices; use log returns.
    #[arg(long)]
    pub as_prices: bool,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Predictor window length (default min(N/4, 50)).
    #[arg(long)]
    pub n: Option<usize>,
    /// Horizon T.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Bootstrap draws B.
    #[arg(long)]
    pub draws: Option<usize>,
    /// Comma-separated risk levels.
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub sign: Option<SignChoice>,
    /// Bin width of the asymmetric sign model (default 0.1 * sd).
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ForecastArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub data: DataArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BacktestArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub data: DataArgs,
    /// Distance between origins (default T).
    #[arg(long)]
    pub stride: Option<usize>,
    /// Observations used to fit each forecast (default N/2).
    #[arg(long)]
    pub train: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub model: Option<ModelChoice>,
    /// Number of returns.
    #[arg(long)]
    pub length: Option<usize>,
    #[arg(long, value_enum)]
    pub shock: Option<ShockChoice>,
    /// Degrees of freedom of Student-t shocks.
    #[arg(long)]
    pub dof: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// SV volatility scale.
    #[arg(long)]
    pub delta0: Option<f64>,
    /// SV log-volatility persistence.
    #[arg(long)]
    pub phi: Option<f64>,
    /// SV latent standard deviation.
    #[arg(long)]
    pub sigma_eta: Option<f64>,
    /// GARCH intercept.
    #[arg(long)]
    pub omega: Option<f64>,
    /// GARCH(1,1) weight on the previous variance.
    #[arg(long)]
    pub variance_lag: Option<f64>,
    /// GARCH(1,1) weight on the previous squared shock.
    #[arg(long)]
    pub shock_lag: Option<f64>,
    /// GARCH steps discarded before the first output.
    #[arg(long)]
    pub burnin: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ColumnValue {
    Index(usize),
    Name(String),
}

/// Every key the config file may carry.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub column: Option<ColumnValue>,
    pub as_prices: Option<bool>,
    pub mode: Option<Mode>,
    pub n: Option<usize>,
    pub horizon: Option<usize>,
    pub draws: Option<usize>,
    pub levels: Option<Vec<f64>>,
    pub sign: Option<SignChoice>,
    pub lambda: Option<f64>,
    pub stride: Option<usize>,
    pub train: Option<usize>,
    pub model: Option<ModelChoice>,
    pub length: Option<usize>,
    pub shock: Option<ShockChoice>,
    pub dof: Option<f64>,
    pub mu: Option<f64>,
    pub delta0: Option<f64>,
    pub phi: Option<f64>,
    pub sigma_eta: Option<f64>,
    pub omega: Option<f64>,
    pub variance_lag: Option<f64>,
    pub shock_lag: Option<f64>,
    pub burnin: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))
            .map_err(CliError::usage)?;
        serde_json::from_str(&text)
            .with_context(|| format!("invalid config file {}", path.display()))
            .map_err(CliError::usage)
    }

    fn for_common(common: &CommonArgs) -> CliResult<Self> {
        common.config.as_deref().map_or(Ok(Self::default()), Self::load)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub seed: u64,
    pub threads: Option<usize>,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForecastSettings {
    pub run: RunSettings,
    pub input: PathBuf,
    pub column: ColumnSel,
    pub as_prices: bool,
    pub mode: Mode,
    pub n: Option<usize>,
    pub horizon: usize,
    pub draws: usize,
    pub levels: Vec<f64>,
    pub sign: SignChoice,
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestSettings {
    pub forecast: ForecastSettings,
    pub stride: Option<usize>,
    pub train: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateSettings {
    pub run: RunSettings,
    pub model: ModelChoice,
    pub length: usize,
    pub shock: ShockChoice,
    pub dof: Option<f64>,
    pub mu: f64,
    pub delta0: f64,
    pub phi: f64,
    pub sigma_eta: f64,
    pub omega: f64,
    pub variance_lag: f64,
    pub shock_lag: f64,
    pub burnin: usize,
}

fn missing(flag: &str) -> CliError {
    CliError::usage(anyhow!("missing required setting --{flag} (flag or config file)"))
}

fn run_settings(common: &CommonArgs, file: &FileConfig) -> CliResult<RunSettings> {
    let threads = common.threads.or(file.threads);
    if threads == Some(0) {
        return Err(CliError::usage(anyhow!("--threads must be >= 1")));
    }
    Ok(RunSettings {
        seed: common.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        threads,
        out: common.out.clone().or_else(|| file.out.clone()).ok_or_else(|| missing("out"))?,
    })
}

fn forecast_settings(common: &CommonArgs, data: &DataArgs, file: &FileConfig) -> CliResult<ForecastSettings> {
    let column = match (&data.column, &file.column) {
        (Some(text), _) => ColumnSel::parse(text),
        (None, Some(ColumnValue::Index(i))) => ColumnSel::Index(*i),
        (None, Some(ColumnValue::Name(s))) => ColumnSel::Name(s.clone()),
        (None, None) => ColumnSel::default(),
    };
    let s = ForecastSettings {
        run: run_settings(common, file)?,
        input: data.input.clone().or_else(|| file.input.clone()).ok_or_else(|| missing("input"))?,
        column,
        as_prices: data.as_prices || file.as_prices.unwrap_or(false),
        mode: data.mode.or(file.mode).unwrap_or_default(),
        n: data.n.or(file.n),
        horizon: data.horizon.or(file.horizon).ok_or_else(|| missing("horizon"))?,
        draws: data
            .draws
            .or(file.draws)
            .unwrap_or(horizon_core::forecast::DEFAULT_DRAWS),
        levels: data
            .levels
            .clone()
            .or_else(|| file.levels.clone())
            .unwrap_or_else(|| DEFAULT_LEVELS.to_vec()),
        sign: data.sign.or(file.sign).unwrap_or_default(),
        lambda: data.lambda.or(file.lambda),
    };
    s.validate()?;
    Ok(s)
}

impl ForecastSettings {
    pub fn from_args(args: &ForecastArgs) -> CliResult<Self> {
        let file = FileConfig::for_common(&args.common)?;
        forecast_settings(&args.common, &args.data, &file)
    }

    /// Checks that do not need the data.
    pub fn validate(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::usage(anyhow!(msg)));
        if self.horizon == 0 {
            return bad("--horizon must be >= 1".into());
        }
        if self.draws == 0 {
            return bad("--draws must be >= 1".into());
        }
        if self.n == Some(0) {
            return bad("--n must be >= 1".into());
        }
        if self.levels.is_empty() {
            return bad("--levels needs at least one level".into());
        }
        if let Some(p) = self.levels.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
            return bad(format!("risk level {p} must lie in (0, 1)"));
        }
        match (self.sign, self.lambda) {
            (SignChoice::Symmetric, Some(_)) => bad("--lambda applies only with --sign asymmetric".into()),
            (_, Some(l)) if !(l > 0.0 && l.is_finite()) => bad(format!("--lambda must be > 0, got {l}")),
            _ => Ok(()),
        }
    }
}

impl BacktestSettings {
    pub fn from_args(args: &BacktestArgs) -> CliResult<Self> {
        let file = FileConfig::for_common(&args.common)?;
        let s = BacktestSettings {
            forecast: forecast_settings(&args.common, &args.data, &file)?,
            stride: args.stride.or(file.stride),
            train: args.train.or(file.train),
        };
        if s.stride == Some(0) || s.train == Some(0) {
            return Err(CliError::usage(anyhow!("--stride and --train must be >= 1")));
        }
        Ok(s)
    }
}

impl SimulateSettings {
    pub fn from_args(args: &SimulateArgs) -> CliResult<Self> {
        let file = FileConfig::for_common(&args.common)?;
        let s = SimulateSettings {
            run: run_settings(&args.common, &file)?,
            model: args.model.or(file.model).unwrap_or_default(),
            length: args.length.or(file.length).unwrap_or(DEFAULT_LENGTH),
            shock: args.shock.or(file.shock).unwrap_or_default(),
            dof: args.dof.or(file.dof),
            mu: args.mu.or(file.mu).unwrap_or(0.0),
            delta0: args.delta0.or(file.delta0).unwrap_or(0.01),
            phi: args.phi.or(file.phi).unwrap_or(0.9),
            sigma_eta: args.sigma_eta.or(file.sigma_eta).unwrap_or(0.3),
            omega: args.omega.or(file.omega).unwrap_or(1e-6),
            variance_lag: args.variance_lag.or(file.variance_lag).unwrap_or(0.9),
            shock_lag: args.shock_lag.or(file.shock_lag).unwrap_or(0.05),
            burnin: args
                .burnin
                .or(file.burnin)
                .unwrap_or(horizon_core::sim::DEFAULT_GARCH_BURNIN),
        };
        if s.length == 0 {
            return Err(CliError::usage(anyhow!("--length must be >= 1")));
        }
        if s.shock == ShockChoice::StudentT && s.dof.is_none() {
            return Err(missing("dof"));
        }
        Ok(s)
    }
}
