//! The three subcommands. Each computes every artifact in memory first and
//! only then commits them to the output directory.

use std::path::PathBuf;

use horizon_core::signs::default_lambda;
use horizon_core::sim::GarchPath;
use horizon_core::{
    default_window, innovation_residuals, risk_report, rolling_backtest, with_threads, BacktestConfig,
    ForecastConfig64, ForecastMode, GarchParams64, ReturnSeries64, Shock, SignSpec, SvParams64, SvPath,
};

use crate::config::{BacktestSettings, ForecastSettings, ModelChoice, Mode, ShockChoice, SignChoice, SimulateSettings};
use crate::error::{CliError, CliResult};
use crate::ingest::ingest_returns;
use crate::output::{column_csv, fmt_num, OutputSet, Summary};

pub const SAMPLES_FILE: &str = "samples.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const BACKTEST_FILE: &str = "backtest.csv";
pub const SIMULATED_FILE: &str = "returns.csv";

fn parallel<R: Send>(threads: Option<usize>, f: impl FnOnce() -> CliResult<R> + Send) -> CliResult<R> {
    match threads {
        Some(t) => with_threads(t, f)?,
        None => f(),
    }
}

fn core_mode(mode: Mode) -> ForecastMode {
    match mode {
        Mode::Whitenoise => ForecastMode::WhiteNoise,
        Mode::Correlated => ForecastMode::Correlated,
    }
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Whitenoise => "whitenoise",
        Mode::Correlated => "correlated",
    }
}

fn sign_name(sign: SignChoice) -> &'static str {
    match sign {
        SignChoice::Symmetric => "symmetric",
        SignChoice::Asymmetric => "asymmetric",
    }
}

/// Bin width the sign model will use on this series: the given one, or the
/// default computed from the same centered values the pipeline fits.
fn effective_lambda(s: &ForecastSettings, series: &ReturnSeries64, n: usize) -> CliResult<Option<f64>> {
    if s.sign == SignChoice::Symmetric {
        return Ok(None);
    }
    if let Some(l) = s.lambda {
        return Ok(Some(l));
    }
    let centered: Vec<f64> = match s.mode {
        Mode::Whitenoise => series.values().iter().map(|x| x - series.mean()).collect(),
        Mode::Correlated => innovation_residuals(series, n)?.residuals[n..].to_vec(),
    };
    Ok(Some(default_lambda(&centered)))
}

fn level_key(prefix: &str, p: f64) -> String {
    format!("{prefix}_{p}")
}

/// Builds the forecast artifacts without touching the file system.
pub fn run_forecast(s: &ForecastSettings) -> CliResult<OutputSet> {
    let series = ingest_returns(&s.input, &s.column, s.as_prices)?;
    let n = s.n.unwrap_or_else(|| default_window(series.len()));
    let (dist, lambda) = parallel(s.run.threads, || {
        let lambda = effective_lambda(s, &series, n)?;
        let signs = lambda.map_or(SignSpec::Symmetric, |l| SignSpec::Asymmetric { lambda: Some(l) });
        let cfg = ForecastConfig64::new(n, s.horizon)
            .with_draws(s.draws)
            .with_seed(s.run.seed)
            .with_signs(signs);
        Ok((core_mode(s.mode).forecast(&series, &cfg)?, lambda))
    })?;

    let mut summary = Summary::default();
    summary
        .str("mode", mode_name(s.mode))
        .str("sign", sign_name(s.sign))
        .opt_num("lambda", lambda)
        .int("N", series.len() as u64)
        .num("mu_hat", series.mean())
        .int("T", s.horizon as u64)
        .int("n", n as u64)
        .int("B", s.draws as u64)
        .int("seed", s.run.seed);
    for &p in &s.levels {
        let report = risk_report(&dist, p)?;
        summary.num(level_key("var", p), report.var).num(level_key("cte", p), report.cte);
    }
    let mut out = OutputSet::default();
    out.add(SAMPLES_FILE, column_csv(dist.samples()));
    out.add(SUMMARY_FILE, summary.to_json());
    Ok(out)
}

pub fn run_backtest(s: &BacktestSettings) -> CliResult<OutputSet> {
    let f = &s.forecast;
    let series = ingest_returns(&f.input, &f.column, f.as_prices)?;
    let train = s.train.unwrap_or(series.len() / 2);
    if train == 0 || train >= series.len() {
        return Err(CliError::data(anyhow::anyhow!(
            "training window {train} leaves no origins in {} observations",
            series.len()
        )));
    }
    let n = f.n.unwrap_or_else(|| default_window(train));
    let stride = s.stride.unwrap_or(f.horizon);
    let signs = match f.sign {
        SignChoice::Symmetric => SignSpec::Symmetric,
        SignChoice::Asymmetric => SignSpec::Asymmetric { lambda: f.lambda },
    };
    let cfg = ForecastConfig64::new(n, f.horizon)
        .with_draws(f.draws)
        .with_seed(f.run.seed)
        .with_signs(signs);
    let results = parallel(f.run.threads, || {
        f.levels
            .iter()
            .map(|&level| {
                let bt = BacktestConfig {
                    level,
                    stride,
                    train,
                    horizon: f.horizon,
                    seed: f.run.seed,
                };
                Ok(rolling_backtest(&series, &cfg, &bt, core_mode(f.mode))?)
            })
            .collect::<CliResult<Vec<_>>>()
    })?;

    let first = &results[0];
    let mut table = String::from("origin,realized");
    for &p in &f.levels {
        table.push_str(&format!(",{},{}", level_key("var", p), level_key("hit", p)));
    }
    table.push('\n');
    for (i, origin) in first.origins.iter().enumerate() {
        table.push_str(&format!("{origin},{}", fmt_num(first.realized[i])));
        for r in &results {
            table.push_str(&format!(",{},{}", fmt_num(r.var[i]), u8::from(r.hits[i])));
        }
        table.push('\n');
    }

    let mut summary = Summary::default();
    summary
        .str("mode", mode_name(f.mode))
        .str("sign", sign_name(f.sign))
        .opt_num("lambda", f.lambda)
        .int("N", series.len() as u64)
        .int("T", f.horizon as u64)
        .int("n", n as u64)
        .int("B", f.draws as u64)
        .int("seed", f.run.seed)
        .int("train", train as u64)
        .int("stride", stride as u64)
        .int("K", first.len() as u64);
    for (r, &p) in results.iter().zip(&f.levels) {
        summary
            .num(level_key("coverage", p), r.coverage)
            .num(level_key("z", p), r.z_score)
            .int(level_key("hits", p), r.hits.iter().filter(|&&h| h).count() as u64)
            .int(level_key("hit_runs", p), r.hit_runs as u64)
            .int(level_key("longest_run", p), r.longest_run as u64);
    }
    let mut out = OutputSet::default();
    out.add(BACKTEST_FILE, table);
    out.add(SUMMARY_FILE, summary.to_json());
    Ok(out)
}

/// The simulated returns and their volatilities, exactly as written.
pub fn simulate_series(s: &SimulateSettings) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let shock = match s.shock {
        ShockChoice::Normal => Shock::Normal,
        ShockChoice::StudentT => Shock::StudentT {
            dof: s.dof.unwrap_or_default(),
        },
    };
    Ok(match s.model {
        ModelChoice::Sv => {
            let params = SvParams64::new(s.mu, s.delta0, s.phi, s.sigma_eta);
            let path = SvPath::generate(params, shock, s.length, s.run.seed)?;
            (path.returns.into_values(), path.volatility)
        }
        ModelChoice::Garch => {
            let params = GarchParams64::garch11(s.mu, s.omega, s.variance_lag, s.shock_lag);
            let path = GarchPath::generate(params, shock, s.length, s.run.seed, s.burnin)?;
            let vol = path.variance.iter().map(|v| v.sqrt()).collect();
            (path.returns.into_values(), vol)
        }
    })
}

pub fn run_simulate(s: &SimulateSettings) -> CliResult<OutputSet> {
    let (returns, vol) = simulate_series(s)?;
    let mut table = String::from("return,volatility\n");
    for (r, h) in returns.iter().zip(&vol) {
        table.push_str(&format!("{},{}\n", fmt_num(*r), fmt_num(*h)));
    }
    let mut summary = Summary::default();
    summary
        .str("model", match s.model {
            ModelChoice::Sv => "sv",
            ModelChoice::Garch => "garch",
        })
        .int("length", s.length as u64)
        .int("seed", s.run.seed)
        .num("mu", s.mu);
    match s.model {
        ModelChoice::Sv => summary.num("delta0", s.delta0).num("phi", s.phi).num("sigma_eta", s.sigma_eta),
        ModelChoice::Garch => summary
            .num("omega", s.omega)
            .num("variance_lag", s.variance_lag)
            .num("shock_lag", s.shock_lag)
            .int("burnin", s.burnin as u64),
    };
    summary.opt_num("dof", s.dof.filter(|_| s.shock == ShockChoice::StudentT));
    let mut out = OutputSet::default();
    out.add(SIMULATED_FILE, table);
    out.add(SUMMARY_FILE, summary.to_json());
    Ok(out)
}

/// Runs a subcommand and writes its outputs; returns the written paths.
pub fn execute(command: &crate::config::Command) -> CliResult<Vec<PathBuf>> {
    use crate::config::Command;
    let (outputs, dir) = match command {
        Command::Simulate(args) => {
            let s = SimulateSettings::from_args(args)?;
            (run_simulate(&s)?, s.run.out)
        }
        Command::Forecast(args) => {
            let s = ForecastSettings::from_args(args)?;
            (run_forecast(&s)?, s.run.out)
        }
        Command::Backtest(args) => {
            let s = BacktestSettings::from_args(args)?;
            (run_backtest(&s)?, s.forecast.run.out)
        }
    };
    outputs.commit(&dir).map_err(CliError::data)
}
