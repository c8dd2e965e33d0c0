//! Acceptance suite. Runs every acceptance criterion at its stated tolerance
//! and prints one PASS/FAIL line per criterion; exits nonzero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use horizon_core::rng::{substream, Purpose};
use horizon_core::signs::{default_lambda, reconstruct};
use horizon_core::*;
use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, detail }
    }
}

type Criterion = (u32, &'static str, fn() -> Outcome, Option<Duration>);

fn timed<R>(f: impl FnOnce() -> R) -> (R, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

/// Innovations predictors against a dense solve of the normal equations for
/// AR(1) and MA(1) autocovariances, n <= 30, h <= 5, within 1e-8.
fn criterion_1() -> Outcome {
    let models: Vec<(String, Vec<f64>)> = vec![
        ("AR(1) phi=0.3".into(), ar1_acov(0.3, 40)),
        ("AR(1) phi=0.8".into(), ar1_acov(0.8, 40)),
        ("MA(1) theta=0.4".into(), ma1_acov(0.4, 40)),
        ("MA(1) theta=-0.6".into(), ma1_acov(-0.6, 40)),
    ];
    let window_data = standard_normals(30, 11);
    let mut worst: f64 = 0.0;
    let mut longest = Duration::ZERO;
    for (_, gamma) in &models {
        let (err, elapsed) = timed(|| {
            let table = AutocovarianceTable::from_values(gamma.clone()).unwrap();
            let sol = innovations_coefficients(&table, 34).unwrap();
            let mut err: f64 = 0.0;
            for n in 1..=30 {
                let data = &window_data[..n];
                let window = PredictorWindow::new(&sol, data).unwrap();
                for h in 1..=5 {
                    let ours = h_step_predict(&sol, &window, h, 0.0, false).unwrap();
                    err = err.max((ours - projection_predict(gamma, data, h)).abs());
                }
            }
            err
        });
        worst = worst.max(err);
        longest = longest.max(elapsed);
    }
    Outcome::new(
        worst < 1e-8 && longest < Duration::from_secs(1),
        format!("max |diff| = {worst:.2e} (< 1e-8), slowest model {longest:?} (< 1 s)"),
    )
}

/// Signs of a simulated SV path: balanced, serially uncorrelated and
/// uncorrelated with magnitudes at leads and lags.
fn criterion_2() -> Outcome {
    let n_obs = 10_000;
    let path = SvPath::generate(SvParams64::new(0.0, 0.01, 0.9, 0.3), Shock::Normal, n_obs, 2).unwrap();
    let split = magnitude_sign_split(&path.returns, path.returns.mean());
    let root_n = (n_obs as f64).sqrt();
    let freq = split.signs.iter().filter(|&&s| s > 0.0).count() as f64 / n_obs as f64;
    let balance = (freq - 0.5).abs();
    let serial = (1..=5)
        .map(|k| autocorrelation(&split.signs, k).abs())
        .fold(0.0, f64::max);
    let cross = (-2i64..=2)
        .map(|k| {
            let (s, m) = if k >= 0 {
                let k = k as usize;
                (&split.signs[..n_obs - k], &split.magnitudes[k..])
            } else {
                let k = (-k) as usize;
                (&split.signs[k..], &split.magnitudes[..n_obs - k])
            };
            correlation(s, m).abs()
        })
        .fold(0.0, f64::max);
    let pass = balance < 3.0 * 0.5 / root_n && serial < 4.0 / root_n && cross < 4.0 / root_n;
    Outcome::new(
        pass,
        format!(
            "|freq - 1/2| = {balance:.4} (< {:.4}), max sign acf = {serial:.4}, max sign-magnitude corr = {cross:.4} (< {:.4})",
            1.5 / root_n,
            4.0 / root_n
        ),
    )
}

/// iid Gaussian data: the bootstrap forecast matches N(T mu, T sigma^2).
fn criterion_3() -> Outcome {
    let series = simulate_sv(SvParams64::new(0.0, 0.01, 0.9, 0.0), 2000, 0).unwrap();
    let cfg = ForecastConfig64::new(50, 10).with_draws(20_000).with_seed(0);
    let (dist, elapsed) = timed(|| forecast_distribution(&series, &cfg).unwrap());
    let mu = series.mean();
    let var = series.values().iter().map(|x| (x - mu).powi(2)).sum::<f64>() / series.len() as f64;
    let normal = Normal::new(10.0 * mu, (10.0 * var).sqrt()).unwrap();
    let ks = dist.ks_distance_to(|x| normal.cdf(x));
    Outcome::new(
        ks < 0.03 && elapsed < Duration::from_secs(10),
        format!("KS = {ks:.4} (< 0.03), runtime {elapsed:?} (< 10 s)"),
    )
}

/// 5% VaR of the forecast vs. a Monte-Carlo continuation of the true model
/// from its final state.
fn criterion_4() -> Outcome {
    let (n_obs, horizon, paths, seed) = (5000, 10, 50_000, 0);
    let cfg = ForecastConfig64::new(50, horizon).with_seed(seed);
    let (results, elapsed) = timed(|| {
        let garch = GarchPath::generate(GarchParams64::garch11(0.0, 1e-6, 0.9, 0.05), Shock::Normal, n_obs, seed, 1000).unwrap();
        let fc = value_at_risk(&forecast_distribution(&garch.returns, &cfg).unwrap(), 0.05).unwrap();
        let truth = order_quantile(&garch_continuation_sums(&garch.state, horizon, paths, seed), 0.05);
        let garch_rel = (fc - truth).abs() / truth.abs();

        let sv = SvPath::generate(SvParams64::new(0.0, 0.01, 0.9, 0.3), Shock::Normal, n_obs, seed).unwrap();
        let fc = value_at_risk(&forecast_distribution(&sv.returns, &cfg).unwrap(), 0.05).unwrap();
        let truth = order_quantile(&sv_continuation_sums(&sv.state, horizon, paths, seed), 0.05);
        (garch_rel, (fc - truth).abs() / truth.abs())
    });
    let (garch_rel, sv_rel) = results;
    Outcome::new(
        garch_rel < 0.15 && sv_rel < 0.15 && elapsed < Duration::from_secs(120),
        format!("relative VaR error GARCH {garch_rel:.3}, SV {sv_rel:.3} (< 0.15), runtime {elapsed:?}"),
    )
}

/// In-sample identity of the serial decomposition at 50 random origins.
fn criterion_5() -> Outcome {
    let (n_obs, n, horizon) = (2000, 20, 10);
    let shocks = simulate_garch(&GarchParams64::garch11(0.0, 1e-6, 0.9, 0.05), n_obs, 5, 1000).unwrap();
    let x = ar1_filter(shocks.values(), 0.5);
    let (worst, elapsed) = timed(|| {
        let mu = sample_mean(&x);
        let centered: Vec<f64> = x.iter().map(|v| v - mu).collect();
        let order = n + horizon;
        let sol = innovations_coefficients(&sample_autocovariance(&centered, order).unwrap(), order).unwrap();
        let mut rng = substream(5, Purpose::Backtest, 0);
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let origin = rng.random_range(n..=n_obs - horizon);
            let dec = decompose_integrated(&centered[..origin], n, horizon, &sol).unwrap();
            let future = &centered[origin..origin + horizon];
            let u = realized_innovations(&sol, &centered[origin - n..origin], future).unwrap();
            let lhs: f64 = future.iter().sum();
            let rhs = dec.t_term + dec.innovation_term(&u).unwrap();
            worst = worst.max((lhs - rhs).abs());
        }
        worst
    });
    Outcome::new(
        worst < 1e-10,
        format!("max |sum - (T + I)| = {worst:.2e} (< 1e-10) over 50 origins, runtime {elapsed:?}"),
    )
}

/// On white-noise data the serial pipeline agrees with the plain one.
fn criterion_6() -> Outcome {
    let series = simulate_sv(SvParams64::new(0.0, 0.01, 0.9, 0.3), 100_000, 0).unwrap();
    let cfg = ForecastConfig64::new(50, 10).with_draws(20_000).with_seed(0);
    let plain = forecast_distribution(&series, &cfg).unwrap();
    let serial = forecast_correlated_distribution(&series, &cfg).unwrap();
    let ks = plain.ks_distance(&serial);
    Outcome::new(ks < 0.03, format!("KS = {ks:.4} (< 0.03), N = 100000"))
}

/// Covariance of bootstrap magnitude forecasts vs. realized future
/// magnitudes over independent replications.
fn criterion_7() -> Outcome {
    let (reps, n_obs, n, horizon) = (2000usize, 1000, 10, 3);
    let mut a_rows = Vec::with_capacity(reps);
    let mut b_rows = Vec::with_capacity(reps);
    for r in 0..reps as u64 {
        let path = SvPath::generate(SvParams64::new(0.0, 0.01, 0.9, 0.3), Shock::Normal, n_obs + horizon, r).unwrap();
        let v = path.returns.values();
        let mu = sample_mean(&v[..n_obs]);
        let m: Vec<f64> = v.iter().map(|x| (x - mu).abs()).collect();
        let model = MagnitudeModel::fit(&m[..n_obs], n, horizon, true).unwrap();
        let pools = model.error_pools(&m[..n_obs]).unwrap();
        let point = model.predict(&m[n_obs - n..n_obs]).unwrap();
        let mut rng = substream(0, Purpose::Bootstrap, r);
        let w = pools.resample_joint(&mut rng);
        a_rows.push((0..horizon).map(|h| point[h] + w[h]).collect::<Vec<_>>());
        b_rows.push(m[n_obs..].to_vec());
    }
    let col_mean = |rows: &[Vec<f64>], h: usize| rows.iter().map(|x| x[h]).sum::<f64>() / reps as f64;
    let mut worst: f64 = 0.0;
    for h in 0..horizon {
        for k in h..horizon {
            let (ah, ak) = (col_mean(&a_rows, h), col_mean(&a_rows, k));
            let (bh, bk) = (col_mean(&b_rows, h), col_mean(&b_rows, k));
            let d: Vec<f64> = (0..reps)
                .map(|i| (a_rows[i][h] - ah) * (a_rows[i][k] - ak) - (b_rows[i][h] - bh) * (b_rows[i][k] - bk))
                .collect();
            let md = sample_mean(&d);
            let sd = (d.iter().map(|x| (x - md).powi(2)).sum::<f64>() / (reps as f64 - 1.0)).sqrt();
            worst = worst.max((md / (sd / (reps as f64).sqrt())).abs());
        }
    }
    Outcome::new(worst < 3.0, format!("max |entry difference| = {worst:.2} SE (< 3) over 6 entries"))
}

/// Sign model: no spurious asymmetry on symmetric data; reconstruction of
/// skewed data.
fn criterion_8() -> Outcome {
    let n_obs = 100_000;
    let sym = standard_normals(n_obs, 8);
    let mu = sample_mean(&sym);
    let centered: Vec<f64> = sym.iter().map(|x| x - mu).collect();
    let model = fit_sign_model(&centered, default_lambda(&centered)).unwrap();
    let worst_bin = model
        .bins()
        .values()
        .map(|b| (b.p_plus() - 0.5).abs() / (0.25 / b.total as f64).sqrt())
        .fold(0.0, f64::max);

    let skewed = skew_normal_shocks(n_obs, 5.0, 8);
    let mu = sample_mean(&skewed);
    let centered: Vec<f64> = skewed.iter().map(|x| x - mu).collect();
    let model = fit_sign_model(&centered, default_lambda(&centered)).unwrap();
    let rebuilt = reconstruct(&model, &centered, 8);
    let ks = ks_two_sample(&centered, &rebuilt);
    Outcome::new(
        worst_bin <= 3.0 && ks < 0.05,
        format!("worst bin p_plus deviation {worst_bin:.2} binomial SE (<= 3), skewed reconstruction KS = {ks:.4} (< 0.05)"),
    )
}

/// VaR/CTE on a large normal sample and on a small exact example.
fn criterion_9() -> Outcome {
    let dist = EmpiricalDistribution::from_samples(standard_normals(1_000_000, 9)).unwrap();
    let var = value_at_risk(&dist, 0.05).unwrap();
    let cte = conditional_tail_expectation(&dist, 0.05).unwrap();
    let small = EmpiricalDistribution::from_samples((1..=20).rev().map(f64::from).collect()).unwrap();
    let exact = value_at_risk(&small, 0.05).unwrap() == 1.0
        && conditional_tail_expectation(&small, 0.05).unwrap() == 1.0
        && value_at_risk(&small, 0.1).unwrap() == 2.0
        && conditional_tail_expectation(&small, 0.1).unwrap() == 1.5;
    let pass = (var + 1.645).abs() <= 0.01 && (cte + 2.063).abs() <= 0.02 && exact;
    Outcome::new(
        pass,
        format!("VaR {var:.4} (-1.645 +- 0.01), CTE {cte:.4} (-2.063 +- 0.02), order statistics exact: {exact}"),
    )
}

fn backtest_setup() -> (ReturnSeries64, ForecastConfig64, BacktestConfig) {
    let horizon = 10;
    let series = simulate_sv(SvParams64::new(0.0, 0.01, 0.9, 0.0), 500 + 200 * horizon, 10).unwrap();
    let fc = ForecastConfig64::new(50, horizon).with_draws(2000);
    let bt = BacktestConfig {
        level: 0.05,
        stride: horizon,
        train: 500,
        horizon,
        seed: 10,
    };
    (series, fc, bt)
}

/// Backtest coverage on iid Gaussian data, and no look-ahead.
fn criterion_10() -> Outcome {
    let (series, fc, bt) = backtest_setup();
    let full = rolling_backtest(&series, &fc, &bt, ForecastMode::WhiteNoise).unwrap();
    let k = full.len();
    let band = 3.0 * (0.05 * 0.95 / k as f64).sqrt();
    let within = (full.coverage - 0.05).abs() <= band;

    let cut = full.origins[100] + bt.horizon;
    let short = rolling_backtest(&series.prefix(cut).unwrap(), &fc, &bt, ForecastMode::WhiteNoise).unwrap();
    let same = short.len() == 101 && short.var[..] == full.var[..101];
    Outcome::new(
        k == 200 && within && same,
        format!(
            "K = {k}, coverage {:.3} (0.05 +- {band:.3}), z = {:.2}, truncated run identical: {same}",
            full.coverage, full.z_score
        ),
    )
}

/// All pipelines are bit-identical at 1 and 8 worker threads.
fn criterion_11() -> Outcome {
    let series = simulate_sv(SvParams64::new(0.0, 0.01, 0.9, 0.3), 3000, 11).unwrap();
    let base = ForecastConfig64::new(30, 10).with_draws(5000).with_seed(11);
    let asym = base.clone().with_signs(SignSpec::Asymmetric { lambda: None });
    let run = |threads: usize| {
        with_threads(threads, || {
            let sim = simulate_sv(SvParams64::new(0.0, 0.01, 0.9, 0.3), 3000, 11).unwrap();
            let a = forecast_distribution(&series, &base).unwrap();
            let b = forecast_distribution(&series, &asym).unwrap();
            let c = forecast_correlated_distribution(&series, &base).unwrap();
            let d = forecast_correlated_distribution(&series, &asym).unwrap();
            let (bs, bfc, bbt) = backtest_setup();
            let e = rolling_backtest(&bs, &bfc, &bbt, ForecastMode::Correlated).unwrap();
            (sim, a, b, c, d, e)
        })
        .unwrap()
    };
    let one = run(1);
    let eight = run(8);
    let bits = |d: &EmpiricalDistribution64| d.samples().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    let checks = [
        ("simulate", one.0.values() == eight.0.values()),
        ("white-noise", bits(&one.1) == bits(&eight.1)),
        ("white-noise asymmetric", bits(&one.2) == bits(&eight.2)),
        ("correlated", bits(&one.3) == bits(&eight.3)),
        ("correlated asymmetric", bits(&one.4) == bits(&eight.4)),
        ("backtest", one.5 == eight.5),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    Outcome::new(
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} pipelines identical at 1 and 8 threads", checks.len())
        } else {
            format!("differs at 1 vs 8 threads: {}", failed.join(", "))
        },
    )
}

fn main() {
    // wall-clock budgets cover the whole check, including data generation
    let secs = |s: u64| Some(Duration::from_secs(s));
    let criteria: [Criterion; 11] = [
        (1, "innovations predictor vs normal equations", criterion_1, secs(1)),
        (2, "sign independence on SV data", criterion_2, secs(5)),
        (3, "iid Gaussian forecast", criterion_3, secs(10)),
        (4, "VaR vs true conditional quantile", criterion_4, secs(120)),
        (5, "serial decomposition identity", criterion_5, secs(5)),
        (6, "serial pipeline on white noise", criterion_6, None),
        (7, "magnitude forecast covariance", criterion_7, None),
        (8, "asymmetric sign model", criterion_8, None),
        (9, "VaR and CTE", criterion_9, None),
        (10, "backtest coverage and no look-ahead", criterion_10, None),
        (11, "thread-count determinism", criterion_11, None),
    ];
    let mut failures = 0;
    for (id, name, check, budget) in criteria {
        let (outcome, elapsed) = timed(|| catch_unwind(AssertUnwindSafe(check)));
        let mut outcome = outcome.unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome::new(false, format!("panicked: {msg}"))
        });
        if budget.is_some_and(|b| elapsed > b) {
            outcome.pass = false;
            outcome.detail += &format!("; over the {:?} budget", budget.unwrap());
        }
        if !outcome.pass {
            failures += 1;
        }
        println!(
            "{} criterion {id:>2} ({name}): {} [{:.1} s]",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failures} failed", 11 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
