//! Self-check suite behind the `validate` subcommand.

use clap::ValueEnum;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rician_lowsnr::asymptotics::{energy_efficiency, EnergyMode};
use rician_lowsnr::channel::{
    ccdf_gamma, cdf_at_sorted, cdf_gamma, expectation_above, mean_gamma_quadrature, GainSampler,
};
use rician_lowsnr::exact::{
    capacity_constant_power, capacity_exact, g_function, solve_lambda, waterfill_power,
};
use rician_lowsnr::onoff::{
    build_policy, rate, rate_lower_bound, simulate_throughput, ThresholdSource,
};
use rician_lowsnr::specfun::{bessel_i_scaled, lambert_w0, lambert_wm1, upper_gamma_regularized};
use rician_lowsnr::stats::{ks_critical_value, ks_statistic, RunningStats};
use rician_lowsnr::{ChannelSpec64, NumericConfig64, RandomStream};

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    /// Analytic and quadrature checks.
    Fast,
    /// Adds the Monte Carlo checks.
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub level: Level,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Knobs for the suite. `omega_scale != 1` mis-scales the channel used by the
/// moment check, so that check must fail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateOptions {
    pub level: Level,
    pub seed: u64,
    pub omega_scale: f64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            level: Level::Fast,
            seed: 42,
            omega_scale: 1.0,
        }
    }
}

pub const L_GRID: [u32; 5] = [1, 2, 3, 4, 6];
pub const K_GRID: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0];
pub const OMEGA_GRID: [f64; 3] = [0.5, 1.0, 2.0];

pub fn spec_grid() -> Vec<ChannelSpec64> {
    let mut out = Vec::with_capacity(90);
    for &l in &L_GRID {
        for &k in &K_GRID {
            for &omega in &OMEGA_GRID {
                out.push(ChannelSpec64::new(k, l, omega).expect("grid values are valid"));
            }
        }
    }
    out
}

/// Eight grid points spread over `L`, `K` and `Ω` for the sampling checks.
pub fn ks_specs() -> Vec<ChannelSpec64> {
    [
        (0.0, 1, 1.0),
        (1.0, 3, 1.0),
        (2.0, 2, 1.0),
        (1.0, 4, 1.0),
        (0.5, 2, 0.5),
        (5.0, 6, 2.0),
        (10.0, 1, 1.0),
        (2.0, 3, 2.0),
    ]
    .iter()
    .map(|&(k, l, o)| ChannelSpec64::new(k, l, o).expect("valid"))
    .collect()
}

const REPRESENTATIVE: [(f64, u32, f64); 4] =
    [(1.0, 3, 1.0), (2.0, 2, 1.0), (0.0, 1, 1.0), (1.0, 4, 1.0)];

fn check(name: &str, value: f64, tolerance: f64, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed: value <= tolerance,
        value,
        tolerance,
        detail: detail.into(),
    }
}

fn failed(name: &str, err: impl std::fmt::Display) -> Check {
    Check {
        name: name.into(),
        passed: false,
        value: f64::NAN,
        tolerance: 0.0,
        detail: err.to_string(),
    }
}

fn max_over<I: Iterator<Item = rician_lowsnr::Result<f64>>>(
    mut it: I,
) -> rician_lowsnr::Result<f64> {
    it.try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))
}

/// `|W e^W - x| / max(1, |x|)` over 10⁴ points of each branch.
pub fn lambert_residual_max(points: usize) -> rician_lowsnr::Result<f64> {
    let inv_e = (-1.0f64).exp();
    let mut worst = 0.0f64;
    for i in 0..points {
        let t = i as f64 / (points - 1).max(1) as f64;
        let x0 = if i % 2 == 0 {
            10f64.powf(-300.0 + 600.0 * t)
        } else {
            -inv_e * 10f64.powf(-300.0 * t)
        };
        let xm = -inv_e * 10f64.powf(-300.0 * t);
        for (x, w) in [(x0, lambert_w0(x0)?), (xm, lambert_wm1(xm)?)] {
            worst = worst.max((w * w.exp() - x).abs() / x.abs().max(1.0));
        }
    }
    Ok(worst)
}

/// Largest gap between the regularized upper incomplete gamma and the
/// explicit finite sum `e^(-x) Σ_{k<s} x^k / k!`.
pub fn incomplete_gamma_gap_max() -> rician_lowsnr::Result<f64> {
    let mut worst = 0.0f64;
    for s in 1..=30u32 {
        for i in 0..=120 {
            let x = 0.25 * i as f64;
            let mut term = 1.0;
            let mut sum = 1.0;
            for k in 1..s {
                term *= x / k as f64;
                sum += term;
            }
            let expected = (-x).exp() * sum;
            worst = worst.max((upper_gamma_regularized(s, x)? - expected).abs());
        }
    }
    Ok(worst)
}

fn fast_checks(opts: &ValidateOptions, cfg: &NumericConfig64) -> Vec<Check> {
    let grid = spec_grid();
    let mut out = Vec::new();

    out.push(match lambert_residual_max(10_000) {
        Ok(v) => check(
            "lambert_residual",
            v,
            1e-12,
            "both branches, 10^4 points each",
        ),
        Err(e) => failed("lambert_residual", e),
    });
    out.push(match incomplete_gamma_gap_max() {
        Ok(v) => check(
            "incomplete_gamma_finite_sum",
            v,
            1e-13,
            "s = 1..30, x in [0, 30]",
        ),
        Err(e) => failed("incomplete_gamma_finite_sum", e),
    });
    out.push({
        #[allow(clippy::excessive_precision)]
        let refs = [
            (0, 1.0, 0.4657596075936404365),
            (2, 10.0, 0.10358080088653750358),
            (9, 400.0, 0.01802977864853516228),
        ];
        match max_over(
            refs.iter()
                .map(|&(n, x, v)| bessel_i_scaled(n, x).map(|b: f64| ((b - v) / v).abs())),
        ) {
            Ok(v) => check(
                "scaled_bessel_reference",
                v,
                1e-12,
                "relative error at reference points",
            ),
            Err(e) => failed("scaled_bessel_reference", e),
        }
    });

    let norm = max_over(
        grid.par_iter()
            .map(|s| expectation_above(s, 0.0, |_| 1.0, cfg).map(|v| (v - 1.0).abs()))
            .collect::<Vec<_>>()
            .into_iter(),
    );
    out.push(match norm {
        Ok(v) => check("pdf_normalization", v, 1e-8, "90-point (K, L, omega) grid"),
        Err(e) => failed("pdf_normalization", e),
    });

    let scale = opts.omega_scale;
    let moment = max_over(
        grid.par_iter()
            .map(|s| {
                let nominal = s.l() as f64 * s.omega();
                let probe = s.with_omega(s.omega() * scale)?;
                mean_gamma_quadrature(&probe, cfg).map(|m| ((m - nominal) / nominal).abs())
            })
            .collect::<Vec<_>>()
            .into_iter(),
    );
    out.push(match moment {
        Ok(v) => check(
            "first_moment",
            v,
            1e-6,
            format!("relative error vs L*omega, omega scale {scale}"),
        ),
        Err(e) => failed("first_moment", e),
    });

    let complement = max_over(
        grid.par_iter()
            .map(|s| {
                max_over([0.3, 1.0, 2.5].iter().map(|&t| {
                    let x = t * s.mean();
                    Ok((ccdf_gamma(s, x, cfg)? - (1.0 - cdf_gamma(s, x, cfg)?)).abs())
                }))
            })
            .collect::<Vec<_>>()
            .into_iter(),
    );
    out.push(match complement {
        Ok(v) => check("ccdf_complement", v, 1e-8, "ccdf + cdf = 1"),
        Err(e) => failed("ccdf_complement", e),
    });

    let round_trip = max_over(
        grid.par_iter()
            .map(|s| {
                max_over([1e-1, 1e-2, 1e-3, 1e-4, 1e-5].iter().map(|&snr| {
                    let lambda = solve_lambda(s, snr, cfg)?;
                    Ok((g_function(s, lambda, cfg)? - snr).abs() / snr)
                }))
            })
            .collect::<Vec<_>>()
            .into_iter(),
    );
    out.push(match round_trip {
        Ok(v) => check(
            "waterfill_round_trip",
            v,
            1e-8,
            "|G(lambda) - snr| / snr, snr 1e-1..1e-5",
        ),
        Err(e) => failed("waterfill_round_trip", e),
    });

    let dominance = max_over(REPRESENTATIVE.iter().flat_map(|&(k, l, o)| {
        [1e-4, 1e-2, 1.0].into_iter().map(move |snr| {
            let s = ChannelSpec64::new(k, l, o)?;
            let c = capacity_exact(&s, snr, cfg)?.capacity_nats;
            let csir = capacity_constant_power(&s, snr, cfg)?;
            let policy = build_policy(&s, snr, ThresholdSource::ExactLambda, cfg)?;
            let r = rate(&s, &policy, cfg)?;
            let lb = rate_lower_bound(&policy);
            // positive parts are violations
            Ok(((csir - c) / c).max((r - c) / c).max((lb - r) / r).max(0.0))
        })
    }));
    out.push(match dominance {
        Ok(v) => check(
            "capacity_dominance",
            v,
            1e-9,
            "lower bound <= on-off <= capacity, constant power <= capacity",
        ),
        Err(e) => failed("capacity_dominance", e),
    });

    out.push(
        match ChannelSpec64::new(1e4, 3, 1.0).and_then(|s| capacity_exact(&s, 1e-3, cfg)) {
            Ok(sol) => check(
                "awgn_limit",
                (sol.capacity_nats / 3e-3 - 1.0).abs(),
                0.05,
                "K = 1e4, L = 3, snr = 1e-3",
            ),
            Err(e) => failed("awgn_limit", e),
        },
    );

    let energy = max_over(
        grid.par_iter()
            .map(|s| {
                let csitr = energy_efficiency(s, 1e-3, EnergyMode::CsitrExact, cfg)?;
                let csir = energy_efficiency(s, 1e-3, EnergyMode::Csir, cfg)?;
                Ok(csitr / csir)
            })
            .collect::<Vec<_>>()
            .into_iter(),
    );
    out.push(match energy {
        Ok(v) => Check {
            name: "energy_ordering".into(),
            passed: v < 1.0,
            value: v,
            tolerance: 1.0,
            detail: "max csitr / csir at snr = 1e-3 over the grid (must be < 1)".into(),
        },
        Err(e) => failed("energy_ordering", e),
    });
    out
}

fn full_checks(opts: &ValidateOptions, cfg: &NumericConfig64) -> Vec<Check> {
    let mut out = Vec::new();
    let n = 1_000_000;
    let critical = ks_critical_value(0.01, n);
    let ks: Vec<rician_lowsnr::Result<f64>> = ks_specs()
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut xs: Vec<f64> = GainSampler::new(*s, RandomStream::new(opts.seed, i as u64))
                .take(n)
                .map(|g| g.gamma)
                .collect();
            xs.sort_by(f64::total_cmp);
            Ok(ks_statistic(&cdf_at_sorted(s, &xs, cfg)?))
        })
        .collect();
    out.push(match max_over(ks.into_iter()) {
        Ok(v) => check(
            "sampler_ks",
            v,
            critical,
            "max KS statistic over 8 grid points, 10^6 draws, 1% level",
        ),
        Err(e) => failed("sampler_ks", e),
    });

    let spec = ChannelSpec64::new(1.0, 3, 1.0).expect("valid");
    let mc = (|| {
        let policy = build_policy(&spec, 1e-2, ThresholdSource::ExactLambda, cfg)?;
        let est =
            simulate_throughput(&spec, &policy, RandomStream::new(opts.seed, 100), 1_000_000)?;
        let r = rate(&spec, &policy, cfg)?;
        Ok::<_, rician_lowsnr::Error>((
            (est.rate_estimate - r).abs() / est.stderr,
            est.rate_estimate,
        ))
    })();
    out.push(match mc {
        Ok((z, est)) => check(
            "onoff_monte_carlo",
            z,
            4.0,
            format!("|MC - quadrature| / stderr, MC rate {est:.9e}"),
        ),
        Err(e) => failed("onoff_monte_carlo", e),
    });

    let g_mc = (|| {
        let g = g_function(&spec, 5.0, cfg)?;
        let stats: RunningStats = GainSampler::new(spec, RandomStream::new(opts.seed, 101))
            .take(10_000_000)
            .map(|s| waterfill_power(5.0, s.gamma).unwrap_or(0.0))
            .collect();
        Ok::<_, rician_lowsnr::Error>(((stats.mean() - g).abs() / stats.std_error(), stats.mean()))
    })();
    out.push(match g_mc {
        Ok((z, mean)) => check(
            "g_monte_carlo",
            z,
            4.0,
            format!("|MC - quadrature| / stderr at lambda = 5, MC mean {mean:.9e}"),
        ),
        Err(e) => failed("g_monte_carlo", e),
    });
    out
}

pub fn run_validation(
    opts: &ValidateOptions,
    cfg: &NumericConfig64,
) -> CliResult<ValidationReport> {
    let mut checks = fast_checks(opts, cfg);
    if opts.level == Level::Full {
        checks.extend(full_checks(opts, cfg));
    }
    Ok(ValidationReport {
        level: opts.level,
        seed: opts.seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}
