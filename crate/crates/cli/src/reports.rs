//! Single-point reports: water level, on-off scheme, energy per nat.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use rician_lowsnr::asymptotics::{
    energy_efficiency, lambda_asymptotic, validity_bound, EnergyMode,
};
use rician_lowsnr::exact::{capacity_exact, g_function, solve_lambda};
use rician_lowsnr::onoff::{
    build_policy, rate, rate_lower_bound, simulate_throughput, ThresholdSource,
};
use rician_lowsnr::{ChannelSpec64, NumericConfig64, RandomStream};

use crate::error::CliResult;
use crate::output::{quantize, quantize_opt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaMethod {
    Exact,
    AsymptoticRefined,
    AsymptoticSimple,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaReport {
    pub method: LambdaMethod,
    pub snr_linear: f64,
    pub lambda: f64,
    pub g_at_lambda: f64,
    /// `|G(λ) - snr| / snr`.
    pub relative_residual: f64,
    pub lambda_exact: Option<f64>,
    pub lambda_asym_refined: Option<f64>,
    pub lambda_asym_simple: Option<f64>,
    pub validity_snr_max: Option<f64>,
}

pub fn lambda_report(
    spec: &ChannelSpec64,
    snr: f64,
    method: LambdaMethod,
    cfg: &NumericConfig64,
) -> CliResult<LambdaReport> {
    let lambda = match method {
        LambdaMethod::Exact => solve_lambda(spec, snr, cfg)?,
        LambdaMethod::AsymptoticRefined => lambda_asymptotic(spec, snr, true)?,
        LambdaMethod::AsymptoticSimple => lambda_asymptotic(spec, snr, false)?,
    };
    let g = if lambda > 0.0 {
        g_function(spec, lambda, cfg)?
    } else {
        f64::INFINITY
    };
    let exact = match method {
        LambdaMethod::Exact => Some(lambda),
        _ => solve_lambda(spec, snr, cfg).ok(),
    };
    Ok(LambdaReport {
        method,
        snr_linear: quantize(snr),
        lambda: quantize(lambda),
        g_at_lambda: quantize(g),
        relative_residual: quantize((g - snr).abs() / snr),
        lambda_exact: quantize_opt(exact),
        lambda_asym_refined: quantize_opt(lambda_asymptotic(spec, snr, true).ok()),
        lambda_asym_simple: quantize_opt(lambda_asymptotic(spec, snr, false).ok()),
        validity_snr_max: quantize_opt(validity_bound(spec)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OnOffReport {
    pub snr_linear: f64,
    pub threshold: f64,
    pub on_power: f64,
    pub active_probability: f64,
    pub rate_npcu: f64,
    pub rate_lower_bound_npcu: f64,
    pub cap_exact_npcu: f64,
    pub rate_over_capacity: f64,
    pub mc_rate_npcu: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub mc_active_fraction: Option<f64>,
    pub mc_slots: Option<u64>,
}

pub fn onoff_report(
    spec: &ChannelSpec64,
    snr: f64,
    source: ThresholdSource,
    mc: Option<(u64, usize)>,
    cfg: &NumericConfig64,
) -> CliResult<OnOffReport> {
    let policy = build_policy(spec, snr, source, cfg)?;
    let r = rate(spec, &policy, cfg)?;
    let c = capacity_exact(spec, snr, cfg)?.capacity_nats;
    let est = match mc {
        Some((seed, slots)) => Some(simulate_throughput(
            spec,
            &policy,
            RandomStream::new(seed, 0),
            slots,
        )?),
        None => None,
    };
    Ok(OnOffReport {
        snr_linear: quantize(snr),
        threshold: quantize(policy.threshold),
        on_power: quantize(policy.on_power),
        active_probability: quantize(policy.active_probability),
        rate_npcu: quantize(r),
        rate_lower_bound_npcu: quantize(rate_lower_bound(&policy)),
        cap_exact_npcu: quantize(c),
        rate_over_capacity: quantize(r / c),
        mc_rate_npcu: quantize_opt(est.map(|e| e.rate_estimate)),
        mc_stderr: quantize_opt(est.map(|e| e.stderr)),
        mc_active_fraction: quantize_opt(est.map(|e| e.active_fraction)),
        mc_slots: est.map(|e| e.slots),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyRow {
    pub snr_db: f64,
    pub snr_linear: f64,
    pub ee_csitr_exact: Option<f64>,
    pub ee_csitr_asymptotic: Option<f64>,
    pub ee_csir: f64,
}

pub fn energy_rows(
    spec: &ChannelSpec64,
    grid_db: &[f64],
    cfg: &NumericConfig64,
) -> CliResult<Vec<EnergyRow>> {
    use rayon::prelude::*;
    grid_db
        .par_iter()
        .map(|&db| {
            let snr = 10f64.powf(db / 10.0);
            Ok(EnergyRow {
                snr_db: quantize(db),
                snr_linear: quantize(snr),
                ee_csitr_exact: quantize_opt(
                    energy_efficiency(spec, snr, EnergyMode::CsitrExact, cfg).ok(),
                ),
                ee_csitr_asymptotic: quantize_opt(
                    energy_efficiency(spec, snr, EnergyMode::CsitrAsymptotic, cfg).ok(),
                ),
                ee_csir: quantize(energy_efficiency(spec, snr, EnergyMode::Csir, cfg)?),
            })
        })
        .collect()
}
