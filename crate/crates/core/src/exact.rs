//! Exact capacity with channel state information at transmitter and receiver.
//!
//! The optimal power policy is water-filling, `P(γ) = (1/λ - 1/γ)⁺`, with the
//! level `λ` fixed by the average-power constraint `G(λ) = SNR` where
//! `G(λ) = E[(1/λ - 1/γ)⁺]`. The capacity is `∫_λ^∞ ln(x/λ) f_γ(x) dx`.

use crate::channel::{expectation_above, ChannelSpec};
use crate::error::{domain, Result};
use crate::scalar::{cst, Real};
use crate::specfun::{solve_monotone_decreasing, NumericConfig};

/// How a capacity figure was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    AsymptoticRegime,
    AsymptoticSimple,
    AwgnLimit,
    OnOff,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::AsymptoticRegime => "asymptotic_regime",
            Method::AsymptoticSimple => "asymptotic_simple",
            Method::AwgnLimit => "awgn_limit",
            Method::OnOff => "onoff",
        }
    }
}

/// Operating point of a power policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaterfillSolution<T> {
    pub snr: T,
    /// Water level `λ`. Asymptotic forms may return `0` at `snr = 1`.
    pub lambda: T,
    /// Ergodic capacity (or rate) in nats per channel use.
    pub capacity_nats: T,
    pub method: Method,
    /// `false` when the point lies outside the regime the method is meant for.
    pub in_regime: bool,
}

/// `(1/λ - 1/γ)⁺`.
pub fn waterfill_power<T: Real>(lambda: T, gamma: T) -> Result<T> {
    if !(lambda > T::zero()) || !(gamma > T::zero()) {
        return Err(domain(
            "waterfill_power",
            format!("lambda = {lambda} and gamma = {gamma} must be > 0"),
        ));
    }
    Ok((lambda.recip() - gamma.recip()).max(T::zero()))
}

/// `G(λ) = E[(1/λ - 1/γ)⁺]`, strictly decreasing in `λ`.
pub fn g_function<T: Real>(spec: &ChannelSpec<T>, lambda: T, cfg: &NumericConfig<T>) -> Result<T> {
    if !(lambda > T::zero()) {
        return Err(domain(
            "g_function",
            format!("lambda = {lambda} must be > 0"),
        ));
    }
    expectation_above(spec, lambda, |x| (x - lambda) / (lambda * x), cfg)
}

/// Tolerances tightened so that absolute floors do not dominate at tiny `snr`.
fn scaled_config<T: Real>(snr: T, cfg: &NumericConfig<T>) -> NumericConfig<T> {
    let mut scaled = *cfg;
    scaled.abs_tol = cfg.abs_tol.min(cfg.rel_tol * snr * cst(0.01));
    scaled
}

/// Initial guess for the water level.
fn lambda_seed<T: Real>(spec: &ChannelSpec<T>, snr: T) -> T {
    let awgn = (snr + spec.mean().recip()).recip();
    if snr < (-T::one()).exp() {
        awgn.max(snr.recip().ln() / spec.decay_rate())
    } else {
        awgn
    }
}

/// Water level `λ` with `|G(λ) - snr| <= rel_tol · snr`.
pub fn solve_lambda<T: Real>(spec: &ChannelSpec<T>, snr: T, cfg: &NumericConfig<T>) -> Result<T> {
    if !(snr > T::zero()) || !snr.is_finite() {
        return Err(domain(
            "solve_lambda",
            format!("snr = {snr} must be finite and > 0"),
        ));
    }
    let scaled = scaled_config(snr, cfg);
    solve_monotone_decreasing(
        |l| g_function(spec, l, &scaled),
        snr,
        lambda_seed(spec, snr),
        &scaled,
    )
}

/// `∫_λ^∞ ln(x/λ) f_γ(x) dx` for a given water level.
pub fn capacity_at_lambda<T: Real>(
    spec: &ChannelSpec<T>,
    lambda: T,
    cfg: &NumericConfig<T>,
) -> Result<T> {
    if !(lambda > T::zero()) {
        return Err(domain(
            "capacity_at_lambda",
            format!("lambda = {lambda} must be > 0"),
        ));
    }
    expectation_above(spec, lambda, |x| (x / lambda).ln(), cfg)
}

/// Water-filling capacity at `snr` (any positive value, no regime restriction).
pub fn capacity_exact<T: Real>(
    spec: &ChannelSpec<T>,
    snr: T,
    cfg: &NumericConfig<T>,
) -> Result<WaterfillSolution<T>> {
    let lambda = solve_lambda(spec, snr, cfg)?;
    let scaled = scaled_config(snr, cfg);
    let capacity = capacity_at_lambda(spec, lambda, &scaled)?;
    Ok(WaterfillSolution {
        snr,
        lambda,
        capacity_nats: capacity.max(T::zero()),
        method: Method::Exact,
        in_regime: true,
    })
}

/// `E[ln(1 + snr · γ)]`: constant power, channel known at the receiver only.
pub fn capacity_constant_power<T: Real>(
    spec: &ChannelSpec<T>,
    snr: T,
    cfg: &NumericConfig<T>,
) -> Result<T> {
    if !(snr > T::zero()) {
        return Err(domain(
            "capacity_constant_power",
            format!("snr = {snr} must be > 0"),
        ));
    }
    let scaled = scaled_config(snr, cfg);
    expectation_above(spec, T::zero(), |x| (snr * x).ln_1p(), &scaled)
}
